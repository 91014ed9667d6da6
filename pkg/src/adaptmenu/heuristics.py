"""Scoring configuration and usage-based ranking.

A node's score is a convex combination of three factors taken from a
usage snapshot: normalized decayed frequency, recency, and hour-of-day
affinity. Weights default to 0.5/0.3/0.2 and must sum to one, so scores
stay in [0, 1]. Rank order is total and deterministic: score descending,
then last selection descending (never-selected last), then definition
order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence

from .usage import DEFAULT_HALF_LIFE_F, DEFAULT_HALF_LIFE_R, Snapshot

ARRANGEMENT_STABLE = "stable"
ARRANGEMENT_RANKED = "ranked"
ARRANGEMENTS = (ARRANGEMENT_STABLE, ARRANGEMENT_RANKED)

_WEIGHT_TOL = 1e-9


class ConfigError(Exception):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


@dataclass(frozen=True)
class HeuristicConfig:
    w_f: float = 0.5
    w_r: float = 0.3
    w_t: float = 0.2
    half_life_f: float = DEFAULT_HALF_LIFE_F
    half_life_r: float = DEFAULT_HALF_LIFE_R
    k: int = 8
    arrangement: str = ARRANGEMENT_STABLE
    tz_offset: int = 0

    def __post_init__(self):
        for name in ("w_f", "w_r", "w_t"):
            if getattr(self, name) < 0:
                raise ValueError(f"{name} must be non-negative")
        total = self.w_f + self.w_r + self.w_t
        if abs(total - 1.0) > _WEIGHT_TOL:
            raise ValueError(f"weights must sum to 1, got {total}")
        if self.half_life_f <= 0 or self.half_life_r <= 0:
            raise ValueError("half lives must be positive")
        if not isinstance(self.k, int) or self.k < 0:
            raise ValueError(f"k must be a non-negative integer, got {self.k!r}")
        if self.arrangement not in ARRANGEMENTS:
            raise ValueError(f"arrangement must be stable or ranked, got {self.arrangement!r}")


DEFAULT_CONFIG = HeuristicConfig()

_CONFIG_KEYS = ("w_f", "w_r", "w_t", "half_life_f", "half_life_r", "k", "arrangement", "tz_offset")


def parse_config(text: str) -> HeuristicConfig:
    """Parse `key value` lines. Unknown keys are errors; missing keys default."""
    values = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if len(parts) != 2:
            raise ConfigError(lineno, f"expected 'key value', got {stripped!r}")
        key, val = parts
        if key not in _CONFIG_KEYS:
            raise ConfigError(lineno, f"unknown key {key!r}")
        if key in values:
            raise ConfigError(lineno, f"duplicate key {key!r}")
        try:
            if key in ("w_f", "w_r", "w_t", "half_life_f", "half_life_r"):
                values[key] = float(val)
            elif key in ("k", "tz_offset"):
                values[key] = int(val)
            else:
                values[key] = val
        except ValueError:
            raise ConfigError(lineno, f"bad value for {key}: {val!r}") from None
    try:
        return HeuristicConfig(**values)
    except ValueError as exc:
        raise ConfigError(0, str(exc)) from None


def load_config(path: str) -> HeuristicConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


@dataclass(frozen=True)
class Score:
    node: str
    f_hat: float
    r: float
    tau: float
    s: float


def score(snap: Snapshot, menu: str, node: str, config: HeuristicConfig = DEFAULT_CONFIG) -> Score:
    """Score one node from a snapshot. Unknown nodes score all zeros."""
    row = snap.row(menu, node)
    if row is None:
        return Score(node=node, f_hat=0.0, r=0.0, tau=0.0, s=0.0)
    s = config.w_f * row.f_hat + config.w_r * row.r + config.w_t * row.tau
    return Score(node=node, f_hat=row.f_hat, r=row.r, tau=row.tau, s=s)


def rank(snap: Snapshot, menu: str, nodes: Sequence[str],
         config: HeuristicConfig = DEFAULT_CONFIG) -> list[Score]:
    """Order nodes of one menu: s desc, last_t desc (none last), then the
    given definition order. `nodes` must be in definition order."""
    scored = []
    for index, node in enumerate(nodes):
        sc = score(snap, menu, node, config)
        row = snap.row(menu, node)
        last_key = -row.last_t if row is not None else math.inf
        scored.append(((-sc.s, last_key, index), sc))
    scored.sort(key=lambda pair: pair[0])
    return [sc for _key, sc in scored]
