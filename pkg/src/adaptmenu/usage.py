"""Append-only usage event log and per-item selection statistics.

Events live in a single ordered log with non-decreasing timestamps.
Only `select` events feed the statistics; the other kinds record pin,
panel, and view-mode activity for replay. The log file format is one
event per line:

    <t> <session> <kind> <menu-id>[/<node-id>]

Selection recency and frequency use exponential half-life decay; the
hour histogram supports time-of-day affinity. The incremental decayed
counter kept on ItemStats agrees with direct summation over the log to
floating point accuracy.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Mapping

DEFAULT_HALF_LIFE_F = 604800.0  # seven days, in seconds
DEFAULT_HALF_LIFE_R = 86400.0   # one day

SELECT = "select"
EXPAND = "expand"
COLLAPSE = "collapse"
PIN_MENU = "pin_menu"
UNPIN_MENU = "unpin_menu"
PIN_ITEM = "pin_item"
UNPIN_ITEM = "unpin_item"
PANEL_EXPAND = "panel_expand"
PANEL_CONTRACT = "panel_contract"

NODE_KINDS = frozenset({SELECT, PIN_ITEM, UNPIN_ITEM, PANEL_EXPAND, PANEL_CONTRACT})
MENU_KINDS = frozenset({EXPAND, COLLAPSE, PIN_MENU, UNPIN_MENU})
KINDS = NODE_KINDS | MENU_KINDS

_TOKEN_RE = re.compile(r"[A-Za-z0-9_.-]+\Z")


def hour_of(t: int, tz_offset: int = 0) -> int:
    """Hour-of-day bucket 0..23 for a unix timestamp under a fixed offset."""
    return ((t + tz_offset) % 86400) // 3600


class OutOfOrderEvent(Exception):
    """Append rejected: the log only moves forward in time."""

    kind = "out-of-order"

    def __init__(self, t_new: int, t_last: int):
        super().__init__(f"event at t={t_new} precedes log tail t={t_last}")
        self.t_new = t_new
        self.t_last = t_last


class LogParseError(Exception):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


@dataclass(frozen=True)
class UsageEvent:
    t: int
    session: str
    kind: str
    menu: str
    node: str | None = None

    def __post_init__(self):
        if not isinstance(self.t, int) or self.t < 0:
            raise ValueError(f"bad timestamp {self.t!r}")
        if self.kind not in KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}")
        for name, val in (("session", self.session), ("menu", self.menu)):
            if not _TOKEN_RE.match(val or ""):
                raise ValueError(f"bad {name} {val!r}")
        if self.kind in NODE_KINDS:
            if self.node is None or not _TOKEN_RE.match(self.node):
                raise ValueError(f"{self.kind} requires a node id, got {self.node!r}")
        elif self.node is not None:
            raise ValueError(f"{self.kind} takes no node id")


@dataclass
class ItemStats:
    """Running selection statistics for one (menu, node)."""

    count: int = 0
    last_t: int | None = None
    hour_counts: list = field(default_factory=lambda: [0] * 24)
    decayed_f: float = 0.0
    decayed_f_at: int = 0


class UsageLog:
    """Ordered event log with incremental stats. Single writer; treat appends
    as externally serialized."""

    def __init__(self, half_life_f: float = DEFAULT_HALF_LIFE_F, tz_offset: int = 0):
        if half_life_f <= 0:
            raise ValueError("half_life_f must be positive")
        self.half_life_f = float(half_life_f)
        self.tz_offset = int(tz_offset)
        self.events: list[UsageEvent] = []
        self.stats: dict[tuple[str, str], ItemStats] = {}

    @property
    def last_t(self) -> int | None:
        return self.events[-1].t if self.events else None

    def record(self, event: UsageEvent) -> None:
        last = self.last_t
        if last is not None and event.t < last:
            raise OutOfOrderEvent(event.t, last)
        self.events.append(event)
        if event.kind != SELECT:
            return
        key = (event.menu, event.node)
        st = self.stats.get(key)
        if st is None:
            st = self.stats[key] = ItemStats()
        dt = event.t - st.decayed_f_at
        st.decayed_f = st.decayed_f * 2.0 ** (-dt / self.half_life_f) + 1.0
        st.decayed_f_at = event.t
        st.count += 1
        st.last_t = event.t
        st.hour_counts[hour_of(event.t, self.tz_offset)] += 1

    def stats_for(self, menu: str, node: str) -> ItemStats | None:
        return self.stats.get((menu, node))


# ------------------------------------------------------- batch factor ops

def decayed_frequency(log: UsageLog, menu: str, node: str, t: int,
                      half_life: float = DEFAULT_HALF_LIFE_F) -> float:
    """Sum of 2^(-(t - t_e)/half_life) over this node's select events."""
    if half_life <= 0:
        raise ValueError("half_life must be positive")
    last = log.last_t
    if last is not None and t < last:
        raise ValueError(f"t={t} precedes log tail t={last}")
    total = 0.0
    for e in log.events:
        if e.kind == SELECT and e.menu == menu and e.node == node:
            total += 2.0 ** (-(t - e.t) / half_life)
    return total


def recency(log: UsageLog, menu: str, node: str, t: int,
            half_life: float = DEFAULT_HALF_LIFE_R) -> float:
    """2^(-(t - last select)/half_life), or 0.0 if never selected."""
    if half_life <= 0:
        raise ValueError("half_life must be positive")
    last = None
    for e in log.events:
        if e.kind == SELECT and e.menu == menu and e.node == node:
            last = e.t
    if last is None:
        return 0.0
    if t < last:
        raise ValueError(f"t={t} precedes last selection t={last}")
    return 2.0 ** (-(t - last) / half_life)


def time_affinity(log: UsageLog, menu: str, node: str, t: int, tz_offset: int = 0) -> float:
    """Share of this node's selections that fell in t's hour-of-day bucket."""
    counts = [0] * 24
    total = 0
    for e in log.events:
        if e.kind == SELECT and e.menu == menu and e.node == node:
            counts[hour_of(e.t, tz_offset)] += 1
            total += 1
    if total == 0:
        return 0.0
    return counts[hour_of(t, tz_offset)] / total


@dataclass(frozen=True)
class FactorRow:
    f: float
    f_hat: float
    r: float
    tau: float
    count: int
    last_t: int


@dataclass(frozen=True)
class Snapshot:
    """Immutable per-node factor table at one instant. Safe to share."""

    at: int
    rows: Mapping

    def row(self, menu: str, node: str) -> FactorRow | None:
        return self.rows.get((menu, node))


def snapshot(log: UsageLog, t: int, config) -> Snapshot:
    """Factor table at time t. `config` supplies half_life_f, half_life_r,
    tz_offset. Pure in (log events, t, config)."""
    last = log.last_t
    if last is not None and t < last:
        raise ValueError(f"t={t} precedes log tail t={last}")
    h_f = config.half_life_f
    h_r = config.half_life_r
    tz = config.tz_offset
    acc: dict[tuple[str, str], ItemStats] = {}
    for e in log.events:
        if e.kind != SELECT:
            continue
        key = (e.menu, e.node)
        st = acc.get(key)
        if st is None:
            st = acc[key] = ItemStats()
        dt = e.t - st.decayed_f_at
        st.decayed_f = st.decayed_f * 2.0 ** (-dt / h_f) + 1.0
        st.decayed_f_at = e.t
        st.count += 1
        st.last_t = e.t
        st.hour_counts[hour_of(e.t, tz)] += 1

    hour = hour_of(t, tz)
    f_by_key = {
        key: st.decayed_f * 2.0 ** (-(t - st.decayed_f_at) / h_f)
        for key, st in acc.items()
    }
    f_max = max(f_by_key.values(), default=0.0)
    rows = {}
    for key, st in acc.items():
        f = f_by_key[key]
        rows[key] = FactorRow(
            f=f,
            f_hat=f / f_max if f_max > 0 else 0.0,
            r=2.0 ** (-(t - st.last_t) / h_r),
            tau=st.hour_counts[hour] / st.count,
            count=st.count,
            last_t=st.last_t,
        )
    return Snapshot(at=t, rows=rows)


# ------------------------------------------------------------- log files

def format_event(e: UsageEvent) -> str:
    ref = e.menu if e.node is None else f"{e.menu}/{e.node}"
    return f"{e.t} {e.session} {e.kind} {ref}"


def parse_event_line(line: str, lineno: int) -> UsageEvent:
    parts = line.split()
    if len(parts) != 4:
        raise LogParseError(lineno, f"expected 4 fields, got {len(parts)}")
    t_raw, session, kind, ref = parts
    try:
        t = int(t_raw)
    except ValueError:
        raise LogParseError(lineno, f"bad timestamp {t_raw!r}") from None
    menu, sep, node = ref.partition("/")
    try:
        return UsageEvent(t=t, session=session, kind=kind, menu=menu,
                          node=node if sep else None)
    except ValueError as exc:
        raise LogParseError(lineno, str(exc)) from None


def parse_log(text: str, half_life_f: float = DEFAULT_HALF_LIFE_F,
              tz_offset: int = 0) -> UsageLog:
    log = UsageLog(half_life_f=half_life_f, tz_offset=tz_offset)
    for lineno, raw in enumerate(text.splitlines(), 1):
        if not raw.strip():
            continue
        event = parse_event_line(raw, lineno)
        try:
            log.record(event)
        except OutOfOrderEvent as exc:
            raise LogParseError(lineno, str(exc)) from None
    return log


def load_log(path: str, half_life_f: float = DEFAULT_HALF_LIFE_F,
             tz_offset: int = 0) -> UsageLog:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_log(fh.read(), half_life_f=half_life_f, tz_offset=tz_offset)


def write_log(path: str, events) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        for e in events:
            fh.write(format_event(e) + "\n")


def append_event(path: str, e: UsageEvent) -> None:
    with open(path, "a", encoding="utf-8") as fh:
        fh.write(format_event(e) + "\n")
        fh.flush()
