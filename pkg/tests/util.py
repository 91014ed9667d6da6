"""Shared generators and independent oracles for the test suite.

The brute_* functions recompute every statistic straight from the event
list and the closed-form definitions, sharing no code with the package
internals, so agreement between the two routes is evidence rather than
tautology.
"""

from __future__ import annotations

import functools
import random

from adaptmenu.model import (
    Item,
    Menu,
    MenuDefinition,
    Panel,
    Separator,
    SubmenuLink,
    iter_nodes,
)
from adaptmenu.usage import SELECT, UsageEvent

_WORDS = (
    "Open", "Save", "Copy", "Paste", "Cut", "Find", "Replace", "Print",
    "Zoom", "Undo", "Redo", "Export", "Share", "Sync", "Trim", "Align",
)


def _label(rng: random.Random) -> str:
    n = rng.randint(1, 3)
    return " ".join(rng.choice(_WORDS) for _ in range(n))


def _node_id(rng: random.Random, counter: int) -> str:
    base = f"n{counter}"
    deco = rng.random()
    if deco < 0.15:
        return f"{base}.sub"
    if deco < 0.25:
        return f"{base}-x"
    if deco < 0.3:
        return f"{base}_y"
    return base


def _tier(rng: random.Random) -> str:
    return "core" if rng.random() < 0.2 else "adaptive"


def random_definition(rng: random.Random, max_nodes: int = 50) -> MenuDefinition:
    """A valid definition: per-menu unique ids, only forward submenu
    links (so the link graph is a DAG), panels hold items/seps only."""
    n_menus = rng.randint(1, 4)
    budget = rng.randint(1, max_nodes)
    counter = 0
    menus = []
    for mi in range(n_menus):
        nodes = []
        n_nodes = rng.randint(0, max(1, budget // n_menus))
        for _ in range(n_nodes):
            counter += 1
            own = counter
            roll = rng.random()
            if roll < 0.55:
                nodes.append(Item(_node_id(rng, own), _label(rng),
                                  f"act.a{own}", _tier(rng)))
            elif roll < 0.65:
                nodes.append(Separator())
            elif roll < 0.82:
                children = []
                for _ in range(rng.randint(0, 4)):
                    counter += 1
                    if rng.random() < 0.85:
                        children.append(Item(_node_id(rng, counter), _label(rng),
                                             f"act.a{counter}", _tier(rng)))
                    else:
                        children.append(Separator())
                default = "expanded" if rng.random() < 0.5 else "contracted"
                nodes.append(Panel(_node_id(rng, own), _label(rng),
                                   default, tuple(children)))
            elif mi + 1 < n_menus:
                target = f"m{rng.randint(mi + 1, n_menus - 1)}"
                nodes.append(SubmenuLink(_node_id(rng, own), _label(rng),
                                         target, _tier(rng)))
            else:
                nodes.append(Item(_node_id(rng, own), _label(rng),
                                  f"act.a{own}", _tier(rng)))
        menus.append(Menu(f"m{mi}", _label(rng), tuple(nodes)))
    return MenuDefinition(tuple(menus))


def selectable_paths(defn: MenuDefinition) -> list[tuple[str, str]]:
    out = []
    for menu in defn.menus:
        for node, _panel in iter_nodes(menu):
            if isinstance(node, (Item, SubmenuLink)):
                out.append((menu.id, node.id))
    return out


def random_events(rng: random.Random, defn: MenuDefinition, n: int,
                  t0: int = 1_700_000_000, max_gap: int = 7200,
                  session: str = "s1") -> list[UsageEvent]:
    """Non-decreasing select events over the definition's selectable nodes."""
    targets = selectable_paths(defn)
    if not targets:
        return []
    t = t0
    events = []
    for _ in range(n):
        menu, node = rng.choice(targets)
        events.append(UsageEvent(t=t, session=session, kind=SELECT,
                                 menu=menu, node=node))
        t += rng.randint(0, max_gap)
    return events


# ------------------------------------------------------- factor oracles

def brute_decayed_f(events, menu: str, node: str, t: int, half_life: float) -> float:
    return sum(
        2.0 ** (-(t - e.t) / half_life)
        for e in events
        if e.kind == SELECT and e.menu == menu and e.node == node
    )


def brute_recency(events, menu: str, node: str, t: int, half_life: float) -> float:
    ts = [e.t for e in events
          if e.kind == SELECT and e.menu == menu and e.node == node]
    if not ts:
        return 0.0
    return 2.0 ** (-(t - max(ts)) / half_life)


def brute_hour(t: int, tz_offset: int = 0) -> int:
    return ((t + tz_offset) % 86400) // 3600


def brute_tau(events, menu: str, node: str, t: int, tz_offset: int = 0) -> float:
    ts = [e.t for e in events
          if e.kind == SELECT and e.menu == menu and e.node == node]
    if not ts:
        return 0.0
    now_hour = brute_hour(t, tz_offset)
    in_hour = sum(1 for et in ts if brute_hour(et, tz_offset) == now_hour)
    return in_hour / len(ts)


def brute_factors(events, menu: str, nodes, t: int, config) -> dict:
    """Per-node (f, f_hat, r, tau, s) straight from the formulas."""
    fs = {n: brute_decayed_f(events, menu, n, t, config.half_life_f) for n in nodes}
    seen = {(e.menu, e.node) for e in events if e.kind == SELECT}
    f_all = [
        brute_decayed_f(events, m, n, t, config.half_life_f) for m, n in seen
    ]
    f_max = max(f_all, default=0.0)
    out = {}
    for n in nodes:
        f_hat = fs[n] / f_max if f_max > 0 else 0.0
        r = brute_recency(events, menu, n, t, config.half_life_r)
        tau = brute_tau(events, menu, n, t, config.tz_offset)
        s = config.w_f * f_hat + config.w_r * r + config.w_t * tau
        out[n] = (fs[n], f_hat, r, tau, s)
    return out


def brute_rank(events, menu: str, nodes, t: int, config) -> list[str]:
    """Pairwise-comparator sort by (s desc, last_t desc none-last, input
    order asc); deliberately not a key sort."""
    factors = brute_factors(events, menu, nodes, t, config)
    lasts = {}
    for n in nodes:
        ts = [e.t for e in events
              if e.kind == SELECT and e.menu == menu and e.node == n]
        lasts[n] = max(ts) if ts else None
    index = {n: i for i, n in enumerate(nodes)}

    def cmp(a: str, b: str) -> int:
        sa, sb = factors[a][4], factors[b][4]
        if sa != sb:
            return -1 if sa > sb else 1
        la, lb = lasts[a], lasts[b]
        if la != lb:
            if la is None:
                return 1
            if lb is None:
                return -1
            return -1 if la > lb else 1
        return -1 if index[a] < index[b] else 1

    return sorted(nodes, key=functools.cmp_to_key(cmp))
