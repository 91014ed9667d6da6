"""Synthetic workloads, navigation cost, and trace replay.

The workload generator draws item selections from a Zipf distribution by
inverse CDF over a SplitMix64 stream, so a (seed, items, zipf_s, events,
start, step) tuple always produces the same trace bytes. The companion
definition lists the same items in a deterministically shuffled display
order: menus in the wild are arranged by meaning, not by popularity, and
a popularity-sorted definition would make the full-length menu an
unbeatable baseline.

Navigation cost charges 1 to open the root menu plus the scanned
position of every entry on the way to the target; a short-view miss
pays the whole short list plus one to expand, then the long position;
a contracted panel pays one more to expand with the position recounted.
"""

from __future__ import annotations

from dataclasses import dataclass, replace as dc_replace

from . import usage as usage_mod
from .heuristics import ARRANGEMENT_STABLE, DEFAULT_CONFIG, HeuristicConfig
from .model import (
    CONTRACTED,
    EXPANDED,
    Item,
    Menu,
    MenuDefinition,
    SubmenuLink,
    find_node,
    iter_nodes,
)
from .session import MODE_LONG, MODE_SHORT, SessionState, compose_view
from .usage import Snapshot, UsageEvent, UsageLog, snapshot

POLICY_ADAPTIVE = "adaptive"
POLICY_STATIC = "static"
POLICIES = (POLICY_ADAPTIVE, POLICY_STATIC)

_MASK = (1 << 64) - 1
_INCREMENT = 0x9E3779B97F4A7C15
_MIX1 = 0xBF58476D1CE4E5B9
_MIX2 = 0x94D049BB133111EB
_SHUFFLE_SALT = 0xA3C59AC2F0025D1D


class UnknownTarget(Exception):
    kind = "unknown-target"

    def __init__(self, menu: str, node: str, line: int | None = None, why: str = "unknown target"):
        at = f" (line {line})" if line is not None else ""
        super().__init__(f"{why}: {menu}/{node}{at}")
        self.menu = menu
        self.node = node
        self.line = line


class SplitMix64:
    """Fixed-increment 64-bit mixer; one value per step."""

    def __init__(self, seed: int):
        self.state = seed & _MASK

    def next_u64(self) -> int:
        self.state = (self.state + _INCREMENT) & _MASK
        z = self.state
        z = ((z ^ (z >> 30)) * _MIX1) & _MASK
        z = ((z ^ (z >> 27)) * _MIX2) & _MASK
        return z ^ (z >> 31)

    def next_float(self) -> float:
        return self.next_u64() / 2.0 ** 64


def zipf_cdf(n_items: int, zipf_s: float) -> list[float]:
    """Cumulative probabilities of P(i) proportional to 1/i^s, i = 1..n."""
    if n_items < 1:
        raise ValueError("n_items must be at least 1")
    weights = [1.0 / (i ** zipf_s) for i in range(1, n_items + 1)]
    total = sum(weights)
    cdf = []
    acc = 0.0
    for w in weights:
        acc += w
        cdf.append(acc / total)
    cdf[-1] = 1.0
    return cdf


def item_id(i: int) -> str:
    return f"i{i}"


def synth_trace(n_items: int, zipf_s: float, n_events: int, seed: int,
                start_t: int, step_s: int, menu_id: str = "m",
                session: str = "sim") -> list[UsageEvent]:
    """Deterministic select-event trace; event k lands at start_t + k*step_s."""
    if n_events < 0 or step_s < 0 or start_t < 0:
        raise ValueError("n_events, step_s, start_t must be non-negative")
    cdf = zipf_cdf(n_items, zipf_s)
    rng = SplitMix64(seed)
    events = []
    for k in range(n_events):
        u = rng.next_float()
        idx = _search(cdf, u)
        events.append(UsageEvent(t=start_t + k * step_s, session=session,
                                 kind=usage_mod.SELECT, menu=menu_id,
                                 node=item_id(idx + 1)))
    return events


def _search(cdf: list[float], u: float) -> int:
    # smallest index with cdf[index] > u; u can round up to 1.0 on rare draws
    lo, hi = 0, len(cdf) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if cdf[mid] > u:
            hi = mid
        else:
            lo = mid + 1
    return lo


def synth_definition(n_items: int, seed: int, menu_id: str = "m") -> MenuDefinition:
    """Flat all-adaptive menu over the same ids the trace selects.

    Display order is a seeded shuffle of 1..n so that popularity and
    position are uncorrelated; the shuffle stream is salted and does not
    touch the event sampling stream.
    """
    order = list(range(1, n_items + 1))
    rng = SplitMix64(seed ^ _SHUFFLE_SALT)
    for i in range(n_items - 1, 0, -1):
        j = rng.next_u64() % (i + 1)
        order[i], order[j] = order[j], order[i]
    items = tuple(
        Item(item_id(i), f"Item {i}", f"act.{item_id(i)}") for i in order
    )
    return MenuDefinition((Menu(menu_id, "Workload", items),))


# --------------------------------------------------------- navigation cost

def navigation_cost(defn: MenuDefinition, state: SessionState, snap: Snapshot,
                    config: HeuristicConfig, menu_id: str, node_id: str) -> int:
    """Steps to reach (menu, node) from a fresh root open under this state."""
    cost, _expands = _navigate(defn, state, snap, config, menu_id, node_id,
                               policy=POLICY_ADAPTIVE)
    return cost


_STATIC_SESSION = SessionState(session="static")


def _navigate(defn: MenuDefinition, state: SessionState, snap: Snapshot,
              config: HeuristicConfig, menu_id: str, node_id: str,
              policy: str = POLICY_ADAPTIVE) -> tuple[int, int]:
    """(total cost, expansion count). Recurses across submenu links."""
    if policy == POLICY_STATIC:
        state = _STATIC_SESSION
        config = dc_replace(config, arrangement=ARRANGEMENT_STABLE)
    target_menu = defn.menu(menu_id)
    if target_menu is None:
        raise UnknownTarget(menu_id, node_id, why="unknown menu")
    found = find_node(target_menu, node_id)
    if found is None or not isinstance(found[0], (Item, SubmenuLink)):
        raise UnknownTarget(menu_id, node_id)

    hops = _route(defn, menu_id)
    if hops is None:
        raise UnknownTarget(menu_id, node_id, why="menu unreachable from root")

    cost = 1  # open the root menu
    expands = 0
    here = defn.root
    for link_id in hops:
        c, e = _step_cost(defn, state, snap, config, here, link_id, policy)
        cost += c
        expands += e
        link, _panel = find_node(defn.menu(here), link_id)
        here = link.target
    c, e = _step_cost(defn, state, snap, config, here, node_id, policy)
    return cost + c, expands + e


def _route(defn: MenuDefinition, menu_id: str):
    """Shortest chain of submenu link ids from the root, BFS in definition
    order; None when unreachable."""
    root = defn.root
    if menu_id == root:
        return []
    frontier = [root]
    came: dict[str, tuple[str, str]] = {root: ("", "")}
    while frontier:
        nxt = []
        for mid in frontier:
            menu = defn.menu(mid)
            if menu is None:
                continue
            for node, _panel in iter_nodes(menu):
                if isinstance(node, SubmenuLink) and node.target not in came:
                    came[node.target] = (mid, node.id)
                    if node.target == menu_id:
                        links = []
                        cur = menu_id
                        while cur != root:
                            prev, link = came[cur]
                            links.append(link)
                            cur = prev
                        return list(reversed(links))
                    nxt.append(node.target)
        frontier = nxt
    return None


def _step_cost(defn: MenuDefinition, state: SessionState, snap: Snapshot,
               config: HeuristicConfig, menu_id: str, node_id: str,
               policy: str) -> tuple[int, int]:
    """Cost of finding one entry inside one menu under the current state."""
    if policy == POLICY_STATIC:
        mode = MODE_LONG
    else:
        mode = state.mode.get(menu_id, MODE_SHORT)

    view = compose_view(defn, menu_id, snap, state, config, mode=mode)
    pos = _position(view, node_id)
    if pos is not None:
        return pos, 0

    expands = 0
    cost = 0
    if mode == MODE_SHORT:
        # scanned the whole short list, then expanded to the long view
        cost += len(view.entries) + 1
        expands += 1
        view = compose_view(defn, menu_id, snap, state, config, mode=MODE_LONG)
        pos = _position(view, node_id)
        if pos is not None:
            return cost + pos, expands

    # still hidden: the containing panel is contracted, expand it and
    # recount the position
    menu = defn.menu(menu_id)
    _node, panel = find_node(menu, node_id)
    if panel is None:
        raise UnknownTarget(menu_id, node_id, why="entry cannot be reached")
    opened = dict(state.panel_states)
    opened[(menu_id, panel.id)] = EXPANDED
    view = compose_view(defn, menu_id, snap, dc_replace(state, panel_states=opened),
                        config, mode=MODE_LONG)
    pos = _position(view, node_id)
    if pos is None:
        raise UnknownTarget(menu_id, node_id, why="entry cannot be reached")
    return cost + 1 + pos, expands + 1


def _position(view, node_id: str) -> int | None:
    for e in view.entries:
        if e.node == node_id:
            return e.pos
    return None


# ----------------------------------------------------------------- replay

@dataclass(frozen=True)
class CostRow:
    menu: str
    node: str
    selections: int
    total_cost: int
    expansions: int

    @property
    def mean_cost(self) -> float:
        return self.total_cost / self.selections


@dataclass(frozen=True)
class CostReport:
    policy: str
    selections: int
    total_cost: int
    expansions: int
    rows: tuple = ()

    @property
    def mean_cost(self) -> float:
        return self.total_cost / self.selections if self.selections else 0.0


def replay(defn: MenuDefinition, trace, config: HeuristicConfig = DEFAULT_CONFIG,
           policy: str = POLICY_ADAPTIVE) -> CostReport:
    """Walk a trace, costing each selection against the state it found.

    The cost of event k sees only events before k. Non-select events are
    applied as session transitions (a trace is a recorded session); the
    static policy ignores all of that and prices every selection off the
    full-length definition-order view.
    """
    if policy not in POLICIES:
        raise ValueError(f"policy must be adaptive or static, got {policy!r}")
    log = UsageLog(half_life_f=config.half_life_f, tz_offset=config.tz_offset)
    state = SessionState(session="replay")
    totals: dict[tuple[str, str], list[int]] = {}
    order: list[tuple[str, str]] = []
    total_cost = 0
    expansions = 0
    selections = 0

    for lineno, e in enumerate(trace, 1):
        menu = defn.menu(e.menu)
        if menu is None:
            raise UnknownTarget(e.menu, e.node or "", line=lineno, why="unknown menu")
        if e.node is not None and find_node(menu, e.node) is None:
            raise UnknownTarget(e.menu, e.node, line=lineno)
        if e.kind == usage_mod.SELECT:
            snap = snapshot(log, e.t, config)
            try:
                cost, ex = _navigate(defn, state, snap, config, e.menu, e.node,
                                     policy=policy)
            except UnknownTarget as exc:
                raise UnknownTarget(exc.menu, exc.node, line=lineno,
                                    why="unreachable target") from None
            key = (e.menu, e.node)
            if key not in totals:
                totals[key] = [0, 0, 0]
                order.append(key)
            totals[key][0] += 1
            totals[key][1] += cost
            totals[key][2] += ex
            total_cost += cost
            expansions += ex
            selections += 1
        log.record(e)
        state = _apply_event(state, defn, e)

    # per-item rows in definition order
    def def_order(key):
        menu = defn.menu(key[0])
        ids = [getattr(n, "id", None) for n, _p in iter_nodes(menu)]
        menu_pos = [m.id for m in defn.menus].index(key[0])
        return (menu_pos, ids.index(key[1]))

    rows = tuple(
        CostRow(menu=k[0], node=k[1], selections=v[0], total_cost=v[1], expansions=v[2])
        for k, v in sorted(totals.items(), key=lambda kv: def_order(kv[0]))
    )
    return CostReport(policy=policy, selections=selections, total_cost=total_cost,
                      expansions=expansions, rows=rows)


def _apply_event(state: SessionState, defn: MenuDefinition, e: UsageEvent) -> SessionState:
    """Mirror an already-logged event onto session state, no logging."""
    if e.kind == usage_mod.SELECT:
        open_menus = state.open_menus
        if e.menu not in state.pinned_menus:
            open_menus = tuple(m for m in open_menus if m != e.menu)
        node, _panel = find_node(defn.menu(e.menu), e.node) or (None, None)
        if isinstance(node, SubmenuLink) and node.target not in open_menus:
            open_menus = open_menus + (node.target,)
        return dc_replace(state, open_menus=open_menus, clock=e.t)
    if e.kind == usage_mod.EXPAND or e.kind == usage_mod.COLLAPSE:
        mode = dict(state.mode)
        mode[e.menu] = MODE_LONG if e.kind == usage_mod.EXPAND else MODE_SHORT
        return dc_replace(state, mode=mode, clock=e.t)
    if e.kind == usage_mod.PIN_MENU:
        return dc_replace(state, pinned_menus=state.pinned_menus | {e.menu}, clock=e.t)
    if e.kind == usage_mod.UNPIN_MENU:
        return dc_replace(state, pinned_menus=state.pinned_menus - {e.menu}, clock=e.t)
    if e.kind == usage_mod.PIN_ITEM:
        return dc_replace(state, pinned_items=state.pinned_items | {(e.menu, e.node)}, clock=e.t)
    if e.kind == usage_mod.UNPIN_ITEM:
        return dc_replace(state, pinned_items=state.pinned_items - {(e.menu, e.node)}, clock=e.t)
    if e.kind in (usage_mod.PANEL_EXPAND, usage_mod.PANEL_CONTRACT):
        panel_states = dict(state.panel_states)
        panel_states[(e.menu, e.node)] = (
            EXPANDED if e.kind == usage_mod.PANEL_EXPAND else CONTRACTED
        )
        return dc_replace(state, panel_states=panel_states, clock=e.t)
    return dc_replace(state, clock=e.t)


def report_tsv(report: CostReport) -> str:
    """Stable TSV rendering: summary header comments, then per-item rows."""
    lines = [
        f"# policy\t{report.policy}",
        f"# selections\t{report.selections}",
        f"# total_cost\t{report.total_cost}",
        f"# mean_cost\t{report.mean_cost:.6f}",
        f"# expansions\t{report.expansions}",
        "node\tselections\ttotal_cost\tmean_cost\texpansions",
    ]
    for row in report.rows:
        lines.append(
            f"{row.menu}/{row.node}\t{row.selections}\t{row.total_cost}"
            f"\t{row.mean_cost:.6f}\t{row.expansions}"
        )
    return "\n".join(lines) + "\n"
