"""Session state, state transitions, and view composition.

A session tracks which menus are displayed, pushpinned menus, pinned
items, per-panel expansion state, per-menu short/long mode, and a
simulated clock. All transitions are pure: state in, state out. The
usage log passed alongside is the single mutable participant and every
user-visible action appends one event to it.

View composition renders a menu either long (all nodes in definition
order, contracted panels as bare headers) or short (core nodes, pinned
items, panel headers, and the top scoring adaptive nodes up to the
budget K).
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Mapping

from . import heuristics, usage
from .heuristics import ARRANGEMENT_RANKED, DEFAULT_CONFIG, HeuristicConfig
from .model import (
    CONTRACTED,
    EXPANDED,
    PANEL_STATES,
    TIER_ADAPTIVE,
    TIER_CORE,
    Item,
    Menu,
    MenuDefinition,
    Panel,
    Separator,
    SubmenuLink,
    find_node,
    iter_nodes,
    kind_of,
    tier_of,
)
from .usage import Snapshot, UsageEvent, UsageLog

MODE_SHORT = "short"
MODE_LONG = "long"
MODES = (MODE_SHORT, MODE_LONG)


class EngineError(Exception):
    kind = "engine-error"


class UnknownMenu(EngineError):
    kind = "unknown-menu"

    def __init__(self, menu: str):
        super().__init__(f"no such menu: {menu}")
        self.menu = menu


class UnknownNode(EngineError):
    kind = "unknown-node"

    def __init__(self, menu: str, node: str, why: str = "no such node"):
        super().__init__(f"{why}: {menu}/{node}")
        self.menu = menu
        self.node = node


class UnknownPanel(EngineError):
    kind = "unknown-panel"

    def __init__(self, menu: str, panel: str):
        super().__init__(f"no such panel: {menu}/{panel}")
        self.menu = menu
        self.panel = panel


class MenuNotOpen(EngineError):
    kind = "menu-not-open"

    def __init__(self, menu: str):
        super().__init__(f"menu not open: {menu}")
        self.menu = menu


class CorePinRedundant(EngineError):
    kind = "core-pin-redundant"

    def __init__(self, menu: str, node: str):
        super().__init__(f"core nodes are always shown, pin refused: {menu}/{node}")
        self.menu = menu
        self.node = node


class StateParseError(Exception):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


@dataclass(frozen=True)
class SessionState:
    """Immutable session value. Mapping fields are replaced wholesale by
    transitions, never mutated in place."""

    session: str = "s1"
    open_menus: tuple = ()
    pinned_menus: frozenset = frozenset()
    pinned_items: frozenset = frozenset()  # of (menu id, node id)
    panel_states: Mapping = field(default_factory=dict)  # (menu, panel) -> state
    mode: Mapping = field(default_factory=dict)  # menu -> short | long
    clock: int = 0


@dataclass(frozen=True)
class ViewEntry:
    pos: int
    node: str | None
    kind: str  # item | sep | panel | submenu
    label: str
    pinned: bool = False
    panel_state: str | None = None


@dataclass(frozen=True)
class MenuView:
    menu: str
    mode: str
    entries: tuple = ()
    truncated: bool = False


def _require_menu(defn: MenuDefinition, menu_id: str) -> Menu:
    menu = defn.menu(menu_id)
    if menu is None:
        raise UnknownMenu(menu_id)
    return menu


# ------------------------------------------------------------ transitions

def open_menu(state: SessionState, defn: MenuDefinition, menu_id: str) -> SessionState:
    """Mark a menu as displayed. Display state only, nothing is logged."""
    _require_menu(defn, menu_id)
    if menu_id in state.open_menus:
        return state
    return replace(state, open_menus=state.open_menus + (menu_id,))


def set_clock(state: SessionState, at: int) -> SessionState:
    if not isinstance(at, int) or at < 0:
        raise ValueError(f"bad clock value {at!r}")
    return replace(state, clock=at)


def select(state: SessionState, defn: MenuDefinition, log: UsageLog,
           menu_id: str, node_id: str, t: int) -> SessionState:
    """Select an item or submenu link. Records the event, closes the menu
    unless pinned, and opens the link target if one was selected."""
    menu = _require_menu(defn, menu_id)
    found = find_node(menu, node_id)
    if found is None or not isinstance(found[0], (Item, SubmenuLink)):
        raise UnknownNode(menu_id, node_id, "not a selectable node")
    node = found[0]
    log.record(UsageEvent(t=t, session=state.session, kind=usage.SELECT,
                          menu=menu_id, node=node_id))
    open_menus = state.open_menus
    if menu_id not in state.pinned_menus:
        open_menus = tuple(m for m in open_menus if m != menu_id)
    if isinstance(node, SubmenuLink) and node.target not in open_menus:
        open_menus = open_menus + (node.target,)
    return replace(state, open_menus=open_menus, clock=t)


def pin_menu(state: SessionState, defn: MenuDefinition, log: UsageLog,
             menu_id: str) -> SessionState:
    _require_menu(defn, menu_id)
    if menu_id not in state.open_menus:
        raise MenuNotOpen(menu_id)
    log.record(UsageEvent(t=state.clock, session=state.session,
                          kind=usage.PIN_MENU, menu=menu_id))
    return replace(state, pinned_menus=state.pinned_menus | {menu_id})


def unpin_menu(state: SessionState, defn: MenuDefinition, log: UsageLog,
               menu_id: str) -> SessionState:
    _require_menu(defn, menu_id)
    log.record(UsageEvent(t=state.clock, session=state.session,
                          kind=usage.UNPIN_MENU, menu=menu_id))
    return replace(state, pinned_menus=state.pinned_menus - {menu_id})


def _pinnable(defn: MenuDefinition, menu_id: str, node_id: str):
    menu = _require_menu(defn, menu_id)
    found = find_node(menu, node_id)
    if found is None or not isinstance(found[0], (Item, SubmenuLink)):
        raise UnknownNode(menu_id, node_id, "not a pinnable node")
    return found[0]


def pin_item(state: SessionState, defn: MenuDefinition, log: UsageLog,
             menu_id: str, node_id: str) -> SessionState:
    node = _pinnable(defn, menu_id, node_id)
    if node.tier == TIER_CORE:
        raise CorePinRedundant(menu_id, node_id)
    log.record(UsageEvent(t=state.clock, session=state.session,
                          kind=usage.PIN_ITEM, menu=menu_id, node=node_id))
    return replace(state, pinned_items=state.pinned_items | {(menu_id, node_id)})


def unpin_item(state: SessionState, defn: MenuDefinition, log: UsageLog,
               menu_id: str, node_id: str) -> SessionState:
    _pinnable(defn, menu_id, node_id)
    log.record(UsageEvent(t=state.clock, session=state.session,
                          kind=usage.UNPIN_ITEM, menu=menu_id, node=node_id))
    return replace(state, pinned_items=state.pinned_items - {(menu_id, node_id)})


def set_panel(state: SessionState, defn: MenuDefinition, log: UsageLog,
              menu_id: str, panel_id: str, new_state: str) -> SessionState:
    menu = _require_menu(defn, menu_id)
    panel = next((n for n in menu.nodes if isinstance(n, Panel) and n.id == panel_id), None)
    if panel is None:
        raise UnknownPanel(menu_id, panel_id)
    if new_state not in PANEL_STATES:
        raise ValueError(f"panel state must be expanded or contracted, got {new_state!r}")
    kind = usage.PANEL_EXPAND if new_state == EXPANDED else usage.PANEL_CONTRACT
    log.record(UsageEvent(t=state.clock, session=state.session, kind=kind,
                          menu=menu_id, node=panel_id))
    panel_states = dict(state.panel_states)
    panel_states[(menu_id, panel_id)] = new_state
    return replace(state, panel_states=panel_states)


def expand_menu(state: SessionState, defn: MenuDefinition, log: UsageLog,
                menu_id: str) -> SessionState:
    _require_menu(defn, menu_id)
    log.record(UsageEvent(t=state.clock, session=state.session,
                          kind=usage.EXPAND, menu=menu_id))
    mode = dict(state.mode)
    mode[menu_id] = MODE_LONG
    return replace(state, mode=mode)


def collapse_menu(state: SessionState, defn: MenuDefinition, log: UsageLog,
                  menu_id: str) -> SessionState:
    _require_menu(defn, menu_id)
    log.record(UsageEvent(t=state.clock, session=state.session,
                          kind=usage.COLLAPSE, menu=menu_id))
    mode = dict(state.mode)
    mode[menu_id] = MODE_SHORT
    return replace(state, mode=mode)


# ------------------------------------------------------- view composition

def panel_state_of(state: SessionState, menu_id: str, panel: Panel) -> str:
    return state.panel_states.get((menu_id, panel.id), panel.default_state)


def compose_view(defn: MenuDefinition, menu_id: str, snap: Snapshot,
                 state: SessionState, config: HeuristicConfig = DEFAULT_CONFIG,
                 mode: str | None = None) -> MenuView:
    """Compose the visible entries of one menu at the snapshot instant."""
    menu = _require_menu(defn, menu_id)
    if mode is None:
        mode = state.mode.get(menu_id, MODE_SHORT)
    if mode not in MODES:
        raise ValueError(f"mode must be short or long, got {mode!r}")

    expanded = {
        n.id: panel_state_of(state, menu_id, n) == EXPANDED
        for n in menu.nodes if isinstance(n, Panel)
    }

    chosen: set | None = None
    if mode == MODE_SHORT:
        candidates = []
        for node, panel in iter_nodes(menu):
            if tier_of(node) != TIER_ADAPTIVE:
                continue
            if (menu_id, node.id) in state.pinned_items:
                continue
            # children of contracted panels cannot render, so they do not
            # compete for the budget
            if panel is not None and not expanded[panel.id]:
                continue
            row = snap.row(menu_id, node.id)
            if row is None or row.count < 1:
                continue
            candidates.append(node.id)
        ranked = heuristics.rank(snap, menu_id, candidates, config)
        chosen = {sc.node for sc in ranked[: config.k]}

    def included(node) -> bool:
        if mode == MODE_LONG:
            return True
        if tier_of(node) == TIER_CORE:
            return True
        if (menu_id, node.id) in state.pinned_items:
            return True
        return node.id in chosen

    # blocks keep panel nesting together so ranked rearrangement cannot
    # cross a panel boundary
    blocks: list = []
    for node in menu.nodes:
        if isinstance(node, Separator):
            blocks.append(["sep", None, None])
        elif isinstance(node, Panel):
            children: list = []
            if expanded[node.id]:
                for child in node.children:
                    if isinstance(child, Separator):
                        children.append(["sep", None])
                    elif included(child):
                        children.append(["row", child])
            blocks.append(["panel", node, children])
        else:
            if included(node):
                blocks.append(["row", node, None])

    if config.arrangement == ARRANGEMENT_RANKED:
        order = {
            sc.node: i
            for i, sc in enumerate(heuristics.rank(
                snap, menu_id,
                [n.id for n, _p in iter_nodes(menu) if tier_of(n) is not None],
                config))
        }
        blocks = [b for b in blocks if b[0] != "sep"]
        _reorder_rows(blocks, lambda b: order[b[1].id])
        for b in blocks:
            if b[0] == "panel":
                b[2] = [c for c in b[2] if c[0] != "sep"]
                _reorder_rows(b[2], lambda c: order[c[1].id])

    flat: list[tuple] = []  # (kind, node, label, panel_state)
    for b in blocks:
        if b[0] == "sep":
            flat.append(("sep", None, "", None))
        elif b[0] == "row":
            node = b[1]
            flat.append((kind_of(node), node.id, node.label, None))
        else:
            panel = b[1]
            flat.append(("panel", panel.id, panel.label,
                         EXPANDED if expanded[panel.id] else CONTRACTED))
            for c in b[2]:
                if c[0] == "sep":
                    flat.append(("sep", None, "", None))
                else:
                    flat.append((kind_of(c[1]), c[1].id, c[1].label, None))

    # separator hygiene on the flat list: none leading, none trailing,
    # never two in a row
    clean: list[tuple] = []
    for row in flat:
        if row[0] == "sep" and (not clean or clean[-1][0] == "sep"):
            continue
        clean.append(row)
    while clean and clean[-1][0] == "sep":
        clean.pop()

    entries = tuple(
        ViewEntry(
            pos=i,
            node=node,
            kind=kind,
            label=label,
            pinned=(menu_id, node) in state.pinned_items if node else False,
            panel_state=pstate,
        )
        for i, (kind, node, label, pstate) in enumerate(clean, 1)
    )

    shown = {e.node for e in entries if e.node is not None}
    truncated = any(
        tier_of(node) == TIER_ADAPTIVE and node.id not in shown
        for node, _p in iter_nodes(menu)
    )
    return MenuView(menu=menu_id, mode=mode, entries=entries, truncated=truncated)


def _reorder_rows(blocks: list, key) -> None:
    idxs = [i for i, b in enumerate(blocks) if b[0] == "row"]
    rows = sorted((blocks[i] for i in idxs), key=key)
    for i, b in zip(idxs, rows):
        blocks[i] = b


# ------------------------------------------------------------ state files

def save_state(path: str, state: SessionState) -> None:
    """Persist pinned items and panel states, sorted for stable output."""
    lines = []
    for menu_id, node_id in sorted(state.pinned_items):
        lines.append(f"pin_item {menu_id}/{node_id}")
    for (menu_id, panel_id), pstate in sorted(state.panel_states.items()):
        lines.append(f"panel {menu_id}/{panel_id} {pstate}")
    with open(path, "w", encoding="utf-8") as fh:
        fh.write("\n".join(lines) + ("\n" if lines else ""))


def parse_state(text: str, defn: MenuDefinition, session: str = "s1",
                clock: int = 0):
    """Build a SessionState from state-file text.

    Returns (state, warnings). Entries naming unknown menus, nodes, or
    panels become warnings and are dropped; malformed lines are errors.
    """
    pinned_items = set()
    panel_states = {}
    warnings: list[str] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if parts[0] == "pin_item" and len(parts) == 2:
            menu_id, sep, node_id = parts[1].partition("/")
            if not sep:
                raise StateParseError(lineno, f"expected menu/node, got {parts[1]!r}")
            menu = defn.menu(menu_id)
            found = find_node(menu, node_id) if menu else None
            if menu is None or found is None or not isinstance(found[0], (Item, SubmenuLink)):
                warnings.append(f"line {lineno}: unknown pinned item {parts[1]}")
                continue
            if found[0].tier == TIER_CORE:
                warnings.append(f"line {lineno}: pin of core node {parts[1]} ignored")
                continue
            pinned_items.add((menu_id, node_id))
        elif parts[0] == "panel" and len(parts) == 3:
            menu_id, sep, panel_id = parts[1].partition("/")
            if not sep:
                raise StateParseError(lineno, f"expected menu/panel, got {parts[1]!r}")
            if parts[2] not in PANEL_STATES:
                raise StateParseError(lineno, f"bad panel state {parts[2]!r}")
            menu = defn.menu(menu_id)
            panel = None
            if menu is not None:
                panel = next((n for n in menu.nodes
                              if isinstance(n, Panel) and n.id == panel_id), None)
            if panel is None:
                warnings.append(f"line {lineno}: unknown panel {parts[1]}")
                continue
            panel_states[(menu_id, panel_id)] = parts[2]
        else:
            raise StateParseError(lineno, f"unrecognized state line {stripped!r}")
    state = SessionState(session=session, pinned_items=frozenset(pinned_items),
                         panel_states=panel_states, clock=clock)
    return state, warnings


def load_state(path: str, defn: MenuDefinition, session: str = "s1", clock: int = 0):
    with open(path, "r", encoding="utf-8") as fh:
        return parse_state(fh.read(), defn, session=session, clock=clock)
