"""Structural menu editing: atomic ops, edit scripts, branch rendering.

Every op either returns a new valid definition or raises EditError and
leaves the input untouched (definitions are immutable values, so a
failed op cannot corrupt anything). A script applies in order and is
all or nothing.

Script lines, one op each:

    insert m1 0 item f "New" action=a.f tier=adaptive
    remove m1/f
    move m1/f m1 3
    rename m1/f "Newer"
    set-tier m1/f core
    add-menu m9 "Extras"
    link m1/s9 "Extras" -> m9

`insert` accepts any node line from the definition grammar after the
parent path and index (items, sep, an empty panel, or a submenu link).
"""

from __future__ import annotations

from dataclasses import dataclass, replace as dc_replace

from .model import (
    Item,
    Menu,
    MenuDefinition,
    Node,
    NodePath,
    Panel,
    Separator,
    SubmenuLink,
    TIERS,
    Violation,
    _Cursor,
    _scan,
    _take_tier,
    kind_of,
    validate,
)
from .model import ParseError as _ParseError


class EditError(Exception):
    """A refused edit. kind is one of bad-path, bad-index, would-dangle,
    would-cycle, duplicate-id, nested-panel."""

    def __init__(self, kind: str, detail: str, op_index: int | None = None):
        self.kind = kind
        self.detail = detail
        self.op_index = op_index
        at = f" (op {op_index})" if op_index is not None else ""
        super().__init__(f"{kind}: {detail}{at}")


class ScriptParseError(Exception):
    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


@dataclass(frozen=True)
class InsertNode:
    parent: NodePath  # zero segments for the menu root, one for a panel
    index: int
    node: Node


@dataclass(frozen=True)
class RemoveNode:
    path: NodePath


@dataclass(frozen=True)
class MoveNode:
    src: NodePath
    dst_parent: NodePath
    index: int


@dataclass(frozen=True)
class Rename:
    path: NodePath
    label: str


@dataclass(frozen=True)
class SetTier:
    path: NodePath
    tier: str


@dataclass(frozen=True)
class AddMenu:
    id: str
    label: str


@dataclass(frozen=True)
class LinkSubmenu:
    path: NodePath  # menu plus the new link's id
    label: str
    target: str


EditOp = InsertNode | RemoveNode | MoveNode | Rename | SetTier | AddMenu | LinkSubmenu

_VIOLATION_TO_EDIT = {
    "duplicate-id": "duplicate-id",
    "dangling-submenu": "would-dangle",
    "cycle": "would-cycle",
    "nested-panel": "nested-panel",
}


def _checked(defn: MenuDefinition, op_index: int | None) -> MenuDefinition:
    violations = validate(defn)
    if violations:
        v: Violation = violations[0]
        raise EditError(_VIOLATION_TO_EDIT.get(v.kind, v.kind), v.path, op_index)
    return defn


def _menu_index(defn: MenuDefinition, menu_id: str, op_index) -> int:
    for i, m in enumerate(defn.menus):
        if m.id == menu_id:
            return i
    raise EditError("bad-path", f"no such menu: {menu_id}", op_index)


def _replace_menu(defn: MenuDefinition, i: int, menu: Menu) -> MenuDefinition:
    menus = list(defn.menus)
    menus[i] = menu
    return MenuDefinition(tuple(menus))


def _container(defn: MenuDefinition, parent: NodePath, op_index):
    """Return (menu_index, panel_index_or_None, children_tuple) for a parent
    path addressing a menu root or a top-level panel."""
    mi = _menu_index(defn, parent.menu, op_index)
    menu = defn.menus[mi]
    if len(parent.segments) == 0:
        return mi, None, menu.nodes
    if len(parent.segments) == 1:
        for pi, node in enumerate(menu.nodes):
            if isinstance(node, Panel) and node.id == parent.segments[0]:
                return mi, pi, node.children
        raise EditError("bad-path", f"no such panel: {parent}", op_index)
    raise EditError("bad-path", f"not a container: {parent}", op_index)


def _write_container(defn: MenuDefinition, mi: int, pi: int | None,
                     children: tuple) -> MenuDefinition:
    menu = defn.menus[mi]
    if pi is None:
        return _replace_menu(defn, mi, dc_replace(menu, nodes=children))
    nodes = list(menu.nodes)
    nodes[pi] = dc_replace(nodes[pi], children=children)
    return _replace_menu(defn, mi, dc_replace(menu, nodes=tuple(nodes)))


def _locate(defn: MenuDefinition, path: NodePath, op_index):
    """Find an id-bearing node: (menu_index, panel_index_or_None, child_index, node)."""
    mi = _menu_index(defn, path.menu, op_index)
    menu = defn.menus[mi]
    if len(path.segments) == 1:
        for ni, node in enumerate(menu.nodes):
            if getattr(node, "id", None) == path.segments[0]:
                return mi, None, ni, node
        raise EditError("bad-path", f"no such node: {path}", op_index)
    if len(path.segments) == 2:
        for pi, node in enumerate(menu.nodes):
            if isinstance(node, Panel) and node.id == path.segments[0]:
                for ci, child in enumerate(node.children):
                    if getattr(child, "id", None) == path.segments[1]:
                        return mi, pi, ci, child
                raise EditError("bad-path", f"no such node: {path}", op_index)
        raise EditError("bad-path", f"no such panel: {path.menu}/{path.segments[0]}", op_index)
    raise EditError("bad-path", f"bad path: {path}", op_index)


def apply_edit(defn: MenuDefinition, op: EditOp,
               _op_index: int | None = None) -> MenuDefinition:
    """Apply one op. Returns the edited definition or raises EditError."""
    if isinstance(op, InsertNode):
        mi, pi, children = _container(defn, op.parent, _op_index)
        if not 0 <= op.index <= len(children):
            raise EditError("bad-index", f"index {op.index} out of range for {op.parent}", _op_index)
        new_children = children[: op.index] + (op.node,) + children[op.index :]
        return _checked(_write_container(defn, mi, pi, new_children), _op_index)

    if isinstance(op, RemoveNode):
        mi, pi, ni, _node = _locate(defn, op.path, _op_index)
        container = defn.menus[mi].nodes if pi is None else defn.menus[mi].nodes[pi].children
        if pi is None and len(op.path.segments) == 1:
            new_children = container[:ni] + container[ni + 1 :]
            return _checked(_write_container(defn, mi, None, new_children), _op_index)
        new_children = container[:ni] + container[ni + 1 :]
        return _checked(_write_container(defn, mi, pi, new_children), _op_index)

    if isinstance(op, MoveNode):
        mi, pi, ni, node = _locate(defn, op.src, _op_index)
        container = defn.menus[mi].nodes if pi is None else defn.menus[mi].nodes[pi].children
        removed = _write_container(defn, mi, pi, container[:ni] + container[ni + 1 :])
        try:
            dmi, dpi, dchildren = _container(removed, op.dst_parent, _op_index)
        except EditError:
            # destination vanished with the removal, e.g. moving a panel
            # into itself
            raise
        if not 0 <= op.index <= len(dchildren):
            raise EditError("bad-index", f"index {op.index} out of range for {op.dst_parent}", _op_index)
        new_children = dchildren[: op.index] + (node,) + dchildren[op.index :]
        return _checked(_write_container(removed, dmi, dpi, new_children), _op_index)

    if isinstance(op, Rename):
        mi, pi, ni, node = _locate(defn, op.path, _op_index)
        if '"' in op.label or "\n" in op.label:
            raise ValueError(f"label not serializable: {op.label!r}")
        new_node = dc_replace(node, label=op.label)
        return _checked(_swap_node(defn, mi, pi, ni, new_node), _op_index)

    if isinstance(op, SetTier):
        mi, pi, ni, node = _locate(defn, op.path, _op_index)
        if not isinstance(node, (Item, SubmenuLink)):
            raise EditError("bad-path", f"{kind_of(node)} nodes have no tier: {op.path}", _op_index)
        if op.tier not in TIERS:
            raise ValueError(f"bad tier {op.tier!r}")
        return _checked(_swap_node(defn, mi, pi, ni, dc_replace(node, tier=op.tier)), _op_index)

    if isinstance(op, AddMenu):
        new = MenuDefinition(defn.menus + (Menu(op.id, op.label),))
        return _checked(new, _op_index)

    if isinstance(op, LinkSubmenu):
        if len(op.path.segments) != 1:
            raise EditError("bad-path", f"link path must be menu/link-id: {op.path}", _op_index)
        mi = _menu_index(defn, op.path.menu, _op_index)
        menu = defn.menus[mi]
        link = SubmenuLink(op.path.segments[0], op.label, op.target)
        new_menu = dc_replace(menu, nodes=menu.nodes + (link,))
        return _checked(_replace_menu(defn, mi, new_menu), _op_index)

    raise TypeError(f"not an edit op: {op!r}")


def _swap_node(defn: MenuDefinition, mi: int, pi: int | None, ni: int,
               node: Node) -> MenuDefinition:
    menu = defn.menus[mi]
    if pi is None:
        nodes = list(menu.nodes)
        nodes[ni] = node
        return _replace_menu(defn, mi, dc_replace(menu, nodes=tuple(nodes)))
    panel = menu.nodes[pi]
    children = list(panel.children)
    children[ni] = node
    nodes = list(menu.nodes)
    nodes[pi] = dc_replace(panel, children=tuple(children))
    return _replace_menu(defn, mi, dc_replace(menu, nodes=tuple(nodes)))


def apply_script(defn: MenuDefinition, ops) -> MenuDefinition:
    """Apply ops in order, all or nothing. EditError carries the failing
    op index; the input definition is returned unchanged in spirit since
    values are immutable."""
    current = defn
    for i, op in enumerate(ops):
        current = apply_edit(current, op, _op_index=i)
    return current


# ---------------------------------------------------------- script format

def parse_script(text: str) -> list[EditOp]:
    ops: list[EditOp] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        try:
            ops.append(_parse_script_line(raw, lineno))
        except _ParseError as exc:
            raise ScriptParseError(lineno, exc.reason) from None
    return ops


def _path(cur: _Cursor, what: str = "path") -> NodePath:
    text = cur.take_word(what)
    parts = text.split("/")
    if any(p == "" for p in parts):
        raise _ParseError(cur.lineno, f"bad {what} {text!r}")
    return NodePath(parts[0], tuple(parts[1:]))


def _parse_script_line(raw: str, lineno: int) -> EditOp:
    cur = _Cursor(_scan(raw, lineno), lineno)
    head = cur.take_word("op")
    if head == "insert":
        parent = _path(cur, "parent path")
        idx_raw = cur.take_word("index")
        try:
            index = int(idx_raw)
        except ValueError:
            raise _ParseError(lineno, f"bad index {idx_raw!r}") from None
        node = _parse_node_spec(cur)
        return InsertNode(parent, index, node)
    if head == "remove":
        return RemoveNode(_path(cur, "node path"))
    if head == "move":
        src = _path(cur, "source path")
        dst = _path(cur, "destination parent")
        idx_raw = cur.take_word("index")
        try:
            index = int(idx_raw)
        except ValueError:
            raise _ParseError(lineno, f"bad index {idx_raw!r}") from None
        cur.end()
        return MoveNode(src, dst, index)
    if head == "rename":
        path = _path(cur, "node path")
        label = cur.take_label()
        cur.end()
        return Rename(path, label)
    if head == "set-tier":
        path = _path(cur, "node path")
        tier = cur.take_word("tier")
        if tier not in TIERS:
            raise _ParseError(lineno, f"tier must be core or adaptive, got {tier!r}")
        cur.end()
        return SetTier(path, tier)
    if head == "add-menu":
        mid = cur.take_id("menu id")
        label = cur.take_label()
        cur.end()
        return AddMenu(mid, label)
    if head == "link":
        path = _path(cur, "link path")
        label = cur.take_label()
        arrow = cur.take_word("'->'")
        if arrow != "->":
            raise _ParseError(lineno, f"expected '->', got {arrow!r}")
        target = cur.take_id("target menu id")
        cur.end()
        return LinkSubmenu(path, label, target)
    raise _ParseError(lineno, f"unknown op {head!r}")


def _parse_node_spec(cur: _Cursor) -> Node:
    head = cur.take_word("node kind")
    if head == "item":
        nid = cur.take_id("item id")
        label = cur.take_label()
        action = cur.take_kv("action", "action id")
        tier = _take_tier(cur)
        cur.end()
        return Item(nid, label, action, tier)
    if head == "sep":
        cur.end()
        return Separator()
    if head == "panel":
        pid = cur.take_id("panel id")
        label = cur.take_label()
        state = "contracted"
        if cur.peek_kv("default"):
            state = cur.take_kv("default", "panel default")
            if state not in ("expanded", "contracted"):
                raise _ParseError(cur.lineno, f"bad panel default {state!r}")
        cur.end()
        return Panel(pid, label, state)
    if head == "submenu":
        sid = cur.take_id("submenu id")
        label = cur.take_label()
        arrow = cur.take_word("'->'")
        if arrow != "->":
            raise _ParseError(cur.lineno, f"expected '->', got {arrow!r}")
        target = cur.take_id("target menu id")
        tier = _take_tier(cur)
        cur.end()
        return SubmenuLink(sid, label, target, tier)
    raise _ParseError(cur.lineno, f"unknown node kind {head!r}")


# --------------------------------------------------------------- display

def render_branches(defn: MenuDefinition, paths) -> str:
    """Render one indented tree per requested path, in request order.

    Paths are strings: a bare menu id renders the whole menu, menu/node
    renders that subtree, menu/panel/child a single child line.
    """
    out: list[str] = []
    for text in paths:
        parts = text.split("/")
        if not parts or any(p == "" for p in parts):
            raise EditError("bad-path", f"bad path {text!r}")
        menu = defn.menu(parts[0])
        if menu is None:
            raise EditError("bad-path", f"no such menu: {text}")
        if len(parts) == 1:
            out.append(f'menu {menu.id} "{menu.label}"')
            for node in menu.nodes:
                _render_node(node, 1, out)
            continue
        mi, pi, ni, node = _locate(defn, NodePath(parts[0], tuple(parts[1:])), None)
        _render_node(node, 0, out)
    return "\n".join(out) + "\n"


def _render_node(node: Node, depth: int, out: list[str]):
    pad = "  " * depth
    if isinstance(node, Item):
        out.append(f'{pad}item {node.id} "{node.label}" [{node.tier}]')
    elif isinstance(node, Separator):
        out.append(f"{pad}sep")
    elif isinstance(node, SubmenuLink):
        out.append(f'{pad}submenu {node.id} "{node.label}" -> {node.target} [{node.tier}]')
    elif isinstance(node, Panel):
        out.append(f'{pad}panel {node.id} "{node.label}" [{node.default_state}]')
        for child in node.children:
            _render_node(child, depth + 1, out)
    else:
        raise TypeError(f"not a node: {node!r}")
