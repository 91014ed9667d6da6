"""Menu definition model: immutable types, the text format, and validation.

A definition file is line oriented UTF-8. Blank lines and lines starting
with `#` are ignored, indentation is ignored on input. Canonical output
uses two-space indentation per nesting level and always prints the tier
and panel default, one trailing newline.

    menu m1 "File"
      item open "Open" action=act.open tier=core
      sep
      panel recent "Recent" default=contracted
        item r1 "One" action=act.r1 tier=adaptive
      end
      submenu s1 "Extras" -> m2 tier=adaptive
    end
    menu m2 "Extras"
    end

Ids match [A-Za-z0-9_.-]+ and labels are double-quoted (no embedded
quotes). Panels hold only items and separators. The first menu in the
file is the root.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

TIER_CORE = "core"
TIER_ADAPTIVE = "adaptive"
TIERS = (TIER_CORE, TIER_ADAPTIVE)

EXPANDED = "expanded"
CONTRACTED = "contracted"
PANEL_STATES = (EXPANDED, CONTRACTED)

_ID_RE = re.compile(r"[A-Za-z0-9_.-]+\Z")


class ParseError(Exception):
    """Grammar violation in definition text, with the offending line."""

    def __init__(self, line: int, reason: str):
        super().__init__(f"line {line}: {reason}")
        self.line = line
        self.reason = reason


@dataclass(frozen=True)
class Violation:
    """One structural defect found by validate()."""

    kind: str  # duplicate-id | dangling-submenu | cycle | nested-panel | empty-definition
    path: str


class ValidationError(Exception):
    """Raised when a parsed definition fails structural validation."""

    def __init__(self, violations):
        self.violations = tuple(violations)
        first = self.violations[0]
        super().__init__(f"{first.kind} at {first.path}")

    @property
    def kind(self) -> str:
        return self.violations[0].kind

    @property
    def path(self) -> str:
        return self.violations[0].path


class NotFound(Exception):
    """A node path that does not resolve."""

    def __init__(self, path: str):
        super().__init__(f"no such node: {path}")
        self.path = path


@dataclass(frozen=True)
class Item:
    id: str
    label: str
    action_id: str
    tier: str = TIER_ADAPTIVE


@dataclass(frozen=True)
class Separator:
    pass


@dataclass(frozen=True)
class Panel:
    id: str
    label: str
    default_state: str = CONTRACTED
    children: tuple = ()


@dataclass(frozen=True)
class SubmenuLink:
    id: str
    label: str
    target: str
    tier: str = TIER_ADAPTIVE


Node = Item | Separator | Panel | SubmenuLink


@dataclass(frozen=True)
class Menu:
    id: str
    label: str
    nodes: tuple = ()


@dataclass(frozen=True)
class MenuDefinition:
    menus: tuple = ()

    @property
    def root(self) -> str:
        return self.menus[0].id

    def menu(self, menu_id: str) -> Menu | None:
        for m in self.menus:
            if m.id == menu_id:
                return m
        return None


@dataclass(frozen=True)
class NodePath:
    """Address of one node: menu id plus one segment, or two for a panel child."""

    menu: str
    segments: tuple = ()

    def __str__(self) -> str:
        return "/".join((self.menu, *self.segments))

    @classmethod
    def parse(cls, text: str) -> "NodePath":
        parts = text.split("/")
        if not parts or any(p == "" for p in parts):
            raise NotFound(text)
        return cls(parts[0], tuple(parts[1:]))


def kind_of(node: Node) -> str:
    if isinstance(node, Item):
        return "item"
    if isinstance(node, Separator):
        return "sep"
    if isinstance(node, Panel):
        return "panel"
    if isinstance(node, SubmenuLink):
        return "submenu"
    raise TypeError(f"not a node: {node!r}")


def tier_of(node: Node) -> str | None:
    return getattr(node, "tier", None)


def iter_nodes(menu: Menu):
    """Yield (node, containing_panel_or_None) over a menu, panel children included."""
    for node in menu.nodes:
        yield node, None
        if isinstance(node, Panel):
            for child in node.children:
                yield child, node


def find_node(menu: Menu, node_id: str):
    """Locate a node by id anywhere in the menu; (node, panel) or None."""
    for node, panel in iter_nodes(menu):
        if getattr(node, "id", None) == node_id:
            return node, panel
    return None


# ---------------------------------------------------------------- parsing

def _scan(raw: str, lineno: int):
    """Split a line into ("w", word) and ("q", quoted-label) tokens."""
    toks = []
    i, n = 0, len(raw)
    while i < n:
        c = raw[i]
        if c.isspace():
            i += 1
            continue
        if c == '"':
            j = raw.find('"', i + 1)
            if j < 0:
                raise ParseError(lineno, "unterminated quoted label")
            toks.append(("q", raw[i + 1 : j]))
            i = j + 1
        else:
            j = i
            while j < n and not raw[j].isspace() and raw[j] != '"':
                j += 1
            toks.append(("w", raw[i:j]))
            i = j
    return toks


class _Cursor:
    def __init__(self, toks, lineno):
        self.toks = toks
        self.lineno = lineno
        self.pos = 0

    def take_word(self, what: str) -> str:
        if self.pos >= len(self.toks) or self.toks[self.pos][0] != "w":
            raise ParseError(self.lineno, f"expected {what}")
        val = self.toks[self.pos][1]
        self.pos += 1
        return val

    def take_id(self, what: str) -> str:
        val = self.take_word(what)
        if not _ID_RE.match(val):
            raise ParseError(self.lineno, f"invalid {what} {val!r}")
        return val

    def take_label(self) -> str:
        if self.pos >= len(self.toks) or self.toks[self.pos][0] != "q":
            raise ParseError(self.lineno, "expected quoted label")
        val = self.toks[self.pos][1]
        self.pos += 1
        return val

    def take_kv(self, key: str, what: str) -> str:
        tok = self.take_word(f"{key}=...")
        prefix = key + "="
        if not tok.startswith(prefix):
            raise ParseError(self.lineno, f"expected {key}=..., got {tok!r}")
        val = tok[len(prefix) :]
        if not _ID_RE.match(val):
            raise ParseError(self.lineno, f"invalid {what} {val!r}")
        return val

    def peek_kv(self, key: str) -> bool:
        return (
            self.pos < len(self.toks)
            and self.toks[self.pos][0] == "w"
            and self.toks[self.pos][1].startswith(key + "=")
        )

    def end(self):
        if self.pos != len(self.toks):
            raise ParseError(self.lineno, "unexpected trailing tokens")


def _take_tier(cur: _Cursor) -> str:
    if cur.peek_kv("tier"):
        tier = cur.take_kv("tier", "tier")
        if tier not in TIERS:
            raise ParseError(cur.lineno, f"tier must be core or adaptive, got {tier!r}")
        return tier
    return TIER_ADAPTIVE


def parse_definition(source: str) -> MenuDefinition:
    """Parse definition text; raises ParseError or ValidationError."""
    menus: list[Menu] = []
    menu_open: tuple[str, str, int] | None = None  # id, label, opening line
    menu_nodes: list[Node] = []
    panel_open: tuple[str, str, str, int] | None = None
    panel_children: list[Node] = []
    lineno = 0

    for lineno, raw in enumerate(source.splitlines(), 1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        cur = _Cursor(_scan(raw, lineno), lineno)
        head = cur.take_word("directive")

        if head == "menu":
            if menu_open is not None:
                raise ParseError(lineno, "menu blocks cannot nest")
            mid = cur.take_id("menu id")
            label = cur.take_label()
            cur.end()
            menu_open = (mid, label, lineno)
            menu_nodes = []
        elif head == "end":
            cur.end()
            if panel_open is not None:
                pid, plabel, pstate, _ = panel_open
                menu_nodes.append(Panel(pid, plabel, pstate, tuple(panel_children)))
                panel_open = None
            elif menu_open is not None:
                mid, label, _ = menu_open
                menus.append(Menu(mid, label, tuple(menu_nodes)))
                menu_open = None
            else:
                raise ParseError(lineno, "'end' outside any block")
        elif head == "item":
            if menu_open is None:
                raise ParseError(lineno, "item outside a menu block")
            nid = cur.take_id("item id")
            label = cur.take_label()
            action = cur.take_kv("action", "action id")
            tier = _take_tier(cur)
            cur.end()
            node = Item(nid, label, action, tier)
            (panel_children if panel_open is not None else menu_nodes).append(node)
        elif head == "sep":
            if menu_open is None:
                raise ParseError(lineno, "sep outside a menu block")
            cur.end()
            (panel_children if panel_open is not None else menu_nodes).append(Separator())
        elif head == "panel":
            if menu_open is None:
                raise ParseError(lineno, "panel outside a menu block")
            if panel_open is not None:
                raise ParseError(lineno, "panel blocks cannot nest")
            pid = cur.take_id("panel id")
            label = cur.take_label()
            state = CONTRACTED
            if cur.peek_kv("default"):
                state = cur.take_kv("default", "panel default")
                if state not in PANEL_STATES:
                    raise ParseError(lineno, f"default must be expanded or contracted, got {state!r}")
            cur.end()
            panel_open = (pid, label, state, lineno)
            panel_children = []
        elif head == "submenu":
            if menu_open is None:
                raise ParseError(lineno, "submenu outside a menu block")
            if panel_open is not None:
                raise ParseError(lineno, "panels cannot contain submenu links")
            sid = cur.take_id("submenu id")
            label = cur.take_label()
            arrow = cur.take_word("'->'")
            if arrow != "->":
                raise ParseError(lineno, f"expected '->', got {arrow!r}")
            target = cur.take_id("target menu id")
            tier = _take_tier(cur)
            cur.end()
            menu_nodes.append(SubmenuLink(sid, label, target, tier))
        else:
            raise ParseError(lineno, f"unknown directive {head!r}")

    if panel_open is not None:
        raise ParseError(panel_open[3], f"panel {panel_open[0]!r} never closed")
    if menu_open is not None:
        raise ParseError(menu_open[2], f"menu {menu_open[0]!r} never closed")
    if not menus:
        raise ParseError(max(lineno, 1), "empty definition: no menu blocks")

    defn = MenuDefinition(tuple(menus))
    violations = validate(defn)
    if violations:
        raise ValidationError(violations)
    return defn


# ---------------------------------------------------------- serialization

def _check_label(label: str):
    if '"' in label or "\n" in label:
        raise ValueError(f"label not serializable: {label!r}")


def serialize_definition(defn: MenuDefinition) -> str:
    """Canonical text for a definition. Inverse of parse_definition on valid input."""
    out: list[str] = []
    for m in defn.menus:
        _check_label(m.label)
        out.append(f'menu {m.id} "{m.label}"')
        for node in m.nodes:
            _emit(node, 1, out)
        out.append("end")
    return "\n".join(out) + "\n"


def _emit(node: Node, depth: int, out: list[str]):
    pad = "  " * depth
    if isinstance(node, Item):
        _check_label(node.label)
        out.append(f'{pad}item {node.id} "{node.label}" action={node.action_id} tier={node.tier}')
    elif isinstance(node, Separator):
        out.append(f"{pad}sep")
    elif isinstance(node, Panel):
        _check_label(node.label)
        out.append(f'{pad}panel {node.id} "{node.label}" default={node.default_state}')
        for child in node.children:
            _emit(child, depth + 1, out)
        out.append(f"{pad}end")
    elif isinstance(node, SubmenuLink):
        _check_label(node.label)
        out.append(f'{pad}submenu {node.id} "{node.label}" -> {node.target} tier={node.tier}')
    else:
        raise TypeError(f"not a node: {node!r}")


# -------------------------------------------------------------- validation

def validate(defn: MenuDefinition) -> list[Violation]:
    """Structural check. Returns all violations in deterministic order."""
    if not defn.menus:
        return [Violation("empty-definition", "")]
    out: list[Violation] = []

    menu_ids: set[str] = set()
    for m in defn.menus:
        if m.id in menu_ids:
            out.append(Violation("duplicate-id", m.id))
        menu_ids.add(m.id)

    for m in defn.menus:
        seen: set[str] = set()
        for node in m.nodes:
            if isinstance(node, Separator):
                continue
            path = f"{m.id}/{node.id}"
            if node.id in seen:
                out.append(Violation("duplicate-id", path))
            seen.add(node.id)
            if isinstance(node, Panel):
                for child in node.children:
                    if isinstance(child, (Panel, SubmenuLink)):
                        cid = getattr(child, "id", "?")
                        out.append(Violation("nested-panel", f"{path}/{cid}"))
                    if isinstance(child, Separator):
                        continue
                    cpath = f"{path}/{child.id}"
                    if child.id in seen:
                        out.append(Violation("duplicate-id", cpath))
                    seen.add(child.id)

    # submenu links: targets must exist, link graph must stay acyclic
    edges: dict[str, list[tuple[str, str]]] = {m.id: [] for m in defn.menus}
    for m in defn.menus:
        for node, _panel in iter_nodes(m):
            if isinstance(node, SubmenuLink):
                path = f"{m.id}/{node.id}"
                if node.target not in menu_ids:
                    out.append(Violation("dangling-submenu", path))
                else:
                    edges[m.id].append((node.target, path))

    # iterative three-color DFS in definition order; each back edge is one cycle
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {mid: WHITE for mid in edges}
    for start in (m.id for m in defn.menus):
        if color.get(start) != WHITE:
            continue
        stack: list[tuple[str, int]] = [(start, 0)]
        color[start] = GRAY
        while stack:
            mid, idx = stack[-1]
            outgoing = edges.get(mid, [])
            if idx < len(outgoing):
                stack[-1] = (mid, idx + 1)
                target, path = outgoing[idx]
                state = color.get(target, BLACK)
                if state == GRAY:
                    out.append(Violation("cycle", path))
                elif state == WHITE:
                    color[target] = GRAY
                    stack.append((target, 0))
            else:
                color[mid] = BLACK
                stack.pop()
    return out


def resolve_path(defn: MenuDefinition, path: NodePath) -> Node:
    """Resolve a path to its node; raises NotFound."""
    menu = defn.menu(path.menu)
    if menu is None:
        raise NotFound(str(path))
    segs = path.segments
    if len(segs) == 1:
        for node in menu.nodes:
            if getattr(node, "id", None) == segs[0]:
                return node
        raise NotFound(str(path))
    if len(segs) == 2:
        for node in menu.nodes:
            if isinstance(node, Panel) and node.id == segs[0]:
                for child in node.children:
                    if getattr(child, "id", None) == segs[1]:
                        return child
                raise NotFound(str(path))
        raise NotFound(str(path))
    raise NotFound(str(path))
