import random

import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from adaptmenu.model import (
    Item,
    Menu,
    MenuDefinition,
    NodePath,
    NotFound,
    Panel,
    ParseError,
    Separator,
    SubmenuLink,
    ValidationError,
    parse_definition,
    resolve_path,
    serialize_definition,
    validate,
)

from util import random_definition

MINIMAL = 'menu m1 "File"\n  item open "Open" action=act.open tier=core\nend\n'


# ------------------------------------------------------------- parsing

def test_parse_minimal():
    defn = parse_definition(MINIMAL)
    assert [m.id for m in defn.menus] == ["m1"]
    (item,) = defn.menus[0].nodes
    assert item == Item("open", "Open", "act.open", "core")


def test_root_is_first_menu():
    defn = parse_definition(MINIMAL + 'menu m2 "Edit"\nend\n')
    assert defn.root == "m1"


def test_parse_indentation_ignored():
    wonky = 'menu m1 "File"\nitem open "Open" action=act.open tier=core\n        end\n'
    assert parse_definition(wonky) == parse_definition(MINIMAL)


def test_parse_comments_and_blanks_ignored():
    src = '# header\n\nmenu m1 "File"\n  # inner\n  item a "A" action=x\n\nend\n'
    defn = parse_definition(src)
    assert len(defn.menus[0].nodes) == 1


def test_tier_defaults_to_adaptive():
    defn = parse_definition('menu m "M"\n  item a "A" action=x\nend\n')
    assert defn.menus[0].nodes[0].tier == "adaptive"


def test_panel_default_state_defaults_to_contracted():
    defn = parse_definition('menu m "M"\n  panel p "P"\n  end\nend\n')
    assert defn.menus[0].nodes[0].default_state == "contracted"


def test_parse_full_grammar():
    src = (
        'menu m "Main"\n'
        '  item a "A" action=act.a tier=core\n'
        "  sep\n"
        '  panel p "Group" default=expanded\n'
        '    item b "B" action=act.b\n'
        "    sep\n"
        "  end\n"
        '  submenu s "Sub" -> m2 tier=core\n'
        "end\n"
        'menu m2 "Other"\nend\n'
    )
    defn = parse_definition(src)
    m = defn.menus[0]
    assert isinstance(m.nodes[1], Separator)
    panel = m.nodes[2]
    assert panel.default_state == "expanded"
    assert isinstance(panel.children[1], Separator)
    link = m.nodes[3]
    assert (link.target, link.tier) == ("m2", "core")


@pytest.mark.parametrize("node_id", ["a", "A9", "x_y", "a.b.c", "a-b", "0", "_"])
def test_id_charset_accepted(node_id):
    defn = parse_definition(f'menu m "M"\n  item {node_id} "L" action=x\nend\n')
    assert defn.menus[0].nodes[0].id == node_id


@pytest.mark.parametrize("bad", ["a b", "a/b", "", "é", "a#b"])
def test_id_charset_rejected(bad):
    with pytest.raises(ParseError):
        parse_definition(f'menu m "M"\n  item "{bad}" "L" action=x\nend\n'
                         if bad == "" else
                         f'menu m "M"\n  item {bad} "L" action=x\nend\n')


def test_parse_error_carries_line_number():
    with pytest.raises(ParseError) as exc:
        parse_definition('menu m "M"\n  bogus\nend\n')
    assert exc.value.line == 2


def test_unclosed_menu_reports_opening_line():
    with pytest.raises(ParseError) as exc:
        parse_definition('menu m "M"\n  item a "A" action=x\n')
    assert exc.value.line == 1


def test_unclosed_panel_reports_opening_line():
    with pytest.raises(ParseError) as exc:
        parse_definition('menu m "M"\n  panel p "P"\n')
    assert exc.value.line == 2


def test_empty_source_rejected():
    with pytest.raises(ParseError):
        parse_definition("# only a comment\n")


def test_item_requires_action():
    with pytest.raises(ParseError):
        parse_definition('menu m "M"\n  item a "A"\nend\n')


def test_body_outside_menu_rejected():
    with pytest.raises(ParseError) as exc:
        parse_definition('item a "A" action=x\n')
    assert exc.value.line == 1


def test_submenu_inside_panel_rejected():
    with pytest.raises(ParseError):
        parse_definition(
            'menu m "M"\n  panel p "P"\n    submenu s "S" -> m\n  end\nend\n'
        )


def test_panel_inside_panel_rejected():
    with pytest.raises(ParseError):
        parse_definition(
            'menu m "M"\n  panel p "P"\n    panel q "Q"\n    end\n  end\nend\n'
        )


def test_unterminated_label_rejected():
    with pytest.raises(ParseError):
        parse_definition('menu m "M\nend\n')


def test_trailing_junk_rejected():
    with pytest.raises(ParseError):
        parse_definition('menu m "M" extra\nend\n')


# -------------------------------------------------------- serialization

def test_serialize_minimal_is_canonical():
    assert serialize_definition(parse_definition(MINIMAL)) == MINIMAL


def test_serialize_prints_tier_always():
    src = 'menu m "M"\n  item a "A" action=x\nend\n'
    assert "tier=adaptive" in serialize_definition(parse_definition(src))


def test_serialize_prints_panel_default_always():
    src = 'menu m "M"\n  panel p "P"\n  end\nend\n'
    assert "default=contracted" in serialize_definition(parse_definition(src))


def test_serialize_canonicalizes_spacing():
    wonky = 'menu   m1   "File"\nitem open "Open"   action=act.open   tier=core\nend\n'
    assert serialize_definition(parse_definition(wonky)) == MINIMAL


def test_serialize_rejects_unprintable_label():
    defn = MenuDefinition((Menu("m", 'bad "quote', (Item("a", "A", "x"),)),))
    with pytest.raises(ValueError):
        serialize_definition(defn)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10**9))
def test_parse_serialize_round_trip(seed):
    defn = random_definition(random.Random(seed))
    text = serialize_definition(defn)
    assert parse_definition(text) == defn
    assert serialize_definition(parse_definition(text)) == text


# ----------------------------------------------------------- validation

def _valid_three_menus() -> MenuDefinition:
    return parse_definition(
        'menu a "A"\n  submenu sb "B" -> b\nend\n'
        'menu b "B"\n  submenu sc "C" -> c\nend\n'
        'menu c "C"\n  item x "X" action=x\nend\n'
    )


def test_validate_ok():
    assert validate(_valid_three_menus()) == []


def test_duplicate_node_id_within_menu():
    defn = MenuDefinition((Menu("m", "M", (Item("a", "A", "x"), Item("a", "B", "y"))),))
    kinds = [(v.kind, v.path) for v in validate(defn)]
    assert ("duplicate-id", "m/a") in kinds


def test_duplicate_across_menus_allowed():
    src = ('menu m1 "A"\n  item a "A" action=x\nend\n'
           'menu m2 "B"\n  item a "A" action=x\nend\n')
    assert validate(parse_definition(src)) == []


def test_panel_child_shares_menu_namespace():
    defn = MenuDefinition((Menu("m", "M", (
        Item("a", "A", "x"),
        Panel("p", "P", "expanded", (Item("a", "Dup", "y"),)),
    )),))
    assert any(v.kind == "duplicate-id" for v in validate(defn))


def test_duplicate_menu_id():
    defn = MenuDefinition((Menu("m", "A", ()), Menu("m", "B", ())))
    assert any(v.kind == "duplicate-id" and v.path == "m" for v in validate(defn))


def test_dangling_submenu():
    with pytest.raises(ValidationError) as exc:
        parse_definition('menu m1 "A"\n  submenu s1 "B" -> m2\nend\n')
    assert (exc.value.kind, exc.value.path) == ("dangling-submenu", "m1/s1")


def test_two_cycle():
    with pytest.raises(ValidationError) as exc:
        parse_definition(
            'menu a "A"\n  submenu sb "B" -> b\nend\n'
            'menu b "B"\n  submenu sa "A" -> a\nend\n'
        )
    assert exc.value.kind == "cycle"


def test_self_cycle():
    with pytest.raises(ValidationError) as exc:
        parse_definition('menu a "A"\n  submenu sa "Again" -> a\nend\n')
    assert exc.value.kind == "cycle"


def test_nested_panel_flagged_on_constructed_tree():
    inner = Panel("q", "Q", "expanded", ())
    defn = MenuDefinition((Menu("m", "M", (Panel("p", "P", "expanded", (inner,)),)),))
    assert any(v.kind == "nested-panel" for v in validate(defn))


def test_submenu_link_inside_panel_flagged():
    defn = MenuDefinition((
        Menu("m", "M", (Panel("p", "P", "expanded", (SubmenuLink("s", "S", "m2"),)),)),
        Menu("m2", "Other", ()),
    ))
    assert any(v.kind == "nested-panel" for v in validate(defn))


def test_empty_definition_invalid():
    assert any(v.kind == "empty-definition" for v in validate(MenuDefinition(())))


def _link_graph(defn: MenuDefinition) -> nx.DiGraph:
    g = nx.DiGraph()
    for menu in defn.menus:
        g.add_node(menu.id)
        for node in menu.nodes:
            if isinstance(node, SubmenuLink):
                g.add_edge(menu.id, node.target)
    return g


def test_injected_back_link_yields_exactly_one_cycle():
    # ten menus in a chain, one deliberate back edge
    rng = random.Random(99)
    parts = []
    for i in range(10):
        body = f'  item it{i} "I" action=x\n'
        if i < 9:
            body += f'  submenu s{i} "Next" -> c{i + 1}\n'
        parts.append(f'menu c{i} "Menu"\n{body}end\n')
    src = "".join(parts)
    defn = parse_definition(src)
    assert validate(defn) == []
    # inject the back link structurally
    back = rng.randint(0, 5)
    menus = list(defn.menus)
    tail = menus[9]
    menus[9] = Menu(tail.id, tail.label,
                    tail.nodes + (SubmenuLink("back", "Back", f"c{back}"),))
    broken = MenuDefinition(tuple(menus))
    violations = [v for v in validate(broken) if v.kind == "cycle"]
    assert len(violations) == 1
    assert not nx.is_directed_acyclic_graph(_link_graph(broken))


@settings(max_examples=120, deadline=None)
@given(st.integers(0, 10**9))
def test_cycle_detection_matches_graph_oracle(seed):
    rng = random.Random(seed)
    defn = random_definition(rng)
    # generator links strictly forward, so the oracle must agree it's a DAG
    assert validate(defn) == []
    assert nx.is_directed_acyclic_graph(_link_graph(defn))
    # now wire a random back/self edge and both must flag it
    menus = list(defn.menus)
    src_i = rng.randrange(len(menus))
    dst_i = rng.randint(0, src_i)
    tgt = menus[src_i]
    menus[src_i] = Menu(tgt.id, tgt.label,
                        tgt.nodes + (SubmenuLink("zz-back", "Back", menus[dst_i].id),))
    broken = MenuDefinition(tuple(menus))
    has_cycle = any(v.kind == "cycle" for v in validate(broken))
    assert has_cycle == (not nx.is_directed_acyclic_graph(_link_graph(broken)))


# ----------------------------------------------------------- path lookup

def test_resolve_top_level():
    defn = parse_definition(MINIMAL)
    node = resolve_path(defn, NodePath("m1", ("open",)))
    assert isinstance(node, Item) and node.id == "open"


def test_resolve_missing_raises():
    defn = parse_definition(MINIMAL)
    with pytest.raises(NotFound):
        resolve_path(defn, NodePath("m1", ("missing",)))


def test_resolve_panel_child():
    defn = parse_definition(
        'menu m "M"\n  panel p1 "P"\n    item it3 "X" action=x\n  end\nend\n'
    )
    node = resolve_path(defn, NodePath("m", ("p1", "it3")))
    assert node.id == "it3"


def test_resolve_unknown_menu():
    defn = parse_definition(MINIMAL)
    with pytest.raises(NotFound):
        resolve_path(defn, NodePath("nope", ("open",)))


def test_node_path_string_round_trip():
    p = NodePath("m", ("p1", "it3"))
    assert str(p) == "m/p1/it3"
    assert NodePath.parse("m/p1/it3") == p
