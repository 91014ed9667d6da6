"""
Editing definitions without breaking them
=========================================

"""

from adaptmenu import parse_definition, serialize_definition
from adaptmenu.editor import (
    EditError,
    InsertNode,
    MoveNode,
    apply_edit,
    apply_script,
    parse_script,
)
from adaptmenu.model import Item, NodePath

defn = parse_definition(
    'menu m "Main"\n'
    '  item a "Alpha" action=x.a tier=core\n'
    '  item b "Beta" action=x.b\n'
    "end\n"
)

# Ops are values; apply_edit returns a new definition, the input is
# never touched. Failed ops raise EditError and change nothing.
grown = apply_edit(defn, InsertNode(NodePath("m", ()), 1,
                                    Item("mid", "Middle", "x.mid")))
print([n.id for n in grown.menus[0].nodes])

try:
    apply_edit(grown, InsertNode(NodePath("m", ()), 0,
                                 Item("a", "Dup", "x.dup")))
except EditError as e:
    print("rejected:", e.kind)

# Moves are index-addressed within the destination after removal, so a
# move is undone by moving back to the old index.
moved = apply_edit(grown, MoveNode(NodePath("m", ("a",)), NodePath("m", ()), 2))
back = apply_edit(moved, MoveNode(NodePath("m", ("a",)), NodePath("m", ()), 0))
assert back == grown

# The script form is the same ops as text, applied atomically: if any
# line fails, the whole batch is discarded.
script = """
add-menu extras "Extras"
link m/more "More" -> extras
insert extras 0 item e1 "First Extra" action=x.e1
rename m/b "Renamed Beta"
"""
final = apply_script(grown, parse_script(script))
print()
print(serialize_definition(final))

bad = script + "remove m/ghost\n"
try:
    apply_script(grown, parse_script(bad))
except EditError as e:
    print(f"batch dropped at op {e.op_index}: {e.kind}")
