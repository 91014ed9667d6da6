"""
Defining menus in the line-oriented format
==========================================

"""

from adaptmenu import parse_definition, serialize_definition, validate
from adaptmenu.editor import render_branches

# A definition is plain text: menus, items with an action binding, panels,
# separators, links to other menus. Two tiers exist. core items are always
# shown; adaptive ones compete for slots in the short view.
SOURCE = """
menu file "File"
  item new "New" action=app.new tier=core
  item open "Open" action=app.open tier=core
  sep
  item export_pdf "Export as PDF" action=app.export.pdf
  item export_png "Export as PNG" action=app.export.png
  panel recent "Recent" default=contracted
    item r1 "notes.txt" action=app.recent.1
    item r2 "budget.ods" action=app.recent.2
  end
  submenu share "Share" -> share
end

menu share "Share"
  item mail "Mail" action=app.share.mail tier=core
  item link "Copy Link" action=app.share.link
end
"""

defn = parse_definition(SOURCE)
print("menus:", [m.id for m in defn.menus])

# validate() returns a list of violations; empty means well-formed.
# It catches duplicate ids, dangling submenu targets, link cycles,
# and panels nested inside panels.
print("violations:", validate(defn))

# Omitted attributes get filled in: tier defaults to adaptive, panel
# default to contracted. The canonical serializer always prints them.
print()
print(serialize_definition(defn))

# Round trip is exact: parsing canonical text and serializing again
# reproduces it byte for byte. This is what makes the file safe to
# regenerate from tools without churning diffs.
assert serialize_definition(parse_definition(serialize_definition(defn))) \
    == serialize_definition(defn)

# render_branches gives the editor's compact outline for chosen subtrees
print(render_branches(defn, ["file/recent", "share"]))
