"""
Watching a short menu adapt
===========================

"""

from adaptmenu import (
    DEFAULT_CONFIG,
    HeuristicConfig,
    SessionState,
    UsageLog,
    compose_view,
    parse_definition,
    snapshot,
)
from adaptmenu.session import expand_menu, open_menu, pin_item, select

SOURCE = "".join(
    f'  item c{i} "Command {i}" action=a.c{i}\n' for i in range(1, 13))
defn = parse_definition('menu m "Big"\n'
                        '  item home "Home" action=a.home tier=core\n'
                        + SOURCE + "end\n")

cfg = HeuristicConfig(k=3)  # tiny budget so the squeeze is visible
log = UsageLog(half_life_f=cfg.half_life_f)
state = SessionState(session="me", clock=1_700_000_000)


def show(label):
    snap = snapshot(log, state.clock + 1, cfg)
    view = compose_view(defn, "m", snap, state, cfg, mode="short")
    row = " | ".join(e.label + ("*" if e.pinned else "") for e in view.entries)
    print(f"{label:24} [{row}] truncated={view.truncated}")


show("fresh session")

# Use three commands with different intensity. The short view keeps the
# core item and fills its 3 adaptive slots by score.
t = state.clock
for node, times in [("c7", 5), ("c2", 3), ("c11", 1)]:
    for _ in range(times):
        t += 600
        state = select(state, defn, log, "m", node, t)
show("after some use")

# c4 never scored, but pinning forces it in, on top of the budget.
state = open_menu(state, defn, "m")
state = pin_item(state, defn, log, "m", "c4")
show("c4 pinned")

# The session remembers expansion per menu: once expanded, the menu
# stays long until collapsed again.
state = expand_menu(state, defn, log, "m")
snap = snapshot(log, t + 1, cfg)
view = compose_view(defn, "m", snap, state, cfg)
print(f"{'expanded':24} {len(view.entries)} entries, mode={view.mode}")
