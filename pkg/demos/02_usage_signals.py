"""
From raw selections to a ranking score
======================================

"""

from adaptmenu import DEFAULT_CONFIG, UsageEvent, UsageLog, snapshot
from adaptmenu.heuristics import rank

DAY = 86_400
T0 = 1_700_000_000  # some midnight-ish anchor, exact value irrelevant

log = UsageLog()

# Three commands with different habits. "daily" is used every morning,
# "binge" was hammered once last week, "fresh" was touched a minute ago.
# The log only accepts non-decreasing timestamps, so sort before feeding.
moments = [("daily", T0 - back * DAY + 9 * 3600) for back in range(10, 0, -1)]
moments += [("binge", T0 - 7 * DAY + 13 * 3600 + k * 60) for k in range(12)]
moments.append(("fresh", T0 + 9 * 3600 - 60))
for node, t in sorted(moments, key=lambda m: m[1]):
    log.record(UsageEvent(t=t, session="me", kind="select",
                          menu="tools", node=node))

# A snapshot freezes the three factors per node at one instant:
#   f_hat  decayed selection count, normalized by the global max
#   r      half-life of the time since the last selection
#   tau    share of the node's selections landing in the current hour
now = T0 + 9 * 3600  # nine in the morning
snap = snapshot(log, now, DEFAULT_CONFIG)

print(f"{'node':8} {'f_hat':>7} {'r':>7} {'tau':>7} {'s':>7}")
for sc in rank(snap, "tools", ["daily", "binge", "fresh"]):
    print(f"{sc.node:8} {sc.f_hat:7.3f} {sc.r:7.3f} {sc.tau:7.3f} {sc.s:7.3f}")

# At 09:00 the morning habit wins: binge decayed for a week, fresh has
# recency but no track record. Twelve hours on, fresh's recency has
# faded and binge's sheer decayed count moves it back past fresh.
evening = now + 12 * 3600
snap2 = snapshot(log, evening, DEFAULT_CONFIG)
print()
print("at 21:00:", [sc.node for sc in rank(snap2, "tools",
                                           ["daily", "binge", "fresh"])])
