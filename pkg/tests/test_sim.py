import bisect
import itertools
import math
import random

import pytest

from adaptmenu.heuristics import DEFAULT_CONFIG, HeuristicConfig
from adaptmenu.model import parse_definition, serialize_definition, validate
from adaptmenu.session import SessionState, open_menu, pin_item, set_panel
from adaptmenu.sim import (
    CostReport,
    SplitMix64,
    UnknownTarget,
    navigation_cost,
    replay,
    report_tsv,
    synth_definition,
    synth_trace,
    zipf_cdf,
)
from adaptmenu.usage import UsageEvent, UsageLog, snapshot

T0 = 1_700_000_000


# ------------------------------------------------------------ generator

def test_generator_reference_vector():
    # first outputs for seed 0 of the published fixed-increment generator
    g = SplitMix64(0)
    assert [g.next_u64() for _ in range(3)] == [
        0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F,
    ]


def test_generator_unit_interval():
    g = SplitMix64(12345)
    for _ in range(1000):
        u = g.next_float()
        assert 0.0 <= u < 1.0


def test_zipf_cdf_shape():
    cdf = zipf_cdf(10, 1.2)
    assert len(cdf) == 10
    assert all(a < b for a, b in zip(cdf, cdf[1:]))
    assert cdf[-1] == 1.0


def test_synth_empty_trace():
    assert synth_trace(5, 1.0, 0, 1, T0, 60) == []


def test_synth_degenerate_distribution_hits_first_item():
    trace = synth_trace(10, 50.0, 200, 7, T0, 60)
    assert {e.node for e in trace} == {"i1"}


def test_synth_timestamps_arithmetic():
    trace = synth_trace(5, 1.0, 10, 3, T0, 600)
    assert [e.t for e in trace] == [T0 + k * 600 for k in range(10)]
    assert all(e.kind == "select" and e.menu == "m" for e in trace)


def test_synth_matches_independent_resampler():
    # reimplement the whole pipeline in different code: accumulate the
    # CDF, step the mixer inline, search with the bisect module
    n, s, m, seed = 30, 1.2, 500, 42
    weights = [math.pow(i, -s) for i in range(1, n + 1)]
    total = sum(weights)
    cdf = [c / total for c in itertools.accumulate(weights)]
    cdf[-1] = 1.0

    mask = (1 << 64) - 1
    state = seed

    def nxt():
        nonlocal state
        state = (state + 0x9E3779B97F4A7C15) & mask
        z = state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & mask
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & mask
        return (z ^ (z >> 31)) / 2.0 ** 64

    expect = []
    for k in range(m):
        idx = min(bisect.bisect_right(cdf, nxt()), n - 1)
        expect.append((T0 + k * 600, f"i{idx + 1}"))

    trace = synth_trace(n, s, m, seed, T0, 600)
    assert [(e.t, e.node) for e in trace] == expect


def test_synth_top8_mass_near_cdf():
    n, s, m = 30, 1.2, 500
    trace = synth_trace(n, s, m, 42, T0, 600)
    top8 = sum(1 for e in trace if int(e.node[1:]) <= 8) / m
    weights = [i ** -s for i in range(1, n + 1)]
    expect = sum(weights[:8]) / sum(weights)
    assert abs(top8 - expect) < 0.06  # ~3 sigma at 500 draws


def test_synth_definition_is_valid_shuffle():
    defn = synth_definition(30, 42)
    assert validate(defn) == []
    ids = [n.id for n in defn.menus[0].nodes]
    assert sorted(ids, key=lambda x: int(x[1:])) == [f"i{i}" for i in range(1, 31)]
    assert ids != [f"i{i}" for i in range(1, 31)]  # display order decorrelated
    assert synth_definition(30, 42) == defn
    assert synth_definition(30, 43) != defn


def test_synth_definition_independent_of_trace_stream():
    # same seed must give the same trace whether or not the definition
    # was generated in between
    a = synth_trace(10, 1.1, 50, 9, T0, 60)
    synth_definition(10, 9)
    b = synth_trace(10, 1.1, 50, 9, T0, 60)
    assert a == b


# ------------------------------------------------------ navigation cost

def flat_menu(n=10):
    lines = ['menu m "M"'] + [f'  item i{i} "I{i}" action=a{i}' for i in range(n)]
    return parse_definition("\n".join(lines) + "\nend\n")


def logged(events):
    log = UsageLog(half_life_f=DEFAULT_CONFIG.half_life_f)
    for e in events:
        log.record(e)
    return log


def sel(t, node, menu="m"):
    return UsageEvent(t=t, session="s1", kind="select", menu=menu, node=node)


def test_cost_short_view_position_one():
    defn = flat_menu()
    log = logged([sel(T0, "i3")])
    snap = snapshot(log, T0 + 10, DEFAULT_CONFIG)
    cost = navigation_cost(defn, SessionState(), snap, DEFAULT_CONFIG, "m", "i3")
    assert cost == 2  # open + first entry


def test_cost_short_miss_then_long():
    defn = flat_menu()
    log = logged([sel(T0, "i0"), sel(T0 + 1, "i1"), sel(T0 + 2, "i2")])
    snap = snapshot(log, T0 + 10, DEFAULT_CONFIG)
    # short view holds 3 entries; i6 sits at position 7 of the long view
    cost = navigation_cost(defn, SessionState(), snap, DEFAULT_CONFIG, "m", "i6")
    assert cost == 1 + 3 + 1 + 7


def test_cost_static_policy_long_position():
    defn = flat_menu()
    trace = [sel(T0, "i6")]
    report = replay(defn, trace, DEFAULT_CONFIG, policy="static")
    assert report.total_cost == 1 + 7


def test_cost_contracted_panel_adds_expand_step():
    defn = parse_definition(
        'menu m "M"\n'
        '  item a "A" action=xa tier=core\n'
        '  panel p "Grp" default=contracted\n'
        '    item b "B" action=xb tier=core\n'
        "  end\n"
        "end\n"
    )
    snap = snapshot(logged([]), T0, DEFAULT_CONFIG)
    # fresh session opens short: [a, p] misses (2+1), the long view still
    # hides b, expanding the panel (+1) recounts it to position 3
    cost = navigation_cost(defn, SessionState(), snap, DEFAULT_CONFIG, "m", "b")
    assert cost == 1 + (2 + 1) + 1 + 3
    state = set_panel(SessionState(), defn, UsageLog(half_life_f=1.0), "m", "p", "expanded")
    # expanded up front: b shows in the short view at position 3
    assert navigation_cost(defn, state, snap, DEFAULT_CONFIG, "m", "b") == 1 + 3


def test_cost_recurses_through_submenu():
    defn = parse_definition(
        'menu root "R"\n'
        '  item r1 "R1" action=x1 tier=core\n'
        '  submenu go "Go" -> leaf tier=core\n'
        "end\n"
        'menu leaf "L"\n'
        '  item z "Z" action=xz tier=core\n'
        "end\n"
    )
    snap = snapshot(logged([]), T0, DEFAULT_CONFIG)
    # open root (1) + link at position 2 + entry at position 1 inside leaf
    cost = navigation_cost(defn, SessionState(), snap, DEFAULT_CONFIG, "leaf", "z")
    assert cost == 1 + 2 + 1


def test_cost_unknown_targets():
    defn = flat_menu()
    snap = snapshot(logged([]), T0, DEFAULT_CONFIG)
    with pytest.raises(UnknownTarget):
        navigation_cost(defn, SessionState(), snap, DEFAULT_CONFIG, "m", "zz")
    with pytest.raises(UnknownTarget):
        navigation_cost(defn, SessionState(), snap, DEFAULT_CONFIG, "zz", "i0")
    unreachable = parse_definition(
        'menu a "A"\n  item x "X" action=ax\nend\n'
        'menu b "B"\n  item y "Y" action=ay\nend\n'
    )
    snap2 = snapshot(logged([]), T0, DEFAULT_CONFIG)
    with pytest.raises(UnknownTarget):
        navigation_cost(unreachable, SessionState(), snap2, DEFAULT_CONFIG, "b", "y")


# -------------------------------------------------------------- replay

def test_replay_single_event_static_mean():
    defn = flat_menu()
    report = replay(defn, [sel(T0, "i4")], DEFAULT_CONFIG, policy="static")
    assert report.selections == 1
    assert report.mean_cost == 1 + 5


def test_replay_repeated_item_drops_to_two():
    defn = flat_menu()
    trace = [sel(T0 + k, "i7") for k in range(5)]
    report = replay(defn, trace, DEFAULT_CONFIG, policy="adaptive")
    # first selection: open 1 + empty short miss 1 + long position 8
    assert report.total_cost == (1 + 0 + 1 + 8) + 4 * 2
    (row,) = report.rows
    assert (row.node, row.selections) == ("i7", 5)


def test_replay_applies_non_select_events():
    defn = flat_menu()
    log_events = [
        UsageEvent(t=T0, session="s1", kind="pin_item", menu="m", node="i9"),
        sel(T0 + 60, "i9"),
    ]
    report = replay(defn, log_events, DEFAULT_CONFIG, policy="adaptive")
    # the pin means the very first selection already sits in the short view
    assert report.total_cost == 2
    static = replay(defn, log_events, DEFAULT_CONFIG, policy="static")
    assert static.total_cost == 1 + 10  # state ignored, long position 10


def test_replay_panel_events_change_costs():
    defn = parse_definition(
        'menu m "M"\n'
        '  panel p "Grp" default=contracted\n'
        '    item b "B" action=xb tier=core\n'
        "  end\n"
        "end\n"
    )
    bare = replay(defn, [sel(T0, "b")], DEFAULT_CONFIG, policy="adaptive")
    # short [p] misses (1+1), long still hides b, panel expand (+1) then
    # recounted position 2
    assert bare.total_cost == 1 + (1 + 1) + 1 + 2
    prepped = [
        UsageEvent(t=T0, session="s1", kind="panel_expand", menu="m", node="p"),
        sel(T0 + 1, "b"),
    ]
    assert replay(defn, prepped, DEFAULT_CONFIG, policy="adaptive").total_cost == 1 + 2


def test_replay_unknown_target_carries_line():
    defn = flat_menu(3)
    with pytest.raises(UnknownTarget) as exc:
        replay(defn, [sel(T0, "i0"), sel(T0 + 1, "zz")], DEFAULT_CONFIG)
    assert exc.value.line == 2


def test_replay_rejects_bad_policy():
    with pytest.raises(ValueError):
        replay(flat_menu(), [], DEFAULT_CONFIG, policy="optimal")


def test_replay_deterministic_report():
    defn = synth_definition(12, 5)
    trace = synth_trace(12, 1.1, 80, 5, T0, 300)
    a = report_tsv(replay(defn, trace, DEFAULT_CONFIG, policy="adaptive"))
    b = report_tsv(replay(defn, trace, DEFAULT_CONFIG, policy="adaptive"))
    assert a == b
    assert a.startswith("# policy\tadaptive\n")


def test_cost_lower_bound_two():
    defn = synth_definition(10, 3)
    trace = synth_trace(10, 1.3, 60, 3, T0, 120)
    for policy in ("adaptive", "static"):
        report = replay(defn, trace, DEFAULT_CONFIG, policy=policy)
        assert report.total_cost >= 2 * report.selections


def test_report_rows_in_definition_order():
    defn = synth_definition(10, 3)
    order = [n.id for n in defn.menus[0].nodes]
    trace = synth_trace(10, 1.3, 60, 3, T0, 120)
    report = replay(defn, trace, DEFAULT_CONFIG, policy="static")
    got = [r.node for r in report.rows]
    assert got == [n for n in order if n in set(got)]


def test_mean_cost_consistency():
    report = CostReport(policy="static", selections=4, total_cost=18, expansions=0)
    assert report.mean_cost == 4.5
    assert CostReport(policy="static", selections=0, total_cost=0,
                      expansions=0).mean_cost == 0.0
