"""Command-line entry points.

Exit codes: 0 success, 1 content failure (invalid definition, bad log,
failed edit, unreachable replay target), 2 usage error or unreadable
file. All report output is tab-separated with floats printed to six
places so runs are byte-comparable.
"""

from __future__ import annotations

import argparse
import sys

from . import editor, heuristics, model, service, sim
from .session import (
    SessionState,
    StateParseError,
    compose_view,
    load_state,
)
from .usage import LogParseError, OutOfOrderEvent, load_log, snapshot, write_log

_CONTENT_ERRORS = (
    model.ParseError,
    model.ValidationError,
    heuristics.ConfigError,
    LogParseError,
    StateParseError,
    OutOfOrderEvent,
    editor.EditError,
    editor.ScriptParseError,
    sim.UnknownTarget,
    ValueError,
)


def _read(path: str) -> str:
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _load_definition(path: str) -> model.MenuDefinition:
    return model.parse_definition(_read(path))


def _load_config(path: str | None) -> heuristics.HeuristicConfig:
    if path is None:
        return heuristics.DEFAULT_CONFIG
    return heuristics.parse_config(_read(path))


def _fail_lines(exc: Exception) -> list[str]:
    if isinstance(exc, model.ValidationError):
        return [f"{v.path}: {v.kind}" for v in exc.violations]
    return [str(exc)]


# ----------------------------------------------------------- subcommands

def cmd_validate(args) -> int:
    _load_definition(args.file)
    print("ok")
    return 0


def _format_view(view) -> str:
    lines = [f"menu {view.menu} {view.mode} truncated={'true' if view.truncated else 'false'}"]
    for e in view.entries:
        flags = []
        if e.pinned:
            flags.append("pinned")
        if e.panel_state is not None:
            flags.append(e.panel_state)
        lines.append("\t".join([
            str(e.pos), e.kind, e.node if e.node is not None else "-",
            f'"{e.label}"', ",".join(flags) if flags else "-",
        ]))
    return "\n".join(lines) + "\n"


def cmd_render(args) -> int:
    defn = _load_definition(args.file)
    config = _load_config(args.config)
    log = load_log(args.log, half_life_f=config.half_life_f,
                   tz_offset=config.tz_offset)
    if args.state is not None:
        state, warnings = load_state(args.state, defn, clock=args.at)
        for w in warnings:
            print(f"warning: {w}", file=sys.stderr)
    else:
        state = SessionState(clock=args.at)
    snap = snapshot(log, args.at, config)
    view = compose_view(defn, args.menu, snap, state, config, mode=args.mode)
    sys.stdout.write(_format_view(view))
    return 0


def cmd_scores(args) -> int:
    defn = _load_definition(args.file)
    config = _load_config(args.config)
    log = load_log(args.log, half_life_f=config.half_life_f,
                   tz_offset=config.tz_offset)
    snap = snapshot(log, args.at, config)
    out = ["node\tf_hat\tr\ttau\ts\trank"]
    for menu in defn.menus:
        nodes = [n.id for n, _p in model.iter_nodes(menu)
                 if isinstance(n, (model.Item, model.SubmenuLink))]
        for i, sc in enumerate(heuristics.rank(snap, menu.id, nodes, config), 1):
            out.append(f"{menu.id}/{sc.node}\t{sc.f_hat:.6f}\t{sc.r:.6f}"
                       f"\t{sc.tau:.6f}\t{sc.s:.6f}\t{i}")
    sys.stdout.write("\n".join(out) + "\n")
    return 0


def cmd_synth(args) -> int:
    if args.items < 1 or args.zipf <= 0 or args.step < 1 or args.events < 0:
        print("synth: need items >= 1, zipf > 0, step >= 1, events >= 0",
              file=sys.stderr)
        return 2
    trace = sim.synth_trace(args.items, args.zipf, args.events, args.seed,
                            args.start, args.step)
    write_log(args.out, trace)
    # the matching definition goes to stdout so replay has something to
    # run against
    defn = sim.synth_definition(args.items, args.seed)
    sys.stdout.write(model.serialize_definition(defn))
    return 0


def cmd_replay(args) -> int:
    defn = _load_definition(args.file)
    config = _load_config(args.config)
    trace = load_log(args.trace, half_life_f=config.half_life_f,
                     tz_offset=config.tz_offset).events
    report = sim.replay(defn, trace, config, policy=args.policy)
    with open(args.report, "w", encoding="utf-8") as fh:
        fh.write(sim.report_tsv(report))
    print(f"{report.policy} selections={report.selections} "
          f"total_cost={report.total_cost} mean_cost={report.mean_cost:.6f}")
    return 0


def cmd_edit(args) -> int:
    defn = _load_definition(args.file)
    if args.script == "show":
        if not args.path:
            print("edit show: at least one --path required", file=sys.stderr)
            return 2
        sys.stdout.write(editor.render_branches(defn, args.path))
        return 0
    if args.path:
        print("edit: --path only applies to `edit FILE show`", file=sys.stderr)
        return 2
    ops = editor.parse_script(_read(args.script))
    edited = editor.apply_script(defn, ops)
    text = model.serialize_definition(edited)
    if args.in_place:
        with open(args.file, "w", encoding="utf-8") as fh:
            fh.write(text)
    elif args.out is not None:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_serve(args) -> int:
    # validate up front so a bad definition aborts before the port binds
    _load_definition(args.file)
    service.serve(args.file, args.log, args.state, args.port)
    return 0


# ----------------------------------------------------------------- main

def _build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="adaptmenu",
                                description="Usage-adaptive menu engine.")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("validate", help="check a menu definition file")
    sp.add_argument("file")
    sp.set_defaults(fn=cmd_validate)

    sp = sub.add_parser("render", help="print one composed menu view")
    sp.add_argument("file")
    sp.add_argument("--menu", required=True)
    sp.add_argument("--mode", required=True, choices=["short", "long"])
    sp.add_argument("--log", required=True)
    sp.add_argument("--at", required=True, type=int)
    sp.add_argument("--config")
    sp.add_argument("--state")
    sp.set_defaults(fn=cmd_render)

    sp = sub.add_parser("scores", help="print ranking factors for every node")
    sp.add_argument("file")
    sp.add_argument("--log", required=True)
    sp.add_argument("--at", required=True, type=int)
    sp.add_argument("--config")
    sp.set_defaults(fn=cmd_scores)

    sp = sub.add_parser("synth", help="generate a synthetic trace "
                                      "(matching definition on stdout)")
    sp.add_argument("--items", required=True, type=int)
    sp.add_argument("--zipf", type=float, default=1.0)
    sp.add_argument("--events", required=True, type=int)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--start", type=int, default=1700000000)
    sp.add_argument("--step", type=int, default=600)
    sp.add_argument("--out", required=True)
    sp.set_defaults(fn=cmd_synth)

    sp = sub.add_parser("replay", help="cost a trace against a definition")
    sp.add_argument("file")
    sp.add_argument("trace")
    sp.add_argument("--policy", required=True, choices=["adaptive", "static"])
    sp.add_argument("--config")
    sp.add_argument("--report", required=True)
    sp.set_defaults(fn=cmd_replay)

    sp = sub.add_parser("edit", help="apply an edit script, or `show` branches")
    sp.add_argument("file")
    sp.add_argument("script", help="edit script file, or the word `show`")
    g = sp.add_mutually_exclusive_group()
    g.add_argument("--in-place", action="store_true")
    g.add_argument("--out")
    sp.add_argument("--path", action="append", default=[],
                    help="with `show`: branch to print (repeatable)")
    sp.set_defaults(fn=cmd_edit)

    sp = sub.add_parser("serve", help="run the HTTP service")
    sp.add_argument("file")
    sp.add_argument("--log", required=True)
    sp.add_argument("--state", required=True)
    sp.add_argument("--port", required=True, type=int)
    sp.set_defaults(fn=cmd_serve)

    return p


def main(argv=None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except _CONTENT_ERRORS as exc:
        for line in _fail_lines(exc):
            print(f"error: {line}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
