"""HTTP facade over one definition + log + state triple.

Single logical writer: a process-wide lock serializes every request, so
the log file only ever grows by whole events and a view fetched after a
mutation sees it. Events are appended to disk before the response goes
out. Time is a simulated clock set via the API, not wall time; it starts
at the tail of the log.

Request bodies are parsed by hand so that every failure, including
malformed JSON, comes back in the one error shape `{"error": kind}`.
"""

from __future__ import annotations

import os
import threading

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse

from .heuristics import DEFAULT_CONFIG, HeuristicConfig, rank
from .model import (
    Item,
    MenuDefinition,
    SubmenuLink,
    iter_nodes,
    parse_definition,
)
from .session import (
    EngineError,
    MODE_LONG,
    MODE_SHORT,
    SessionState,
    collapse_menu,
    compose_view,
    expand_menu,
    load_state,
    open_menu,
    pin_item,
    pin_menu,
    save_state,
    select,
    set_clock,
    set_panel,
    unpin_item,
    unpin_menu,
)
from .usage import OutOfOrderEvent, UsageLog, format_event, load_log, snapshot

UI_ENV = "ADAPTMENU_UI"

_CONFLICT_KINDS = {"menu-not-open", "core-pin-redundant", "out-of-order", "clock-regression"}


class ApiError(Exception):
    def __init__(self, status: int, kind: str):
        super().__init__(kind)
        self.status = status
        self.kind = kind


def _bad(kind: str = "bad-request") -> ApiError:
    return ApiError(400, kind)


def _from_engine(exc: Exception) -> ApiError:
    kind = getattr(exc, "kind", "bad-request")
    if kind.startswith("unknown-"):
        return ApiError(404, kind)
    if kind in _CONFLICT_KINDS:
        return ApiError(409, kind)
    return ApiError(400, kind)


class Engine:
    """Owns the live state and the files behind it."""

    def __init__(self, defn: MenuDefinition, log: UsageLog, state: SessionState,
                 config: HeuristicConfig, log_path: str | None = None,
                 state_path: str | None = None):
        self.defn = defn
        self.log = log
        self.state = state
        self.config = config
        self.log_path = log_path
        self.state_path = state_path
        self.lock = threading.Lock()

    # -- persistence -----------------------------------------------------

    def _flush_log(self, n_before: int) -> None:
        new = self.log.events[n_before:]
        if not new or self.log_path is None:
            return
        with open(self.log_path, "a", encoding="utf-8") as fh:
            for e in new:
                fh.write(format_event(e) + "\n")
            fh.flush()

    def _flush_state(self) -> None:
        if self.state_path is not None:
            save_state(self.state_path, self.state)

    # -- transitions; the log hits disk before the caller sees a result --

    def do_select(self, menu: str, node: str) -> None:
        n = len(self.log.events)
        self.state = select(self.state, self.defn, self.log, menu, node,
                            self.state.clock)
        self._flush_log(n)

    def do_expand(self, menu: str, mode: str) -> None:
        n = len(self.log.events)
        if mode == MODE_LONG:
            self.state = expand_menu(self.state, self.defn, self.log, menu)
        else:
            self.state = collapse_menu(self.state, self.defn, self.log, menu)
        self._flush_log(n)

    def do_pin(self, kind: str, menu: str, node: str | None, on: bool) -> None:
        n = len(self.log.events)
        if kind == "menu":
            if on:
                self.state = pin_menu(self.state, self.defn, self.log, menu)
            else:
                self.state = unpin_menu(self.state, self.defn, self.log, menu)
        else:
            if on:
                self.state = pin_item(self.state, self.defn, self.log, menu, node)
            else:
                self.state = unpin_item(self.state, self.defn, self.log, menu, node)
            self._flush_log(n)
            self._flush_state()
            return
        self._flush_log(n)

    def do_panel(self, menu: str, panel: str, panel_state: str) -> None:
        n = len(self.log.events)
        self.state = set_panel(self.state, self.defn, self.log, menu, panel,
                               panel_state)
        self._flush_log(n)
        self._flush_state()

    def do_clock(self, at: int) -> None:
        if at < self.state.clock:
            raise ApiError(409, "clock-regression")
        self.state = set_clock(self.state, at)

    def view_payload(self, menu: str, mode: str | None) -> dict:
        self.state = open_menu(self.state, self.defn, menu)
        snap = snapshot(self.log, self.state.clock, self.config)
        view = compose_view(self.defn, menu, snap, self.state, self.config,
                            mode=mode)
        entries = []
        for e in view.entries:
            row = {"pos": e.pos, "id": e.node, "kind": e.kind,
                   "label": e.label, "pinned": e.pinned}
            if e.panel_state is not None:
                row["panel_state"] = e.panel_state
            entries.append(row)
        return {"menu": view.menu, "mode": view.mode,
                "truncated": view.truncated, "entries": entries}

    def scores_payload(self, menu_id: str) -> dict:
        menu = self.defn.menu(menu_id)
        if menu is None:
            raise ApiError(404, "unknown-menu")
        snap = snapshot(self.log, self.state.clock, self.config)
        nodes = [n.id for n, _p in iter_nodes(menu)
                 if isinstance(n, (Item, SubmenuLink))]
        rows = []
        for i, sc in enumerate(rank(snap, menu_id, nodes, self.config), 1):
            rows.append({"node": sc.node, "f_hat": sc.f_hat, "r": sc.r,
                         "tau": sc.tau, "s": sc.s, "rank": i})
        return {"rows": rows}


def load_engine(def_file: str, log_file: str | None = None,
                state_file: str | None = None,
                config: HeuristicConfig = DEFAULT_CONFIG,
                session: str = "svc") -> Engine:
    """Read the three files; the log and state files are created empty
    when missing, the definition must already be valid."""
    with open(def_file, encoding="utf-8") as fh:
        defn = parse_definition(fh.read())
    if log_file is not None and not os.path.exists(log_file):
        open(log_file, "w", encoding="utf-8").close()
    log = (load_log(log_file, half_life_f=config.half_life_f,
                    tz_offset=config.tz_offset)
           if log_file is not None
           else UsageLog(half_life_f=config.half_life_f, tz_offset=config.tz_offset))
    clock = log.last_t if log.last_t is not None else 0
    if state_file is not None and os.path.exists(state_file):
        state, _warnings = load_state(state_file, defn, session=session, clock=clock)
    else:
        state = SessionState(session=session, clock=clock)
    return Engine(defn, log, state, config, log_path=log_file,
                  state_path=state_file)


# ------------------------------------------------------------------- app

def create_app(engine: Engine) -> FastAPI:
    app = FastAPI(openapi_url=None)

    @app.exception_handler(ApiError)
    async def _api_error(_req, exc: ApiError):
        return JSONResponse({"error": exc.kind}, status_code=exc.status)

    async def _body(request: Request) -> dict:
        try:
            data = await request.json()
        except Exception:
            raise _bad() from None
        if not isinstance(data, dict):
            raise _bad()
        return data

    def _field(data: dict, key: str, kind=str):
        v = data.get(key)
        if not isinstance(v, kind) or (kind is int and isinstance(v, bool)):
            raise _bad()
        return v

    @app.get("/api/menus")
    def menus():
        with engine.lock:
            rows = [{"id": m.id, "label": m.label} for m in engine.defn.menus]
        return {"menus": rows}

    @app.get("/api/view")
    def view(request: Request):
        menu = request.query_params.get("menu")
        mode = request.query_params.get("mode")
        if menu is None or mode not in (None, MODE_SHORT, MODE_LONG):
            raise _bad()
        with engine.lock:
            try:
                return engine.view_payload(menu, mode)
            except EngineError as exc:
                raise _from_engine(exc) from None

    @app.get("/api/scores")
    def scores(request: Request):
        menu = request.query_params.get("menu")
        if menu is None:
            raise _bad()
        with engine.lock:
            return engine.scores_payload(menu)

    @app.post("/api/select")
    async def do_select(request: Request):
        data = await _body(request)
        menu = _field(data, "menu")
        node = _field(data, "node")
        with engine.lock:
            try:
                engine.do_select(menu, node)
            except (EngineError, OutOfOrderEvent) as exc:
                raise _from_engine(exc) from None
            return {"ok": True, "clock": engine.state.clock}

    @app.post("/api/expand")
    async def do_expand(request: Request):
        data = await _body(request)
        menu = _field(data, "menu")
        mode = _field(data, "mode")
        if mode not in (MODE_SHORT, MODE_LONG):
            raise _bad()
        with engine.lock:
            try:
                engine.do_expand(menu, mode)
            except (EngineError, OutOfOrderEvent) as exc:
                raise _from_engine(exc) from None
            return {"ok": True, "clock": engine.state.clock}

    @app.post("/api/pin")
    async def do_pin(request: Request):
        data = await _body(request)
        kind = _field(data, "kind")
        menu = _field(data, "menu")
        on = _field(data, "on", bool)
        if kind not in ("menu", "item"):
            raise _bad()
        node = None
        if kind == "item":
            node = _field(data, "node")
        with engine.lock:
            try:
                engine.do_pin(kind, menu, node, on)
            except (EngineError, OutOfOrderEvent) as exc:
                raise _from_engine(exc) from None
            return {"ok": True, "clock": engine.state.clock}

    @app.post("/api/panel")
    async def do_panel(request: Request):
        data = await _body(request)
        menu = _field(data, "menu")
        panel = _field(data, "panel")
        panel_state = _field(data, "state")
        with engine.lock:
            try:
                engine.do_panel(menu, panel, panel_state)
            except ValueError:
                raise _bad() from None
            except (EngineError, OutOfOrderEvent) as exc:
                raise _from_engine(exc) from None
            return {"ok": True, "clock": engine.state.clock}

    @app.post("/api/clock")
    async def do_clock(request: Request):
        data = await _body(request)
        at = _field(data, "at", int)
        if at < 0:
            raise _bad()
        with engine.lock:
            engine.do_clock(at)
            return {"ok": True, "clock": engine.state.clock}

    ui_dir = os.environ.get(UI_ENV)
    if ui_dir:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app


def serve(def_file: str, log_file: str, state_file: str, port: int,
          host: str = "127.0.0.1",
          config: HeuristicConfig = DEFAULT_CONFIG) -> None:
    import uvicorn

    engine = load_engine(def_file, log_file, state_file, config=config)
    app = create_app(engine)
    uvicorn.run(app, host=host, port=port, log_level="warning")
