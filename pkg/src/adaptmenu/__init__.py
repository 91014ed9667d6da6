"""Usage-adaptive menu engine.

A menu definition (a small line-oriented text format) plus an append-only
usage log yield composed short/long views: frequently and recently used
items earn short-view slots, pins and panels override, and a replay
harness prices the navigation cost of any trace.
"""

from .model import (
    Item,
    Menu,
    MenuDefinition,
    NodePath,
    Panel,
    ParseError,
    Separator,
    SubmenuLink,
    ValidationError,
    parse_definition,
    serialize_definition,
    validate,
)
from .usage import (
    OutOfOrderEvent,
    UsageEvent,
    UsageLog,
    decayed_frequency,
    load_log,
    parse_log,
    recency,
    snapshot,
    time_affinity,
    write_log,
)
from .heuristics import DEFAULT_CONFIG, HeuristicConfig, load_config, rank, score
from .session import (
    MenuView,
    SessionState,
    compose_view,
    open_menu,
    pin_item,
    pin_menu,
    select,
    set_panel,
    unpin_item,
    unpin_menu,
)
from .editor import apply_edit, apply_script, parse_script, render_branches
from .sim import navigation_cost, replay, synth_definition, synth_trace

__version__ = "0.1.0"

__all__ = [
    "Item", "Menu", "MenuDefinition", "NodePath", "Panel", "ParseError",
    "Separator", "SubmenuLink", "ValidationError", "parse_definition",
    "serialize_definition", "validate",
    "OutOfOrderEvent", "UsageEvent", "UsageLog", "decayed_frequency",
    "load_log", "parse_log", "recency", "snapshot", "time_affinity",
    "write_log",
    "DEFAULT_CONFIG", "HeuristicConfig", "load_config", "rank", "score",
    "MenuView", "SessionState", "compose_view", "open_menu", "pin_item",
    "pin_menu", "select", "set_panel", "unpin_item", "unpin_menu",
    "apply_edit", "apply_script", "parse_script", "render_branches",
    "navigation_cost", "replay", "synth_definition", "synth_trace",
    "__version__",
]
