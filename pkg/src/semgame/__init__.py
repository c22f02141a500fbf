"""Labelled parity games from temporal formulas, with exact semantic
labels driving both strategy improvement and reinforcement learning."""

from .construction import (
    COSAFETY,
    GENERAL,
    SAFETY,
    BuildSizeError,
    FragmentError,
    build,
    fragment,
)
from .game import ENVIRONMENT, SYSTEM, Edge, Game, GameFormatError, Vertex, load, save
from .ltl import ParseError, after, canonical, negate, parse
from .ql import priority_rewards, progress, q_learn
from .si import (
    SolveTimeout,
    check_winning,
    init_random,
    init_trueness,
    strategy_improvement,
    zielonka,
)
from .trueness import trueness

__version__ = "0.1.0"

__all__ = [
    "BuildSizeError",
    "COSAFETY",
    "ENVIRONMENT",
    "Edge",
    "FragmentError",
    "GENERAL",
    "Game",
    "GameFormatError",
    "ParseError",
    "SAFETY",
    "SYSTEM",
    "SolveTimeout",
    "Vertex",
    "after",
    "build",
    "canonical",
    "check_winning",
    "fragment",
    "init_random",
    "init_trueness",
    "load",
    "negate",
    "parse",
    "priority_rewards",
    "progress",
    "q_learn",
    "save",
    "strategy_improvement",
    "trueness",
    "zielonka",
]
