"""Scaling experiments and the built-in game corpus."""
from .corpus import (
    all_degree_equal,
    alternating_path,
    builtin_game,
    builtin_games,
    degree4_pair,
    double_limits,
    linear_path,
    mdg_pair,
    pigou,
    random_game,
    square_linear_path,
)
from .scaling import (
    CSV_FIELDS,
    ConvergenceReport,
    PhaseConvergence,
    Record,
    ScaleRun,
    convergence_report,
    geometric_grid,
    parse_grid,
    phase_grid,
    scale_poa,
)

__all__ = [
    "CSV_FIELDS",
    "ConvergenceReport",
    "PhaseConvergence",
    "Record",
    "ScaleRun",
    "all_degree_equal",
    "alternating_path",
    "builtin_game",
    "builtin_games",
    "convergence_report",
    "degree4_pair",
    "double_limits",
    "geometric_grid",
    "linear_path",
    "mdg_pair",
    "parse_grid",
    "phase_grid",
    "pigou",
    "random_game",
    "scale_poa",
    "square_linear_path",
]
