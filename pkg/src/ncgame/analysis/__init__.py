"""Asymptotic analyzers: PoA, limit games, gauges, decompositions, diagnostics."""
from .decomposition import DecompositionReport, Level, PhaseDecomposition, asymptotic_decomposition
from .demand import DemandPath, Phase, Term
from .gauge import GaugeReport, Q, candidate_gauges, find_gauge, gauge_check, gauge_check_subset, subset_gauges
from .limits import Gauge, LimitDiagnostic, LimitGame, LimitPrice, build_limit_game, limit_price, negligible_groups
from .poa import PoAResult, pigou_poa_bruteforce, pigou_poa_closed_form, price_of_anarchy
from .regvar import RegVarDiagnostics, regvar_diagnostics
from .structure import (
    ComparabilityOrder,
    Degrees,
    comparability_order,
    degrees,
    growth_key,
    mdg_components,
    mdg_decompose,
)

__all__ = [
    "ComparabilityOrder",
    "DecompositionReport",
    "Degrees",
    "DemandPath",
    "Gauge",
    "GaugeReport",
    "Level",
    "LimitDiagnostic",
    "LimitGame",
    "LimitPrice",
    "Phase",
    "PhaseDecomposition",
    "PoAResult",
    "Q",
    "RegVarDiagnostics",
    "Term",
    "asymptotic_decomposition",
    "build_limit_game",
    "candidate_gauges",
    "comparability_order",
    "degrees",
    "find_gauge",
    "gauge_check",
    "gauge_check_subset",
    "growth_key",
    "limit_price",
    "mdg_components",
    "mdg_decompose",
    "negligible_groups",
    "pigou_poa_bruteforce",
    "pigou_poa_closed_form",
    "price_of_anarchy",
    "regvar_diagnostics",
    "subset_gauges",
]
