"""Named test games and a seeded random game generator."""
from __future__ import annotations

from fractions import Fraction

import numpy as np

from ..analysis.demand import DemandPath, Phase, Term
from ..game import Game, Group, Resource, Strategy, validate_game
from ..prices import Polynomial, PowerLog, as_fraction


def _monomial(coef, power) -> Polynomial:
    return Polynomial([0.0] * int(power) + [float(coef)])


def pigou(beta=1) -> Game:
    """One group, a link priced ``x**beta`` and a link priced 1."""
    beta = as_fraction(beta)
    if beta <= 0:
        raise ValueError("beta must be > 0")
    var = _monomial(1.0, beta) if beta.denominator == 1 else PowerLog(1.0, beta, 0)
    return Game.from_mapping(
        {"1": {"x": ["x"], "const": ["const"]}},
        {"x": var, "const": Polynomial([1.0])},
    )


def double_limits() -> Game:
    """Two groups on four parallel links, upper linear and lower quadratic.

    Upper group: ``2x + 1`` and ``3x + 1``; lower group: ``4x**2`` and
    ``5x**2``.
    """
    return Game.from_mapping(
        {
            "upper": {"u1": ["a1"], "u2": ["a2"]},
            "lower": {"l1": ["a3"], "l2": ["a4"]},
        },
        {
            "a1": Polynomial([1.0, 2.0]),
            "a2": Polynomial([1.0, 3.0]),
            "a3": _monomial(4.0, 2),
            "a4": _monomial(5.0, 2),
        },
    )


def all_degree_equal() -> Game:
    """Two groups sharing a link; every strategy has degree 2."""
    return Game.from_mapping(
        {
            "1": {"s1": ["a"], "s2": ["b"]},
            "2": {"s3": ["b"], "s4": ["c"]},
        },
        {
            "a": Polynomial([1.0, 0.0, 1.0]),
            "b": Polynomial([0.0, 1.0, 2.0]),
            "c": Polynomial([3.0, 0.0, 1.5]),
        },
    )


def mdg_pair() -> Game:
    """Direct sum of a linear Pigou network and a quadratic one."""
    return Game.from_mapping(
        {
            "A": {"Ax": ["ax"], "Ac": ["ac"]},
            "B": {"Bx": ["bx"], "Bc": ["bc"]},
        },
        {
            "ax": _monomial(1.0, 1),
            "ac": Polynomial([1.0]),
            "bx": _monomial(1.0, 2),
            "bc": Polynomial([2.0]),
        },
    )


def degree4_pair() -> Game:
    """Two parallel links ``1 + x**4`` and ``2 + 0.5 x**4``."""
    return Game.from_mapping(
        {"1": {"s1": ["a"], "s2": ["b"]}},
        {"a": Polynomial([1, 0, 0, 0, 1.0]), "b": Polynomial([2, 0, 0, 0, 0.5])},
    )


BUILTIN = {
    "pigou": pigou,
    "double_limits": double_limits,
    "all_degree_equal": all_degree_equal,
    "mdg_pair": mdg_pair,
    "degree4_pair": degree4_pair,
}


def builtin_games() -> dict:
    """Name -> constructor.  ``pigou`` takes ``beta``; the others take no arguments."""
    return dict(BUILTIN)


def builtin_game(name: str) -> Game:
    """Look up ``name`` or ``pigou(beta)``."""
    if name.startswith("pigou(") and name.endswith(")"):
        return pigou(as_fraction(name[6:-1]))
    try:
        return BUILTIN[name]()
    except KeyError:
        raise KeyError(f"unknown builtin game {name!r}; choose from {sorted(BUILTIN)}") from None


def linear_path(group_ids, theta=1.0, p=1) -> DemandPath:
    """``d_k(n) = theta * n**p`` for every group."""
    return DemandPath.power_law({k: (theta, p) for k in group_ids})


def alternating_path() -> DemandPath:
    """Upper group loaded on even ``n``, lower group on odd ``n``."""
    one = Fraction(1)
    return DemandPath(
        [
            Phase(2, 0, {"upper": Term(1.0, one), "lower": Term(0.0, one)}),
            Phase(2, 1, {"upper": Term(0.0, one), "lower": Term(1.0, one)}),
        ]
    )


def square_linear_path() -> DemandPath:
    """``d(n) = (n**2, n)`` on the double-limits game."""
    return DemandPath.power_law({"upper": (1.0, 2), "lower": (1.0, 1)})


def random_game(seed: int = 0, sizes=(3, 8, 6), max_degree: int = 4) -> Game:
    """Seeded random game with polynomial prices.

    ``sizes = (groups, strategies, resources)``; every group gets at least
    one strategy, strategies use 1 to 3 distinct resources with
    ``r(a, s) in {1, 2}``, and every price has a positive constant term so
    no strategy is free.
    """
    n_groups, n_strats, n_res = (int(v) for v in sizes)
    if min(n_groups, n_strats, n_res) < 1 or n_strats < n_groups:
        raise ValueError("need sizes >= 1 and at least one strategy per group")
    if max_degree < 0:
        raise ValueError("max_degree must be >= 0")
    rng = np.random.default_rng(seed)
    counts = np.ones(n_groups, dtype=int)
    for k in rng.integers(0, n_groups, n_strats - n_groups):
        counts[k] += 1
    resources = []
    for a in range(n_res):
        deg = int(rng.integers(0, max_degree + 1))
        coeffs = np.round(rng.uniform(0.1, 3.0, deg + 1), 3)
        # sparse middle terms keep the family varied
        if deg > 1:
            coeffs[1:-1] *= rng.integers(0, 2, deg - 1)
        resources.append(Resource(f"a{a}", Polynomial(coeffs.tolist())))
    groups, sid = [], 0
    for k in range(n_groups):
        strats = []
        seen = set()
        for _ in range(counts[k]):
            for _attempt in range(20):
                m = int(rng.integers(1, min(3, n_res) + 1))
                used = tuple(sorted(rng.choice(n_res, size=m, replace=False).tolist()))
                if used not in seen:
                    break
            seen.add(used)
            uses = tuple((f"a{a}", float(rng.integers(1, 3))) for a in used)
            strats.append(Strategy(f"s{sid}", uses))
            sid += 1
        groups.append(Group(f"g{k}", tuple(strats)))
    game = Game(groups, resources)
    report = validate_game(game)
    if not report.ok:
        raise RuntimeError(f"random_game produced an invalid game: {report}")
    return game
