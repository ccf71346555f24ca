"""Price of anarchy, numerically and for the two-link Pigou network in closed form."""
from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..equilibrium import SolveResult, SolverConfig, solve_so, solve_wardrop
from ..game import Game, check_demand, total_cost


@dataclass
class PoAResult:
    poa: float | None
    C_ne: float
    C_so: float
    T: float
    ne: SolveResult
    so: SolveResult

    @property
    def total_ne(self) -> float:
        return self.C_ne * self.T

    @property
    def total_so(self) -> float:
        return self.C_so * self.T

    def to_dict(self) -> dict:
        return {
            "poa": self.poa,
            "C_ne": self.C_ne,
            "C_so": self.C_so,
            "T": self.T,
            "gap_ne": self.ne.gap,
            "gap_so": self.so.gap,
            "converged": bool(self.ne.converged and self.so.converged),
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def price_of_anarchy(game: Game, demand, config: SolverConfig | None = None) -> PoAResult:
    """Ratio of average NE cost to average SO cost; ``poa`` is ``None`` when the SO cost is zero."""
    d = check_demand(game, demand)
    T = float(d.sum())
    if T <= 0:
        raise ValueError("price of anarchy needs positive total demand")
    ne = solve_wardrop(game, d, config)
    so = solve_so(game, d, config)
    c_ne = total_cost(game, ne.profile) / T
    c_so = total_cost(game, so.profile) / T
    poa = None if c_so <= 0 else c_ne / c_so
    return PoAResult(poa, c_ne, c_so, T, ne, so)


def pigou_poa_closed_form(beta: float, T: float, paper_literal: bool = False) -> float:
    """PoA of the two-link network with prices ``x**beta`` and ``1`` at demand ``T``.

    The SO puts ``f* = (beta+1)**(-1/beta)`` on the variable link when
    ``T > f*``, so its total cost is ``T - f* + f***(beta+1)``.  The NE total
    is ``T`` for ``T >= 1`` and ``T**(beta+1)`` below.

    ``paper_literal=True`` instead returns
    ``T / (T - (beta+1)**(-1/beta) + (beta+1)**(-1))``, a variant of the
    formula whose last term does not come out of the minimization (it gives
    1 at ``beta = 1, T = 1`` where the true value is 4/3).
    """
    beta = float(beta)
    T = float(T)
    if not beta > 0:
        raise ValueError("beta must be > 0")
    if not T > 0:
        raise ValueError("T must be > 0")
    fstar = (beta + 1) ** (-1.0 / beta)
    if paper_literal:
        return T / (T - fstar + 1.0 / (beta + 1))
    ne = T if T >= 1 else T ** (beta + 1)
    if T <= fstar:
        return 1.0
    so = T - fstar + fstar ** (beta + 1)
    return ne / so


def pigou_poa_bruteforce(beta: float, T: float, step: float = 1e-5) -> float:
    """Grid oracle: minimize ``f**(beta+1) + (T - f)`` over ``f = 0, step*T, ..., T``."""
    f = np.linspace(0.0, T, int(round(1 / step)) + 1)
    so = float(np.min(f ** (beta + 1) + (T - f)))
    ne = T if T >= 1 else T ** (beta + 1)
    return ne / so
