"""Estimator-style wrappers around the solvers.

Hyperparameters go to ``__init__``, ``fit(game, demand)`` does the work and
stores results in trailing-underscore attributes, and ``get_params`` /
``set_params`` / ``clone`` come from scikit-learn's ``BaseEstimator``.

>>> from ncgame.harness import pigou
>>> est = PriceOfAnarchy().fit(pigou(1), [1.0])
>>> round(est.poa_, 6)
1.333333
"""
from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator
from sklearn.exceptions import NotFittedError
from sklearn.utils.validation import check_is_fitted

from .analysis.poa import price_of_anarchy
from .equilibrium import SolverConfig, check_wardrop, solve_so, solve_wardrop
from .game import Game, check_demand, strategy_costs, total_cost


class _SolverEstimator(BaseEstimator):
    def __init__(self, tol=1e-9, max_iter=10_000, line_search_tol=1e-12, method="pairwise"):
        self.tol = tol
        self.max_iter = max_iter
        self.line_search_tol = line_search_tol
        self.method = method

    def _config(self) -> SolverConfig:
        return SolverConfig(self.tol, self.max_iter, self.line_search_tol, self.method)

    @staticmethod
    def _validate(game, demand):
        if not isinstance(game, Game):
            raise TypeError(f"expected a Game, got {type(game).__name__}")
        return check_demand(game, demand)

    def _store(self, game, d, res):
        self.game_ = game
        self.demand_ = d
        self.flows_ = res.profile
        self.gap_ = res.gap
        self.n_iter_ = res.iterations
        self.objective_ = res.objective
        self.converged_ = res.converged
        self.total_cost_ = total_cost(game, res.profile)
        return self

    def strategy_costs(self) -> np.ndarray:
        """Per-strategy costs at the fitted flows."""
        check_is_fitted(self, "flows_")
        return strategy_costs(self.game_, self.flows_)

    def flows_by_strategy(self) -> dict:
        check_is_fitted(self, "flows_")
        return dict(zip(self.game_.strategy_ids, self.flows_.tolist()))


class WardropSolver(_SolverEstimator):
    """Wardrop equilibrium of a game at a demand vector."""

    def fit(self, game, demand):
        d = self._validate(game, demand)
        return self._store(game, d, solve_wardrop(game, d, self._config()))

    def score(self, game=None, demand=None) -> float:
        """Negative relative Wardrop gap of the fitted flows (0 is best)."""
        check_is_fitted(self, "flows_")
        return -check_wardrop(self.game_, self.demand_, self.flows_).gap


class SystemOptimumSolver(_SolverEstimator):
    """Cost-minimizing flows of a game at a demand vector."""

    def fit(self, game, demand):
        d = self._validate(game, demand)
        return self._store(game, d, solve_so(game, d, self._config()))


class PriceOfAnarchy(_SolverEstimator):
    """Ratio of equilibrium to optimal average cost."""

    def fit(self, game, demand):
        d = self._validate(game, demand)
        res = price_of_anarchy(game, d, self._config())
        self.game_ = game
        self.demand_ = d
        self.poa_ = res.poa
        self.cost_ne_ = res.C_ne
        self.cost_so_ = res.C_so
        self.flows_ne_ = res.ne.profile
        self.flows_so_ = res.so.profile
        self.converged_ = bool(res.ne.converged and res.so.converged)
        return self


__all__ = ["NotFittedError", "PriceOfAnarchy", "SystemOptimumSolver", "WardropSolver"]
