"""Wardrop equilibria and system optima by conditional gradient descent.

Equilibria are the minimizers of the Beckmann potential
``sum_a int_0^{f_a} tau_a``; system optima are the equilibria of the same
game under marginal prices ``x tau'(x) + tau(x)``.  Strategies are explicit,
so the linear subproblem of every iteration is a per-group argmin.

Two update rules are available:

``"pairwise"`` (default)
    For each group in turn, shift flow from its most expensive used strategy
    to its cheapest one, with an exact line search on the 1-D derivative
    (the cost difference of the two strategies, monotone by convexity).
``"frank_wolfe"``
    The textbook step: move all groups jointly toward the all-or-nothing
    assignment, exact line search along that direction.

Both start from all demand on the lowest-index strategy of each group and
break cost ties by lowest index, so runs are deterministic.
"""
from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field

import numpy as np
from scipy import optimize

from .game import Game, check_demand, check_profile, group_sums

logger = logging.getLogger(__name__)

METHODS = ("pairwise", "frank_wolfe")


@dataclass(frozen=True)
class SolverConfig:
    tol: float = 1e-9
    max_iter: int = 10_000
    line_search_tol: float = 1e-12
    method: str = "pairwise"

    def __post_init__(self):
        if not self.tol > 0:
            raise ValueError("tol must be > 0")
        if not self.line_search_tol > 0:
            raise ValueError("line_search_tol must be > 0")
        if int(self.max_iter) < 1:
            raise ValueError("max_iter must be >= 1")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")

    def replace(self, **kw) -> "SolverConfig":
        return SolverConfig(**{**self.__dict__, **kw})


@dataclass
class SolveResult:
    profile: np.ndarray
    iterations: int
    gap: float
    objective: float
    converged: bool
    mode: str = "we"
    objective_history: list[float] = field(default_factory=list, repr=False)

    def to_dict(self, game: Game | None = None) -> dict:
        out = {
            "mode": self.mode,
            "iterations": self.iterations,
            "gap": self.gap,
            "objective": self.objective,
            "converged": self.converged,
            "profile": self.profile.tolist(),
        }
        if game is not None:
            out["profile"] = dict(zip(game.strategy_ids, self.profile.tolist()))
        return out

    def to_json(self, game: Game | None = None, **kw) -> str:
        return json.dumps(self.to_dict(game), **kw)


def initial_profile(game: Game, demand) -> np.ndarray:
    """All demand of each group on its lowest-index strategy."""
    d = check_demand(game, demand)
    f = np.zeros(game.n_strategies)
    for k, sl in enumerate(game.group_slices):
        if sl.stop > sl.start:
            f[sl.start] = d[k]
    return f


def _group_starts(game):
    return np.array([sl.start for sl in game.group_slices], dtype=int)


def group_minima(game: Game, costs) -> np.ndarray:
    return np.minimum.reduceat(np.asarray(costs, dtype=float), _group_starts(game))


def _gap(game, d, f, costs):
    used = float(f @ costs)
    if used <= 0:
        return 0.0, used
    active = d > 0
    best = float(d[active] @ group_minima(game, costs)[active])
    return (used - best) / used, used


class _GroupBlock:
    """Dense local view of one group: its strategies and the resources they touch."""

    __slots__ = ("k", "sl", "res", "M")

    def __init__(self, game, k):
        self.k = k
        self.sl = game.group_slices[k]
        sub = game.consumption[:, self.sl]
        self.res = np.unique(sub.nonzero()[0])
        self.M = sub[self.res].toarray()


def _bracket_root(h, hi, tol):
    """Root of the increasing function ``h`` on ``[0, hi]`` with ``h(0) < 0``."""
    if h(0.0) >= 0:
        # rounding can erase a tiny cost difference once shared links cancel
        return 0.0
    if h(hi) <= 0:
        return hi
    # absolute tolerance far below hi: the root may sit very close to 0
    return optimize.brentq(h, 0.0, hi, xtol=tol * 1e-3 * max(hi, 1e-300), rtol=4 * np.finfo(float).eps, maxiter=200)


def _pairwise_sweep(game, bank, blocks, f, loads, d, tol):
    for blk in blocks:
        if d[blk.k] <= 0:
            continue
        fk = f[blk.sl]
        tau = bank.values(loads[blk.res], blk.res)
        c = blk.M.T @ tau
        b = int(np.argmin(c))
        used = np.flatnonzero(fk > 0)
        w = int(used[np.argmax(c[used])])
        if not c[w] > c[b]:
            continue
        delta = blk.M[:, b] - blk.M[:, w]
        nz = delta != 0
        if not nz.any():
            continue
        idx = blk.res[nz]
        dv = delta[nz]
        base = loads[idx]

        def h(t, idx=idx, dv=dv, base=base):
            return float(dv @ bank.values(base + t * dv, idx))

        t = _bracket_root(h, fk[w], tol)
        if t <= 0:
            continue
        f[blk.sl.start + b] += t
        f[blk.sl.start + w] -= t
        if f[blk.sl.start + w] < 1e-15 * d[blk.k]:
            f[blk.sl.start + b] += f[blk.sl.start + w]
            f[blk.sl.start + w] = 0.0
        loads[idx] = base + t * dv


def _pattern_step(game, bank, f, f_prev, loads, d, tol):
    """Exact line search along the displacement of the last sweep, extrapolated.

    Sweeps update one group at a time, which zig-zags when groups share
    congested resources; moving along their combined displacement removes
    that.  The step stops where the first shrinking flow reaches zero.
    """
    direction = f - f_prev
    shrinking = direction < 0
    if not shrinking.any():
        return
    t_max = float(np.min(f[shrinking] / -direction[shrinking]))
    if t_max <= 0:
        return
    dl = game.consumption @ direction
    nz = np.flatnonzero(dl)
    if nz.size == 0:
        return
    dv = dl[nz]
    base = loads[nz]

    def h(t):
        return float(dv @ bank.values(base + t * dv, nz))

    t = _bracket_root(h, t_max, tol)
    if t <= 0:
        return
    f += t * direction
    # rounding in the step must not move group totals off the demand
    for k, sl in enumerate(game.group_slices):
        fk = f[sl]
        fk[fk < 1e-15 * d[k]] = 0.0
        total = fk.sum()
        if total > 0:
            fk *= d[k] / total
    loads[:] = game.consumption @ f


def _frank_wolfe_step(game, bank, f, loads, d, costs, tol):
    y = np.zeros_like(f)
    for k, sl in enumerate(game.group_slices):
        if d[k] > 0:
            y[sl.start + int(np.argmin(costs[sl]))] = d[k]
    direction = y - f
    dl = game.consumption @ direction
    nz = np.flatnonzero(dl)
    if nz.size == 0:
        return
    dv = dl[nz]
    base = loads[nz]

    def h(g):
        return float(dv @ bank.values(base + g * dv, nz))

    g = _bracket_root(h, 1.0, tol)
    if g <= 0:
        return
    f += g * direction
    np.maximum(f, 0.0, out=f)
    loads[:] = game.consumption @ f


def _solve(game: Game, demand, config: SolverConfig, init, mode: str) -> SolveResult:
    d = check_demand(game, demand)
    f = initial_profile(game, d) if init is None else check_profile(game, init, d).copy()
    bank = game.price_bank
    if d.sum() <= 0:
        f[:] = 0.0
        return SolveResult(f, 0, 0.0, 0.0, True, mode, [0.0])
    blocks = [_GroupBlock(game, k) for k in range(game.n_groups)] if config.method == "pairwise" else None
    loads = game.consumption @ f
    history: list[float] = []
    converged = False
    gap = np.inf
    it = 0
    for it in range(int(config.max_iter) + 1):
        costs = game.consumption_T @ bank.values(loads)
        gap, _ = _gap(game, d, f, costs)
        history.append(bank.potential(loads))
        if gap <= config.tol:
            converged = True
            break
        if it == config.max_iter:
            break
        if blocks is not None:
            f_prev = f.copy()
            _pairwise_sweep(game, bank, blocks, f, loads, d, config.line_search_tol)
            if game.n_groups > 1:
                loads = game.consumption @ f
                _pattern_step(game, bank, f, f_prev, loads, d, config.line_search_tol)
        else:
            _frank_wolfe_step(game, bank, f, loads, d, costs, config.line_search_tol)
        # resync against drift from incremental load updates
        loads = game.consumption @ f
    if not converged:
        logger.warning("%s solve stopped after %d iterations with gap %.3g", mode, it, gap)
    return SolveResult(f, it, float(gap), history[-1], converged, mode, history)


def solve_wardrop(game: Game, demand, config: SolverConfig | None = None, init=None) -> SolveResult:
    """Wardrop (Nash) equilibrium: minimize the Beckmann potential."""
    return _solve(game, demand, config or SolverConfig(), init, "we")


def solve_so(game: Game, demand, config: SolverConfig | None = None, init=None) -> SolveResult:
    """System optimum, as the Wardrop equilibrium under marginal prices.

    The reported objective is the total cost ``sum_a f_a tau_a(f_a)``, which
    is exactly the potential of the marginal-price game.
    """
    return _solve(game.marginal_game, demand, config or SolverConfig(), init, "so")


@dataclass
class WardropCheck:
    gap: float
    is_equilibrium: bool
    worst_group: str | None


def check_wardrop(game: Game, demand, profile, eps: float = 1e-9) -> WardropCheck:
    """Relative Wardrop gap ``(sum_s f_s tau_s - sum_k d_k min_{S_k} tau_s) / sum_s f_s tau_s``."""
    d = check_demand(game, demand)
    f = check_profile(game, profile, d)
    costs = game.consumption_T @ game.price_bank.values(game.consumption @ f)
    gap, _ = _gap(game, d, f, costs)
    excess = group_sums(game, f * costs) - d * group_minima(game, costs)
    excess[d <= 0] = 0.0
    worst = game.group_ids[int(np.argmax(excess))] if excess.max(initial=0.0) > 0 else None
    return WardropCheck(gap, gap <= eps, worst)


def check_epsilon_ne_of_so(game: Game, demand, so_profile, used_rtol: float = 1e-9) -> float:
    """Smallest ``eps`` with ``tau_s <= (1 + eps) min_{S_k} tau`` on every used strategy."""
    d = check_demand(game, demand)
    f = check_profile(game, so_profile, d)
    costs = game.consumption_T @ game.price_bank.values(game.consumption @ f)
    mins = group_minima(game, costs)
    eps = 0.0
    for k, sl in enumerate(game.group_slices):
        if d[k] <= 0:
            continue
        used = f[sl] > used_rtol * d[k]
        worst = costs[sl][used].max()
        if worst <= mins[k]:
            continue
        if mins[k] <= 0:
            return float("inf")
        eps = max(eps, (worst - mins[k]) / mins[k])
    return float(eps)
