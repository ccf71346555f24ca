"""Degrees, asymptotic ordering of resources, and direct-sum splitting."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy import sparse
from scipy.sparse import csgraph

from ..game import Game

# order key of the zero price: below every regularly varying function
ZERO_KEY = (float("-inf"), Fraction(0))


def growth_key(price) -> tuple:
    """``(index, log_exponent)``; compares asymptotic growth lexicographically."""
    g = price.growth()
    return ZERO_KEY if g is None else g


def strategy_keys(game: Game) -> list[tuple]:
    """Growth key of each strategy: its fastest-growing resource."""
    keys = []
    for g in game.groups:
        for s in g.strategies:
            ks = [growth_key(game.resources[game.resource_index(a)].price) for a, r in s.uses if r > 0]
            keys.append(max(ks, default=ZERO_KEY))
    return keys


def group_keys(game: Game) -> dict[str, tuple]:
    """Growth key of each group: its asymptotically cheapest strategy."""
    sk = strategy_keys(game)
    return {g.id: min(sk[sl], default=ZERO_KEY) for g, sl in zip(game.groups, game.group_slices)}


@dataclass
class Degrees:
    resource: dict
    strategy: dict
    group: dict


def degrees(game: Game) -> Degrees:
    """Degrees of resources, strategies (max over used resources) and groups (min over strategies).

    Zero prices have no degree (``None``) and are skipped in the max.
    """
    res = {r.id: r.price.index for r in game.resources}
    strat = {}
    for g in game.groups:
        for s in g.strategies:
            ds = [res[a] for a, r in s.uses if r > 0 and res[a] is not None]
            strat[(g.id, s.id)] = max(ds) if ds else None
    grp = {}
    for g in game.groups:
        ds = [strat[(g.id, s.id)] for s in g.strategies if strat[(g.id, s.id)] is not None]
        grp[g.id] = min(ds) if ds else None
    if len({s.id for g in game.groups for s in g.strategies}) == game.n_strategies:
        strat = {sid: v for (_, sid), v in strat.items()}
    return Degrees(res, strat, grp)


@dataclass
class ComparabilityOrder:
    classes: list[list[str]]
    cheapest: dict[str, str]

    def rank(self, resource: str) -> int:
        for i, cls in enumerate(self.classes):
            if resource in cls:
                return i
        raise KeyError(resource)

    def precedes(self, a: str, b: str) -> bool:
        """``a`` is asymptotically at most ``b`` (finite limit ratio)."""
        return self.rank(a) <= self.rank(b)


def comparability_order(game: Game) -> ComparabilityOrder:
    """Total preorder of resources by asymptotic growth, cheapest strategy per group.

    Resources with equal ``(index, log_exponent)`` have a finite non-zero
    limit ratio and form one class; classes are listed slowest first.  Within
    the supported price families every pair is comparable.
    """
    keyed = sorted({growth_key(r.price) for r in game.resources})
    classes = [[r.id for r in game.resources if growth_key(r.price) == k] for k in keyed]
    sk = strategy_keys(game)
    cheapest = {}
    for g, sl in zip(game.groups, game.group_slices):
        local = sk[sl]
        if local:
            j = min(range(len(local)), key=lambda i: (local[i], i))
            cheapest[g.id] = g.strategies[j].id
    return ComparabilityOrder(classes, cheapest)


def mdg_components(game: Game) -> list[list[str]]:
    """Group ids of each connected component of the group--resource graph."""
    R = game.consumption.copy()
    R.data = (R.data > 0).astype(float)
    R.eliminate_zeros()
    # group x resource incidence
    G = sparse.csr_matrix(
        (np.ones(game.n_strategies), (game.strategy_group, np.arange(game.n_strategies))),
        shape=(game.n_groups, game.n_strategies),
    )
    inc = (G @ R.T).tocsr()
    n = game.n_groups + game.n_resources
    adj = sparse.bmat([[None, inc], [inc.T, None]], format="csr", dtype=float)
    adj.resize((n, n))
    _, labels = csgraph.connected_components(adj, directed=False)
    comps: dict[int, list[str]] = {}
    for k, gid in enumerate(game.group_ids):
        comps.setdefault(labels[k], []).append(gid)
    return [comps[c] for c in sorted(comps, key=lambda c: game.group_ids.index(comps[c][0]))]


def mdg_decompose(game: Game) -> list[Game]:
    """Split into independent sub-games on disjoint resource sets.

    Solving each component and concatenating (in component order) solves
    the whole game; group order inside a component is preserved.
    """
    return [game.subgame(ids) for ids in mdg_components(game)]
