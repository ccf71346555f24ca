"""Non-atomic congestion games: groups, strategies, resources and costs.

A game is the tuple (groups, resources, strategies, consumption r(a, s),
prices).  Strategy profiles and demand vectors are plain float arrays
aligned with :attr:`Game.strategy_ids` and :attr:`Game.group_ids`.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path

import numpy as np
from scipy import sparse

from .prices import Polynomial, PriceFunction


@dataclass(frozen=True)
class Strategy:
    id: str
    uses: tuple[tuple[str, float], ...]


@dataclass(frozen=True)
class Group:
    id: str
    strategies: tuple[Strategy, ...]


@dataclass(frozen=True)
class Resource:
    id: str
    price: PriceFunction


class Game:
    """Immutable congestion game.

    Parameters
    ----------
    groups : sequence of Group
        Each group carries its own strategy list.
    resources : sequence of Resource
        Every resource referenced by a strategy must be listed here.
    """

    def __init__(self, groups, resources):
        self.groups = tuple(groups)
        self.resources = tuple(resources)
        rid = {}
        for i, res in enumerate(self.resources):
            if res.id in rid:
                raise ValueError(f"duplicate resource id {res.id!r}")
            rid[res.id] = i
        gid = set()
        for g in self.groups:
            if g.id in gid:
                raise ValueError(f"duplicate group id {g.id!r}")
            gid.add(g.id)
            for s in g.strategies:
                for a, r in s.uses:
                    if a not in rid:
                        raise ValueError(f"strategy {s.id!r} uses unknown resource {a!r}")
                    if not np.isfinite(r):
                        raise ValueError(f"r({a}, {s.id}) must be finite")
        self._resource_index = rid

    @classmethod
    def from_mapping(cls, strategies, prices):
        """Build from nested mappings.

        ``strategies`` maps group -> strategy -> either a mapping
        resource -> r(a, s) or an iterable of resources (r = 1).
        """
        groups = []
        for g, strats in strategies.items():
            ss = []
            for s, uses in strats.items():
                if isinstance(uses, dict):
                    pairs = tuple((str(a), float(r)) for a, r in uses.items())
                else:
                    pairs = tuple((str(a), 1.0) for a in uses)
                ss.append(Strategy(str(s), pairs))
            groups.append(Group(str(g), tuple(ss)))
        resources = [Resource(str(a), p) for a, p in prices.items()]
        return cls(groups, resources)

    def __repr__(self):
        return (
            f"Game(groups={len(self.groups)}, strategies={self.n_strategies}, "
            f"resources={self.n_resources})"
        )

    def __eq__(self, other):
        return (
            isinstance(other, Game)
            and self.groups == other.groups
            and self.resources == other.resources
        )

    # -- indexing ---------------------------------------------------------

    @cached_property
    def group_ids(self) -> list[str]:
        return [g.id for g in self.groups]

    @cached_property
    def resource_ids(self) -> list[str]:
        return [r.id for r in self.resources]

    @cached_property
    def strategy_ids(self) -> list[str]:
        return [s.id for g in self.groups for s in g.strategies]

    @cached_property
    def strategy_group(self) -> np.ndarray:
        """Group index of every strategy column."""
        return np.array(
            [k for k, g in enumerate(self.groups) for _ in g.strategies], dtype=int
        )

    @cached_property
    def group_slices(self) -> list[slice]:
        out, start = [], 0
        for g in self.groups:
            out.append(slice(start, start + len(g.strategies)))
            start += len(g.strategies)
        return out

    @property
    def n_groups(self) -> int:
        return len(self.groups)

    @property
    def n_resources(self) -> int:
        return len(self.resources)

    @property
    def n_strategies(self) -> int:
        return len(self.strategy_ids)

    @property
    def prices(self) -> list[PriceFunction]:
        return [r.price for r in self.resources]

    def resource_index(self, rid: str) -> int:
        return self._resource_index[rid]

    def strategy_index(self, sid: str) -> int:
        try:
            return self.strategy_ids.index(sid)
        except ValueError:
            raise KeyError(f"unknown strategy {sid!r}") from None

    @cached_property
    def consumption(self) -> sparse.csr_matrix:
        """Sparse ``(n_resources, n_strategies)`` matrix of r(a, s)."""
        rows, cols, vals = [], [], []
        j = 0
        for g in self.groups:
            for s in g.strategies:
                for a, r in s.uses:
                    rows.append(self._resource_index[a])
                    cols.append(j)
                    vals.append(r)
                j += 1
        return sparse.coo_matrix(
            (vals, (rows, cols)), shape=(self.n_resources, self.n_strategies)
        ).tocsr()

    @cached_property
    def consumption_T(self) -> sparse.csr_matrix:
        return self.consumption.T.tocsr()

    @cached_property
    def price_bank(self) -> "PriceBank":
        return PriceBank(self.prices)

    # -- derived games ----------------------------------------------------

    @cached_property
    def marginal_game(self) -> "Game":
        """Same game under the marginal prices ``x tau'(x) + tau(x)``."""
        return self.with_prices([p.marginal() for p in self.prices])

    def with_prices(self, prices) -> "Game":
        """Same structure, new price per resource (sequence aligned with resources)."""
        res = [Resource(r.id, p) for r, p in zip(self.resources, prices, strict=True)]
        return Game(self.groups, res)

    def subgame(self, group_ids, keep_resources=None) -> "Game":
        """Restriction to some groups (and the resources they use)."""
        wanted = set(group_ids)
        groups = [g for g in self.groups if g.id in wanted]
        if keep_resources is None:
            keep_resources = {a for g in groups for s in g.strategies for a, _ in s.uses}
        resources = [r for r in self.resources if r.id in keep_resources]
        return Game(groups, resources)

    # -- serialization ----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "groups": [
                {
                    "id": g.id,
                    "strategies": [
                        {"id": s.id, "uses": [{"resource": a, "r": r} for a, r in s.uses]}
                        for s in g.strategies
                    ],
                }
                for g in self.groups
            ],
            "resources": [{"id": r.id, "price": r.price.to_dict()} for r in self.resources],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Game":
        groups = [
            Group(
                str(g["id"]),
                tuple(
                    Strategy(
                        str(s["id"]),
                        tuple((str(u["resource"]), float(u.get("r", 1.0))) for u in s["uses"]),
                    )
                    for s in g["strategies"]
                ),
            )
            for g in data["groups"]
        ]
        resources = [
            Resource(str(r["id"]), PriceFunction.from_dict(r["price"])) for r in data["resources"]
        ]
        return cls(groups, resources)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def from_json(cls, text: str) -> "Game":
        return cls.from_dict(json.loads(text))

    def save(self, path) -> None:
        Path(path).write_text(self.to_json(indent=2) + "\n")

    @classmethod
    def load(cls, path) -> "Game":
        return cls.from_json(Path(path).read_text())


class PriceBank:
    """Vectorized evaluation of one price function per resource."""

    def __init__(self, prices):
        self.prices = list(prices)
        n = len(self.prices)
        poly = [i for i, p in enumerate(self.prices) if isinstance(p, Polynomial)]
        self._poly_idx = np.array(poly, dtype=int)
        self._is_poly = np.zeros(n, dtype=bool)
        self._is_poly[self._poly_idx] = True
        self._other = [i for i in range(n) if not self._is_poly[i]]
        width = max((len(self.prices[i].coeffs) for i in poly), default=1)
        C = np.zeros((n, width))
        for i in poly:
            c = self.prices[i].coeffs
            C[i, : len(c)] = c
        self._coef = C
        self._anti = np.zeros((n, width + 1))
        self._anti[:, 1:] = C / np.arange(1, width + 1)

    @staticmethod
    def _horner(C, x):
        out = np.zeros_like(x)
        for j in range(C.shape[1] - 1, -1, -1):
            out = out * x + C[:, j]
        return out

    def values(self, loads, idx=None):
        """``tau_a(loads)`` for all resources, or for ``idx`` with ``loads`` aligned to it."""
        loads = np.asarray(loads, dtype=float)
        if idx is None:
            idx = np.arange(len(self.prices))
        out = self._horner(self._coef[idx], loads)
        if self._other:
            for j, i in enumerate(idx):
                if not self._is_poly[i]:
                    out[j] = self.prices[i](loads[j])
        return out

    def potential(self, loads) -> float:
        """Beckmann potential ``sum_a int_0^{f_a} tau_a``."""
        loads = np.asarray(loads, dtype=float)
        out = self._horner(self._anti, loads)
        for i in self._other:
            out[i] = self.prices[i].antiderivative(loads[i])
        return float(out.sum())


# -- validation -------------------------------------------------------------


@dataclass
class Violation:
    kind: str
    message: str

    def __str__(self):
        return f"{self.kind}: {self.message}"


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def __bool__(self):
        return self.ok

    def kinds(self) -> set[str]:
        return {v.kind for v in self.violations}

    def __str__(self):
        if self.ok:
            return "pass"
        return "\n".join(str(v) for v in self.violations)


def validate_game(game: Game) -> ValidationReport:
    """Report every violation of the model assumptions instead of raising."""
    report = ValidationReport()
    add = report.violations.append
    owner: dict[str, str] = {}
    for g in game.groups:
        if not g.strategies:
            add(Violation("empty group", f"group {g.id!r} has no strategies"))
        for s in g.strategies:
            if s.id in owner and owner[s.id] != g.id:
                add(
                    Violation(
                        "overlapping strategy sets",
                        f"strategy {s.id!r} belongs to groups {owner[s.id]!r} and {g.id!r}",
                    )
                )
            owner.setdefault(s.id, g.id)
            for a, r in s.uses:
                if r < 0:
                    add(Violation("negative coefficient", f"r({a}, {s.id}) = {r} < 0"))
            priced = [
                a for a, r in s.uses if r > 0 and not game.resources[game.resource_index(a)].price.is_zero
            ]
            if not priced:
                add(
                    Violation(
                        "free strategy",
                        f"strategy {s.id!r} of group {g.id!r} has identically zero cost",
                    )
                )
    for res in game.resources:
        p = res.price
        if isinstance(p, Polynomial) and any(c < 0 for c in p.coeffs):
            add(Violation("negative coefficient", f"price of {res.id!r} has a negative coefficient"))
    return report


# -- input checking -----------------------------------------------------------


def check_demand(game: Game, demand) -> np.ndarray:
    """Demand vector aligned with ``game.group_ids``.

    Accepts a mapping ``group -> volume`` (missing groups get 0) or a
    sequence of length ``n_groups``.
    """
    if isinstance(demand, dict):
        unknown = set(map(str, demand)) - set(game.group_ids)
        if unknown:
            raise ValueError(f"unknown groups in demand: {sorted(unknown)}")
        d = np.array([float(demand.get(g, demand.get(_maybe_int(g), 0.0))) for g in game.group_ids])
    else:
        d = np.asarray(demand, dtype=float).ravel()
        if d.shape != (game.n_groups,):
            raise ValueError(f"demand has {d.size} entries, game has {game.n_groups} groups")
    if not np.all(np.isfinite(d)) or np.any(d < 0):
        raise ValueError("demand must be finite and non-negative")
    return d


def _maybe_int(g):
    try:
        return int(g)
    except ValueError:
        return g


def check_profile(game: Game, profile, demand=None, rtol=1e-9) -> np.ndarray:
    """Flow vector aligned with ``game.strategy_ids``; checks p1 and, with a demand, p2."""
    if isinstance(profile, dict):
        f = np.zeros(game.n_strategies)
        for s, v in profile.items():
            f[game.strategy_index(str(s))] = float(v)
    else:
        f = np.asarray(profile, dtype=float).ravel()
    if f.shape != (game.n_strategies,):
        raise ValueError(f"profile has {f.size} entries, game has {game.n_strategies} strategies")
    if not np.all(np.isfinite(f)):
        raise ValueError("profile must be finite")
    scale = max(1.0, float(np.abs(f).max(initial=0.0)))
    if np.any(f < -rtol * scale):
        raise ValueError("profile has negative flows")
    if demand is not None:
        d = check_demand(game, demand)
        served = group_sums(game, f)
        tol = rtol * max(1.0, float(d.sum()))
        bad = np.flatnonzero(np.abs(served - d) > tol)
        if bad.size:
            k = bad[0]
            raise ValueError(
                f"profile serves {served[k]} in group {game.group_ids[k]!r}, demand is {d[k]}"
            )
    return np.maximum(f, 0.0)


def group_sums(game: Game, f) -> np.ndarray:
    return np.bincount(game.strategy_group, weights=f, minlength=game.n_groups)


# -- pointwise costs ------------------------------------------------------------


def resource_loads(game: Game, profile) -> np.ndarray:
    """``f_a = sum_s r(a, s) f_s``."""
    f = check_profile(game, profile)
    return game.consumption @ f


def resource_prices(game: Game, profile) -> np.ndarray:
    return game.price_bank.values(resource_loads(game, profile))


def strategy_costs(game: Game, profile) -> np.ndarray:
    """``tau_s(f) = sum_a r(a, s) tau_a(f_a)`` for every strategy."""
    return game.consumption_T @ resource_prices(game, profile)


def strategy_cost(game: Game, profile, s) -> float:
    j = s if isinstance(s, (int, np.integer)) else game.strategy_index(s)
    if not 0 <= j < game.n_strategies:
        raise KeyError(f"unknown strategy index {j}")
    return float(strategy_costs(game, profile)[j])


def total_cost(game: Game, profile) -> float:
    """``sum_a f_a tau_a(f_a)``."""
    loads = resource_loads(game, profile)
    return float(loads @ game.price_bank.values(loads))


def total_cost_by_strategy(game: Game, profile) -> float:
    """``sum_s f_s tau_s(f)``; equals :func:`total_cost`."""
    f = check_profile(game, profile)
    return float(f @ strategy_costs(game, f))


def average_cost(game: Game, demand, profile) -> float:
    d = check_demand(game, demand)
    T = d.sum()
    if T <= 0:
        raise ValueError("average cost is undefined for zero total demand")
    check_profile(game, profile, d)
    return total_cost(game, profile) / T
