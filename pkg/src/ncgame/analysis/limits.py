"""Limit games along phased power-law demand paths.

A limit game rescales every price as ``tau_a(T x) / g(T)`` and keeps the
limits.  Here ``g`` is either ``T**alpha`` (polynomial case) or a
:class:`Gauge` from the power-log family, so every limit is one of three
symbolic shapes: zero, a power ``b * x**alpha``, or identically infinite.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from ..equilibrium import SolverConfig
from ..game import Game, Group, Resource, Strategy
from ..prices import Polynomial, PowerLog, as_fraction, fraction_to_json
from .demand import DemandPath, Phase
from .structure import ZERO_KEY, growth_key


@dataclass(frozen=True)
class Gauge:
    """Regularly varying scale ``c * x**rho * ln(e + x)**beta``."""

    c: float = 1.0
    rho: Fraction = Fraction(0)
    beta: Fraction = Fraction(0)

    def __post_init__(self):
        object.__setattr__(self, "rho", as_fraction(self.rho))
        object.__setattr__(self, "beta", as_fraction(self.beta))
        if not self.c > 0:
            raise ValueError("gauge scale must be > 0")

    @classmethod
    def power(cls, alpha) -> "Gauge":
        return cls(1.0, as_fraction(alpha), Fraction(0))

    @property
    def key(self) -> tuple:
        return (self.rho, self.beta)

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        return self.c * np.power(x, float(self.rho)) * np.power(np.log(np.e + x), float(self.beta))

    def __str__(self):
        parts = [f"{self.c:g}" if self.c != 1 else ""]
        if self.rho:
            parts.append(f"x^{self.rho}")
        if self.beta:
            parts.append(f"ln(e+x)^{self.beta}")
        text = "*".join(p for p in parts if p)
        return text or "1"

    def to_dict(self) -> dict:
        return {"c": self.c, "rho": fraction_to_json(self.rho), "beta": fraction_to_json(self.beta)}


def _as_gauge(scaling) -> Gauge:
    if isinstance(scaling, Gauge):
        return scaling
    return Gauge.power(scaling)


@dataclass(frozen=True)
class LimitPrice:
    """Symbolic limit price: ``"zero"``, ``"power"`` (``b * x**alpha``) or ``"infinite"``."""

    kind: str
    coefficient: float = 0.0
    exponent: Fraction = Fraction(0)

    ZERO = None  # filled below
    INFINITE = None

    @property
    def is_finite(self) -> bool:
        return self.kind != "infinite"

    def __call__(self, x):
        if self.kind == "infinite":
            raise ValueError("an infinite limit price has no finite values")
        if self.kind == "zero":
            return 0.0 * np.asarray(x, dtype=float)
        return self.coefficient * np.power(np.asarray(x, dtype=float), float(self.exponent))

    def to_price(self):
        if self.kind == "zero":
            return Polynomial([0.0])
        if self.kind == "power":
            if self.exponent.denominator == 1:
                coeffs = [0.0] * int(self.exponent) + [self.coefficient]
                return Polynomial(coeffs)
            return PowerLog(self.coefficient, self.exponent, 0)
        raise ValueError("an infinite limit price has no price function")

    def __str__(self):
        if self.kind == "zero":
            return "0"
        if self.kind == "infinite":
            return "inf"
        if self.exponent == 0:
            return f"{self.coefficient:g}"
        return f"{self.coefficient:g}*x^{self.exponent}"

    def to_dict(self) -> dict:
        out = {"kind": self.kind}
        if self.kind == "power":
            out.update(coefficient=self.coefficient, exponent=fraction_to_json(self.exponent))
        return out


LimitPrice.ZERO = LimitPrice("zero")
LimitPrice.INFINITE = LimitPrice("infinite")


def limit_price(price, gauge: Gauge) -> LimitPrice:
    """``lim tau(T x) / g(T)`` for ``T -> inf``, decided on growth keys."""
    key = growth_key(price)
    if key == ZERO_KEY or key < gauge.key:
        return LimitPrice.ZERO
    if key > gauge.key:
        return LimitPrice.INFINITE
    return LimitPrice("power", price.scale / gauge.c, gauge.rho)


def _resource_users(game: Game) -> dict:
    users = {a.id: set() for a in game.resources}
    for g in game.groups:
        for s in g.strategies:
            for a, r in s.uses:
                if r > 0:
                    users[a].add(g.id)
    return users


def negligible_groups(game: Game, phase: Phase, gauge: Gauge) -> set:
    """Groups whose worst-case cost is ``o(T * g(T))`` on this phase.

    A group's cost under an arbitrary feasible profile is at most its volume
    times the price of its most expensive resource, loaded with the volume
    of every active group that can reach that resource.  On a power-law
    phase this bound is attained up to constants, so comparing growth keys
    decides the limit exactly.
    """
    active = phase.active
    if not active:
        return set(game.group_ids)
    P = phase.total_exponent
    target = (P * (1 + gauge.rho), gauge.beta)
    users = _resource_users(game)
    prices = {a.id: a.price for a in game.resources}
    out = set()
    for g in game.groups:
        if g.id not in active:
            out.add(g.id)
            continue
        worst = ZERO_KEY
        pk = active[g.id].p
        for s in g.strategies:
            for a, r in s.uses:
                key = growth_key(prices[a])
                if r <= 0 or key == ZERO_KEY:
                    continue
                load = max(active[j].p for j in users[a] if j in active)
                worst = max(worst, (pk + key[0] * load, key[1]))
        if worst < target:
            out.add(g.id)
    return out


@dataclass
class LimitDiagnostic:
    """Why no limit game exists for the requested phase and scaling."""

    condition: str
    reason: str
    residue: int
    gauge: Gauge
    limits: dict = field(default_factory=dict)

    valid = False

    def __str__(self):
        return f"{self.condition} fails: {self.reason}"

    def to_dict(self) -> dict:
        return {
            "valid": False,
            "condition": self.condition,
            "reason": self.reason,
            "phase": self.residue,
            "gauge": self.gauge.to_dict(),
            "limits": {a: lp.to_dict() for a, lp in self.limits.items()},
        }


@dataclass
class LimitGame:
    """A limit of a game along one phase of a demand path."""

    game: Game
    residue: int
    gauge: Gauge
    limits: dict
    shares: dict
    tight_strategies: list
    negligible: set
    surviving_groups: list

    valid = True

    @property
    def tight_groups(self) -> list:
        """Groups with a tight strategy, all of whose tight strategies carry a power limit.

        These are the groups with ``0 < min_s max_a q_a < inf`` in gauge terms.
        """
        out = []
        tight = set(self.tight_strategies)
        for g in self.game.groups:
            ts = [s for s in g.strategies if s.id in tight]
            if ts and all(any(self.limits[a].kind == "power" for a, r in s.uses if r > 0) for s in ts):
                out.append(g.id)
        return out

    def to_game(self) -> tuple[Game, np.ndarray]:
        """The limit instance as an ordinary game plus its limit demand vector."""
        tight = set(self.tight_strategies)
        groups, used = [], set()
        for g in self.game.groups:
            if g.id not in self.surviving_groups:
                continue
            ss = tuple(s for s in g.strategies if s.id in tight)
            if not ss:
                continue
            groups.append(Group(g.id, ss))
            used.update(a for s in ss for a, r in s.uses)
        resources = [Resource(a.id, self.limits[a.id].to_price()) for a in self.game.resources if a.id in used]
        limit = Game(groups, resources)
        demand = np.array([self.shares[g.id] for g in limit.groups])
        return limit, demand

    def ne_cost(self, config: SolverConfig | None = None) -> float:
        """Total cost of the solved NE of the limit instance."""
        from ..equilibrium import solve_wardrop
        from ..game import total_cost

        game, d = self.to_game()
        res = solve_wardrop(game, d, config)
        return total_cost(game, res.profile)

    def is_well_designed(self, config: SolverConfig | None = None, tol: float = 1e-6):
        """PoA of the limit instance equals 1 (within ``tol``); ``None`` if undefined."""
        from .poa import price_of_anarchy

        game, d = self.to_game()
        res = price_of_anarchy(game, d, config)
        if res.poa is None:
            return None
        return bool(res.poa <= 1 + tol)

    def __str__(self):
        lines = [f"limit game (phase {self.residue}, g = {self.gauge})"]
        for a, lp in self.limits.items():
            lines.append(f"  {a}: {lp}")
        lines.append(f"  tight strategies: {', '.join(self.tight_strategies) or '-'}")
        lines.append(f"  surviving groups: {', '.join(self.surviving_groups) or '-'}")
        lines.append(f"  negligible: {', '.join(sorted(self.negligible)) or '-'}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "valid": True,
            "phase": self.residue,
            "gauge": self.gauge.to_dict(),
            "limits": {a: lp.to_dict() for a, lp in self.limits.items()},
            "shares": self.shares,
            "tight_strategies": self.tight_strategies,
            "negligible": sorted(self.negligible),
            "surviving_groups": self.surviving_groups,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def build_limit_game(game: Game, path: DemandPath, phase: int, scaling) -> LimitGame | LimitDiagnostic:
    """Limit game on phase ``phase`` with scaling ``T**alpha`` or a :class:`Gauge`.

    Returns a :class:`LimitDiagnostic` when some group is neither negligible
    nor owns a tight strategy, or when the limit NE cost is zero.
    """
    ph = path.phases[phase % path.modulus]
    gauge = _as_gauge(scaling)
    limits = {a.id: limit_price(a.price, gauge) for a in game.resources}
    shares = ph.shares(game.group_ids)
    negl = negligible_groups(game, ph, gauge)
    tight, by_group = [], {}
    for g in game.groups:
        ts = [s for s in g.strategies if all(limits[a].is_finite for a, r in s.uses if r > 0)]
        by_group[g.id] = ts
        tight.extend(s.id for s in ts)
    for g in game.groups:
        if g.id not in negl and not by_group[g.id]:
            return LimitDiagnostic(
                "L3", f"group {g.id!r} is not negligible and has no tight strategy", ph.residue, gauge, limits
            )
    surviving = [g.id for g in game.groups if g.id not in negl or by_group[g.id]]
    # The limit NE cost is positive exactly when some group with positive
    # share cannot avoid a power-limit resource on any tight strategy.
    positive = any(
        shares[k] > 0 and by_group[k] and all(any(limits[a].kind == "power" for a, r in s.uses if r > 0) for s in by_group[k])
        for k in surviving
    )
    if not positive:
        return LimitDiagnostic(
            "L4", "the limit game has NE cost zero (every loaded group has an all-zero tight strategy)",
            ph.residue, gauge, limits,
        )
    return LimitGame(game, ph.residue, gauge, limits, shares, tight, negl, surviving)
