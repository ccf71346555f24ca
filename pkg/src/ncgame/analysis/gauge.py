"""Gaugeability: one regularly varying scale that fits a whole demand path.

For prices in the polynomial and power-log families every ratio
``tau_a(x) / g(x)`` has a symbolic limit, so the gauge conditions are
decided exactly by comparing growth keys.
"""
from __future__ import annotations

import itertools
import json
from dataclasses import dataclass, field
from fractions import Fraction

from ..game import Game
from .demand import DemandPath
from .limits import Gauge
from .structure import ZERO_KEY, growth_key

MAX_SUBSET_GROUPS = 12


@dataclass(frozen=True)
class Q:
    """Limit ``q_a = lim tau_a / g``: ``"zero"``, ``"finite"`` (with value) or ``"infinite"``."""

    kind: str
    value: float = 0.0

    def order(self) -> tuple:
        return ({"zero": 0, "finite": 1, "infinite": 2}[self.kind], self.value)

    def __str__(self):
        return {"zero": "0", "infinite": "inf"}.get(self.kind, f"{self.value:g}")

    def to_json(self):
        return {"zero": 0, "infinite": "inf"}.get(self.kind, self.value)


def q_value(price, gauge: Gauge) -> Q:
    key = growth_key(price)
    if key == ZERO_KEY or key < gauge.key:
        return Q("zero")
    if key > gauge.key:
        return Q("infinite")
    return Q("finite", price.scale / gauge.c)


def _strategy_max(game, qs):
    out = {}
    for g in game.groups:
        for s in g.strategies:
            vals = [qs[a] for a, r in s.uses if r > 0]
            out[(g.id, s.id)] = max(vals, key=Q.order) if vals else Q("zero")
    return out


def _group_min(game, smax):
    return {
        g.id: min((smax[(g.id, s.id)] for s in g.strategies), key=Q.order, default=Q("infinite"))
        for g in game.groups
    }


@dataclass
class GaugeReport:
    gauge: Gauge
    q: dict
    group_level: dict
    tight: list
    g1: bool
    g2: bool
    g3: bool | None
    tight_share: float | None = None
    subset: list | None = None
    variant: str = "path"
    notes: list = field(default_factory=list)

    @property
    def gaugeable(self) -> bool:
        return bool(self.g1 and self.g2 and self.g3)

    def __str__(self):
        mark = "G1'-G3'" if self.variant == "subset" else "G1-G3"
        lines = [f"gauge g = {self.gauge}: {mark} {'hold' if self.gaugeable else 'fail'}"]
        lines.append("  q: " + ", ".join(f"{a}={v}" for a, v in self.q.items()))
        lines.append(f"  tight groups: {', '.join(self.tight) or '-'}")
        lines.append(f"  G1={self.g1} G2={self.g2} G3={self.g3}")
        if self.tight_share is not None:
            lines.append(f"  liminf tight share = {self.tight_share:g}")
        return "\n".join(lines)

    def to_dict(self) -> dict:
        return {
            "gauge": self.gauge.to_dict(),
            "variant": self.variant,
            "q": {a: v.to_json() for a, v in self.q.items()},
            "tight": self.tight,
            "G1": self.g1,
            "G2": self.g2,
            "G3": self.g3,
            "tight_share": self.tight_share,
            "subset": self.subset,
            "gaugeable": self.gaugeable,
        }

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _base(game: Game, gauge: Gauge):
    qs = {a.id: q_value(a.price, gauge) for a in game.resources}
    smax = _strategy_max(game, qs)
    gmin = _group_min(game, smax)
    tight = [k for k, v in gmin.items() if v.kind == "finite"]
    return qs, gmin, tight


def gauge_check(game: Game, path: DemandPath, gauge: Gauge) -> GaugeReport:
    """Check G1-G3 for ``gauge`` along ``path``.

    G3's lower limit is the minimum over phases of the limiting share of
    tight groups, since each phase is a power-law subsequence.
    """
    qs, gmin, tight = _base(game, gauge)
    g2 = all(v.kind != "infinite" for v in gmin.values())
    share = min(sum(ph.shares(game.group_ids)[k] for k in tight) for ph in path.phases)
    return GaugeReport(gauge, qs, gmin, tight, True, g2, share > 0, share)


def gauge_check_subset(game: Game, subset, gauge: Gauge) -> GaugeReport:
    """Check G1'-G3' for the groups in ``subset``."""
    subset = list(subset)
    qs, gmin, tight = _base(game, gauge)
    g2 = all(gmin[k].kind != "infinite" for k in subset)
    g3 = any(k in tight for k in subset)
    return GaugeReport(gauge, qs, gmin, [k for k in tight if k in subset], True, g2, g3, None, subset, "subset")


def candidate_gauges(game: Game) -> list[Gauge]:
    """Unit-scale gauges with ``(rho, beta)`` taken from the game's prices, plus the constant."""
    keys = {(Fraction(0), Fraction(0))}
    for a in game.resources:
        k = growth_key(a.price)
        if k != ZERO_KEY:
            keys.add(k)
    return [Gauge(1.0, rho, beta) for rho, beta in sorted(keys)]


def find_gauge(game: Game, subset=None, path: DemandPath | None = None) -> Gauge | None:
    """First candidate gauge (slowest first) that passes.

    With ``path`` the test is G1-G3 along the path; otherwise G1'-G3' for
    ``subset`` (all groups when omitted).  Only the growth key of a gauge
    affects the verdicts, so unit scales suffice.
    """
    for gauge in candidate_gauges(game):
        if path is not None:
            rep = gauge_check(game, path, gauge)
        else:
            rep = gauge_check_subset(game, subset if subset is not None else game.group_ids, gauge)
        if rep.gaugeable:
            return gauge
    return None


def subset_gauges(game: Game) -> dict:
    """A G1'-G3' gauge (or ``None``) for every non-empty subset of groups."""
    ids = game.group_ids
    if len(ids) > MAX_SUBSET_GROUPS:
        raise ValueError(f"subset search is exponential; limited to {MAX_SUBSET_GROUPS} groups")
    out = {}
    for r in range(1, len(ids) + 1):
        for sub in itertools.combinations(ids, r):
            out[sub] = find_gauge(game, sub)
    return out
