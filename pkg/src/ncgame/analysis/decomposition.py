"""Inductive partition of groups into asymptotic levels along a demand path.

On each phase the groups are peeled off level by level.  Level ``l``
looks at the remaining groups, takes the exponent of their total volume
``T_l``, and sets ``alpha_l`` to the largest group degree among those with a
non-vanishing share of ``T_l``.  Level ``l`` then collects every remaining
group of degree at most ``alpha_l``.  Its scale ``g^(l) = T_l**alpha_l`` is
compared with the earlier scales: if it does not grow faster the level is
negligible, otherwise it is asymptotically independent of the earlier ones.

Growth is tracked as exact keys ``(power, log power)`` of ``n``; for
polynomial prices the log part is always zero.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from ..game import Game
from ..prices import fraction_to_json
from .demand import DemandPath, Phase
from .structure import ZERO_KEY, group_keys

NEG_INF = float("-inf")


def _fmt_key(key) -> str:
    if key is None or key == ZERO_KEY:
        return "-"
    p, b = key
    return str(p) if b == 0 else f"{p} (log^{b})"


def _json_key(key):
    if key is None or key == ZERO_KEY:
        return None
    return fraction_to_json(key[0]) if key[1] == 0 else [fraction_to_json(key[0]), fraction_to_json(key[1])]


@dataclass
class Level:
    groups: list
    alpha: tuple
    t_exponent: Fraction | None
    g_exponent: tuple | None
    verdict: str
    dominant: list = field(default_factory=list)

    @property
    def alpha_index(self):
        return None if self.alpha == ZERO_KEY else self.alpha[0]

    @property
    def cost_exponent(self):
        """Growth exponent of ``T_l * g^(l)``, i.e. ``(alpha_l + 1) * exp(T_l)``."""
        if self.t_exponent is None:
            return None
        a = self.alpha_index or Fraction(0)
        return (a + 1) * self.t_exponent

    def to_dict(self) -> dict:
        return {
            "groups": self.groups,
            "dominant": self.dominant,
            "alpha": _json_key(self.alpha),
            "T_exponent": None if self.t_exponent is None else fraction_to_json(self.t_exponent),
            "g_exponent": _json_key(self.g_exponent),
            "cost_exponent": None if self.cost_exponent is None else fraction_to_json(self.cost_exponent),
            "verdict": self.verdict,
        }


@dataclass
class PhaseDecomposition:
    residue: int
    modulus: int
    levels: list

    @property
    def predicted_cost_exponent(self) -> Fraction | None:
        """Exponent of ``n`` in the total cost, ``max_u (alpha_u + 1) * exp(T_u)``."""
        vals = [lv.cost_exponent for lv in self.levels if lv.cost_exponent is not None]
        return max(vals) if vals else None

    def level_of(self, group) -> int:
        for i, lv in enumerate(self.levels):
            if group in lv.groups:
                return i
        raise KeyError(group)

    def to_dict(self) -> dict:
        pce = self.predicted_cost_exponent
        return {
            "phase": self.residue,
            "modulus": self.modulus,
            "levels": [lv.to_dict() for lv in self.levels],
            "predicted_cost_exponent": None if pce is None else fraction_to_json(pce),
        }


@dataclass
class DecompositionReport:
    phases: list

    def phase(self, residue: int = 0) -> PhaseDecomposition:
        return self.phases[residue]

    @property
    def predicted_cost_exponent(self):
        """Per phase when phases differ; a single value when they agree."""
        vals = [ph.predicted_cost_exponent for ph in self.phases]
        return vals[0] if len(set(vals)) == 1 else vals

    def render(self) -> str:
        header = f"{'phase':>5}  {'level':>5}  {'groups':<24} {'alpha':>8} {'T exp':>6} {'g exp':>8}  verdict"
        lines = [header, "-" * len(header)]
        for ph in self.phases:
            for i, lv in enumerate(ph.levels):
                groups = ",".join(lv.groups)
                t = "-" if lv.t_exponent is None else str(lv.t_exponent)
                lines.append(
                    f"{ph.residue:>5}  {'K_' + str(i):>5}  {groups:<24} {_fmt_key(lv.alpha):>8} {t:>6} "
                    f"{_fmt_key(lv.g_exponent):>8}  {lv.verdict}"
                )
            lines.append(f"{'':>5}  predicted total-cost exponent: {ph.predicted_cost_exponent}")
        return "\n".join(lines)

    def __str__(self):
        return self.render()

    def to_dict(self) -> dict:
        return {"phases": [ph.to_dict() for ph in self.phases]}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)


def _decompose_phase(game: Game, ph: Phase, rho: dict) -> PhaseDecomposition:
    remaining = list(game.group_ids)
    active = ph.active
    levels: list[Level] = []
    g_max = None
    while remaining:
        live = [k for k in remaining if k in active]
        if not live:
            # groups that never carry volume on this phase
            alpha = max(rho[k] for k in remaining)
            levels.append(Level(list(remaining), alpha, None, None, "idle"))
            break
        dominant = ph.dominant(live)
        t_exp = max(active[k].p for k in dominant)
        alpha = max(rho[k] for k in dominant)
        members = [k for k in remaining if k in dominant or rho[k] <= alpha]
        a_idx = Fraction(0) if alpha == ZERO_KEY else alpha[0]
        a_log = Fraction(0) if alpha == ZERO_KEY else alpha[1]
        g_exp = (a_idx * t_exp, a_log)
        if g_max is None:
            verdict = "base"
        elif g_exp <= g_max:
            verdict = "negligible"
        else:
            verdict = "independent"
        g_max = g_exp if g_max is None else max(g_max, g_exp)
        levels.append(Level(members, alpha, t_exp, g_exp, verdict, dominant))
        remaining = [k for k in remaining if k not in members]
    return PhaseDecomposition(ph.residue, ph.modulus, levels)


def asymptotic_decomposition(game: Game, path: DemandPath) -> DecompositionReport:
    """Level partition ``K_0, ..., K_t`` of the groups, per phase of ``path``."""
    unknown = set(path.groups) - set(game.group_ids)
    if unknown:
        raise ValueError(f"demand path mentions unknown groups {sorted(unknown)}")
    rho = group_keys(game)
    phases = []
    for ph in path.phases:
        if not ph.active:
            raise ValueError(f"phase {ph.residue} has no group with positive volume")
        phases.append(_decompose_phase(game, ph, rho))
    return DecompositionReport(phases)
