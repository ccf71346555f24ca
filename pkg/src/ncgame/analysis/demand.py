"""Phased power-law demand sequences ``d_k(n) = theta_k * n**p_k``.

A path is split into phases by the residue of ``n`` modulo a common
modulus, which is enough to express alternating sequences where different
groups dominate on different subsequences.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path

import numpy as np

from ..prices import as_fraction, fraction_to_json


@dataclass(frozen=True)
class Term:
    theta: float
    p: Fraction

    def __post_init__(self):
        if not (np.isfinite(self.theta) and self.theta >= 0):
            raise ValueError(f"theta must be finite and >= 0, got {self.theta}")
        if self.p < 0:
            raise ValueError(f"exponent must be >= 0, got {self.p}")


@dataclass(frozen=True)
class Phase:
    modulus: int
    residue: int
    terms: dict = field(hash=False)

    @property
    def active(self) -> dict:
        return {k: t for k, t in self.terms.items() if t.theta > 0}

    @property
    def total_exponent(self) -> Fraction:
        """Growth exponent of ``T(d(n))`` along this phase."""
        return max(t.p for t in self.active.values())

    def dominant(self, groups=None) -> list:
        """Groups whose volume is a non-vanishing share of the total."""
        active = self.active
        if groups is not None:
            active = {k: t for k, t in active.items() if k in set(groups)}
        if not active:
            return []
        top = max(t.p for t in active.values())
        return [k for k, t in active.items() if t.p == top]

    def shares(self, groups=None) -> dict:
        """Limit shares ``lim d_k / T`` (restricted to ``groups`` if given)."""
        keys = list(self.terms) if groups is None else list(groups)
        dom = self.dominant(keys)
        total = sum(self.terms[k].theta for k in dom)
        return {k: (self.terms[k].theta / total if k in dom else 0.0) for k in keys}

    def volume(self, group, n) -> float:
        t = self.terms.get(group)
        if t is None or t.theta == 0:
            return 0.0
        return t.theta * float(n) ** float(t.p)


class DemandPath:
    """Demand sequence indexed by ``n >= 1``."""

    def __init__(self, phases):
        phases = sorted(phases, key=lambda ph: ph.residue)
        if not phases:
            raise ValueError("a demand path needs at least one phase")
        m = phases[0].modulus
        if any(ph.modulus != m for ph in phases):
            raise ValueError("all phases must share one modulus")
        if [ph.residue for ph in phases] != list(range(m)):
            raise ValueError(f"phases must cover residues 0..{m - 1} exactly once")
        for ph in phases:
            if not any(t.theta > 0 and t.p > 0 for t in ph.terms.values()):
                raise ValueError(
                    f"phase {ph.residue} (mod {m}) has no growing group; total demand must diverge"
                )
        self.phases = tuple(phases)
        self.modulus = m

    @classmethod
    def power_law(cls, terms: dict) -> "DemandPath":
        """Single phase from ``{group: (theta, p)}``."""
        return cls([Phase(1, 0, {str(k): Term(float(th), as_fraction(p)) for k, (th, p) in terms.items()})])

    def __repr__(self):
        return f"DemandPath(modulus={self.modulus}, phases={len(self.phases)})"

    @property
    def groups(self) -> list:
        seen = []
        for ph in self.phases:
            for k in ph.terms:
                if k not in seen:
                    seen.append(k)
        return seen

    def phase_of(self, n: int) -> Phase:
        return self.phases[n % self.modulus]

    def demand(self, n: int, group_ids) -> np.ndarray:
        ph = self.phase_of(n)
        unknown = set(ph.terms) - set(group_ids)
        if unknown:
            raise ValueError(f"demand path mentions unknown groups {sorted(unknown)}")
        return np.array([ph.volume(g, n) for g in group_ids])

    def to_dict(self) -> dict:
        return {
            "phases": [
                {
                    "modulus": ph.modulus,
                    "residue": ph.residue,
                    "groups": {
                        k: {"theta": t.theta, "p": fraction_to_json(t.p)} for k, t in ph.terms.items()
                    },
                }
                for ph in self.phases
            ]
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DemandPath":
        raw = data["phases"] if "phases" in data else [{"modulus": 1, "residue": 0, "groups": data["groups"]}]
        phases = []
        for ph in raw:
            terms = {
                str(k): Term(float(v.get("theta", 1.0)), as_fraction(v.get("p", 1)))
                for k, v in ph["groups"].items()
            }
            phases.append(Phase(int(ph.get("modulus", 1)), int(ph.get("residue", 0)), terms))
        return cls(phases)

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_dict(), **kw)

    @classmethod
    def load(cls, path) -> "DemandPath":
        return cls.from_dict(json.loads(Path(path).read_text()))

    def save(self, path) -> None:
        Path(path).write_text(self.to_json(indent=2) + "\n")
