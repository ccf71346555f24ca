"""Numerical checks of regular variation for a price function.

Two sampled quantities should converge to the regular variation index:

* ``log(tau(2t) / tau(t)) / log 2`` (the defining limit ratio), and
* ``t * tau'(t) / tau(t)`` (the Karamata ratio).

For slowly varying factors such as ``ln(e + x)**beta`` both converge only
like ``1 / ln t``, so the raw samples at ``t = 1e8`` still carry an error of
about ``beta / 18``.  The reported estimates therefore extrapolate the
three samples to ``1 / ln t -> 0`` with a quadratic in ``1 / ln t``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

SAMPLE_POINTS = (1e4, 1e6, 1e8)
INDEX_POINT = 1e6


@dataclass
class RegVarDiagnostics:
    index: float | None
    index_estimate: float | None
    karamata_estimate: float | None
    index_samples: dict
    karamata_samples: dict
    index_at_1e6: float | None

    def matches(self, tol: float = 0.05) -> bool:
        if self.index is None:
            return self.index_estimate is None
        return (
            abs(self.index_estimate - self.index) <= tol
            and abs(self.karamata_estimate - self.index) <= tol
        )

    def to_dict(self) -> dict:
        return {
            "index": self.index,
            "index_estimate": self.index_estimate,
            "karamata_estimate": self.karamata_estimate,
            "index_samples": {f"{t:g}": v for t, v in self.index_samples.items()},
            "karamata_samples": {f"{t:g}": v for t, v in self.karamata_samples.items()},
            "index_at_1e6": self.index_at_1e6,
        }


def _extrapolate(ts, vals) -> float:
    """Value at ``1/ln t = 0`` of the quadratic in ``1/ln t`` through the samples."""
    u = np.array([1.0 / math.log(t) for t in ts])
    coef = np.polyfit(u, np.asarray(vals, dtype=float), deg=len(ts) - 1)
    return float(coef[-1])


def _log_ratio(price, t, x=2.0) -> float:
    return math.log(float(price(t * x)) / float(price(t))) / math.log(x)


def _karamata(price, t) -> float:
    return t * float(price.derivative(t)) / float(price(t))


def regvar_diagnostics(price, points=SAMPLE_POINTS) -> RegVarDiagnostics:
    """Sample and extrapolate the index and Karamata ratio of ``price``."""
    if price.index is None:
        return RegVarDiagnostics(None, None, None, {}, {}, None)
    idx = {t: _log_ratio(price, t) for t in points}
    kar = {t: _karamata(price, t) for t in points}
    return RegVarDiagnostics(
        float(price.index),
        _extrapolate(points, list(idx.values())),
        _extrapolate(points, list(kar.values())),
        idx,
        kar,
        _log_ratio(price, INDEX_POINT),
    )
