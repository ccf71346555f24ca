"""Price (latency) functions with symbolic access to their growth index.

Two families are supported:

* :class:`Polynomial` -- ``sum_i b_i x**i`` with ``b_i >= 0``.
* :class:`PowerLog` -- ``c * x**rho * ln(e + x)**beta``, the smallest
  regularly varying family with a non-trivial slowly varying part.

Both expose ``index`` (the regular variation index, an exact
:class:`~fractions.Fraction`), ``log_exponent`` and ``scale`` so that the
asymptotic analyzers can compare functions without sampling them.
"""
from __future__ import annotations

import math
from abc import ABC, abstractmethod
from fractions import Fraction
from functools import cached_property

import numpy as np
from numpy.polynomial import polynomial as P
from scipy import integrate, optimize

E = math.e


def as_fraction(value) -> Fraction:
    """Exact rational from an int, str ("3/2"), Fraction or float."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("boolean is not a valid exponent")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        if not math.isfinite(value):
            raise ValueError(f"exponent must be finite, got {value!r}")
        return Fraction(repr(value))
    return Fraction(str(value))


def fraction_to_json(value: Fraction):
    if value.denominator == 1:
        return value.numerator
    return f"{value.numerator}/{value.denominator}"


class PriceFunction(ABC):
    """Non-negative, non-decreasing price function on ``[0, inf)``."""

    kind: str

    @abstractmethod
    def __call__(self, x):
        ...

    @abstractmethod
    def derivative(self, x):
        ...

    @abstractmethod
    def antiderivative(self, x):
        """``int_0^x tau(u) du``."""

    @abstractmethod
    def marginal(self) -> "PriceFunction":
        """The marginal (auxiliary) price ``x tau'(x) + tau(x)``."""

    @property
    @abstractmethod
    def index(self) -> Fraction | None:
        """Regular variation index; ``None`` for the zero function."""

    @property
    def log_exponent(self) -> Fraction:
        return Fraction(0)

    @property
    @abstractmethod
    def scale(self) -> float:
        """Leading constant: ``tau(x) ~ scale * x**index * ln(x)**log_exponent``."""

    @property
    def is_zero(self) -> bool:
        return False

    def growth(self) -> tuple[Fraction, Fraction] | None:
        """Asymptotic order key ``(index, log_exponent)``; ``None`` if zero."""
        if self.index is None:
            return None
        return (self.index, self.log_exponent)

    @abstractmethod
    def to_dict(self) -> dict:
        ...

    @staticmethod
    def from_dict(data: dict) -> "PriceFunction":
        kind = data.get("kind")
        if kind == "poly":
            return Polynomial(data["coeffs"])
        if kind == "powerlog":
            return PowerLog(data["c"], data["rho"], data.get("beta", 0), data.get("offset", 0.0))
        raise ValueError(f"unknown price kind {kind!r}")


class Polynomial(PriceFunction):
    """Polynomial with non-negative coefficients, lowest power first.

    >>> tau = Polynomial([1, 0, 0, 0, 0.15])
    >>> float(tau(2.0))
    3.4
    """

    kind = "poly"

    def __init__(self, coeffs):
        coeffs = [float(c) for c in coeffs]
        if not coeffs:
            coeffs = [0.0]
        for c in coeffs:
            if not math.isfinite(c):
                raise ValueError(f"coefficients must be finite, got {c!r}")
            if c < 0:
                raise ValueError(f"coefficients must be >= 0, got {c!r}")
        while len(coeffs) > 1 and coeffs[-1] == 0.0:
            coeffs.pop()
        self.coeffs = tuple(coeffs)
        self._c = np.asarray(self.coeffs)

    def __repr__(self):
        return f"Polynomial({list(self.coeffs)})"

    def __eq__(self, other):
        return isinstance(other, Polynomial) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(("poly", self.coeffs))

    def __call__(self, x):
        return P.polyval(x, self._c)

    def derivative(self, x):
        return P.polyval(x, P.polyder(self._c)) if len(self._c) > 1 else 0.0 * np.asarray(x, dtype=float)

    def antiderivative(self, x):
        return P.polyval(x, P.polyint(self._c))

    def marginal(self) -> "Polynomial":
        return Polynomial([(i + 1) * b for i, b in enumerate(self.coeffs)])

    @property
    def degree(self) -> int | None:
        return None if self.is_zero else len(self.coeffs) - 1

    @property
    def index(self):
        d = self.degree
        return None if d is None else Fraction(d)

    @property
    def scale(self) -> float:
        return self.coeffs[-1]

    @property
    def is_zero(self) -> bool:
        return self.coeffs == (0.0,)

    def to_dict(self):
        return {"kind": "poly", "coeffs": list(self.coeffs)}


def _powerlog_min_ratio() -> float:
    # min over x > 0 of (e + x) ln(e + x) / x, attained where x = e ln(e + x)
    x = optimize.brentq(lambda x: x - E * math.log(E + x), 1.0, 100.0)
    return (E + x) * math.log(E + x) / x


class PowerLog(PriceFunction):
    """``offset + c * x**rho * ln(e + x)**beta`` with ``c > 0``, ``rho >= 0``, ``offset >= 0``.

    The offset (zero by default) lets BPR prices with a non-integer power
    keep their free-flow constant; it never changes the growth key.

    A negative ``beta`` is accepted only when the function stays
    non-decreasing on the whole half line, i.e. when
    ``rho * min_x (e+x) ln(e+x) / x >= -beta``.
    """

    kind = "powerlog"
    _MIN_RATIO = _powerlog_min_ratio()

    def __init__(self, c, rho, beta=0, offset=0.0):
        c = float(c)
        offset = float(offset)
        if not (math.isfinite(offset) and offset >= 0):
            raise ValueError(f"PowerLog offset must be >= 0, got {offset!r}")
        if not (math.isfinite(c) and c > 0):
            raise ValueError(f"PowerLog scale must be > 0, got {c!r}")
        rho = as_fraction(rho)
        beta = as_fraction(beta)
        if rho < 0:
            raise ValueError(f"PowerLog power must be >= 0, got {rho}")
        if beta < 0:
            if rho == 0:
                raise ValueError("PowerLog with beta < 0 requires rho > 0")
            if float(rho) * self._MIN_RATIO < -float(beta):
                raise ValueError(
                    f"PowerLog(rho={rho}, beta={beta}) is decreasing somewhere on [0, inf)"
                )
        self.c = c
        self.offset = offset
        self.rho = rho
        self.beta = beta
        self._rho = float(rho)
        self._beta = float(beta)

    def __repr__(self):
        extra = f", offset={self.offset!r}" if self.offset else ""
        return f"PowerLog(c={self.c!r}, rho={self.rho}, beta={self.beta}{extra})"

    def __eq__(self, other):
        return (
            isinstance(other, PowerLog)
            and (self.c, self.rho, self.beta, self.offset)
            == (other.c, other.rho, other.beta, other.offset)
        )

    def __hash__(self):
        return hash(("powerlog", self.c, self.rho, self.beta, self.offset))

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(divide="ignore", invalid="ignore"):
            out = self.offset + self.c * np.power(x, self._rho) * np.power(np.log(E + x), self._beta)
        return out if out.ndim else float(out)

    def derivative(self, x):
        x = np.asarray(x, dtype=float)
        L = np.log(E + x)
        with np.errstate(divide="ignore", invalid="ignore"):
            if self._rho == 0:
                power_term = np.zeros_like(x)
            else:
                power_term = self._rho * np.power(x, self._rho - 1) * np.power(L, self._beta)
            log_term = np.power(x, self._rho) * self._beta * np.power(L, self._beta - 1) / (E + x)
            out = self.c * (power_term + log_term)
        return out if out.ndim else float(out)

    def antiderivative(self, x):
        def one(b):
            if b <= 0:
                return 0.0
            val, _ = integrate.quad(self, 0.0, b, epsabs=1e-12, epsrel=1e-12, limit=200)
            return val

        x = np.asarray(x, dtype=float)
        if x.ndim == 0:
            return one(float(x))
        return np.array([one(b) for b in x.ravel()]).reshape(x.shape)

    def marginal(self) -> "MarginalPrice":
        return MarginalPrice(self)

    @property
    def index(self):
        return self.rho

    @property
    def log_exponent(self):
        return self.beta

    @property
    def scale(self):
        if self.rho == 0 and self.beta == 0:
            return self.c + self.offset
        return self.c

    def to_dict(self):
        out = {
            "kind": "powerlog",
            "c": self.c,
            "rho": fraction_to_json(self.rho),
            "beta": fraction_to_json(self.beta),
        }
        if self.offset:
            out["offset"] = self.offset
        return out


class MarginalPrice(PriceFunction):
    """``x tau'(x) + tau(x)`` for a non-polynomial ``tau``.

    Its antiderivative is exactly the total cost ``x tau(x)``, so no
    quadrature is needed when it drives a system-optimum solve.
    """

    kind = "marginal"

    def __init__(self, base: PriceFunction):
        self.base = base

    def __repr__(self):
        return f"MarginalPrice({self.base!r})"

    def __call__(self, x):
        x = np.asarray(x, dtype=float)
        with np.errstate(invalid="ignore"):
            xd = np.where(x > 0, x * self.base.derivative(x), 0.0)
        out = xd + self.base(x)
        return out if np.ndim(out) else float(out)

    def derivative(self, x, h=1e-6):
        x = np.asarray(x, dtype=float)
        h = h * np.maximum(x, 1.0)
        lo = np.maximum(x - h, 0.0)
        return (self(x + h) - self(lo)) / (x + h - lo)

    def antiderivative(self, x):
        return np.asarray(x, dtype=float) * self.base(x)

    def marginal(self):
        return MarginalPrice(self)

    @cached_property
    def _growth_factor(self) -> float:
        # c(x) / tau(x) -> 1 + index
        return 1.0 + float(self.base.index or 0)

    @property
    def index(self):
        return self.base.index

    @property
    def log_exponent(self):
        return self.base.log_exponent

    @property
    def scale(self):
        return self.base.scale * self._growth_factor

    def to_dict(self):
        raise TypeError("marginal prices are derived and not serialized")


def marginal_price(price: PriceFunction) -> PriceFunction:
    """Auxiliary price ``c(x) = x tau'(x) + tau(x)`` whose equilibria are system optima."""
    return price.marginal()
