"""Characteristic classes from Chern data: Todd, square-root Todd and log Gamma.

Additive classes sum a power series over the Chern roots; the power sums of
the roots are obtained from the Chern classes by Newton's identities.
Multiplicative classes are exponentials of additive classes of ``log f``.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

import numpy as np
from scipy import special

from .cohring import CohClass, GradedRingSpec, multiply, nilpotent_exp, parse_rational
from .errors import ConfigError, DomainError, RingMismatchError

# 20 significant digits
EULER_GAMMA = 0.57721566490153286061
ZETA3 = 1.2020569031595942854
ZETA5 = 1.0369277551433699263
ZETA7 = 1.0083492773819228268

_ZETA = {3: ZETA3, 5: ZETA5, 7: ZETA7}


def zeta_odd(k: int) -> float:
    if k in _ZETA:
        return _ZETA[k]
    return float(special.zeta(k, 1))


# -- truncated power series, coefficients as lists (Fraction or float) -------

def series_mul(a, b, order):
    return [sum(a[i] * b[k - i] for i in range(k + 1) if i < len(a) and k - i < len(b))
            for k in range(order + 1)]


def series_inv(a, order):
    b = [0] * (order + 1)
    b[0] = 1 / a[0]
    for k in range(1, order + 1):
        b[k] = -b[0] * sum(a[j] * b[k - j] for j in range(1, min(k, len(a) - 1) + 1))
    return b


def series_log(a, order):
    """log(a) for a[0] == 1, from a * log(a)' = a'."""
    if a[0] != 1:
        raise ValueError("series_log needs constant term 1")
    a = list(a) + [0] * max(0, order + 1 - len(a))
    b = [0] * (order + 1)
    for k in range(1, order + 1):
        b[k] = (k * a[k] - sum(j * b[j] * a[k - j] for j in range(1, k))) / k
    return b


def series_exp(a, order):
    if a[0] != 0:
        raise ValueError("series_exp needs constant term 0")
    a = list(a) + [0] * max(0, order + 1 - len(a))
    e = [0] * (order + 1)
    e[0] = 1
    for k in range(1, order + 1):
        e[k] = sum(j * a[j] * e[k - j] for j in range(1, k + 1)) / k
    return e


@lru_cache(maxsize=None)
def todd_series(order: int) -> tuple:
    """Exact coefficients of z/(1 - e^{-z})."""
    denom = [Fraction((-1) ** k, math.factorial(k + 1)) for k in range(order + 1)]
    return tuple(series_inv(denom, order))


@lru_cache(maxsize=None)
def sqrt_todd_series(order: int) -> tuple:
    half_log = [c / 2 for c in series_log(list(todd_series(order)), order)]
    return tuple(series_exp(half_log, order))


@lru_cache(maxsize=None)
def log_gamma_series(order: int) -> tuple:
    """Coefficients of Im log Gamma(1 + z/(2 pi i)) for real z: odd powers only."""
    coeffs = [0.0] * (order + 1)
    if order >= 1:
        coeffs[1] = EULER_GAMMA / (2 * math.pi)
    for k in range(3, order + 1, 2):
        j = (k - 1) // 2
        coeffs[k] = (-1) ** j * zeta_odd(k) / (k * (2 * math.pi) ** k)
    return tuple(coeffs)


@dataclass(frozen=True)
class SeriesTable:
    """Td, sqrt(Td) and the log Gamma series up to ``order`` (inclusive)."""

    order: int
    td: tuple
    sqrt_td: tuple
    log_gamma: tuple

    @classmethod
    def build(cls, order: int) -> "SeriesTable":
        return cls(order,
                   tuple(float(c) for c in todd_series(order)),
                   tuple(float(c) for c in sqrt_todd_series(order)),
                   log_gamma_series(order))

    @classmethod
    def for_dimension(cls, n: int) -> "SeriesTable":
        return cls.build(2 * n + 1)


def eval_series(coeffs: Sequence, z: complex) -> complex:
    acc = 0j
    for c in reversed(coeffs):
        acc = acc * z + complex(c)
    return acc


# -- Chern data ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class ChernData:
    """Chern classes c_1..c_n of the variety modelled by ``ring``."""

    ring: GradedRingSpec
    c: tuple  # c[k - 1] is c_k

    def __post_init__(self):
        for k, ck in enumerate(self.c, start=1):
            if ck.ring is not self.ring:
                raise RingMismatchError(f"c_{k} lives in another ring")
            if not ck.is_pure_degree(2 * k):
                raise ValueError(f"c_{k} must be of pure degree {2 * k}")
            if np.any(ck.coeffs.imag != 0):
                raise ValueError(f"c_{k} must be real")

    def ck(self, k: int) -> CohClass:
        if k == 0:
            return self.ring.unit()
        if 1 <= k <= len(self.c):
            return self.c[k - 1]
        return self.ring.zero()

    @classmethod
    def trivial(cls, ring: GradedRingSpec) -> "ChernData":
        return cls(ring, tuple(ring.zero() for _ in range(ring.dim_n)))

    @classmethod
    def from_dict(cls, ring: GradedRingSpec, data: Mapping) -> "ChernData":
        """``{"c2": {"H2": 10}, "c3": {"H3": -40}}``; missing classes are zero."""
        cs = []
        for k in range(1, ring.dim_n + 1):
            entry = data.get(f"c{k}", {})
            try:
                coeffs = {label: float(parse_rational(v)) for label, v in entry.items()}
                cs.append(ring.element(coeffs))
            except (KeyError, ValueError, TypeError) as exc:
                raise ConfigError(str(exc), f"chern.c{k}") from None
        extra = set(data) - {f"c{k}" for k in range(1, ring.dim_n + 1)}
        if extra:
            raise ConfigError(f"unexpected Chern classes {sorted(extra)}", "chern")
        try:
            return cls(ring, tuple(cs))
        except ValueError as exc:
            raise ConfigError(str(exc), "chern") from None

    @property
    def c1(self) -> CohClass:
        return self.ck(1)


def power_sums(chern: ChernData) -> list:
    """p_0..p_n of the Chern roots (p_0 is the zero class, by convention)."""
    n = chern.ring.dim_n
    p = [chern.ring.zero()]
    for k in range(1, n + 1):
        acc = (-1) ** (k - 1) * k * chern.ck(k)
        for i in range(1, k):
            acc = acc + (-1) ** (i - 1) * multiply(chern.ck(i), p[k - i])
        p.append(acc)
    return p


def additive_class(series: Sequence, chern: ChernData) -> CohClass:
    """Sum over Chern roots x_i of f(x_i), f given by its coefficients."""
    if len(series) and series[0] != 0:
        raise ValueError("additive classes need a series with zero constant term")
    p = power_sums(chern)
    out = chern.ring.zero()
    for k in range(1, min(len(series) - 1, chern.ring.dim_n) + 1):
        if series[k]:
            out = out + complex(series[k]) * p[k]
    return out


def multiplicative_class(series: Sequence, chern: ChernData) -> CohClass:
    """Product over Chern roots of f(x_i), computed as exp of the additive class of log f."""
    if not len(series) or series[0] != 1:
        raise ValueError("multiplicative classes need a series with constant term 1")
    order = max(len(series) - 1, chern.ring.dim_n)
    return nilpotent_exp(additive_class(series_log(list(series), order), chern))


def todd_class(chern: ChernData) -> CohClass:
    return multiplicative_class(todd_series(2 * chern.ring.dim_n + 1), chern)


def sqrt_todd_class(chern: ChernData) -> CohClass:
    return multiplicative_class(sqrt_todd_series(2 * chern.ring.dim_n + 1), chern)


def log_gamma_class(chern: ChernData) -> CohClass:
    return additive_class(log_gamma_series(2 * chern.ring.dim_n + 1), chern)


def twisted_mukai_vector(ch: CohClass, chern: ChernData, include_lambda: bool = True) -> CohClass:
    """ch(E) * sqrt(Td) * exp(i Lambda); ``include_lambda=False`` drops the Gamma twist."""
    if ch.ring is not chern.ring:
        raise RingMismatchError("Chern character and Chern data live in different rings")
    v = multiply(ch, sqrt_todd_class(chern))
    if include_lambda:
        v = multiply(v, nilpotent_exp(1j * log_gamma_class(chern)))
    return v


def gamma_identity_check(z: float, order: int, reading: str = "corrected") -> float:
    """|sqrt(Td(z)) exp(i Lambda(z)) - e^{z/4} Gamma(1 + z/(2 pi i))| with truncated series.

    ``reading="printed"`` replaces sqrt(z/(1 - e^{-z})) by sqrt(z/(1 - z)),
    evaluated in closed form; the identity does not hold in that reading.
    """
    z = float(z)
    if abs(z) >= 2 * math.pi:
        raise DomainError("the series diverge for |z| >= 2*pi")
    lam = eval_series(log_gamma_series(order), z).real
    if reading == "corrected":
        root = eval_series([float(c) for c in sqrt_todd_series(order)], z)
    elif reading == "printed":
        if z == 1:
            raise DomainError("the printed reading has a pole at z = 1")
        root = 1.0 if z == 0 else cmath.sqrt(z / (1 - z))
    else:
        raise ValueError(f"unknown reading {reading!r}")
    lhs = root * cmath.exp(1j * lam)
    rhs = cmath.exp(z / 4 + complex(special.loggamma(1 + z / (2j * math.pi))))
    return abs(lhs - rhs)
