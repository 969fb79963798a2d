"""Finite-difference complex Hessians, positivity verdicts and curvature of 1-D slices.

The metric is reported as the plain complex Hessian ``g_{a bbar} = d^2 K / dz_a dzbar_b``;
the Kahler form is ``(i/2) g``, a constant factor the checks never depend on.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np

from .errors import DomainError

DEFAULT_STEP = 1e-3
SCALE_FRACTION = 1e-2
CURVATURE_STEP = 0.02
HERMITIAN_TOL = 1e-8

# fourth-order central stencil for f'' on offsets -2..2
_D2_5 = np.array([-1 / 12, 4 / 3, -5 / 2, 4 / 3, -1 / 12])
_OFFSETS_5 = np.arange(-2, 3)

# sixth-order central stencil for f'' on offsets -3..3
_D2_7 = np.array([1 / 90, -3 / 20, 3 / 2, -49 / 18, 3 / 2, -3 / 20, 1 / 90])
_OFFSETS_7 = np.arange(-3, 4)


def _default_scale(z: np.ndarray) -> float:
    return float(max(1.0, np.max(np.abs(z), initial=0.0)))


def upper_half_plane_scale(z: np.ndarray) -> float:
    """Natural length scale Im(z) for charts of the upper half-plane."""
    return float(np.asarray(z).imag.min())


@dataclass(frozen=True)
class ChartedPotential:
    """Real potential on an open set of C^arity.

    ``eval`` takes a complex vector of length ``arity``; ``guard`` returns
    False outside the chart.  ``scale`` gives the local length scale used by
    :func:`curvature_1d` (default ``max(1, |z|)``).
    """

    arity: int
    eval: Callable[[np.ndarray], float]
    guard: Optional[Callable[[np.ndarray], bool]] = None
    scale: Optional[Callable[[np.ndarray], float]] = None

    def __call__(self, z) -> float:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        if z.shape != (self.arity,):
            raise ValueError(f"expected {self.arity} coordinates, got shape {z.shape}")
        if self.guard is not None and not self.guard(z):
            raise DomainError(f"point {z} is outside the chart; try a smaller step")
        val = float(self.eval(z))
        if not np.isfinite(val):
            raise DomainError(f"potential is not finite at {z}")
        return val

    def length_scale(self, z) -> float:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return (self.scale or _default_scale)(z)

    def composed(self, fn: Callable[[np.ndarray], np.ndarray]) -> "ChartedPotential":
        """Pullback along a map of charts (same arity)."""
        return ChartedPotential(self.arity, lambda z: self.eval(fn(z)),
                                lambda z: self.guard is None or self.guard(fn(z)), self.scale)


@dataclass(frozen=True, eq=False)
class HermitianForm:
    matrix: np.ndarray

    def __post_init__(self):
        g = np.atleast_2d(np.asarray(self.matrix, dtype=complex))
        dev = np.max(np.abs(g - g.conj().T), initial=0.0)
        if dev > HERMITIAN_TOL * max(1.0, np.abs(g).max()):
            raise ValueError(f"form is not Hermitian (deviation {dev:.3g})")
        g = (g + g.conj().T) / 2
        g.setflags(write=False)
        object.__setattr__(self, "matrix", g)

    @property
    def m(self) -> int:
        return self.matrix.shape[0]

    def eigenvalues(self) -> np.ndarray:
        return np.linalg.eigvalsh(self.matrix)

    def pullback(self, jacobian) -> "HermitianForm":
        """J^T g conj(J) for a holomorphic map with complex Jacobian J."""
        J = np.asarray(jacobian, dtype=complex)
        return HermitianForm(J.T @ self.matrix @ J.conj())

    def relative_distance(self, other: "HermitianForm") -> float:
        return float(np.linalg.norm(self.matrix - other.matrix) / np.linalg.norm(other.matrix))


def _real_steps(f: ChartedPotential, p: np.ndarray, h: Optional[float]) -> np.ndarray:
    if h is None:
        s = DEFAULT_STEP * np.maximum(1.0, np.abs(p))
        if f.scale is not None:
            s = np.minimum(s, SCALE_FRACTION * f.length_scale(p))
    else:
        s = h * np.maximum(1.0, np.abs(p))
    return np.concatenate([s, s])


def _d2(F: Callable[[np.ndarray], float], u0: np.ndarray, e: np.ndarray) -> float:
    """Second directional derivative along ``e``, fourth order, unscaled by |e|^2."""
    return sum(c * F(u0 + k * e) for c, k in zip(_D2_5, _OFFSETS_5) if c)


def real_hessian(f: ChartedPotential, p, h: Optional[float] = None) -> np.ndarray:
    """Hessian in (x_1..x_m, y_1..y_m) with fourth-order central differences.

    Mixed partials come from the second derivatives along e_i + e_j and e_i - e_j.
    """
    p = np.atleast_1d(np.asarray(p, dtype=complex))
    m = f.arity
    u0 = np.concatenate([p.real, p.imag])
    steps = _real_steps(f, p, h)

    def F(u):
        return f(u[:m] + 1j * u[m:])

    H = np.empty((2 * m, 2 * m))
    E = np.diag(steps)
    for i in range(2 * m):
        H[i, i] = _d2(F, u0, E[i]) / steps[i] ** 2
        for j in range(i):
            val = (_d2(F, u0, E[i] + E[j]) - _d2(F, u0, E[i] - E[j])) / (4 * steps[i] * steps[j])
            H[i, j] = H[j, i] = val
    return H


def complex_hessian(f: ChartedPotential, p, h: Optional[float] = None) -> HermitianForm:
    """g_{a bbar} = (1/4)[(f_{x_a x_b} + f_{y_a y_b}) + i(f_{x_a y_b} - f_{y_a x_b})].

    ``h`` is the base step, multiplied per coordinate by ``max(1, |z_a|)``.  With the
    default step the result is also capped at ``SCALE_FRACTION`` times the chart's
    length scale, so stencils stay well inside charts such as the upper half-plane.
    """
    m = f.arity
    H = real_hessian(f, p, h)
    Hxx, Hyy, Hxy = H[:m, :m], H[m:, m:], H[:m, m:]
    return HermitianForm(((Hxx + Hyy) + 1j * (Hxy - Hxy.T)) / 4)


@dataclass(frozen=True)
class PositivityReport:
    verdict: str
    eigenvalues: np.ndarray

    @property
    def positive(self) -> bool:
        return self.verdict == "positive-definite"


def positivity_check(g: HermitianForm, tol: float = 1e-10) -> PositivityReport:
    """Classify by the eigenvalues of the Hermitian part, with margin ``tol``."""
    lam = g.eigenvalues()
    pos, neg = np.any(lam > tol), np.any(lam < -tol)
    if pos and neg:
        verdict = "indefinite"
    elif np.all(lam > tol):
        verdict = "positive-definite"
    elif np.all(lam < -tol):
        verdict = "negative-definite"
    else:
        verdict = "degenerate"
    return PositivityReport(verdict, lam)


def _laplacian_quarter(F: Callable[[complex], float], z: complex, s: float) -> float:
    # d^2/dz dzbar = (1/4)(d_xx + d_yy), sixth-order stencils
    xs = sum(c * F(z + k * s) for c, k in zip(_D2_7, _OFFSETS_7))
    ys = sum(c * F(z + 1j * k * s) for c, k in zip(_D2_7, _OFFSETS_7))
    return (xs + ys) / (4 * s * s)


def metric_1d(f: ChartedPotential, p: complex, h: float = CURVATURE_STEP) -> float:
    """g = d^2 f / dz dzbar on a one-dimensional chart, step ``h * scale(p)``."""
    if f.arity != 1:
        raise ValueError("metric_1d needs a one-dimensional chart")
    p = complex(p)
    s = h * f.length_scale(p)
    return _laplacian_quarter(lambda z: f(z), p, s)


def curvature_1d(f: ChartedPotential, p: complex, h: float = CURVATURE_STEP) -> float:
    """R = -(2/g) d^2 log g / dz dzbar with nested sixth-order differences.

    Both the inner and the outer stencil use the step ``h * scale(p)``.
    """
    if f.arity != 1:
        raise ValueError("curvature_1d needs a one-dimensional chart")
    p = complex(p)
    s = h * f.length_scale(p)

    def log_g(z):
        g = _laplacian_quarter(lambda w: f(w), z, s)
        if not g > 0:
            raise DomainError(f"metric is not positive near {z} (g = {g:.3g})")
        return np.log(g)

    g0 = _laplacian_quarter(lambda w: f(w), p, s)
    if not g0 > 0:
        raise DomainError(f"metric is not positive at {p} (g = {g0:.3g})")
    return -2.0 / g0 * _laplacian_quarter(log_g, p, s)
