"""Central charges, Euler matrices, the pairing b and the Weil-Petersson potential.

A central charge is stored by its values on a chosen basis of the numerical
Grothendieck group, each basis element represented by its twisted Mukai
vector.  The pairing

    b(Z1, Z2) = sum_ij chi^{ij} Z1(E_i) Z2(E_j),   (chi^{ij}) = chi(E_i, E_j)^{-1}

does not depend on the basis, and the potential is
``-log(i^{-n} b(Z, conj Z))`` on the locus where ``b(Z, Z) = 0`` and the
argument of the log is positive.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Mapping, Optional

import numpy as np

from .charclass import ChernData, twisted_mukai_vector
from .cohring import CohClass, GradedRingSpec, mukai_dual, nilpotent_exp
from .errors import DomainError, RingMismatchError

TOL_ZERO = 1e-9
TOL_POS = 1e-12


def i_power(k: int) -> complex:
    """(sqrt(-1))**k without rounding."""
    return (1, 1j, -1, -1j)[k % 4]


@lru_cache(maxsize=None)
def _integration_gram(ring: GradedRingSpec) -> np.ndarray:
    # G[a, b] = integral of e_a * e_b
    return ring.structure @ ring.integral


def _twist(ring: GradedRingSpec, chern: Optional[ChernData]) -> Optional[CohClass]:
    if chern is None:
        return None
    if chern.ring is not ring:
        raise RingMismatchError("Chern data lives in another ring")
    c1 = chern.c1
    if not np.any(c1.coeffs):
        return None
    return nilpotent_exp(c1 / 2)


def _left_covector(v: CohClass, chern: Optional[ChernData]) -> np.ndarray:
    """Row vector r with r @ w.coeffs == <v, w>."""
    x = mukai_dual(v)
    tw = _twist(v.ring, chern)
    if tw is not None:
        x = x * tw
    return x.coeffs @ _integration_gram(v.ring)


def mukai_pairing(v: CohClass, w: CohClass, chern: Optional[ChernData] = None) -> complex:
    """Integral of e^{c_1/2} v^dual w."""
    if v.ring is not w.ring:
        raise RingMismatchError(f"classes live in {v.ring.name!r} and {w.ring.name!r}")
    return complex(_left_covector(v, chern) @ w.coeffs)


def mukai_gram(ring: GradedRingSpec, chern: Optional[ChernData] = None) -> np.ndarray:
    """Matrix of the Mukai pairing on the ring basis."""
    return np.array([_left_covector(ring.basis_element(x), chern) for x in ring.labels])


@dataclass(frozen=True, eq=False)
class MukaiBasis:
    """Twisted Mukai vectors v_X(E_i) of a basis {E_i} of the numerical Grothendieck group."""

    ring: GradedRingSpec
    vectors: tuple
    labels: tuple

    def __post_init__(self):
        if len(self.vectors) != len(self.labels):
            raise ValueError("one label per vector")
        for v in self.vectors:
            if v.ring is not self.ring:
                raise RingMismatchError("basis vector lives in another ring")
        if len(self.vectors) and np.linalg.matrix_rank(self.matrix) < len(self.vectors):
            raise ValueError("basis vectors are linearly dependent")

    @property
    def matrix(self) -> np.ndarray:
        """Ring-basis coefficients, one column per vector."""
        return np.array([v.coeffs for v in self.vectors]).T

    def __len__(self):
        return len(self.vectors)

    @classmethod
    def from_chern_characters(cls, chs: Mapping, chern: ChernData,
                              include_lambda: bool = True) -> "MukaiBasis":
        """Twist each Chern character ``label -> ch(E)`` into its Mukai vector."""
        labels = tuple(chs)
        vectors = tuple(twisted_mukai_vector(chs[x], chern, include_lambda) for x in labels)
        return cls(chern.ring, vectors, labels)

    def transformed(self, P) -> "MukaiBasis":
        """Basis with vectors sum_j P[i, j] v_j (P invertible)."""
        P = np.asarray(P)
        mat = self.matrix @ P.T
        vectors = tuple(self.ring.from_vector(mat[:, i]) for i in range(mat.shape[1]))
        return MukaiBasis(self.ring, vectors, tuple(f"E'{i}" for i in range(len(vectors))))


@dataclass(frozen=True, eq=False)
class ChiMatrix:
    """Euler matrix chi(E_i, E_j) and its inverse."""

    chi: np.ndarray
    chi_inv: np.ndarray

    def __post_init__(self):
        defect = np.max(np.abs(self.chi @ self.chi_inv - np.eye(len(self.chi))), initial=0.0)
        cond = np.linalg.cond(self.chi) if len(self.chi) else 1.0
        if not defect <= 1e-12 * max(1.0, cond):
            raise ValueError(f"chi * chi_inv deviates from the identity by {defect:.3g}")

    @classmethod
    def from_matrix(cls, chi) -> "ChiMatrix":
        chi = np.asarray(chi, dtype=complex)
        if np.linalg.cond(chi) > 1e13:
            raise ValueError("Euler matrix is singular: the vectors do not form a basis")
        return cls(chi, np.linalg.inv(chi))

    @property
    def size(self) -> int:
        return len(self.chi)


def euler_matrix(basis: MukaiBasis, chern: Optional[ChernData] = None) -> ChiMatrix:
    G = mukai_gram(basis.ring, chern)
    V = basis.matrix
    return ChiMatrix.from_matrix(V.T @ G @ V)


@dataclass(frozen=True, eq=False)
class CentralCharge:
    values: np.ndarray
    labels: tuple = ()
    mho: Optional[CohClass] = field(default=None, repr=False)

    def __post_init__(self):
        v = np.array(self.values, dtype=complex)
        if not np.all(np.isfinite(v)):
            raise ValueError("central charge values must be finite")
        v.setflags(write=False)
        object.__setattr__(self, "values", v)

    def conj(self) -> "CentralCharge":
        return CentralCharge(self.values.conj(), self.labels)

    def __len__(self):
        return len(self.values)


def central_charge(mho: CohClass, v: CohClass, chern: Optional[ChernData] = None) -> complex:
    """Z(E) = -<mho, v>."""
    return -mukai_pairing(mho, v, chern)


def sample_charge(mho: CohClass, basis: MukaiBasis,
                  chern: Optional[ChernData] = None) -> CentralCharge:
    if mho.ring is not basis.ring:
        raise RingMismatchError("mho and the basis live in different rings")
    values = -(_left_covector(mho, chern) @ basis.matrix)
    return CentralCharge(values, basis.labels, mho)


def bilinear_b(Z1: CentralCharge, Z2: CentralCharge, chi: ChiMatrix) -> complex:
    if not len(Z1) == len(Z2) == chi.size:
        raise ValueError(f"dimension mismatch: {len(Z1)}, {len(Z2)} vs chi of size {chi.size}")
    return complex(Z1.values @ chi.chi_inv @ Z2.values)


def positivity_value(Z: CentralCharge, chi: ChiMatrix, n: int) -> complex:
    """i^{-n} b(Z, conj Z)."""
    return i_power(-n) * bilinear_b(Z, Z.conj(), chi)


def charge_scale(Z: CentralCharge, chi: ChiMatrix) -> float:
    """|Z|^T |chi^{-1}| |Z|, the size rounding errors in b(Z, .) are measured against."""
    a = np.abs(Z.values)
    return float(a @ np.abs(chi.chi_inv) @ a)


def stab_plus(Z: CentralCharge, chi: ChiMatrix, n: int,
              tol_zero: float = TOL_ZERO, tol_pos: float = TOL_POS) -> bool:
    """b(Z, Z) = 0 and i^{-n} b(Z, conj Z) > 0.

    Both zero tests are relative to ``max(1, charge_scale(Z))``, so large
    charges are not rejected for rounding noise alone.
    """
    scale = max(1.0, charge_scale(Z, chi))
    if abs(bilinear_b(Z, Z, chi)) > tol_zero * scale:
        return False
    val = positivity_value(Z, chi, n)
    return val.real > tol_pos and abs(val.imag) <= tol_zero * scale


def wp_potential(mho: CohClass, basis: MukaiBasis, chern: Optional[ChernData] = None,
                 n: Optional[int] = None, chi: Optional[ChiMatrix] = None,
                 tol_zero: float = TOL_ZERO, tol_pos: float = TOL_POS) -> float:
    """-log(i^{-n} b(Z, conj Z)) for the charge Z defined by ``mho``.

    The conjugate charge is the entrywise conjugate of the sampled values,
    which differs from the charge of conj(mho) when the Gamma twist is on.
    """
    n = mho.ring.dim_n if n is None else n
    chi = euler_matrix(basis, chern) if chi is None else chi
    Z = sample_charge(mho, basis, chern)
    if not stab_plus(Z, chi, n, tol_zero, tol_pos):
        raise DomainError("charge is outside Stab+: the potential is undefined")
    return -math.log(positivity_value(Z, chi, n).real)


@dataclass(frozen=True, eq=False)
class StabilityModel:
    """Ring, Chern data and basis of one worked example, with its Euler matrix."""

    ring: GradedRingSpec
    chern: ChernData
    basis: MukaiBasis
    chi: ChiMatrix
    tol_zero: float = TOL_ZERO
    tol_pos: float = TOL_POS

    @classmethod
    def build(cls, chern: ChernData, chs: Mapping, include_lambda: bool = True,
              tol_zero: float = TOL_ZERO, tol_pos: float = TOL_POS) -> "StabilityModel":
        basis = MukaiBasis.from_chern_characters(chs, chern, include_lambda)
        return cls(chern.ring, chern, basis, euler_matrix(basis, chern), tol_zero, tol_pos)

    def with_basis(self, basis: MukaiBasis) -> "StabilityModel":
        return StabilityModel(self.ring, self.chern, basis, euler_matrix(basis, self.chern),
                              self.tol_zero, self.tol_pos)

    @property
    def n(self) -> int:
        return self.ring.dim_n

    def charge(self, mho: CohClass) -> CentralCharge:
        return sample_charge(mho, self.basis, self.chern)

    def b(self, mho1: CohClass, mho2: CohClass) -> complex:
        return bilinear_b(self.charge(mho1), self.charge(mho2), self.chi)

    def in_stab_plus(self, mho: CohClass) -> bool:
        return stab_plus(self.charge(mho), self.chi, self.n, self.tol_zero, self.tol_pos)

    def positivity(self, mho: CohClass) -> complex:
        return positivity_value(self.charge(mho), self.chi, self.n)

    def potential(self, mho: CohClass) -> float:
        return wp_potential(mho, self.basis, self.chern, self.n, self.chi,
                            self.tol_zero, self.tol_pos)

