"""Siegel upper half-space: points, the Sp(2g, Z) action and the Bergman kernel."""
from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

SYM_TOL = 1e-12
DRIFT_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SiegelPoint:
    """Symmetric g x g complex matrix with positive-definite imaginary part."""

    M: np.ndarray

    def __post_init__(self):
        M = np.array(self.M, dtype=complex)
        if M.ndim != 2 or M.shape[0] != M.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {M.shape}")
        if np.max(np.abs(M - M.T), initial=0.0) > SYM_TOL * max(1.0, np.abs(M).max()):
            raise DomainError("matrix is not symmetric")
        M = (M + M.T) / 2
        if np.linalg.eigvalsh(M.imag).min() <= 0:
            raise DomainError("imaginary part is not positive definite")
        M.setflags(write=False)
        object.__setattr__(self, "M", M)

    @property
    def g(self) -> int:
        return self.M.shape[0]

    @property
    def Y(self) -> np.ndarray:
        return self.M.imag

    def tolist(self) -> list:
        """Nested [re, im] pairs, the JSON form used by the CLI."""
        return [[[z.real, z.imag] for z in row] for row in self.M]

    @classmethod
    def from_list(cls, rows) -> "SiegelPoint":
        return cls(np.array([[complex(*z) if isinstance(z, (list, tuple)) else complex(z)
                              for z in row] for row in rows]))


def in_siegel_space(M) -> bool:
    M = np.asarray(M, dtype=complex)
    return bool(np.allclose(M, M.T) and np.linalg.eigvalsh((M.imag + M.imag.T) / 2).min() > 0)


def omega_to_M(rho: complex, tau: complex, sigma: complex) -> SiegelPoint:
    """[[rho, sigma], [sigma, tau]]; fails unless the imaginary part is a Kahler class."""
    return SiegelPoint(np.array([[rho, sigma], [sigma, tau]], dtype=complex))


def M_to_omega(P: SiegelPoint) -> tuple:
    """Inverse of :func:`omega_to_M`: (rho, tau, sigma)."""
    M = P.M
    return complex(M[0, 0]), complex(M[1, 1]), complex(M[0, 1])


def _tr_log(A: np.ndarray) -> complex:
    # principal matrix log: its eigenvalues are the principal logs of those of A
    lam = np.linalg.eigvals(A)
    if np.any((np.abs(lam.imag) <= 1e-14 * np.abs(lam)) & (lam.real <= 0)):
        raise ArithmeticError("matrix has an eigenvalue on the closed negative real axis")
    return complex(np.sum(np.log(lam)))


def bergman_kernel(M: SiegelPoint, N: SiegelPoint) -> complex:
    """-tr log(-i (M - conj N))."""
    return -_tr_log(-1j * (M.M - N.M.conj()))


def bergman_potential(M: SiegelPoint) -> float:
    """-tr log(2 Im M) = -log det(2 Im M)."""
    Y = M.Y
    return -float(np.sum(np.log(np.linalg.eigvalsh(2 * (Y + Y.T) / 2))))


def standard_J(g: int) -> np.ndarray:
    I, Z = np.eye(g, dtype=np.int64), np.zeros((g, g), dtype=np.int64)
    return np.block([[Z, I], [-I, Z]])


@dataclass(frozen=True, eq=False)
class SymplecticElement:
    """Integer matrix [[A, B], [C, D]] with gamma^T J gamma = J."""

    A: np.ndarray
    B: np.ndarray
    C: np.ndarray
    D: np.ndarray

    def __post_init__(self):
        blocks = [np.array(b, dtype=np.int64) for b in (self.A, self.B, self.C, self.D)]
        g = blocks[0].shape[0]
        if any(b.shape != (g, g) for b in blocks):
            raise ValueError("blocks must all be g x g")
        for name, b in zip("ABCD", blocks):
            b.setflags(write=False)
            object.__setattr__(self, name, b)
        gam = self.matrix
        J = standard_J(g)
        if not np.array_equal(gam.T @ J @ gam, J):
            raise ValueError("matrix is not symplectic")

    @property
    def g(self) -> int:
        return self.A.shape[0]

    @property
    def matrix(self) -> np.ndarray:
        return np.block([[self.A, self.B], [self.C, self.D]])

    @classmethod
    def from_matrix(cls, gam) -> "SymplecticElement":
        gam = np.asarray(gam, dtype=np.int64)
        g = gam.shape[0] // 2
        return cls(gam[:g, :g], gam[:g, g:], gam[g:, :g], gam[g:, g:])

    def __matmul__(self, other: "SymplecticElement") -> "SymplecticElement":
        return SymplecticElement.from_matrix(self.matrix @ other.matrix)

    @classmethod
    def identity(cls, g: int) -> "SymplecticElement":
        return cls.from_matrix(np.eye(2 * g, dtype=np.int64))

    @classmethod
    def translation(cls, S) -> "SymplecticElement":
        """M -> M + S for integer symmetric S."""
        S = np.asarray(S, dtype=np.int64)
        g = S.shape[0]
        I, Z = np.eye(g, dtype=np.int64), np.zeros((g, g), dtype=np.int64)
        return cls(I, S, Z, I)

    @classmethod
    def inversion(cls, g: int) -> "SymplecticElement":
        """M -> -M^{-1}."""
        I, Z = np.eye(g, dtype=np.int64), np.zeros((g, g), dtype=np.int64)
        return cls(Z, -I, I, Z)

    @classmethod
    def rotation(cls, U) -> "SymplecticElement":
        """M -> U M U^T for U in GL(g, Z)."""
        U = np.asarray(U, dtype=np.int64)
        Uinv = np.rint(np.linalg.inv(U)).astype(np.int64)
        if not np.array_equal(U @ Uinv, np.eye(len(U), dtype=np.int64)):
            raise ValueError("U is not unimodular")
        Z = np.zeros_like(U)
        return cls(U, Z, Z, Uinv.T)


def random_symplectic(rng: np.random.Generator, g: int = 2, max_len: int = 6,
                      max_entry: int = 1) -> SymplecticElement:
    """Word of length 1..max_len in translations by small symmetric S and the inversion."""
    gam = SymplecticElement.identity(g)
    for _ in range(rng.integers(1, max_len + 1)):
        if rng.random() < 0.5:
            gam = gam @ SymplecticElement.inversion(g)
        else:
            S = rng.integers(-max_entry, max_entry + 1, size=(g, g))
            gam = gam @ SymplecticElement.translation(np.triu(S) + np.triu(S, 1).T)
    return gam


def sp_action(gamma: SymplecticElement, P: SiegelPoint) -> SiegelPoint:
    """(A M + B)(C M + D)^{-1}, re-symmetrized."""
    M = P.M
    num = gamma.A @ M + gamma.B
    den = gamma.C @ M + gamma.D
    cond = np.linalg.cond(den)
    if cond > 1e10:
        warnings.warn(f"C M + D is ill-conditioned (cond {cond:.2e})", RuntimeWarning)
    out = np.linalg.solve(den.T, num.T).T
    drift = np.max(np.abs(out - out.T))
    if drift > DRIFT_TOL * max(1.0, np.abs(out).max()):
        warnings.warn(f"symmetry drift {drift:.2e} after the action", RuntimeWarning)
    return SiegelPoint((out + out.T) / 2)


def automorphy_factor(gamma: SymplecticElement, P: SiegelPoint) -> complex:
    return complex(np.linalg.det(gamma.C @ P.M + gamma.D))


def bergman_transform_law(gamma: SymplecticElement, P: SiegelPoint) -> float:
    """|K(gamma M) - K(M) - 2 log|det(C M + D)||, zero up to rounding."""
    lhs = bergman_potential(sp_action(gamma, P)) - bergman_potential(P)
    return abs(lhs - 2 * math.log(abs(automorphy_factor(gamma, P))))


def random_siegel_point(rng: np.random.Generator, g: int = 2, re_scale: float = 1.0,
                        im_low: float = 0.3, im_high: float = 3.0) -> SiegelPoint:
    """Random point: symmetric real part, imaginary part Q diag(y) Q^T with y in [im_low, im_high]."""
    X = rng.normal(scale=re_scale, size=(g, g))
    Q, _ = np.linalg.qr(rng.normal(size=(g, g)))
    Y = Q @ np.diag(rng.uniform(im_low, im_high, size=g)) @ Q.T
    return SiegelPoint((X + X.T) / 2 + 1j * (Y + Y.T) / 2)
