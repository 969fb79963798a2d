import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from wpstab.errors import DomainError
from wpstab.siegel import (M_to_omega, SiegelPoint, SymplecticElement, automorphy_factor,
                           bergman_kernel, bergman_potential, bergman_transform_law,
                           in_siegel_space, omega_to_M, random_siegel_point, random_symplectic,
                           sp_action, standard_J)

seeds = st.integers(0, 2 ** 32 - 1)


def test_omega_to_M_examples():
    assert np.array_equal(omega_to_M(1j, 1j, 0).M, 1j * np.eye(2))
    assert np.array_equal(omega_to_M(2j, 1j, 1j).M, [[2j, 1j], [1j, 1j]])
    with pytest.raises(DomainError):
        omega_to_M(1j, 1j, 2j)


def test_omega_round_trip():
    w = (0.3 + 1.5j, -0.2 + 2j, 0.1 + 0.4j)
    assert M_to_omega(omega_to_M(*w)) == w


def test_siegel_point_validation():
    with pytest.raises(DomainError):
        SiegelPoint([[1j, 0.5], [0, 1j]])
    with pytest.raises(ValueError):
        SiegelPoint([1j, 1j])
    with pytest.raises(DomainError):
        SiegelPoint([[-1j]])
    assert in_siegel_space([[2j, 1j], [1j, 1j]])
    assert not in_siegel_space([[1j, 2j], [2j, 1j]])


def test_from_list_round_trip():
    P = omega_to_M(0.3 + 1.5j, -0.2 + 2j, 0.1 + 0.4j)
    assert np.array_equal(SiegelPoint.from_list(P.tolist()).M, P.M)


def test_kernel_examples():
    P = omega_to_M(1j, 1j, 0)
    assert abs(bergman_kernel(P, P) + 2 * math.log(2)) < 1e-15
    assert abs(bergman_potential(P) + 2 * math.log(2)) < 1e-15


@given(seeds)
def test_kernel_diagonal_and_symmetry(seed):
    rng = np.random.default_rng(seed)
    P, Q = random_siegel_point(rng), random_siegel_point(rng)
    KPP = bergman_kernel(P, P)
    assert abs(KPP.imag) < 1e-12
    assert abs(KPP.real - bergman_potential(P)) < 1e-12
    assert abs(bergman_kernel(P, Q) - bergman_kernel(Q, P).conjugate()) < 1e-10


def test_potential_examples():
    y1, y2 = 0.7, 3.1
    assert abs(bergman_potential(SiegelPoint(np.diag([1j * y1, 1j * y2]))) + math.log(4 * y1 * y2)) < 1e-15
    tau = 0.4 + 1.3j
    assert abs(bergman_potential(SiegelPoint([[tau]])) + math.log(2 * tau.imag)) < 1e-15


@given(seeds)
def test_potential_is_minus_log_det(seed):
    P = random_siegel_point(np.random.default_rng(seed), g=3)
    assert abs(bergman_potential(P) + math.log(np.linalg.det(2 * P.Y))) < 1e-12


def test_symplectic_validation():
    with pytest.raises(ValueError):
        SymplecticElement.from_matrix(np.eye(4, dtype=int) * 2)
    with pytest.raises(ValueError):
        SymplecticElement(np.eye(2), np.eye(3), np.eye(2), np.eye(2))
    with pytest.raises(ValueError):
        SymplecticElement.rotation([[2, 0], [0, 1]])
    J = standard_J(2)
    assert np.array_equal(SymplecticElement.from_matrix(J).matrix, J)


def test_action_identity_and_mobius():
    P = omega_to_M(0.3 + 1.5j, -0.2 + 2j, 0.1 + 0.4j)
    assert np.allclose(sp_action(SymplecticElement.identity(2), P).M, P.M, atol=0)
    tau = 0.35 + 0.8j
    Q = sp_action(SymplecticElement.inversion(1), SiegelPoint([[tau]]))
    assert abs(Q.M[0, 0] + 1 / tau) < 1e-15


def test_action_inversion_fixes_i():
    P = SiegelPoint(1j * np.eye(2))
    assert np.allclose(sp_action(SymplecticElement.inversion(2), P).M, P.M, atol=1e-15)


def test_rotation_and_translation():
    P = omega_to_M(0.3 + 1.5j, -0.2 + 2j, 0.1 + 0.4j)
    U = np.array([[1, 1], [0, 1]])
    assert np.allclose(sp_action(SymplecticElement.rotation(U), P).M, U @ P.M @ U.T, atol=1e-14)
    S = np.array([[1, -1], [-1, 2]])
    assert np.allclose(sp_action(SymplecticElement.translation(S), P).M, P.M + S, atol=1e-15)


@given(seeds)
def test_action_composition(seed):
    rng = np.random.default_rng(seed)
    g1, g2 = random_symplectic(rng), random_symplectic(rng)
    P = random_siegel_point(rng)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        lhs = sp_action(g1 @ g2, P).M
        rhs = sp_action(g1, sp_action(g2, P)).M
    assert np.max(np.abs(lhs - rhs)) < 1e-10 * max(1.0, np.abs(lhs).max())


@given(seeds)
def test_transform_law(seed):
    rng = np.random.default_rng(seed)
    gamma, P = random_symplectic(rng), random_siegel_point(rng)
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", RuntimeWarning)
        assert bergman_transform_law(gamma, P) < 1e-9


def test_automorphy_factor_of_inversion():
    P = omega_to_M(0.3 + 1.5j, -0.2 + 2j, 0.1 + 0.4j)
    assert abs(automorphy_factor(SymplecticElement.inversion(2), P) - np.linalg.det(P.M)) < 1e-14


def test_ill_conditioned_action_warns():
    P = SiegelPoint(np.diag([1e-12j, 1j]))
    with pytest.warns(RuntimeWarning):
        sp_action(SymplecticElement.inversion(2), P)
