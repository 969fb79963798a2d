"""Acceptance criteria 1-10, one pass/fail line each (shown in the pytest terminal summary).

Run alone with ``pytest tests/test_acceptance.py -v``.  Oracles here are computed
independently of the library where that is cheap: explicit determinants and
volumes, Sylvester's criterion, scipy's zeta.
"""
import math

import numpy as np
import pytest
from scipy.special import zeta

from wpstab.charclass import gamma_identity_check, log_gamma_class
from wpstab.checks import random_class, random_unimodular
from wpstab.diffgeo import ChartedPotential, complex_hessian, positivity_check
from wpstab.quantum import GWData, quantum_exp
from wpstab.scenario import load_scenario
from wpstab.siegel import (bergman_potential, omega_to_M, random_siegel_point, random_symplectic,
                           sp_action)
from wpstab.stability import bilinear_b, mukai_pairing, positivity_value

SEED = 2024
RINGS = ("elliptic", "product_abelian", "split_abelian", "abelian_nfold", "quintic")


def _line(k, ok, text):
    return f"criterion {k:>2} [{'PASS' if ok else 'FAIL'}] {text}"


def _logdet2Y(M):
    # oracle: det(2 Im M) straight from numpy
    return math.log(np.linalg.det(2 * np.asarray(M).imag))


def test_criterion_01_elliptic(report):
    cfg = load_scenario("elliptic")
    f = cfg.chart_potential()
    taus = [complex(x, y) for x in np.linspace(-0.95, 0.95, 20) for y in np.linspace(0.1, 5.0, 20)]
    dK = max(abs(cfg.potential([t]) + math.log(2 * t.imag)) for t in taus)
    dg = max(abs(complex_hessian(f, [t]).matrix[0, 0] * 4 * t.imag ** 2 - 1) for t in taus)
    ok = dK <= 1e-12 and dg <= 1e-6
    report(_line(1, ok, f"elliptic K_WP = -log(2 Im tau): {dK:.2e} (1e-12); "
                        f"Hessian vs 1/(4 Im^2 tau): {dg:.2e} relative (1e-6)"))
    assert ok


def test_criterion_02_b_equals_mukai(report):
    worst = {}
    for k, name in enumerate(RINGS):
        model = load_scenario(name).model
        rng = np.random.default_rng([SEED, 2, k])
        sign = (-1) ** model.n
        worst[name] = max(
            abs(bilinear_b(model.charge(m1), model.charge(m2), model.chi)
                - sign * mukai_pairing(m1, m2, model.chern))
            for m1, m2 in ((random_class(rng, model.ring), random_class(rng, model.ring))
                           for _ in range(100)))
    top = max(worst.values())
    ok = top <= 1e-12
    report(_line(2, ok, f"b(Z1,Z2) = (-1)^n <mho1,mho2>, 100 pairs x {len(RINGS)} rings: "
                        f"{top:.2e} (1e-12)"))
    assert ok, worst


def test_criterion_03_basis_independence(report):
    worst = 0.0
    for k, name in enumerate(RINGS):
        model = load_scenario(name).model
        rng = np.random.default_rng([SEED, 3, k])
        for _ in range(50):
            P = random_unimodular(rng, len(model.basis))
            assert abs(round(np.linalg.det(P))) == 1
            other = model.with_basis(model.basis.transformed(P))
            m1, m2 = random_class(rng, model.ring), random_class(rng, model.ring)
            worst = max(worst, abs(model.b(m1, m2) - other.b(m1, m2)))
    ok = worst <= 1e-10
    report(_line(3, ok, f"basis independence, 50 unimodular changes per ring: {worst:.2e} (1e-10)"))
    assert ok


def _volume_oracle(name, z):
    """(2^n/n!) integral of (Im omega)^n, written out per chart."""
    y = np.asarray(z).imag
    if name == "elliptic":
        return 2 * y[0]
    if name == "product_abelian":
        return 2 * (y[0] * y[1] - y[2] ** 2)
    if name == "split_abelian":
        return 2 * y[0] * y[1]
    return 8 * y[0] ** 3      # abelian threefold, H^3 = 6


def test_criterion_04_wpb(report):
    worst_rel, worst_bzz, failures = 0.0, 0.0, 0
    for k, name in enumerate(("elliptic", "product_abelian", "split_abelian", "abelian_nfold")):
        cfg = load_scenario(name)
        model = cfg.model
        rng = np.random.default_rng([SEED, 4, k])
        for _ in range(100):
            if name == "product_abelian":
                M = random_siegel_point(rng, 2).M
                z = np.array([M[0, 0], M[1, 1], M[0, 1]])
            else:
                m = len(cfg.coords)
                z = rng.uniform(-1, 1, m) + 1j * rng.uniform(0.2, 3.0, m)
            Z = model.charge(cfg.section_at(z))
            bzz = abs(bilinear_b(Z, Z, model.chi))
            val = positivity_value(Z, model.chi, model.n)
            vol = _volume_oracle(name, z)
            failures += not (bzz <= 1e-10 * max(1.0, vol) and val.real > 0)
            worst_bzz = max(worst_bzz, bzz)
            worst_rel = max(worst_rel, abs(val - vol) / vol)
    ok = failures == 0 and worst_rel <= 1e-10
    report(_line(4, ok, f"Stab+ on 400 Kahler-cone points: {failures} failures "
                        f"(max |b(Z,Z)| {worst_bzz:.1e}); closed form {worst_rel:.2e} relative (1e-10)"))
    assert ok


def test_criterion_05_bergman(report):
    cfg = load_scenario("product_abelian")
    rng = np.random.default_rng([SEED, 5])
    worst = 0.0
    for _ in range(200):
        M = random_siegel_point(rng, 2, im_low=0.2, im_high=5.0).M
        z = [M[0, 0], M[1, 1], M[0, 1]]
        worst = max(worst, abs(cfg.potential(z) + _logdet2Y(M) - math.log(2)))
    split = load_scenario("split_abelian")
    worst_split = 0.0
    for _ in range(200):
        z = rng.uniform(-1, 1, 2) + 1j * rng.uniform(0.2, 5.0, 2)
        worst_split = max(worst_split, abs(split.potential(z) + _logdet2Y(np.diag(z)) - math.log(2)))
    ok = worst <= 1e-9 and worst_split <= 1e-9
    report(_line(5, ok, f"K_WP - K_Ber = log 2: Siegel {worst:.2e}, split diagonal "
                        f"{worst_split:.2e} (1e-9)"))
    assert ok


def test_criterion_06_tube_domain(report):
    cfg = load_scenario("product_abelian")
    model = cfg.model
    rng = np.random.default_rng([SEED, 6])
    bad, definite = 0, 0
    for _ in range(500):
        z = rng.uniform(-2, 2, 3) + 1j * np.array([rng.uniform(0.05, 3), rng.uniform(0.05, 3),
                                                   rng.uniform(-3, 3)])
        a, b, c = z.imag
        sylvester = a > 0 and a * b - c * c > 0
        definite += sylvester
        bad += model.in_stab_plus(cfg.section_at(z)) != sylvester
    ok = bad == 0 and 0 < definite < 500
    report(_line(6, ok, f"stab_plus(exp omega) <=> Im M_omega > 0 on 500 triples "
                        f"({500 - definite} indefinite): {bad} disagreements"))
    assert ok


def test_criterion_07_descent(report):
    rng = np.random.default_rng([SEED, 7])

    def chart(gamma=None):
        def ev(z):
            P = omega_to_M(*z)
            return bergman_potential(sp_action(gamma, P) if gamma else P)
        return ChartedPotential(3, ev)

    worst_law, worst_metric = 0.0, 0.0
    for _ in range(50):
        gamma = random_symplectic(rng, 2)
        P = random_siegel_point(rng, 2)
        Q = sp_action(gamma, P)
        jac = np.linalg.det(gamma.C @ P.M + gamma.D)
        law = abs(-_logdet2Y(Q.M) + _logdet2Y(P.M) - 2 * math.log(abs(jac)))
        worst_law = max(worst_law, law)
        z = np.array([P.M[0, 0], P.M[1, 1], P.M[0, 1]])
        base = complex_hessian(chart(), z)
        worst_metric = max(worst_metric, complex_hessian(chart(gamma), z).relative_distance(base))
    ok = worst_law <= 1e-9 and worst_metric <= 1e-4
    report(_line(7, ok, f"Sp(4,Z) descent, 50 words: transform law {worst_law:.2e} (1e-9); "
                        f"pulled-back metric {worst_metric:.2e} relative (1e-4)"))
    assert ok


def test_criterion_08_gamma(report):
    rng = np.random.default_rng([SEED, 8])
    identity = max(gamma_identity_check(z, 200) for z in rng.uniform(-5, 5, 20))
    surface = max(float(np.max(np.abs(log_gamma_class(load_scenario(n).chern).coeffs)))
                  for n in ("product_abelian", "split_abelian"))
    quintic = load_scenario("quintic")
    coeff = log_gamma_class(quintic.chern)["H3"]
    want = 40 * zeta(3) / (2 * math.pi) ** 3
    dq = abs(coeff - want)
    ok = identity <= 1e-10 and surface == 0 and dq <= 1e-12
    report(_line(8, ok, f"Gamma identity {identity:.2e} (1e-10); surface Lambda max {surface:g} "
                        f"(exact 0); quintic Lambda H^3 vs 40 zeta(3)/(2 pi)^3: {dq:.2e} (1e-12)"))
    assert ok


def test_criterion_09_quintic(report):
    cfg = load_scenario("quintic")

    def leading(y):
        return -math.log(20 / 3 * y ** 3)

    C0 = cfg.potential([50j]) - leading(50.0)
    rows = [(y, abs(cfg.potential([1j * y]) - leading(y) - C0), 10 * math.exp(-2 * math.pi * y))
            for y in (5.0, 10.0, 20.0, 50.0)]
    ok_a = all(dev <= tol for _, dev, tol in rows)
    devs = ", ".join(f"{dev:.1e}" for _, dev, _ in rows)

    f = cfg.chart_potential()
    lam_min = min(positivity_check(complex_hessian(f, [x + 1j * y])).eigenvalues.min()
                  for x in np.linspace(-0.5, 0.5, 5) for y in (2.0, 2.5, 3.0, 4.0, 6.0, 10.0))
    ok_b = lam_min > 0

    model = cfg.build_model(include_lambda=False)
    zero = GWData((0,) * cfg.gw.d_max)

    def excess_over_q(y):
        q = math.exp(-2 * math.pi * y)
        d = (model.potential(quantum_exp(1j * y, cfg.gw, cfg.ring))
             - model.potential(quantum_exp(1j * y, zero, cfg.ring)))
        return d / q, q

    (r1, q1), (r2, q2) = excess_over_q(2.5), excess_over_q(3.0)
    a1 = (r1 * q2 - r2 * q1) / (q2 - q1)
    # q^1 coefficient of -log Phi(q) = -(1/5) N_1
    want = -float(cfg.gw.invariants[0]) / 5
    rel = abs(a1 - want) / abs(want)
    ok_c = rel <= 1e-6

    ok = ok_a and ok_b and ok_c
    report(_line(9, ok, f"quintic: asymptotics {'PASS' if ok_a else 'FAIL'} "
                        f"(|dev| at y = 5, 10, 20, 50: {devs}; 10|q| <= {rows[0][2]:.1e}); "
                        f"metric {'PASS' if ok_b else 'FAIL'} (min eigenvalue {lam_min:.3e}); "
                        f"first order {'PASS' if ok_c else 'FAIL'} ({a1:.6f} vs {want:g}, {rel:.1e})"))
    assert ok_b and ok_c
    assert ok_a, [f"y={y:g}: {dev:.3e} > {tol:.3e}" for y, dev, tol in rows if dev > tol]


def test_criterion_10_section_independence(report):
    rng = np.random.default_rng([SEED, 10])
    worst = 0.0
    for name in RINGS:
        cfg = load_scenario(name)
        model, m = cfg.model, len(cfg.coords)
        for _ in range(5):
            a = rng.normal(size=m) + 1j * rng.normal(size=m)
            b = 0.3 * (rng.normal(size=m) + 1j * rng.normal(size=m))
            c0 = rng.normal() + 1j * rng.normal()

            def c(z, a=a, b=b, c0=c0):
                # nowhere-vanishing holomorphic rescaling
                return np.exp(c0 + a @ z + b @ (z * z))

            if name == "product_abelian":
                M = random_siegel_point(rng, 2).M
                z = np.array([M[0, 0], M[1, 1], M[0, 1]])
            elif name == "quintic":
                z = np.array([rng.uniform(-0.5, 0.5) + 1j * rng.uniform(1.5, 4.0)])
            else:
                z = rng.uniform(-1, 1, m) + 1j * rng.uniform(0.3, 3.0, m)
            f = cfg.chart_potential()
            f_c = ChartedPotential(m, lambda w, c=c: model.potential(c(w) * cfg.section_at(w)),
                                   cfg.in_guard)
            diff = complex_hessian(f_c, z).matrix - complex_hessian(f, z).matrix
            worst = max(worst, float(np.abs(diff).max()))
    ok = worst <= 1e-6
    report(_line(10, ok, f"section independence, 5 rescalings x {len(RINGS)} charts: "
                         f"Hessian change {worst:.2e} (1e-6)"))
    assert ok


if __name__ == "__main__":
    raise SystemExit(pytest.main([__file__, "-v"]))
