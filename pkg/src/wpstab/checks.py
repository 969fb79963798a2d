"""Named verification suites: each returns pass/fail lines with their worst residual."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .charclass import gamma_identity_check, log_gamma_class, ZETA3
from .cohring import CohClass, integrate, multiply, nilpotent_exp
from .diffgeo import ChartedPotential, complex_hessian, positivity_check
from .quantum import GWData, quantum_exp
from .scenario import ScenarioConfig, load_scenario
from .siegel import (bergman_potential, bergman_transform_law, in_siegel_space,
                     omega_to_M, random_siegel_point, random_symplectic, sp_action)
from .stability import bilinear_b, mukai_pairing, positivity_value, stab_plus

RING_SCENARIOS = ("elliptic", "product_abelian", "split_abelian", "abelian_nfold", "quintic")
EXP_SCENARIOS = ("elliptic", "product_abelian", "split_abelian", "abelian_nfold")


@dataclass(frozen=True)
class CheckResult:
    name: str
    value: float
    tol: float
    passed: bool
    detail: str = ""

    def line(self) -> str:
        flag = "PASS" if self.passed else "FAIL"
        extra = f"  ({self.detail})" if self.detail else ""
        return f"[{flag}] {self.name}: {self.value:.3e} (tol {self.tol:.1e}){extra}"


def _check(name, value, tol, detail="") -> CheckResult:
    return CheckResult(name, float(value), float(tol), bool(value <= tol), detail)


# -- random inputs --------------------------------------------------------------

def random_class(rng: np.random.Generator, ring) -> CohClass:
    return ring.from_vector(rng.normal(size=ring.size) + 1j * rng.normal(size=ring.size))


def random_unimodular(rng: np.random.Generator, k: int, steps: Optional[int] = None) -> np.ndarray:
    """Integer matrix with determinant +-1: a signed permutation times ``steps`` elementary moves.

    The default of ``k`` moves keeps entries single-digit.
    """
    P = np.eye(k, dtype=np.int64)[rng.permutation(k)] * rng.choice([-1, 1], size=k)[:, None]
    for _ in range(k if steps is None else steps):
        i, j = rng.choice(k, size=2, replace=False)
        P[i] += rng.choice([-1, 1]) * P[j]
    return P


def sample_chart_point(cfg: ScenarioConfig, rng: np.random.Generator) -> np.ndarray:
    """Seeded point of the chart's Kahler-cone region."""
    if cfg.raw["grid"]["kind"] == "random_siegel":
        M = random_siegel_point(rng, 2).M
        return np.array([M[0, 0], M[1, 1], M[0, 1]])
    return rng.uniform(-1, 1, size=len(cfg.coords)) + 1j * rng.uniform(0.2, 3.0, size=len(cfg.coords))


def kahler_volume(cfg: ScenarioConfig, z) -> float:
    """(2^n/n!) times the integral of (Im omega)^n."""
    kappa = cfg.ring.from_vector(cfg.omega(z).coeffs.imag)
    n = cfg.ring.dim_n
    power = cfg.ring.unit()
    for _ in range(n):
        power = multiply(power, kappa)
    return (2 ** n / math.factorial(n)) * integrate(power).real


# -- suites ---------------------------------------------------------------------

def lemma_residuals(cfg: ScenarioConfig, rng: np.random.Generator, pairs: int = 100) -> dict:
    """Worst residuals of the b-versus-Mukai identities on one ring."""
    model = cfg.model
    ring, chern, n = model.ring, model.chern, model.n
    sign = (-1) ** n
    lam2 = nilpotent_exp(2j * log_gamma_class(chern))
    V = [model.basis.vectors[i] for i in range(len(model.basis))]
    worst = dict(b_mho=0.0, b_conj=0.0, serre=0.0, completeness=0.0)
    for _ in range(pairs):
        m1, m2 = random_class(rng, ring), random_class(rng, ring)
        Z1, Z2 = model.charge(m1), model.charge(m2)
        worst["b_mho"] = max(worst["b_mho"], abs(bilinear_b(Z1, Z2, model.chi)
                                                 - sign * mukai_pairing(m1, m2, chern)))
        rhs = sign * mukai_pairing(m1, multiply(m1.conj(), lam2), chern)
        worst["b_conj"] = max(worst["b_conj"], abs(bilinear_b(Z1, Z1.conj(), model.chi) - rhs))
        worst["serre"] = max(worst["serre"], abs(mukai_pairing(m1, m2, chern)
                                                 - sign * mukai_pairing(m2, m1, chern)))
        left = np.array([mukai_pairing(m1, v, chern) for v in V])
        right = np.array([mukai_pairing(v, m2, chern) for v in V])
        worst["completeness"] = max(worst["completeness"],
                                    abs(left @ model.chi.chi_inv @ right - mukai_pairing(m1, m2, chern)))
    return worst


def basis_change_residual(cfg: ScenarioConfig, rng: np.random.Generator, changes: int = 50) -> float:
    """Worst |b_new - b_old| over random unimodular changes of basis."""
    model = cfg.model
    worst = 0.0
    for _ in range(changes):
        P = random_unimodular(rng, len(model.basis))
        other = model.with_basis(model.basis.transformed(P))
        m1, m2 = random_class(rng, model.ring), random_class(rng, model.ring)
        worst = max(worst, abs(model.b(m1, m2) - other.b(m1, m2)))
    return worst


def suite_lemmas(seed: int = 0, pairs: int = 100, changes: int = 50,
                 scenarios=RING_SCENARIOS) -> list:
    out = []
    for name in scenarios:
        cfg = load_scenario(name)
        rng = np.random.default_rng([seed, RING_SCENARIOS.index(name) if name in RING_SCENARIOS else 99])
        r = lemma_residuals(cfg, rng, pairs)
        out.append(_check(f"b(Z1,Z2) = (-1)^n <mho1,mho2> [{name}]", r["b_mho"], 1e-12))
        out.append(_check(f"b(Z,conj Z) = (-1)^n <mho, conj mho exp(2i Lambda)> [{name}]",
                          r["b_conj"], 1e-12))
        out.append(_check(f"<v,w> = (-1)^n <w,v> [{name}]", r["serre"], 1e-12))
        out.append(_check(f"sum <v,v_i> chi^ij <v_j,w> = <v,w> [{name}]", r["completeness"], 1e-11))
        out.append(_check(f"basis independence of b [{name}]",
                          basis_change_residual(cfg, rng, changes), 1e-10))
    return out


def wpb_residuals(cfg: ScenarioConfig, rng: np.random.Generator, count: int = 100) -> dict:
    """Conditions of Stab+ and the closed form on seeded Kahler-cone points."""
    model = cfg.model
    worst_rel, worst_bzz, failures = 0.0, 0.0, 0
    for _ in range(count):
        z = sample_chart_point(cfg, rng)
        Z = model.charge(cfg.section_at(z))
        failures += not stab_plus(Z, model.chi, model.n, model.tol_zero, model.tol_pos)
        worst_bzz = max(worst_bzz, abs(bilinear_b(Z, Z, model.chi)))
        vol = kahler_volume(cfg, z)
        val = positivity_value(Z, model.chi, model.n)
        worst_rel = max(worst_rel, abs(val - vol) / vol)
    return dict(closed_form=worst_rel, b_zz=worst_bzz, stab_failures=failures)


def suite_wpb(seed: int = 0, count: int = 100, scenarios=EXP_SCENARIOS) -> list:
    out = []
    for k, name in enumerate(scenarios):
        cfg = load_scenario(name)
        r = wpb_residuals(cfg, np.random.default_rng([seed, 10 + k]), count)
        out.append(_check(f"Stab+ holds on the Kahler cone [{name}]", r["stab_failures"], 0,
                          f"max |b(Z,Z)| = {r['b_zz']:.2e}"))
        out.append(_check(f"i^-n b(Z,conj Z) = (2^n/n!) (Im omega)^n [{name}]",
                          r["closed_form"], 1e-10, "relative"))
    return out


def siegel_residual(cfg: ScenarioConfig, points) -> float:
    worst = 0.0
    for z in points:
        K = cfg.potential(z)
        worst = max(worst, abs(K - bergman_potential(cfg.siegel_matrix(z)) - cfg.bergman_offset))
    return worst


def tube_domain_disagreements(cfg: ScenarioConfig, rng: np.random.Generator, count: int = 500) -> int:
    """stab_plus(exp omega) versus Im(M_omega) > 0; the sample mixes definite and indefinite Im."""
    model = cfg.model
    bad = 0
    for _ in range(count):
        re = rng.uniform(-2, 2, size=3)
        im = np.array([rng.uniform(0.05, 3), rng.uniform(0.05, 3), rng.uniform(-3, 3)])
        z = re + 1j * im
        M = np.array([[z[0], z[2]], [z[2], z[1]]])
        bad += model.in_stab_plus(cfg.section_at(z)) != in_siegel_space(M)
    return bad


def bergman_chart(pull=None) -> ChartedPotential:
    """K_Ber in coordinates (rho, tau, sigma), optionally precomposed with M -> pull(M)."""
    def ev(z):
        P = omega_to_M(*z)
        return bergman_potential(pull(P) if pull else P)
    return ChartedPotential(3, ev)


def descent_residuals(rng: np.random.Generator, words: int = 50) -> dict:
    worst_law, worst_metric = 0.0, 0.0
    for _ in range(words):
        gamma = random_symplectic(rng, 2)
        P = random_siegel_point(rng, 2)
        worst_law = max(worst_law, bergman_transform_law(gamma, P))
        z = np.array([P.M[0, 0], P.M[1, 1], P.M[0, 1]])
        base = complex_hessian(bergman_chart(), z)
        pulled = complex_hessian(bergman_chart(lambda Q: sp_action(gamma, Q)), z)
        worst_metric = max(worst_metric, pulled.relative_distance(base))
    return dict(law=worst_law, metric=worst_metric)


def suite_bergman(seed: int = 0, count: int = 200, triples: int = 500, words: int = 50) -> list:
    out = []
    cfg = load_scenario("siegel_compare")
    pts = cfg.grid_points(seed=seed)[:count] if count <= 200 else None
    if pts is None or len(pts) < count:
        rng = np.random.default_rng([seed, 20])
        pts = [np.array([M.M[0, 0], M.M[1, 1], M.M[0, 1]])
               for M in (random_siegel_point(rng, 2) for _ in range(count))]
    out.append(_check("K_WP - K_Ber = log 2 on the Siegel space", siegel_residual(cfg, pts), 1e-9))
    split = load_scenario("split_abelian")
    rng = np.random.default_rng([seed, 21])
    diag = [sample_chart_point(split, rng) for _ in range(count)]
    out.append(_check("K_WP - K_Ber = log 2 on the split diagonal", siegel_residual(split, diag), 1e-9))
    out.append(_check("stab_plus(exp omega) <=> Im M_omega > 0 (disagreements)",
                      tube_domain_disagreements(load_scenario("product_abelian"),
                                                np.random.default_rng([seed, 22]), triples), 0))
    r = descent_residuals(np.random.default_rng([seed, 23]), words)
    out.append(_check("Bergman transform law under Sp(4,Z)", r["law"], 1e-9))
    out.append(_check("pulled-back Bergman metric equals the base metric", r["metric"], 1e-4,
                      "relative"))
    return out


# -- quintic ----------------------------------------------------------------------

ASYMPTOTIC_Y = (5.0, 10.0, 20.0, 50.0)


def quintic_asymptotics(cfg: ScenarioConfig, ys=ASYMPTOTIC_Y, y_fit: float = 50.0) -> list:
    """(y, |K - (-log((20/3) y^3) + C0)|, 10 e^{-2 pi y}) with C0 fitted at y_fit."""
    degree = integrate(multiply(multiply(cfg.ring.basis_element("H"), cfg.ring.basis_element("H")),
                                cfg.ring.basis_element("H"))).real

    def leading(y):
        return -math.log((4 / 3) * degree * y ** 3)

    C0 = cfg.potential([1j * y_fit]) - leading(y_fit)
    return [(y, abs(cfg.potential([1j * y]) - (leading(y) + C0)), 10 * math.exp(-2 * math.pi * y))
            for y in ys]


def quintic_metric_positivity(cfg: ScenarioConfig, re=np.linspace(-0.5, 0.5, 5),
                              im=(2.0, 2.5, 3.0, 4.0, 6.0)) -> float:
    """Smallest metric eigenvalue over a grid with Im tau >= 2."""
    f = cfg.chart_potential()
    return min(positivity_check(complex_hessian(f, [x + 1j * y])).eigenvalues.min()
               for x in re for y in im)


def quintic_first_order(cfg: ScenarioConfig, ys=(2.5, 3.0)) -> tuple:
    """q^1 coefficient of K(gw) - K(0) on tau = iy with Lambda off, against that of -log Phi.

    Two-point Richardson in q removes the q^2 term.
    """
    classical = GWData(cfg.gw.classical().invariants)

    def dK(y):
        tau = 1j * y
        model = cfg.build_model(include_lambda=False)
        K_gw = model.potential(quantum_exp(tau, cfg.gw, cfg.ring))
        K_0 = model.potential(quantum_exp(tau, classical, cfg.ring))
        return K_gw - K_0, math.exp(-2 * math.pi * y)

    (d1, q1), (d2, q2) = dK(ys[0]), dK(ys[1])
    a1 = (d1 / q1 * q2 - d2 / q2 * q1) / (q2 - q1)
    # -log Phi(q) = -(N_1/5) q + O(q^2)
    return a1, -float(cfg.gw.invariants[0]) / 5


def suite_quintic(seed: int = 0, gw_file: Optional[str] = None) -> list:
    cfg = load_scenario("quintic", {"gw_file": gw_file} if gw_file else None)
    out = []
    for y, dev, tol in quintic_asymptotics(cfg):
        out.append(CheckResult(f"asymptotics at y = {y:g}", dev, tol, dev <= tol))
    lam_min = quintic_metric_positivity(cfg)
    out.append(CheckResult("metric positive for Im tau >= 2 (min eigenvalue)", lam_min, 0.0,
                           lam_min > 0, "must be > 0"))
    a1, expected = quintic_first_order(cfg)
    out.append(_check("first-order q coefficient of K(gw) - K(0) vs -log Phi",
                      abs(a1 - expected) / abs(expected), 1e-6,
                      f"{a1:.9g} vs {expected:.9g}, relative"))
    return out


def suite_gamma(seed: int = 0, samples: int = 20, order: int = 200) -> list:
    rng = np.random.default_rng([seed, 30])
    zs = rng.uniform(-5, 5, size=samples)
    out = [_check("Gamma identity on (-5, 5)", max(gamma_identity_check(z, order) for z in zs), 1e-10)]
    for name in ("elliptic", "product_abelian", "split_abelian"):
        lam = log_gamma_class(load_scenario(name).chern)
        out.append(_check(f"Lambda vanishes [{name}]", float(np.max(np.abs(lam.coeffs))), 0.0))
    lam = log_gamma_class(load_scenario("quintic").chern)
    expected = 40 * ZETA3 / (2 * math.pi) ** 3
    out.append(_check("quintic Lambda H^3 coefficient", abs(lam["H3"] - expected), 1e-12))
    return out


SUITES: dict = {
    "lemmas": suite_lemmas,
    "wpb": suite_wpb,
    "bergman": suite_bergman,
    "quintic": suite_quintic,
    "gamma": suite_gamma,
}


def run_suite(name: str, seed: int = 0, **kw) -> list:
    if name == "all":
        return [r for n in SUITES for r in run_suite(n, seed, **(kw if n == "quintic" else {}))]
    if name not in SUITES:
        raise KeyError(name)
    return SUITES[name](seed=seed, **kw)
