"""Small quantum cohomology of the quintic and its central charge near large volume.

With ``H * H = Phi(q) H^2`` and ``Phi(q) = 1 + (1/5) sum_d N_d d^3 q^d`` the
quantum exponential of ``tau H`` is

    1 + tau H + Phi(q) tau^2/2 H^2 + Phi(q) tau^3/6 H^3,    q = exp(2 pi i tau).

The potential is always evaluated through the general b-pipeline of
:mod:`wpstab.stability`; the closed forms below exist to cross-check it.
"""
from __future__ import annotations

import cmath
import json
import math
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import Optional

from .charclass import ChernData, ZETA3, twisted_mukai_vector
from .cohring import CohClass, GradedRingSpec, integrate, multiply, parse_rational
from .errors import ConfigError, DomainError
from .stability import StabilityModel, mukai_pairing

_GW_DEFAULT = resources.files("wpstab") / "data" / "gw" / "quintic.json"


@dataclass(frozen=True)
class GWData:
    """Genus-0 Gromov-Witten invariants N_1..N_dmax (multiple covers included)."""

    invariants: tuple
    source: str = ""
    variety: str = "quintic"

    def __post_init__(self):
        inv = tuple(parse_rational(x) for x in self.invariants)
        if not inv:
            raise ValueError("need at least one invariant (d_max >= 1)")
        object.__setattr__(self, "invariants", inv)

    @property
    def d_max(self) -> int:
        return len(self.invariants)

    def weighted(self) -> list:
        """N_d * d^3 as floats, d = 1..d_max."""
        return [float(N) * d ** 3 for d, N in enumerate(self.invariants, start=1)]

    def classical(self) -> "GWData":
        """Same truncation with every invariant set to zero."""
        return GWData((0,) * self.d_max, "classical limit", self.variety)

    @classmethod
    def from_dict(cls, data) -> "GWData":
        try:
            N = list(data["N"])
        except (KeyError, TypeError):
            raise ConfigError("missing list 'N'", "gw") from None
        d_max = int(data.get("d_max", len(N)))
        if d_max != len(N):
            raise ConfigError(f"d_max={d_max} but {len(N)} invariants given", "gw.d_max")
        try:
            return cls(tuple(N), str(data.get("source", "")), str(data.get("variety", "quintic")))
        except (ValueError, TypeError, ZeroDivisionError) as exc:
            raise ConfigError(str(exc), "gw.N") from None

    @classmethod
    def load(cls, path=None) -> "GWData":
        text = Path(path).read_text() if path else _GW_DEFAULT.read_text()
        try:
            return cls.from_dict(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON: {exc}", "gw") from None

    def to_dict(self) -> dict:
        return {"variety": self.variety, "d_max": self.d_max, "source": self.source,
                "N": [str(N) if N.denominator != 1 else N.numerator for N in self.invariants]}


@dataclass(frozen=True)
class KahlerParam1D:
    tau: complex

    def __post_init__(self):
        object.__setattr__(self, "tau", complex(self.tau))
        if not self.tau.imag > 0:
            raise DomainError(f"Im tau must be positive, got {self.tau}")

    @property
    def q(self) -> complex:
        return cmath.exp(2j * math.pi * self.tau)


def _tau(tau) -> KahlerParam1D:
    return tau if isinstance(tau, KahlerParam1D) else KahlerParam1D(tau)


def phi_series(gw: GWData, q: complex, degree: float = 5) -> complex:
    """Phi(q) = 1 + (1/degree) sum_d N_d d^3 q^d."""
    if abs(q) >= 1:
        raise DomainError(f"|q| = {abs(q)} >= 1: series outside its disc")
    acc = 0j
    for c in reversed(gw.weighted()):
        acc = (acc + c) * q
    return 1 + acc / degree


def quantum_exp(tau, gw: GWData, ring: GradedRingSpec, generator: str = "H") -> CohClass:
    """exp_*(tau H); higher quantum corrections vanish on a threefold with one generator."""
    t = _tau(tau)
    H = ring.basis_element(generator)
    powers = [ring.unit(), H]
    for _ in range(2, ring.dim_n + 1):
        powers.append(multiply(powers[-1], H))
    degree = integrate(powers[-1]).real
    phi = phi_series(gw, t.q, degree)
    out = ring.unit() + t.tau * H
    for k in range(2, ring.dim_n + 1):
        out = out + (phi * t.tau ** k / math.factorial(k)) * powers[k]
    return out


def quintic_central_charge(tau, gw: GWData, chE: CohClass, chern: ChernData,
                           include_lambda: bool = True) -> complex:
    """Z(E) = -<exp_*(tau H), v_X(E)>."""
    mho = quantum_exp(tau, gw, chE.ring)
    return -mukai_pairing(mho, twisted_mukai_vector(chE, chern, include_lambda), chern)


def quintic_charge_split(tau, gw: GWData, chE: CohClass, chern: ChernData,
                         include_lambda: bool = True, generator: str = "H"):
    """(classical term, instanton correction) of the quintic central charge.

    classical  = -integral of e^{-tau H} v_X(E)
    correction = -(tau^2/10 H^2 ch_1(E) - tau^3/6 ch_0(E)) sum_d N_d d^3 q^d
    """
    t = _tau(tau)
    ring = chE.ring
    H = ring.basis_element(generator)
    v = twisted_mukai_vector(chE, chern, include_lambda)
    e_minus = ring.unit()
    term = ring.unit()
    for k in range(1, ring.dim_n + 1):
        term = multiply(term, -t.tau * H) / k
        e_minus = e_minus + term
    classical = -integrate(multiply(e_minus, v))

    H2 = multiply(H, H)
    degree = integrate(multiply(H2, H)).real
    ch0 = chE[ring.unit_label]
    h2_ch1 = integrate(multiply(H2, chE.degree_part(2)))
    instantons = (phi_series(gw, t.q, degree) - 1) * degree
    correction = -(t.tau ** 2 / (2 * degree) * h2_ch1 - t.tau ** 3 / 6 * ch0) * instantons
    return classical, correction


def lambda_shift(euler_characteristic: float) -> float:
    """-2 zeta(3) chi(X)/(2 pi)^3: the Gamma-twist contribution inside the log."""
    return -2 * ZETA3 * euler_characteristic / (2 * math.pi) ** 3


def quintic_closed_form_potential(tau, gw: GWData, degree: float = 5,
                                  euler_characteristic: Optional[float] = None) -> float:
    """-log(-i H^3 [conj(Phi) tb^3/6 - t conj(Phi) tb^2/2 + Phi t^2 tb/2 - Phi t^3/6] + shift).

    ``shift`` is :func:`lambda_shift` when ``euler_characteristic`` is given
    (Gamma twist on) and zero otherwise.
    """
    t = _tau(tau)
    phi = phi_series(gw, t.q, degree)
    a, b = t.tau, t.tau.conjugate()
    bracket = (phi.conjugate() * b ** 3 / 6 - a * phi.conjugate() * b ** 2 / 2
               + phi * a ** 2 * b / 2 - phi * a ** 3 / 6)
    value = (-1j * degree * bracket).real
    if euler_characteristic is not None:
        value += lambda_shift(euler_characteristic)
    if value <= 0:
        raise DomainError("closed-form argument of the log is not positive")
    return -math.log(value)


_DEFAULT_MODELS: dict = {}


def default_quintic_model(include_lambda: bool = True) -> StabilityModel:
    """Stability model of the shipped quintic scenario."""
    if include_lambda not in _DEFAULT_MODELS:
        from .scenario import load_scenario
        cfg = load_scenario("quintic")
        _DEFAULT_MODELS[include_lambda] = cfg.build_model(include_lambda=include_lambda)
    return _DEFAULT_MODELS[include_lambda]


def quintic_wp_potential(tau, gw: GWData, model: Optional[StabilityModel] = None,
                         include_lambda: bool = True) -> float:
    model = default_quintic_model(include_lambda) if model is None else model
    return model.potential(quantum_exp(tau, gw, model.ring))

