"""Finite-basis models of even-degree cohomology rings.

A ring is read from a small JSON file listing basis labels with their real
degrees, the nonzero structure constants and the values of the integration
functional on top-degree classes.  Structure constants are exact rationals in
the file; classes carry double-precision complex coefficients.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Mapping

import numpy as np

from .errors import ConfigError, DomainError, RingMismatchError

__all__ = [
    "GradedRingSpec",
    "CohClass",
    "multiply",
    "integrate",
    "mukai_dual",
    "exp_class",
    "nilpotent_exp",
    "load_ring",
    "shipped_rings",
    "parse_rational",
]


def parse_rational(value, den=None) -> Fraction:
    """Read ``3``, ``"3/4"``, ``0.5`` or a (num, den) pair as a Fraction."""
    if den is not None:
        return Fraction(int(value), int(den))
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("boolean is not a rational number")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**12)
    return Fraction(str(value))


@dataclass(frozen=True, eq=False)
class GradedRingSpec:
    """Commutative graded ring with a basis of homogeneous even-degree classes.

    ``structure[a, b, c]`` is the coefficient of basis element ``c`` in the
    product of basis elements ``a`` and ``b``; ``integral[c]`` is the value
    of the integration functional on basis element ``c``.
    """

    name: str
    dim_n: int
    labels: tuple
    degrees: tuple
    mult: Mapping  # (a, b) -> {c: Fraction}, exact, both orders present
    integral_exact: Mapping  # label -> Fraction
    structure: np.ndarray = field(repr=False)
    integral: np.ndarray = field(repr=False)

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def unit_label(self) -> str:
        return self.labels[self.degrees.index(0)]

    def index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise KeyError(f"ring {self.name!r} has no basis element {label!r}") from None

    # -- constructors for classes -------------------------------------------

    def zero(self) -> "CohClass":
        return CohClass(self, np.zeros(self.size, dtype=complex))

    def unit(self) -> "CohClass":
        return self.basis_element(self.unit_label)

    def basis_element(self, label: str) -> "CohClass":
        c = np.zeros(self.size, dtype=complex)
        c[self.index(label)] = 1.0
        return CohClass(self, c)

    def element(self, coeffs: Mapping[str, complex]) -> "CohClass":
        """Class with the given coefficients; labels not mentioned are zero."""
        c = np.zeros(self.size, dtype=complex)
        for label, value in coeffs.items():
            c[self.index(label)] = complex(value)
        return CohClass(self, c)

    def from_vector(self, vector) -> "CohClass":
        return CohClass(self, np.asarray(vector, dtype=complex))

    def degree_mask(self, degree: int) -> np.ndarray:
        return np.array([d == degree for d in self.degrees])

    # -- loading -------------------------------------------------------------

    @classmethod
    def from_dict(cls, data: Mapping) -> "GradedRingSpec":
        try:
            name = str(data["name"])
            n = int(data["dim_n"])
            basis = data["basis"]
        except KeyError as exc:
            raise ConfigError(f"missing field {exc.args[0]!r}") from None
        if n < 0:
            raise ConfigError("must be non-negative", "dim_n")

        labels, degrees = [], []
        for i, item in enumerate(basis):
            label, deg = str(item["label"]), int(item["degree"])
            if label in labels:
                raise ConfigError(f"duplicate label {label!r}", f"basis[{i}]")
            if deg % 2 or not 0 <= deg <= 2 * n:
                raise ConfigError(f"degree {deg} not even in [0, {2 * n}]", f"basis[{i}]")
            labels.append(label)
            degrees.append(deg)
        if degrees.count(0) != 1:
            raise ConfigError("exactly one degree-0 basis element (the unit) is required", "basis")
        deg_of = dict(zip(labels, degrees))

        def known(label, where):
            if label not in deg_of:
                raise ConfigError(f"unknown label {label!r}", where)
            return label

        mult: dict = {}
        for i, entry in enumerate(data.get("mult", [])):
            where = f"mult[{i}]"
            a, b = known(entry["a"], where), known(entry["b"], where)
            result = {}
            for j, term in enumerate(entry.get("result", [])):
                c = known(term["label"], f"{where}.result[{j}]")
                coeff = parse_rational(term["coeff_num"], term.get("coeff_den", 1))
                if coeff == 0:
                    continue
                if deg_of[c] != deg_of[a] + deg_of[b]:
                    raise ConfigError(
                        f"{a}*{b} has a component in degree {deg_of[c]}, expected "
                        f"{deg_of[a] + deg_of[b]}", f"{where}.result[{j}]")
                result[c] = result.get(c, Fraction(0)) + coeff
            for key in ((a, b), (b, a)):
                if key in mult and mult[key] != result:
                    raise ConfigError(f"inconsistent products for {a}*{b}", where)
                mult[key] = result

        unit = labels[degrees.index(0)]
        for x in labels:
            expected = {x: Fraction(1)}
            for key in ((unit, x), (x, unit)):
                if key in mult and mult[key] != expected:
                    raise ConfigError(f"unit times {x} must be {x}", "mult")
                mult[key] = expected

        integral_exact = {label: Fraction(0) for label in labels}
        for i, entry in enumerate(data.get("integral", [])):
            where = f"integral[{i}]"
            label = known(entry["label"], where)
            value = parse_rational(entry["value_num"], entry.get("value_den", 1))
            if value and deg_of[label] != 2 * n:
                raise ConfigError(f"integral must vanish below degree {2 * n}", where)
            integral_exact[label] = value

        d = len(labels)
        structure = np.zeros((d, d, d))
        for (a, b), result in mult.items():
            for c, coeff in result.items():
                structure[labels.index(a), labels.index(b), labels.index(c)] = float(coeff)
        integral = np.array([float(integral_exact[x]) for x in labels])
        structure.setflags(write=False)
        integral.setflags(write=False)

        ring = cls(name, n, tuple(labels), tuple(degrees), mult, integral_exact,
                   structure, integral)
        bad = ring.associativity_defect()
        if bad:
            raise ConfigError(f"multiplication is not associative on {bad}", "mult")
        return ring

    def to_dict(self) -> dict:
        """Inverse of :meth:`from_dict` (unit products omitted)."""
        unit = self.unit_label
        mult = []
        for i, a in enumerate(self.labels):
            for b in self.labels[i:]:
                if unit in (a, b):
                    continue
                result = self.mult.get((a, b), {})
                if result:
                    mult.append({"a": a, "b": b, "result": [
                        {"label": c, "coeff_num": v.numerator, "coeff_den": v.denominator}
                        for c, v in result.items()]})
        return {
            "name": self.name,
            "dim_n": self.dim_n,
            "basis": [{"label": x, "degree": d} for x, d in zip(self.labels, self.degrees)],
            "mult": mult,
            "integral": [{"label": x, "value_num": v.numerator, "value_den": v.denominator}
                         for x, v in self.integral_exact.items() if v],
        }

    def product_exact(self, a: str, b: str) -> dict:
        return dict(self.mult.get((a, b), {}))

    def associativity_defect(self):
        """First basis triple (a, b, c) with (ab)c != a(bc) in exact arithmetic, else None."""
        def times(vec, y):
            out: dict = {}
            for x, cx in vec.items():
                for z, cz in self.mult.get((x, y), {}).items():
                    out[z] = out.get(z, Fraction(0)) + cx * cz
            return {k: v for k, v in out.items() if v}

        for a in self.labels:
            for b in self.labels:
                ab = self.mult.get((a, b), {})
                for c in self.labels:
                    bc = self.mult.get((b, c), {})
                    left = times(ab, c)
                    right: dict = {}
                    for y, cy in bc.items():
                        for z, cz in self.mult.get((a, y), {}).items():
                            right[z] = right.get(z, Fraction(0)) + cy * cz
                    right = {k: v for k, v in right.items() if v}
                    if left != right:
                        return (a, b, c)
        return None


@dataclass(frozen=True, eq=False)
class CohClass:
    """Complex cohomology class: one coefficient per basis element of ``ring``."""

    ring: GradedRingSpec
    coeffs: np.ndarray

    def __post_init__(self):
        c = np.array(self.coeffs, dtype=complex)
        if c.shape != (self.ring.size,):
            raise ValueError(f"expected {self.ring.size} coefficients, got shape {c.shape}")
        if not np.all(np.isfinite(c)):
            raise ValueError("class coefficients must be finite")
        c.setflags(write=False)
        object.__setattr__(self, "coeffs", c)

    def _check(self, other: "CohClass"):
        if other.ring is not self.ring:
            raise RingMismatchError(f"classes live in {self.ring.name!r} and {other.ring.name!r}")

    def __add__(self, other):
        if not isinstance(other, CohClass):
            return NotImplemented
        self._check(other)
        return CohClass(self.ring, self.coeffs + other.coeffs)

    def __sub__(self, other):
        if not isinstance(other, CohClass):
            return NotImplemented
        self._check(other)
        return CohClass(self.ring, self.coeffs - other.coeffs)

    def __neg__(self):
        return CohClass(self.ring, -self.coeffs)

    def __mul__(self, other):
        if isinstance(other, CohClass):
            return multiply(self, other)
        if np.isscalar(other):
            return CohClass(self.ring, self.coeffs * other)
        return NotImplemented

    def __rmul__(self, other):
        if np.isscalar(other):
            return CohClass(self.ring, self.coeffs * other)
        return NotImplemented

    def __truediv__(self, other):
        if np.isscalar(other):
            return CohClass(self.ring, self.coeffs / other)
        return NotImplemented

    def __getitem__(self, label: str) -> complex:
        return complex(self.coeffs[self.ring.index(label)])

    def __repr__(self):
        terms = [f"{c:.6g}*{x}" for x, c in zip(self.ring.labels, self.coeffs) if c != 0]
        return f"CohClass({self.ring.name}: {' + '.join(terms) or '0'})"

    def conj(self) -> "CohClass":
        return CohClass(self.ring, self.coeffs.conj())

    def degree_part(self, degree: int) -> "CohClass":
        return CohClass(self.ring, np.where(self.ring.degree_mask(degree), self.coeffs, 0))

    def is_pure_degree(self, degree: int, tol: float = 0.0) -> bool:
        off = self.coeffs[~self.ring.degree_mask(degree)]
        return bool(np.all(np.abs(off) <= tol))

    def allclose(self, other: "CohClass", atol: float = 1e-12, rtol: float = 0.0) -> bool:
        self._check(other)
        return bool(np.allclose(self.coeffs, other.coeffs, atol=atol, rtol=rtol))

    def as_dict(self) -> dict:
        return {x: complex(c) for x, c in zip(self.ring.labels, self.coeffs) if c != 0}


def multiply(a: CohClass, b: CohClass) -> CohClass:
    a._check(b)
    return CohClass(a.ring, np.einsum("i,j,ijk->k", a.coeffs, b.coeffs, a.ring.structure))


def integrate(a: CohClass) -> complex:
    return complex(a.coeffs @ a.ring.integral)


def mukai_dual(v: CohClass) -> CohClass:
    """Multiply the degree-2k part by (-1)**k."""
    signs = np.array([(-1) ** (d // 2) for d in v.ring.degrees], dtype=float)
    return CohClass(v.ring, v.coeffs * signs)


def nilpotent_exp(a: CohClass) -> CohClass:
    """exp(a) for a class without degree-0 part (the series terminates)."""
    ring = a.ring
    if abs(a.coeffs[ring.index(ring.unit_label)]) != 0:
        raise DomainError("nilpotent_exp needs a class with vanishing degree-0 part")
    out = ring.unit()
    term = ring.unit()
    for k in range(1, ring.dim_n + 1):
        term = multiply(term, a) / k
        out = out + term
    return out


def exp_class(omega: CohClass) -> CohClass:
    """1 + omega + omega^2/2! + ... for omega of pure degree 2."""
    if not omega.is_pure_degree(2):
        raise DomainError("exp_class expects a class of pure degree 2")
    return nilpotent_exp(omega)


_DATA = resources.files("wpstab") / "data"


def shipped_rings() -> list:
    return sorted(p.name[:-5] for p in (_DATA / "rings").iterdir() if p.name.endswith(".json"))


def load_ring(name_or_path) -> GradedRingSpec:
    """Load a ring spec from a JSON path or by the name of a shipped ring."""
    path = Path(name_or_path)
    if path.suffix == ".json" and path.exists():
        text = path.read_text()
    else:
        res = _DATA / "rings" / f"{name_or_path}.json"
        if not res.is_file():
            raise ConfigError(f"no ring file or shipped ring named {str(name_or_path)!r}")
        text = res.read_text()
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}") from None
    return GradedRingSpec.from_dict(data)

