"""Scenario files: ring, Chern data, basis, chart and grid of one worked example."""
from __future__ import annotations

import copy
import itertools
import json
import math
from dataclasses import dataclass, field
from functools import cached_property
from importlib import resources
from pathlib import Path
from typing import Optional

import jsonschema
import numpy as np

from .charclass import ChernData
from .cohring import CohClass, GradedRingSpec, exp_class, load_ring, parse_rational
from .diffgeo import ChartedPotential, upper_half_plane_scale
from .errors import ConfigError, DomainError
from .quantum import GWData, quantum_exp
from .siegel import SiegelPoint, random_siegel_point
from .stability import TOL_POS, TOL_ZERO, MukaiBasis, StabilityModel, euler_matrix

_DATA = resources.files("wpstab") / "data"
SCENARIOS = ("elliptic", "product_abelian", "split_abelian", "abelian_nfold", "quintic",
             "siegel_compare")


def scenario_schema() -> dict:
    return json.loads((_DATA / "schema" / "scenario.schema.json").read_text())


def shipped_scenarios() -> list:
    return sorted(p.name[:-5] for p in (_DATA / "scenarios").iterdir() if p.name.endswith(".json"))


def _path_str(parts) -> str:
    return ".".join(str(p) for p in parts) or "<root>"


def validate_config(data) -> None:
    """Raise ConfigError with the field path of the first schema violation."""
    validator = jsonschema.Draft202012Validator(scenario_schema())
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if errors:
        err = errors[0]
        raise ConfigError(err.message, _path_str(err.absolute_path))


def _coeff_class(ring: GradedRingSpec, coeffs, where: str) -> CohClass:
    try:
        if isinstance(coeffs, list):
            if len(coeffs) != ring.size:
                raise ValueError(f"expected {ring.size} coefficients, got {len(coeffs)}")
            return ring.from_vector([float(parse_rational(c)) for c in coeffs])
        return ring.element({k: float(parse_rational(v)) for k, v in coeffs.items()})
    except (KeyError, ValueError, TypeError, ZeroDivisionError) as exc:
        raise ConfigError(str(exc).strip("'\""), where) from None


@dataclass
class ScenarioConfig:
    """Validated scenario; ``raw`` keeps the JSON it was read from."""

    raw: dict
    base_dir: Optional[Path] = None
    seed: int = 0
    gw_file: Optional[str] = None
    output_format: str = "csv"
    output_path: Optional[str] = None
    workers: int = 1
    _cache: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_dict(cls, data, base_dir=None) -> "ScenarioConfig":
        validate_config(data)
        raw = copy.deepcopy(data)
        out = raw.get("output", {})
        cfg = cls(raw, Path(base_dir) if base_dir else None, int(raw.get("seed", 0)),
                  raw.get("gw_file"), out.get("format", "csv"), out.get("path"),
                  int(raw.get("workers", 1)))
        cfg._check()
        return cfg

    # -- plain fields ----------------------------------------------------------

    @property
    def scenario(self) -> str:
        return self.raw["scenario"]

    @property
    def coords(self) -> tuple:
        return tuple(self.raw["chart"]["coords"])

    @property
    def section(self) -> str:
        return self.raw["chart"].get("section", "exp")

    @property
    def include_lambda(self) -> bool:
        return bool(self.raw.get("include_lambda", True))

    @property
    def fd_step(self) -> Optional[float]:
        return self.raw.get("fd_step")

    @property
    def curvature_step(self) -> Optional[float]:
        return self.raw.get("curvature_step")

    @property
    def tolerances(self) -> dict:
        t = self.raw.get("tolerances", {})
        return {"zero": t.get("zero", TOL_ZERO), "pos": t.get("pos", TOL_POS),
                "eig": t.get("eig", 1e-10)}

    @property
    def compute(self) -> dict:
        c = self.raw.get("compute", {})
        return {"metric": bool(c.get("metric", False)), "curvature": bool(c.get("curvature", False))}

    @property
    def checks(self) -> tuple:
        return tuple(self.raw.get("checks", ()))

    @property
    def euler_characteristic(self) -> Optional[float]:
        return self.raw.get("euler_characteristic")

    @property
    def upper_half_plane(self) -> tuple:
        return tuple(self.raw["chart"].get("upper_half_plane", ()))

    def _resolve(self, name: str) -> str:
        if self.base_dir is not None and (self.base_dir / name).exists():
            return str(self.base_dir / name)
        return name

    # -- derived objects -------------------------------------------------------

    @cached_property
    def ring(self) -> GradedRingSpec:
        try:
            return load_ring(self._resolve(self.raw["ring_file"]))
        except ConfigError as exc:
            raise ConfigError(str(exc), "ring_file") from None
        except ValueError as exc:
            raise ConfigError(f"invalid ring: {exc}", "ring_file") from None

    @cached_property
    def chern(self) -> ChernData:
        ring = self.ring
        cs = []
        chern = self.raw.get("chern", {})
        extra = [k for k in chern if int(k[1:]) > ring.dim_n]
        if extra:
            raise ConfigError(f"Chern classes beyond the dimension: {extra}", "chern")
        for k in range(1, ring.dim_n + 1):
            key = f"c{k}"
            cs.append(_coeff_class(ring, chern[key], f"chern.{key}") if key in chern else ring.zero())
        try:
            return ChernData(ring, tuple(cs))
        except ValueError as exc:
            raise ConfigError(str(exc), "chern") from None

    @cached_property
    def gw(self) -> Optional[GWData]:
        if self.section != "quantum_exp":
            return None
        try:
            return GWData.load(self._resolve(self.gw_file) if self.gw_file else None)
        except FileNotFoundError:
            raise ConfigError(f"GW data file {self.gw_file!r} not found", "gw_file") from None
        except ConfigError as exc:
            raise ConfigError(str(exc), "gw_file") from None

    @cached_property
    def chart_classes(self) -> tuple:
        classes = self.raw["chart"]["classes"]
        out = []
        for name in self.coords:
            if name not in classes:
                raise ConfigError(f"no class given for coordinate {name!r}", "chart.classes")
            cls_ = _coeff_class(self.ring, classes[name], f"chart.classes.{name}")
            if not cls_.is_pure_degree(2):
                raise ConfigError("chart classes must be of pure degree 2", f"chart.classes.{name}")
            out.append(cls_)
        return tuple(out)

    def basis_classes(self, include_lambda: Optional[bool] = None) -> MukaiBasis:
        lam = self.include_lambda if include_lambda is None else include_lambda
        from .charclass import twisted_mukai_vector

        vectors, labels = [], []
        for i, entry in enumerate(self.raw["basis"]):
            where = f"basis.{i}"
            if "ch" in entry:
                ch = _coeff_class(self.ring, entry["ch"], f"{where}.ch")
                vectors.append(twisted_mukai_vector(ch, self.chern, lam))
            else:
                vectors.append(_coeff_class(self.ring, entry["mukai"], f"{where}.mukai"))
            labels.append(entry["label"])
        try:
            return MukaiBasis(self.ring, tuple(vectors), tuple(labels))
        except ValueError as exc:
            raise ConfigError(str(exc), "basis") from None

    def build_model(self, include_lambda: Optional[bool] = None) -> StabilityModel:
        lam = self.include_lambda if include_lambda is None else include_lambda
        if lam not in self._cache:
            basis = self.basis_classes(lam)
            if len(basis) != self.ring.size:
                raise ConfigError(f"basis has {len(basis)} vectors, ring rank is {self.ring.size}",
                                  "basis")
            try:
                chi = euler_matrix(basis, self.chern)
            except ValueError as exc:
                raise ConfigError(str(exc), "basis") from None
            tol = self.tolerances
            self._cache[lam] = StabilityModel(self.ring, self.chern, basis, chi,
                                              tol["zero"], tol["pos"])
        return self._cache[lam]

    @property
    def model(self) -> StabilityModel:
        return self.build_model()

    # -- chart -----------------------------------------------------------------

    def omega(self, z) -> CohClass:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        out = self.ring.zero()
        for zk, cls_ in zip(z, self.chart_classes):
            out = out + complex(zk) * cls_
        return out

    def section_at(self, z) -> CohClass:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        if self.section == "quantum_exp":
            generator = self.raw["chart"].get("generator", "H")
            return quantum_exp(complex(z[0]), self.gw, self.ring, generator)
        return exp_class(self.omega(z))

    def in_guard(self, z) -> bool:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        return all(z[self.coords.index(c)].imag > 0 for c in self.upper_half_plane)

    def potential(self, z, include_lambda: Optional[bool] = None) -> float:
        if not self.in_guard(z):
            raise DomainError(f"point {z} violates the chart's half-plane condition")
        return self.build_model(include_lambda).potential(self.section_at(z))

    def chart_potential(self, include_lambda: Optional[bool] = None) -> ChartedPotential:
        scale = upper_half_plane_scale if set(self.upper_half_plane) == set(self.coords) else None
        return ChartedPotential(len(self.coords), lambda z: self.potential(z, include_lambda),
                                self.in_guard, scale)

    # -- Bergman comparison ----------------------------------------------------

    @property
    def bergman_offset(self) -> float:
        b = self.raw.get("bergman", {})
        return math.log(b.get("offset_log", 1))

    def siegel_matrix(self, z) -> SiegelPoint:
        z = np.atleast_1d(np.asarray(z, dtype=complex))
        rows = self.raw["bergman"]["matrix"]
        M = [[z[self.coords.index(e)] if isinstance(e, str) else complex(e) for e in row]
             for row in rows]
        return SiegelPoint(np.array(M, dtype=complex))

    # -- grid ------------------------------------------------------------------

    def grid_points(self, seed: Optional[int] = None) -> list:
        g = self.raw["grid"]
        kind = g["kind"]
        if kind == "points":
            return [np.array([complex(*c) for c in pt]) for pt in g.get("points", [])]
        if kind == "product":
            axes = [[complex(x, y) for x, y in itertools.product(
                np.linspace(*g["axes"][c]["re"]), np.linspace(*g["axes"][c]["im"]))]
                for c in self.coords]
            return [np.array(pt) for pt in itertools.product(*axes)]
        rng = np.random.default_rng(self.seed if seed is None else seed)
        lo, hi = g.get("im_range", [0.3, 3.0])
        pts = []
        for _ in range(g.get("count", 0)):
            M = random_siegel_point(rng, 2, g.get("re_scale", 1.0), lo, hi).M
            pts.append(np.array([M[0, 0], M[1, 1], M[0, 1]]))
        return pts

    # -- validation beyond the schema --------------------------------------------

    def _check(self):
        raw = self.raw
        coords = self.coords
        if len(set(coords)) != len(coords):
            raise ConfigError("duplicate coordinate names", "chart.coords")
        for c in self.upper_half_plane:
            if c not in coords:
                raise ConfigError(f"unknown coordinate {c!r}", "chart.upper_half_plane")
        if self.section == "quantum_exp" and len(coords) != 1:
            raise ConfigError("quantum_exp charts have a single coordinate", "chart.coords")
        g = raw["grid"]
        kind = g["kind"]
        if kind == "product":
            axes = g.get("axes")
            if axes is None:
                raise ConfigError("product grids need 'axes'", "grid")
            if set(axes) != set(coords):
                raise ConfigError(f"axes {sorted(axes)} do not match coords {sorted(coords)}",
                                  "grid.axes")
            for c in coords:
                for part in ("re", "im"):
                    lo, hi, n = axes[c][part]
                    if n > 0 and hi < lo:
                        raise ConfigError("upper bound below lower bound", f"grid.axes.{c}.{part}")
                if c in self.upper_half_plane and axes[c]["im"][2] > 0 and not axes[c]["im"][0] > 0:
                    raise ConfigError("imaginary part must stay positive (Im > 0)",
                                      f"grid.axes.{c}.im.0")
        elif kind == "points":
            for i, pt in enumerate(g.get("points", [])):
                if len(pt) != len(coords):
                    raise ConfigError(f"expected {len(coords)} coordinates", f"grid.points.{i}")
                for c in self.upper_half_plane:
                    if not pt[coords.index(c)][1] > 0:
                        raise ConfigError("imaginary part must stay positive (Im > 0)",
                                          f"grid.points.{i}")
        elif len(coords) != 3:
            raise ConfigError("random_siegel grids need coords (rho, tau, sigma)", "grid.kind")
        if "bergman" in self.checks and "bergman" not in raw:
            raise ConfigError("the bergman check needs a 'bergman' block", "checks")
        if "bergman" in raw:
            rows = raw["bergman"]["matrix"]
            if any(len(r) != len(rows) for r in rows):
                raise ConfigError("matrix must be square", "bergman.matrix")
            for r in rows:
                for e in r:
                    if isinstance(e, str) and e not in coords:
                        raise ConfigError(f"unknown coordinate {e!r}", "bergman.matrix")
        if "quintic_closed_form" in self.checks and self.euler_characteristic is None:
            raise ConfigError("quintic_closed_form needs 'euler_characteristic'", "checks")


def load_scenario(name_or_path, overrides: Optional[dict] = None) -> ScenarioConfig:
    """Load a scenario by shipped name or JSON path; ``overrides`` patch top-level keys."""
    path = Path(str(name_or_path))
    if path.suffix == ".json" or path.exists():
        if not path.exists():
            raise ConfigError(f"file {str(path)!r} not found", "config")
        text, base = path.read_text(), path.parent
    else:
        res = _DATA / "scenarios" / f"{name_or_path}.json"
        if not res.is_file():
            raise ConfigError(f"no shipped scenario named {str(name_or_path)!r}", "config")
        text, base = res.read_text(), None
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ConfigError(f"invalid JSON: {exc}", "config") from None
    if overrides:
        data = {**data, **overrides}
    cfg = ScenarioConfig.from_dict(data, base)
    # resolve file fields eagerly so errors surface at load time
    cfg.ring
    cfg.chern
    cfg.gw
    cfg.chart_classes
    return cfg
