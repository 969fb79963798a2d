"""Evaluate a scenario over its grid and emit records as JSON or CSV."""
from __future__ import annotations

import csv
import io
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field
from typing import Iterator, Optional

import numpy as np

from .cohring import integrate, multiply
from .diffgeo import complex_hessian, curvature_1d, positivity_check
from .errors import DomainError
from .quantum import quintic_closed_form_potential
from .scenario import ScenarioConfig
from .siegel import bergman_potential

SCHEMA_VERSION = 1


def _fmt(x) -> str:
    return "" if x is None else format(float(x), ".17g")


@dataclass
class ResultRecord:
    """One grid point.  Complex values are stored as [re, im] pairs."""

    index: int
    coords: list
    status: str = "ok"
    message: str = ""
    K_WP: Optional[float] = None
    K_Ber: Optional[float] = None
    metric: Optional[list] = None
    eigenvalues: Optional[list] = None
    verdict: Optional[str] = None
    curvature: Optional[float] = None
    residuals: dict = field(default_factory=dict)
    schema_version: int = SCHEMA_VERSION

    def __post_init__(self):
        for name in ("K_WP", "K_Ber", "curvature"):
            v = getattr(self, name)
            if v is not None and not math.isfinite(v):
                raise ValueError(f"{name} is not finite")

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, d: dict) -> "ResultRecord":
        version = d.get("schema_version", SCHEMA_VERSION)
        if version != SCHEMA_VERSION:
            raise ValueError(f"unsupported schema version {version}")
        return cls(**d)

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def _pair(z: complex) -> list:
    return [float(z.real), float(z.imag)]


def wpb_value(cfg: ScenarioConfig, z) -> float:
    """-log((2^n/n!) integral of (Im omega)^n), the closed form for exp sections."""
    kappa = cfg.omega(z)
    kappa = cfg.ring.from_vector(kappa.coeffs.imag)
    n = cfg.ring.dim_n
    power = cfg.ring.unit()
    for _ in range(n):
        power = multiply(power, kappa)
    vol = (2 ** n / math.factorial(n)) * integrate(power).real
    if not vol > 0:
        raise DomainError("Im(omega) is not in the Kahler cone")
    return -math.log(vol)


def evaluate_point(cfg: ScenarioConfig, index: int, z) -> ResultRecord:
    z = np.atleast_1d(np.asarray(z, dtype=complex))
    rec = ResultRecord(index, [_pair(c) for c in z])
    try:
        K = cfg.potential(z)
    except DomainError as exc:
        rec.status, rec.message = "domain_error", str(exc)
        return rec
    rec.K_WP = K
    stage = "checks"
    try:
        if "bergman" in cfg.checks or "bergman" in cfg.raw:
            rec.K_Ber = bergman_potential(cfg.siegel_matrix(z))
            rec.residuals["bergman"] = abs(K - rec.K_Ber - cfg.bergman_offset)
        if "wpb" in cfg.checks:
            rec.residuals["wpb"] = abs(K - wpb_value(cfg, z))
        if "elliptic_closed_form" in cfg.checks:
            rec.residuals["elliptic_closed_form"] = abs(K + math.log(2 * z[0].imag))
        if "quintic_closed_form" in cfg.checks:
            chi = cfg.euler_characteristic if cfg.include_lambda else None
            closed = quintic_closed_form_potential(complex(z[0]), cfg.gw, 5, chi)
            rec.residuals["quintic_closed_form"] = abs(K - closed)
        comp = cfg.compute
        if comp["metric"]:
            stage = "metric"
            f = cfg.chart_potential()
            g = complex_hessian(f, z, cfg.fd_step)
            rep = positivity_check(g, cfg.tolerances["eig"])
            rec.metric = [_pair(x) for x in g.matrix.ravel()]
            rec.eigenvalues = [float(x) for x in rep.eigenvalues]
            rec.verdict = rep.verdict
        if comp["curvature"] and len(z) == 1:
            stage = "curvature"
            kw = {} if cfg.curvature_step is None else {"h": cfg.curvature_step}
            rec.curvature = curvature_1d(cfg.chart_potential(), complex(z[0]), **kw)
    except DomainError as exc:
        rec.status, rec.message = "domain_error", f"{stage}: {exc}"
    return rec


def run_scenario(cfg: ScenarioConfig, workers: Optional[int] = None) -> Iterator[ResultRecord]:
    """Records in grid order, whatever order the workers finish in."""
    points = cfg.grid_points()
    workers = cfg.workers if workers is None else workers
    if workers <= 1 or len(points) <= 1:
        for i, z in enumerate(points):
            yield evaluate_point(cfg, i, z)
        return
    with ThreadPoolExecutor(max_workers=workers) as pool:
        yield from pool.map(lambda iz: evaluate_point(cfg, *iz), enumerate(points))


# -- serialization -----------------------------------------------------------

def csv_columns(cfg: ScenarioConfig) -> list:
    cols = ["index", "status"]
    for c in cfg.coords:
        cols += [f"{c}_re", f"{c}_im"]
    cols.append("K_WP")
    if "bergman" in cfg.raw:
        cols.append("K_Ber")
    cols += [f"residual_{name}" for name in cfg.checks]
    if cfg.compute["metric"]:
        m = len(cfg.coords)
        for a in range(m):
            for b in range(m):
                cols += [f"g_{a}{b}_re", f"g_{a}{b}_im"]
        cols += [f"eig_{k}" for k in range(m)]
        cols.append("verdict")
    if cfg.compute["curvature"] and len(cfg.coords) == 1:
        cols.append("curvature")
    cols.append("message")
    return cols


def record_row(rec: ResultRecord, cols: list) -> list:
    row = {"index": str(rec.index), "status": rec.status, "message": rec.message,
           "K_WP": _fmt(rec.K_WP), "K_Ber": _fmt(rec.K_Ber), "curvature": _fmt(rec.curvature),
           "verdict": rec.verdict or ""}
    # coordinate columns follow "index" and "status"
    for k, pair in enumerate(rec.coords):
        row[cols[2 + 2 * k]] = _fmt(pair[0])
        row[cols[3 + 2 * k]] = _fmt(pair[1])
    for name, v in rec.residuals.items():
        row[f"residual_{name}"] = _fmt(v)
    if rec.metric is not None:
        m = round(math.sqrt(len(rec.metric)))
        for idx, (re, im) in enumerate(rec.metric):
            a, b = divmod(idx, m)
            row[f"g_{a}{b}_re"], row[f"g_{a}{b}_im"] = _fmt(re), _fmt(im)
        for k, lam in enumerate(rec.eigenvalues):
            row[f"eig_{k}"] = _fmt(lam)
    return [row.get(c, "") for c in cols]


def write_csv(records, cfg: ScenarioConfig, stream) -> int:
    cols = csv_columns(cfg)
    w = csv.writer(stream, lineterminator="\n")
    w.writerow(cols)
    count = 0
    for rec in records:
        w.writerow(record_row(rec, cols))
        count += 1
    return count


def write_json(records, cfg: ScenarioConfig, stream) -> int:
    recs = [r.to_dict() for r in records]
    json.dump({"schema_version": SCHEMA_VERSION, "scenario": cfg.scenario,
               "coords": list(cfg.coords), "records": recs}, stream, indent=1)
    stream.write("\n")
    return len(recs)


def read_json(stream) -> list:
    data = json.load(stream)
    if data.get("schema_version") != SCHEMA_VERSION:
        raise ValueError(f"unsupported schema version {data.get('schema_version')}")
    return [ResultRecord.from_dict(d) for d in data["records"]]


def render(records, cfg: ScenarioConfig, fmt: str) -> str:
    buf = io.StringIO()
    (write_json if fmt == "json" else write_csv)(records, cfg, buf)
    return buf.getvalue()
