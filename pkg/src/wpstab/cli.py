"""Command line: run scenarios, verify identities, evaluate single points.

Exit codes: 0 success, 1 verification failure or domain error, 2 configuration error.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from .checks import SUITES, run_suite
from .diffgeo import complex_hessian, curvature_1d, positivity_check
from .errors import ConfigError, DomainError
from .runner import render, run_scenario
from .scenario import load_scenario, shipped_scenarios
from .siegel import SiegelPoint, SymplecticElement, bergman_potential, bergman_transform_law, sp_action

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _overrides(args) -> dict:
    out = {}
    if getattr(args, "gw_file", None):
        out["gw_file"] = str(Path(args.gw_file).resolve())
    if getattr(args, "seed", None) is not None:
        out["seed"] = args.seed
    if getattr(args, "workers", None) is not None:
        out["workers"] = args.workers
    return out


def _parse_point(text: str, m: int) -> np.ndarray:
    """``[[re, im], ...]`` with one pair per chart coordinate."""
    try:
        data = json.loads(text)
        z = np.array([complex(*p) for p in data])
    except (json.JSONDecodeError, TypeError, ValueError):
        raise ConfigError("expected a JSON list of [re, im] pairs", "point") from None
    if z.shape != (m,):
        raise ConfigError(f"expected {m} coordinates, got {len(z)}", "point")
    return z


def _emit(payload, out):
    text = payload if isinstance(payload, str) else json.dumps(payload, indent=1) + "\n"
    if out:
        Path(out).write_text(text)
    else:
        sys.stdout.write(text)


def cmd_run(args) -> int:
    cfg = load_scenario(args.config, _overrides(args))
    fmt = args.format or cfg.output_format
    out = args.out or cfg.output_path
    records = list(run_scenario(cfg))
    _emit(render(records, cfg, fmt), out)
    skipped = sum(not r.ok for r in records)
    if skipped:
        print(f"{skipped} of {len(records)} points flagged with domain errors", file=sys.stderr)
    return EXIT_OK


def cmd_verify(args) -> int:
    kw = {"gw_file": args.gw_file} if args.gw_file and args.suite in ("quintic", "all") else {}
    results = run_suite(args.suite, seed=args.seed or 0, **kw)
    lines = [r.line() for r in results]
    failed = sum(not r.passed for r in results)
    lines.append(f"{len(results) - failed} passed, {failed} failed")
    _emit("\n".join(lines) + "\n", args.out)
    return EXIT_FAIL if failed else EXIT_OK


def _siegel_payload(args) -> dict:
    try:
        P = SiegelPoint.from_list(json.loads(args.siegel))
    except (json.JSONDecodeError, TypeError, ValueError) as exc:
        raise ConfigError(f"bad Siegel matrix: {exc}", "siegel") from None
    payload = {"M": P.tolist(), "K_Ber": bergman_potential(P)}
    if args.gamma:
        try:
            blocks = json.loads(args.gamma)
            gamma = SymplecticElement(*(blocks[k] for k in "ABCD"))
        except (json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad symplectic element: {exc}", "gamma") from None
        Q = sp_action(gamma, P)
        payload.update({"gamma_M": Q.tolist(), "K_Ber_gamma_M": bergman_potential(Q),
                        "transform_law_residual": bergman_transform_law(gamma, P)})
    return payload


def cmd_potential(args) -> int:
    if args.siegel:
        _emit(_siegel_payload(args), args.out)
        return EXIT_OK
    if not args.config or not args.point:
        raise ConfigError("give --config and --point, or --siegel", "arguments")
    cfg = load_scenario(args.config, _overrides(args))
    z = _parse_point(args.point, len(cfg.coords))
    payload = {"scenario": cfg.scenario, "coords": dict(zip(cfg.coords, ([c.real, c.imag] for c in z))),
               "K_WP": cfg.potential(z)}
    if "bergman" in cfg.raw:
        payload["K_Ber"] = bergman_potential(cfg.siegel_matrix(z))
    _emit(payload, args.out)
    return EXIT_OK


def cmd_hessian(args) -> int:
    cfg = load_scenario(args.config, _overrides(args))
    z = _parse_point(args.point, len(cfg.coords))
    f = cfg.chart_potential()
    g = complex_hessian(f, z, args.step if args.step else cfg.fd_step)
    rep = positivity_check(g, cfg.tolerances["eig"])
    payload = {"scenario": cfg.scenario,
               "coords": dict(zip(cfg.coords, ([c.real, c.imag] for c in z))),
               "metric": [[[x.real, x.imag] for x in row] for row in g.matrix],
               "eigenvalues": rep.eigenvalues.tolist(), "verdict": rep.verdict}
    if len(z) == 1:
        payload["curvature"] = curvature_1d(f, complex(z[0]))
    _emit(payload, args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="wpstab", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, config_required=True):
        sp.add_argument("--config", required=config_required,
                        help=f"scenario JSON path or shipped name ({', '.join(shipped_scenarios())})")
        sp.add_argument("--gw-file", help="GW invariants JSON overriding the scenario's")
        sp.add_argument("--seed", type=int, help="RNG seed for random grids")
        sp.add_argument("--out", help="output file (default: stdout)")

    r = sub.add_parser("run", help="evaluate a scenario over its grid")
    common(r)
    r.add_argument("--format", choices=["json", "csv"])
    r.add_argument("--workers", type=int)
    r.set_defaults(func=cmd_run)

    v = sub.add_parser("verify", help="run a verification suite")
    v.add_argument("suite", choices=sorted(SUITES) + ["all"])
    v.add_argument("--seed", type=int, default=0)
    v.add_argument("--gw-file")
    v.add_argument("--out")
    v.set_defaults(func=cmd_verify)

    pt = sub.add_parser("potential", help="K_WP at one point, or K_Ber of a Siegel matrix")
    common(pt, config_required=False)
    pt.add_argument("--point", help='JSON list of [re, im] per coordinate, e.g. "[[0, 2]]"')
    pt.add_argument("--siegel", help="JSON g x g matrix of [re, im] entries")
    pt.add_argument("--gamma", help='JSON {"A": .., "B": .., "C": .., "D": ..} integer blocks')
    pt.set_defaults(func=cmd_potential)

    h = sub.add_parser("hessian", help="metric, eigenvalues and curvature at one point")
    common(h)
    h.add_argument("--point", required=True)
    h.add_argument("--step", type=float, help="base finite-difference step")
    h.set_defaults(func=cmd_hessian)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except DomainError as exc:
        print(f"domain error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
