import copy
import io
import json
import math
from importlib import resources

import numpy as np
import pytest

from wpstab.cli import main
from wpstab.errors import ConfigError
from wpstab.runner import (ResultRecord, SCHEMA_VERSION, read_json, render, run_scenario,
                           write_json)
from wpstab.scenario import ScenarioConfig, load_scenario, scenario_schema, shipped_scenarios


@pytest.fixture
def elliptic_raw():
    return copy.deepcopy(load_scenario("elliptic").raw)


def _light(name):
    raw = copy.deepcopy(load_scenario(name).raw)
    raw["compute"] = {"metric": False, "curvature": False}
    return ScenarioConfig.from_dict(raw)


def _write(tmp_path, data, name="cfg.json"):
    p = tmp_path / name
    p.write_text(json.dumps(data))
    return str(p)


def test_shipped_scenarios_load():
    assert set(shipped_scenarios()) == {"elliptic", "product_abelian", "split_abelian",
                                        "abelian_nfold", "quintic", "siegel_compare"}


def test_docs_schema_matches_package():
    docs = resources.files("wpstab").parent.parent / "docs" / "scenario.schema.json"
    assert json.loads(docs.read_text()) == scenario_schema()


@pytest.mark.parametrize("mutate, path", [
    (lambda d: d.pop("grid"), "<root>"),
    (lambda d: d.update(scenario="torus"), "scenario"),
    (lambda d: d["grid"]["axes"]["tau"].update(im=[-1.0, 2.0, 5]), "grid.axes.tau.im.0"),
    (lambda d: d["grid"]["axes"]["tau"].update(re=[1.0, -1.0, 3]), "grid.axes.tau.re"),
    (lambda d: d["basis"][0].update(ch={"nope": 1}), "basis.0.ch"),
    (lambda d: d["chart"].update(section="log"), "chart.section"),
    (lambda d: d.update(fd_step=-1), "fd_step"),
    (lambda d: d["output"].update(format="xml"), "output.format"),
    (lambda d: d.update(checks=["bergman"]) or d.pop("bergman"), "checks"),
    (lambda d: d.update(ring_file="no_such_ring"), "ring_file"),
])
def test_config_errors_carry_field_paths(elliptic_raw, mutate, path):
    mutate(elliptic_raw)
    with pytest.raises(ConfigError) as info:
        cfg = ScenarioConfig.from_dict(elliptic_raw)
        cfg.ring
        cfg.model
    assert info.value.path == path


def test_missing_files(tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        load_scenario(str(tmp_path / "absent.json"))
    with pytest.raises(ConfigError):
        load_scenario("absent_scenario")
    bad = tmp_path / "bad.json"
    bad.write_text("{")
    with pytest.raises(ConfigError, match="invalid JSON"):
        load_scenario(str(bad))


def test_elliptic_potential_column():
    cfg = _light("elliptic")
    for rec in run_scenario(cfg):
        tau = complex(*rec.coords[0])
        assert abs(rec.K_WP + math.log(2 * tau.imag)) < 1e-12
        assert rec.ok


def test_siegel_compare_residuals():
    recs = list(run_scenario(load_scenario("siegel_compare")))
    assert len(recs) == 200
    assert max(r.residuals["bergman"] for r in recs) <= 1e-9


def test_quintic_flags_points_without_aborting():
    recs = list(run_scenario(load_scenario("quintic")))
    assert len(recs) == 9
    bad = [r for r in recs if not r.ok]
    assert all(r.status == "domain_error" and r.message for r in bad)
    assert sum(r.ok for r in recs) >= 8


def test_empty_grid(tmp_path, elliptic_raw, capsys):
    elliptic_raw["grid"] = {"kind": "points", "points": []}
    path = _write(tmp_path, elliptic_raw)
    assert list(run_scenario(load_scenario(path))) == []
    assert main(["run", "--config", path]) == 0
    out = capsys.readouterr().out.splitlines()
    assert len(out) == 1 and out[0].startswith("index,status")


def test_csv_is_deterministic(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    for p in (a, b):
        assert main(["run", "--config", "product_abelian", "--seed", "7", "--out", str(p)]) == 0
    assert a.read_bytes() == b.read_bytes()
    c = tmp_path / "c.csv"
    main(["run", "--config", "product_abelian", "--seed", "8", "--out", str(c)])
    assert c.read_bytes() != a.read_bytes()


def test_csv_uses_full_precision():
    cfg = _light("elliptic")
    recs = list(run_scenario(cfg))[:3]
    rows = render(recs, cfg, "csv").splitlines()
    header = rows[0].split(",")
    k = header.index("K_WP")
    for rec, row in zip(recs, rows[1:]):
        assert float(row.split(",")[k]) == rec.K_WP


def test_json_round_trip():
    cfg = load_scenario("quintic")
    recs = list(run_scenario(cfg))
    buf = io.StringIO()
    write_json(recs, cfg, buf)
    buf.seek(0)
    back = read_json(buf)
    assert [r.to_dict() for r in back] == [r.to_dict() for r in recs]


def test_record_validation():
    with pytest.raises(ValueError):
        ResultRecord(0, [[0, 1]], K_WP=float("nan"))
    with pytest.raises(ValueError):
        ResultRecord.from_dict({"index": 0, "coords": [], "schema_version": SCHEMA_VERSION + 1})


def test_worker_pool_keeps_grid_order():
    cfg = load_scenario("product_abelian")
    serial = [r.to_dict() for r in run_scenario(cfg, workers=1)]
    pooled = [r.to_dict() for r in run_scenario(cfg, workers=4)]
    assert pooled == serial


def test_cli_verify(capsys):
    assert main(["verify", "gamma"]) == 0
    assert "[PASS]" in capsys.readouterr().out
    with pytest.raises(SystemExit) as info:
        main(["verify", "bogus"])
    assert info.value.code == 2


def test_cli_verify_failure_exit_code(monkeypatch, capsys):
    from wpstab import cli
    from wpstab.checks import CheckResult
    monkeypatch.setattr(cli, "run_suite", lambda *a, **k: [CheckResult("x", 1.0, 0.0, False)])
    assert main(["verify", "wpb"]) == 1
    assert "[FAIL]" in capsys.readouterr().out


def test_cli_config_error(tmp_path, elliptic_raw, capsys):
    elliptic_raw["grid"]["axes"]["tau"]["im"] = [-1.0, 1.0, 3]
    assert main(["run", "--config", _write(tmp_path, elliptic_raw)]) == 2
    err = capsys.readouterr().err
    assert "configuration error" in err and "grid.axes.tau.im.0" in err
    assert main(["run", "--config", str(tmp_path / "none.json")]) == 2


def test_cli_potential(capsys):
    assert main(["potential", "--config", "elliptic", "--point", "[[0.2, 1.5]]"]) == 0
    out = json.loads(capsys.readouterr().out)
    assert abs(out["K_WP"] + math.log(3.0)) < 1e-14
    assert abs(out["K_WP"] - out["K_Ber"]) < 1e-14
    assert main(["potential", "--config", "product_abelian", "--point", "[[0, 1], [0, 1], [0, 2]]"]) == 1
    assert main(["potential", "--config", "elliptic", "--point", "[1, 2]"]) == 2
    assert main(["potential"]) == 2


def test_cli_potential_siegel(capsys):
    M = json.dumps([[[0, 1], [0, 0]], [[0, 0], [0, 1]]])
    gamma = json.dumps({"A": [[0, 0], [0, 0]], "B": [[-1, 0], [0, -1]],
                        "C": [[1, 0], [0, 1]], "D": [[0, 0], [0, 0]]})
    assert main(["potential", "--siegel", M, "--gamma", gamma]) == 0
    out = json.loads(capsys.readouterr().out)
    assert abs(out["K_Ber"] + 2 * math.log(2)) < 1e-15
    assert out["transform_law_residual"] < 1e-14
    assert main(["potential", "--siegel", M, "--gamma", '{"A": [[2]]}']) == 2


def test_cli_hessian(capsys, tmp_path):
    out_file = tmp_path / "h.json"
    assert main(["hessian", "--config", "elliptic", "--point", "[[0, 2]]", "--out", str(out_file)]) == 0
    out = json.loads(out_file.read_text())
    assert abs(out["metric"][0][0][0] - 1 / 16) < 1e-9
    assert out["verdict"] == "positive-definite"
    assert abs(out["curvature"] + 4) < 1e-6


def test_cli_gw_override(tmp_path, capsys):
    gw = tmp_path / "gw.json"
    gw.write_text(json.dumps({"N": [0]}))
    assert main(["potential", "--config", "quintic", "--point", "[[0, 1.5]]", "--gw-file", str(gw)]) == 0
    K = json.loads(capsys.readouterr().out)["K_WP"]
    cfg = load_scenario("quintic")
    want = cfg.build_model().potential(cfg.section_at(np.array([1.5j])))
    assert abs(K - want) > 1e-6
    bad = tmp_path / "bad_gw.json"
    bad.write_text(json.dumps({"N": [1, 2], "d_max": 5}))
    assert main(["potential", "--config", "quintic", "--point", "[[0, 1.5]]", "--gw-file", str(bad)]) == 2
