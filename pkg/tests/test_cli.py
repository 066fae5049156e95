import json
import math

import pytest

from detratio.cli import main
from detratio.config import config_to_dict, parse_complex, parse_config
from detratio.errors import ConfigError

PI = math.pi


def write_config(tmp_path, data, name="cfg.json"):
    path = tmp_path / name
    path.write_text(json.dumps(data))
    return str(path)


def base_config(**overrides):
    data = {
        "weight": {"kind": "disk-flat", "radius": 1.0},
        "system": {"max_degree": 5},
        "query": {"N": 1, "mus": [], "epsbars": [[2.0, 0.0]]},
        "oracle": {"method": "tensor-quadrature", "radial_nodes": 48,
                   "angular_nodes": 64, "seed": 5},
        "output": {"format": "json", "path": None},
    }
    data.update(overrides)
    return data


def run(args):
    return main(args)


def read_json(path):
    with open(path) as handle:
        return json.load(handle)


def test_ortho_gaussian_norms(tmp_path):
    cfg = write_config(tmp_path, base_config(
        weight={"kind": "gaussian", "scale": 1.0},
        system={"max_degree": 3}))
    out = tmp_path / "ortho.json"
    assert run(["ortho", "--config", cfg, "--out", str(out)]) == 0
    report = read_json(out)
    assert report["norms"] == pytest.approx([PI, PI, 2 * PI, 6 * PI])
    assert report["orthogonality_residual_max"] < 1e-8


def test_ortho_disk_norms(tmp_path):
    cfg = write_config(tmp_path, base_config(system={"max_degree": 2}))
    out = tmp_path / "ortho.json"
    assert run(["ortho", "--config", cfg, "--out", str(out)]) == 0
    report = read_json(out)
    assert report["norms"] == pytest.approx([PI, PI / 2, PI / 3])


def test_malformed_config_exits_2(tmp_path, capsys):
    data = base_config()
    del data["weight"]["kind"]
    cfg = write_config(tmp_path, data)
    assert run(["ortho", "--config", cfg]) == 2
    assert "weight.kind" in capsys.readouterr().err


def test_eval_disk_anchor(tmp_path):
    cfg = write_config(tmp_path, base_config())
    out = tmp_path / "eval.json"
    assert run(["eval", "--config", cfg, "--out", str(out)]) == 0
    report = read_json(out)
    assert report["value"]["re"] == pytest.approx(0.5, abs=1e-12)
    assert report["value"]["im"] == pytest.approx(0.0, abs=1e-12)
    assert report["path_checks"][0]["abs_delta"] < 1e-12


def test_eval_gaussian_heine(tmp_path):
    cfg = write_config(tmp_path, base_config(
        weight={"kind": "gaussian", "scale": 1.0},
        query={"N": 2, "mus": ["1+1i"], "epsbars": []}))
    out = tmp_path / "eval.json"
    assert run(["eval", "--config", cfg, "--out", str(out)]) == 0
    report = read_json(out)
    assert report["value"]["re"] == pytest.approx(0.0, abs=1e-12)
    assert report["value"]["im"] == pytest.approx(2.0, rel=1e-12)


def test_eval_m_exceeds_n_exits_4(tmp_path, capsys):
    cfg = write_config(tmp_path, base_config(
        query={"N": 1, "mus": [], "epsbars": [[2.0, 0.0], [3.0, 0.0]]}))
    assert run(["eval", "--config", cfg]) == 4
    assert "exceed" in capsys.readouterr().err


def test_eval_depth_constraint_exits_4(tmp_path):
    cfg = write_config(tmp_path, base_config(
        system={"max_degree": 1},
        query={"N": 2, "mus": [[1.5, 0.0]], "epsbars": []}))
    assert run(["eval", "--config", cfg]) == 4


def test_verify_default_grid_passes(tmp_path):
    cfg = write_config(tmp_path, base_config(
        verify={"Ns": [1, 2], "Ls": [0, 1, 2], "tolerance": 1e-6,
                "mus_pool": ["1.7+0.4i", [-1.2, 1.5]],
                "eps_pool": [[2.0, 0.3], [-1.8, 1.1]]}))
    out = tmp_path / "verify.json"
    assert run(["verify", "--config", cfg, "--out", str(out)]) == 0
    report = read_json(out)
    assert report["summary"]["failing_cases"] == []
    assert report["summary"]["total"] == 15
    case = report["cases"][1]
    assert {"formula", "oracle", "oracle_stderr", "seed", "passed"} <= set(case)


def test_verify_corrupted_prefactor_names_cases(tmp_path):
    cfg = write_config(tmp_path, base_config(
        verify={"Ns": [1], "Ls": [0, 1], "tolerance": 1e-6,
                "corrupt_factor": 1.001,
                "mus_pool": ["1.7+0.4i"], "eps_pool": [[2.0, 0.3]]}))
    out = tmp_path / "verify.json"
    assert run(["verify", "--config", cfg, "--out", str(out)]) == 1
    report = read_json(out)
    assert "N=1 L=0 M=1" in report["summary"]["failing_cases"]


def test_verify_mc_n3(tmp_path):
    cfg = write_config(tmp_path, base_config(
        weight={"kind": "gaussian", "scale": 1.0},
        system={"max_degree": 6},
        oracle={"method": "monte-carlo", "samples": 200000, "seed": 5},
        verify={"Ns": [3], "Ls": [0, 1], "Ms": [0, 1],
                "mus_pool": ["1.3+0.8i"], "eps_pool": [[4.6, 0.5]]}))
    out = tmp_path / "verify.json"
    assert run(["verify", "--config", cfg, "--out", str(out)]) == 0
    report = read_json(out)
    for case in report["cases"]:
        assert case["method"] == "monte-carlo"
        assert case["passed"]
        assert case["samples"] == 200000


def test_scan_inverse_column(tmp_path):
    cfg = write_config(tmp_path, base_config(
        scan={"axis": "epsbars[0]", "start": 1.5, "stop": 5.0, "count": 8}))
    out = tmp_path / "scan.csv"
    assert run(["scan", "--config", cfg, "--format", "csv",
                "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert lines[0].startswith("axis_re,axis_im,value_re")
    rows = [line.split(",") for line in lines[1:]]
    assert len(rows) == 8
    values = [float(r[2]) for r in rows]
    eps = [float(r[0]) for r in rows]
    for e, v in zip(eps, values):
        assert v == pytest.approx(1.0 / e, rel=1e-10)
    assert values == sorted(values, reverse=True)


def test_scan_heine_column(tmp_path):
    cfg = write_config(tmp_path, base_config(
        weight={"kind": "gaussian", "scale": 1.0},
        query={"N": 2, "mus": [[1.0, 0.0]], "epsbars": []},
        scan={"axis": "mus[0]", "start": 0.5, "stop": 2.0, "count": 4}))
    out = tmp_path / "scan.csv"
    assert run(["scan", "--config", cfg, "--format", "csv", "--out", str(out)]) == 0
    rows = [line.split(",") for line in out.read_text().strip().splitlines()[1:]]
    for row in rows:
        mu, val = float(row[0]), float(row[2])
        assert val == pytest.approx(mu ** 2, rel=1e-12)


def test_scan_empty_grid_header_only(tmp_path):
    cfg = write_config(tmp_path, base_config(
        scan={"axis": "epsbars[0]", "start": 1.5, "stop": 5.0, "count": 0}))
    out = tmp_path / "scan.csv"
    assert run(["scan", "--config", cfg, "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 1


def test_scan_rows_flagged_not_dropped(tmp_path):
    # sweeping epsbars onto a duplicate of a fixed second pole must flag
    cfg = write_config(tmp_path, base_config(
        query={"N": 2, "mus": [], "epsbars": [[2.0, 0.0], [3.0, 0.0]]},
        scan={"axis": "epsbars[0]", "values": [[2.5, 0.0], [3.0, 0.0]]}))
    out = tmp_path / "scan.csv"
    assert run(["scan", "--config", cfg, "--format", "csv", "--out", str(out)]) == 0
    lines = out.read_text().strip().splitlines()
    assert len(lines) == 3
    assert lines[1].endswith("ok")
    assert "error" in lines[2]


def test_config_round_trip(tmp_path):
    data = base_config(
        verify={"Ns": [1], "mus_pool": ["1+2i"], "eps_pool": [[2.0, 0.3]]},
        scan={"axis": "epsbars[0]", "values": ["1.5"]})
    rc = parse_config(data)
    again = parse_config(config_to_dict(rc))
    assert rc == again


def test_report_determinism(tmp_path):
    cfg = write_config(tmp_path, base_config())
    out1, out2 = tmp_path / "a.json", tmp_path / "b.json"
    assert run(["eval", "--config", cfg, "--out", str(out1), "--seed", "9"]) == 0
    assert run(["eval", "--config", cfg, "--out", str(out2), "--seed", "9"]) == 0
    assert out1.read_bytes() == out2.read_bytes()


def test_parse_complex_forms():
    assert parse_complex("1.5+2i", "x") == 1.5 + 2j
    assert parse_complex("-0.5i", "x") == -0.5j
    assert parse_complex("2", "x") == 2.0
    assert parse_complex([1.0, -2.0], "x") == 1 - 2j
    assert parse_complex(3, "x") == 3.0
    with pytest.raises(ConfigError):
        parse_complex("zebra", "x")
    with pytest.raises(ConfigError):
        parse_complex([1.0], "x")


def test_unknown_weight_kind(tmp_path):
    data = base_config()
    data["weight"]["kind"] = "lorentzian"
    cfg = write_config(tmp_path, data)
    assert run(["ortho", "--config", cfg]) == 2


def test_shifted_gaussian_config(tmp_path):
    cfg = write_config(tmp_path, base_config(
        weight={"kind": "shifted-gaussian", "center": [0.4, 0.3], "scale": 1.0},
        system={"max_degree": 3},
        query={"N": 1, "mus": ["1+0.5i"], "epsbars": []}))
    out = tmp_path / "eval.json"
    assert run(["eval", "--config", cfg, "--out", str(out)]) == 0
    # Heine: pi_1(mu) = mu - c
    report = read_json(out)
    assert report["value"]["re"] == pytest.approx(0.6, rel=1e-9)
    assert report["value"]["im"] == pytest.approx(0.2, rel=1e-9)
