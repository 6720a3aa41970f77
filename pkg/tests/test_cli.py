import io
import json
import math
import subprocess
import sys

import numpy as np
import pytest

from puritybounds import gaussian as gs
from puritybounds.cli import main

SMALL_JC = ["jc", "--spin-j", "2", "--n-max", "16", "--alpha", str(math.sqrt(2)), "0",
            "--t-max", "10", "--steps", "100"]


def run(argv):
    out = io.StringIO()
    code = main(argv, out=out)
    return code, out.getvalue()


def parse_csv(text):
    lines = text.strip().split("\n")
    header = lines[0].split(",")
    rows = [line.split(",") for line in lines[1:]]
    return header, rows


def test_jc_csv_shape_and_bounds():
    code, text = run(SMALL_JC)
    assert code == 0
    header, rows = parse_csv(text)
    assert header == ["t", "purity", "autocorr4", "mirror4", "schmidt_lower",
                      "sandwich_upper", "reduced_fidelity_sq", "best_reference"]
    assert len(rows) == 101 and all(len(r) == len(header) for r in rows)
    data = np.array([[float(x) for x in r[:-1]] for r in rows])
    pur = data[:, 1]
    for col in (2, 3, 4, 6):
        assert np.all(data[:, col] <= pur + 1e-9)
    assert np.all(pur <= data[:, 5] + 1e-9)
    assert {r[-1] for r in rows} <= {"initial", "mirror"}


def test_jc_uncoupled_purity_is_one():
    code, text = run(SMALL_JC + ["--g", "0"])
    assert code == 0
    _, rows = parse_csv(text)
    assert all(abs(float(r[1]) - 1.0) < 1e-10 for r in rows)


def test_jc_deterministic_and_round_trip(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(SMALL_JC + ["--seed", "7", "--output", str(a)]) == 0
    assert main(SMALL_JC + ["--seed", "7", "--output", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    # 17 significant digits round-trip doubles exactly
    _, rows = parse_csv(a.read_text())
    for r in rows[:20]:
        for x in r[:-1]:
            assert format(float(x), ".17g") == x


def test_config_file_and_flag_override(tmp_path):
    cfg = tmp_path / "run.json"
    cfg.write_text(json.dumps({"spin_j": 2, "n_max": 16, "alpha": [math.sqrt(2), 0],
                               "t_max": 10, "steps": 40, "g": 0.0}))
    code, text = run(["jc", "--config", str(cfg)])
    _, rows = parse_csv(text)
    assert code == 0 and len(rows) == 41
    assert abs(float(rows[-1][1]) - 1.0) < 1e-10
    code, text = run(["jc", "--config", str(cfg), "--steps", "10", "--g", "0.3"])
    _, rows = parse_csv(text)
    assert code == 0 and len(rows) == 11
    assert float(rows[-1][1]) < 0.999


@pytest.mark.parametrize("argv", [
    ["jc", "--steps", "0"],
    ["jc", "--bogus"],
    ["jc", "--omega", "nan"],
    ["jc", "--omega", "abc"],
    ["nosuch"],
    [],
    ["verify", "--dims", "2by2"],
    ["verify", "--samples", "0"],
    ["gaussian"],
    ["gaussian", "--a", "[[1, 2]]"],
])
def test_usage_errors_exit_one(argv):
    try:
        code = main(argv, out=io.StringIO())
    except SystemExit as exc:
        code = exc.code
    assert code == 1


def test_bad_config_file(tmp_path):
    cfg = tmp_path / "bad.json"
    cfg.write_text('{"omega": 1, "unknown_key": 3}')
    assert main(["jc", "--config", str(cfg)], out=io.StringIO()) == 1
    assert main(["jc", "--config", str(tmp_path / "missing.json")], out=io.StringIO()) == 1


def test_jc_contract_exit_three(capsys):
    assert main(["jc", "--n-max", "4"], out=io.StringIO()) == 3
    assert "n_max" in capsys.readouterr().err
    assert main(["jc", "--spin-j", "0.3"], out=io.StringIO()) == 3


def _pairs(m):
    return [[[float(np.real(x)), float(np.imag(x))] for x in row] for row in np.asarray(m)]


def test_gaussian_block_diagonal(tmp_path):
    cfg = tmp_path / "g.json"
    cfg.write_text(json.dumps({"d1": 1, "d2": 1, "a": _pairs(np.diag([1j, 2j]))}))
    code, text = run(["gaussian", "--config", str(cfg)])
    vals = dict(line.split("=") for line in text.strip().split("\n"))
    assert code == 0
    assert float(vals["purity"]) == pytest.approx(1.0, abs=1e-12)
    assert float(vals["optimal_cross_correlation"]) == pytest.approx(1.0, abs=1e-12)


def test_gaussian_matches_library(tmp_path):
    a = np.array([[1j, 0.3], [0.3, 1j]])
    b = np.diag([2j, 1j])
    code, text = run(["gaussian", "--a", json.dumps(_pairs(a)), "--b", json.dumps(_pairs(b))])
    vals = dict(line.split("=") for line in text.strip().split("\n"))
    shape = gs.GaussianShape(1, 1, a)
    assert code == 0
    assert float(vals["purity"]) == gs.purity_gaussian(shape)
    assert float(vals["cross_correlation"]) == gs.cross_correlation_gaussian(shape, gs.GaussianShape(1, 1, b))
    assert float(vals["optimal_cross_correlation"]) == gs.cross_correlation_gaussian(
        shape, gs.optimal_reference(shape))
    assert float(vals["slack"]) > 0 and float(vals["optimal_slack"]) > 0


def test_gaussian_contract_exits(capsys):
    bad_a = json.dumps(_pairs(np.diag([1j, -2j])))
    assert main(["gaussian", "--a", bad_a], out=io.StringIO()) == 3
    assert "smallest eigenvalue -2" in capsys.readouterr().err
    a = json.dumps(_pairs(np.array([[1j, 0.3], [0.3, 1j]])))
    b = json.dumps(_pairs(np.array([[1j, 0.1], [0.1, 1j]])))
    assert main(["gaussian", "--a", a, "--b", b], out=io.StringIO()) == 3
    assert "block diagonal" in capsys.readouterr().err
    assert main(["gaussian", "--a", a, "--hbar", "-1"], out=io.StringIO()) == 3


def test_verify_smoke():
    code, text = run(["verify", "--samples", "1", "--dims", "2x2,3x4"])
    assert code == 0
    lines = text.strip().split("\n")
    assert lines[-1].startswith("properties=") and lines[-1].endswith("failed=0")
    assert any(line.startswith("bipartite.theorem[3x4]") for line in lines)
    assert all(line.rstrip().endswith("PASS") for line in lines[:-1])


def test_verify_corrupted_bound_fails():
    code, text = run(["verify", "--samples", "2", "--dims", "2x2", "--corrupt", "bipartite.theorem[2x2]"])
    assert code == 2
    failing = [line for line in text.split("\n") if line.rstrip().endswith("FAIL")]
    assert len(failing) == 1 and failing[0].startswith("bipartite.theorem[2x2]")
    assert "failing: bipartite.theorem[2x2]" in text


def test_module_entry_point():
    res = subprocess.run([sys.executable, "-m", "puritybounds", "gaussian", "--a",
                          "[[[0,1],[0,0]],[[0,0],[0,1]]]"], capture_output=True, text=True)
    assert res.returncode == 0 and "purity=1" in res.stdout
