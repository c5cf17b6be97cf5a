import json
import math

import pytest

from diffeocurv.cli import main, parse_expression
from diffeocurv.trigpoly import TrigPoly, to_spec


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_curvature_pure_modes(capsys):
    code, out, _ = run(capsys, "curvature", "--metric", "ab", "--a", "1", "--b", "1", "--u", "cos:1", "--v", "sin:1")
    assert code == 0
    rep = json.loads(out)
    k = 2 * math.pi
    assert rep["S"] == pytest.approx((1 - 0.5 * k * k) ** 2 * k * k / (1 + 4 * k * k))
    assert rep["sign"] == "+" and not rep["degenerate"]


def test_curvature_from_spec_file(capsys, tmp_path):
    path = tmp_path / "u.json"
    path.write_text(json.dumps(to_spec(TrigPoly.cos(1) + 0.5 * TrigPoly.sin(3))))
    code, out, _ = run(capsys, "curvature", "--metric", "hs", "--u", str(path), "--v", "sin:2")
    assert code == 0
    rep = json.loads(out)
    assert rep["K"] == pytest.approx(0.25)


def test_identical_fields_are_degenerate(capsys):
    code, out, _ = run(capsys, "curvature", "--metric", "ab", "--u", "cos:2", "--v", "cos:2")
    assert code == 0
    rep = json.loads(out)
    assert rep["degenerate"] and rep["K"] is None


def test_singular_constant_mode_exit_code(capsys):
    code, _, err = run(capsys, "curvature", "--metric", "ab", "--a", "0", "--b", "1",
                       "--u", "const:1+cos:1", "--v", "sin:1")
    assert code == 3
    assert "n=[0]" in err


def test_config_errors(capsys):
    assert run(capsys, "curvature", "--metric", "nope", "--u", "cos:1", "--v", "sin:1")[0] == 2
    assert run(capsys, "curvature", "--metric", "ab", "--u", "tan:1", "--v", "sin:1")[0] == 2
    assert run(capsys, "curvature", "--metric", "ab", "--u", "cos:1")[0] == 2
    with pytest.raises(SystemExit) as info:
        main(["curvature", "--bogus"])
    assert info.value.code == 2


def test_builtins(capsys):
    code, out, _ = run(capsys, "curvature", "--builtin", "l2-mixed")
    assert code == 0
    assert json.loads(out)["S"] == pytest.approx(-15 * math.pi ** 2 / 16)
    code, out, _ = run(capsys, "curvature", "--builtin", "negative-section", "--a", "5", "--b", "1")
    assert code == 0 and json.loads(out)["S"] < 0
    assert run(capsys, "curvature", "--builtin", "much-example:x")[0] == 2


def test_so3_curvature(capsys):
    code, out, _ = run(capsys, "curvature", "--metric", "so3", "--moments", "0.8,1,1.2", "--u", "0,1,0", "--v", "0,0,1")
    assert code == 0
    assert json.loads(out)["S"] == pytest.approx(0.5125)


def test_scan_ab_all_positive(capsys):
    code, out, err = run(capsys, "scan", "--metric", "ab", "--a", "1", "--b", "1", "--modes", "6")
    assert code == 0
    rows = out.strip().splitlines()
    assert rows[0] == "metric,params,p,q,S,K,sign"
    assert len(rows) == 1 + 66
    assert all(r.endswith(",+") for r in rows[1:])
    assert "positive=66 negative=0" in err


def test_scan_biharmonic_has_both_signs(capsys):
    code, _, err = run(capsys, "scan", "--metric", "lambda", "--lambda", "biharmonic", "--modes", "3")
    assert code == 0
    counts = dict(item.split("=") for item in err.split())
    assert int(counts["positive"]) > 0 and int(counts["negative"]) > 0


def test_scan_empty_grid(capsys):
    code, out, _ = run(capsys, "scan", "--metric", "ab", "--modes", "0")
    assert code == 0
    assert out == "metric,params,p,q,S,K,sign\n"


def test_scan_is_deterministic(capsys, tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    run(capsys, "scan", "--metric", "abc", "--a", "1", "--b", "0", "--c", "1", "--modes", "3", "--out", str(a))
    run(capsys, "scan", "--metric", "abc", "--a", "1", "--b", "0", "--c", "1", "--modes", "3", "--out", str(b))
    assert a.read_bytes() == b.read_bytes()


def test_geodesic_csv(capsys, tmp_path):
    out = tmp_path / "g.csv"
    code, _, _ = run(capsys, "geodesic", "--metric", "ch", "--u", "0.1*cos:1", "--modes", "16",
                     "--dt", "1e-2", "--T", "0.5", "--out", str(out))
    assert code == 0
    lines = out.read_text().splitlines()
    assert lines[0].startswith("t,energy,drift,c0,c1,s1")
    assert lines[-1].startswith("# breakdown=none")
    assert len(lines) == 1 + 51 + 1
    drift = max(float(line.split(",")[2]) for line in lines[1:-1])
    assert drift < 1e-6


def test_geodesic_burgers_breakdown_metadata(capsys):
    code, out, _ = run(capsys, "geodesic", "--metric", "burgers", "--u", "sin:1", "--modes", "64",
                       "--dt", "1e-4", "--T", "0.06")
    assert code == 0
    meta = out.strip().splitlines()[-1]
    t = float(meta.split("flow_map_breakdown=")[1])
    assert t == pytest.approx(1 / (6 * math.pi), rel=0.1)


def test_geodesic_inadmissible_state(capsys):
    assert run(capsys, "geodesic", "--metric", "hs", "--u", "const:1+cos:1")[0] == 3


def test_jacobi_rigid_growth(capsys):
    code, out, _ = run(capsys, "jacobi", "--metric", "rigid", "--moments", "1,2,3", "--u", "0,1,0",
                       "--v", "0.001,0,0", "--dt", "1e-2", "--T", "5")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "t,y_norm,z_norm,fd_gap"
    first = float(lines[1].split(",")[2])
    last = float(lines[-2].split(",")[2])
    assert last > 5 * first


def test_parse_expression():
    p = parse_expression("0.5*cos:1+sin:3+const:2", 1, 1.0)
    assert p.allclose(0.5 * TrigPoly.cos(1) + TrigPoly.sin(3) + 2.0)
    q = parse_expression("cos:1,2", 2, (1.0, 1.0))
    assert q.allclose(TrigPoly.cos((1, 2)))


def test_verify_filter_and_json(capsys, tmp_path):
    out = tmp_path / "v.json"
    code, text, _ = run(capsys, "verify", "--only", "h1-sphere", "--out", str(out))
    assert code == 0
    assert "h1-sphere" in text and "PASS" in text
    rep = json.loads(out.read_text())
    assert rep["passed"] and [c["id"] for c in rep["checks"]] == ["h1-sphere"]


def test_verify_overtight_tolerance_fails(capsys):
    code, text, _ = run(capsys, "verify", "--only", "ab-christoffel", "--tol", "1e-15")
    assert code == 1
    assert "FAIL" in text


def test_verify_unknown_filter(capsys):
    assert run(capsys, "verify", "--only", "no-such-check")[0] == 2
