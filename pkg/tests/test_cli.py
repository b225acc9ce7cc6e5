import json
import math

import pytest

from fockbound import cli
from fockbound.geometry import AngularProfile, IntervalUnion, disc, dump_set, load_set
from fockbound.specfun import ConvergenceError


def _write(path, doc):
    path.write_text(json.dumps(doc))
    return str(path)


def _symbol(tmp_path, pieces, name="sym.json"):
    return _write(tmp_path / name, {"kind": "step", "center": [0, 0],
                                    "pieces": [{"a": a, "b": b, "value": v} for a, b, v in pieces]})


def _set(tmp_path, s, name="set.json"):
    path = tmp_path / name
    dump_set(s, path)
    return str(path)


def _run(capsys, *argv):
    code = cli.main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_toeplitz_norm_tight_indicator(tmp_path, capsys):
    code, out, _ = _run(capsys, "toeplitz-norm", "--symbol", _symbol(tmp_path, [(0, 1, 1.0)]))
    rep = json.loads(out)
    assert code == 0
    assert rep["norm"] == pytest.approx(1 - math.exp(-math.pi), abs=1e-14)
    assert rep["bound"] == pytest.approx(rep["norm"], abs=1e-14)
    assert rep["seed"] == 0 and rep["config"]["command"] == "toeplitz-norm"


def test_toeplitz_norm_malformed_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text('{"kind": "step", "pieces": [')
    code, out, err = _run(capsys, "toeplitz-norm", "--symbol", str(bad))
    assert code == 1 and out == ""
    assert "line 1" in err


def test_toeplitz_norm_missing_field(tmp_path, capsys):
    path = _write(tmp_path / "s.json", {"kind": "step", "pieces": [{"a": 0, "b": 1}]})
    code, _, err = _run(capsys, "toeplitz-norm", "--symbol", path)
    assert code == 1 and "value" in err


def test_toeplitz_norm_zero_symbol(tmp_path, capsys):
    code, out, _ = _run(capsys, "toeplitz-norm", "--symbol", _symbol(tmp_path, [(0, 1, 0.0)]))
    rep = json.loads(out)
    assert code == 0 and rep["norm"] == 0 and rep["bound"] is None
    assert any("zero symbol" in n for n in rep["notes"])


def test_lemma_audit_default(capsys):
    code, out, _ = _run(capsys, "lemma-audit", "--trials", "50")
    rep = json.loads(out)
    assert code == 0 and rep["violations"] == 0 and rep["seed"] == 0


def test_lemma_audit_equality_row(capsys):
    code, out, _ = _run(capsys, "lemma-audit", "--n-max", "0", "--interval", "0:2.5",
                        "--trials", "0", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0
    assert lines[0] == "kind,trial,n,lhs,rhs,slack,holds"
    assert len(lines) == 2
    _, _, n, lhs, rhs, slack, holds = lines[1].split(",")
    assert n == "0" and abs(float(lhs) - float(rhs)) < 1e-15 and holds == "True"


def test_negative_tolerance_is_config_error(capsys):
    code, out, err = _run(capsys, "lemma-audit", "--tol=-1e-3")
    assert code == 1 and out == "" and "--tol" in err


def test_lemma_audit_seed_changes_trials(capsys):
    _, a, _ = _run(capsys, "lemma-audit", "--trials", "5", "--seed", "1")
    _, b, _ = _run(capsys, "lemma-audit", "--trials", "5", "--seed", "2")
    _, c, _ = _run(capsys, "lemma-audit", "--trials", "5", "--seed", "1")
    assert a == c and a != b
    assert json.loads(a)["seed"] == 1


def test_threads_do_not_change_values(tmp_path, capsys):
    _, one, _ = _run(capsys, "lemma-audit", "--trials", "40", "--threads", "1")
    _, four, _ = _run(capsys, "lemma-audit", "--trials", "40", "--threads", "4")
    r1, r4 = json.loads(one)["rows"], json.loads(four)["rows"]
    assert len(r1) == len(r4)
    assert max(abs(x["lhs"] - y["lhs"]) for x, y in zip(r1, r4)) <= 1e-13
    path = _set(tmp_path, disc((2, 0), 1))
    _, c1, _ = _run(capsys, "concentration", "--set", path, "--n-max", "8")
    _, c4, _ = _run(capsys, "concentration", "--set", path, "--n-max", "8", "--threads", "3")
    for x, y in zip(json.loads(c1)["rows"], json.loads(c4)["rows"]):
        assert abs(x["per_ray_average"] - y["per_ray_average"]) <= 1e-13


def test_concentration_centered_disc(tmp_path, capsys):
    code, out, _ = _run(capsys, "concentration", "--set", _set(tmp_path, disc((0, 0), 1)))
    rep = json.loads(out)
    assert code == 0
    assert rep["rows"][0]["exact"] == pytest.approx(rep["bound"], abs=1e-14)


def test_concentration_off_center_disc(tmp_path, capsys):
    code, out, _ = _run(capsys, "concentration", "--set", _set(tmp_path, disc((2, 0), 1)))
    rep = json.loads(out)
    assert code == 0
    assert all(r["per_ray_average"] < r["bound"] for r in rep["rows"])


def test_concentration_coarse_profile_warns(tmp_path, capsys):
    prof = AngularProfile((0, 0), tuple(IntervalUnion(((0.0, 1.0),)) for _ in range(8)))
    code, out, _ = _run(capsys, "concentration", "--set", _set(tmp_path, prof), "--n-max", "3")
    rep = json.loads(out)
    assert code == 0 and rep["K"] == 8
    assert any("coarse" in w for w in rep["warnings"])


def test_concentration_svg(tmp_path, capsys):
    code, out, _ = _run(capsys, "concentration", "--set", _set(tmp_path, disc((1, 1), 0.5)),
                        "--format", "svg", "--n-max", "5")
    assert code == 0 and out.startswith("<svg") and "polyline" in out and "stroke-dasharray" in out


def test_localization_centered_disc(tmp_path, capsys):
    code, out, _ = _run(capsys, "localization", "--set", _set(tmp_path, disc((0, 0), 1)))
    rep = json.loads(out)
    assert code == 0
    assert max(rep["eigenvalues"]) == pytest.approx(1 - math.exp(-math.pi), abs=1e-14)
    im = rep["matrix"]["entries_re"]
    assert all(im[i][j] == 0 for i in range(21) for j in range(21) if i != j)


def test_localization_off_center(tmp_path, capsys):
    code, out, _ = _run(capsys, "localization", "--set", _set(tmp_path, disc((2, 0), 1)),
                        "--n-max", "10")
    rep = json.loads(out)
    assert code == 0 and all(rep["checks"].values())


def test_localization_rejects_large_n(tmp_path, capsys):
    code, _, err = _run(capsys, "localization", "--set", _set(tmp_path, disc((0, 0), 1)),
                        "--n-max", "1000")
    assert code == 1 and "certified" in err


def test_sparse_omega(tmp_path, capsys):
    out_set = tmp_path / "sparse.json"
    code, out, _ = _run(capsys, "sparse-omega", "--trials", "20", "--count", "10",
                        "--set-out", str(out_set))
    rep = json.loads(out)
    assert code == 0
    assert rep["certificate"]["guaranteed_bound"] == pytest.approx(0.1)
    assert rep["audit"]["lhs"] <= 0.1
    assert len(load_set(out_set).discs) == 10


def test_sparse_omega_single_disc(capsys):
    code, out, _ = _run(capsys, "sparse-omega", "--trials", "5", "--count", "1")
    rep = json.loads(out)
    assert code == 0 and rep["measure"] < 0.1


def test_sparse_omega_rejects_eps_zero(capsys):
    code, _, err = _run(capsys, "sparse-omega", "--eps", "0")
    assert code == 1 and "eps" in err


def test_sparse_omega_has_no_svg(capsys):
    code, _, _ = _run(capsys, "sparse-omega", "--trials", "1", "--count", "1", "--format", "svg")
    assert code == 1


def test_bargmann_check_small(capsys):
    code, out, _ = _run(capsys, "bargmann-check", "--n-max", "2", "--format", "csv")
    lines = out.strip().splitlines()
    assert code == 0 and len(lines) == 4 and lines[0].startswith("n,bargmann_rel_error")


def test_audit_failure_exit_code(capsys):
    # a tolerance below the quadrature floor turns the check into a failure
    code, out, err = _run(capsys, "bargmann-check", "--n-max", "1", "--tol", "1e-300")
    assert code == 2 and "audit failed" in err
    assert json.loads(out)["holds"] is False


def test_nonconvergence_exit_code(monkeypatch, capsys):
    def boom(config):
        raise ConvergenceError("forced")
    monkeypatch.setitem(cli.COMMANDS, "lemma-audit", boom)
    code, _, err = _run(capsys, "lemma-audit")
    assert code == 3 and "non-convergence" in err


def test_missing_file(capsys):
    code, _, err = _run(capsys, "concentration", "--set", "/nonexistent/set.json")
    assert code == 1 and err


def test_out_file(tmp_path, capsys):
    target = tmp_path / "report.json"
    code, out, _ = _run(capsys, "lemma-audit", "--trials", "1", "--out", str(target))
    assert code == 0 and out == ""
    assert json.loads(target.read_text())["seed"] == 0


def test_config_validation():
    with pytest.raises(cli.ConfigError):
        cli.ExperimentConfig("lemma-audit", angles=4).validate()
    with pytest.raises(cli.ConfigError):
        cli.ExperimentConfig("lemma-audit", threads=0).validate()
    cli.ExperimentConfig("lemma-audit").validate()
