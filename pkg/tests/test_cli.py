# tests/test_cli.py

import json

import numpy as np
import pytest

from rmx import catalog
from rmx.cli import main
from rmx.tensorcore import Tensor2


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_eval_yang(capsys):
    code, out = run(capsys, "eval", "--solution", "yang", "--y", "2.0")
    assert code == 0
    d = json.loads(out)
    t = Tensor2.from_json_dict(d["tensor"])
    # (1/2) * (1/2) h(x)h coefficient at the e11(x)e11 Kronecker slot
    assert abs(t.kron()[0, 0] - 0.25) < 1e-15


def test_eval_yang_pole_exit_code(capsys):
    code, _ = run(capsys, "eval", "--solution", "yang", "--y", "0")
    assert code == 2


def test_eval_engine_matches_pre_gauge_form(capsys):
    code, out = run(capsys, "eval", "--curve", "nodal", "--rank", "2",
                    "--deg", "1", "--v1", "1", "--v2", "2", "--y1", "1",
                    "--y2", "3")
    assert code == 0
    t = Tensor2.from_json_dict(json.loads(out)["tensor"])
    want = catalog.nodal21_multiplicative(2.0, 1.0, 3.0)
    assert (t - want).norm() < 1e-12


def test_eval_complex_argument_parsing(capsys):
    code, out = run(capsys, "eval", "--solution", "ell21", "--tau", "0,1.1",
                    "--v", "0.21,0.03", "--y", "0.4")
    assert code == 0
    t = Tensor2.from_json_dict(json.loads(out)["tensor"])
    want = catalog.get("ell21", tau=1.1j).evaluator(0.21 + 0.03j, 0.4)
    assert (t - want).norm() < 1e-12


def test_eval_missing_parameters(capsys):
    code, _ = run(capsys, "eval", "--solution", "rat21", "--v", "0.5")
    assert code == 2


def test_eval_unknown_solution(capsys):
    code, _ = run(capsys, "eval", "--solution", "nope", "--y", "1")
    assert code == 2


def test_verify_aybe_pass(capsys):
    code, out = run(capsys, "verify", "--identity", "aybe", "--solution",
                    "rat21", "--samples", "10", "--tol", "1e-9")
    assert code == 0
    assert json.loads(out)["passed"] is True


def test_verify_failure_exit_code(capsys):
    # absurdly tight tolerance forces an identity failure report
    code, out = run(capsys, "verify", "--identity", "aybe", "--solution",
                    "rat21", "--samples", "5", "--tol", "1e-30")
    assert code == 1
    assert json.loads(out)["passed"] is False


def test_verify_divergence_exit_code(capsys):
    code, out = run(capsys, "verify", "--identity", "limit", "--solution",
                    "trg20_semistable")
    assert code == 1
    assert json.loads(out)["divergence"] is True


def test_verify_bad_identity_usage_error(capsys):
    with pytest.raises(SystemExit) as exc:
        run(capsys, "verify", "--identity", "nonsense", "--solution", "yang")
    assert exc.value.code == 2


def test_verify_qybe(capsys):
    code, out = run(capsys, "verify", "--identity", "qybe", "--solution",
                    "trg21", "--v0", "0.4", "--samples", "10")
    assert code == 0


def test_verify_casimir(capsys):
    code, out = run(capsys, "verify", "--identity", "casimir", "--solution",
                    "cherednik")
    assert code == 0
    d = json.loads(out)
    assert abs(d["alpha"][0] - 1.0) < 1e-8


def test_verify_laurent(capsys):
    code, out = run(capsys, "verify", "--identity", "laurent", "--solution",
                    "ell21")
    assert code == 0
    d = json.loads(out)
    assert abs(d["r_minus1_identity_component"][0] - 0.25) < 1e-7


def test_canon_nodal_3_2(capsys):
    code, out = run(capsys, "canon", "--type", "nodal", "--n1", "3", "--n2",
                    "2", "--lambda", "2")
    assert code == 0
    d = json.loads(out)
    m = np.array([[complex(re, im) for re, im in row] for row in d["matrix"]])
    want = np.zeros((5, 5), dtype=complex)
    want[0, 1] = want[1, 3] = want[2, 4] = want[3, 2] = 1
    want[4, 0] = 2
    assert np.array_equal(m, want)
    assert d["endo_dimension"] == 1


def test_canon_cusp_lambda_zero(capsys):
    code, out = run(capsys, "canon", "--type", "cusp", "--n1", "1", "--n2",
                    "1", "--lambda", "0")
    assert code == 0
    d = json.loads(out)
    m = np.array([[complex(re, im) for re, im in row] for row in d["matrix"]])
    assert np.array_equal(m, np.array([[0, 1], [0, 0]]))


def test_canon_gcd_error(capsys):
    code, _ = run(capsys, "canon", "--type", "nodal", "--n1", "2", "--n2",
                  "4", "--lambda", "1")
    assert code == 2


def test_sweep_degeneration_decreasing(capsys):
    code, out = run(capsys, "sweep", "--kind", "degeneration", "--grid",
                    "1e2,1e3,1e4,1e5")
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "t,max_error"
    errs = [float(l.split(",")[1]) for l in lines[1:]]
    assert errs == sorted(errs, reverse=True)
    assert errs[-1] < 1e-6


def test_sweep_limit_stabilizes(capsys):
    code, out = run(capsys, "sweep", "--kind", "limit", "--solution", "rat21",
                    "--grid", "1e-1,1e-2,1e-3,1e-4")
    assert code == 0
    lines = out.strip().splitlines()
    deltas = [float(l.split(",")[2]) for l in lines[1:-1]]
    assert deltas == sorted(deltas, reverse=True)


def test_sweep_empty_grid(capsys):
    code, _ = run(capsys, "sweep", "--kind", "degeneration", "--grid", "")
    assert code == 2


def test_json_output_reproducible(capsys, tmp_path):
    f1, f2 = tmp_path / "a.json", tmp_path / "b.json"
    for f in (f1, f2):
        code = main(["verify", "--identity", "unitarity", "--solution",
                     "trg21", "--samples", "8", "--seed", "7",
                     "--output", str(f)])
        assert code == 0
    assert f1.read_bytes() == f2.read_bytes()


def test_rmx_seed_env(capsys, monkeypatch):
    monkeypatch.setenv("RMX_SEED", "991")
    code, out = run(capsys, "verify", "--identity", "unitarity", "--solution",
                    "yang" if False else "trg21", "--samples", "5")
    assert json.loads(out)["seed"] == 991


def test_conventions_block(capsys):
    code, out = run(capsys, "eval", "--solution", "yang", "--y", "1.5",
                    "--conventions")
    d = json.loads(out)
    assert "kron" in d["conventions"]["serialization"].lower() \
        or "Kronecker" in d["conventions"]["serialization"]


def test_g2_g3_curve_dispatch(capsys):
    code, out = run(capsys, "eval", "--g2", "3", "--g3", "1", "--rank", "2",
                    "--deg", "1", "--v1", "1", "--v2", "2", "--y1", "1",
                    "--y2", "3")
    assert code == 0
    assert json.loads(out)["solution"] == "engine-nodal(2,1)"
    code, out = run(capsys, "eval", "--g2", "0", "--g3", "0", "--rank", "2",
                    "--deg", "1", "--v1", "0", "--v2", "1.5", "--y1", "0.2",
                    "--y2", "0.9")
    assert json.loads(out)["solution"] == "engine-cuspidal(2,1)"
    # smooth curve without an explicit tau: usage error (no modular inversion)
    code, _ = run(capsys, "eval", "--g2", "4", "--g3", "0", "--rank", "2",
                  "--deg", "1", "--v1", "0.1", "--v2", "0.4", "--y1", "0.1",
                  "--y2", "0.3")
    assert code == 2


def test_console_script_entry_point():
    import subprocess
    import sys
    r = subprocess.run([sys.executable, "-m", "rmx.cli", "eval", "--solution",
                        "yang", "--y", "1.0"], capture_output=True, text=True)
    assert r.returncode == 0
    assert json.loads(r.stdout)["solution"] == "yang"
