import csv
import io
import json
import math

import numpy as np
import pytest

from normgate import curves
from normgate.cli import main, parse_complex
from normgate.curves import ParamSet
from normgate.phicrit import LogPhi, TablePhi


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def read_rows(text):
    rows = list(csv.reader(io.StringIO(text)))
    assert rows[0] == ["t", "norm"]
    return np.array([[float(x) for x in r] for r in rows[1:]])


def report(out):
    return dict(line.split(" = ", 1) for line in out.splitlines() if " = " in line)


def write_table(path, ts, vs):
    path.write_text("t,phi\n" + "".join(f"{float(t)!r},{float(v)!r}\n" for t, v in zip(ts, vs)))
    return str(path)


class TestFlags:
    @pytest.mark.parametrize("text, z", [("-2", -2), ("0+1i", 1j), ("1.5-2i", 1.5 - 2j), ("3i", 3j)])
    def test_complex_grammar(self, text, z):
        assert parse_complex(text) == z

    @pytest.mark.parametrize("argv", [
        ["curve", "--a=x", "--b=0", "--c=0", "--phi=log:1"],
        ["curve", "--a=0", "--b=0", "--c=0", "--phi=cubic:1"],
        ["curve", "--a=0", "--b=0", "--c=0", "--phi=log:1", "--range=1"],
        ["curve", "--a=nan", "--b=0", "--c=0", "--phi=log:1"],
        ["analyze", "--preset=bergman", "--spec=x.json", "--a=1", "--b=1", "--c=1", "--phi=log:1"],
        ["frobnicate"],
        [],
    ])
    def test_parse_errors_exit_2(self, argv, capsys):
        with pytest.raises(SystemExit) as exc:
            main(argv)
        assert exc.value.code == 2
        capsys.readouterr()


class TestCurve:
    def test_example_maximum(self, capsys):
        code, out, _ = run(capsys, "curve", "--a=-2", "--b=2", "--c=1", "--phi=power:0,1,5",
                           "--range=0,1", "--n=1000")
        assert code == 0
        rows = read_rows(out)
        assert rows.shape == (1000, 2)
        t, v = rows[np.argmax(rows[:, 1])]
        assert abs(t - 0.9431) < 1e-3 and abs(v - 2.2384) < 1e-4

    def test_trivial(self, capsys):
        code, out, _ = run(capsys, "curve", "--a=0", "--b=0", "--c=0", "--phi=power:0,0,0",
                           "--range=0,1", "--n=3")
        assert code == 0
        assert out.splitlines() == ["t,norm", "0,0", "0.5,0.5", "1,1"]

    def test_log_is_increasing(self, capsys):
        _, out, _ = run(capsys, "curve", "--a=1+2i", "--b=-1", "--c=0.5i", "--phi=log:1", "--range=0,5", "--n=400")
        assert np.all(np.diff(read_rows(out)[:, 1]) > 0)

    def test_seventeen_digits(self, capsys):
        _, out, _ = run(capsys, "curve", "--a=1", "--b=1", "--c=1", "--phi=log:1", "--range=0,1", "--n=7")
        for t, v in read_rows(out):
            assert v == float(curves.eval_f(ParamSet(1, 1, 1), LogPhi(1), t))

    def test_out_file_and_table_round_trip(self, tmp_path, capsys):
        path = tmp_path / "curve.csv"
        code, out, _ = run(capsys, "curve", "--a=1", "--b=1", "--c=1", "--phi=log:1", "--range=0,2",
                           "--n=2001", f"--out={path}")
        assert code == 0 and out == ""
        table = TablePhi.from_csv(path)
        ts = np.linspace(0.0005, 1.9995, 300)
        exact = curves.eval_f(ParamSet(1, 1, 1), LogPhi(1), ts)
        # linear interpolation error is at most h^2/8 max|f''| with h = 1e-3
        np.testing.assert_allclose(table(ts), exact, atol=1e-6)

        code, out, _ = run(capsys, "certify", f"--phi=table:{path}")
        assert code in (0, 4)

    def test_bad_n_is_a_runtime_error(self, capsys):
        code, _, err = run(capsys, "curve", "--a=1", "--b=1", "--c=1", "--phi=log:1", "--n=0")
        assert code == 1 and err.startswith("error:")


class TestCertify:
    def test_alpha_four(self, capsys):
        code, out, _ = run(capsys, "certify", "--phi=power:0,1,4")
        assert code == 0
        assert report(out)["justification"] == "COR24_ALPHA"

    def test_alpha_five_violation(self, capsys):
        code, out, _ = run(capsys, "certify", "--a=-2", "--b=2", "--c=1", "--phi=power:0,1,5")
        assert code == 3
        rep = report(out)
        assert rep["status"] == "CERTIFIED_NOT_COND_B"
        assert float(rep["violation_point"]) == 1.0

    def test_table_with_parameter_certificate(self, tmp_path, capsys):
        ts = np.linspace(0, 3, 301)
        path = write_table(tmp_path / "exp.csv", ts, np.exp(2 * ts))
        code, out, _ = run(capsys, "certify", "--a=1", "--b=2", "--c=1", f"--phi=table:{path}")
        assert code == 0
        rep = report(out)
        assert rep["justification"] == "COR27_PARAMS"
        assert "grid" in rep and "rise_tol" in rep["grid"]

    def test_table_without_params_violates(self, tmp_path, capsys):
        ts = np.linspace(0, 3, 301)
        path = write_table(tmp_path / "exp.csv", ts, np.exp(2 * ts))
        code, out, _ = run(capsys, "certify", f"--phi=table:{path}")
        assert code == 3

    def test_inconclusive(self, capsys):
        code, out, _ = run(capsys, "certify", "--a=1", "--b=1", "--c=1", "--phi=preset:one", "--range=0,1")
        assert code == 4
        assert report(out)["status"] == "INCONCLUSIVE"

    def test_missing_table_file_is_a_parse_error(self, tmp_path, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["certify", f"--phi=table:{tmp_path / 'missing.csv'}"])
        assert exc.value.code == 2
        capsys.readouterr()


class TestCounterexample:
    def test_example(self, capsys):
        code, out, _ = run(capsys, "counterexample", "--phi=power:0,2,5", "--t0=1", "--margin=20")
        assert code == 0
        rep = report(out)
        assert (rep["a"], rep["b"], rep["c"]) == ("-2", "1", "1")
        assert float(rep["slope_gap"]) == pytest.approx(16.0)
        assert float(rep["f(witness_t)"]) > float(rep["f(t0)"])

    def test_condition_b_holding_is_an_error(self, capsys):
        code, _, err = run(capsys, "counterexample", "--phi=power:0,1,3")
        assert code == 1 and "condition (b) holds" in err


class TestAnalyze:
    def test_bergman(self, capsys):
        code, out, _ = run(capsys, "analyze", "--preset=bergman", "--a=-2", "--b=2", "--c=1", "--phi=power:0,1,5")
        assert code == 0
        rep = report(out)
        assert rep["verdict"] == "ATTAINS"
        assert float(rep["witness"]) == math.sqrt(8 / 9)
        assert rep["attains_base"] == "False"
        assert rep["numeric"] == "True"

    def test_mult_op_monotone(self, capsys):
        code, out, _ = run(capsys, "analyze", "--preset=mult-op", "--d=1", "--a=1", "--b=1", "--c=1", "--phi=log:1")
        assert code == 5
        assert report(out)["certificate"] == "THM_38_MONOTONE"

    def test_ex313(self, capsys):
        code, out, _ = run(capsys, "analyze", "--preset=ex313", "--a=-2", "--b=2", "--c=1", "--phi=power:0,1,5")
        assert code == 5
        rep = report(out)
        assert rep["certificate"] == "LEMMA_35_SINGLETON"
        assert rep["omega_singleton"] == "True"

    def test_spec_file(self, tmp_path, capsys):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"bound": 1.0, "eigenvalues": [0.25, 0.5]}))
        code, out, _ = run(capsys, "analyze", f"--spec={spec}", "--a=-2", "--b=2", "--c=1", "--phi=power:0,1,5")
        assert code == 0
        assert float(report(out)["witness"]) == 0.5

    def test_unknown_for_two_point_omega(self, tmp_path, capsys):
        spec = tmp_path / "spec.json"
        spec.write_text(json.dumps({"bound": 2.0, "intervals": [[0.0, 2.0]]}))
        tent = write_table(tmp_path / "tent.csv", [0.0, 1.0, 2.0], [0.0, math.sqrt(3.0), 0.0])
        code, out, _ = run(capsys, "analyze", f"--spec={spec}", "--a=0", "--b=1", "--c=0", f"--phi=table:{tent}")
        assert code == 6
        assert report(out)["certificate"] == "OMEGA_NOT_SINGLETON"

    def test_bad_spec_is_a_runtime_error(self, tmp_path, capsys):
        spec = tmp_path / "spec.json"
        spec.write_text('{"bound": 1, "eigenvalues": [3]}')
        code, _, err = run(capsys, "analyze", f"--spec={spec}", "--a=1", "--b=1", "--c=1", "--phi=log:1")
        assert code == 1 and err.startswith("error:")


class TestReproduce:
    @pytest.mark.parametrize("which", ["ex24", "ex311", "ex312", "ex313"])
    def test_each(self, which, capsys):
        code, out, _ = run(capsys, "reproduce", which)
        assert code == 0
        lines = out.splitlines()
        assert lines and all(line.startswith("PASS") for line in lines)
        assert all(f"  {which}  " in line for line in lines)

    def test_ex24_rows(self, capsys):
        _, out, _ = run(capsys, "reproduce", "ex24")
        assert "t_star" in out or "t*" in out
        assert "h(t1)" in out or "h_t1" in out

    def test_all(self, capsys):
        code, out, _ = run(capsys, "reproduce", "all")
        assert code == 0
        tags = {line.split()[1] for line in out.splitlines()}
        assert tags == {"ex24", "ex311", "ex312", "ex313"}


class TestOracle:
    def test_zero_trials(self, capsys):
        code, out, _ = run(capsys, "oracle", "--trials=0")
        assert code == 0
        assert out.splitlines() == ["seed = 42  trials = 0  max_dim = 16  tol = 1e-09"]

    def test_scalar_cases(self, capsys):
        code, out, _ = run(capsys, "oracle", "--trials=30", "--max-dim=1")
        assert code == 0
        assert out.count("PASS") == 4

    def test_env_seed(self, monkeypatch, capsys):
        monkeypatch.setenv("NORMGATE_SEED", "7")
        _, out, _ = run(capsys, "oracle", "--trials=0")
        assert out.startswith("seed = 7 ")

    def test_deterministic_output(self, capsys):
        first = run(capsys, "oracle", "--trials=5", "--max-dim=6")
        second = run(capsys, "oracle", "--trials=5", "--max-dim=6")
        assert first == second and first[0] == 0


def test_identical_inputs_give_identical_bytes(capsys):
    argv = ["analyze", "--preset=bergman", "--n-max=200", "--a=-2", "--b=2", "--c=1", "--phi=power:0,1,5"]
    assert run(capsys, *argv) == run(capsys, *argv)
