import json
import subprocess
import sys

import pytest

from nklab.cli import TOLERANCES, RunConfig, dumps, main, parse_config, run


def invoke(capsys, *argv):
    status = main(list(argv))
    out = capsys.readouterr()
    return status, out.out, out.err


class TestSerialisation:
    def test_seventeen_digits(self):
        text = dumps({"x": 0.1, "y": [1.0, 2], "z": True})
        assert text == '{"x": 0.10000000000000001, "y": [1.0, 2], "z": true}\n'

    def test_round_trip(self):
        value = 1 / 3
        assert json.loads(dumps({"v": value}))["v"] == value


class TestParsing:
    def test_defaults(self):
        cfg = parse_config(["solve"])
        assert (cfg.k, cfg.samples, cfg.planes, cfg.seed, cfg.fd_step, cfg.format) == (1.0, 64, 200, 0, 1e-5, "json")

    def test_env_seed_overrides(self, monkeypatch):
        monkeypatch.setenv("NKLAB_SEED", "7")
        assert parse_config(["curvature", "--seed", "3"]).seed == 7

    @pytest.mark.parametrize("bad", ["0", "-1", "abc"])
    def test_k_must_be_positive(self, bad, capsys):
        with pytest.raises(SystemExit) as exc:
            main(["solve", "--k", bad])
        assert exc.value.code == 2

    def test_unknown_command(self):
        with pytest.raises(SystemExit) as exc:
            main(["plot"])
        assert exc.value.code == 2


class TestSolve:
    def test_k1(self, capsys):
        status, out, _ = invoke(capsys, "solve", "--k", "1", "--samples", "64")
        doc = json.loads(out)
        assert status == 0
        assert doc["schema"] == 1
        assert doc["max_nk_residual"] < 1e-12
        assert len(doc["samples"]) == 64
        assert doc["failures"] == []

    def test_k2_peak(self, capsys):
        _, out, _ = invoke(capsys, "solve", "--k", "2")
        assert json.loads(out)["f0"] == 0.5

    def test_csv(self, capsys):
        _, out, _ = invoke(capsys, "solve", "--format", "csv", "--samples", "5")
        lines = out.splitlines()
        assert lines[0] == "t,f,fp,h,a1,a2,a3,u"
        assert len(lines) == 6

    def test_output_file(self, capsys, tmp_path):
        path = tmp_path / "solve.json"
        status, out, _ = invoke(capsys, "solve", "--output", str(path))
        assert status == 0 and out == ""
        assert json.loads(path.read_text())["command"] == "solve"

    def test_failing_tolerance_sets_status(self):
        tol = dict(TOLERANCES, nk_residual=0.0)
        text, status = run(RunConfig("solve", tolerances=tol))
        assert status == 1
        assert "nk_residual" in json.loads(text)["failures"]


class TestCurvature:
    def test_benchmark(self, capsys):
        status, out, _ = invoke(capsys, "curvature", "--benchmark", "su2")
        doc = json.loads(out)
        assert status == 0
        assert doc["benchmark"]["mean"] == pytest.approx(0.125, abs=1e-4)

    def test_canonical_deterministic(self, capsys):
        argv = ("curvature", "--k", "1", "--planes", "200", "--seed", "0")
        status, first, _ = invoke(capsys, *argv)
        _, second, _ = invoke(capsys, *argv)
        assert status == 0
        assert first == second
        doc = json.loads(first)
        assert doc["sectional_mean"] == pytest.approx(1 / 12, rel=1e-3)
        assert doc["sectional_spread"] < 1e-4
        assert all(p["einstein_lambda"] > 0 for p in doc["points"])

    def test_csv_rows(self, capsys):
        _, out, _ = invoke(capsys, "curvature", "--planes", "3", "--format", "csv")
        lines = out.splitlines()
        assert lines[0] == "t,plane_index,K"
        assert len(lines) == 1 + 5 * 3


class TestClassify:
    @pytest.mark.parametrize("group", ["su3", "su2xsu2"])
    def test_golden(self, capsys, golden, group):
        status, out, _ = invoke(capsys, "classify", "--group", group)
        assert status == 0
        assert out == (golden / f"classify_{group}.json").read_text()

    def test_su3_single_triple(self, capsys):
        _, out, _ = invoke(capsys, "classify", "--group", "su3")
        assert json.loads(out)["triples"] == [{"H1": "SU3", "K": "SU2", "H2": "SU3", "model": "S6"}]

    def test_unsupported(self, capsys):
        status, out, err = invoke(capsys, "classify", "--group", "e8")
        assert status == 2 and out == ""
        assert "unsupported group" in err


class TestLemmas:
    def test_report(self, capsys):
        status, out, _ = invoke(capsys, "lemmas", "--samples", "10")
        doc = json.loads(out)
        assert status == 0
        assert max(doc["lemma_max_relative_deviation"].values()) < 1e-10
        assert doc["gray_defect_max"] < 1e-8
        assert doc["su2xsu2_d_omega"]["xi_a_slots"] < 1e-12


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "nklab", "classify", "--group", "su3"],
                          capture_output=True, text=True, check=True)
    assert json.loads(proc.stdout)["group"] == "SU3"
