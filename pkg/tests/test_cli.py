import json

import numpy as np
import pytest

from oracles import erlang_closed
from photonliquid import CorrelationCurve
from photonliquid.cli import main


def run(*argv):
    return main([str(a) for a in argv])


def load_csv(path):
    return CorrelationCurve.read_csv(path)


class TestAnalytic:
    def test_cascade_n3(self, tmp_path):
        out = tmp_path / "n3.csv"
        assert run("analytic", "cascade", "--n", 3, "--tau-max", 10, "--out", out) == 0
        c = load_csv(out)
        assert c.tau[-1] == 10.0
        assert np.max(np.abs(c.values - erlang_closed(3, c.tau))) < 1e-12
        assert c.values.max() == pytest.approx(1 + np.exp(-np.sqrt(3) * np.pi), abs=1e-5)
        manifest = json.loads((tmp_path / "n3.csv.manifest.json").read_text())
        assert manifest["command"] == "analytic"
        assert manifest["parameters"]["n"] == 3
        assert manifest["generator"] == "numpy.random.PCG64"
        assert str(out) in manifest["outputs"]

    def test_csv_format(self, tmp_path):
        out = tmp_path / "c.csv"
        run("analytic", "heitler", "--points", 5, "--out", out)
        text = out.read_bytes()
        assert b"\r" not in text
        lines = text.decode().splitlines()
        assert lines[0] == "tau,g2"
        assert lines[2].split(",")[0] == "2.5"
        # 17 significant digits, trailing zeros dropped: every value round-trips exactly
        g = np.array([float(line.split(",")[1]) for line in lines[1:]])
        assert np.max(np.abs(g - (1 - np.exp(-np.linspace(0, 10, 5))) ** 2)) < 1e-15
        from photonliquid import g2_heitler

        assert np.array_equal(g, g2_heitler(1.0, np.linspace(0, 10, 5)))

    def test_coherent_is_flat(self, tmp_path):
        out = tmp_path / "one.csv"
        assert run("analytic", "cascade", "--n", 1, "--out", out) == 0
        assert np.all(load_csv(out).values == 1.0)

    def test_mollow_max(self, tmp_path):
        out = tmp_path / "m.csv"
        assert run("analytic", "mollow", "--omega", 2, "--tau-max", 2, "--points", 20001, "--out", out) == 0
        assert load_csv(out).values.max() == pytest.approx(1 + np.exp(-3 * np.pi / np.sqrt(255)), abs=1e-6)

    def test_symmetric(self, tmp_path):
        out = tmp_path / "s.csv"
        run("analytic", "incoherent", "--pump", 0.5, "--points", 11, "--symmetric", "--out", out)
        c = load_csv(out)
        assert len(c) == 21 and c.tau[0] == -c.tau[-1]
        assert np.array_equal(c.values, c.values[::-1])

    def test_json_matches_csv(self, tmp_path):
        run("analytic", "cascade", "--n", 4, "--points", 50, "--out", tmp_path / "a.csv")
        run("analytic", "cascade", "--n", 4, "--points", 50, "--format", "json", "--out", tmp_path / "a.json")
        data = json.loads((tmp_path / "a.json").read_text())
        c = load_csv(tmp_path / "a.csv")
        assert data["columns"]["tau"] == c.tau.tolist()
        assert data["columns"]["g2"] == c.values.tolist()
        assert "version" in data["metadata"]

    def test_byte_identical_rerun(self, tmp_path):
        for k in (1, 2):
            run("analytic", "mollow", "--omega", 3, "--out", tmp_path / f"r{k}.csv")
        assert (tmp_path / "r1.csv").read_bytes() == (tmp_path / "r2.csv").read_bytes()

    def test_plot(self, tmp_path):
        run("analytic", "heitler", "--out", tmp_path / "h.csv", "--plot")
        assert (tmp_path / "h.csv.svg").read_text().startswith("<svg")

    def test_stdout(self, capsys):
        assert run("analytic", "heitler", "--points", 3) == 0
        assert capsys.readouterr().out.startswith("tau,g2\n")

    def test_usage_errors(self):
        with pytest.raises(SystemExit) as exc:
            run("analytic", "cascade")
        assert exc.value.code == 2
        with pytest.raises(SystemExit) as exc:
            run("analytic", "mollow")
        assert exc.value.code == 2
        with pytest.raises(SystemExit) as exc:
            run("analytic", "nonsense")
        assert exc.value.code == 2

    def test_domain_error_is_usage(self, capsys):
        assert run("analytic", "incoherent", "--pump", -1) == 2
        assert "pump" in capsys.readouterr().err

    def test_unwritable(self, tmp_path):
        assert run("analytic", "heitler", "--out", tmp_path / "missing" / "x.csv") == 5


class TestSimulateEstimate:
    def test_pipeline(self, tmp_path):
        stream = tmp_path / "s.f64"
        assert run("simulate", "--rates", "1,1,1", "--duration", 3e5, "--seed", 2, "--out", stream) == 0
        meta = json.loads((tmp_path / "s.f64.json").read_text())
        assert meta["seed"] == 2 and meta["duration"] == 3e5
        assert abs(meta["n_events"] - 1e5) < 5 * np.sqrt(1e5)
        out = tmp_path / "g2.csv"
        assert run("estimate", stream, "--bin", 0.05, "--tau-max", 5, "--out", out) == 0
        c = load_csv(out)
        assert c.errors is not None
        assert (tmp_path / "g2.csv.manifest.json").exists()

    def test_rerun_is_byte_identical(self, tmp_path):
        for k in (1, 2):
            run("simulate", "--rates", "2,1", "--duration", 1e3, "--seed", 5, "--out", tmp_path / f"s{k}.txt")
            run("estimate", tmp_path / f"s{k}.txt", "--jitter", 0.1, "--seed", 3, "--out", tmp_path / f"g{k}.csv")
        assert (tmp_path / "s1.txt").read_bytes() == (tmp_path / "s2.txt").read_bytes()
        assert (tmp_path / "g1.csv").read_bytes() == (tmp_path / "g2.csv").read_bytes()

    def test_empty_stream(self, tmp_path):
        out = tmp_path / "e.txt"
        assert run("simulate", "--rates", "1", "--duration", 0.001, "--seed", 1, "--out", out) == 0
        assert out.read_text() == ""
        assert run("estimate", out, "--bin", 1e-4, "--tau-max", 5e-4) == 3

    def test_unsorted_input(self, tmp_path, capsys):
        p = tmp_path / "bad.txt"
        p.write_text("0.1\n0.3\n0.2\n")
        assert run("estimate", p, "--duration", 1.0, "--bin", 0.01, "--tau-max", 0.1) == 3
        assert "index 2" in capsys.readouterr().err

    def test_missing_input(self, tmp_path):
        assert run("estimate", tmp_path / "nope.txt") == 5

    def test_symmetric_estimate(self, tmp_path):
        run("simulate", "--rates", "1", "--duration", 1e3, "--out", tmp_path / "p.txt")
        run("estimate", tmp_path / "p.txt", "--bin", 0.1, "--tau-max", 1, "--symmetric", "--out", tmp_path / "p.csv")
        c = load_csv(tmp_path / "p.csv")
        assert len(c) == 20 and c.tau[0] == pytest.approx(-0.95)


class TestCompare:
    @pytest.mark.parametrize(
        "argv",
        [
            ("cascade", "lindblad", "--n", 3, "--tol", 1e-8),
            ("cascade", "renewal", "--n", 4, "--tol", 1e-10),
            ("closed", "cascade", "--n", 2, "--tol", 1e-12),
            ("renewal", "lindblad", "--rates", "1,2,3", "--tol", 1e-8),
            ("incoherent", "renewal", "--rates", "1,2", "--pump", 1, "--gamma", 2, "--tol", 1e-10),
        ],
    )
    def test_pass(self, argv, capsys):
        assert run("compare", *argv) == 0
        assert "PASS" in capsys.readouterr().out

    def test_negative_control(self, capsys):
        assert run("compare", "cascade", "heitler", "--n", 3) == 1
        assert "FAIL" in capsys.readouterr().out

    def test_report_files(self, tmp_path):
        out = tmp_path / "cmp.json"
        run("compare", "cascade", "lindblad", "--n", 3, "--points", 21, "--format", "json", "--out", out)
        data = json.loads(out.read_text())
        assert data["report"]["pass"] is True
        assert set(data["columns"]) == {"tau", "cascade", "lindblad", "diff"}

    def test_route_mismatch(self):
        with pytest.raises(SystemExit) as exc:
            run("compare", "closed", "renewal", "--n", 5)
        assert exc.value.code == 2
        with pytest.raises(SystemExit) as exc:
            run("compare", "cascade", "lindblad", "--n", 20)
        assert exc.value.code == 2


class TestFigure2:
    def test_outputs(self, tmp_path):
        assert run("figure2", "--out", tmp_path, "--plot") == 0
        curves = {p.name.split(".")[0]: load_csv(p) for p in sorted(tmp_path.glob("fig2_*.csv"))}
        assert len(curves) == 6
        assert len(list(tmp_path.glob("*.svg"))) == 6
        assert np.all(curves["fig2_i_coherent"].values == 1)
        iv = curves["fig2_iv_cascade_n3"]
        assert np.array_equal(iv.values, iv.values[::-1])
        vi = curves["fig2_vi_cascade_n26"]
        assert vi.tau[-1] == pytest.approx(260.0)
        assert np.max(vi.values[np.abs(vi.tau) <= 10]) < 2e-3
        manifest = json.loads((tmp_path / "manifest.json").read_text())
        peak = manifest["parameters"]["first_maxima"]["iv_cascade_n3"]
        assert peak["value"] == pytest.approx(1 + np.exp(-np.sqrt(3) * np.pi), abs=1e-9)
        assert peak["tau"] == pytest.approx(2 * np.pi / np.sqrt(3), rel=1e-6)
        assert manifest["parameters"]["mollow_omega_over_gamma"] == 2.0
        assert manifest["parameters"]["first_maxima"]["i_coherent"] is None

    def test_json_format(self, tmp_path):
        assert run("figure2", "--out", tmp_path, "--format", "json") == 0
        assert len(list(tmp_path.glob("fig2_*.json"))) == 6
