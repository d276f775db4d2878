import csv
import json

import numpy as np
import pytest

from curveflow.cli import main


def run(args):
    return main(args)


@pytest.fixture
def circle_files(tmp_path):
    a = tmp_path / "c1.json"
    b = tmp_path / "c2.json"
    assert run(["gen", "circle", "--n", "256", "--out", str(a)]) == 0
    assert run(["gen", "circle", "--n", "256", "--radius", "2", "--out", str(b)]) == 0
    return a, b


class TestGen:
    @pytest.mark.parametrize(
        "name", ["circle", "ellipse", "rounded_square", "flat_segment", "perturbed_circle"]
    )
    def test_canonical_curves(self, tmp_path, name):
        out = tmp_path / f"{name}.json"
        assert run(["gen", name, "--n", "128", "--out", str(out)]) == 0
        data = json.loads(out.read_text())
        assert data["closed"] is True
        assert len(data["points"]) == 128

    def test_seed_determinism(self, tmp_path):
        a = tmp_path / "a.json"
        b = tmp_path / "b.json"
        run(["--seed", "5", "gen", "perturbed_circle", "--out", str(a)])
        run(["--seed", "5", "gen", "perturbed_circle", "--out", str(b)])
        assert a.read_text() == b.read_text()


class TestFrechet:
    def test_concentric_circles(self, circle_files, capsys):
        a, b = circle_files
        assert run(["frechet", str(a), str(b)]) == 0
        out = capsys.readouterr().out
        value = float(out.split("=")[1])
        assert value == pytest.approx(1.0, abs=1e-3)

    def test_report_with_dinf(self, circle_files, tmp_path):
        a, b = circle_files
        rep = tmp_path / "rep.json"
        assert run(["frechet", str(a), str(b), "--dinf", "--report", str(rep)]) == 0
        data = json.loads(rep.read_text())
        assert data["frechet"] == pytest.approx(1.0, abs=1e-3)
        assert data["dinf"] == pytest.approx(data["frechet"], rel=0.02)


class TestDist:
    def test_geodesic_report(self, circle_files, tmp_path):
        a, b = circle_files
        rep = tmp_path / "dist.json"
        assert (
            run(
                [
                    "dist",
                    str(a),
                    str(b),
                    "--metric",
                    "h1",
                    "--lambda",
                    "1.0",
                    "--k-rows",
                    "8",
                    "--report",
                    str(rep),
                ]
            )
            == 0
        )
        data = json.loads(rep.read_text())
        assert data["distance"] == pytest.approx(np.sqrt(1 + 4 * np.pi**2), rel=1e-3)
        assert data["header"]["lambda"] == 1.0
        assert data["length_lipschitz_margin"] > 0


class TestFlow:
    def test_heat_flow_csv_matches_oracle(self, tmp_path):
        c = tmp_path / "c.json"
        run(["gen", "circle", "--n", "256", "--out", str(c)])
        prefix = tmp_path / "run"
        code = run(
            [
                "flow",
                str(c),
                "--energy",
                "length",
                "--metric",
                "h0",
                "--steps",
                "5000",
                "--dt",
                "1.0",
                "--t-end",
                "0.18",
                "--out-prefix",
                str(prefix),
            ]
        )
        assert code == 0
        with open(prefix.with_suffix(".csv")) as fh:
            rows = list(csv.DictReader(fh))
        assert list(rows[0]) == ["step", "t", "length", "energy", "step_norm"]
        lengths = np.array([float(r["length"]) for r in rows])
        times = np.array([float(r["t"]) for r in rows])
        assert np.all(np.diff(lengths) <= 1e-12)
        expected = 2 * np.pi * np.sqrt(1 - 2 * times[-1])
        assert lengths[-1] == pytest.approx(expected, rel=0.01)
        # JSON-lines mirror
        with open(prefix.with_suffix(".jsonl")) as fh:
            recs = [json.loads(line) for line in fh]
        assert len(recs) == len(rows)


class TestSmooth:
    def test_fourier_csv_contract(self, tmp_path):
        c = tmp_path / "rs.json"
        run(["gen", "rounded_square", "--n", "256", "--out", str(c)])
        prefix = tmp_path / "sm"
        code = run(
            [
                "smooth",
                str(c),
                "--method",
                "fourier",
                "--decay",
                "abs",
                "--schedule",
                "0.1,0.05,0.02,0.01",
                "--out-prefix",
                str(prefix),
            ]
        )
        assert code == 0
        with open(prefix.with_suffix(".csv")) as fh:
            rows = list(csv.DictReader(fh))
        assert list(rows[0]) == ["t", "delta", "tail_mass"]
        deltas = [float(r["delta"]) for r in rows]
        assert all(a > b for a, b in zip(deltas, deltas[1:]))
        assert (tmp_path / "sm_t0.1.json").exists()

    def test_direction_method(self, tmp_path):
        c = tmp_path / "rs.json"
        run(["gen", "rounded_square", "--n", "256", "--out", str(c)])
        prefix = tmp_path / "dm"
        code = run(
            ["smooth", str(c), "--method", "direction", "--cutoff", "16",
             "--out-prefix", str(prefix)]
        )
        assert code == 0
        data = json.loads(prefix.with_suffix(".json").read_text())
        assert data["action"] > 0
        assert (tmp_path / "dm_smooth.json").exists()


class TestGrad:
    def test_energy_config_json(self, tmp_path):
        c = tmp_path / "c.json"
        run(["gen", "circle", "--n", "128", "--out", str(c)])
        out = tmp_path / "g.json"
        code = run(
            [
                "grad",
                str(c),
                "--energy-config",
                '{"energy": "center_of_mass", "target": [0.0, 0.0]}',
                "--metric",
                "h0",
                "--out",
                str(out),
            ]
        )
        assert code == 0
        data = json.loads(out.read_text())
        # the circle is centered on the target: gradient vanishes
        assert np.abs(np.array(data["grad_h0"])).max() < 1e-10


class TestVerify:
    def test_passes_and_deterministic(self, tmp_path):
        rep1 = tmp_path / "v1.json"
        rep2 = tmp_path / "v2.json"
        assert run(["--seed", "7", "verify", "--samples", "60", "--report", str(rep1)]) == 0
        assert run(["--seed", "7", "verify", "--samples", "60", "--report", str(rep2)]) == 0
        assert rep1.read_text() == rep2.read_text()


class TestErrors:
    def test_bad_subcommand_usage_exit_2(self):
        with pytest.raises(SystemExit) as err:
            main(["not-a-command"])
        assert err.value.code == 2

    def test_numerical_failure_exit_1(self, tmp_path, capsys):
        bad = tmp_path / "open.json"
        bad.write_text(json.dumps({"dim": 2, "closed": False, "points": [[0, 0]] * 12}))
        assert run(["frechet", str(bad), str(bad)]) == 1
        assert "error" in capsys.readouterr().err

    def test_missing_file_exit_1(self):
        assert run(["frechet", "nope.json", "also-nope.json"]) == 1
