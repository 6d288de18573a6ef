import json

import numpy as np
import pytest

from synwave import cli, synth


def write_pair_csv(path, seed=26, n=250):
    rng = np.random.default_rng(seed)
    x = np.cumsum(rng.standard_normal(n))
    y = 2.0 * x + rng.standard_normal(n)
    lines = ["x,y"] + [f"{float(a)!r},{float(b)!r}" for a, b in zip(x, y)]
    path.write_text("\n".join(lines) + "\n")
    return path


class TestIngest:
    def test_corn_csv_has_241_rows(self, tmp_path):
        path = tmp_path / "corn.csv"
        synth.generate_synthetic("corn-like", 1, path)
        series = cli.ingest_timeseries(path)
        assert len(series) == 241

    def test_gap_with_fill_interpolates_midpoint(self, tmp_path):
        path = tmp_path / "gap.csv"
        path.write_text("t,value\n0,1.0\n1,\n2,3.0\n")
        with pytest.warns(UserWarning):
            series = cli.ingest_timeseries(path, fill=True)
        assert series.values.tolist() == [1.0, 2.0, 3.0]

    def test_gap_without_fill_rejected(self, tmp_path):
        path = tmp_path / "gap.csv"
        path.write_text("t,value\n0,1.0\n1,\n2,3.0\n")
        with pytest.raises(ValueError):
            cli.ingest_timeseries(path)

    def test_empty_file_rejected(self, tmp_path):
        path = tmp_path / "empty.csv"
        path.write_text("")
        with pytest.raises(ValueError):
            cli.ingest_timeseries(path)

    def test_non_numeric_cell_rejected(self, tmp_path):
        path = tmp_path / "bad.csv"
        path.write_text("t,value\n0,1.0\n1,oops\n")
        with pytest.raises(ValueError):
            cli.ingest_timeseries(path)

    def test_non_uniform_time_column_rejected(self, tmp_path):
        path = tmp_path / "times.csv"
        path.write_text("t,value\n0,1.0\n1,2.0\n5,3.0\n")
        with pytest.raises(ValueError):
            cli.ingest_timeseries(path, time_column="t")

    def test_value_column_by_name(self, tmp_path):
        path = write_pair_csv(tmp_path / "pair.csv")
        series = cli.ingest_timeseries(path, value_column="x")
        assert len(series) == 250


class TestSynth:
    def test_corn_like_deterministic(self, tmp_path):
        a = tmp_path / "a.csv"
        b = tmp_path / "b.csv"
        synth.generate_synthetic("corn-like", 1, a)
        synth.generate_synthetic("corn-like", 1, b)
        assert a.read_bytes() == b.read_bytes()

    def test_noise_statistics(self):
        series = synth.noise_series(7, 1000)
        assert abs(series.values.mean()) < 0.1

    def test_patent_like_monotone(self):
        series = synth.patent_like_series(3)
        assert np.all(np.diff(series.values) >= 0.0)

    def test_unknown_kind_rejected(self, tmp_path):
        with pytest.raises(ValueError):
            synth.generate_synthetic("weird", 1, tmp_path / "x.csv")


class TestSubcommands:
    def test_entropy_report(self, tmp_path):
        path = tmp_path / "cats.csv"
        rng = np.random.default_rng(23)
        x1 = rng.integers(0, 2, 256)
        x2 = rng.integers(0, 2, 256)
        rows = "\n".join(f"{a},{b},{a ^ b}" for a, b in zip(x1, x2))
        path.write_text("a,b,c\n" + rows + "\n")
        rc = cli.main(["entropy", "--input", str(path),
                       "--out-dir", str(tmp_path / "out")])
        assert rc == 0
        payload = json.loads((tmp_path / "out" / "entropy_report.json").read_text())
        triple = payload["reports"][0]
        assert triple["n"] == 3
        assert triple["R"] == triple["T"]
        assert triple["R"] < -0.8

    def test_synergy_csv(self, tmp_path):
        path = tmp_path / "cats.csv"
        rng = np.random.default_rng(23)
        x1 = rng.integers(0, 2, 256)
        x2 = rng.integers(0, 2, 256)
        rows = "\n".join(f"{a},{b},{a ^ b}" for a, b in zip(x1, x2))
        path.write_text("a,b,c\n" + rows + "\n")
        rc = cli.main(["synergy", "--input", str(path), "--window", "64",
                       "--stride", "32", "--out-dir", str(tmp_path / "out")])
        assert rc == 0
        lines = [l for l in (tmp_path / "out" / "synergy.csv").read_text().splitlines()
                 if l and not l.startswith("#")]
        assert lines[0] == "window_start,redundancy_bits"
        assert len(lines) == 1 + (256 - 64) // 32 + 1

    def test_fit_report_layout(self, tmp_path):
        data = tmp_path / "corn.csv"
        synth.generate_synthetic("corn-like", 33, data)
        rc = cli.main(["fit", "--input", str(data), "--components", "3",
                       "--out-dir", str(tmp_path / "out")])
        assert rc == 0
        payload = json.loads((tmp_path / "out" / "fit_report.json").read_text())
        assert set(payload["components"][0]) == {"A", "k", "center"}
        assert set(payload["regression"]) == {"B", "C", "t_values", "r2",
                                              "adj_r2", "n"}
        assert payload["regression"]["n"] == 241

    def test_adf_json(self, tmp_path):
        path = write_pair_csv(tmp_path / "pair.csv")
        rc = cli.main(["adf", "--input", str(path), "--value-column", "x",
                       "--out-dir", str(tmp_path / "out")])
        assert rc == 0
        payload = json.loads((tmp_path / "out" / "adf.json").read_text())
        assert payload["kind"] == "constant"
        assert set(payload["critical_values"]) == {"1%", "5%", "10%"}

    def test_coint_json(self, tmp_path):
        path = write_pair_csv(tmp_path / "pair.csv")
        rc = cli.main(["coint", "--input", str(path), "--y-column", "y",
                       "--x-column", "x", "--out-dir", str(tmp_path / "out")])
        assert rc == 0
        payload = json.loads((tmp_path / "out" / "cointegration.json").read_text())
        assert payload["cointegrated_at"] == "1%"

    def test_cwt_artifacts(self, tmp_path):
        data = tmp_path / "corn.csv"
        synth.generate_synthetic("corn-like", 33, data)
        rc = cli.main(["cwt", "--input", str(data), "--svg",
                       "--out-dir", str(tmp_path / "out")])
        assert rc == 0
        assert (tmp_path / "out" / "scalogram.csv").exists()
        assert (tmp_path / "out" / "scalogram.svg").exists()
        payload = json.loads((tmp_path / "out" / "wave_trains.json").read_text())
        assert len(payload["waves"]) == 3

    def test_out_dir_env_var(self, tmp_path, monkeypatch):
        monkeypatch.setenv(cli.OUT_DIR_ENV, str(tmp_path / "envout"))
        rc = cli.main(["synth", "--kind", "noise", "--seed", "7"])
        assert rc == 0
        assert (tmp_path / "envout" / "noise_7.csv").exists()


class TestPipeline:
    def test_corn_pipeline_succeeds(self, tmp_path):
        data = tmp_path / "corn.csv"
        synth.generate_synthetic("corn-like", 33, data)
        out = tmp_path / "run"
        rc = cli.main(["pipeline", "--input", str(data), "--seed", "33",
                       "--out-dir", str(out)])
        assert rc == 0
        for name in ("fit_report.json", "regression_report.json",
                     "scalogram.csv", "wave_trains.json", "redundancy.csv",
                     "validation.json"):
            assert (out / name).exists(), name
        validation = json.loads((out / "validation.json").read_text())
        assert validation["passed"]
        assert validation["waves_retained"] == 3
        fit_report = json.loads((out / "fit_report.json").read_text())
        assert abs(fit_report["beta"] - 310.75) < 5.0
        assert fit_report["regression"]["r2"] > 0.94

    def test_white_noise_fails_validation(self, tmp_path):
        data = tmp_path / "noise.csv"
        synth.generate_synthetic("noise", 7, data, n=500)
        rc = cli.main(["pipeline", "--input", str(data), "--seed", "7",
                       "--out-dir", str(tmp_path / "run")])
        assert rc == 2
        validation = json.loads((tmp_path / "run" / "validation.json").read_text())
        assert not validation["passed"]
        assert validation["waves_retained"] == 0

    def test_missing_input_exits_one(self, tmp_path, capsys):
        rc = cli.main(["pipeline", "--input", str(tmp_path / "nope.csv"),
                       "--out-dir", str(tmp_path / "run")])
        assert rc == 1
        assert "pipeline:" in capsys.readouterr().err

    def test_usage_error_exits_one(self, capsys):
        rc = cli.main(["pipeline", "--no-such-flag"])
        assert rc == 1
        capsys.readouterr()

    def test_redundancy_csv_identity(self, tmp_path):
        data = tmp_path / "corn.csv"
        synth.generate_synthetic("corn-like", 33, data)
        out = tmp_path / "run"
        cli.main(["pipeline", "--input", str(data), "--seed", "33",
                  "--out-dir", str(out)])
        rows = [l.split(",") for l in (out / "redundancy.csv").read_text().splitlines()
                if l and not l.startswith("#")][1:]
        hist = np.array([float(r[1]) for r in rows])
        syn = np.array([float(r[2]) for r in rows])
        total = np.array([float(r[3]) for r in rows])
        assert np.abs(total - (hist - syn)).max() < 1e-9
        assert np.all(hist >= 0.0)
        assert np.all(syn >= 0.0)
