import numpy as np
import pytest

from aslm import CSV_HEADER
from aslm.cli import main

FAST = [
    "--steps", "480", "--train-len", "300", "--test-len", "120",
    "--stride", "30", "--runs", "3",
]


class TestGenerate:
    def test_writes_requested_sample_count(self, tmp_path):
        out = tmp_path / "series.csv"
        assert main(["generate", "--steps", "250", "--out", str(out)]) == 0
        values = [float(v) for v in out.read_text().split()]
        assert len(values) == 250
        assert all(abs(v) < 100 for v in values)

    def test_normalize_flag(self, tmp_path):
        out = tmp_path / "norm.csv"
        main(["generate", "--steps", "500", "--normalize", "--out", str(out)])
        v = np.loadtxt(out)
        assert abs(v.mean()) < 1e-9
        assert abs(v.var() - 1.0) < 1e-9

    def test_stdout_default(self, capsys):
        main(["generate", "--steps", "50"])
        lines = capsys.readouterr().out.strip().splitlines()
        assert len(lines) == 50

    def test_deterministic(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        main(["generate", "--steps", "300", "--out", str(a)])
        main(["generate", "--steps", "300", "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()


class TestRun:
    def test_csv_to_file(self, tmp_path):
        out = tmp_path / "report.csv"
        rc = main(["run", *FAST, "--models", "LS,ASLM", "--out", str(out)])
        assert rc == 0
        lines = out.read_text().splitlines()
        assert lines[0] == CSV_HEADER
        assert [ln.split(",")[0] for ln in lines[1:]] == ["LS", "ASLM"]

    def test_table_to_stdout(self, capsys):
        main(["run", *FAST, "--models", "LS", "--format", "table"])
        text = capsys.readouterr().out
        assert "model" in text
        assert "(3 runs)" in text

    def test_noise_flag_changes_output(self, tmp_path):
        a, b = tmp_path / "clean.csv", tmp_path / "noisy.csv"
        main(["run", *FAST, "--models", "LS", "--out", str(a)])
        main(["run", *FAST, "--models", "LS", "--noise-db", "10",
              "--out", str(b)])
        assert a.read_text() != b.read_text()

    def test_repeat_runs_byte_identical(self, tmp_path):
        a, b = tmp_path / "a.csv", tmp_path / "b.csv"
        argv = ["run", *FAST, "--models", "KNN,ASLM", "--noise-db", "20"]
        main([*argv, "--out", str(a)])
        main([*argv, "--out", str(b)])
        assert a.read_bytes() == b.read_bytes()

    def test_unknown_model_rejected(self):
        with pytest.raises(ValueError, match="unknown models"):
            main(["run", *FAST, "--models", "LS,SVM"])


class TestConfigFile:
    def test_file_presets_flags(self, tmp_path):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text(
            "# fast smoke protocol\n"
            "steps = 480\n"
            "train-len = 300\n"
            "test_len = 120\n"
            "stride = 30\n"
            "runs = 3\n"
            "models = LS\n"
        )
        out = tmp_path / "r.csv"
        main(["--config", str(cfg), "run", "--out", str(out)])
        lines = out.read_text().splitlines()
        assert len(lines) == 2
        assert lines[1].startswith("LS,")

    def test_command_line_overrides_file(self, tmp_path):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text("steps=480\ntrain-len=300\ntest-len=120\n"
                       "stride=30\nruns=3\nmodels=LS\n")
        out = tmp_path / "r.csv"
        main(["--config", str(cfg), "run", "--models", "KNN",
              "--out", str(out)])
        assert out.read_text().splitlines()[1].startswith("KNN,")

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("stepz=100\n")
        with pytest.raises(SystemExit, match="unknown keys"):
            main(["--config", str(cfg), "run", *FAST, "--models", "LS"])

    def test_malformed_line_rejected(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("steps 480\n")
        with pytest.raises(SystemExit, match="expected key=value"):
            main(["--config", str(cfg), "run", *FAST, "--models", "LS"])

    def test_boolean_values(self, tmp_path):
        cfg = tmp_path / "exp.cfg"
        cfg.write_text("steps=480\ntrain-len=300\ntest-len=120\nstride=30\n"
                       "runs=3\nmodels=LS\ntiming=yes\n")
        out = tmp_path / "r.csv"
        main(["--config", str(cfg), "run", "--out", str(out)])
        last = out.read_text().splitlines()[1].split(",")[-1]
        assert float(last) > 0.0


class TestTuneEpsilon:
    def test_reports_epsilon_and_size(self, capsys):
        main(["tune-epsilon", *FAST, "--target", "60"])
        out = capsys.readouterr().out
        assert "epsilon=" in out
        assert "size=60" in out

    def test_weighted_space_differs_from_input_space(self, capsys):
        main(["tune-epsilon", *FAST, "--target", "60", "--space", "input"])
        eps_in = capsys.readouterr().out
        main(["tune-epsilon", *FAST, "--target", "60", "--space", "weighted"])
        eps_w = capsys.readouterr().out
        assert eps_in != eps_w
