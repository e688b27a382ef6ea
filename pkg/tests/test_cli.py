"""End-to-end CLI tests: artifact layout, exit codes, determinism, validation."""

import json
import math

import pytest

from vlcsec import metrics
from vlcsec.cli import main

TINY_TOML = """\
[room]
width_m = 5.0
depth_m = 5.0
height_m = 3.0

[luminaires]
positions = [[-1.0, -1.0, 2.5], [1.0, -1.0, 2.5], [1.0, 1.0, 2.5], [-1.0, 1.0, 2.5]]
beam_full_angle_deg = 120.0

[led]
transmit_power_w = 5.0
conversion_w_per_a = 0.44

[pd]
active_area_m2 = 1e-4
fov_full_angle_deg = 120.0
filter_gain = 1.0
refractive_index = 1.5
responsivity_a_per_w = 0.54

[noise]
average_power_dbm = -98.82

[modulation]
orders = [2, 4]
index = 0.1

[utility]
delta = 10.0
zeta = 5.0

[learner]
learning_rate = 0.5
discount = 0.5
epsilon_start = 1.0
epsilon_end = 0.1
epsilon_decay_slots = 20
quant_levels = 1

[run]
num_slots = 40
seed = 1
summary_window = 10
modes = ["adaptive", "fixed64"]

[[scenarios]]
name = "near"
bob = [0.0, 0.0, 0.5]
eve = [1.5, 0.0, 0.5]
"""

GOLDEN_HEADER = "slot,M,w_1,w_2,w_3,w_4,C_s_bits,ber_bob,ber_eve,utility,epsilon,greedy"


@pytest.fixture()
def tiny_config(tmp_path):
    path = tmp_path / "tiny.toml"
    path.write_text(TINY_TOML)
    return path


def read_tree(root):
    """Relative path -> bytes for every file under root."""
    return {
        str(p.relative_to(root)): p.read_bytes()
        for p in sorted(root.rglob("*"))
        if p.is_file()
    }


class TestRun:
    def test_artifact_layout(self, tiny_config, tmp_path, capsys):
        out = tmp_path / "out"
        assert main(["run", "--config", str(tiny_config), "--out", str(out)]) == 0
        for mode in ("adaptive", "fixed64"):
            assert (out / "near" / mode / "seed1.csv").is_file()
            assert (out / "near" / mode / "seed1.qtable.json").is_file()
            assert (out / "near" / mode / "summary.json").is_file()
        assert "near/adaptive" in capsys.readouterr().out

    def test_csv_shape(self, tiny_config, tmp_path):
        out = tmp_path / "out"
        main(["run", "--config", str(tiny_config), "--out", str(out)])
        lines = (out / "near" / "adaptive" / "seed1.csv").read_text().splitlines()
        assert lines[0] == GOLDEN_HEADER
        assert len(lines) == 41  # header + one row per slot
        first = lines[1].split(",")
        assert first[0] == "0" and first[-1] == "0"  # priming slot, not greedy
        assert float(first[10]) == 1.0  # epsilon starts at 1

    def test_seed_flag_overrides_config(self, tiny_config, tmp_path):
        out = tmp_path / "out"
        main(["run", "--config", str(tiny_config), "--out", str(out), "--seed", "7"])
        assert (out / "near" / "adaptive" / "seed7.csv").is_file()
        doc = json.loads((out / "near" / "adaptive" / "summary.json").read_text())
        assert list(doc["seeds"].keys()) == ["7"]

    def test_mode_flag_restricts(self, tiny_config, tmp_path):
        out = tmp_path / "out"
        main(["run", "--config", str(tiny_config), "--out", str(out),
              "--mode", "adaptive"])
        assert (out / "near" / "adaptive").is_dir()
        assert not (out / "near" / "fixed64").exists()

    def test_repeat_runs_are_byte_identical(self, tiny_config, tmp_path):
        out_a, out_b = tmp_path / "a", tmp_path / "b"
        for out in (out_a, out_b):
            main(["run", "--config", str(tiny_config), "--out", str(out),
                  "--seed", "7"])
        assert read_tree(out_a) == read_tree(out_b)

    def test_summary_reflects_the_episode(self, tiny_config, tmp_path):
        out = tmp_path / "out"
        main(["run", "--config", str(tiny_config), "--out", str(out)])
        doc = json.loads((out / "near" / "fixed64" / "summary.json").read_text())
        rec = doc["seeds"]["1"]
        assert rec["slots"] == 40 and rec["window"] == 10
        assert rec["modal_action"]["order"] == 64
        assert 0.0 <= rec["ber_bob"]["mean"] <= 1.0
        assert math.isfinite(rec["utility"]["mean"])

    def test_unwritable_out_path(self, tiny_config, tmp_path, capsys):
        blocked = tmp_path / "blocked"
        blocked.write_text("a file, not a directory\n")
        code = main(["run", "--config", str(tiny_config), "--out", str(blocked)])
        assert code == 2
        assert "failed" in capsys.readouterr().err


class TestSweep:
    def test_single_seed_sweep_matches_run(self, tiny_config, tmp_path):
        run_out, sweep_out = tmp_path / "run", tmp_path / "sweep"
        main(["run", "--config", str(tiny_config), "--out", str(run_out),
              "--seed", "3"])
        main(["sweep", "--config", str(tiny_config), "--out", str(sweep_out),
              "--seeds", "3"])
        run_tree = read_tree(run_out)
        sweep_tree = read_tree(sweep_out)
        extra = sweep_tree.pop("sweep_summary.json", None)
        assert extra is not None
        assert sweep_tree == run_tree

    def test_aggregate_over_seeds(self, tiny_config, tmp_path):
        out = tmp_path / "out"
        assert main(["sweep", "--config", str(tiny_config), "--out", str(out),
                     "--seeds", "1,2,3"]) == 0
        doc = json.loads((out / "sweep_summary.json").read_text())
        assert doc["seeds"] == [1, 2, 3]
        block = doc["scenarios"]["near"]["adaptive"]
        assert sorted(block["per_seed"].keys()) == ["1", "2", "3"]
        means = [block["per_seed"][s]["utility"]["mean"] for s in ("1", "2", "3")]
        assert block["aggregate"]["utility"]["mean"] == pytest.approx(
            sum(means) / 3.0
        )

    @pytest.mark.parametrize("seeds", ["", " , ", "a,b", "1,2,1"])
    def test_bad_seed_lists(self, tiny_config, tmp_path, seeds, capsys):
        code = main(["sweep", "--config", str(tiny_config),
                     "--out", str(tmp_path / "out"), "--seeds", seeds])
        assert code == 1
        assert "seeds" in capsys.readouterr().err


class TestExitCodes:
    def test_missing_section_names_it(self, tmp_path, capsys):
        broken = tmp_path / "broken.toml"
        broken.write_text(TINY_TOML.replace("[noise]\naverage_power_dbm = -98.82\n", ""))
        code = main(["run", "--config", str(broken), "--out", str(tmp_path / "o")])
        assert code == 1
        assert "[noise]" in capsys.readouterr().err

    def test_malformed_toml(self, tmp_path, capsys):
        broken = tmp_path / "broken.toml"
        broken.write_text("this is not toml [\n")
        code = main(["run", "--config", str(broken), "--out", str(tmp_path / "o")])
        assert code == 1
        assert "config" in capsys.readouterr().err

    def test_usage_error(self):
        with pytest.raises(SystemExit) as info:
            main([])
        assert info.value.code == 1

    def test_unknown_flag(self):
        with pytest.raises(SystemExit) as info:
            main(["run", "--frobnicate"])
        assert info.value.code == 1

    def test_validate_checks_config_first(self, tmp_path, capsys):
        code = main(["validate", "--config", str(tmp_path / "nope.toml")])
        assert code == 1
        assert "config" in capsys.readouterr().err


class TestValidate:
    def test_fast_suite_passes(self, capsys):
        assert main(["validate", "--validate-level", "fast"]) == 0
        out = capsys.readouterr().out
        assert out.count("PASS") == 8
        assert "FAIL" not in out

    def test_tampered_ber_constant_is_caught(self, monkeypatch, capsys):
        """A classic transcription slip — dropping the sqrt(2) that maps the
        Gaussian tail onto erfc — must fail validation, not pass silently."""
        orig = metrics.pam_ber

        def tampered(M, g, sigma, avg_symbol_energy):
            return orig(M, g * math.sqrt(2.0), sigma, avg_symbol_energy)

        monkeypatch.setattr(metrics, "pam_ber", tampered)
        code = main(["validate", "--validate-level", "fast"])
        captured = capsys.readouterr()
        assert code == 3
        assert "ber-enumeration" in captured.err
        assert "FAIL" in captured.out
