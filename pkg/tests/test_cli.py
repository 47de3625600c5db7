import json

import numpy as np
import pytest

from roegap import load_space, save_partial_translation, PartialTranslation
from roegap.cli import main
from roegap.config import RunConfig, load_config_file
from roegap.errors import ConfigError
from roegap.groups import family_from_descriptor


def run(*argv):
    return main(list(argv))


class TestGenerate:
    def test_two_cycles(self, tmp_path, capsys):
        code = run("generate", "--family", "cyclic:4,8", "--out", str(tmp_path))
        assert code == 0
        out = capsys.readouterr().out
        assert "system members: 3" in out
        space = load_space(tmp_path / "space.txt")
        assert space.sizes == (4, 8)
        assert (tmp_path / "system.txt").read_text().startswith("system v1")

    def test_sl2_size(self, tmp_path):
        assert run("generate", "--family", "sl2:3", "--out", str(tmp_path)) == 0
        assert load_space(tmp_path / "space.txt").sizes == (24,)

    def test_empty_family_is_usage_error(self, tmp_path):
        assert run("generate", "--out", str(tmp_path)) == 2

    def test_bad_descriptor(self, tmp_path):
        assert run("generate", "--family", "cyclic:", "--out", str(tmp_path)) == 2


class TestGap:
    def test_cycles_nonuniform_at_default_threshold(self, tmp_path, capsys):
        code = run("gap", "--family", "cyclic:4,8,16,32,64", "--out", str(tmp_path),
                   "--no-figures")
        assert code == 0
        out = capsys.readouterr().out
        assert "NON-UNIFORM" in out
        doc = json.loads((tmp_path / "report.json").read_text())
        assert doc["spectral"]["verdict"]["witness_component"] == 4

    def test_singleton_family_has_zero_lambda(self, tmp_path):
        assert run("gap", "--family", "cyclic:1", "--out", str(tmp_path),
                   "--no-figures") == 0
        doc = json.loads((tmp_path / "report.json").read_text())
        assert doc["spectral"]["components"][0]["lambda"] == 0.0

    def test_csv_columns(self, tmp_path):
        run("gap", "--family", "cyclic:4", "--p", "1.5,2", "--out", str(tmp_path),
            "--no-figures")
        lines = (tmp_path / "report.csv").read_text().splitlines()
        assert lines[0] == ("component_id,size,n,p,lambda,lambda_lo_p,lambda_hi_p,"
                            "S_bound,c_bound,iters,flag")
        assert len(lines) == 3  # one row per (component, p)

    def test_determinism_same_config(self, tmp_path):
        a, b = tmp_path / "a", tmp_path / "b"
        argv = ["gap", "--family", "cyclic:4,8,16", "--p", "1.5,2,3", "--seed", "7",
                "--no-figures"]
        assert run(*argv, "--out", str(a)) == 0
        assert run(*argv, "--out", str(b)) == 0
        da = json.loads((a / "report.json").read_text())
        db = json.loads((b / "report.json").read_text())
        assert da["determinism_hash"] == db["determinism_hash"]
        assert (a / "report.csv").read_bytes() == (b / "report.csv").read_bytes()

    def test_different_seed_changes_hash_rarely_matters_but_runs(self, tmp_path):
        assert run("gap", "--family", "cyclic:4", "--seed", "3", "--out",
                   str(tmp_path), "--no-figures") == 0

    def test_worker_count_does_not_change_hash(self, tmp_path):
        a, b = tmp_path / "w1", tmp_path / "w2"
        base = ["gap", "--family", "cyclic:4,8,16", "--seed", "2", "--no-figures"]
        assert run(*base, "--workers", "1", "--out", str(a)) == 0
        assert run(*base, "--workers", "3", "--out", str(b)) == 0
        da = json.loads((a / "report.json").read_text())
        db = json.loads((b / "report.json").read_text())
        assert da["determinism_hash"] == db["determinism_hash"]

    def test_figures_rendered(self, tmp_path):
        run("gap", "--family", "cyclic:4,8", "--out", str(tmp_path), "--decay")
        gap_png = tmp_path / "figures" / "gap_lambda.png"
        decay_png = tmp_path / "figures" / "kazhdan_decay.png"
        assert gap_png.stat().st_size > 1000
        assert decay_png.stat().st_size > 1000

    def test_amplify_section(self, tmp_path):
        assert run("gap", "--family", "cyclic:4", "--amplify", "2", "--out",
                   str(tmp_path), "--no-figures") == 0
        doc = json.loads((tmp_path / "report.json").read_text())
        assert doc["amplified"]["passed"] is True

    def test_loaded_space_without_system(self, tmp_path):
        gen = tmp_path / "gen"
        run("generate", "--family", "cyclic:8", "--out", str(gen))
        code = run("gap", "--space", str(gen / "space.txt"), "--radius", "1",
                   "--out", str(tmp_path / "gap"), "--no-figures")
        assert code == 0


class TestDecompose:
    def test_identity_translation(self, tmp_path):
        fam = family_from_descriptor("cyclic:6")
        pt_file = tmp_path / "v.txt"
        save_partial_translation(
            PartialTranslation.identity_on(fam.space, [{0, 1, 2}]), pt_file)
        code = run("decompose", "--family", "cyclic:6", "--pt", str(pt_file),
                   "--out", str(tmp_path), "--no-figures")
        assert code == 0
        text = (tmp_path / "decomp.txt").read_text()
        assert text.startswith("decomp v1")
        assert all(line.startswith("chi 0 ") for line in text.splitlines()[1:])

    def test_random_batch(self, tmp_path, capsys):
        code = run("decompose", "--family", "cyclic:4,8", "--random", "100",
                   "--out", str(tmp_path), "--no-figures")
        assert code == 0
        assert "100/100 pass" in capsys.readouterr().out

    def test_pair_outside_entourage_is_named(self, tmp_path, capsys):
        fam = family_from_descriptor("cyclic:8")
        bad = PartialTranslation(fam.space, [(np.array([3]), np.array([0]))])
        pt_file = tmp_path / "bad.txt"
        save_partial_translation(bad, pt_file)
        code = run("decompose", "--family", "cyclic:8", "--pt", str(pt_file),
                   "--out", str(tmp_path), "--no-figures")
        assert code == 1
        assert "(3, 0)" in capsys.readouterr().err

    def test_needs_input(self, tmp_path):
        assert run("decompose", "--family", "cyclic:4", "--out", str(tmp_path)) == 2


class TestMazurCommand:
    def test_default_suite_passes(self, tmp_path, capsys):
        code = run("mazur", "--family", "cyclic:8,16", "--p", "1.5,2,3",
                   "--out", str(tmp_path), "--no-figures")
        assert code == 0
        assert "PASS" in capsys.readouterr().out
        lines = (tmp_path / "mazur.csv").read_text().splitlines()
        assert lines[0] == "experiment,p,q,k,R,defect_p,defect_2,bound,pass"
        assert any(line.startswith("c0_slope") for line in lines)

    def test_p2_round_trip_rows_exact(self, tmp_path):
        run("mazur", "--family", "cyclic:8", "--p", "2", "--out", str(tmp_path),
            "--no-figures")
        doc = json.loads((tmp_path / "report.json").read_text())
        rows = [r for r in doc["mazur"]["rows"] if r["experiment"] == "round_trip"]
        assert rows and all(float(r["defect_p"]) < 1e-12 for r in rows)

    def test_figure(self, tmp_path):
        run("mazur", "--family", "cyclic:8", "--out", str(tmp_path))
        assert (tmp_path / "figures" / "mazur_defects.png").stat().st_size > 1000


class TestNet:
    def test_sixteen_cycle_radius_two(self, tmp_path, capsys):
        code = run("net", "--family", "cyclic:16", "--radius", "2",
                   "--out", str(tmp_path), "--no-figures")
        assert code == 0
        doc = json.loads((tmp_path / "report.json").read_text())
        assert doc["net"]["sizes"] == [8]
        net_space = load_space(tmp_path / "net_space.txt")
        assert net_space.sizes == (8,)


class TestKazhdanCommand:
    def test_decay_csv(self, tmp_path):
        code = run("kazhdan", "--family", "cyclic:4,8", "--kmax", "50",
                   "--out", str(tmp_path), "--no-figures")
        assert code == 0
        lines = (tmp_path / "decay.csv").read_text().splitlines()
        assert lines[0] == "component_id,k,norm,lambda_pow"
        first = lines[1].split(",")
        assert first[0] == "0" and first[1] == "1"
        assert float(first[2]) == pytest.approx(2 / 3, abs=1e-12)


class TestReportMerge:
    def test_merge(self, tmp_path, capsys):
        a, b = tmp_path / "a", tmp_path / "b"
        run("gap", "--family", "cyclic:4", "--out", str(a), "--no-figures")
        run("mazur", "--family", "cyclic:4", "--out", str(b), "--no-figures")
        code = run("report", str(a / "report.json"), str(b / "report.json"),
                   "--out", str(tmp_path / "m"))
        assert code == 0
        merged = json.loads((tmp_path / "m" / "merged_report.json").read_text())
        assert "spectral" in merged and "mazur" in merged


class TestConfigFile:
    def test_file_plus_override(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("family = cyclic:4,8\nseed = 5\np = 1.5,2\n# comment\n")
        code = run("gap", "--config", str(cfg), "--seed", "9",
                   "--out", str(tmp_path / "o"), "--no-figures")
        assert code == 0
        doc = json.loads((tmp_path / "o" / "report.json").read_text())
        assert doc["config"]["seed"] == 9  # flag wins
        assert doc["config"]["family"] == "cyclic:4,8"
        assert doc["config"]["p_values"] == [1.5, 2.0]

    def test_unknown_key_rejected(self, tmp_path):
        cfg = tmp_path / "bad.cfg"
        cfg.write_text("familly = cyclic:4\n")
        assert run("gap", "--config", str(cfg), "--out", str(tmp_path)) == 2

    def test_load_config_file_parses_types(self, tmp_path):
        cfg = tmp_path / "run.cfg"
        cfg.write_text("threshold = 0.5\nfigures = false\nworkers = 2\n")
        values = load_config_file(cfg)
        assert values == {"threshold": 0.5, "figures": False, "workers": 2}

    def test_bad_runconfig_values(self):
        with pytest.raises(ConfigError):
            RunConfig(budget=-1)
