import json
import subprocess
import sys

import pytest

from uzeta.cli import (
    ConfigError,
    RunConfig,
    default_manifest,
    main,
    read_cache,
    run_suites,
    write_cache,
)


def cli(*args):
    return subprocess.run(
        [sys.executable, "-m", "uzeta.cli", *args], capture_output=True, text=True
    )


class TestConfig:
    def test_validation(self):
        with pytest.raises(ConfigError):
            RunConfig(ell=4).validate()
        with pytest.raises(ConfigError):
            RunConfig(type_label="G2", ell=9, long_running=True).validate()
        with pytest.raises(ConfigError):
            RunConfig(p=2).validate()
        with pytest.raises(ConfigError):
            RunConfig(r=1).validate()  # needs p
        with pytest.raises(ConfigError):
            RunConfig(type_label="B2", ell=3).validate()  # ell below Coxeter number
        RunConfig(type_label="B2", ell=3, strict=False).validate()
        RunConfig(type_label="A1", ell=3, p=7, r=1).validate()

    def test_g2_gated(self):
        with pytest.raises(ConfigError):
            RunConfig(type_label="G2", ell=7).validate()
        RunConfig(type_label="G2", ell=7, long_running=True).validate()

    def test_default_word(self):
        assert RunConfig(type_label="A2").word() == (1, 2, 1)


class TestCache:
    def test_roundtrip(self, tmp_path):
        path = str(tmp_path / "a2.cache")
        write_cache(RunConfig(type_label="A2"), path)
        meta, data = read_cache(path)
        assert meta["type"] == "A2" and meta["ell_independent"] == "true"
        assert set(data.e_entries) == {(1, 2), (1, 3), (2, 3)}
        assert data.e_entries[(1, 3)]  # the gamma_2 tail

    def test_byte_identical_rebuild(self, tmp_path):
        p1, p2 = str(tmp_path / "one"), str(tmp_path / "two")
        write_cache(RunConfig(type_label="B2", ell=5), p1)
        write_cache(RunConfig(type_label="B2", ell=5), p2)
        assert open(p1, "rb").read() == open(p2, "rb").read()

    def test_version_rejected(self, tmp_path):
        path = tmp_path / "bad.cache"
        path.write_text("something else\n")
        with pytest.raises(ConfigError):
            read_cache(str(path))

    def test_b2_cache_has_denominator_entry(self, tmp_path):
        path = str(tmp_path / "b2.cache")
        write_cache(RunConfig(type_label="B2", ell=5), path)
        _, data = read_cache(path)
        assert any(
            c.denominator_nontrivial()
            for tail in data.e_entries.values()
            for c in tail.values()
        )


class TestManifests:
    def test_sizes(self):
        assert len(default_manifest(RunConfig("A1", 3))) >= 16
        assert len(default_manifest(RunConfig("A1", 5))) >= 14
        assert len(default_manifest(RunConfig("A2", 3))) >= 15
        assert len(default_manifest(RunConfig("A1", 3, p=7, r=1))) >= 10

    def test_no_manifest_for_unknown(self):
        with pytest.raises(ConfigError):
            default_manifest(RunConfig("B2", 5))


class TestSubcommands:
    def test_relations(self):
        r = cli("relations", "--type", "A2", "1", "3")
        assert r.returncode == 0 and "q^-1" in r.stdout

    def test_relations_rejects_equal_indices(self):
        assert cli("relations", "--type", "A2", "2", "2").returncode == 2

    def test_skeleton(self):
        r = cli("skeleton", "--type", "A1", "--ell", "3", "trivial")
        rec = json.loads(r.stdout.strip().splitlines()[-1])
        assert rec["skeleton"] == [[1]]
        r = cli("skeleton", "--type", "A1", "--ell", "3", "simple(2)")
        rec = json.loads(r.stdout.strip().splitlines()[-1])
        assert rec["skeleton"] == []

    def test_module_export(self, tmp_path):
        out = str(tmp_path / "m.txt")
        r = cli("module", "--type", "A1", "--ell", "3", "verma(1)", "--out", out)
        assert r.returncode == 0
        text = open(out).read()
        assert text.startswith("dim 3") and "generator F1" in text

    def test_betti_table(self):
        r = cli("betti", "--type", "A1", "--ell", "3")
        assert r.returncode == 0 and "degree" in r.stdout

    def test_bad_spec_is_config_error(self):
        r = cli("module", "--type", "A1", "--ell", "3", "bogus(1)")
        assert r.returncode == 2

    def test_permissive_banner(self):
        r = cli("betti", "--type", "A1", "--ell", "3", "--permissive")
        assert "permissive" in r.stdout


class TestVerify:
    def test_a1_all_green(self, tmp_path):
        out = str(tmp_path / "report.jsonl")
        r = cli("verify", "--type", "A1", "--ell", "3", "--suite", "rootcrit", "--out", out)
        assert r.returncode == 0, r.stderr
        recs = [json.loads(l) for l in open(out)]
        assert recs and all(rec["agree"] for rec in recs)

    def test_determinism_byte_identical(self, tmp_path):
        outs = []
        for name in ("a", "b"):
            out = str(tmp_path / name)
            r = cli("verify", "--type", "A1", "--ell", "3", "--suite", "zdual", "--out", out)
            assert r.returncode == 0
            outs.append(open(out, "rb").read())
        assert outs[0] == outs[1]

    def test_corrupt_cache_detected(self, tmp_path):
        path = str(tmp_path / "b2.cache")
        write_cache(RunConfig("B2", 5), path)
        bad = str(tmp_path / "bad.cache")
        open(bad, "w").write(open(path).read().replace("s_keys=2", "s_keys=5"))
        r = cli("verify", "--type", "B2", "--ell", "5", "--cache", bad, "--suite", "integrals")
        assert r.returncode == 2 and "vanishes" in r.stderr

    def test_run_suites_in_process(self):
        cfg = RunConfig("A1", 3)
        recs = run_suites(cfg, ["integrals"], [])
        assert all(r["agree"] for r in recs)
