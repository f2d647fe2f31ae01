"""Harness: statistics, determinism, schemas, config round-trips."""

import csv
import math
from pathlib import Path

import numpy as np
import pytest

from alab.bench import (
    ExperimentConfig,
    derive_seed,
    median_ci,
    parse_config_pairs,
    run,
)
from alab.errors import ConfigError

RNG = np.random.default_rng(53)


def binom_cdf_exact(k, m):
    """Oracle: P(K <= k) for K ~ Binom(m, 1/2) via exact integer arithmetic."""
    return sum(math.comb(m, j) for j in range(k + 1)) / 2**m


class TestMedianCI:
    def test_samples_1_to_50(self):
        med, lo, hi = median_ci(range(1, 51))
        assert med == 25.5
        # oracle: the chosen ranks must have two-sided binomial tail <= 0.05
        l = int(lo)  # samples are 1..50 so the value equals its rank
        u = int(hi)
        assert u == 50 + 1 - l
        assert 2 * binom_cdf_exact(l - 1, 50) <= 0.05
        # and one rank further in would break coverage
        assert 2 * binom_cdf_exact(l, 50) > 0.05

    def test_all_equal_samples(self):
        med, lo, hi = median_ci([3.0] * 12)
        assert med == lo == hi == 3.0

    def test_five_samples_insufficient(self):
        # extreme ranks give two-sided tail 2^-4 = 0.0625 > 0.05
        with pytest.raises(ValueError):
            median_ci([1.0, 2.0, 3.0, 4.0, 5.0])

    def test_six_samples_ok(self):
        med, lo, hi = median_ci([1, 2, 3, 4, 5, 6])
        assert (med, lo, hi) == (3.5, 1.0, 6.0)

    def test_matches_oracle_for_various_m(self):
        for m in (6, 10, 25, 50, 101):
            data = list(range(1, m + 1))
            _, lo, hi = median_ci(data)
            l, u = int(lo), int(hi)
            assert u == m + 1 - l
            assert 2 * binom_cdf_exact(l - 1, m) <= 0.05
            assert 2 * binom_cdf_exact(l, m) > 0.05


class TestSeeds:
    def test_deterministic_and_distinct(self):
        a = derive_seed(7, 8, 0)
        b = derive_seed(7, 8, 0)
        c = derive_seed(7, 8, 1)
        assert a == b
        assert a != c


class TestConfig:
    def test_roundtrip_through_text(self):
        cfg = ExperimentConfig(
            kind="exact-cover",
            n_values=(6, 8),
            instances=10,
            seed=7,
            E=2.5,
            window=(0.2, 0.21),
            t_min=0.1,
            t_max=100.0,
            out_dir="runs/x",
        )
        again = ExperimentConfig.from_text(cfg.to_text())
        assert again == cfg

    def test_rejects_unknown_kind(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(kind="warp-drive")

    def test_rejects_bad_window(self):
        with pytest.raises(ConfigError):
            ExperimentConfig(kind="two-level", window=(0.3, 0.2))

    def test_parse_rejects_unknown_key(self):
        with pytest.raises(ConfigError):
            parse_config_pairs("kind=two-level\nwarp=9\n")

    def test_parse_comments_and_blanks(self):
        pairs = parse_config_pairs("# comment\n\nkind=two-level\nseed=3\n")
        assert pairs == {"kind": "two-level", "seed": 3}

    def test_kind_defaults_resolved(self):
        cfg = ExperimentConfig(kind="two-level").resolved()
        assert cfg.t_min == 20.0
        assert cfg.t_max == 160.0


class TestDeterminism:
    def _run_exact_cover(self, out_dir, workers=1):
        cfg = ExperimentConfig(
            kind="exact-cover",
            n_values=(4,),
            instances=3,
            seed=7,
            workers=workers,
            out_dir=str(out_dir),
        )
        return run(cfg)

    def test_rerun_is_byte_identical(self, tmp_path):
        self._run_exact_cover(tmp_path / "a")
        self._run_exact_cover(tmp_path / "b")
        for name in ("required_t.csv", "medians.csv"):
            a = (tmp_path / "a" / name).read_bytes()
            b = (tmp_path / "b" / name).read_bytes()
            assert a == b

    def test_parallel_matches_serial(self, tmp_path):
        self._run_exact_cover(tmp_path / "serial", workers=1)
        self._run_exact_cover(tmp_path / "par", workers=2)
        for name in ("required_t.csv", "medians.csv"):
            a = (tmp_path / "serial" / name).read_bytes()
            b = (tmp_path / "par" / name).read_bytes()
            assert a == b

    def test_required_t_schema_and_seeds(self, tmp_path):
        record = self._run_exact_cover(tmp_path / "x")
        with open(tmp_path / "x" / "required_t.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert set(rows[0].keys()) == {
            "n", "instance_id", "seed", "hb_kind", "required_T", "achieved_b", "status"
        }
        # every row carries the seed that regenerates its instance
        for row in rows:
            assert int(row["seed"]) == derive_seed(7, int(row["n"]), int(row["instance_id"]))
        assert record.error_rows == 0


class TestSmallExperiments:
    def test_two_level_emits_csv_and_slope(self, tmp_path):
        cfg = ExperimentConfig(
            kind="two-level",
            t_min=20.0,
            t_max=60.0,
            num_samples=41,
            out_dir=str(tmp_path),
        )
        record = run(cfg)
        assert (tmp_path / "twolevel.csv").exists()
        assert "fitted_slope" in record.results
        with open(tmp_path / "twolevel.csv") as fh:
            header = fh.readline().strip().split(",")
        assert header == ["T", "q", "envelope_q"]

    def test_s_diagnostic_kind(self, tmp_path):
        cfg = ExperimentConfig(
            kind="s-diagnostic", t_values=(1.0,), out_dir=str(tmp_path)
        )
        record = run(cfg)
        files = list(tmp_path.glob("s_diag_T*.csv"))
        assert len(files) == 1
        key = next(iter(record.results))
        assert record.results[key]["checks"]["s_vanishes_at_T"] is True

    def test_perm_ensemble_kind(self, tmp_path):
        cfg = ExperimentConfig(
            kind="perm-ensemble", t_values=(0.5,), out_dir=str(tmp_path)
        )
        run(cfg)
        with open(tmp_path / "bounds.csv") as fh:
            rows = list(csv.DictReader(fh))
        assert {row["theorem"] for row in rows} == {"lemma1", "theorem2"}
        assert all(row["satisfied"] == "True" for row in rows)

    def test_bounds_check_kind_no_violations(self, tmp_path):
        cfg = ExperimentConfig(
            kind="bounds-check",
            n_values=(4,),
            t_values=(0.5, 5.0),
            out_dir=str(tmp_path),
        )
        record = run(cfg)
        assert record.results["violations"] == 0

    def test_run_record_written(self, tmp_path):
        cfg = ExperimentConfig(
            kind="two-level", t_min=20.0, t_max=40.0, num_samples=21,
            out_dir=str(tmp_path),
        )
        run(cfg)
        assert (tmp_path / "run_record.json").exists()
