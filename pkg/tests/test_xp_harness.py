import json
import math
from fractions import Fraction

import numpy as np
import pytest

from descartes_lab import xp_harness as xp
from descartes_lab.rng import CHUNK, chunk_rng, chunk_sizes, sample_law
from oracles.kac import KAC_FROZEN


class TestDist:
    @pytest.mark.parametrize("text", ["rademacher", "gaussian", "uniform", "cauchy"])
    def test_plain_laws(self, text):
        assert xp.parse_dist(text).kind == text

    @pytest.mark.parametrize("text", ["atom0{0.3}", "atom0{p0=0.3}"])
    def test_atom0(self, text):
        d = xp.parse_dist(text)
        assert d.kind == "atom0" and d.p0 == 0.3 and str(d) == "atom0{0.3}"

    def test_multiset(self):
        d = xp.parse_dist("multiset{1, 1, 1/2}")
        assert d.values == (1, 1, Fraction(1, 2))

    @pytest.mark.parametrize("text", ["atom0{1}", "atom0{-0.1}", "atom0", "multiset{0,0}", "multiset{}",
                                      "poisson", "gaussian{2}", "atom0{x}", "!!"])
    def test_rejects(self, text):
        with pytest.raises(xp.ConfigError):
            xp.parse_dist(text)


class TestConfig:
    def test_defaults_per_experiment(self):
        cfg = xp.ExperimentConfig("ac-scan")
        assert cfg.n_list == (4, 5, 6, 7, 8, 9, 10) and cfg.trials == 100_000
        assert cfg.L_grid == (0, Fraction(1, 2), 1, 2) and cfg.h == 1

    @pytest.mark.parametrize("kw", [
        {"n_list": (4, 4)}, {"n_list": (8, 4)}, {"n_list": (0, 4)}, {"trials": 0}, {"workers": 0},
        {"format": "xml"}, {"seed": -1}, {"seed": 2**64}, {"families": ("zipf",)},
    ])
    def test_invalid(self, kw):
        with pytest.raises(xp.ConfigError):
            xp.ExperimentConfig("zero-scan", **kw)

    def test_unknown_experiment(self):
        with pytest.raises(xp.ConfigError):
            xp.ExperimentConfig("nope")

    def test_mapping_coercion_and_overrides(self):
        cfg = xp.config_from_mapping({"experiment": "zero-scan", "n_list": "8, 16", "trials": "5",
                                      "dist": "atom0{0.2}"}, seed=7, workers=None)
        assert cfg.n_list == (8, 16) and cfg.trials == 5 and cfg.dist.p0 == 0.2 and cfg.seed == 7

    def test_unknown_key(self):
        with pytest.raises(xp.ConfigError):
            xp.config_from_mapping({"experiment": "props", "colour": "red"})

    def test_bad_number(self):
        with pytest.raises(xp.ConfigError):
            xp.config_from_mapping({"experiment": "props", "trials": "many"})

    def test_key_value_file(self, tmp_path):
        p = tmp_path / "c.cfg"
        p.write_text("# scan\nexperiment = zero-scan\nn_list: 4,8\ndist = multiset{1,2}  # comment\n")
        cfg = xp.load_config(p, trials=3)
        assert cfg.n_list == (4, 8) and cfg.trials == 3 and cfg.dist.values == (1, 2)

    def test_json_file(self, tmp_path):
        p = tmp_path / "c.json"
        p.write_text(json.dumps({"experiment": "ac-scan", "n_list": [4, 5], "L_grid": ["0", "1/2"]}))
        cfg = xp.load_config(p)
        assert cfg.L_grid == (0, Fraction(1, 2))

    @pytest.mark.parametrize("text", ["{not json", "[1, 2]", "just words here"])
    def test_malformed_file(self, tmp_path, text):
        p = tmp_path / "c.cfg"
        p.write_text(text)
        with pytest.raises(xp.ConfigError):
            xp.load_config(p, experiment="props")


class TestRng:
    def test_chunking(self):
        assert chunk_sizes(25_001) == [CHUNK, CHUNK, 5_001]
        assert chunk_sizes(7, 3) == [3, 3, 1]

    def test_streams_are_keyed(self):
        a = chunk_rng(1, 2, 3).random(4)
        assert np.array_equal(a, chunk_rng(1, 2, 3).random(4))
        assert not np.array_equal(a, chunk_rng(1, 2, 4).random(4))

    def test_laws(self):
        rng = chunk_rng(0)
        u = sample_law(rng, "uniform", 1000)
        assert u.min() >= -1 and u.max() <= 1
        with pytest.raises(ValueError):
            sample_law(rng, "poisson", 3)


class TestZeroScan:
    def test_geometric_series_multiset(self):
        cfg = xp.ExperimentConfig("zero-scan", n_list=(3, 4, 5, 6), trials=20, dist="multiset{1}")
        res = xp.run(cfg)
        assert res.values("mean_n_star") == {3: 1.0, 4: 0.0, 5: 1.0, 6: 0.0}
        assert res.ok

    def test_gaussian_matches_kac(self):
        res = xp.run(xp.ExperimentConfig("zero-scan", n_list=(64,), trials=2000, dist="gaussian"))
        assert res.values("mean_n_star")[64] == pytest.approx(KAC_FROZEN[64], rel=0.02)
        assert res.values("sign_bound_violations")[64] == 0

    def test_regions_sum_to_n_star(self):
        res = xp.run(xp.ExperimentConfig("zero-scan", n_list=(10,), trials=300, dist="cauchy"))
        parts = sum(res.values(f"mean_{k}")[10] for k in
                    ("at_one", "at_minus_one", "in_pos_unit", "in_neg_unit", "pos_outside", "neg_outside"))
        assert parts == pytest.approx(res.values("mean_n_star")[10])

    def test_atom0_rows(self):
        res = xp.run(xp.ExperimentConfig("zero-scan", n_list=(20,), trials=2000, dist="atom0{0.3}"))
        assert res.values("zero_multiplicity_reference")[20] == pytest.approx(3 / 7)
        assert res.values("zero_multiplicity_chi2_pvalue")[20] > 0.001
        assert res.values("all_zero_samples")[20] == 0

    def test_truncated_geometric_mean(self):
        # direct sum for p0 = 1/2, n = 2: (0*1/2 + 1*1/4 + 2*1/8) / (7/8)
        assert xp.truncated_geometric_mean(0.5, 2) == pytest.approx((0.25 + 0.25) / 0.875)
        assert xp.truncated_geometric_mean(0.3, 500) == pytest.approx(0.3 / 0.7)

    def test_all_zero_samples_are_excluded(self):
        res = xp.run(xp.ExperimentConfig("zero-scan", n_list=(1,), trials=4000, dist="atom0{0.5}"))
        skipped = res.values("all_zero_samples")[1]
        assert 800 < skipped < 1200  # about a quarter of draws


class TestWindowScan:
    def test_three_point_row(self):
        res = xp.run(xp.ExperimentConfig("ac-scan", n_list=(3,), families=("arith",)))
        p = res.values("p[arith:L=0]")[3]
        assert p == pytest.approx(2 / 3)
        assert res.values("p[arith:L=2]")[3] == 0
        assert res.ok

    def test_slope_rows_and_event_table(self):
        res = xp.run(xp.ExperimentConfig("ac-scan", n_list=(4, 5, 6), families=("two_atom",)))
        assert "slope_log_p_vs_log_n[two_atom:L=0]" in {r.metric for r in res.rows}
        header, rows = res.tables["events"]
        assert len(rows) == 3 * 4 and header[0] == "event_kind"

    def test_monte_carlo_beyond_cap(self):
        res = xp.run(xp.ExperimentConfig("ac-scan", n_list=(12,), trials=5000, families=("arith",),
                                         L_grid=(Fraction(0),)))
        row = next(r for r in res.rows if r.metric == "p[arith:L=0]")
        assert row.trials == 5000 and row.stderr > 0


class TestOutputs:
    def test_csv_sidecars_and_plots(self, tmp_path):
        cfg = xp.ExperimentConfig("density-scan", n_list=(3,), out=str(tmp_path / "d.csv"))
        res = xp.run(cfg)
        paths = {p.name for p in xp.write_result(res)}
        assert {"d.csv", "d.density_n3.csv", "d.model_n3.json", "d.csv.meta.json", "d.gp", "d.png"} <= paths
        head = (tmp_path / "d.csv").read_text().splitlines()[0]
        assert head == ",".join(xp.ROW_FIELDS)
        table = (tmp_path / "d.density_n3.csv").read_text().splitlines()[0]
        assert table == "t,p_exact,p_fourier,envelope_value"
        meta = json.loads((tmp_path / "d.csv.meta.json").read_text())
        assert meta["config"]["n_list"] == [3] and "Philox" in meta["rng"]
        assert "plot" in (tmp_path / "d.gp").read_text()

    def test_json_format(self, tmp_path):
        cfg = xp.ExperimentConfig("zero-scan", n_list=(4,), trials=5, format="json",
                                  out=str(tmp_path / "z.json"))
        xp.write_result(xp.run(cfg), plots=False)
        rows = json.loads((tmp_path / "z.json").read_text())
        assert set(rows[0]) == set(xp.ROW_FIELDS)

    def test_body_without_wall_clock(self):
        text = "a,wall_ms,b\n1,2.5,3\n"
        assert xp.csv_body_without(text) == "a,b\n1,3\n"

    @pytest.mark.parametrize("experiment, kw", [
        ("zero-scan", {"n_list": (8, 16), "trials": 600, "dist": "gaussian"}),
        ("ac-scan", {"n_list": (5, 11), "trials": 20_000}),
    ])
    def test_worker_count_does_not_change_rows(self, experiment, kw):
        bodies = set()
        for workers in (1, 3):
            res = xp.run(xp.ExperimentConfig(experiment, workers=workers, **kw))
            bodies.add(xp.csv_body_without(xp.rows_to_csv(res.rows)))
        assert len(bodies) == 1


class TestPropertySuite:
    def test_small_scale_passes(self):
        cfg = xp.ExperimentConfig("props", trials=20_000, scale=0.2)
        res = xp.run(cfg)
        passed = {r.metric: r.value for r in res.rows if r.metric.endswith(".pass")}
        assert len(passed) >= 20
        assert res.ok, res.failures
        assert all(math.isfinite(r.wall_ms) for r in res.rows if r.metric.endswith(".pass"))
