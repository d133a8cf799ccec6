"""Acceptance suite: each test checks one criterion at its stated tolerance.

A summary line per criterion (PASS or FAIL) is printed at the end of the run.
"""
import time
from fractions import Fraction

from descartes_lab import checks as ck
from descartes_lab import perm_lab as pl
from descartes_lab import xp_harness as xp
from descartes_lab.cli import main
from oracles.kac import KAC_FROZEN

SEED = 0
FAMILIES = pl.WEIGHT_FAMILIES


def _fmt(d):
    return ", ".join(f"{k}={v:.4g}" if isinstance(v, float) else f"{k}={v}" for k, v in d.items())


def test_exact_window_probability_decays_like_one_over_n(acceptance):
    t0 = time.perf_counter()
    cfg = xp.ExperimentConfig("ac-scan", n_list=tuple(range(4, 11)), L_grid=(Fraction(0),), seed=SEED)
    res = xp.run(cfg)
    secs = time.perf_counter() - t0
    slopes = {f: res.values(f"slope_log_p_vs_log_n[{f}:L=0]")[None] for f in FAMILIES}
    exact = all(r.trials == 0 for r in res.rows if r.metric.startswith("p["))
    ok = exact and all(s <= -0.7 for s in slopes.values()) and secs <= 120
    assert acceptance("window decay in n (exact, n=4..10, slope <= -0.7)", ok,
                      _fmt({**slopes, "seconds": secs})), slopes


def test_window_probability_decays_in_shift(acceptance):
    t0 = time.perf_counter()
    exact = xp.run(xp.ExperimentConfig("ac-scan", n_list=(9,), seed=SEED))
    detail = {}
    ok = exact.ok
    for f in FAMILIES:
        ok &= exact.values(f"nonincreasing_in_abs_L[{f}]")[9] == 1
        w = pl.weight_family(f, 9, SEED)
        reach = pl.window_support_bound(w) + 1
        beyond = [L for L in exact.config.L_grid if abs(L) * 9 > reach]
        ok &= bool(beyond) and all(exact.values(f"p[{f}:L={L}]")[9] == 0 for L in beyond)
        detail[f"{f}@9 zero from |L|"] = str(min(beyond)) if beyond else "never"
    mc = xp.run(xp.ExperimentConfig("ac-scan", n_list=(200,), trials=10**6, seed=SEED))
    for f in FAMILIES:
        ps = [mc.values(f"p[{f}:L={L}]")[200] for L in mc.config.L_grid]
        pos = [p for p in ps if p > 0]
        slope = mc.values(f"slope_log_p_vs_abs_L[{f}]")[200]
        ok &= len(pos) >= 2 and all(b < a for a, b in zip(pos, pos[1:])) and slope < 0
        detail[f"{f}@200 slope"] = slope
    secs = time.perf_counter() - t0
    ok &= secs <= 300
    detail["seconds"] = secs
    assert acceptance("window decay in |L| (exact n=9, MC n=200 at 1e6)", ok, _fmt(detail)), detail


def test_real_zero_growth_matches_kac_and_is_logarithmic(acceptance):
    t0 = time.perf_counter()
    ns = tuple(2 ** k for k in range(4, 11))
    detail = {}
    ok = True
    g = xp.run(xp.ExperimentConfig("zero-scan", n_list=ns, trials=10_000, dist="gaussian", seed=SEED))
    worst = max(abs(g.values("mean_n_star")[n] / KAC_FROZEN[n] - 1) for n in ns)
    ok &= worst <= 0.02 and g.ok
    detail["gaussian max rel err vs Kac"] = worst
    detail["gaussian ratio"] = g.values("n_star_over_log_n_max_min_ratio")[None]
    ok &= detail["gaussian ratio"] <= 1.5
    for dist in ("rademacher", "cauchy"):
        r = xp.run(xp.ExperimentConfig("zero-scan", n_list=ns, trials=2_000, dist=dist, seed=SEED))
        ratio = r.values("n_star_over_log_n_max_min_ratio")[None]
        ok &= ratio <= 1.5 and r.ok
        detail[f"{dist} ratio"] = ratio
    secs = time.perf_counter() - t0
    ok &= secs <= 1800
    detail["seconds"] = secs
    assert acceptance("real-zero growth (Kac within 2%, ratio <= 1.5)", ok, _fmt(detail)), detail


def test_unit_interval_sign_bounds_hold(acceptance):
    checks = ck.check_sign_bounds(10_000, SEED, max_degree=64)
    bad = {c.name: c.value for c in checks[:2]}
    ok = all(v == 0 for v in bad.values()) and checks[0].trials >= 9_900
    assert acceptance("sign-sequence root bounds (1e4 polys, degree <= 64)", ok,
                      _fmt({**bad, "polys": checks[0].trials})), bad


def test_zero_multiplicity_with_atom_at_zero(acceptance):
    res = xp.run(xp.ExperimentConfig("zero-scan", n_list=(50,), trials=10_000, dist="atom0{0.3}", seed=SEED))
    row = next(r for r in res.rows if r.metric == "mean_zero_multiplicity")
    tg = xp.truncated_geometric_mean(0.3, 50)
    ok = row.value <= 3 / 7 + 3 * row.stderr and abs(row.value - tg) <= 3 * row.stderr
    detail = {"mean": row.value, "stderr": row.stderr, "p0/(1-p0)": 3 / 7, "truncated": tg}
    assert acceptance("multiplicity at zero (atom0 p0=0.3, n=50)", ok, _fmt(detail)), detail


def test_simplex_variance_bound(acceptance):
    exact = ck.check_simplex_variance_exact(range(2, 9), 100, SEED)
    mc = ck.check_simplex_variance_mc(range(2, 9), 10**6, SEED)
    ok = exact.passed and mc.passed
    detail = {"violations": exact.value, "worst MC z": mc.value}
    assert acceptance("simplex variance bound and MC check", ok, _fmt(detail)), detail


def test_simplex_functional_forms_and_mean(acceptance):
    forms = ck.check_F_forms(10_000, SEED)
    mean = ck.check_F_mean(range(1, 13), 10**6, SEED)
    ok = forms.passed and mean.passed
    detail = {"max form gap": forms.value, "worst mean z": mean.value}
    assert acceptance("simplex functional (two forms, MC mean)", ok, _fmt(detail)), detail


def test_alternating_identities_and_sign_balance(acceptance):
    odd, even = ck.check_alt_residuals(100_000, SEED)
    beta = ck.check_beta_balance(16, 20, SEED)
    tail = ck.check_sign_balance_tail(64)
    ok = odd.passed and even.passed and beta.passed and tail.passed
    detail = {"odd residual/tol": odd.value, "even residual/tol": even.value,
              "beta violations": beta.value, "patterns": beta.trials, "tail margin": tail.value}
    assert acceptance("alternating decompositions, balance bounds", ok, _fmt(detail)), detail


def test_density_suite(acceptance):
    agree, logc, unimodal, mass = ck.check_density_suite(50, SEED, max_n=15, points=200, tol=1e-8)
    hoeff = ck.check_hoeffding(1000, SEED)
    ok = all(c.passed for c in (agree, logc, unimodal, mass, hoeff))
    detail = {"max |exact-fourier|": agree.value, "logconcavity viol": logc.value,
              "unimodal viol": unimodal.value, "hoeffding viol": hoeff.value}
    assert acceptance("weighted-uniform density suite", ok, _fmt(detail)), detail


def test_csv_bodies_independent_of_worker_count(acceptance, tmp_path):
    runs = [
        ["zero-scan", "--n", "16,64", "--trials", "1500", "--dist", "gaussian"],
        ["ac-scan", "--n", "8,40", "--trials", "30000"],
        ["props", "--trials", "3000"],
    ]
    same = {}
    for argv in runs:
        bodies = set()
        for workers in (1, 4, 16):
            out = tmp_path / f"{argv[0]}_{workers}.csv"
            rc = main(argv + ["--seed", str(SEED), "--workers", str(workers), "--out", str(out), "--no-plots"])
            if argv[0] != "props":
                assert rc == 0
            bodies.add(xp.csv_body_without(out.read_text()))
        same[argv[0]] = len(bodies) == 1
    ok = all(same.values())
    assert acceptance("reproducibility across 1, 4, 16 workers", ok, _fmt(same)), same
