"""Reproducible experiment runners: root-count growth, window decay, invariant suites, density scans.

Every runner takes an :class:`ExperimentConfig` and returns an
:class:`ExperimentResult` holding :class:`ResultRow` records plus any extra
tables.  Randomness is drawn per (experiment, n, chunk) so the rows do not
depend on the worker count.
"""
from __future__ import annotations

import csv
import io
import json
import math
import platform
import re
import time
from dataclasses import dataclass, field, fields
from fractions import Fraction
from pathlib import Path

import numpy as np
from scipy import stats

from . import __version__
from . import checks as ck
from . import density_lab as dl
from . import perm_lab as pl
from .poly_roots import dyadic_integers, tally_integer_coeffs
from .rng import CHUNK, RNG_ID, chunk_rng, chunk_sizes, run_tasks, sample_law
from .sign_seq import bound_check

EXPERIMENTS = ("zero-scan", "ac-scan", "props", "density-scan")
DEFAULT_L_GRID = (Fraction(0), Fraction(1, 2), Fraction(1), Fraction(2))
_CONTINUOUS = ("gaussian", "uniform", "cauchy")
ZERO_SCAN_CHUNK = 250  # polynomials per task; small so that few trials still spread over workers


class ConfigError(ValueError):
    pass


# ---------------------------------------------------------------------------
# configuration


@dataclass(frozen=True)
class Dist:
    kind: str
    p0: float = 0.0
    values: tuple[Fraction, ...] = ()

    def __str__(self) -> str:
        if self.kind == "atom0":
            return f"atom0{{{self.p0!r}}}"
        if self.kind == "multiset":
            return "multiset{" + ",".join(str(v) for v in self.values) + "}"
        return self.kind


def parse_dist(text: str) -> Dist:
    """rademacher | gaussian | uniform | cauchy | atom0{p0} | multiset{v1,v2,...}."""
    text = str(text).strip()
    m = re.fullmatch(r"(\w+)(?:\{(.*)\})?", text)
    if not m:
        raise ConfigError(f"cannot parse dist {text!r}")
    kind, arg = m.group(1), m.group(2)
    if kind in ("rademacher",) + _CONTINUOUS:
        if arg is not None:
            raise ConfigError(f"{kind} takes no parameters")
        return Dist(kind)
    if kind == "atom0":
        if arg is None:
            raise ConfigError("atom0 needs p0, e.g. atom0{0.3}")
        arg = arg.split("=", 1)[-1]
        try:
            p0 = float(arg)
        except ValueError as exc:
            raise ConfigError(f"bad p0 {arg!r}") from exc
        if not 0.0 <= p0 < 1.0:
            raise ConfigError("p0 must lie in [0, 1)")
        return Dist("atom0", p0=p0)
    if kind == "multiset":
        if not arg:
            raise ConfigError("multiset needs values, e.g. multiset{1,1,2}")
        try:
            vals = tuple(Fraction(v.strip()) for v in arg.split(","))
        except ValueError as exc:
            raise ConfigError(f"bad multiset values {arg!r}") from exc
        if not any(vals):
            raise ConfigError("multiset values must not all be zero")
        return Dist("multiset", values=vals)
    raise ConfigError(f"unknown dist {kind!r}")


_DEFAULT_N = {
    "zero-scan": (16, 32, 64, 128, 256, 512, 1024),
    "ac-scan": (4, 5, 6, 7, 8, 9, 10),
    "props": (8,),
    "density-scan": (2, 4, 8, 12),
}
_DEFAULT_TRIALS = {"zero-scan": 1000, "ac-scan": 100_000, "props": 100_000, "density-scan": 1}


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    n_list: tuple[int, ...] = ()
    trials: int | None = None
    dist: Dist = Dist("rademacher")
    seed: int = 0
    workers: int = 1
    out: str = "results.csv"
    format: str = "csv"
    L_grid: tuple[Fraction, ...] = DEFAULT_L_GRID
    h: Fraction = Fraction(1)
    families: tuple[str, ...] = pl.WEIGHT_FAMILIES
    enum_cap: int = pl.ENUM_CAP
    grid_points: int = 201
    tol: float = 1e-8
    scale: float = 1.0  # size multiplier for the invariant suites

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"experiment must be one of {EXPERIMENTS}")
        n_list = tuple(int(n) for n in (self.n_list or _DEFAULT_N[self.experiment]))
        if not n_list or any(b <= a for a, b in zip(n_list, n_list[1:])):
            raise ConfigError("n_list must be nonempty and strictly ascending")
        if min(n_list) < 1:
            raise ConfigError("n must be >= 1")
        object.__setattr__(self, "n_list", n_list)
        if self.trials is None:
            object.__setattr__(self, "trials", _DEFAULT_TRIALS[self.experiment])
        if int(self.trials) < 1:
            raise ConfigError("trials must be >= 1")
        if int(self.workers) < 1:
            raise ConfigError("workers must be >= 1")
        if self.format not in ("csv", "json"):
            raise ConfigError("format must be csv or json")
        if not isinstance(self.dist, Dist):
            object.__setattr__(self, "dist", parse_dist(self.dist))
        if not 0 <= int(self.seed) < 2 ** 64:
            raise ConfigError("seed must be a 64-bit unsigned integer")
        bad = [f for f in self.families if f not in pl.WEIGHT_FAMILIES]
        if bad:
            raise ConfigError(f"unknown weight families {bad}")
        if self.h <= 0 or self.tol <= 0 or self.scale <= 0:
            raise ConfigError("h, tol and scale must be positive")

    def describe(self) -> dict:
        d = {f.name: getattr(self, f.name) for f in fields(self)}
        d["dist"] = str(self.dist)
        d["L_grid"] = [str(x) for x in self.L_grid]
        d["h"] = str(self.h)
        d["n_list"] = list(self.n_list)
        d["families"] = list(self.families)
        return d


def _split_list(v) -> list[str]:
    if isinstance(v, (list, tuple)):
        return [str(x) for x in v]
    return [x for x in re.split(r"[,\s]+", str(v).strip()) if x]


def _coerce(key: str, value):
    try:
        if key == "n_list":
            return tuple(int(x) for x in _split_list(value))
        if key in ("trials", "seed", "workers", "enum_cap", "grid_points"):
            return int(value)
        if key in ("tol", "scale"):
            return float(value)
        if key == "L_grid":
            return tuple(Fraction(x) for x in _split_list(value))
        if key == "h":
            return Fraction(str(value))
        if key == "families":
            return tuple(_split_list(value))
        if key == "dist":
            return parse_dist(value)
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        if isinstance(exc, ConfigError):
            raise
        raise ConfigError(f"bad value for {key}: {value!r}") from exc
    return str(value)


def config_from_mapping(data: dict, **overrides) -> ExperimentConfig:
    known = {f.name for f in fields(ExperimentConfig)}
    merged = dict(data)
    merged.update({k: v for k, v in overrides.items() if v is not None})
    unknown = set(merged) - known
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    if "experiment" not in merged:
        raise ConfigError("config must name an experiment")
    return ExperimentConfig(**{k: _coerce(k, v) for k, v in merged.items()})


def load_config(path: str | Path, **overrides) -> ExperimentConfig:
    """Read a JSON object or flat ``key = value`` / ``key: value`` lines."""
    text = Path(path).read_text()
    stripped = text.lstrip()
    if stripped.startswith("{"):
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"invalid JSON config: {exc}") from exc
        if not isinstance(data, dict):
            raise ConfigError("JSON config must be an object")
    else:
        data = {}
        for raw in text.splitlines():
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            m = re.fullmatch(r"([A-Za-z_]\w*)\s*[=:]\s*(.*)", line)
            if not m:
                raise ConfigError(f"cannot parse config line {raw!r}")
            data[m.group(1)] = m.group(2).strip()
    return config_from_mapping(data, **overrides)


# ---------------------------------------------------------------------------
# results


@dataclass
class ResultRow:
    experiment: str
    n: int | None
    metric: str
    value: float
    stderr: float | None = None
    trials: int | None = None
    seed: int | None = None
    wall_ms: float | None = None


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    rows: list[ResultRow] = field(default_factory=list)
    failures: list[str] = field(default_factory=list)
    tables: dict[str, tuple[tuple[str, ...], list[tuple]]] = field(default_factory=dict)
    extra_files: dict[str, str] = field(default_factory=dict)

    @property
    def ok(self) -> bool:
        return not self.failures

    def add(self, n, metric, value, stderr=None, trials=None, wall_ms=None):
        self.rows.append(ResultRow(self.config.experiment, n, metric, value, stderr, trials,
                                   self.config.seed, wall_ms))

    def values(self, metric: str) -> dict:
        return {r.n: r.value for r in self.rows if r.metric == metric}


ROW_FIELDS = tuple(f.name for f in fields(ResultRow))


def _fmt(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return repr(float(v))
    if isinstance(v, Fraction):
        return repr(float(v))
    return str(v)


def rows_to_csv(rows, header=ROW_FIELDS) -> str:
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    wr.writerow(header)
    for r in rows:
        vals = [getattr(r, h) for h in header] if isinstance(r, ResultRow) else list(r)
        wr.writerow([_fmt(v) for v in vals])
    return buf.getvalue()


def csv_body_without(text: str, column: str = "wall_ms") -> str:
    """The CSV with one column removed, for reproducibility comparisons."""
    rd = list(csv.reader(io.StringIO(text)))
    if not rd:
        return ""
    idx = rd[0].index(column) if column in rd[0] else None
    buf = io.StringIO()
    wr = csv.writer(buf, lineterminator="\n")
    for row in rd:
        wr.writerow([v for i, v in enumerate(row) if i != idx])
    return buf.getvalue()


def write_result(result: ExperimentResult, out: str | Path | None = None, fmt: str | None = None,
                 plots: bool = True) -> list[Path]:
    """Write rows (CSV or JSON), side tables, a metadata sidecar and plot files."""
    cfg = result.config
    path = Path(out or cfg.out)
    fmt = fmt or cfg.format
    path.parent.mkdir(parents=True, exist_ok=True)
    written = [path]
    if fmt == "csv":
        path.write_text(rows_to_csv(result.rows))
    else:
        path.write_text(json.dumps([{k: getattr(r, k) for k in ROW_FIELDS} for r in result.rows],
                                   indent=1, default=float) + "\n")
    stem = path.with_suffix("")
    for name, (header, rows) in result.tables.items():
        p = Path(f"{stem}.{name}.csv")
        p.write_text(rows_to_csv(rows, header))
        written.append(p)
    for name, text in result.extra_files.items():
        p = Path(f"{stem}.{name}")
        p.write_text(text)
        written.append(p)
    meta = {
        "package_version": __version__,
        "rng": RNG_ID,
        "chunk_rows": ZERO_SCAN_CHUNK if cfg.experiment == "zero-scan" else CHUNK,
        "python": platform.python_version(),
        "numpy": np.__version__,
        "config": cfg.describe(),
        "failures": result.failures,
        "tables": sorted(result.tables),
    }
    mp = Path(f"{path}.meta.json")
    mp.write_text(json.dumps(meta, indent=1, default=str) + "\n")
    written.append(mp)
    if plots:
        from .plotting import render_plots
        written.extend(render_plots(result, path))
    return written


# ---------------------------------------------------------------------------
# zero scan


def _scaled_multiset(values: tuple[Fraction, ...]) -> list[int]:
    den = 1
    for v in values:
        den = den * v.denominator // math.gcd(den, v.denominator)
    return [int(v * den) for v in values]


def sample_coefficients(dist: Dist, rng, rows: int, n: int) -> list[list[int]]:
    """Integer coefficient rows proportional to one draw each of lambda_0..lambda_n."""
    if dist.kind == "rademacher":
        return (rng.integers(0, 2, (rows, n + 1)) * 2 - 1).tolist()
    if dist.kind == "multiset":
        base = _scaled_multiset(dist.values)
        cyc = np.resize(np.asarray(base, dtype=object), n + 1)
        idx = rng.permuted(np.tile(np.arange(n + 1), (rows, 1)), axis=1)
        return [[int(v) for v in cyc[r]] for r in idx]
    if dist.kind == "atom0":
        vals = rng.standard_normal((rows, n + 1))
        vals[rng.random((rows, n + 1)) < dist.p0] = 0.0
    else:
        vals = sample_law(rng, dist.kind, (rows, n + 1))
    return [dyadic_integers(r) for r in vals]


_TALLY_FIELDS = ("at_zero", "at_one", "at_minus_one", "in_pos_unit", "in_neg_unit", "pos_outside",
                 "neg_outside")


def _zero_chunk(args) -> dict:
    dist, n, seed, c, rows = args
    rng = chunk_rng(seed, 1, n, c)
    acc = {k: 0 for k in _TALLY_FIELDS}
    acc.update(samples=0, all_zero=0, n_star=0, n_star_sq=0, bound_viol_pos=0, bound_viol_neg=0,
               witness_viol=0, zero_sq=0)
    hist = [0] * (n + 1)
    for coeffs in sample_coefficients(dist, rng, rows, n):
        if not any(coeffs):
            acc["all_zero"] += 1
            continue
        t = tally_integer_coeffs(coeffs)
        rep = bound_check(coeffs, t)
        acc["samples"] += 1
        for k in _TALLY_FIELDS:
            acc[k] += getattr(t, k)
        acc["n_star"] += t.n_star
        acc["n_star_sq"] += t.n_star ** 2
        acc["zero_sq"] += t.at_zero ** 2
        hp, hn = rep.holds
        acc["bound_viol_pos"] += not hp
        acc["bound_viol_neg"] += not hn
        acc["witness_viol"] += rep.witness_count < rep.s_changes
        hist[t.at_zero] += 1
    acc["hist"] = hist
    return acc


def _mean_se(total: int, total_sq: int, count: int) -> tuple[float, float]:
    if count == 0:
        return math.nan, math.nan
    mean = total / count
    if count < 2:
        return mean, math.nan
    var = (total_sq - total * total / count) / (count - 1)
    return mean, math.sqrt(max(var, 0.0) / count)


def truncated_geometric_mean(p0: float, n: int) -> float:
    """Mean of the index of the first nonzero among n+1 coefficients, given one exists."""
    num = math.fsum(k * (1 - p0) * p0 ** k for k in range(n + 1))
    return num / (1 - p0 ** (n + 1))


def _geometric_chi2(hist: list[int], p0: float, n: int) -> float:
    total = sum(hist)
    probs = np.array([(1 - p0) * p0 ** k for k in range(n + 1)]) / (1 - p0 ** (n + 1))
    exp = probs * total
    obs = np.asarray(hist, dtype=float)
    # merge the upper tail until every bin expects at least 5
    k = len(exp)
    while k > 1 and exp[k - 1:].sum() < 5:
        k -= 1
    o = np.append(obs[:k - 1], obs[k - 1:].sum())
    e = np.append(exp[:k - 1], exp[k - 1:].sum())
    if o.size < 2:
        return 1.0
    return float(stats.chisquare(o, e).pvalue)


def run_zero_scan(cfg: ExperimentConfig) -> ExperimentResult:
    res = ExperimentResult(cfg)
    ratios = {}
    for n in cfg.n_list:
        t0 = time.perf_counter()
        tasks = [(cfg.dist, n, cfg.seed, c, rows) for c, rows in enumerate(chunk_sizes(cfg.trials, ZERO_SCAN_CHUNK))]
        parts = run_tasks(_zero_chunk, tasks, cfg.workers)
        tot = {k: sum(p[k] for p in parts) for k in parts[0] if k != "hist"}
        hist = [sum(h) for h in zip(*(p["hist"] for p in parts))]
        ms = (time.perf_counter() - t0) * 1000.0
        N = tot["samples"]
        mean, se = _mean_se(tot["n_star"], tot["n_star_sq"], N)
        res.add(n, "mean_n_star", mean, se, N, ms)
        ratio = mean / math.log(n) if n > 1 else math.nan
        ratios[n] = ratio
        res.add(n, "mean_n_star_over_log_n", ratio, se / math.log(n) if n > 1 else None, N)
        for k in _TALLY_FIELDS:
            res.add(n, f"mean_{k}", tot[k] / N if N else math.nan, None, N)
        viol = tot["bound_viol_pos"] + tot["bound_viol_neg"]
        res.add(n, "sign_bound_pass_rate", 1.0 - viol / (2 * N) if N else math.nan, None, N)
        res.add(n, "sign_bound_violations", viol, None, N)
        res.add(n, "witness_violations", tot["witness_viol"], None, N)
        res.add(n, "all_zero_samples", tot["all_zero"], None, cfg.trials)
        if viol:
            res.failures.append(f"n={n}: {viol} sign-sequence bound violations")
        if tot["witness_viol"]:
            res.failures.append(f"n={n}: {tot['witness_viol']} witness-count violations")
        if cfg.dist.kind == "atom0":
            p0 = cfg.dist.p0
            zm, zse = _mean_se(tot["at_zero"], tot["zero_sq"], N)
            res.add(n, "mean_zero_multiplicity", zm, zse, N)
            res.add(n, "zero_multiplicity_reference", p0 / (1 - p0), None, None)
            res.add(n, "zero_multiplicity_truncated_geometric", truncated_geometric_mean(p0, n), None, None)
            res.add(n, "zero_multiplicity_chi2_pvalue", _geometric_chi2(hist, p0, n), None, N)
    finite = [r for r in ratios.values() if math.isfinite(r) and r > 0]
    if len(finite) >= 2:
        res.add(None, "n_star_over_log_n_max_min_ratio", max(finite) / min(finite), None, cfg.trials)
    return res


# ---------------------------------------------------------------------------
# window anti-concentration scan


def _loglog_slope(xs, ys) -> float:
    pts = [(math.log(x), math.log(y)) for x, y in zip(xs, ys) if y > 0]
    if len(pts) < 2:
        return math.nan
    a = np.array(pts)
    return float(np.polyfit(a[:, 0], a[:, 1], 1)[0])


def _semilog_slope(xs, ys) -> float:
    pts = [(abs(float(x)), math.log(y)) for x, y in zip(xs, ys) if y > 0]
    if len(pts) < 2 or len({p[0] for p in pts}) < 2:
        return math.nan
    a = np.array(pts)
    return float(np.polyfit(a[:, 0], a[:, 1], 1)[0])


def window_probabilities(w: pl.WeightVector, Ls, h, cap: int, trials: int, seed: int, workers: int,
                         stream: int = 0) -> list[pl.ProbEstimate]:
    """Exact if n <= cap, else Monte Carlo on one shared permutation stream across the L grid."""
    events = [pl.PermEvent.window(w, L, h) for L in Ls]
    if w.n <= cap:
        return [pl.event_probability_exact(e, cap=cap, workers=workers) for e in events]
    return pl.event_probabilities_mc(events, trials, seed, workers, stream=stream)


def run_anticoncentration_scan(cfg: ExperimentConfig) -> ExperimentResult:
    res = ExperimentResult(cfg)
    events = []
    for fi, fam in enumerate(cfg.families):
        p_at0 = {}
        for n in cfg.n_list:
            if n < 2:
                raise ConfigError("window scans need n >= 2")
            t0 = time.perf_counter()
            w = pl.weight_family(fam, n, cfg.seed)
            ests = window_probabilities(w, cfg.L_grid, cfg.h, cfg.enum_cap, cfg.trials, cfg.seed,
                                        cfg.workers, stream=1000 * (fi + 1) + n)
            ms = (time.perf_counter() - t0) * 1000.0
            reach = pl.window_support_bound(w)
            for L, est in zip(cfg.L_grid, ests):
                tag = f"{fam}:L={L}"
                se = est.stderr if est.trials else 0.0
                res.add(n, f"p[{tag}]", est.p_hat, se, est.trials, ms)
                res.add(n, f"n_p[{tag}]", n * est.p_hat, n * se, est.trials)
                ev = pl.PermEvent.window(w, L, cfg.h)
                events.append(pl.event_csv_row(ev, est))
                if abs(L) * n > reach + float(cfg.h) and est.p_hat != 0:
                    res.failures.append(f"{tag} n={n}: nonzero probability beyond the support bound")
            ps = [e.p_hat for e in ests]
            p_at0[n] = ps[list(cfg.L_grid).index(0)] if 0 in cfg.L_grid else math.nan
            order = sorted(range(len(cfg.L_grid)), key=lambda i: abs(cfg.L_grid[i]))
            mono = all(ps[order[i + 1]] <= ps[order[i]] for i in range(len(order) - 1))
            res.add(n, f"nonincreasing_in_abs_L[{fam}]", int(mono), None, None)
            res.add(n, f"slope_log_p_vs_abs_L[{fam}]", _semilog_slope(cfg.L_grid, ps), None, None)
        if len(cfg.n_list) >= 2:
            res.add(None, f"slope_log_p_vs_log_n[{fam}:L=0]",
                    _loglog_slope(list(p_at0), list(p_at0.values())), None, None)
    res.tables["events"] = (pl.EVENT_CSV_HEADER, events)
    return res


# ---------------------------------------------------------------------------
# property suite


def property_checks(cfg: ExperimentConfig):
    """Yield each invariant check as it completes."""
    s = cfg.scale
    seed = cfg.seed

    def k(x):
        return max(1, int(round(x * s)))

    yield ck.check_descartes_rule(k(500), seed)
    yield from ck.check_sign_bounds(k(1000), seed, max_degree=max(cfg.n_list[-1], 8) * 8)
    yield ck.check_partial_sum_identity(k(500), seed)
    yield from ck.check_alt_residuals(k(5000), seed)
    yield ck.check_beta_balance(min(16, 8 + int(4 * s)), k(5), seed)
    yield ck.check_sign_balance_tail(64)
    yield ck.check_window_symmetries(k(20), seed)
    yield ck.check_mc_vs_exact(50, cfg.trials, seed)
    yield ck.check_relative_decay((10, 30, 100, 300), cfg.trials, seed)
    yield ck.check_relative_decay((10, 30, 100, 300), cfg.trials, seed, alt=True)
    yield ck.check_window_scaled_max(range(4, 9), cfg.families, seed)
    yield ck.check_shepp(k(20), seed)
    yield ck.check_simplex_variance_exact(range(2, 9), k(20), seed)
    yield ck.check_simplex_variance_mc((2, 5, 8), max(cfg.trials, 2), seed)
    yield ck.check_F_forms(k(2000), seed)
    yield ck.check_F_mean(range(1, 13), cfg.trials, seed)
    yield ck.check_hoeffding(k(100), seed)
    yield from ck.check_density_suite(k(5), seed, tol=cfg.tol)
    yield ck.check_spacing_moments()


def run_property_suite(cfg: ExperimentConfig) -> ExperimentResult:
    res = ExperimentResult(cfg)
    t0 = time.perf_counter()
    for c in property_checks(cfg):
        ms = (time.perf_counter() - t0) * 1000.0
        t0 = time.perf_counter()
        res.add(None, f"{c.name}.pass", int(c.passed), None, c.trials, ms)
        res.add(None, f"{c.name}.value", c.value, None, c.trials)
        res.add(None, f"{c.name}.margin", c.margin, None, c.trials)
        if not c.passed:
            res.failures.append(f"{c.name}: value={c.value!r} margin={c.margin!r}")
    return res


# ---------------------------------------------------------------------------
# density scan


def run_density_scan(cfg: ExperimentConfig) -> ExperimentResult:
    """Exact and Fourier densities for seeded unit Gaussian weights, one table per n."""
    res = ExperimentResult(cfg)
    for n in cfg.n_list:
        t0 = time.perf_counter()
        w = chunk_rng(cfg.seed, 3, n).standard_normal(n)
        w = w / np.linalg.norm(w)
        model = dl.DensityModel(w)
        grid = np.linspace(-1.05 * model.support, 1.05 * model.support, cfg.grid_points)
        pe = model(grid)
        pf = dl.fourier_density(w, grid, tol=cfg.tol)
        env = dl.envelope_fit(model, grid)
        envelope = env.C * np.exp(-np.abs(grid) / 2.0)
        inner = np.linspace(-model.support, model.support, cfg.grid_points + 2)[1:-1]
        lc = dl.logconcavity_check(model, inner)
        ms = (time.perf_counter() - t0) * 1000.0
        diff = float(np.max(np.abs(pe - pf)))
        res.add(n, "max_abs_exact_minus_fourier", diff, None, cfg.grid_points, ms)
        res.add(n, "total_mass", model.total_mass, None, None)
        res.add(n, "envelope_C", env.C, None, None)
        res.add(n, "envelope_c", env.c, None, None)
        res.add(n, "c_gauss", env.c_gauss, None, None)
        res.add(n, "monotone_violations", env.violations, None, None)
        res.add(n, "logconcavity_violations", lc, None, None)
        if diff > 1e-6 or env.violations or lc or abs(model.total_mass - 1) > 1e-9:
            res.failures.append(f"n={n}: density checks failed")
        res.tables[f"density_n{n}"] = (("t", "p_exact", "p_fourier", "envelope_value"),
                                       list(zip(grid.tolist(), pe.tolist(), pf.tolist(),
                                                envelope.tolist())))
        res.extra_files[f"model_n{n}.json"] = model.to_json()
    return res


RUNNERS = {
    "zero-scan": run_zero_scan,
    "ac-scan": run_anticoncentration_scan,
    "props": run_property_suite,
    "density-scan": run_density_scan,
}


def run(cfg: ExperimentConfig) -> ExperimentResult:
    return RUNNERS[cfg.experiment](cfg)


__all__ = [
    "ConfigError", "Dist", "parse_dist", "ExperimentConfig", "config_from_mapping", "load_config",
    "ResultRow", "ExperimentResult", "ROW_FIELDS", "rows_to_csv", "csv_body_without", "write_result",
    "sample_coefficients", "truncated_geometric_mean", "run_zero_scan", "window_probabilities",
    "run_anticoncentration_scan", "property_checks", "run_property_suite", "run_density_scan", "run",
    "EXPERIMENTS", "DEFAULT_L_GRID",
]
