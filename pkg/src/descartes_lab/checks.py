"""Invariant suites shared by the property-suite experiment and the test-suite.

Each check returns a :class:`Check` with a pass flag and the measured margin
(how far the worst case sits from failing; negative means failure).
"""
from __future__ import annotations

import math
from fractions import Fraction
from typing import NamedTuple

import flint
import numpy as np

from . import density_lab as dl
from . import perm_lab as pl
from .poly_roots import Polynomial, count_with_multiplicity, descartes_bound, dyadic_integers, Interval, \
    tally_integer_coeffs
from .rng import chunk_rng
from .sign_seq import bound_check, partial_sum_sequences


class Check(NamedTuple):
    name: str
    passed: bool
    value: float
    margin: float
    trials: int


def _z(diff: float, se: float) -> float:
    """|diff| in standard errors; a degenerate zero-spread sample counts only if it misses."""
    if se > 0:
        return abs(diff) / se
    return 0.0 if diff == 0 else math.inf


# ---------------------------------------------------------------------------
# polynomial generators


def _planted(rng, degree: int) -> list[int]:
    """Integer polynomial with rational roots planted in (-1, 1) and some multiplicities."""
    p = flint.fmpz_poly([int(rng.integers(1, 6))])
    while p.degree() < degree:
        q = int(rng.integers(2, 40))
        r = int(rng.integers(-q + 1, q))
        mult = int(rng.choice([1, 1, 1, 2, 3]))
        f = flint.fmpz_poly([-r, q]) if rng.random() < 0.8 else flint.fmpz_poly([int(rng.integers(1, 5)), 0, 1])
        for _ in range(mult):
            if p.degree() + f.degree() <= degree:
                p *= f
        if rng.random() < 0.1:
            break
    c = [int(v) for v in p.coeffs()]
    return c + [0] * (degree + 1 - len(c))


def random_exact_polynomial(rng, max_degree: int) -> list[int]:
    """Integer coefficients from a rotating mix of laws, degree <= max_degree."""
    d = int(rng.integers(1, max_degree + 1))
    kind = int(rng.integers(0, 6))
    if kind == 0:
        return (rng.integers(0, 2, d + 1) * 2 - 1).tolist()
    if kind == 1:
        return dyadic_integers(rng.standard_normal(d + 1))
    if kind == 2:
        return dyadic_integers(rng.standard_cauchy(d + 1))
    if kind == 3:
        vals = rng.integers(-3, 4, d + 1)
        if not vals.any():
            vals[0] = 1
        return rng.permutation(vals).tolist()
    if kind == 4:
        v = rng.standard_normal(d + 1)
        v[rng.random(d + 1) < 0.3] = 0.0
        if not v.any():
            v[-1] = 1.0
        return dyadic_integers(v)
    return _planted(rng, d)


def check_descartes_rule(count: int, seed: int, max_degree: int = 12) -> Check:
    rng = chunk_rng(seed, 40)
    worst = math.inf
    bad = 0
    for _ in range(count):
        c = random_exact_polynomial(rng, max_degree)
        if not any(c):
            continue
        p = Polynomial.from_coeffs(c)
        pos = count_with_multiplicity(p, Interval(0, math.inf))
        m = descartes_bound(p) - pos
        worst = min(worst, m)
        bad += m < 0
    return Check("descartes_rule", bad == 0, bad, worst, count)


def check_sign_bounds(count: int, seed: int, max_degree: int = 64) -> list[Check]:
    """N(I,P) <= 1 + S(T), N(-I,P) <= 1 + S(T'), and S(T) <= #witnesses, per polynomial."""
    rng = chunk_rng(seed, 41)
    bad_pos = bad_neg = bad_wit = 0
    m_pos = m_neg = m_wit = math.inf
    done = 0
    for _ in range(count):
        c = random_exact_polynomial(rng, max_degree)
        if not any(c):
            continue
        tally = tally_integer_coeffs(c)
        rep = bound_check(c, tally)
        hp, hn = rep.holds
        bad_pos += not hp
        bad_neg += not hn
        m_pos = min(m_pos, rep.bound_pos - rep.actual_pos)
        m_neg = min(m_neg, rep.bound_neg - rep.actual_neg)
        wit = rep.witness_count - rep.s_changes
        bad_wit += wit < 0
        m_wit = min(m_wit, wit)
        done += 1
    return [
        Check("sign_bound_pos", bad_pos == 0, bad_pos, m_pos, done),
        Check("sign_bound_neg", bad_neg == 0, bad_neg, m_neg, done),
        Check("sign_change_witness", bad_wit == 0, bad_wit, m_wit, done),
    ]


def check_partial_sum_identity(count: int, seed: int) -> Check:
    rng = chunk_rng(seed, 42)
    bad = 0
    for _ in range(count):
        lam = rng.integers(-9, 10, int(rng.integers(1, 40))).tolist()
        S, T = partial_sum_sequences(lam)
        bad += any(T[k] - T[k - 1] != S[k] for k in range(1, len(lam)))
    return Check("partial_sum_identity", bad == 0, bad, -bad, count)


# ---------------------------------------------------------------------------
# permutation-side suites


def check_alt_residuals(draws: int, seed: int, max_k: int = 101) -> list[Check]:
    out = []
    for parity in ("odd", "even"):
        rng = chunk_rng(seed, 43, parity == "odd")
        worst = 0.0
        for _ in range(draws):
            if parity == "odd":
                k = 2 * int(rng.integers(2, (max_k + 1) // 2 + 1)) - 1
            else:
                k = 2 * int(rng.integers(1, max_k // 2 + 1))
            xi = rng.standard_normal(k) * 10.0 ** rng.uniform(-3, 3)
            d = pl.alt_decompose(xi.tolist())
            worst = max(worst, d.residual / pl.alt_residual_tolerance(xi))
        out.append(Check(f"alt_residual_{parity}", worst <= 1.0, worst, 1.0 - worst, draws))
    return out


def beta_exhaustive(eta) -> tuple[int, int, float]:
    """All 2^m sign patterns for integer eta: (good patterns, violations, min beta^2/B^2 over good)."""
    eta = np.asarray(eta, dtype=np.int64)
    m = eta.size
    bits = (np.arange(1 << m, dtype=np.int64)[:, None] >> np.arange(m)) & 1
    signed = (2 * bits - 1) * eta
    pos = np.count_nonzero(signed > 0, axis=1)
    good = (4 * pos >= m) & (4 * pos <= 3 * m)
    S = signed.sum(axis=1)
    B2 = int(np.sum(eta * eta))
    mbeta2 = m * B2 - S * S  # m * beta^2, exact
    viol = good & ((5 * mbeta2 < m * B2) | (mbeta2 > m * B2))
    ratio = float(np.min(mbeta2[good])) / (m * B2) if good.any() else math.inf
    return int(np.count_nonzero(good)), int(np.count_nonzero(viol)), ratio


def check_beta_balance(max_m: int, etas_per_m: int, seed: int) -> Check:
    rng = chunk_rng(seed, 44)
    bad = 0
    worst = math.inf
    patterns = 0
    for m in range(1, max_m + 1):
        cases = [np.full(m, 1, dtype=np.int64)]
        if m >= 4:
            cases.append(np.array([3] + [-1] * (m - 1), dtype=np.int64))
        for _ in range(etas_per_m):
            e = rng.integers(1, 1001, m) * rng.choice([-1, 1], m)
            cases.append(e.astype(np.int64))
        for eta in cases:
            g, v, r = beta_exhaustive(eta)
            patterns += 1 << m
            bad += v
            worst = min(worst, r - 0.2)
    # spot-check the vectorized route against the scalar one
    e = [3, -1, -1, -1]
    chk = pl.beta_B_check(e, [1, 1, 1, 1])
    agree = chk.good and chk.beta_sq == 12 and chk.holds
    return Check("beta_balance", bad == 0 and agree, bad, worst, patterns)


def check_sign_balance_tail(max_m: int = 64) -> Check:
    worst = math.inf
    for m in range(1, max_m + 1):
        tail = pl.local_goodness_tail(m)
        bound = 2 * math.exp(-m / 8)
        worst = min(worst, bound - float(tail))
    return Check("sign_balance_tail", worst >= 0, worst, worst, max_m)


def check_window_symmetries(cases: int, seed: int) -> Check:
    """Exact WINDOW probability is invariant under relabeling w and under (w, L) -> (-w, -L)."""
    rng = chunk_rng(seed, 45)
    bad = 0
    for _ in range(cases):
        n = int(rng.integers(3, 8))
        u = rng.integers(-5, 6, n).tolist()
        if len(set(u)) == 1:
            u[0] += 1
        L = Fraction(int(rng.integers(-4, 5)), 4)
        h = Fraction(int(rng.integers(1, 9)), 4)
        p = pl.event_probability_exact(pl.PermEvent.window(pl.normalize_weights(u), L, h)).exact
        shuffled = rng.permutation(u).tolist()
        q = pl.event_probability_exact(pl.PermEvent.window(pl.normalize_weights(shuffled), L, h)).exact
        r = pl.event_probability_exact(pl.PermEvent.window(pl.normalize_weights([-x for x in u]), -L, h)).exact
        bad += (p != q) + (p != r)
    return Check("window_symmetry", bad == 0, bad, -bad, cases)


def _random_event(rng, n: int) -> pl.PermEvent:
    kind = int(rng.integers(0, 5))
    u = rng.integers(-4, 5, n).tolist()
    if len(set(u)) == 1:
        u[0] += 1
    if kind == 0:
        L = Fraction(int(rng.integers(-2, 3)), 4)
        return pl.PermEvent.window(pl.normalize_weights(u), L, Fraction(int(rng.integers(1, 5)), 2))
    if kind == 1:
        x = sum(a * p for a, p in zip(u, rng.permutation(np.arange(1, n + 1)).tolist()))
        return pl.PermEvent.atom(u, x)
    if kind == 2:
        return pl.PermEvent.shepp(u)
    return pl.PermEvent.relative(u, alt=(kind == 4))


def check_mc_vs_exact(cases: int, trials: int, seed: int) -> Check:
    """Monte Carlo estimates sit within 3 standard errors of the enumeration value.

    The standard error is taken at the exact probability, so cases with a
    tiny exact value and zero hits are judged correctly.
    """
    rng = chunk_rng(seed, 46)
    worst = 0.0
    for i in range(cases):
        n = int(rng.integers(3, 9))
        e = _random_event(rng, n)
        p = float(pl.event_probability_exact(e).exact)
        est = pl.event_probability_mc(e, trials=trials, seed=seed + 1 + i)
        se = math.sqrt(p * (1 - p) / trials)
        worst = max(worst, _z(est.p_hat - p, se))
    return Check("mc_vs_exact", worst <= 3.0, worst, 3.0 - worst, cases)


def check_relative_decay(ks, trials: int, seed: int, alt: bool = False, law: str = "gaussian") -> Check:
    vals = []
    for k in ks:
        est = pl.event_probability_mc(pl.PermEvent.relative(alt=alt, law=law, k=k), trials=trials, seed=seed + k)
        vals.append(k * est.p_hat)
    ratio = max(vals) / min(vals) if min(vals) > 0 else math.inf
    name = "relative_alt_decay" if alt else "relative_decay"
    return Check(name, ratio <= 3.0, ratio, 3.0 - ratio, trials * len(ks))


def check_window_scaled_max(ns, families, seed: int) -> Check:
    """C_obs = max of n * P over the suite; finite, with the running maximum recorded."""
    best = 0.0
    for n in ns:
        for f in families:
            p = pl.event_probability_exact(pl.PermEvent.window(pl.weight_family(f, n, seed), 0, 1)).exact
            best = max(best, n * float(p))
    return Check("window_scaled_max", math.isfinite(best), best, best, len(ns) * len(families))


def check_shepp(cases: int, seed: int) -> Check:
    """All-equal nonzero u gives probability 0; random integer u gives the max n * P."""
    rng = chunk_rng(seed, 47)
    zero_ok = all(pl.event_probability_exact(pl.PermEvent.shepp([c] * n)).exact == 0
                  for n in range(2, 8) for c in (1, -3))
    worst = 0.0
    for _ in range(cases):
        n = int(rng.integers(3, 9))
        u = rng.integers(-5, 6, n).tolist()
        if not any(u):
            u[0] = 1
        p = pl.event_probability_exact(pl.PermEvent.shepp(u)).exact
        worst = max(worst, n * float(p))
    return Check("shepp_all_equal_zero", zero_ok, worst, float(zero_ok), cases)


# ---------------------------------------------------------------------------
# density-side suites


def _unit_gaussian(rng, n: int) -> np.ndarray:
    w = rng.standard_normal(n)
    return w / np.linalg.norm(w)


def check_simplex_variance_exact(ns, per_n: int, seed: int) -> Check:
    rng = chunk_rng(seed, 48)
    bad = 0
    worst = math.inf
    for n in ns:
        for _ in range(per_n):
            w = _unit_gaussian(rng, n)
            sigma = (rng.permutation(n) + 1).tolist()
            r = dl.simplex_variance(w.tolist(), sigma)
            bad += not r.holds
            worst = min(worst, float(r.bound - r.variance))
    return Check("simplex_variance_exact", bad == 0, bad, worst, len(ns) * per_n)


def check_simplex_variance_mc(ns, samples: int, seed: int) -> Check:
    rng = chunk_rng(seed, 49)
    worst = 0.0
    for n in ns:
        w = _unit_gaussian(rng, n)
        sigma = (rng.permutation(n) + 1).tolist()
        exact = float(dl.simplex_variance(w.tolist(), sigma).variance)
        v, se = dl.simplex_variance_mc(w, sigma, samples, seed + n)
        worst = max(worst, _z(v - exact, se))
    return Check("simplex_variance_mc", worst <= 3.0, worst, 3.0 - worst, samples * len(ns))


def check_F_forms(points: int, seed: int, max_n: int = 12) -> Check:
    rng = chunk_rng(seed, 50)
    worst = 0.0
    for _ in range(points):
        n = int(rng.integers(1, max_n + 1))
        a, b = dl.simplex_F_forms(rng.random(n), rng.standard_normal(n))
        worst = max(worst, abs(a - b))
    return Check("F_two_forms", worst <= 1e-10, worst, 1e-10 - worst, points)


def check_F_mean(ns, samples: int, seed: int, ws_per_n: int = 1, z_crit: float = 3.0) -> Check:
    rng = chunk_rng(seed, 51)
    worst = 0.0
    cases = 0
    for n in ns:
        for r in range(ws_per_n):
            w = _unit_gaussian(rng, n) if n > 1 else np.array([1.0])
            pi = (rng.permutation(n) + 1).tolist()
            target = pl.w_sigma_sq(w.tolist(), pi) / (n + 1)
            mean, se = dl.simplex_F_mc(w, pi, samples, seed + 1000 * n + r)
            worst = max(worst, _z(mean - target, se))
            cases += 1
    return Check("F_mean", worst <= z_crit, worst, z_crit - worst, cases * samples)


def check_hoeffding(count: int, seed: int, max_n: int = 16) -> Check:
    rng = chunk_rng(seed, 52)
    bad = 0
    worst = math.inf
    for _ in range(count):
        n = int(rng.integers(1, max_n + 1))
        a = rng.random(n) if rng.random() < 0.5 else rng.integers(1, 5, n) / 2.0
        total = float(a.sum())
        for frac in (0.1, 0.25, 0.5, 0.75, 1.0):
            t = frac * total
            if t <= 0:
                continue
            tail = dl.rademacher_tail(a.tolist(), t)
            bound = dl.hoeffding_bound(a, t)
            bad += tail > Fraction(bound)
            worst = min(worst, bound - float(tail))
    return Check("hoeffding", bad == 0, bad, worst, count)


def check_density_suite(count: int, seed: int, max_n: int = 15, points: int = 200,
                        tol: float = 1e-8) -> list[Check]:
    """Exact vs Fourier agreement, log-concavity, unimodality and mass, on random unit w."""
    rng = chunk_rng(seed, 53)
    diff = 0.0
    lc = um = 0
    mass = 0.0
    for _ in range(count):
        n = int(rng.integers(1, max_n + 1))
        w = _unit_gaussian(rng, n)
        model = dl.DensityModel(w)
        s = model.support
        grid = np.linspace(-1.1 * s, 1.1 * s, points)
        pe = model(grid)
        pf = dl.fourier_density(w, grid, tol=tol)
        diff = max(diff, float(np.max(np.abs(pe - pf))))
        inner = np.linspace(-s, s, points + 2)[1:-1]
        lc += dl.logconcavity_check(model, inner)
        um += dl.unimodality_violations(model, grid)
        mass = max(mass, abs(float(model.total_mass_exact - 1)))
    return [
        Check("density_exact_vs_fourier", diff <= 1e-6, diff, 1e-6 - diff, count),
        Check("density_logconcave", lc == 0, lc, -lc, count),
        Check("density_unimodal", um == 0, um, -um, count),
        Check("density_mass", mass <= 1e-9, mass, 1e-9 - mass, count),
    ]


def check_spacing_moments(max_n: int = 200) -> Check:
    ok = True
    for n in range(1, max_n + 1):
        try:
            m = dl.spacing_moments(n)
        except ArithmeticError:
            ok = False
            continue
        ok &= m.e_x1 == Fraction(1, n + 1)
    return Check("spacing_moments", ok, float(ok), float(ok), max_n)


__all__ = [
    "Check", "random_exact_polynomial", "check_descartes_rule", "check_sign_bounds",
    "check_partial_sum_identity", "check_alt_residuals", "beta_exhaustive", "check_beta_balance",
    "check_sign_balance_tail", "check_window_symmetries", "check_mc_vs_exact", "check_relative_decay",
    "check_window_scaled_max", "check_shepp", "check_simplex_variance_exact", "check_simplex_variance_mc", "check_F_forms",
    "check_F_mean", "check_hoeffding", "check_density_suite", "check_spacing_moments",
]
