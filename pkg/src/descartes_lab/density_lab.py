"""Densities of weighted uniform sums, tail bounds, and order-simplex functionals.

X = sum_i w_i U_i with U_i iid uniform on [-1/2, 1/2].  With a_i = |w_i| and
A = sum a_i the density is the B-spline

    p(t) = 1 / ((n-1)! prod a_i) * sum_S (-1)^|S| (t + A/2 - sum_{i in S} a_i)_+^(n-1)

over subsets S.  Up to ``EXACT_CAP`` terms the sum is carried out in exact
integer arithmetic; above that, up to ``TERM_CAP``, in compensated floating
point evaluated on the left tail (p is even).
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import comb, factorial
from typing import NamedTuple

import numpy as np
from scipy.special import roots_legendre, sici

from .poly_roots import to_fraction
from .rng import chunk_rng, chunk_sizes


class TooManyTerms(ValueError):
    pass


class ZeroWeight(ValueError):
    pass


class QuadratureFailure(ArithmeticError):
    pass


class AllZero(ValueError):
    pass


class TiedCoordinates(ValueError):
    pass


EXACT_CAP = 15
TERM_CAP = 20


def _abs_weights(w) -> list[Fraction]:
    a = [abs(to_fraction(x)) for x in w]
    if not a:
        raise ValueError("empty weight vector")
    if any(x == 0 for x in a):
        raise ZeroWeight("all weights must be nonzero")
    if len(a) > TERM_CAP:
        raise TooManyTerms(f"n={len(a)} exceeds the inclusion-exclusion cap {TERM_CAP}")
    return a


def _signed_subset_sums(alpha: list[int]) -> dict[int, int]:
    """{sum_{i in S} alpha_i: sum of (-1)^|S| over subsets with that sum}."""
    acc = {0: 1}
    for x in alpha:
        nxt = dict(acc)
        for s, c in acc.items():
            nxt[s + x] = nxt.get(s + x, 0) - c
        acc = {s: c for s, c in nxt.items() if c}
    return acc


# ---------------------------------------------------------------------------
# exact piecewise-polynomial model


class DensityModel:
    """Exact density of sum w_i U_i as a piecewise polynomial.

    Internally t is rescaled to an integer grid tau = t * D so that every
    breakpoint is an integer and every piece has integer coefficients up to
    one common rational factor.
    """

    def __init__(self, w):
        self.weights = tuple(float(x) for x in w)
        self._a = _abs_weights(w)
        self.n = len(self._a)
        if self.n > EXACT_CAP:
            raise TooManyTerms(f"exact model needs n <= {EXACT_CAP}; use exact_density")
        den = 1
        for x in self._a:
            den = den * x.denominator // math.gcd(den, x.denominator)
        self._D = 2 * den
        alpha = [int(x * self._D) for x in self._a]
        half = sum(alpha) // 2
        self.half_width = Fraction(half, self._D)
        grouped = _signed_subset_sums(alpha)
        self._B = sorted(s - half for s in grouped)
        self._c = [grouped[b + half] for b in self._B]
        # p(t) = scale * sum_{B_j < tau} c_j (tau - B_j)^(n-1)
        self._scale = Fraction(self._D, factorial(self.n - 1) * math.prod(alpha))

    # -- evaluation --------------------------------------------------------

    def _add_piece(self, coeffs: list[int], B: int, c: int) -> None:
        d = self.n - 1
        for m in range(d + 1):
            coeffs[m] += c * comb(d, m) * (-B) ** (d - m)

    @staticmethod
    def _value(coeffs: list[int], tau: Fraction) -> Fraction:
        # homogeneous Horner: sum c_m num^m den^(d-m), exact in integers
        num, den = tau.numerator, tau.denominator
        acc = 0
        dpow = 1
        for c in reversed(coeffs):
            acc = acc * num + c * dpow
            dpow *= den
        d = len(coeffs) - 1
        return Fraction(acc, den ** d)

    def exact_values(self, ts) -> list[Fraction]:
        """Exact density values at the given points (taken as exact rationals)."""
        ts = [to_fraction(t) for t in ts]
        if self.n == 1:
            a = self._a[0]
            return [Fraction(0) if abs(t) > a / 2 else (1 / (2 * a) if abs(t) == a / 2 else 1 / a)
                    for t in ts]
        taus = [-abs(t) * self._D for t in ts]
        order = sorted(range(len(ts)), key=lambda i: taus[i])
        out: list[Fraction] = [Fraction(0)] * len(ts)
        coeffs = [0] * self.n
        j = 0
        for i in order:
            tau = taus[i]
            while j < len(self._B) and self._B[j] < tau:
                self._add_piece(coeffs, self._B[j], self._c[j])
                j += 1
            out[i] = self._scale * self._value(coeffs, tau)
        return out

    def __call__(self, t):
        if np.ndim(t) == 0:
            return float(self.exact_values([t])[0])
        return np.array([float(v) for v in self.exact_values(np.ravel(t).tolist())]).reshape(np.shape(t))

    # -- structure ---------------------------------------------------------

    @property
    def support(self) -> float:
        return float(self.half_width)

    @cached_property
    def breakpoints(self) -> tuple[float, ...]:
        return tuple(float(Fraction(b, self._D)) for b in self._B)

    def iter_pieces(self):
        """Yield (left, right, coeffs) per piece, coeffs in powers of (t - left)."""
        d = self.n - 1
        coeffs = [0] * self.n
        for k in range(len(self._B) - 1):
            self._add_piece(coeffs, self._B[k], self._c[k])
            left = self._B[k]
            # Taylor shift to local coordinate s = tau - left, then s = D * (t - left_t)
            local = []
            for m in range(d + 1):
                v = sum(coeffs[r] * comb(r, m) * left ** (r - m) for r in range(m, d + 1))
                local.append(float(self._scale * v * Fraction(self._D) ** m))
            yield float(Fraction(left, self._D)), float(Fraction(self._B[k + 1], self._D)), local

    @property
    def pieces(self) -> list[list[float]]:
        return [c for _, _, c in self.iter_pieces()]

    @cached_property
    def total_mass_exact(self) -> Fraction:
        """Integral of the piecewise polynomial over the real line, exactly."""
        if self.n == 1:
            return Fraction(1)
        coeffs = [0] * self.n
        total = Fraction(0)
        for k in range(len(self._B) - 1):
            self._add_piece(coeffs, self._B[k], self._c[k])
            lo, hi = self._B[k], self._B[k + 1]
            total += sum(Fraction(c * (hi ** (m + 1) - lo ** (m + 1)), m + 1)
                         for m, c in enumerate(coeffs) if c)
        self._add_piece(coeffs, self._B[-1], self._c[-1])
        if any(coeffs):
            raise ArithmeticError("density does not vanish beyond its support")
        return total * self._scale / self._D

    @property
    def total_mass(self) -> float:
        return float(self.total_mass_exact)

    def to_json(self) -> str:
        return json.dumps({
            "n": self.n,
            "weights": list(self.weights),
            "breakpoints": list(self.breakpoints),
            "pieces": self.pieces,
        })


def _float_density(a: list[Fraction], ts) -> np.ndarray:
    n = len(a)
    af = np.array([float(x) for x in a])
    sums = np.zeros(1)
    signs = np.ones(1)
    for x in af:
        sums = np.concatenate([sums, sums + x])
        signs = np.concatenate([signs, -signs])
    breaks = sums - af.sum() / 2.0
    norm = factorial(n - 1) * float(np.prod(af))
    out = []
    for t in np.atleast_1d(ts):
        x = -abs(float(t)) - breaks
        m = x > 0
        out.append(max(math.fsum((signs[m] * x[m] ** (n - 1)).tolist()) / norm, 0.0))
    return np.asarray(out)


def exact_density(w, t):
    """Density of sum w_i U_i at t (scalar or array)."""
    a = _abs_weights(w)
    if len(a) <= EXACT_CAP:
        return DensityModel(w)(t)
    vals = _float_density(a, t)
    return float(vals[0]) if np.ndim(t) == 0 else vals.reshape(np.shape(t))


# ---------------------------------------------------------------------------
# Fourier inversion

_GL_LO = roots_legendre(16)
_GL_HI = roots_legendre(24)


def _char(a: np.ndarray, lam: np.ndarray) -> np.ndarray:
    return np.prod(np.sinc(np.outer(lam, a) / np.pi), axis=1)


def _tail_bound(a: np.ndarray, lam0: float) -> float:
    """(1/pi) * integral over [lam0, inf) of prod min(1, 1/(a_i lam)).

    Piecewise closed form between the thresholds 1/a_i.
    """
    a = np.sort(a)[::-1]
    thr = 1.0 / a
    n = a.size
    total = 0.0
    lo = lam0
    for k in range(n + 1):
        hi = thr[k] if k < n else math.inf
        if hi <= lo:
            continue
        # k largest weights saturate: integrand = lam^-k / prod(a[:k])
        c = 1.0 / float(np.prod(a[:k])) if k else 1.0
        if k == 0:
            seg = hi - lo
        elif k == 1:
            if math.isinf(hi):
                return math.inf
            seg = c * math.log(hi / lo)
        else:
            top = 0.0 if math.isinf(hi) else hi ** (1 - k)
            seg = c * (lo ** (1 - k) - top) / (k - 1)
        total += seg
        lo = hi
    return total / math.pi


def _exact_tail(a: np.ndarray, t: float, lam0: float) -> float:
    """(1/pi) * integral over [lam0, inf) of prod sin(a_i lam)/(a_i lam) cos(t lam), for n <= 3."""
    n = a.size
    # prod_i sin(a_i lam) * cos(t lam) = (2i)^-n / 2 * sum eps_signs e^{i omega lam}
    total = 0j
    for mask in range(1 << n):
        eps = np.array([1.0 if (mask >> i) & 1 else -1.0 for i in range(n)])
        coef = float(np.prod(eps))
        base = float(eps @ a)
        for om in (base + t, base - t):
            total += coef * _power_exp_integral(om, n, lam0)
    total *= 0.5 / (2j) ** n
    return float(total.real) / (math.pi * float(np.prod(a)))


def _power_exp_integral(om: float, n: int, lam0: float) -> complex:
    """integral over [lam0, inf) of e^{i om lam} lam^-n."""
    if om == 0.0:
        if n == 1:
            return 0j  # paired +/- terms cancel; contributes to the real part only as 0
        return complex(lam0 ** (1 - n) / (n - 1))
    w = abs(om)
    si, ci = sici(w * lam0)
    val = complex(-ci, math.pi / 2 - si)
    for k in range(1, n):
        val = (1j * w / k) * val + lam0 ** (-k) * complex(math.cos(w * lam0), math.sin(w * lam0)) / k
    return val if om > 0 else val.conjugate()


def fourier_density(w, t, lam_max: float | None = None, tol: float = 1e-9):
    """Density of sum w_i U_i by cosine inversion of the characteristic function.

    The characteristic function is prod sin(a_i lam)/(a_i lam) with
    a_i = |w_i|/2.  The integral over [0, Lambda] uses Gauss-Legendre panels
    with a 16/24-node error estimate; the tail beyond Lambda is integrated in
    closed form for n <= 3 and bounded otherwise.  Raises QuadratureFailure if
    the combined error estimate exceeds ``tol``.
    """
    a = np.abs(np.asarray([float(x) for x in w])) / 2.0
    if a.size == 0 or np.any(a == 0):
        raise ZeroWeight("all weights must be nonzero")
    if tol <= 0 or (lam_max is not None and lam_max <= 0):
        raise ValueError("tol and lam_max must be positive")
    ts = np.atleast_1d(np.asarray(t, dtype=float))
    n = a.size
    freq = float(a.sum()) + float(np.max(np.abs(ts)))
    h = math.pi / freq
    exact_tail = n <= 3
    if exact_tail:
        lam0 = 64 * h
    else:
        lam0 = max(8 * h, 1.0 / float(a.max()))
        while _tail_bound(a, lam0) > tol / 2:
            lam0 *= 1.5
            if lam0 > (lam_max or 1e6):
                raise QuadratureFailure("tail bound does not reach tol below lam_max")
    if lam_max is not None and lam0 > lam_max:
        if exact_tail:
            lam0 = lam_max
        else:
            raise QuadratureFailure("tail bound does not reach tol below lam_max")
    panels = max(1, math.ceil(lam0 / h))
    if panels > 400_000:
        raise QuadratureFailure("too many quadrature panels")
    edges = np.linspace(0.0, lam0, panels + 1)
    mid = 0.5 * (edges[1:] + edges[:-1])
    half = 0.5 * (edges[1:] - edges[:-1])
    results = []
    for x, wt in (_GL_LO, _GL_HI):
        nodes = (mid[:, None] + half[:, None] * x[None, :]).ravel()
        weights = (half[:, None] * wt[None, :]).ravel()
        phi = _char(a, nodes) * weights
        results.append(np.cos(np.outer(ts, nodes)) @ phi / math.pi)
    lo, hi = results
    err = np.abs(hi - lo)
    if exact_tail:
        hi = hi + np.array([_exact_tail(a, float(tt), lam0) for tt in ts])
        budget = tol
    else:
        budget = tol - _tail_bound(a, lam0)
    if np.any(err > budget):
        raise QuadratureFailure(f"quadrature error {float(err.max()):.3g} exceeds tol {tol:.3g}")
    return float(hi[0]) if np.ndim(t) == 0 else hi.reshape(np.shape(t))


# ---------------------------------------------------------------------------
# shape checks


class Envelope(NamedTuple):
    C: float
    c: float
    c_gauss: float
    violations: int
    joint_C: float
    joint_c: float


def default_grid(model: DensityModel, points: int = 401) -> np.ndarray:
    return np.linspace(-model.support, model.support, points)


def envelope_fit(model: DensityModel, grid=None) -> Envelope:
    """Smallest C with p(t) <= C e^{-|t|/2} on the grid, plus decay diagnostics.

    c_gauss is the negated slope of log p against t^2 over |t| >= 1; the
    joint (C, c) fit regresses log p on |t| and is informational only.
    ``violations`` counts grid points where p fails to be non-increasing in |t|.
    """
    grid = default_grid(model) if grid is None else np.atleast_1d(np.asarray(grid, dtype=float))
    p = np.atleast_1d(model(grid))
    at = np.abs(grid)
    C = float(np.max(p * np.exp(at / 2.0)))
    order = np.argsort(at, kind="stable")
    ps = p[order]
    slack = 1e-12 * float(ps.max()) if ps.size else 0.0
    violations = int(np.count_nonzero(ps[1:] > ps[:-1] + slack))
    pos = p > 0
    sel = pos & (at >= 1.0)
    c_gauss = math.nan
    if np.count_nonzero(sel) >= 2 and np.ptp(at[sel]) > 0:
        c_gauss = -float(np.polyfit(at[sel] ** 2, np.log(p[sel]), 1)[0])
    joint_C = joint_c = math.nan
    if np.count_nonzero(pos) >= 2 and np.ptp(at[pos]) > 0:
        slope, icpt = np.polyfit(at[pos], np.log(p[pos]), 1)
        joint_C, joint_c = float(math.exp(icpt)), -float(slope)
    return Envelope(C, 0.5, c_gauss, violations, joint_C, joint_c)


def logconcavity_check(model, grid) -> int:
    """Interior grid triples where log p bends upward by more than 1e-9."""
    grid = np.sort(np.asarray(grid, dtype=float))
    p = np.atleast_1d(model(grid))
    if np.any(p <= 0):
        raise ValueError("grid must lie inside the open support")
    lp = np.log(p)
    t0, t1, t2 = grid[:-2], grid[1:-1], grid[2:]
    lam = (t1 - t0) / (t2 - t0)
    # equals the plain second difference on a uniform grid
    bend = 2.0 * ((1 - lam) * lp[:-2] + lam * lp[2:] - lp[1:-1])
    return int(np.count_nonzero(bend > 1e-9))


def unimodality_violations(model, grid) -> int:
    """Points on [0, inf) where p increases away from the origin."""
    t = np.sort(np.abs(np.asarray(grid, dtype=float)))
    p = np.atleast_1d(model(t))
    return int(np.count_nonzero(p[1:] > p[:-1]))


# ---------------------------------------------------------------------------
# tails


def hoeffding_bound(a, t: float) -> float:
    """exp(-t^2 / (2 sum a_i^2)), a bound on P{sum a_i eps_i >= t} for Rademacher eps."""
    if t <= 0:
        raise ValueError("t must be positive")
    s = math.fsum(float(x) ** 2 for x in a)
    if s == 0:
        raise AllZero("all coefficients are zero")
    return math.exp(-t * t / (2.0 * s))


def rademacher_tail(a, t) -> Fraction:
    """Exact P{sum a_i eps_i >= t} by enumerating sign patterns (n <= TERM_CAP)."""
    a = [to_fraction(x) for x in a]
    if len(a) > TERM_CAP:
        raise TooManyTerms(f"n={len(a)} exceeds {TERM_CAP}")
    t = to_fraction(t)
    den = t.denominator
    for x in a:
        den = den * x.denominator // math.gcd(den, x.denominator)
    counts = {0: 1}
    for x in a:
        v = int(x * den)
        nxt: dict[int, int] = {}
        for s, c in counts.items():
            nxt[s + v] = nxt.get(s + v, 0) + c
            nxt[s - v] = nxt.get(s - v, 0) + c
        counts = nxt
    thr = t * den
    hits = sum(c for s, c in counts.items() if s >= thr)
    return Fraction(hits, 2 ** len(a))


# ---------------------------------------------------------------------------
# uniform spacings and the order simplex


@dataclass(frozen=True)
class SpacingMoments:
    n: int
    e_x1: Fraction
    e_x1sq: Fraction
    e_x1x2: Fraction

    def __post_init__(self):
        if (self.n + 1) * self.e_x1sq + self.n * (self.n + 1) * self.e_x1x2 != 1:
            raise ArithmeticError("spacing moments violate the second-moment identity")


def spacing_moments(n: int) -> SpacingMoments:
    """First and second moments of the spacings of n uniform points on [0, 1]."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return SpacingMoments(n, Fraction(1, n + 1), Fraction(2, (n + 1) * (n + 2)),
                          Fraction(1, (n + 1) * (n + 2)))


def _perm(sigma, n: int) -> list[int]:
    s = [int(v) for v in sigma]
    if sorted(s) != list(range(1, n + 1)):
        raise ValueError("sigma must be a permutation of 1..n")
    return s


def _tails(w, sigma) -> list:
    acc = 0
    out = []
    for i in reversed(sigma):
        acc = acc + w[i - 1]
        out.append(acc)
    return out[::-1]


class VarianceCheck(NamedTuple):
    variance: Fraction
    bound: Fraction

    @property
    def holds(self) -> bool:
        return self.variance <= self.bound


def simplex_variance(w, sigma) -> VarianceCheck:
    """Exact Var<w, V> for V uniform on the simplex x_sigma(1) < ... < x_sigma(n)."""
    wf = [to_fraction(x) for x in w]
    n = len(wf)
    alpha = _tails(wf, _perm(sigma, n))
    s2 = sum((x * x for x in alpha), Fraction(0))
    s1 = sum(alpha, Fraction(0))
    var = s2 / ((n + 1) * (n + 2)) - s1 * s1 / ((n + 1) ** 2 * (n + 2))
    return VarianceCheck(var, s2 / ((n + 1) * (n + 2)))


def _sorted_uniforms(rng, rows: int, n: int) -> np.ndarray:
    return np.sort(rng.random((rows, n)), axis=1)


def simplex_variance_mc(w, sigma, samples: int, seed: int) -> tuple[float, float]:
    """Sample variance of <w, V_sigma> over sorted uniforms and its standard error."""
    if samples < 2:
        raise ValueError("need at least 2 samples for a variance")
    w = np.asarray([float(x) for x in w])
    n = w.size
    s = _perm(sigma, n)
    ws = w[np.asarray(s) - 1]  # V_(j) sits at coordinate sigma(j)
    vals = []
    for c, rows in enumerate(chunk_sizes(samples)):
        vals.append(_sorted_uniforms(chunk_rng(seed, 7, c), rows, n) @ ws)
    x = np.concatenate(vals)
    d = x - x.mean()
    m2 = float(np.mean(d * d))
    m4 = float(np.mean(d ** 4))
    var = m2 * x.size / (x.size - 1)
    return var, math.sqrt(max(m4 - m2 * m2, 0.0) / x.size)


def simplex_F_forms(x, w) -> tuple[float, float]:
    """F(x) from the sorted-gap sum and from the integral of G_t(x)^2 over [0, 1]."""
    x = np.asarray(x, dtype=float)
    w = np.asarray(w, dtype=float)
    if x.shape != w.shape:
        raise ValueError("x and w must have equal length")
    if np.any((x < 0) | (x > 1)):
        raise ValueError("x must lie in the unit cube")
    order = np.argsort(x, kind="stable")
    xs = x[order]
    if np.any(np.diff(xs) == 0):
        raise TiedCoordinates("coordinates of x must be distinct")
    gaps = np.diff(np.concatenate([[0.0], xs]))
    alpha = np.cumsum(w[order][::-1])[::-1]
    gap_form = math.fsum((alpha * alpha * gaps).tolist())
    # G_t is constant between consecutive sorted coordinates; read it at gap midpoints
    edges = np.concatenate([[0.0], xs, [1.0]])
    mids = 0.5 * (edges[1:] + edges[:-1])
    G = (x[None, :] > mids[:, None]).astype(float) @ w
    integral_form = math.fsum((G * G * np.diff(edges)).tolist())
    return gap_form, integral_form


def simplex_F(x, w) -> float:
    gap_form, integral_form = simplex_F_forms(x, w)
    if abs(gap_form - integral_form) > 1e-10 * (1.0 + abs(gap_form)):
        raise ArithmeticError("the two forms of F disagree")
    return gap_form


def simplex_F_batch(X: np.ndarray, w) -> np.ndarray:
    """Gap form of F for each row of X."""
    X = np.asarray(X, dtype=float)
    w = np.asarray(w, dtype=float)
    order = np.argsort(X, axis=1)
    xs = np.take_along_axis(X, order, axis=1)
    gaps = np.diff(np.concatenate([np.zeros((X.shape[0], 1)), xs], axis=1), axis=1)
    alpha = np.cumsum(w[order][:, ::-1], axis=1)[:, ::-1]
    return np.sum(alpha * alpha * gaps, axis=1)


def simplex_F_mc(w, pi, samples: int, seed: int) -> tuple[float, float]:
    """Mean of F over points uniform on the simplex x_pi(1) < ... < x_pi(n), with stderr."""
    w = np.asarray([float(v) for v in w])
    n = w.size
    p = np.asarray(_perm(pi, n)) - 1
    total = 0.0
    total_sq = 0.0
    for c, rows in enumerate(chunk_sizes(samples)):
        U = _sorted_uniforms(chunk_rng(seed, 14, c), rows, n)
        X = np.empty_like(U)
        X[:, p] = U
        f = simplex_F_batch(X, w)
        total += float(f.sum())
        total_sq += float((f * f).sum())
    mean = total / samples
    var = max(total_sq / samples - mean * mean, 0.0) * samples / max(samples - 1, 1)
    return mean, math.sqrt(var / samples)


__all__ = [
    "TooManyTerms", "ZeroWeight", "QuadratureFailure", "AllZero", "TiedCoordinates",
    "EXACT_CAP", "TERM_CAP", "DensityModel", "exact_density", "fourier_density", "Envelope",
    "default_grid", "envelope_fit", "logconcavity_check", "unimodality_violations",
    "hoeffding_bound", "rademacher_tail", "SpacingMoments", "spacing_moments", "VarianceCheck",
    "simplex_variance", "simplex_variance_mc", "simplex_F", "simplex_F_forms", "simplex_F_batch",
    "simplex_F_mc",
]
