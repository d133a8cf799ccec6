"""Anti-concentration of linear statistics of a uniform random permutation.

Permutations are written as tuples of images ``(pi(1), ..., pi(n))`` with
values in 1..n, and all sums over positions are 1-based.

Events are evaluated in float64 first; rows whose float margin is within a
small tolerance of the boundary are re-decided in exact rational arithmetic,
so every indicator is exact for the given data (floats count as the dyadic
rationals they are).
"""
from __future__ import annotations

import functools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from math import comb, factorial
from numbers import Integral, Rational
from typing import NamedTuple, Sequence

import numpy as np

from .poly_roots import to_fraction
from .rng import CHUNK, RNG_ID, chunk_rng, chunk_sizes, run_tasks, sample_law


class AllEqual(ValueError):
    pass


class TooLarge(ValueError):
    pass


class ExactnessRequired(ValueError):
    pass


class LengthTooSmall(ValueError):
    pass


ENUM_CAP = 10


def _exact_type(x) -> bool:
    return isinstance(x, (Integral, Rational, np.integer, str)) and not isinstance(x, (float, np.floating))


# ---------------------------------------------------------------------------
# weights


@dataclass(frozen=True)
class WeightVector:
    """Centered, unit-norm weights.

    ``source`` keeps the exact values u the weights were normalized from, so
    that w_i = (u_i - center) / scale can be re-evaluated exactly.
    """

    w: tuple[float, ...]
    center: float = 0.0
    scale: float = 1.0
    source: tuple[Fraction, ...] | None = field(default=None, compare=False)

    def __post_init__(self):
        w = tuple(float(x) for x in self.w)
        object.__setattr__(self, "w", w)
        n = len(w)
        if n < 2:
            raise ValueError("a weight vector needs at least 2 entries")
        if abs(math.fsum(w)) > 1e-12 * n:
            raise ValueError("weights must sum to 0")
        if abs(math.fsum(x * x for x in w) - 1.0) > 1e-12 * n:
            raise ValueError("weights must have unit Euclidean norm")

    @property
    def n(self) -> int:
        return len(self.w)

    def array(self) -> np.ndarray:
        return np.asarray(self.w)

    def exact_stat(self, perm: Sequence[int]):
        """Exact value of sum w_i perm_i as (D, s) meaning D / sqrt(s), or a Fraction."""
        if self.source is not None:
            return self.exact_stat_from_sum(sum((x * int(p) for x, p in zip(self.source, perm)),
                                                Fraction(0)))
        return sum((Fraction(x) * int(p) for x, p in zip(self.w, perm)), Fraction(0))

    def exact_stat_from_sum(self, total: Fraction):
        """(D, s) for a permutation with sum_i u_i perm_i = total."""
        u = self.source
        n = len(u)
        mean = sum(u, Fraction(0)) / n
        s = sum(((x - mean) ** 2 for x in u), Fraction(0))
        return total - mean * n * (n + 1) / 2, s

    @functools.cached_property
    def integer_source(self) -> tuple[np.ndarray, int] | None:
        """(u * den as int64, den) when sums over permutations cannot overflow."""
        if self.source is None:
            return None
        den = 1
        for x in self.source:
            den = den * x.denominator // math.gcd(den, x.denominator)
        ints = [int(x * den) for x in self.source]
        n = len(ints)
        if max(abs(v) for v in ints) * n * n >= 2 ** 62:
            return None
        return np.asarray(ints, dtype=np.int64), den


def normalize_weights(u) -> WeightVector:
    """w_i = (u_i - mean(u)) / ||u - mean(u)||."""
    u = list(u)
    if len(u) < 2:
        raise ValueError("need at least 2 values")
    if max(u) == min(u):
        raise AllEqual("all values are equal")
    if all(_exact_type(x) for x in u):
        uf = tuple(to_fraction(x) for x in u)
        mean = sum(uf, Fraction(0)) / len(uf)
        s = sum(((x - mean) ** 2 for x in uf), Fraction(0))
        sigma = math.sqrt(s)
        w = [float(x - mean) / sigma for x in uf]
        return WeightVector(tuple(w), float(mean), sigma, uf)
    arr = np.asarray(u, dtype=float)
    mean = math.fsum(arr) / arr.size
    c = arr - mean
    sigma = math.sqrt(math.fsum(c * c))
    w = c / sigma
    # one refinement pass removes the residual mean left by rounding
    w = w - math.fsum(w) / w.size
    w = w / math.sqrt(math.fsum(w * w))
    return WeightVector(tuple(w.tolist()), mean, sigma, tuple(Fraction(float(x)) for x in arr))


WEIGHT_FAMILIES = ("arith", "gaussian", "two_atom")


def weight_family(name: str, n: int, seed: int = 0) -> WeightVector:
    """Normalized arithmetic progression, seeded Gaussian draw, or a two-valued vector."""
    if n < 2:
        raise ValueError("n must be >= 2")
    if name == "arith":
        return normalize_weights(range(1, n + 1))
    if name == "gaussian":
        from .rng import chunk_rng
        return normalize_weights(chunk_rng(seed, 2, n).standard_normal(n).tolist())
    if name == "two_atom":
        return normalize_weights([1] * (n // 2) + [0] * (n - n // 2))
    raise ValueError(f"unknown weight family {name!r}")


def window_support_bound(w: WeightVector) -> float:
    """max over permutations of |sum w_i pi(i)| (sorted pairing)."""
    ws = np.sort(w.array())
    ranks = np.arange(1, ws.size + 1)
    return float(max(ws @ ranks, -(ws @ ranks[::-1])))


# ---------------------------------------------------------------------------
# events

_KINDS = ("WINDOW", "ATOM", "SHEPP", "RELATIVE", "RELATIVE_ALT")


@dataclass(frozen=True)
class PermEvent:
    kind: str
    data: tuple | None = None
    L: Fraction = Fraction(0)
    h: Fraction = Fraction(1)
    x: Fraction | None = None
    law: str | None = None
    k: int | None = None
    weights: WeightVector | None = field(default=None, compare=False)

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ValueError(f"unknown event kind {self.kind!r}")
        if self.kind == "WINDOW":
            if self.weights is None:
                raise ValueError("WINDOW needs a WeightVector")
            object.__setattr__(self, "L", to_fraction(self.L))
            object.__setattr__(self, "h", to_fraction(self.h))
            if self.h <= 0:
                raise ValueError("WINDOW requires h > 0")
        if self.kind == "ATOM":
            object.__setattr__(self, "x", to_fraction(self.x))
        if self.data is None and self.law is None and self.kind != "WINDOW":
            raise ValueError("event needs data or a sampling law")
        if self.law is not None and (self.kind not in ("RELATIVE", "RELATIVE_ALT") or not self.k):
            raise ValueError("sampling laws apply to RELATIVE events with a length k")

    @classmethod
    def window(cls, w: WeightVector, L=0, h=1) -> "PermEvent":
        if not isinstance(w, WeightVector):
            w = WeightVector(tuple(w))
        return cls("WINDOW", tuple(w.w), L=L, h=h, weights=w)

    @classmethod
    def atom(cls, u, x) -> "PermEvent":
        return cls("ATOM", tuple(u), x=x)

    @classmethod
    def shepp(cls, u) -> "PermEvent":
        return cls("SHEPP", tuple(u))

    @classmethod
    def relative(cls, data=None, alt: bool = False, law: str | None = None, k: int | None = None):
        kind = "RELATIVE_ALT" if alt else "RELATIVE"
        return cls(kind, None if data is None else tuple(data), law=law, k=k)

    @property
    def n(self) -> int:
        return self.k if self.data is None else len(self.data)

    @property
    def exact_data(self) -> bool:
        if self.kind == "WINDOW":
            return True  # weights are exact dyadics or carry an exact source
        return self.data is not None and all(_exact_type(v) for v in self.data)


@dataclass(frozen=True)
class ProbEstimate:
    p_hat: float
    stderr: float
    trials: int
    exact: Fraction | None = None
    seed: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.p_hat <= 1.0:
            raise ValueError("probability out of range")


def event_csv_row(e: PermEvent, est: ProbEstimate) -> tuple:
    """event_kind, n, L, h, trials, p_hat, stderr, exact_num, exact_den, seed, rng_id."""
    L = float(e.L) if e.kind == "WINDOW" else ""
    h = float(e.h) if e.kind == "WINDOW" else ""
    num = est.exact.numerator if est.exact is not None else ""
    den = est.exact.denominator if est.exact is not None else ""
    return (e.kind, e.n, L, h, est.trials, repr(est.p_hat), repr(est.stderr), num, den,
            "" if est.seed is None else est.seed, RNG_ID if est.trials else "enumeration")


EVENT_CSV_HEADER = ("event_kind", "n", "L", "h", "trials", "p_hat", "stderr", "exact_num",
                    "exact_den", "seed", "rng_id")


# ---------------------------------------------------------------------------
# permutations


def next_permutation(a: list) -> bool:
    """Advance ``a`` in place to its lexicographic successor; False after the last one."""
    i = len(a) - 2
    while i >= 0 and a[i] >= a[i + 1]:
        i -= 1
    if i < 0:
        return False
    j = len(a) - 1
    while a[j] <= a[i]:
        j -= 1
    a[i], a[j] = a[j], a[i]
    a[i + 1:] = reversed(a[i + 1:])
    return True


def iter_permutations(n: int):
    a = list(range(1, n + 1))
    yield tuple(a)
    while next_permutation(a):
        yield tuple(a)


@functools.lru_cache(maxsize=10)
def _lex_table(k: int) -> np.ndarray:
    """All permutations of 0..k-1 in lexicographic order, one per row."""
    if k == 0:
        return np.zeros((1, 0), dtype=np.int8)
    sub = _lex_table(k - 1)
    blocks = []
    for first in range(k):
        rest = sub + (sub >= first)
        blocks.append(np.hstack([np.full((sub.shape[0], 1), first, dtype=np.int8), rest]))
    out = np.vstack(blocks).astype(np.int8)
    out.setflags(write=False)
    return out


def lex_block(n: int, first: int) -> np.ndarray:
    """Lexicographic block of permutations of 1..n with pi(1) = first (1-based values)."""
    sub = _lex_table(n - 1)
    f = first - 1
    rest = sub + (sub >= f)
    return np.hstack([np.full((sub.shape[0], 1), f, dtype=np.int8), rest]).astype(np.int64) + 1


# ---------------------------------------------------------------------------
# indicators


def _cmp_sqrt(a: Fraction, c: Fraction, s: Fraction) -> int:
    """sign(a - c*sqrt(s)) for s > 0."""
    sa = (a > 0) - (a < 0)
    sb = (c > 0) - (c < 0)
    if sa != sb:
        return 1 if sa > sb else -1
    if sa == 0:
        return 0
    a2 = a * a
    b2 = c * c * s
    r = (a2 > b2) - (a2 < b2)
    return r if sa > 0 else -r


def _fr(v):
    return to_fraction(v)


def _window_decide(e: PermEvent, st, n: int) -> bool:
    target = e.L * n
    if isinstance(st, tuple):
        D, s = st
        return _cmp_sqrt(D, target - e.h, s) >= 0 and _cmp_sqrt(D, target + e.h, s) <= 0
    return abs(st - target) <= e.h


def _exact_row(e: PermEvent, perm=None, xi=None) -> bool:
    """Exact decision of one outcome (a permutation row or a sampled xi row)."""
    if e.kind == "WINDOW":
        return _window_decide(e, e.weights.exact_stat(perm), len(perm))
    if xi is None:
        u = [_fr(v) for v in e.data]
        xi = [u[int(p) - 1] for p in perm] if e.kind in ("RELATIVE", "RELATIVE_ALT") else None
    else:
        xi = [_fr(float(v)) for v in xi]
    if e.kind == "ATOM":
        u = [_fr(v) for v in e.data]
        return sum((a * int(p) for a, p in zip(u, perm)), Fraction(0)) == e.x
    if e.kind == "SHEPP":
        u = [_fr(v) for v in e.data]
        return abs(sum((a * int(p) for a, p in zip(u, perm)), Fraction(0))) <= abs(sum(u, Fraction(0)))
    return relative_event_indicator(xi, alt=(e.kind == "RELATIVE_ALT"))


def _positions(n: int, alt: bool) -> tuple[np.ndarray, np.ndarray]:
    j = np.arange(1, n + 1, dtype=float)
    if not alt:
        return j, np.ones(n)
    sgn = np.where(j % 2 == 0, 1.0, -1.0)
    return sgn * j, sgn


def _lhs_rhs(e: PermEvent, P: np.ndarray | None, xi: np.ndarray | None):
    """Float lhs, rhs (event is lhs <= rhs) and an absolute tolerance per row."""
    if e.kind == "WINDOW":
        w = e.weights.array()
        n = w.size
        stat = P @ w
        target = float(e.L) * n
        lhs = np.abs(stat - target)
        rhs = np.full(lhs.shape, float(e.h))
        scale = float(np.abs(w).sum()) * n + abs(target) + float(e.h) + 1.0
        return lhs, rhs, 1e-9 * scale
    if xi is None:
        u = np.asarray([float(v) for v in e.data])
        n = u.size
        if e.kind == "ATOM":
            stat = P @ u
            scale = float(np.abs(u).sum()) * n + abs(float(e.x)) + 1.0
            return np.abs(stat - float(e.x)), np.zeros(stat.shape), 1e-9 * scale
        if e.kind == "SHEPP":
            stat = P @ u
            scale = float(np.abs(u).sum()) * n + 1.0
            return np.abs(stat), np.full(stat.shape, abs(float(u.sum()))), 1e-9 * scale
        xi = u[P - 1]
    n = xi.shape[1]
    pos, sgn = _positions(n, e.kind == "RELATIVE_ALT")
    lhs = np.abs(xi @ pos)
    rhs = np.abs(xi @ sgn)
    scale = np.abs(xi).sum(axis=1) * n + 1.0
    return lhs, rhs, 1e-9 * scale


def _int_data(e: PermEvent):
    """Integer-scaled data when exact int64 evaluation is safe, else None."""
    if e.kind == "WINDOW" or not e.exact_data:
        return None
    vals = [_fr(v) for v in e.data]
    extra = [e.x] if e.kind == "ATOM" else []
    den = 1
    for v in vals + extra:
        den = den * v.denominator // math.gcd(den, v.denominator)
    ints = [int(v * den) for v in vals]
    n = len(ints)
    bound = max(abs(v) for v in ints) * n * n * 4 + 1
    if extra:
        bound += abs(int(e.x * den))
    if bound >= 2 ** 62:
        return None
    return np.asarray(ints, dtype=np.int64), (int(e.x * den) if extra else None)


def _indicator(e: PermEvent, P: np.ndarray | None = None, xi: np.ndarray | None = None) -> np.ndarray:
    """Exact boolean outcome per row of P (permutation images) or of xi (sampled vectors)."""
    if xi is None:
        packed = _int_data(e)
        if packed is not None:
            u, x = packed
            if e.kind == "ATOM":
                return (P @ u) == x
            if e.kind == "SHEPP":
                return np.abs(P @ u) <= abs(int(u.sum()))
            xs = u[P - 1]
            n = xs.shape[1]
            j = np.arange(1, n + 1, dtype=np.int64)
            sgn = np.ones(n, dtype=np.int64)
            if e.kind == "RELATIVE_ALT":
                sgn = np.where(j % 2 == 0, 1, -1).astype(np.int64)
            return np.abs(xs @ (sgn * j)) <= np.abs(xs @ sgn)
    lhs, rhs, tol = _lhs_rhs(e, P, xi)
    out = lhs <= rhs
    unsure = np.nonzero(np.abs(lhs - rhs) <= tol)[0]
    packed = e.weights.integer_source if e.kind == "WINDOW" else None
    if packed is not None and unsure.size:
        # the event depends on the permutation only through sum u_i pi(i)
        u, den = packed
        sums = P[unsure] @ u
        keys, inverse = np.unique(sums, return_inverse=True)
        n = P.shape[1]
        verdict = np.array([_window_decide(e, e.weights.exact_stat_from_sum(Fraction(int(k), den)), n)
                            for k in keys])
        out[unsure] = verdict[inverse]
        return out
    for i in unsure:
        out[i] = _exact_row(e, perm=None if P is None else P[i], xi=None if xi is None else xi[i])
    return out


# ---------------------------------------------------------------------------
# probabilities


def _check_n(e: PermEvent, n: int | None) -> int:
    m = e.n
    if n is None:
        return m
    if n != m:
        raise ValueError(f"event data has length {m}, not {n}")
    return n


def _exact_block(args):
    e, n, first = args
    return int(np.count_nonzero(_indicator(e, P=lex_block(n, first))))


def event_probability_exact(e: PermEvent, n: int | None = None, cap: int = ENUM_CAP,
                            workers: int = 1) -> ProbEstimate:
    """Exact probability by full enumeration of Sym_n in lexicographic blocks."""
    if e.data is None:
        raise ExactnessRequired("law-sampled events cannot be enumerated")
    n = _check_n(e, n)
    if n > cap:
        raise TooLarge(f"n={n} exceeds the enumeration cap {cap}")
    if e.kind == "ATOM" and not e.exact_data:
        raise ExactnessRequired("ATOM needs exact rational data")
    hits = sum(run_tasks(_exact_block, [(e, n, f) for f in range(1, n + 1)], workers))
    p = Fraction(hits, factorial(n))
    return ProbEstimate(float(p), 0.0, 0, p, None)


def _mc_chunk(args):
    events, n, seed, stream, c, rows = args
    rng = chunk_rng(seed, stream, c)
    first = events[0]
    if first.data is None:
        xi = sample_law(rng, first.law, (rows, n))
        return [int(np.count_nonzero(_indicator(e, xi=xi))) for e in events]
    P = rng.permuted(np.tile(np.arange(1, n + 1, dtype=np.int64), (rows, 1)), axis=1)
    return [int(np.count_nonzero(_indicator(e, P=P))) for e in events]


def event_probabilities_mc(events: Sequence[PermEvent], trials: int, seed: int,
                           workers: int = 1, stream: int = 0) -> list[ProbEstimate]:
    """Monte Carlo estimates of several events read off one shared sample stream."""
    events = list(events)
    if trials < 1:
        raise ValueError("trials must be >= 1")
    n = events[0].n
    if any(ev.n != n for ev in events):
        raise ValueError("events sharing a stream must have the same n")
    if any((ev.data is None) != (events[0].data is None) for ev in events):
        raise ValueError("cannot mix law-sampled and permutation events in one stream")
    tasks = [(events, n, seed, stream, c, rows) for c, rows in enumerate(chunk_sizes(trials))]
    counts = np.zeros(len(events), dtype=np.int64)
    for res in run_tasks(_mc_chunk, tasks, workers):
        counts += np.asarray(res, dtype=np.int64)
    out = []
    for hits in counts.tolist():
        p = hits / trials
        out.append(ProbEstimate(p, math.sqrt(p * (1.0 - p) / trials), trials, None, seed))
    return out


def event_probability_mc(e: PermEvent, n: int | None = None, trials: int = 100_000,
                         seed: int = 0, workers: int = 1) -> ProbEstimate:
    """Fraction of uniform random permutations (or law draws) satisfying the event."""
    if e.data is not None:
        _check_n(e, n)
    elif n is not None and n != e.k:
        raise ValueError("n must match the event length k")
    return event_probabilities_mc([e], trials, seed, workers)[0]


def relative_event_indicator(xi, alt: bool = False) -> bool:
    """1{|sum j xi_j| <= |sum xi_j|}, or its (-1)^j-signed version."""
    xi = list(xi)
    if not xi:
        raise ValueError("empty sequence")
    if all(_exact_type(v) for v in xi):
        xi = [to_fraction(v) for v in xi]
        zero = Fraction(0)
    else:
        xi = [float(v) for v in xi]
        zero = 0.0
    lhs = zero
    rhs = zero
    for j, v in enumerate(xi, start=1):
        s = -1 if (alt and j % 2) else 1
        lhs += s * j * v
        rhs += s * v
    return abs(lhs) <= abs(rhs)


# ---------------------------------------------------------------------------
# alternating decompositions


@dataclass(frozen=True)
class AltDecomposition:
    k: int
    m: int
    S: float
    residual: float
    S_e: float | None = None
    S_o: float | None = None
    T_e: float | None = None
    T_o: float | None = None
    T: float | None = None
    eta: tuple | None = None
    eta_centered: tuple | None = None
    Lambda: float | None = None
    lhs: float = 0.0

    @property
    def odd(self) -> bool:
        return self.k % 2 == 1


def alt_decompose(xi) -> AltDecomposition:
    """Split sum (-1)^j j xi_j into centered even/odd parts.

    Odd k = 2m-1:  sum (-1)^j j xi_j = 2 (T + (m/2) S).
    Even k = 2m:   sum (-1)^j j xi_j = 2 sum j eta'_j + m Lambda.
    """
    xi = list(xi)
    k = len(xi)
    if k < 2:
        raise LengthTooSmall("need at least 2 entries")
    exact = all(_exact_type(v) for v in xi)
    xi = [to_fraction(v) for v in xi] if exact else [float(v) for v in xi]
    zero = Fraction(0) if exact else 0.0
    lhs = sum(((-1) ** j * j * v for j, v in enumerate(xi, start=1)), zero)
    if k % 2 == 1:
        m = (k + 1) // 2
        if m < 2:
            raise LengthTooSmall("odd length needs m >= 2")
        even = xi[1::2]  # xi_2, xi_4, ..., xi_{2m-2}
        odd = xi[0::2]   # xi_1, xi_3, ..., xi_{2m-1}
        S_e = sum(even, zero)
        S_o = sum(odd, zero)
        S = S_e - S_o
        even_c = [v - S_e / (m - 1) for v in even]
        odd_c = [v - S_o / m for v in odd]
        T_e = sum((j * v for j, v in enumerate(even_c, start=1)), zero)
        T_o = sum((j * v for j, v in enumerate(odd_c, start=1)), zero)
        T = T_e - T_o
        rhs = 2 * (T + Fraction(m, 2) * S) if exact else 2.0 * (T + 0.5 * m * S)
        res = abs(float(lhs - rhs))
        return AltDecomposition(k, m, float(S), res, float(S_e), float(S_o), float(T_e),
                                float(T_o), float(T), lhs=float(lhs))
    m = k // 2
    eta = [xi[2 * j + 1] - xi[2 * j] for j in range(m)]
    S = sum(eta, zero)
    eta_c = [v - S / m for v in eta]
    odd_sum = sum(xi[0::2], zero)
    Lam = (1 + Fraction(1, m)) * S + Fraction(1, m) * odd_sum if exact else (1.0 + 1.0 / m) * S + odd_sum / m
    rhs = 2 * sum((j * v for j, v in enumerate(eta_c, start=1)), zero) + m * Lam
    res = abs(float(lhs - rhs))
    return AltDecomposition(k, m, float(S), res, eta=tuple(float(v) for v in eta),
                            eta_centered=tuple(float(v) for v in eta_c), Lambda=float(Lam),
                            lhs=float(lhs))


def alt_residual_tolerance(xi) -> float:
    k = len(xi)
    return 1e-10 * (1.0 + max(abs(float(v)) for v in xi) * k * k)


# ---------------------------------------------------------------------------
# local sign patterns


def local_goodness_tail(m: int) -> Fraction:
    """P{#positives of m fair signs lies outside [m/4, 3m/4]}, exactly."""
    if m < 1:
        raise ValueError("m must be >= 1")
    bad = sum(comb(m, j) for j in range(m + 1) if not (m <= 4 * j <= 3 * m))
    return Fraction(bad, 2 ** m)


class BetaBCheck(NamedTuple):
    beta_sq: float
    b_sq: float
    good: bool

    @property
    def holds(self) -> bool:
        """True unless a good pattern violates b_sq/5 <= beta_sq <= b_sq."""
        return (not self.good) or (self.b_sq / 5 <= self.beta_sq <= self.b_sq)


def beta_B_check(eta, signs) -> BetaBCheck:
    """beta^2 = B^2 - S^2/m for the signed vector (s_j eta_j); good means balanced signs."""
    eta = list(eta)
    signs = list(signs)
    if len(eta) != len(signs) or not eta:
        raise ValueError("eta and signs must be nonempty and of equal length")
    m = len(eta)
    exact = all(_exact_type(v) for v in eta)
    vals = [to_fraction(v) for v in eta] if exact else [float(v) for v in eta]
    signed = [(1 if s > 0 else -1) * v for v, s in zip(vals, signs)]
    zero = Fraction(0) if exact else 0.0
    S = sum(signed, zero)
    B2 = sum((v * v for v in vals), zero)
    beta2 = B2 - S * S / m
    pos = sum(1 for v in signed if v > 0)
    good = m <= 4 * pos <= 3 * m
    return BetaBCheck(beta2, B2, good)


# ---------------------------------------------------------------------------
# tail-sum statistic and its dyadic classes


def _check_perm(sigma, n: int) -> list[int]:
    s = [int(v) for v in sigma]
    if sorted(s) != list(range(1, n + 1)):
        raise ValueError("sigma must be a permutation of 1..n")
    return s


def tail_sums(w, sigma) -> list:
    """alpha_j = w_{sigma(j)} + ... + w_{sigma(n)} for j = 1..n."""
    w = list(w.w if isinstance(w, WeightVector) else w)
    s = _check_perm(sigma, len(w))
    out = []
    acc = 0
    for idx in reversed(s):
        acc = acc + w[idx - 1]
        out.append(acc)
    return out[::-1]


def w_sigma_sq(w, sigma) -> float:
    """Sum over j of (w_{sigma(j)} + ... + w_{sigma(n)})^2."""
    return math.fsum(a * a for a in tail_sums(w, sigma))


def sym_ell_classify(w, sigma, L: float = 0.0, Q: float = 10.0) -> int:
    """0 when w(sigma) <= 4(|L|+Q) sqrt(n), else the l with 2^(l-1) < w(sigma) <= 2^l."""
    if Q < 10:
        raise ValueError("Q must be at least 10")
    wv = list(w.w if isinstance(w, WeightVector) else w)
    n = len(wv)
    sq = w_sigma_sq(wv, sigma)
    if sq <= 16.0 * (abs(L) + Q) ** 2 * n:
        return 0
    # compare squares against 4^l: 4^(l-1) < sq <= 4^l
    mant, e = math.frexp(sq)  # sq = mant * 2^e, mant in [1/2, 1)
    # smallest l with sq <= 4^l
    l = math.ceil((e - 1) / 2) if mant == 0.5 else math.ceil(e / 2)
    return l


__all__ = [
    "AllEqual", "TooLarge", "ExactnessRequired", "LengthTooSmall", "ENUM_CAP",
    "WeightVector", "normalize_weights", "WEIGHT_FAMILIES", "weight_family", "window_support_bound", "PermEvent", "ProbEstimate", "AltDecomposition",
    "BetaBCheck", "EVENT_CSV_HEADER", "event_csv_row", "next_permutation", "iter_permutations",
    "lex_block", "event_probability_exact", "event_probability_mc", "event_probabilities_mc",
    "relative_event_indicator", "alt_decompose", "alt_residual_tolerance", "local_goodness_tail",
    "beta_B_check", "tail_sums", "w_sigma_sq", "sym_ell_classify", "CHUNK",
]
