"""Certified real-root counting on the four open regions (0,1), (-1,0), (1,inf), (-inf,-1).

The signs of the Descartes transform ``(x+1)^d g(1/(x+1))`` of a polynomial ``g``
are the signs of its Bernstein coefficients on [0, 1].  Bernstein coefficients
stay bounded under midpoint subdivision, so the bisection runs in float64 with a
rigorous running error radius per coefficient.  A sign is used only when
``|value| > radius``; anything else (exact zeros, clusters, deep recursion)
falls back to an exact integer Vincent-Collins-Akritas count with FLINT.
Either way the returned counts are exact.
"""
from __future__ import annotations

import functools

import flint
import numpy as np

_U = 2.0 ** -53
_FLOOR = 2.0 ** -1000  # absorbs underflow in products and subnormal binomial weights
_MAX_DEPTH = 60
_X_PLUS_1 = flint.fmpz_poly([1, 1])


def _gamma(d: int) -> float:
    # generous bound on accumulated relative rounding of one (d+1)-term matvec,
    # including the recurrence error of the tabulated matrices
    return 8.0 * (d + 2) * _U


@functools.lru_cache(maxsize=6)
def _matrices(d: int) -> tuple[np.ndarray, np.ndarray]:
    """Power-to-Bernstein map and left-half subdivision map for degree ``d``.

    to_bern[i, j] = C(i, j) / C(d, j) for j <= i
    half[i, j]    = C(i, j) / 2^i     for j <= i
    Both are built by Pascal-type recurrences so each entry carries at most
    3(d+1) unit roundoffs of relative error.
    """
    to_bern = np.zeros((d + 1, d + 1))
    half = np.zeros((d + 1, d + 1))
    to_bern[0, 0] = 1.0
    half[0, 0] = 1.0
    j = np.arange(1, d + 1, dtype=float)
    ratio = j / (d - j + 1.0)
    for i in range(1, d + 1):
        to_bern[i, 0] = 1.0
        to_bern[i, 1:i + 1] = to_bern[i - 1, 1:i + 1] + to_bern[i - 1, 0:i] * ratio[:i]
        half[i, 0] = half[i - 1, 0] * 0.5
        half[i, 1:i + 1] = (half[i - 1, 1:i + 1] + half[i - 1, 0:i]) * 0.5
    to_bern.setflags(write=False)
    half.setflags(write=False)
    return to_bern, half


def _to_float(coeffs: list[int]) -> tuple[np.ndarray, np.ndarray]:
    """Scaled float copy of integer coefficients plus an absolute error bound."""
    top = max(abs(c) for c in coeffs).bit_length()
    shift = max(top - 60, 0)
    if shift:
        vals = np.array([float(c >> shift) for c in coeffs])
        err = np.abs(vals) * _U + 1.0
    else:
        vals = np.array([float(c) for c in coeffs])
        err = np.abs(vals) * _U
    # exact power-of-two rescale to max magnitude in [1/2, 1)
    k = -int(np.frexp(np.max(np.abs(vals)))[1])
    return np.ldexp(vals, k), np.ldexp(err, k)


def _normalize(b: np.ndarray, e: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    m = np.max(np.abs(b))
    if m == 0.0:
        return b, e
    k = -int(np.frexp(m)[1])
    return np.ldexp(b, k), np.ldexp(e, k)


def _certain_variations(b: np.ndarray, e: np.ndarray) -> int | None:
    if np.any(np.abs(b) <= e):
        return None
    s = b > 0
    return int(np.count_nonzero(s[1:] != s[:-1]))


def _subdivide(b, e, half, g):
    cols = np.stack([b, np.abs(b), e, b[::-1], np.abs(b[::-1]), e[::-1]], axis=1)
    out = half @ cols
    left = out[:, 0]
    left_e = (out[:, 2] + g * out[:, 1]) * (1.0 + g) + _FLOOR
    right = out[::-1, 3].copy()
    right_e = (out[::-1, 5] + g * out[::-1, 4]) * (1.0 + g) + _FLOOR
    return (left, left_e), (right, right_e)


def _count_unit_float(b, e, half, g, depth=0) -> int | None:
    v = _certain_variations(b, e)
    if v is None:
        return None
    if v <= 1:
        return v
    if depth >= _MAX_DEPTH:
        return None
    (lb, le), (rb, re) = _subdivide(b, e, half, g)
    if abs(lb[-1]) <= le[-1]:  # value at the midpoint is not certified nonzero
        return None
    total = 0
    for bb, ee in ((lb, le), (rb, re)):
        bb, ee = _normalize(bb, ee)
        r = _count_unit_float(bb, ee, half, g, depth + 1)
        if r is None:
            return None
        total += r
    return total


def _variations(coeffs) -> int:
    v = 0
    prev = 0
    for c in coeffs:
        if c:
            s = 1 if c > 0 else -1
            if prev and s != prev:
                v += 1
            prev = s
    return v


def _reverse(p: flint.fmpz_poly, d: int) -> flint.fmpz_poly:
    c = [int(x) for x in p.coeffs()]
    c += [0] * (d + 1 - len(c))
    return flint.fmpz_poly(c[::-1])


def count_unit_exact(p: flint.fmpz_poly, d: int) -> int:
    """Distinct roots of square-free ``p`` (formal degree ``d``) in the open interval (0, 1)."""
    if d <= 0:
        return 0
    v = _variations(_reverse(p, d)(_X_PLUS_1).coeffs())
    if v <= 1:
        return v
    c = [int(x) for x in p.coeffs()]
    c += [0] * (d + 1 - len(c))
    left = flint.fmpz_poly([ci << (d - i) for i, ci in enumerate(c)])  # 2^d p(x/2)
    right = left(_X_PLUS_1)
    mid = 0
    rd = d
    rc = [int(x) for x in right.coeffs()]
    if rc and rc[0] == 0:
        mid = 1
        right = flint.fmpz_poly(rc[1:])
        rd = d - 1
    return count_unit_exact(left, d) + count_unit_exact(right, rd) + mid


def _region_polys(coeffs: list[int]) -> list[list[int]]:
    alt = [c if i % 2 == 0 else -c for i, c in enumerate(coeffs)]
    return [coeffs, alt, coeffs[::-1], alt[::-1]]


def region_counts(coeffs: list[int], stats: dict | None = None) -> tuple[int, int, int, int]:
    """Distinct roots in (0,1), (-1,0), (1,inf), (-inf,-1).

    ``coeffs`` are integers, lowest degree first, of a square-free polynomial
    with no root at 0, 1 or -1 and nonzero leading coefficient.
    """
    d = len(coeffs) - 1
    if d <= 0:
        return (0, 0, 0, 0)
    to_bern, half = _matrices(d)
    g = _gamma(d)
    polys = _region_polys(coeffs)
    vals = np.empty((d + 1, 4))
    errs = np.empty((d + 1, 4))
    for k, pc in enumerate(polys):
        vals[:, k], errs[:, k] = _to_float(pc)
    bern = to_bern @ vals
    bern_abs = to_bern @ np.abs(vals)
    bern_err = to_bern @ errs
    bern_err = (bern_err + g * bern_abs) * (1.0 + g) + _FLOOR
    out = []
    for k in range(4):
        b, e = _normalize(bern[:, k], bern_err[:, k])
        r = _count_unit_float(b, e, half, g)
        if r is None:
            if stats is not None:
                stats["fallback"] = stats.get("fallback", 0) + 1
            r = count_unit_exact(flint.fmpz_poly(polys[k]), d)
        out.append(r)
    return tuple(out)
