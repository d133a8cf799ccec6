"""Sign changes, partial-sum sequences and the positive/negative unit-interval bounds.

For coefficients lambda_0..lambda_n the partial sums are S_k = lambda_0 + ... + lambda_k
and T_k = S_0 + ... + S_k.  The number of roots in (0, 1) is at most
1 + (sign changes of T), and the alternating version T'_k bounds (-1, 0).
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from numbers import Integral, Rational

import numpy as np

from .poly_roots import Polynomial, RootTally, ZeroPolynomial, tally_integer_coeffs


def _is_exact(x) -> bool:
    return isinstance(x, (Integral, Rational, np.integer)) and not isinstance(x, (float, np.floating))


def sign_changes(b) -> int:
    """Number of strict sign flips after deleting zeros.

    Floating values count as zero only when they are exactly 0.0.
    """
    v = 0
    prev = 0
    for x in b:
        s = int(x > 0) - int(x < 0)
        if s:
            if prev and s != prev:
                v += 1
            prev = s
    return v


def _cumsum(xs):
    out = []
    acc = 0
    for x in xs:
        acc = acc + x
        out.append(acc)
    return out


def _check_closed_form(lam, S, T, signed: bool):
    # T_k = (k+1) S_k - sum_{j<=k} j * s_j lambda_j, a rearrangement of sum (k+1-j) s_j lambda_j
    exact = all(_is_exact(x) for x in lam)
    acc = 0
    for k, x in enumerate(lam):
        term = -x if (signed and k % 2) else x
        acc = acc + k * term
        closed = (k + 1) * S[k] - acc
        if exact:
            if closed != T[k]:
                raise ArithmeticError(f"closed form mismatch at k={k}")
        elif not math.isclose(float(closed), float(T[k]), rel_tol=1e-9,
                              abs_tol=1e-9 * (k + 1) * max(1.0, float(abs(S[k])))):
            raise ArithmeticError(f"closed form mismatch at k={k}")


def partial_sum_sequences(lam) -> tuple[list, list]:
    """(S, T) with S_k the prefix sums of lambda and T_k the prefix sums of S."""
    lam = list(lam)
    if not lam:
        raise ValueError("empty coefficient sequence")
    S = _cumsum(lam)
    T = _cumsum(S)
    _check_closed_form(lam, S, T, signed=False)
    return S, T


def alternating_sum_sequences(lam) -> tuple[list, list]:
    """(S', T') built from (-1)^j lambda_j."""
    lam = list(lam)
    if not lam:
        raise ValueError("empty coefficient sequence")
    signed = [x if j % 2 == 0 else -x for j, x in enumerate(lam)]
    S = _cumsum(signed)
    T = _cumsum(S)
    _check_closed_form(lam, S, T, signed=True)
    return S, T


@dataclass(frozen=True)
class SignSeqReport:
    n: int
    s_changes: int
    s_changes_alt: int
    actual_pos: int
    actual_neg: int
    witness: tuple[bool, ...]
    exact: bool = True

    @property
    def bound_pos(self) -> int:
        return 1 + self.s_changes

    @property
    def bound_neg(self) -> int:
        return 1 + self.s_changes_alt

    @property
    def holds(self) -> tuple[bool, bool]:
        return (self.actual_pos <= self.bound_pos, self.actual_neg <= self.bound_neg)

    @property
    def witness_count(self) -> int:
        return sum(self.witness)

    CSV_HEADER = ("n", "s_changes", "s_changes_alt", "actual_pos", "actual_neg", "holds_pos", "holds_neg")

    def csv_row(self) -> tuple:
        hp, hn = self.holds
        return (self.n, self.s_changes, self.s_changes_alt, self.actual_pos, self.actual_neg,
                int(hp), int(hn))


def bound_check(p, tally: RootTally | None = None) -> SignSeqReport:
    """Compare the unit-interval root counts of p with 1 + sign changes of T and T'.

    ``p`` is a :class:`Polynomial` or a sequence of integer coefficients.  A
    precomputed ``tally`` of the same polynomial may be passed to skip
    recounting.  The coefficients are replaced by a positive integer multiple,
    which changes neither sign changes nor the witness indicators.
    """
    if isinstance(p, Polynomial):
        if p.is_zero:
            raise ZeroPolynomial("operation undefined for the zero polynomial")
        lam = p.integer_coeffs()
    else:
        lam = [int(c) for c in p]
        if not any(lam):
            raise ZeroPolynomial("operation undefined for the zero polynomial")
    S, T = partial_sum_sequences(lam)
    _, Ta = alternating_sum_sequences(lam)
    if tally is None:
        tally = tally_integer_coeffs(lam)
    witness = tuple(abs(t) <= abs(s) for t, s in zip(T, S))
    return SignSeqReport(
        n=len(lam) - 1,
        s_changes=sign_changes(T),
        s_changes_alt=sign_changes(Ta),
        actual_pos=tally.in_pos_unit,
        actual_neg=tally.in_neg_unit,
        witness=witness,
    )


def bound_check_float(lam) -> tuple[int, int]:
    """Sign changes of T and T' from float coefficients (throughput mode, not exact)."""
    lam = np.asarray(lam, dtype=float)
    T = np.cumsum(np.cumsum(lam))
    alt = lam * np.where(np.arange(lam.size) % 2 == 0, 1.0, -1.0)
    Ta = np.cumsum(np.cumsum(alt))
    return sign_changes(T), sign_changes(Ta)


__all__ = [
    "sign_changes",
    "partial_sum_sequences",
    "alternating_sum_sequences",
    "SignSeqReport",
    "bound_check",
    "bound_check_float",
]
