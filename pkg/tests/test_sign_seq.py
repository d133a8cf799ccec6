from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from descartes_lab.poly_roots import Polynomial, ZeroPolynomial, root_tally
from descartes_lab.sign_seq import (
    SignSeqReport,
    alternating_sum_sequences,
    bound_check,
    bound_check_float,
    partial_sum_sequences,
    sign_changes,
)


@pytest.mark.parametrize("b, expected", [
    ((1, -2, 0, 3, -1), 3),
    ((0, 0, 0), 0),
    ((1, 0, -1, 0, 1), 2),
    ((), 0),
])
def test_sign_changes_examples(b, expected):
    assert sign_changes(b) == expected


def test_tiny_float_is_not_zero():
    assert sign_changes([1.0, -1e-300, 1.0]) == 2
    assert sign_changes([1.0, 0.0, 1.0]) == 0


@pytest.mark.parametrize("lam, S, T", [
    ((1, -1), [1, 0], [1, 1]),
    ((1, 1, 1), [1, 2, 3], [1, 3, 6]),
])
def test_partial_sums(lam, S, T):
    assert partial_sum_sequences(lam) == (S, T)


def test_partial_sum_closed_form_value():
    assert partial_sum_sequences((2, -1, -1))[1][2] == 3


@pytest.mark.parametrize("lam, S, T", [
    ((1, 1), [1, 0], [1, 1]),
    ((1, -1), [1, 2], [1, 3]),
    ((0, 0, 0), [0, 0, 0], [0, 0, 0]),
])
def test_alternating_sums(lam, S, T):
    assert alternating_sum_sequences(lam) == (S, T)


def test_empty_sequence_rejected():
    with pytest.raises(ValueError):
        partial_sum_sequences([])


class TestBoundCheck:
    def test_one_plus_x(self):
        rep = bound_check(Polynomial.from_coeffs([1, 1]))
        assert rep.actual_pos == 0 and rep.actual_pos <= rep.bound_pos

    def test_two_roots_in_unit_interval(self):
        rep = bound_check(Polynomial.from_coeffs([1, -6, 8]))
        _, T = partial_sum_sequences([1, -6, 8])
        assert T == [1, -4, -1]
        assert rep.s_changes == 1
        assert rep.bound_pos == 2
        assert rep.actual_pos == 2
        assert rep.holds == (True, True)

    def test_rademacher_seeds(self):
        for seed in range(100):
            c = (np.random.default_rng(seed).integers(0, 2, 9) * 2 - 1).tolist()
            assert all(bound_check(c).holds)

    def test_zero_polynomial(self):
        with pytest.raises(ZeroPolynomial):
            bound_check([0, 0, 0])

    def test_csv_row(self):
        rep = bound_check([1, -6, 8])
        assert SignSeqReport.CSV_HEADER == ("n", "s_changes", "s_changes_alt", "actual_pos",
                                            "actual_neg", "holds_pos", "holds_neg")
        assert rep.csv_row() == (2, 1, rep.s_changes_alt, 2, 0, 1, 1)

    def test_rational_polynomial_scaled(self):
        p = Polynomial.from_coeffs([Fraction(1, 8), Fraction(-3, 4), 1])
        assert bound_check(p).csv_row() == bound_check([1, -6, 8]).csv_row()

    def test_float_mode_matches_on_exact_input(self):
        assert bound_check_float([1.0, -6.0, 8.0]) == (1, bound_check([1, -6, 8]).s_changes_alt)


seq = st.lists(st.integers(-50, 50), min_size=1, max_size=40)


@given(seq)
def test_t_differences_are_s(lam):
    S, T = partial_sum_sequences(lam)
    assert all(T[k] - T[k - 1] == S[k] for k in range(1, len(lam)))
    Sa, Ta = alternating_sum_sequences(lam)
    assert all(Ta[k] - Ta[k - 1] == Sa[k] for k in range(1, len(lam)))


@given(seq, st.integers(1, 10**6), st.lists(st.integers(0, 39), max_size=10))
def test_sign_changes_invariant_to_scaling_and_zeros(b, c, spots):
    scaled = [c * x for x in b]
    padded = list(b)
    for s in spots:
        padded.insert(s % (len(padded) + 1), 0)
    assert sign_changes(scaled) == sign_changes(b) == sign_changes(padded)


@settings(max_examples=300, deadline=None)
@given(st.lists(st.integers(-9, 9), min_size=1, max_size=25).filter(any))
def test_unit_interval_bounds_and_witness_count(lam):
    rep = bound_check(lam)
    assert rep.holds == (True, True)
    assert rep.s_changes <= rep.witness_count
    t = root_tally(Polynomial.from_coeffs(lam), "sturm")
    assert (rep.actual_pos, rep.actual_neg) == (t.in_pos_unit, t.in_neg_unit)
