import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from descartes_lab.poly_roots import (
    REAL_LINE,
    Interval,
    Polynomial,
    RootTally,
    ZeroPolynomial,
    count_with_multiplicity,
    descartes_bound,
    dyadic_integers,
    root_tally,
    squarefree_decompose,
    sturm_count_distinct,
    tally_integer_coeffs,
    to_fraction,
)

P = Polynomial.from_coeffs
POS = Interval(0, math.inf)


def poly_from_roots(roots, lead=1):
    c = [Fraction(lead)]
    for r in roots:
        r = Fraction(r)
        nxt = [Fraction(0)] * (len(c) + 1)
        for i, v in enumerate(c):
            nxt[i] -= r * v
            nxt[i + 1] += v
        c = nxt
    return P(c)


# -- examples ---------------------------------------------------------------


class TestSquarefree:
    def test_perfect_square(self):
        assert squarefree_decompose(P([1, -2, 1])) == [(P([-1, 1]), 2)]

    def test_already_squarefree(self):
        assert squarefree_decompose(P([0, -1, 0, 1])) == [(P([0, -1, 0, 1]), 1)]

    def test_square_of_quadratic(self):
        assert squarefree_decompose(P([1, 0, -2, 0, 1])) == [(P([-1, 0, 1]), 2)]

    def test_constant_has_no_factors(self):
        assert squarefree_decompose(P([5])) == []

    def test_mixed_multiplicities_reassemble(self):
        p = poly_from_roots([1, 1, 1, -2, Fraction(1, 3), Fraction(1, 3)])
        parts = squarefree_decompose(p)
        assert [m for _, m in parts] == [1, 2, 3]
        total = sum(f.degree * m for f, m in parts)
        assert total == p.degree


class TestSturm:
    def test_sqrt_two(self):
        assert sturm_count_distinct(P([-2, 0, 1]), Interval(0, 2)) == 1

    def test_no_real_roots(self):
        assert sturm_count_distinct(P([1, 0, 1]), Interval(-10, 10)) == 0

    def test_planted_roots_half_open(self):
        p = poly_from_roots([1, 2, 3])
        assert sturm_count_distinct(p, Interval(Fraction(3, 2), 3)) == 2

    def test_left_endpoint_excluded(self):
        p = poly_from_roots([1, 2, 3])
        assert sturm_count_distinct(p, Interval(1, 2)) == 1

    def test_zero_polynomial_rejected(self):
        with pytest.raises(ZeroPolynomial):
            sturm_count_distinct(P([0, 0]), REAL_LINE)


class TestMultiplicity:
    def test_double_root_at_point(self):
        assert count_with_multiplicity(P([1, -2, 1]), 1) == 2

    def test_triple_root_at_origin(self):
        assert count_with_multiplicity(P([0, 0, 0, 1]), 0) == 3

    def test_cubic_on_interval(self):
        assert count_with_multiplicity(P([0, -1, 0, 1]), Interval(-2, 2)) == 3

    def test_point_that_is_not_a_root(self):
        assert count_with_multiplicity(P([1, -2, 1]), Fraction(1, 2)) == 0


class TestRootTally:
    @pytest.mark.parametrize("method", ["fast", "sturm"])
    def test_plus_minus_one(self, method):
        t = root_tally(P([-1, 0, 1]), method)
        assert t == RootTally(0, 1, 1, 0, 0, 0, 0)
        assert t.n_star == 2

    @pytest.mark.parametrize("method", ["fast", "sturm"])
    def test_cube_at_origin(self, method):
        t = root_tally(P([0, 0, 0, 1]), method)
        assert t.n_star == 0 and t.at_zero == 3

    @pytest.mark.parametrize("method", ["fast", "sturm"])
    def test_geometric_series(self, method):
        t = root_tally(P([1, 1, 1, 1]), method)
        assert t.n_star == 1 and t.at_minus_one == 1

    def test_unknown_method(self):
        with pytest.raises(ValueError):
            root_tally(P([1, 1]), "newton")


class TestDescartesBound:
    def test_two_positive_roots(self):
        p = P([2, -3, 1])
        assert descartes_bound(p) == 2
        assert count_with_multiplicity(p, POS) == 2

    def test_no_changes(self):
        assert descartes_bound(P([1, 1, 1])) == 0

    def test_cube_minus_one(self):
        p = P([-1, 0, 0, 1])
        assert descartes_bound(p) == 1
        assert count_with_multiplicity(p, POS) == 1


class TestTextFormat:
    def test_round_trip(self):
        p = P([Fraction(1, 2), -3, 0, Fraction(7, 9)])
        assert Polynomial.from_text(p.to_text()) == p
        assert p.to_text() == "1/2 -3/1 0/1 7/9"

    def test_parses_integers_and_rationals(self):
        assert Polynomial.from_text("1 -2/4 3").coeffs == (1, Fraction(-1, 2), 3)

    @pytest.mark.parametrize("line", ["", "   ", "\n"])
    def test_rejects_empty_line(self, line):
        with pytest.raises(ValueError):
            Polynomial.from_text(line)

    def test_rejects_double_space(self):
        with pytest.raises(ValueError):
            Polynomial.from_text("1  2")


class TestExactCapture:
    def test_float_is_a_dyadic_rational(self):
        assert to_fraction(0.1) == Fraction(3602879701896397, 36028797018963968)

    def test_dyadic_integers_proportional(self):
        vals = [0.1, -2.5, 0.0, 3e-7, 1e6]
        ints = dyadic_integers(vals)
        ratio = Fraction(ints[1], 1) / Fraction(vals[1])
        assert all(Fraction(i) == ratio * Fraction(v) for i, v in zip(ints, vals))

    def test_dyadic_rejects_nan(self):
        with pytest.raises(ValueError):
            dyadic_integers([1.0, float("nan")])


# -- properties -------------------------------------------------------------

int_coeffs = st.lists(st.integers(-20, 20), min_size=1, max_size=14).filter(any)


def _planted_coeffs(draw):
    roots = draw(st.lists(st.fractions(min_value=-3, max_value=3, max_denominator=6), min_size=1, max_size=7))
    extra = draw(st.lists(st.integers(-5, 5), min_size=1, max_size=4).filter(any))
    p = poly_from_roots(roots)
    prod = [Fraction(0)] * (len(p.coeffs) + len(extra) - 1)
    for i, a in enumerate(p.coeffs):
        for j, b in enumerate(extra):
            prod[i + j] += a * b
    return P(prod).integer_coeffs()


planted = st.composite(_planted_coeffs)()
any_poly = st.one_of(int_coeffs, planted)


@settings(max_examples=300, deadline=None)
@given(any_poly)
def test_descartes_rule_of_signs(c):
    p = P(c)
    assert count_with_multiplicity(p, POS) <= descartes_bound(p)


@settings(max_examples=300, deadline=None)
@given(any_poly)
def test_fast_and_sturm_routes_agree(c):
    assert root_tally(P(c), "fast") == root_tally(P(c), "sturm")


@settings(max_examples=200, deadline=None)
@given(any_poly)
def test_regions_partition_real_roots(c):
    p = P(c)
    t = root_tally(p)
    assert t.total == count_with_multiplicity(p, REAL_LINE)
    assert t.in_pos_unit + t.at_one + t.pos_outside == count_with_multiplicity(p, POS)


@settings(max_examples=200, deadline=None)
@given(any_poly)
def test_reflection_swaps_sides(c):
    p = P(c)
    t = root_tally(p)
    r = root_tally(p.reflect())
    assert (r.at_zero, r.at_one, r.at_minus_one) == (t.at_zero, t.at_minus_one, t.at_one)
    assert (r.in_pos_unit, r.pos_outside) == (t.in_neg_unit, t.neg_outside)
    assert (r.in_neg_unit, r.neg_outside) == (t.in_pos_unit, t.pos_outside)


@settings(max_examples=200, deadline=None)
@given(any_poly.filter(lambda c: c[0] != 0))
def test_inversion_swaps_inside_and_outside(c):
    p = P(c)
    t = root_tally(p)
    r = root_tally(p.reverse())
    assert (r.in_pos_unit, r.pos_outside) == (t.pos_outside, t.in_pos_unit)
    assert (r.in_neg_unit, r.neg_outside) == (t.neg_outside, t.in_neg_unit)
    assert (r.at_one, r.at_minus_one) == (t.at_one, t.at_minus_one)


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(-1e6, 1e6, allow_nan=False), min_size=2, max_size=10).filter(any))
def test_float_capture_is_exact(vals):
    # tally from the dyadic integer vector equals tally of the exact float rationals
    assert tally_integer_coeffs(dyadic_integers(vals)) == root_tally(P(vals), "sturm")


def _companion_distinct_real(c):
    """Distinct real roots from numpy, or None when clustering is ambiguous."""
    r = np.roots(c[::-1])
    scale = np.maximum(1.0, np.abs(r))
    im = np.abs(r.imag) / scale
    if np.any((im > 1e-9) & (im < 1e-4)):
        return None
    real = np.sort(r.real[im <= 1e-9])
    if real.size > 1 and np.min(np.diff(real)) < 1e-4:
        return None
    return real.size


def test_sturm_matches_companion_matrix():
    rng = np.random.default_rng(2024)
    compared = 0
    for _ in range(10_000):
        d = int(rng.integers(1, 13))
        c = rng.integers(-9, 10, d + 1).tolist()
        if c[-1] == 0:
            c[-1] = 1
        ref = _companion_distinct_real(c)
        if ref is None:
            continue
        assert sturm_count_distinct(P(c), REAL_LINE) == ref, c
        compared += 1
    assert compared > 9_000
