from fractions import Fraction
from math import factorial, prod

import pytest
from hypothesis import assume, given, strategies as st

from bunkbed.counting import (
    ClassIndex,
    gc,
    gc_asymptotic_check,
    gc_bounds,
    gc_bruteforce,
    gc_unnormalized,
    lemma1_comparisons,
    lemma_sums,
    outside_edges,
    q,
    q1,
    q1_closed,
    q2,
    q2_closed,
    q2_indicator_sum,
    q_closed,
    q_diagonal_closed,
    q_enumerated,
    q_negativity_interval,
    q_offdiagonal_expression,
    verify_lemma1,
)

# Connected labelled graphs on m vertices (independently tabulated sequence).
CONNECTED_LABELLED = [1, 1, 1, 4, 38, 728, 26704, 1866256, 251548592]


@pytest.mark.parametrize("c,expected", [
    ((1, 0, 0), 1), ((2, 0, 0), 1), ((3, 0, 0), 4), ((1, 1, 1), 1), ((2, 2, 2), 5), ((2, 1, 1), 1),
])
def test_gc_examples(c, expected):
    assert gc(c) == expected


def test_gc_small_classes_match_networkx(nx_oracle):
    for c in [(3, 0, 0), (2, 2, 2), (2, 1, 1), (3, 2, 1), (3, 2, 2), (2, 2, 1), (0, 3, 0), (3, 3, 1)]:
        assert gc(c) == nx_oracle["gc"](*c)


def test_gc_complete_graph_sequence():
    assert [gc((m, 0, 0)) for m in range(len(CONNECTED_LABELLED))] == CONNECTED_LABELLED


def test_gc_disconnected_without_verticals():
    for x in range(1, 8):
        for y in range(1, 8):
            assert gc((x, y, 0)) == 0


def test_gc_empty_convention():
    assert gc((0, 0, 0)) == 1
    assert gc_bruteforce((0, 0, 0)) == 1


def test_gc_rejects_invalid():
    with pytest.raises(ValueError):
        gc((2, 1, 2))
    with pytest.raises(ValueError):
        gc((-1, 0, 0))


def test_gc_bruteforce_examples():
    assert gc_bruteforce((3, 0, 0)) == 4
    assert gc_bruteforce((2, 1, 1)) == 1
    with pytest.raises(ValueError):
        gc_bruteforce((7, 0, 0))  # 21 edges


@pytest.mark.parametrize("c", [(x, y, z) for x in range(5) for y in range(x + 1) for z in range(y + 1)
                               if ClassIndex(x, y, z).num_edges <= 14])
def test_gc_matches_bruteforce_small(c):
    assert gc(c) == gc_bruteforce(c)


def test_gc_symmetry_and_normalization():
    for x in range(9):
        for y in range(9):
            for z in range(min(x, y) + 1):
                assert gc((x, y, z)) == gc((y, x, z)) == gc_unnormalized(x, y, z) == gc_unnormalized(y, x, z)


def test_gc_bounds_examples():
    assert gc_bounds((2, 2, 2)) == (3, 12)
    assert gc_bounds((1, 1, 1)) == (1, 1)
    assert gc_bounds((3, 2, 1)) == (4, 16)
    lo, hi = gc_bounds((3, 2, 1))
    assert lo <= gc_bruteforce((3, 2, 1)) <= hi
    with pytest.raises(ValueError):
        gc_bounds((2, 2, 0))


@pytest.mark.parametrize("m", [7, 10, 20])
def test_gc_asymptotic_check(m):
    assert gc_asymptotic_check(m)


def test_gc_asymptotic_check_rejects_small_m():
    with pytest.raises(ValueError):
        gc_asymptotic_check(6)


def test_verify_lemma1_small_exhaustive_against_bruteforce():
    assert verify_lemma1(4) == []
    for big, small in lemma1_comparisons(4):
        if big.num_edges <= 12 and small.num_edges <= 12:
            assert gc_bruteforce(big) >= gc_bruteforce(small)


def test_verify_lemma1_computer_range():
    assert verify_lemma1(9, 9) == []


def test_verify_lemma1_degenerate():
    assert list(lemma1_comparisons(0)) == [(ClassIndex(0, 0, 0), ClassIndex(0, 0, 0))]
    assert verify_lemma1(0) == []


def test_q1_examples():
    assert q1(3, (2, 1, 1)) == 2
    assert q1(4, (3, 2, 1)) == 6
    for n in range(2, 9):
        assert q1(n, (2, 0, 0)) == 1


def test_q2_examples():
    assert q2(3, (2, 1, 1)) == 1
    assert q2(4, (2, 2, 1)) == 6
    for n in range(2, 8):
        for x in range(n + 1):
            assert q2(n, (x, 0, 0)) == 0


def test_q_functions_reject_mismatched_class():
    with pytest.raises(ValueError):
        q1(3, (3, 3, 1))
    with pytest.raises(ValueError):
        q2(3, (1, 2, 2))


def test_q_enumerated_examples():
    assert q_enumerated(3, (2, 1, 1), "q1_sets") == 2
    assert q_enumerated(4, (2, 2, 1), "q2_sets") == 6
    assert q_enumerated(4, (1, 1, 1), "q1_sets") == 0
    with pytest.raises(ValueError):
        q_enumerated(11, (2, 0, 0), "q1_sets")


def _classes(n):
    for x in range(n + 1):
        for y in range(n + 1):
            for z in range(min(x, y) + 1):
                if x + y - z <= n:
                    yield ClassIndex(x, y, z)


@pytest.mark.parametrize("n", range(2, 8))
def test_q1_q2_match_enumeration(n):
    for c in _classes(n):
        assert q1(n, c) == q_enumerated(n, c, "q1_sets")
        assert q2(n, c) == q_enumerated(n, c, "q2_sets")


@pytest.mark.parametrize("n", range(2, 10))
def test_closed_forms_match_indicator_forms(n):
    for c in _classes(n):
        if c.z >= 1:
            assert q1_closed(n, c) == q1(n, c)
            assert q2_closed(n, c) == q2(n, c) == q2_indicator_sum(n, c)


def test_printed_indicators_differ_only_where_gc_vanishes():
    for n in range(2, 9):
        for c in _classes(n):
            if q2(n, c) != q2_indicator_sum(n, c):
                assert c.z == 0 and c.y >= 1 and gc(c) == 0


@given(st.integers(0, 8), st.integers(1, 12))
def test_factorial_indicator_identity(k, x):
    lhs = Fraction(1, factorial(x - k)) if x >= k else Fraction(0)
    rhs = Fraction(prod(x - i for i in range(k)), factorial(x))
    assert lhs == rhs


def test_q_examples():
    for n in range(2, 10):
        for x in range(1, n + 1):
            if 2 * x - x <= n:
                assert q(n, (x, x, x)) == 0
    assert q(4, (2, 2, 1)) == -2
    assert q(4, (3, 1, 1)) == 2
    assert q(4, (3, 1, 1)) + q(4, (2, 2, 1)) == 0


def test_q_out_of_range_is_zero():
    assert q(4, (3, 3, 1)) == 0
    assert q(4, (2, 1, 2)) == 0
    assert q(4, (-1, 2, 0)) == 0


@given(st.integers(2, 30), st.integers(1, 15), st.integers(1, 15), st.integers(1, 15))
def test_q_closed_matches_definition(n, x, y, z):
    c = ClassIndex(x, y, z)
    assume(c.is_valid(n))
    assert q_closed(n, c) == q(n, c)
    if x == y:
        assert q_diagonal_closed(n, x, z) == q(n, c)
        assert q_offdiagonal_expression(n, c) == 2 * q(n, c)
    else:
        assert q_offdiagonal_expression(n, c) == q(n, c)


def test_negativity_interval_examples():
    for y in range(1, 6):
        iv = q_negativity_interval(y, y)
        assert (iv.lo, iv.hi) == (y, y + 1)
        assert q(2 * y - y + y, (y, y, y)) == 0
    iv = q_negativity_interval(2, 1)
    assert (iv.lo, iv.hi) == (1.0, 4.0)
    n = 6
    assert q(n, (2, 2, 1)) < 0
    assert q(n, (3, 2, 1)) <= 0
    assert q(n, (5, 2, 1)) > 0
    assert iv.on_boundary(4) and iv.on_boundary(1)
    with pytest.raises(ValueError):
        q_negativity_interval(1, 2)


def test_negativity_interval_consistency():
    for y in range(1, 13):
        for z in range(1, y + 1):
            iv = q_negativity_interval(y, z)
            for x in range(z, 40):
                value = q(x + y - z, (x, y, z))
                assert (value <= 0) == iv.contains(x)
                if iv.on_boundary(x):
                    assert value == 0


def test_outside_edges_examples():
    for n in range(1, 8):
        assert outside_edges(n, (n, n, n)) == 0
    assert outside_edges(3, (2, 1, 1)) == 2
    assert outside_edges(2, (2, 0, 0)) == 1
    with pytest.raises(ValueError):
        outside_edges(3, (3, 3, 2))


def test_outside_edges_identities():
    n = 30
    for x in range(13):
        for y in range(13):
            for z in range(min(x, y) + 1):
                assert outside_edges(n, (x, y, z)) == outside_edges(n, (y, x, z))
                assert outside_edges(n, (x + 1, y, z)) - outside_edges(n, (x, y + 1, z)) == x - y


def test_lemma_sums_examples():
    for k in range(1, 8):
        assert lemma_sums(2 * k + 1, k, k) == (0, 0)
        assert lemma_sums(2 * k + 1, k, k)[0] == q(2 * k + 1, (k, k, k)) == 0
    assert lemma_sums(4, 2, 1)[0] == q(4, (2, 2, 1)) + q(4, (3, 1, 1)) == 0
    with pytest.raises(ValueError):
        lemma_sums(5, 1, 2)


def test_lemma_sums_minimal_n():
    for k in range(1, 25):
        for z in range(1, k + 1):
            assert lemma_sums(2 * k - z, k, z)[0] == 0
            assert lemma_sums(2 * k - z + 1, k, z) == (0, 0)


def test_lemma_sums_closed_form_route():
    for k in range(1, 30):
        for z in range(1, k + 1):
            assert lemma_sums(2 * k + 1, k, z, q_fn=q_closed) == (0, 0)


def test_shifted_window_does_not_vanish():
    # Starting the sum at i = z instead of i = 0 leaves a nonzero remainder.
    assert lemma_sums(5, 2, 1, start=1) == (3, 6)


def test_single_sign_change_along_groups():
    for k in range(1, 20):
        for z in range(1, k + 1):
            for n in (2 * k - z + 1, 2 * k + 1, 3 * k):
                for family_shift in (0, 1):
                    seq = [q(n, (k + i + family_shift, k - i, z)) for i in range(k - z + 1)]
                    signs = [v > 0 for v in seq if v != 0]
                    assert signs == sorted(signs)
