from fractions import Fraction as F

import pytest
from hypothesis import given, settings, strategies as st

from flatlab.cfrac import (
    MAT_T,
    MAT_V,
    Mat2,
    as_word,
    continued_fraction_digits,
    convergents,
    cylinder_interval,
    cylinder_length,
    diophantine_type_estimate,
    gauss_map,
    gauss_orbit,
    gauss_tail,
    homography,
    proxy_slope,
    slope_from_word,
    word_interval_hull,
    word_matrix,
)

words = st.lists(st.integers(min_value=1, max_value=30), min_size=1, max_size=12).map(
    tuple
)


# ---- frozen values ----

def test_convergents_fibonacci():
    assert convergents((1, 1, 1, 1, 1)) == [(1, 1), (1, 2), (2, 3), (3, 5), (5, 8)]


def test_convergents_123():
    assert convergents((1, 2, 3)) == [(1, 1), (2, 3), (7, 10)]
    assert slope_from_word((1, 2, 3)) == F(7, 10)


def test_cylinder_intervals_small():
    assert cylinder_interval((1,)) == (F(1, 2), F(1))
    assert cylinder_interval((2,)) == (F(1, 3), F(1, 2))
    assert cylinder_interval((1, 2)) == (F(2, 3), F(3, 4))


def test_word_matrices():
    assert word_matrix((1,)) == MAT_V == Mat2(1, 0, 1, 1)
    assert word_matrix((1, 1)) == Mat2(1, 1, 1, 2)
    assert word_matrix((1, 2, 3)) == Mat2(7, 2, 10, 3)
    assert MAT_T.row_major() == (1, 1, 0, 1)


def test_gauss_orbit_frozen():
    assert gauss_orbit(F(7, 10)) == [F(7, 10), F(3, 7), F(1, 3), F(0)]
    assert continued_fraction_digits(F(7, 10)) == (1, 2, 3)


def test_type_estimate_golden():
    import math

    assert diophantine_type_estimate((1,) * 8) == 1.0
    est = diophantine_type_estimate((1, 1, 1, 1, 100))
    assert est == pytest.approx(1 + math.log(100) / math.log(5))


def test_validation():
    with pytest.raises(ValueError):
        as_word((1, 0, 2))
    with pytest.raises(ValueError):
        gauss_map(F(3, 2))


def test_proxy_slope():
    s = proxy_slope((2, 3), pad=10)
    assert s.depth == 2
    assert s.word[:2] == (2, 3)
    assert continued_fraction_digits(s.value)[:2] == (2, 3)
    lo, hi = cylinder_interval((2, 3))
    assert lo <= s.value <= hi


# ---- properties ----

@given(words)
def test_interval_length_formula(word):
    convs = convergents(word)
    qn = convs[-1][1]
    qn1 = convs[-2][1] if len(convs) >= 2 else 1
    assert cylinder_length(word) == F(1, qn * (qn + qn1))


@given(words)
def test_matrix_det_and_columns(word):
    m = word_matrix(word)
    assert m.det() == 1
    convs = convergents(word)
    p, q = convs[-1]
    if len(word) % 2 == 0:
        assert (m.b, m.d) == (p, q)
        assert homography(m, F(0)) == F(p, q)
    else:
        assert (m.a, m.c) == (p, q)
        assert homography(m, None) == F(p, q)


@given(words, words)
def test_matrix_concatenation_even_split(w1, w2):
    if len(w1) % 2 == 0:
        assert word_matrix(w1 + w2) == word_matrix(w1) * word_matrix(w2)


@given(words, st.integers(min_value=1, max_value=20))
def test_cylinder_nesting(word, a):
    lo, hi = cylinder_interval(word)
    lo2, hi2 = cylinder_interval(word + (a,))
    assert lo <= lo2 <= hi2 <= hi


@given(words)
def test_digits_roundtrip(word):
    # canonical form: a rational CF computed back may end ...,(a_n - 1, 1)
    alpha = slope_from_word(word)
    digits = continued_fraction_digits(alpha)
    assert slope_from_word(digits) == alpha
    assert digits[-1] >= 2 or digits == (1,)


@given(words, st.integers(min_value=0, max_value=8))
def test_gauss_tail_homography(word, k):
    word = word + (2,)  # keep the tail nonzero at the split depth
    alpha = slope_from_word(word)
    n = min(2 * k, len(word) - 1)
    n -= n % 2
    tail = gauss_tail(alpha, n)
    m = word_matrix(word[:n])
    assert homography(m, tail) == alpha


@settings(max_examples=60)
@given(
    words,
    st.integers(min_value=1, max_value=25),
    st.integers(min_value=0, max_value=25),
)
def test_bounded_distortion(word, a_lo, extra):
    a_hi = a_lo + extra
    total = F(0)
    for a in range(a_lo, a_hi + 1):
        total += cylinder_length(word + (a,))
    ratio = total / cylinder_length(word)
    gap = F(1, a_lo) - F(1, a_hi + 1)
    assert F(1, 3) * gap <= ratio <= 2 * gap


@given(words, st.integers(min_value=1, max_value=20), st.integers(min_value=0, max_value=20))
def test_hull_contains_children(word, a_min, extra):
    a_max = a_min + extra
    lo, hi = word_interval_hull(word, a_min, a_max)
    for a in (a_min, a_max):
        clo, chi = cylinder_interval(word + (a,))
        assert lo <= clo <= chi <= hi
