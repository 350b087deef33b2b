"""Continued fractions, convergents, cylinder intervals, SL(2,Z) words.

Conventions. A word (a_1, ..., a_n) of positive integers encodes the
continued fraction [0; a_1, a_2, ...] of a slope in (0, 1].  Convergents
follow p_k = a_k p_{k-1} + p_{k-2}, q_k = a_k q_{k-1} + q_{k-2} seeded by
(p_-1, q_-1) = (1, 0) and (p_0, q_0) = (0, 1).  The matrix of a word is the
alternating product V^{a_1} T^{a_2} V^{a_3} ... with T = [[1,1],[0,1]] and
V = [[1,0],[1,1]]; its columns carry the last two convergents.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

Word = tuple[int, ...]


def as_word(entries: Sequence[int]) -> Word:
    word = tuple(int(a) for a in entries)
    if any(a < 1 for a in word):
        raise ValueError("continued fraction entries must be positive")
    return word


@dataclass(frozen=True)
class Mat2:
    """Integer 2x2 matrix, row-major (a, b; c, d)."""

    a: int
    b: int
    c: int
    d: int

    def det(self) -> int:
        return self.a * self.d - self.b * self.c

    def __mul__(self, other: "Mat2") -> "Mat2":
        return Mat2(
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inv(self) -> "Mat2":
        det = self.det()
        if det not in (1, -1):
            raise ValueError("not unimodular")
        return Mat2(self.d * det, -self.b * det, -self.c * det, self.a * det)

    def row_major(self) -> tuple[int, int, int, int]:
        return (self.a, self.b, self.c, self.d)

    def transpose(self) -> "Mat2":
        return Mat2(self.a, self.c, self.b, self.d)

    def __pow__(self, n: int) -> "Mat2":
        if n < 0:
            return self.inv() ** (-n)
        out, base = MAT_ID, self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def apply(self, v: tuple) -> tuple:
        return (self.a * v[0] + self.b * v[1], self.c * v[0] + self.d * v[1])


MAT_ID = Mat2(1, 0, 0, 1)
MAT_T = Mat2(1, 1, 0, 1)
MAT_V = Mat2(1, 0, 1, 1)


@dataclass(frozen=True)
class RationalSlope:
    """A rational slope with the word that produced it.

    `depth` counts the digits of `word` actually pinned by the caller; the
    remaining digits are proxy padding.
    """

    value: Fraction
    word: Word
    depth: int

    def __post_init__(self):
        if not 0 < self.value <= 1:
            raise ValueError("slope must lie in (0, 1]")


def convergents(word: Sequence[int]) -> list[tuple[int, int]]:
    """(p_k, q_k) for k = 1..len(word)."""
    word = as_word(word)
    out = []
    p0, q0, p1, q1 = 1, 0, 0, 1  # (p_-1, q_-1), (p_0, q_0)
    for a in word:
        p0, q0, p1, q1 = p1, q1, a * p1 + p0, a * q1 + q0
        out.append((p1, q1))
    return out


def slope_from_word(word: Sequence[int]) -> Fraction:
    p, q = convergents(word)[-1]
    return Fraction(p, q)


def word_matrix(word: Sequence[int]) -> Mat2:
    word = as_word(word)
    out = MAT_ID
    for i, a in enumerate(word):
        gen = MAT_V if i % 2 == 0 else MAT_T
        out = out * gen**a
    return out


def homography(m: Mat2, x: Optional[Fraction]) -> Optional[Fraction]:
    """Moebius action m.x = (a x + b)/(c x + d); None stands for infinity."""
    if x is None:
        if m.c == 0:
            return None
        return Fraction(m.a, m.c)
    num = m.a * x + m.b
    den = m.c * x + m.d
    if den == 0:
        return None
    return Fraction(num) / Fraction(den)


def cylinder_interval(word: Sequence[int]) -> tuple[Fraction, Fraction]:
    """Closed interval of slopes in (0, 1] whose expansion starts with word."""
    word = as_word(word)
    if not word:
        return (Fraction(0), Fraction(1))
    convs = convergents(word)
    p1, q1 = convs[-1]
    p0, q0 = convs[-2] if len(convs) >= 2 else (0, 1)
    end_a = Fraction(p1, q1)
    end_b = Fraction(p1 + p0, q1 + q0)
    return (min(end_a, end_b), max(end_a, end_b))


def cylinder_length(word: Sequence[int]) -> Fraction:
    lo, hi = cylinder_interval(word)
    return hi - lo


def word_interval_hull(
    word: Sequence[int], a_min: int, a_max: int
) -> tuple[Fraction, Fraction]:
    """Hull of the cylinders word + (a,) over a_min <= a <= a_max."""
    if not 1 <= a_min <= a_max:
        raise ValueError("bad entry range")
    word = as_word(word)
    m = word_matrix(word)
    # even prefixes act on the tail x, odd ones on 1/x
    if len(word) % 2 == 0:
        xs = (Fraction(1, a_max + 1), Fraction(1, a_min))
    else:
        xs = (Fraction(a_min), Fraction(a_max + 1))
    imgs = [homography(m, x) for x in xs]
    return (min(imgs), max(imgs))


def gauss_map(alpha: Fraction) -> Fraction:
    if not 0 < alpha <= 1:
        raise ValueError("slope must lie in (0, 1]")
    inv = 1 / alpha
    return inv - int(inv) if inv != int(inv) else Fraction(0)


def gauss_orbit(alpha: Fraction, max_steps: int = 64) -> list[Fraction]:
    """Iterates alpha, G(alpha), ... stopping at 0 or after max_steps."""
    out = [alpha]
    cur = alpha
    for _ in range(max_steps):
        if cur == 0:
            break
        cur = gauss_map(cur)
        out.append(cur)
    return out


def continued_fraction_digits(alpha: Fraction, max_len: int = 64) -> Word:
    """Digits of a rational slope in (0, 1], by the Euclidean algorithm."""
    if not 0 < alpha <= 1:
        raise ValueError("slope must lie in (0, 1]")
    digits = []
    cur = alpha
    for _ in range(max_len):
        if cur == 0:
            break
        inv = 1 / cur
        a = int(inv)
        digits.append(a)
        cur = inv - a
    if cur != 0 and len(digits) >= max_len:
        raise ValueError("expansion longer than max_len")
    return tuple(digits)


def proxy_slope(word: Sequence[int], pad: int, tail_entry: int = 1) -> RationalSlope:
    """Deep rational stand-in for a slope whose expansion starts with word."""
    word = as_word(word)
    full = word + (tail_entry,) * pad
    return RationalSlope(slope_from_word(full), full, len(word))


def gauss_tail(alpha: Fraction, n: int) -> Fraction:
    cur = alpha
    for _ in range(n):
        cur = gauss_map(cur)
    return cur


def diophantine_type_estimate(word: Sequence[int]) -> float:
    """max over n >= 2 of 1 + log(a_n)/log(q_{n-1}), the finite-depth type."""
    word = as_word(word)
    convs = convergents(word)
    best = 1.0
    for n in range(2, len(word) + 1):
        q_prev = convs[n - 2][1]
        if q_prev <= 1:
            continue
        best = max(best, 1.0 + math.log(word[n - 1]) / math.log(q_prev))
    return best
