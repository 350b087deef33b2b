"""Exact scalar arithmetic: rationals, quadratic surds, certified bounds."""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence, Union

Rat = Union[int, Fraction]


def frac(num, den=1) -> Fraction:
    return Fraction(num, den)


def parse_frac(text: str) -> Fraction:
    """Parse 'num/den' or a plain integer/decimal string."""
    text = text.strip()
    if "/" in text:
        num, den = text.split("/")
        return Fraction(int(num), int(den))
    return Fraction(text)


def format_frac(x: Rat) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def is_perfect_square(n: int) -> bool:
    if n < 0:
        return False
    r = math.isqrt(n)
    return r * r == n


def pow_cmp(a: int, q: int, num: int, den: int) -> int:
    """Sign of a - q**(num/den) for positive integers, exactly."""
    if a <= 0 or q <= 0 or den <= 0:
        raise ValueError("positive arguments required")
    left = a**den
    right = q**num
    return (left > right) - (left < right)


def extract_square(n: int, trial_limit: int = 10_000) -> tuple[int, int]:
    """Write n = m*m*d with d squarefree up to trial_limit. Returns (m, d)."""
    if n < 0:
        raise ValueError("nonnegative radicand required")
    if n == 0:
        return 1, 0
    if is_perfect_square(n):
        return math.isqrt(n), 1
    m, d, p = 1, n, 2
    while p * p <= d and p <= trial_limit:
        while d % (p * p) == 0:
            d //= p * p
            m *= p
        p += 1 if p == 2 else 2
    return m, d


def sqrt_fraction(x: Rat) -> tuple[Fraction, int]:
    """Return (c, d) with sqrt(x) = c*sqrt(d), d a nonnegative integer."""
    x = Fraction(x)
    if x < 0:
        raise ValueError("nonnegative radicand required")
    n = x.numerator * x.denominator
    m, d = extract_square(n)
    return Fraction(m, x.denominator), d


# ---------------------------------------------------------------------------
# quadratic surds u + v*sqrt(d)
# ---------------------------------------------------------------------------

def _sqrt_bounds(d: int, bits: int) -> tuple[Fraction, Fraction]:
    # floor and ceiling of sqrt(d) at 2^-bits resolution
    scale = 1 << bits
    lo = math.isqrt(d * scale * scale)
    return Fraction(lo, scale), Fraction(lo + 1, scale)


@dataclass(frozen=True)
class Surd:
    """Exact value u + v*sqrt(d) with u, v rational and d a nonneg integer."""

    u: Fraction
    v: Fraction
    d: int

    @staticmethod
    def make(u: Rat, v: Rat = 0, d: int = 0) -> "Surd":
        u, v = Fraction(u), Fraction(v)
        if d < 0:
            raise ValueError("negative radicand")
        if v == 0 or d == 0:
            return Surd(u, Fraction(0), 0)
        m, d0 = extract_square(d)
        if d0 <= 1:
            return Surd(u + v * m * d0, Fraction(0), 0)
        return Surd(u, v * m, d0)

    def is_rational(self) -> bool:
        return self.v == 0

    def as_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError("irrational surd")
        return self.u

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return Surd(self.u + other, self.v, self.d)
        if isinstance(other, Surd):
            if self.v == 0:
                return Surd(self.u + other.u, other.v, other.d)
            if other.v == 0:
                return Surd(self.u + other.u, self.v, self.d)
            if other.d == self.d:
                return Surd.make(self.u + other.u, self.v + other.v, self.d)
        return NotImplemented

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.u, -self.v, self.d)

    def __sub__(self, other):
        return self + (-other if isinstance(other, Surd) else -Fraction(other))

    def __rsub__(self, other):
        return (-self) + Fraction(other)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return Surd(self.u * other, self.v * other, self.d if other else 0)
        if isinstance(other, Surd):
            if self.d == other.d or self.v == 0 or other.v == 0:
                d = self.d or other.d
                u = self.u * other.u + self.v * other.v * d
                v = self.u * other.v + self.v * other.u
                return Surd.make(u, v, d)
        return NotImplemented

    __rmul__ = __mul__

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return Surd(self.u / other, self.v / other, self.d)
        if isinstance(other, Surd):
            # multiply by the conjugate
            if other.v == 0:
                return self / other.u
            if self.d in (0, other.d):
                conj = Surd(other.u, -other.v, other.d)
                denom = other.u * other.u - other.v * other.v * other.d
                if denom == 0:
                    raise ZeroDivisionError
                num = (self if self.d else Surd(self.u, Fraction(0), other.d)) * conj
                return Surd.make(num.u / denom, num.v / denom, num.d)
        return NotImplemented

    def sign(self) -> int:
        if self.v == 0:
            return (self.u > 0) - (self.u < 0)
        # u vs -v*sqrt(d): compare squares on the correct sides
        if self.v > 0:
            if self.u >= 0:
                return 1
            return (self.v * self.v * self.d > self.u * self.u) - (
                self.v * self.v * self.d < self.u * self.u
            )
        if self.u <= 0:
            return -1
        return (self.u * self.u > self.v * self.v * self.d) - (
            self.u * self.u < self.v * self.v * self.d
        )

    def _cmp(self, other) -> int:
        if isinstance(other, (int, Fraction)):
            return (self - Fraction(other)).sign()
        if isinstance(other, Surd):
            if self.d == other.d or self.v == 0 or other.v == 0:
                return (self - other).sign()
            return _sign_combo(self.u - other.u, self.v, self.d, -other.v, other.d)
        raise TypeError(f"cannot compare Surd with {type(other)!r}")

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Surd)):
            return self._cmp(other) == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.u, self.v, self.d))

    def __float__(self):
        return float(self.u) + float(self.v) * math.sqrt(self.d)

    def __repr__(self):
        if self.v == 0:
            return f"Surd({self.u})"
        return f"Surd({self.u} + {self.v}*sqrt({self.d}))"


def _sign_combo(a: Fraction, b: Fraction, d1: int, c: Fraction, d2: int) -> int:
    """Exact sign of a + b*sqrt(d1) + c*sqrt(d2), d1, d2 squarefree-ish."""
    if b == 0:
        return Surd.make(a, c, d2).sign()
    if c == 0:
        return Surd.make(a, b, d1).sign()
    if is_perfect_square(d1 * d2):
        # sqrt(d2) = (s/d1)*sqrt(d1) with s = isqrt(d1*d2)
        s = math.isqrt(d1 * d2)
        return Surd.make(a, b + c * Fraction(s, d1), d1).sign()
    # rationally independent: value is zero only if a = b = c = 0
    for bits in (32, 64, 128, 256, 512, 1024, 2048, 4096):
        lo1, hi1 = _sqrt_bounds(d1, bits)
        lo2, hi2 = _sqrt_bounds(d2, bits)
        lo = a + (b * lo1 if b > 0 else b * hi1) + (c * lo2 if c > 0 else c * hi2)
        hi = a + (b * hi1 if b > 0 else b * lo1) + (c * hi2 if c > 0 else c * lo2)
        if lo > 0:
            return 1
        if hi < 0:
            return -1
    raise RuntimeError("sign refinement did not converge")


@dataclass(frozen=True)
class SqrtSurd:
    """Exact nonnegative value sqrt(u + v*sqrt(d)); the surd must be >= 0."""

    sq: Surd

    @staticmethod
    def of_square(x) -> "SqrtSurd":
        if isinstance(x, (int, Fraction)):
            x = Surd.make(x)
        if x.sign() < 0:
            raise ValueError("negative square")
        return SqrtSurd(x)

    @staticmethod
    def of_rational(x: Rat) -> "SqrtSurd":
        x = Fraction(x)
        if x < 0:
            raise ValueError("negative value")
        return SqrtSurd(Surd.make(x * x))

    def square(self) -> Surd:
        return self.sq

    def is_rational(self) -> bool:
        if self.sq.v == 0:
            c, d = sqrt_fraction(self.sq.u)
            return d <= 1
        return False

    def as_fraction(self) -> Fraction:
        c, d = sqrt_fraction(self.sq.as_fraction())
        if d > 1:
            raise ValueError("irrational value")
        return c if d == 1 else Fraction(0)

    def _cmp(self, other) -> int:
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if other < 0:
                return 1
            return self.sq._cmp(other * other)
        if isinstance(other, SqrtSurd):
            return self.sq._cmp(other.sq)
        if isinstance(other, Surd):
            if other.sign() < 0:
                return 1
            return self.sq._cmp(other * other)
        raise TypeError(f"cannot compare SqrtSurd with {type(other)!r}")

    def __lt__(self, other):
        return self._cmp(other) < 0

    def __le__(self, other):
        return self._cmp(other) <= 0

    def __gt__(self, other):
        return self._cmp(other) > 0

    def __ge__(self, other):
        return self._cmp(other) >= 0

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Surd, SqrtSurd)):
            return self._cmp(other) == 0
        return NotImplemented

    def __hash__(self):
        return hash(("SqrtSurd", self.sq))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            other = Fraction(other)
            if other < 0:
                raise ValueError("nonnegative scaling only")
            return SqrtSurd(self.sq * (other * other))
        return NotImplemented

    __rmul__ = __mul__

    def __float__(self):
        val = float(self.sq)
        if val >= 0:
            return math.sqrt(val)
        return 0.0

    def log(self) -> float:
        """Natural log, robust for huge rational parts."""
        s = self.sq
        if s.v == 0:
            return 0.5 * _log_fraction(s.u)
        base = _log_fraction(abs(s.u)) if s.u else None
        fl = float(s)
        if fl > 0 and not math.isinf(fl):
            return 0.5 * math.log(fl)
        if base is None:
            return 0.5 * (_log_fraction(abs(s.v)) + 0.5 * math.log(s.d))
        # u dominates when the float overflows
        return 0.5 * base

    def __repr__(self):
        return f"SqrtSurd({self.sq!r})"


def log_fraction(x: Rat) -> float:
    """Natural log of a positive rational, safe for huge numerators."""
    return _log_fraction(Fraction(x))


def _log_fraction(x: Fraction) -> float:
    if x <= 0:
        raise ValueError("positive value required")
    num, den = x.numerator, x.denominator
    shift = num.bit_length() - den.bit_length()
    scaled = Fraction(num, den * (1 << shift) if shift >= 0 else den) * (
        1 if shift >= 0 else (1 << -shift)
    )
    return shift * math.log(2) + math.log(float(scaled))


# ---------------------------------------------------------------------------
# certified bounds for rational functions on an interval
# ---------------------------------------------------------------------------

def poly_eval(coeffs: Sequence[Rat], x: Rat) -> Fraction:
    acc = Fraction(0)
    for c in reversed(list(coeffs)):
        acc = acc * x + c
    return acc


def _poly_interval(coeffs: Sequence[Fraction], lo: Fraction, hi: Fraction):
    acc_lo = acc_hi = Fraction(0)
    for c in reversed(list(coeffs)):
        cands = (acc_lo * lo, acc_lo * hi, acc_hi * lo, acc_hi * hi)
        acc_lo, acc_hi = min(cands) + c, max(cands) + c
    return acc_lo, acc_hi


def ratfun_min_lower_bound(
    pnum: Sequence[Rat],
    pden: Sequence[Rat],
    lo: Rat,
    hi: Rat,
    depth: int = 14,
) -> Fraction:
    """Certified lower bound of pnum(x)/pden(x) on [lo, hi], pden > 0 there.

    Bisects adaptively; the returned bound never exceeds the true minimum.
    """
    pnum = [Fraction(c) for c in pnum]
    pden = [Fraction(c) for c in pden]
    lo, hi = Fraction(lo), Fraction(hi)

    def bound(a: Fraction, b: Fraction, d: int) -> Fraction:
        nlo, nhi = _poly_interval(pnum, a, b)
        dlo, dhi = _poly_interval(pden, a, b)
        if dlo <= 0:
            if d == 0:
                raise ValueError("denominator bound not positive; increase depth")
            m = (a + b) / 2
            return min(bound(a, m, d - 1), bound(m, b, d - 1))
        cand = nlo / dhi if nlo >= 0 else nlo / dlo
        if d == 0:
            return cand
        # refine only when the enclosure is still wide
        top = nhi / dlo if nhi >= 0 else nhi / dhi
        if top - cand <= abs(top) / 64:
            return cand
        m = (a + b) / 2
        return min(bound(a, m, d - 1), bound(m, b, d - 1))

    return bound(lo, hi, depth)


def min_over_integers(f, lo: int, hi: int, probes: Iterable[int] = ()) -> Fraction:
    """Exact min of f over a small integer range (enumerated)."""
    best = None
    for a in range(lo, hi + 1):
        val = f(a)
        if best is None or val < best:
            best = val
    for a in probes:
        if lo <= a <= hi:
            val = f(a)
            if best is None or val < best:
                best = val
    if best is None:
        raise ValueError("empty range")
    return best
