"""Cantor families of slopes with a prescribed approximation type.

Builds continued-fraction words whose slopes return to distinguished
vertices of an origami orbit (a one-cylinder vertex and a splitting-pair
vertex) at controlled depths, with giant entries sized by a type exponent
``eta`` and an interpolation exponent ``s``.  Finite truncations of the
family come with exact interval levels and a mass-distribution check that
certifies a Hausdorff-dimension lower bound at finite depth.

All membership predicates on entry ranges are integer-exact: bounds of the
form q**e are compared through k-th powers and integer k-th roots, never
through floats.  Irrational exponents are handled by directed rational
brackets, which shrinks the admissible range slightly (never extends it).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

from .cfrac import convergents, word_interval_hull
from .exact import format_frac, log_fraction
from .surface import (
    Origami,
    act_T,
    act_V,
    apply_gword,
    connect_word,
    cusp_widths,
    find_one_cylinder_vertex,
    find_splitting_vertex,
    is_reduced,
    orbit,
    origami_iso,
    vertical_cylinders,
)

Rational = Union[int, Fraction, str, float]
Interval = tuple[Fraction, Fraction]

__all__ = [
    "CantorParams",
    "LevelWord",
    "LevelFamilies",
    "FalconerReport",
    "OrbitCapabilityError",
    "SlopeScheme",
    "congruence_class",
    "adjust_first_entry",
    "prepare_scheme",
    "build_slope",
    "build_slope_s1",
    "check_level_word",
    "f_eta",
    "growth_report",
    "build_level_families",
    "build_level_families_s1",
    "families_to_json",
    "falconer_check",
]


class OrbitCapabilityError(ValueError):
    """The orbit of the surface lacks a vertex the construction needs."""


def _as_fraction(x: Rational, name: str) -> Fraction:
    if isinstance(x, float):
        # floats are snapped to a nearby small-denominator rational
        return Fraction(x).limit_denominator(1_000_000)
    try:
        return Fraction(x)
    except (TypeError, ValueError) as exc:
        raise ValueError(f"{name} must be rational, got {x!r}") from exc


# ---------------------------------------------------------------------------
# integer-exact powers and entry ranges
# ---------------------------------------------------------------------------

def _iroot(n: int, k: int) -> int:
    """Largest r >= 0 with r**k <= n."""
    if n < 0 or k < 1:
        raise ValueError("nonnegative radicand and positive index required")
    if k == 1 or n < 2:
        return n
    if k == 2:
        return math.isqrt(n)
    from sympy import integer_nthroot

    return integer_nthroot(n, k)[0]


def _power_bracket(base: Fraction, expo: Fraction, out_den: int) -> tuple[Fraction, Fraction]:
    """Rational bracket lo <= base**expo <= hi; lo == hi when the value is rational.

    Inexact values are rounded outward to denominator out_den.
    """
    if base <= 0 or expo < 0:
        raise ValueError("positive base and nonnegative exponent required")
    u, v = expo.numerator, expo.denominator
    power = base**u
    rn = _iroot(power.numerator, v)
    rd = _iroot(power.denominator, v)
    if rn**v == power.numerator and rd**v == power.denominator:
        val = Fraction(rn, rd)
        return (val, val)
    bits = max(out_den.bit_length() + 8, 24)
    scaled = (power.numerator << (bits * v)) // power.denominator
    r = _iroot(scaled, v)
    lo = Fraction(max(r - 1, 0), 1 << bits)
    hi = Fraction(r + 2, 1 << bits)
    lo = Fraction((lo.numerator * out_den) // lo.denominator, out_den)
    hi = Fraction(-((-hi.numerator * out_den) // hi.denominator), out_den)
    return (lo, hi)


def _range_for_exponent(q: int, e_lo: Fraction, e_hi: Fraction, mult: int) -> tuple[int, int]:
    """Certified integer range [a_min, a_max] inside [q**e, mult*q**e - 1].

    a_min >= q**e is guaranteed through e_hi and a_max + 1 <= mult*q**e
    through e_lo, so for a bracket [e_lo, e_hi] around an irrational
    exponent the returned range is a subset of the true one.
    """
    if q < 1 or mult < 1 or e_lo < 0 or e_hi < e_lo:
        raise ValueError("bad entry range parameters")
    u, v = e_hi.numerator, e_hi.denominator
    qu = q**u
    r = _iroot(qu, v)
    a_min = max(r if r**v == qu else r + 1, 1)
    u, v = e_lo.numerator, e_lo.denominator
    a_max = _iroot(mult**v * q**u, v) - 1
    if a_min > a_max:
        raise RuntimeError(
            "certified entry range is empty; the exponent bracket is too coarse"
        )
    return a_min, a_max


def _first_congruent(lo: int, residue: int, modulus: int) -> int:
    return lo + (residue - lo) % modulus


def _progression_count(first: int, last: int, step: int) -> int:
    return 0 if first > last else (last - first) // step + 1


# ---------------------------------------------------------------------------
# parameters and words
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CantorParams:
    """Exponent pair steering the giant entries of the construction.

    eta is the approximation type every slope of the family will have; the
    odd giant entries grow like q**(eta-1).  s in [1, 2] interpolates the
    even giant entries between bounded (s=1) and as large as the odd ones
    (s=2) through the derived exponent nu = eta**(s-1).
    """

    eta: Fraction
    s: Fraction

    def __init__(self, eta: Rational, s: Rational):
        object.__setattr__(self, "eta", _as_fraction(eta, "eta"))
        object.__setattr__(self, "s", _as_fraction(s, "s"))
        if self.eta < 1:
            raise ValueError("eta must be at least 1")
        if not 1 <= self.s <= 2:
            raise ValueError("s must lie in [1, 2]")

    def eta_exponent(self) -> Fraction:
        """Exact exponent eta - 1 for the odd giant entries."""
        return self.eta - 1

    def nu_bracket(self, precision_bits: int = 16) -> tuple[Fraction, Fraction]:
        """Bracket of nu = eta**(s-1), exact when nu is rational."""
        return _power_bracket(self.eta, self.s - 1, 1 << precision_bits)

    def nu_exponent_bracket(self, q: int) -> tuple[Fraction, Fraction]:
        """Bracket of nu - 1 tight enough to size entries relative to q."""
        lo, hi = self.nu_bracket()
        if lo == hi:
            return (lo - 1, hi - 1)
        # precision scales with q so the certified range loses only a few
        # percent of the true one
        bits = max(7, (16 * q.bit_length()).bit_length())
        lo, hi = _power_bracket(self.eta, self.s - 1, 1 << bits)
        return (max(lo - 1, Fraction(0)), max(hi - 1, Fraction(0)))

    def nu_estimate(self) -> float:
        return math.exp(float(self.s - 1) * log_fraction(self.eta))


@dataclass(frozen=True)
class LevelWord:
    """Continued-fraction word with markers for the two return stages.

    onecyl_marks[k] is the half-length p(k) of the prefix that carries the
    one-cylinder vertex back to the base surface; split_marks[k] is the
    half-length n(k) doing the same for the splitting-pair vertex.  The
    variant construction with bounded even giants has no splitting stage
    and leaves split_marks empty.
    """

    entries: tuple[int, ...]
    onecyl_marks: tuple[int, ...]
    split_marks: tuple[int, ...] = ()

    def __post_init__(self):
        if not all(isinstance(a, int) and a >= 1 for a in self.entries):
            raise ValueError("entries must be positive integers")
        if self.split_marks:
            if len(self.split_marks) != len(self.onecyl_marks):
                raise ValueError("marker lists must pair up")
            prev = 0
            for p, n in zip(self.onecyl_marks, self.split_marks):
                if not prev < p < n:
                    raise ValueError("markers must interlace strictly")
                prev = n
            deepest = self.split_marks[-1]
        else:
            if any(b <= a for a, b in zip(self.onecyl_marks, self.onecyl_marks[1:])):
                raise ValueError("markers must increase strictly")
            deepest = self.onecyl_marks[-1] if self.onecyl_marks else 0
        if 2 * deepest > len(self.entries):
            raise ValueError("markers exceed the word length")

    def depth(self) -> int:
        return len(self.onecyl_marks)


def congruence_class(width: int, twist: int, circumference: int) -> int:
    """Residue m with width*a = twist (mod circumference) iff a = m."""
    if circumference < 1:
        raise ValueError("circumference must be positive")
    if math.gcd(width, circumference) != 1:
        raise ValueError("width and circumference must be coprime")
    return (pow(width, -1, circumference) * twist) % circumference


def adjust_first_entry(
    word: Sequence[int], src: Origami, dst: Origami, circumference: int
) -> tuple[int, ...]:
    """Raise the first entry of word into [circumference, circumference + 2N].

    Requires that the word carries src to dst; the first entry sits in a
    slot whose generator fixes dst when raised to its vertical cusp width
    v, so adding multiples of v preserves the action.
    """
    word = tuple(word)
    if not word:
        raise ValueError("word must be nonempty")
    v = cusp_widths(dst)[1]
    k, r = divmod(word[0], v)
    l = circumference // v
    adjusted = ((l + max(1, k)) * v + r,) + word[1:]
    if not origami_iso(apply_gword(adjusted, src), dst):
        raise ValueError("word does not carry src to dst")
    return adjusted


# ---------------------------------------------------------------------------
# orbit scheme
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SlopeScheme:
    """The orbit data consumed by the slope builders.

    split_vertex carries a vertical splitting pair (width, twist and core
    circumference of its distinguished cylinder); onecyl_vertex is a single
    vertical cylinder whose core circumference bounds the adjusted block
    entries.  return_block is the fixed connector word carrying the
    splitting vertex to the one-cylinder vertex, first entry already
    adjusted into the required window.
    """

    base: Origami
    orbit_size: int
    split_vertex: Origami
    onecyl_vertex: Origami
    split_width: int
    split_twist: int
    split_circumference: int
    onecyl_circumference: int
    giant_residue: int
    return_block: tuple[int, ...]


def prepare_scheme(x: Origami) -> SlopeScheme:
    """Locate the two distinguished orbit vertices and their constants."""
    if not is_reduced(x):
        raise ValueError("surface must be reduced (primitive period lattice)")
    found = find_splitting_vertex(x)
    if found is None:
        raise OrbitCapabilityError(
            "orbit has no vertex with a vertical splitting pair"
        )
    split_vertex, pair = found
    onecyl = find_one_cylinder_vertex(x)
    if onecyl is None:
        raise OrbitCapabilityError(
            "orbit has no vertex with a one-cylinder vertical direction"
        )
    n_orbit = orbit(x).size()
    cyl = vertical_cylinders(onecyl)[0]
    if cyl.width != 1:
        raise OrbitCapabilityError(
            "one-cylinder vertex is not reduced to width one"
        )
    sigma_star = cyl.circumference
    block = adjust_first_entry(
        connect_word(split_vertex, onecyl), split_vertex, onecyl, sigma_star
    )
    if not sigma_star <= block[0] <= sigma_star + 2 * n_orbit:
        raise RuntimeError("adjusted block entry escaped its window")
    return SlopeScheme(
        base=x,
        orbit_size=n_orbit,
        split_vertex=split_vertex,
        onecyl_vertex=onecyl,
        split_width=pair.width,
        split_twist=pair.delta0,
        split_circumference=pair.circumference,
        onecyl_circumference=sigma_star,
        giant_residue=congruence_class(pair.width, pair.delta0, pair.circumference),
        return_block=block,
    )


def _inverse_pair_image(a: int, b: int, target: Origami) -> Origami:
    # image of target under the inverse of the two-entry word (a, b)
    return act_T(act_V(target, -a), -b)


def _checked_connector(scheme: SlopeScheme, goal: Origami) -> tuple[int, ...]:
    word = connect_word(scheme.onecyl_vertex, goal)
    n = scheme.orbit_size
    if not 2 <= len(word) <= 2 * n - 2 or any(a > n for a in word):
        raise RuntimeError("connector block violates its length or entry caps")
    return word


def _require_iso(word: Sequence[int], start: Origami, goal: Origami, stage: str) -> None:
    if not origami_iso(apply_gword(word, start), goal):
        raise RuntimeError(f"word prefix fails to return at the {stage} stage")


# ---------------------------------------------------------------------------
# slope builders
# ---------------------------------------------------------------------------

def build_slope(
    x: Origami,
    params: CantorParams,
    depth: int,
    *,
    scheme: Optional[SlopeScheme] = None,
) -> LevelWord:
    """One branch of the two-stage construction, depth giant pairs deep.

    Each round returns to the one-cylinder vertex, then to the splitting
    vertex, and appends two giant entries: the odd one sized by eta - 1 in
    the admissible congruence class, the even one sized by nu - 1.  Both
    are chosen minimal in their certified range.
    """
    if params.eta <= 1 or params.s <= 1:
        raise ValueError("build_slope needs eta > 1 and s > 1; use build_slope_s1 at s = 1")
    if depth < 1:
        raise ValueError("depth must be positive")
    if scheme is None:
        scheme = prepare_scheme(x)
    e_eta = params.eta_exponent()
    sigma0 = scheme.split_circumference
    entries: list[int] = [1, 1]
    entries += _checked_connector(scheme, _inverse_pair_image(1, 1, x))
    onecyl_marks = [len(entries) // 2]
    _require_iso(entries, scheme.onecyl_vertex, x, "one-cylinder")
    entries += scheme.return_block
    split_marks = [len(entries) // 2]
    _require_iso(entries, scheme.split_vertex, x, "splitting")
    for k in range(1, depth + 1):
        q = convergents(entries)[-1][1]
        a_min, a_max = _range_for_exponent(q, e_eta, e_eta, sigma0 + 1)
        a = _first_congruent(a_min, scheme.giant_residue, sigma0)
        if a > a_max:
            raise RuntimeError("no admissible residue inside the giant range")
        entries.append(a)
        q1 = convergents(entries)[-1][1]
        e_lo, e_hi = params.nu_exponent_bracket(q1)
        b, _ = _range_for_exponent(q1, e_lo, e_hi, 2)
        entries.append(b)
        if k < depth:
            goal = _inverse_pair_image(a, b, scheme.split_vertex)
            entries += _checked_connector(scheme, goal)
            onecyl_marks.append(len(entries) // 2)
            _require_iso(entries, scheme.onecyl_vertex, x, "one-cylinder")
            entries += scheme.return_block
            split_marks.append(len(entries) // 2)
            _require_iso(entries, scheme.split_vertex, x, "splitting")
    word = LevelWord(tuple(entries), tuple(onecyl_marks), tuple(split_marks))
    check_level_word(scheme, params, word)
    return word


def build_slope_s1(
    x: Origami,
    eta: Rational,
    depth: int,
    *,
    onecyl: Optional[Origami] = None,
) -> LevelWord:
    """Variant with bounded even giants: every odd giant is followed by 1.

    Only needs the one-cylinder vertex.  The giant entries are sized by
    eta - 1 without a congruence constraint; eta = 1 degenerates to a word
    with all entries bounded by the orbit data.
    """
    eta = _as_fraction(eta, "eta")
    if eta < 1:
        raise ValueError("eta must be at least 1")
    if depth < 1:
        raise ValueError("depth must be positive")
    if onecyl is None:
        onecyl = find_one_cylinder_vertex(x)
        if onecyl is None:
            raise OrbitCapabilityError(
                "orbit has no vertex with a one-cylinder vertical direction"
            )
    n_orbit = orbit(x).size()
    e_eta = eta - 1

    def connector(goal: Origami) -> tuple[int, ...]:
        word = connect_word(onecyl, goal)
        if not 2 <= len(word) <= 2 * n_orbit - 2 or any(a > n_orbit for a in word):
            raise RuntimeError("connector block violates its length or entry caps")
        return word

    entries: list[int] = [1, 1]
    entries += connector(_inverse_pair_image(1, 1, x))
    marks = [len(entries) // 2]
    _require_iso(entries, onecyl, x, "one-cylinder")
    for _ in range(1, depth):
        q = convergents(entries)[-1][1]
        a, _ = _range_for_exponent(q, e_eta, e_eta, 2)
        entries += (a, 1)
        entries += connector(_inverse_pair_image(a, 1, onecyl))
        marks.append(len(entries) // 2)
        _require_iso(entries, onecyl, x, "one-cylinder")
    return LevelWord(tuple(entries), tuple(marks))


def check_level_word(scheme: SlopeScheme, params: CantorParams, word: LevelWord) -> int:
    """Re-verify every displayed condition on a finished word.

    Returns the number of giant pairs checked; raises ValueError on the
    first violated condition.
    """
    if not word.split_marks:
        raise ValueError("word has no splitting-stage markers")
    entries = word.entries
    convs = convergents(entries)
    e_eta = params.eta_exponent()
    sigma0 = scheme.split_circumference
    sigma_star = scheme.onecyl_circumference
    n_orbit = scheme.orbit_size
    prev_n = 0
    for p, n in zip(word.onecyl_marks, word.split_marks):
        block = entries[2 * prev_n + 2 : 2 * p]
        if not 2 <= len(block) <= 2 * n_orbit - 2 or any(a > n_orbit for a in block):
            raise ValueError("connector block out of bounds")
        _require_iso(entries[: 2 * p], scheme.onecyl_vertex, scheme.base, "one-cylinder")
        first = entries[2 * p]
        if not sigma_star <= first <= sigma_star + 2 * n_orbit:
            raise ValueError("adjusted entry outside its window")
        tail = entries[2 * p + 1 : 2 * n]
        if len(entries[2 * p : 2 * n]) < 2 or any(a > n_orbit for a in tail):
            raise ValueError("return block out of bounds")
        _require_iso(entries[: 2 * n], scheme.split_vertex, scheme.base, "splitting")
        if 2 * n >= len(entries):
            raise ValueError("word ends before its giant entries")
        a, b = entries[2 * n], entries[2 * n + 1]
        q = convs[2 * n - 1][1]
        a_min, a_max = _range_for_exponent(q, e_eta, e_eta, sigma0 + 1)
        if not a_min <= a <= a_max:
            raise ValueError("odd giant entry outside its range")
        if (scheme.split_width * a - scheme.split_twist) % sigma0:
            raise ValueError("odd giant entry violates the congruence")
        q1 = convs[2 * n][1]
        e_lo, e_hi = params.nu_exponent_bracket(q1)
        b_min, b_max = _range_for_exponent(q1, e_lo, e_hi, 2)
        if not b_min <= b <= b_max:
            raise ValueError("even giant entry outside its range")
        prev_n = n
    return len(word.split_marks)


# ---------------------------------------------------------------------------
# dimension floor
# ---------------------------------------------------------------------------

def f_eta(eta: Rational, s: Rational) -> Union[Fraction, float]:
    """Dimension lower bound: 1/(eta+1) at s = 1, else (nu-1)/(eta*nu-1).

    Returns an exact Fraction whenever nu = eta**(s-1) is rational, a float
    otherwise.
    """
    eta = _as_fraction(eta, "eta")
    s = _as_fraction(s, "s")
    if not 1 <= s <= 2:
        raise ValueError("s must lie in [1, 2]")
    if s == 1:
        if eta < 1:
            raise ValueError("eta must be at least 1")
        return Fraction(1, 1) / (eta + 1)
    if eta <= 1:
        raise ValueError("eta must exceed 1 for s > 1")
    lo, hi = _power_bracket(eta, s - 1, 1 << 16)
    if lo == hi:
        return (lo - 1) / (eta * lo - 1)
    nu = math.exp(float(s - 1) * log_fraction(eta))
    return (nu - 1.0) / (float(eta) * nu - 1.0)


# ---------------------------------------------------------------------------
# growth of denominators
# ---------------------------------------------------------------------------

def growth_report(scheme: SlopeScheme, params: CantorParams, word: LevelWord) -> dict:
    """Observed growth ratios next to the formula constants that bound them.

    The minimal constants are unknown; the report pairs each formula value
    with the worst ratio realized by the word so the slack is visible.
    """
    n = scheme.orbit_size
    sigma0 = scheme.split_circumference
    sigma_star = scheme.onecyl_circumference
    nu = params.nu_estimate()
    eta = float(params.eta)
    c1 = 2.0 * (n + 1) ** (2 * n - 2)
    c2 = (2 * n + sigma_star + 1) * (n + 1) ** (2 * n - 3)
    c3 = c1 * c2 ** (nu * eta) * (sigma0 + 1) ** nu
    convs = convergents(word.entries)
    logq = [log_fraction(q) for _, q in convs]

    def lq(half: int) -> float:
        return logq[2 * half - 1]

    connector_ratios = []
    growth_ratios = []
    marks = list(zip(word.onecyl_marks, word.split_marks))
    for k in range(1, len(marks)):
        p_prev, n_prev = marks[k - 1]
        p_cur = marks[k][0]
        connector_ratios.append(math.exp(lq(p_cur) - nu * logq[2 * n_prev]))
        growth_ratios.append(math.exp(lq(p_cur) - nu * eta * lq(p_prev)))
    return {
        "c1_formula": c1,
        "c2_formula": c2,
        "c3_formula": c3,
        "growth_bound_formula": c1 * c3,
        "connector_ratio_max": max(connector_ratios, default=float("nan")),
        "connector_ratio_min": min(connector_ratios, default=float("nan")),
        "growth_ratio_max": max(growth_ratios, default=float("nan")),
    }


# ---------------------------------------------------------------------------
# interval levels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class LevelFamilies:
    """Nested interval levels with the true child count of each interval.

    levels[i] lists disjoint closed intervals; child_counts[i][j] is the
    full number of admissible next-level intervals inside levels[i][j],
    which can exceed the materialized number when siblings were sampled.
    """

    levels: tuple[tuple[Interval, ...], ...]
    child_counts: tuple[tuple[int, ...], ...]


def _sample_progression(first: int, last: int, step: int, cap: int) -> list[int]:
    # head and tail runs, always keeping both extremes
    count = _progression_count(first, last, step)
    if count <= cap:
        return [first + i * step for i in range(count)]
    head = (cap + 1) // 2
    tail = cap - head
    out = [first + i * step for i in range(head)]
    out += [last - (tail - 1 - j) * step for j in range(tail)]
    return out


def _cap_nodes(nodes: list, cap: int) -> list:
    if len(nodes) <= cap:
        return nodes
    head = (cap + 1) // 2
    tail = cap - head
    return nodes[:head] + nodes[len(nodes) - tail :]


def build_level_families(
    x: Origami,
    params: CantorParams,
    depth: int,
    *,
    scheme: Optional[SlopeScheme] = None,
    sibling_cap: int = 12,
    level_cap: int = 72,
) -> LevelFamilies:
    """Interval levels of the two-stage family, one connector branch.

    Odd levels hold one interval per word returning to the splitting
    vertex (hull over its admissible odd giants); even levels append one
    odd giant and take the hull over the even giants.  At most sibling_cap
    children per interval and level_cap intervals per level are
    materialized (head and tail of each range, extremes always kept); the
    recorded child counts are the true ones.
    """
    if scheme is None:
        scheme = prepare_scheme(x)
    base_word = build_slope(x, params, 1, scheme=scheme)
    stem = list(base_word.entries[: 2 * base_word.split_marks[0]])
    e_eta = params.eta_exponent()
    sigma0 = scheme.split_circumference
    m0 = scheme.giant_residue

    def odd_data(word: list[int]) -> tuple[int, int, int]:
        # admissible odd-giant progression of a splitting-stage word
        q = convergents(word)[-1][1]
        a_min, a_max = _range_for_exponent(q, e_eta, e_eta, sigma0 + 1)
        first = _first_congruent(a_min, m0, sigma0)
        last = a_max - (a_max - first) % sigma0
        if first > a_max:
            raise RuntimeError("no admissible residue inside the giant range")
        return first, last, sigma0

    def even_data(word: list[int]) -> tuple[int, int, int]:
        q = convergents(word)[-1][1]
        e_lo, e_hi = params.nu_exponent_bracket(q)
        b_min, b_max = _range_for_exponent(q, e_lo, e_hi, 2)
        return b_min, b_max, 1

    levels: list[tuple[Interval, ...]] = []
    counts: list[tuple[int, ...]] = []
    nodes = [stem]
    for level in range(1, 2 * depth + 1):
        ranges = [(odd_data if level % 2 else even_data)(w) for w in nodes]
        levels.append(
            tuple(word_interval_hull(w, first, last) for w, (first, last, _) in zip(nodes, ranges))
        )
        if level == 2 * depth:
            break
        counts.append(tuple(_progression_count(f, l, s) for f, l, s in ranges))
        children: list[list[int]] = []
        for w, (first, last, step) in zip(nodes, ranges):
            for a in _sample_progression(first, last, step, sibling_cap):
                children.append(w + [a])
        children = _cap_nodes(children, level_cap)
        if level % 2 == 0:
            # even-level children continue through a connector and the
            # return block before their next giants
            extended = []
            for w in children:
                a, b = w[-2], w[-1]
                goal = _inverse_pair_image(a, b, scheme.split_vertex)
                conn = _checked_connector(scheme, goal)
                extended.append(w + list(conn) + list(scheme.return_block))
            children = extended
        nodes = children
    return LevelFamilies(tuple(levels), tuple(counts))


def build_level_families_s1(
    x: Origami,
    eta: Rational,
    depth: int,
    *,
    sibling_cap: int = 12,
    level_cap: int = 72,
) -> LevelFamilies:
    """Interval levels of the bounded-even-giant family, one branch each."""
    eta = _as_fraction(eta, "eta")
    onecyl = find_one_cylinder_vertex(x)
    if onecyl is None:
        raise OrbitCapabilityError(
            "orbit has no vertex with a one-cylinder vertical direction"
        )
    base = build_slope_s1(x, eta, 1, onecyl=onecyl)
    e_eta = eta - 1
    n_orbit = orbit(x).size()

    def grange(word: list[int]) -> tuple[int, int]:
        q = convergents(word)[-1][1]
        return _range_for_exponent(q, e_eta, e_eta, 2)

    levels: list[tuple[Interval, ...]] = []
    counts: list[tuple[int, ...]] = []
    nodes = [list(base.entries)]
    for level in range(1, depth + 1):
        ranges = [grange(w) for w in nodes]
        levels.append(
            tuple(word_interval_hull(w, f, l) for w, (f, l) in zip(nodes, ranges))
        )
        if level == depth:
            break
        counts.append(tuple(l - f + 1 for f, l in ranges))
        children: list[list[int]] = []
        for w, (first, last) in zip(nodes, ranges):
            for a in _sample_progression(first, last, 1, sibling_cap):
                goal = _inverse_pair_image(a, 1, onecyl)
                conn = connect_word(onecyl, goal)
                if any(c > n_orbit for c in conn):
                    raise RuntimeError("connector block violates its entry cap")
                children.append(w + [a, 1] + list(conn))
        nodes = _cap_nodes(children, level_cap)
    return LevelFamilies(tuple(levels), tuple(counts))


def families_to_json(fam: LevelFamilies) -> str:
    import json

    return json.dumps(
        {
            "levels": [
                [[format_frac(lo), format_frac(hi)] for lo, hi in level]
                for level in fam.levels
            ],
            "child_counts": [list(row) for row in fam.child_counts],
        }
    )


# ---------------------------------------------------------------------------
# mass-distribution check
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FalconerReport:
    """Outcome of the finite-depth mass-distribution check.

    spacing_ok: every parent's children are separated by at least
    c * |parent| / m.  size_ok: |child|**delta >= |parent|**delta / m for
    every child, with m the (supplied or materialized) child count.
    delta_sup is the largest exponent that would pass the size condition;
    c_sup is the largest spacing constant that would pass the other one.
    """

    delta: Fraction
    c: Fraction
    levels: int
    spacing_ok: bool
    size_ok: bool
    delta_sup: float
    c_sup: float
    parents_checked: int
    children_checked: int

    @property
    def passed(self) -> bool:
        return self.spacing_ok and self.size_ok


def falconer_check(
    levels: Sequence[Sequence[tuple[Rational, Rational]]],
    delta: Rational,
    c: Rational = Fraction(1, 10**12),
    *,
    counts: Optional[Sequence[Sequence[int]]] = None,
) -> FalconerReport:
    """Check the two mass-distribution inequalities on nested levels.

    Verdicts at the requested rational delta and c are exact; the reported
    suprema are floats from the per-instance log caps.  counts may supply
    the true child count per interval when the materialized levels sample
    siblings; a supplied count must not undercut the materialized one.
    """
    delta = _as_fraction(delta, "delta")
    c = _as_fraction(c, "c")
    if not 0 <= delta <= 1:
        raise ValueError("delta must lie in [0, 1]")
    clean: list[list[Interval]] = []
    true_counts: list[list[Optional[int]]] = []
    for depth, level in enumerate(levels):
        row = [(Fraction(lo), Fraction(hi)) for lo, hi in level]
        if counts is not None and depth < min(len(counts), len(levels) - 1):
            if len(counts[depth]) != len(row):
                raise ValueError("counts must align with their level")
            order = sorted(range(len(row)), key=lambda i: row[i])
            true_counts.append([counts[depth][i] for i in order])
        else:
            true_counts.append([None] * len(row))
        row.sort()
        if not row:
            raise ValueError("levels must be nonempty")
        for (alo, ahi), (blo, bhi) in zip(row, row[1:]):
            if blo <= ahi:
                raise ValueError(f"intervals overlap within level {depth + 1}")
        if any(lo >= hi for lo, hi in row):
            raise ValueError("intervals must have positive length")
        clean.append(row)
    spacing_ok = True
    size_ok = True
    delta_sup = math.inf
    c_sup = math.inf
    parents = 0
    kids = 0
    du, dv = delta.numerator, delta.denominator
    for k in range(1, len(clean)):
        children_of: dict[int, list[Interval]] = {}
        parent_row = clean[k - 1]
        j = 0
        for child in clean[k]:
            while j < len(parent_row) and parent_row[j][1] < child[1]:
                j += 1
            if j >= len(parent_row) or not (
                parent_row[j][0] <= child[0] and child[1] <= parent_row[j][1]
            ):
                raise ValueError(f"levels are not nested at level {k + 1}")
            children_of.setdefault(j, []).append(child)
        for j, brood in children_of.items():
            plen = parent_row[j][1] - parent_row[j][0]
            m = len(brood)
            supplied = true_counts[k - 1][j]
            if supplied is not None:
                if supplied < len(brood):
                    raise ValueError("supplied count undercuts materialized children")
                m = supplied
            parents += 1
            if len(brood) >= 2:
                eps = min(b[0] - a[1] for a, b in zip(brood, brood[1:]))
                if eps * m < c * plen:
                    spacing_ok = False
                c_sup = min(c_sup, math.exp(log_fraction(eps * m / plen)))
            log_m = math.log(m)
            for lo, hi in brood:
                kids += 1
                ratio = plen / (hi - lo)
                if m**dv < ratio**du:
                    size_ok = False
                log_ratio = log_fraction(ratio)
                if log_ratio > 0:
                    delta_sup = min(delta_sup, log_m / log_ratio)
    return FalconerReport(
        delta=delta,
        c=c,
        levels=len(clean),
        spacing_ok=spacing_ok,
        size_ok=size_ok,
        delta_sup=delta_sup,
        c_sup=c_sup,
        parents_checked=parents,
        children_checked=kids,
    )
