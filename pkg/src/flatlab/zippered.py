"""Interval exchanges, their rectangle suspensions, and induction moves.

A combinatorial datum is a pair of orderings of d letters.  Together with
positive lengths it defines an interval exchange; adding one signed offset
per letter suspends the exchange into a translation surface built from d
rectangular flow boxes, one per letter, whose widths are the lengths and
whose heights are the vertical return times.  The induction move cuts the
shorter of the two rightmost intervals off the longer one; iterating it
shrinks the exchanged interval while the suspension stays isometric.

Letters are integers 0..d-1 throughout; the JSON form spells them A..Z.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from random import Random
from typing import Optional, Union

from .chartsurf import (
    RectSurface,
    Seg,
    close_cone_reps,
    horizontal_connections,
    horizontal_core_lengths,
    reflect_surface,
    run_flow,
    saddle_connections_bounded,
    transpose_surface,
    validate_surface,
)

Rat = Union[int, Fraction]


def _fracs(values) -> tuple[Fraction, ...]:
    return tuple(Fraction(v) for v in values)


# ---------------------------------------------------------------------------
# combinatorial data
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class CombinatorialDatum:
    """Top and bottom orderings of the letters 0..d-1."""

    top: tuple[int, ...]
    bottom: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "top", tuple(self.top))
        object.__setattr__(self, "bottom", tuple(self.bottom))
        d = len(self.top)
        if d < 1 or sorted(self.top) != list(range(d)) or sorted(self.bottom) != list(range(d)):
            raise ValueError("rows must order the same letters 0..d-1")

    @property
    def d(self) -> int:
        return len(self.top)

    @property
    def is_admissible(self) -> bool:
        """No common proper prefix set, so no invariant subinterval splits off."""
        seen_t: set[int] = set()
        seen_b: set[int] = set()
        for k in range(self.d - 1):
            seen_t.add(self.top[k])
            seen_b.add(self.bottom[k])
            if seen_t == seen_b:
                return False
        return True


def apply_move(pi: CombinatorialDatum, kind: str) -> CombinatorialDatum:
    """Row surgery of one induction step of the given type.

    Type 't' keeps the top row and reinserts the bottom-last letter right
    after the top-last one's bottom position; type 'b' is the mirror.
    """
    if kind == "t":
        winner, loser = pi.top[-1], pi.bottom[-1]
        row = list(pi.bottom[:-1])
        row.insert(row.index(winner) + 1, loser)
        return CombinatorialDatum(pi.top, tuple(row))
    if kind == "b":
        winner, loser = pi.bottom[-1], pi.top[-1]
        row = list(pi.top[:-1])
        row.insert(row.index(winner) + 1, loser)
        return CombinatorialDatum(tuple(row), pi.bottom)
    raise ValueError("kind must be 't' or 'b'")


def rauzy_class(pi: CombinatorialDatum) -> frozenset[CombinatorialDatum]:
    """Closure of the datum under both induction moves."""
    if not pi.is_admissible:
        raise ValueError("datum is not admissible")
    seen = {pi}
    stack = [pi]
    while stack:
        cur = stack.pop()
        for kind in ("t", "b"):
            nxt = apply_move(cur, kind)
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
        if len(seen) > 10000:
            raise RuntimeError("class closure exploded")
    return frozenset(seen)


# ---------------------------------------------------------------------------
# interval exchanges
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Iet:
    """An exchange of labeled intervals, exact over the rationals."""

    combinatorial: CombinatorialDatum
    lengths: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "lengths", _fracs(self.lengths))
        if len(self.lengths) != self.combinatorial.d:
            raise ValueError("one length per letter")
        if any(l <= 0 for l in self.lengths):
            raise ValueError("lengths must be positive")

    @property
    def total(self) -> Fraction:
        return sum(self.lengths, Fraction(0))

    def pieces(self) -> list[tuple[Fraction, Fraction, Fraction]]:
        """(start, end, shift) per domain piece, left to right."""
        pi = self.combinatorial
        dom: dict[int, Fraction] = {}
        acc = Fraction(0)
        for l in pi.top:
            dom[l] = acc
            acc += self.lengths[l]
        img: dict[int, Fraction] = {}
        acc = Fraction(0)
        for l in pi.bottom:
            img[l] = acc
            acc += self.lengths[l]
        return [(dom[l], dom[l] + self.lengths[l], img[l] - dom[l]) for l in pi.top]

    def pattern(self) -> tuple[tuple[Fraction, ...], tuple[int, ...]]:
        """Shape up to relabeling: domain lengths plus the image order."""
        pi = self.combinatorial
        tpos = {l: i for i, l in enumerate(pi.top)}
        return (
            tuple(self.lengths[l] for l in pi.top),
            tuple(tpos[l] for l in pi.bottom),
        )


def iet_apply(iet: Iet, x: Rat) -> Fraction:
    x = Fraction(x)
    for a, b, shift in iet.pieces():
        if a <= x < b:
            return x + shift
    raise ValueError("point outside the exchanged interval")


@dataclass(frozen=True)
class FirstReturn:
    """Return map to a window, as its own exchange plus return times."""

    iet: Iet
    steps: tuple[int, ...]
    lo: Fraction
    hi: Fraction


def iet_first_return(
    iet: Iet,
    lo: Rat = 0,
    hi: Optional[Rat] = None,
    *,
    max_steps: int = 100_000,
    merge: bool = True,
) -> FirstReturn:
    """First-return map of `iet` to [lo, hi), by splitting forward images.

    Interval pieces are flowed until they land back inside the window;
    every boundary is exact, so the result is itself an interval exchange.
    Adjacent pieces with equal return counts whose images are also adjacent
    act as one translation and are merged unless merge=False keeps the raw
    splitting (the pieces cut by orbit boundaries alone).  Raises
    RuntimeError once max_steps map applications are spent (the window may
    return arbitrarily slowly when lengths nearly resonate).
    """
    total = iet.total
    lo = Fraction(lo)
    hi = total if hi is None else Fraction(hi)
    if not (0 <= lo < hi <= total):
        raise ValueError("window must be a nonempty subinterval of the domain")
    pieces = iet.pieces()
    work: list[tuple[Fraction, Fraction, Fraction, int]] = [(lo, hi, lo, 0)]
    done: list[tuple[Fraction, Fraction, Fraction, int]] = []
    budget = max_steps
    while work:
        a, b, oa, k = work.pop()
        if k > 0:
            if lo <= a and b <= hi:
                done.append((oa, oa + (b - a), a, k))
                continue
            cut = next((c for c in (lo, hi) if a < c < b), None)
            if cut is not None:
                work.append((a, cut, oa, k))
                work.append((cut, b, oa + (cut - a), k))
                continue
        budget -= 1
        if budget < 0:
            raise RuntimeError("first-return step budget exhausted")
        for pa, pb, shift in pieces:
            s, e = max(a, pa), min(b, pb)
            if s < e:
                work.append((s + shift, e + shift, oa + (s - a), k + 1))
    done.sort()
    merged: list[tuple[Fraction, Fraction, Fraction, int]] = []
    for oa, ob, img, k in done:
        if merge and merged:
            la, lb, li, lk = merged[-1]
            if lb == oa and lk == k and li + (lb - la) == img:
                merged[-1] = (la, ob, li, k)
                continue
        merged.append((oa, ob, img, k))
    pos = lo
    for oa, ob, _, _ in merged:
        if oa != pos:
            raise AssertionError("return pieces do not tile the window")
        pos = ob
    if pos != hi:
        raise AssertionError("return pieces do not tile the window")
    pos = lo
    for ia, ib in sorted((img, img + (ob - oa)) for oa, ob, img, _ in merged):
        if ia != pos:
            raise AssertionError("return images do not tile the window")
        pos = ib
    if pos != hi:
        raise AssertionError("return images do not tile the window")
    order = tuple(sorted(range(len(merged)), key=lambda i: merged[i][2]))
    ret = Iet(
        CombinatorialDatum(tuple(range(len(merged))), order),
        tuple(ob - oa for oa, ob, _, _ in merged),
    )
    return FirstReturn(ret, tuple(k for *_, k in merged), lo, hi)


# ---------------------------------------------------------------------------
# suspensions
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ZipperedData:
    """Suspension datum: lengths and signed offsets indexed by letter.

    Every proper prefix of the offsets must sum positive in top order and
    negative in bottom order; that keeps each flow box a genuine rectangle
    and pins the singular points to the box seams.
    """

    combinatorial: CombinatorialDatum
    lengths: tuple[Fraction, ...]
    offsets: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "lengths", _fracs(self.lengths))
        object.__setattr__(self, "offsets", _fracs(self.offsets))
        pi = self.combinatorial
        if len(self.lengths) != pi.d or len(self.offsets) != pi.d:
            raise ValueError("one length and one offset per letter")
        if any(l <= 0 for l in self.lengths):
            raise ValueError("lengths must be positive")
        if not pi.is_admissible:
            raise ValueError("datum is not admissible")
        acc = Fraction(0)
        for l in pi.top[:-1]:
            acc += self.offsets[l]
            if acc <= 0:
                raise ValueError("top offset prefixes must stay positive")
        acc = Fraction(0)
        for l in pi.bottom[:-1]:
            acc += self.offsets[l]
            if acc >= 0:
                raise ValueError("bottom offset prefixes must stay negative")

    def iet(self) -> Iet:
        return Iet(self.combinatorial, self.lengths)


@dataclass(frozen=True)
class SuspensionGeometry:
    """Corner positions and box heights derived from a suspension datum.

    heights[l] is the vertical return time over letter l's interval;
    top_corners[l] and bottom_corners[l] are the (re, im) positions of the
    singular points at the left ends of its top and bottom intervals.  The
    one corner allowed to stick out past its neighbor's height is named by
    exception_side and exception_letter (present iff net_offset != 0).
    """

    heights: tuple[Fraction, ...]
    top_corners: tuple[tuple[Fraction, Fraction], ...]
    bottom_corners: tuple[tuple[Fraction, Fraction], ...]
    net_offset: Fraction
    exception_side: Optional[str]
    exception_letter: Optional[int]


def heights_and_singularities(data: ZipperedData) -> SuspensionGeometry:
    pi = data.combinatorial
    d = pi.d
    tc: list[Optional[tuple[Fraction, Fraction]]] = [None] * d
    bc: list[Optional[tuple[Fraction, Fraction]]] = [None] * d
    re = im = Fraction(0)
    for l in pi.top:
        tc[l] = (re, im)
        re += data.lengths[l]
        im += data.offsets[l]
    net = im
    re = im = Fraction(0)
    for l in pi.bottom:
        bc[l] = (re, im)
        re += data.lengths[l]
        im += data.offsets[l]
    heights = tuple(tc[l][1] - bc[l][1] for l in range(d))
    if net < 0:
        side: Optional[str] = "bottom"
        letter: Optional[int] = pi.bottom[pi.bottom.index(pi.top[-1]) + 1]
    elif net > 0:
        side = "top"
        letter = pi.top[pi.top.index(pi.bottom[-1]) + 1]
    else:
        side = letter = None
    return SuspensionGeometry(heights, tuple(tc), tuple(bc), net, side, letter)


def suspension_area(data: ZipperedData) -> Fraction:
    geo = heights_and_singularities(data)
    return sum(
        (l * h for l, h in zip(data.lengths, geo.heights)), Fraction(0)
    )


def rauzy_step(datum):
    """One induction step; returns (new datum, type, back-substitution matrix).

    The type is 't' when the top-last interval is strictly longer than the
    bottom-last one and 'b' when strictly shorter; an exact tie raises.
    The matrix B satisfies old_lengths = B @ new_lengths; it is the identity
    plus one unit entry at (winner, loser), so det B = 1 and B >= 0.
    """
    pi = datum.combinatorial
    lt, lb = pi.top[-1], pi.bottom[-1]
    if datum.lengths[lt] == datum.lengths[lb]:
        raise ValueError("the two rightmost intervals tie; the step is undefined")
    kind = "t" if datum.lengths[lt] > datum.lengths[lb] else "b"
    winner, loser = (lt, lb) if kind == "t" else (lb, lt)
    pi2 = apply_move(pi, kind)
    lengths = list(datum.lengths)
    lengths[winner] -= lengths[loser]
    d = pi.d
    mat = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    mat[winner][loser] = 1
    B = tuple(tuple(row) for row in mat)
    if isinstance(datum, ZipperedData):
        offsets = list(datum.offsets)
        offsets[winner] -= offsets[loser]
        return ZipperedData(pi2, tuple(lengths), tuple(offsets)), kind, B
    return Iet(pi2, tuple(lengths)), kind, B


def inverse_rauzy_step(datum: ZipperedData, kind: Optional[str] = None):
    """Undo one induction step; returns (previous datum, type, matrix).

    The suspension coordinates determine which move produced the datum:
    a type-t image has negative net offset, a type-b image positive, and
    a vanishing net offset is not in the image of either move (pass kind
    explicitly to force a candidate preimage in that degenerate case).
    Satisfies rauzy_step(previous) == (datum, type, matrix).
    """
    pi = datum.combinatorial
    if kind is None:
        net = sum(datum.offsets)
        if net == 0:
            raise ValueError("net offset vanishes; the datum is not an induction image")
        kind = "t" if net < 0 else "b"
    elif kind not in ("t", "b"):
        raise ValueError("kind must be 't' or 'b'")
    if kind == "t":
        winner = pi.top[-1]
        row = list(pi.bottom)
        loser = row[row.index(winner) + 1]
        row.remove(loser)
        row.append(loser)
        pi0 = CombinatorialDatum(pi.top, tuple(row))
    else:
        winner = pi.bottom[-1]
        row = list(pi.top)
        loser = row[row.index(winner) + 1]
        row.remove(loser)
        row.append(loser)
        pi0 = CombinatorialDatum(tuple(row), pi.bottom)
    lengths = list(datum.lengths)
    lengths[winner] += lengths[loser]
    offsets = list(datum.offsets)
    offsets[winner] += offsets[loser]
    d = pi.d
    mat = [[1 if i == j else 0 for j in range(d)] for i in range(d)]
    mat[winner][loser] = 1
    B = tuple(tuple(row) for row in mat)
    return ZipperedData(pi0, tuple(lengths), tuple(offsets)), kind, B


# ---------------------------------------------------------------------------
# assembling the suspension into a chart surface
# ---------------------------------------------------------------------------

def build_surface(data: ZipperedData) -> RectSurface:
    """Glue the flow boxes into a chart surface, one chart per letter.

    Chart l is the box [0, lengths[l]] x [0, heights[l]]; its top edge
    returns to the exchanged interval, so top gluings refine the image
    interval against the domain partition, while the side seams follow the
    corner positions (the sign of the net offset decides which of the two
    rightmost boxes donates the extra seam piece).
    """
    pi = data.combinatorial
    d = pi.d
    lam = data.lengths
    geo = heights_and_singularities(data)
    h = geo.heights
    net = geo.net_offset
    top_inf = {l: geo.top_corners[l][0] for l in range(d)}
    bot_inf = {l: geo.bottom_corners[l][0] for l in range(d)}
    tpos = {l: i for i, l in enumerate(pi.top)}
    bpos = {l: i for i, l in enumerate(pi.bottom)}
    top_last, bot_last = pi.top[-1], pi.bottom[-1]

    top_table: list[tuple[Seg, ...]] = []
    for a in range(d):
        g0 = bot_inf[a]
        row = []
        for chi in pi.top:
            s = max(g0, top_inf[chi])
            e = min(g0 + lam[a], top_inf[chi] + lam[chi])
            if s < e:
                row.append(Seg(s - g0, e - g0, chi, g0 - top_inf[chi]))
        top_table.append(tuple(row))

    right_table: list[tuple[Seg, ...]] = []
    for a in range(d):
        j, m = tpos[a], bpos[a]
        pieces: list[tuple[Fraction, Fraction, int, Fraction]] = []
        if j < d - 1 and m < d - 1:
            nxt, bnx = pi.top[j + 1], pi.bottom[m + 1]
            c = geo.top_corners[nxt][1]
            pieces = [
                (Fraction(0), c, nxt, Fraction(0)),
                (c, h[a], bnx, h[bnx] - h[a]),
            ]
        elif j < d - 1:
            # bottom-last box: below the cut the seam meets the next top
            # box, above it the leftover seam piece wraps to the box after
            # the top-last one (only when the net offset dips negative)
            nxt = pi.top[j + 1]
            if net >= 0:
                pieces = [(Fraction(0), h[a], nxt, Fraction(0))]
            else:
                cut = h[a] + net
                bstar = pi.bottom[bpos[top_last] + 1]
                pieces = [
                    (Fraction(0), cut, nxt, Fraction(0)),
                    (cut, h[a], bstar, h[bstar] - h[a] - h[top_last]),
                ]
        else:
            # top-last box (it is never bottom-last too)
            bnx = pi.bottom[m + 1]
            if net < 0:
                pieces = [(Fraction(0), h[a], bnx, h[bnx] - h[a])]
            else:
                aplus = pi.top[tpos[bot_last] + 1]
                pieces = [
                    (Fraction(0), net, aplus, h[bot_last]),
                    (net, h[a], bnx, h[bnx] - h[a]),
                ]
        right_table.append(
            tuple(Seg(pa, pb, ch, off) for pa, pb, ch, off in pieces if pa < pb)
        )

    rs = RectSurface(
        widths=tuple(lam),
        heights=tuple(h),
        right=tuple(right_table),
        top=tuple(top_table),
        cones=frozenset(),
    )
    seeds = [(l, Fraction(0), geo.top_corners[l][1]) for l in range(d)]
    rs = RectSurface(
        widths=rs.widths,
        heights=rs.heights,
        right=rs.right,
        top=rs.top,
        cones=close_cone_reps(rs, seeds),
    )
    validate_surface(rs)
    return rs


# ---------------------------------------------------------------------------
# closed geodesics and the depth lemmas
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ClosedGeodesic:
    """A verified closed regular geodesic, by unsigned holonomy parts."""

    re_abs: Fraction
    im_abs: Fraction
    letter: Optional[int]


def detect_closed_cylinder(
    data: ZipperedData,
    letter: Optional[int] = None,
    *,
    surface: Optional[RectSurface] = None,
) -> Optional[ClosedGeodesic]:
    """Closed geodesic through the center of one letter's flow box.

    Exists when the letter's top and bottom intervals overlap across more
    than half their common length, i.e. the center displacement is shorter
    than the interval; the geodesic is then validated by flowing once
    around on the assembled surface.  Defaults to the top-last letter,
    whose displacement is the total length of the letters that follow it
    in the bottom row.
    """
    pi = data.combinatorial
    if letter is None:
        letter = pi.top[-1]
    geo = heights_and_singularities(data)
    re_signed = geo.top_corners[letter][0] - geo.bottom_corners[letter][0]
    lam = data.lengths[letter]
    if abs(re_signed) >= lam:
        return None
    hh = geo.heights[letter]
    rs = surface if surface is not None else build_surface(data)
    if re_signed >= 0:
        surf, rex = rs, re_signed
    else:
        surf, rex = reflect_surface(rs), -re_signed
    dd = lcm(rex.denominator, hh.denominator)
    ip, iq = int(rex * dd), int(hh * dd)
    g = gcd(ip, iq)
    ip, iq = ip // g, iq // g
    res = run_flow(surf, ip, iq, (letter, lam / 2, hh / 2), stop_u=hh / iq)
    if res.status != "param":
        return None
    if not (
        res.chart == letter
        and Fraction(res.x, res.den) == lam / 2
        and Fraction(res.y, res.den) == hh / 2
    ):
        raise AssertionError("center geodesic failed to close up")
    return ClosedGeodesic(abs(re_signed), hh, letter)


@dataclass(frozen=True)
class SingularityReport:
    """Outcome of the depth-chain checks on one suspension datum."""

    applicable: bool
    reason: str
    depth_ok: Optional[bool] = None
    offset_ok: Optional[bool] = None
    deep_ok: Optional[bool] = None
    shallow_ok: Optional[bool] = None
    witness: Optional[tuple[Fraction, Fraction]] = None
    witness_ok: Optional[bool] = None
    failures: tuple[str, ...] = ()

    @property
    def passed(self) -> bool:
        checks = (self.depth_ok, self.offset_ok, self.deep_ok, self.shallow_ok, self.witness_ok)
        return self.applicable and all(c is not False for c in checks)


def _closed_geodesic_witness(
    data: ZipperedData,
    re_bound: Fraction,
    im_bound: Fraction,
    *,
    max_levels: int = 3000,
) -> Optional[tuple[Fraction, Fraction]]:
    """Search for a closed geodesic with |re| < re_bound and |im| < im_bound.

    Center geodesics of the given datum rarely fit the box, but the level
    sets of coarser Markov decompositions of the same surface do: walking
    the induction backward widens and flattens the boxes, so each level is
    prechecked for a letter whose box is flat enough and whose center
    displacement fits inside it.  The walk stops at a vanishing net offset
    only if neither forced preimage is a valid suspension (exact rational
    data can reach this wall).  Axis-parallel cylinder cores, which no
    center geodesic ever realizes, are swept last with abandonment caps.
    """
    stack = [data]
    levels = 0
    while stack and levels < max_levels:
        cur = stack.pop()
        levels += 1
        pi = cur.combinatorial
        geo = heights_and_singularities(cur)
        order = [pi.top[-1]] + [l for l in range(pi.d) if l != pi.top[-1]]
        for letter in order:
            if geo.heights[letter] >= im_bound:
                continue
            rex = geo.top_corners[letter][0] - geo.bottom_corners[letter][0]
            if abs(rex) >= cur.lengths[letter] or abs(rex) >= re_bound:
                continue
            got = detect_closed_cylinder(cur, letter)
            if got is not None:
                return (got.re_abs, got.im_abs)
        if sum(cur.offsets) != 0:
            stack.append(inverse_rauzy_step(cur)[0])
        else:
            for kind in ("b", "t"):
                try:
                    stack.append(inverse_rauzy_step(cur, kind)[0])
                except ValueError:
                    pass
    rs = build_surface(data)
    flats = horizontal_core_lengths(rs, max_circ=re_bound)
    if flats and min(flats) < re_bound:
        return (min(flats), Fraction(0))
    uprights = horizontal_core_lengths(transpose_surface(rs), max_circ=im_bound)
    if uprights and min(uprights) < im_bound:
        return (Fraction(0), min(uprights))
    return None


def check_top_singularity_lemmas(data: ZipperedData, M: int) -> SingularityReport:
    """Check the displayed depth conclusions for a deep-offset suspension.

    Applicable when the net offset is negative, M >= d+1, and every top
    corner stays below H/M where H is the tallest box.  The depth chains
    say a single deep bottom corner drags all corners to its right nearly
    as deep and caps the net offset; with M >= 4d the chains force exact
    deep/shallow splitting around the top-last letter, and on a unit-area
    datum a closed geodesic must appear inside the stated holonomy box.
    """
    pi = data.combinatorial
    d = pi.d
    geo = heights_and_singularities(data)
    H = max(geo.heights)
    if geo.net_offset >= 0:
        return SingularityReport(False, "net offset is not negative")
    if M < d + 1:
        return SingularityReport(False, "M is smaller than d+1")
    if max(im for _, im in geo.top_corners) >= H / M:
        return SingularityReport(False, "a top corner reaches H/M")

    bpos = {l: i + 1 for i, l in enumerate(pi.bottom)}
    imb = {l: geo.bottom_corners[l][1] for l in range(d)}
    failures: list[str] = []

    depth_ok = True
    for A in range(1, M - d + 1):
        trigger = -Fraction(M - A, M) * H
        chained = -Fraction(M + 2 - A - d, M) * H
        capped = -Fraction(M + 1 - A - d, M) * H
        for a in range(d):
            if bpos[a] < 2 or imb[a] >= trigger:
                continue
            for chi in range(d):
                if bpos[chi] >= bpos[a] and not imb[chi] < chained:
                    depth_ok = False
                    failures.append(f"A={A}: corner {chi} above the chained depth")
            if not geo.net_offset <= capped:
                depth_ok = False
                failures.append(f"A={A}: net offset above the cap")

    offset_ok = deep_ok = shallow_ok = None
    witness = None
    witness_ok = None
    if M >= 4 * d:
        offset_ok = geo.net_offset <= -Fraction(M - d, M) * H
        if not offset_ok:
            failures.append("net offset misses the 4d-regime cap")
        cut = bpos[pi.top[-1]]
        deep_thr = -Fraction(M + 2 - 2 * d, M) * H
        shallow_thr = -Fraction(2 * d - 1, M) * H
        deep_ok = all(imb[l] < deep_thr for l in range(d) if bpos[l] > cut)
        shallow_ok = all(shallow_thr <= imb[l] <= 0 for l in range(d) if bpos[l] <= cut)
        if not deep_ok:
            failures.append("a corner right of the top-last letter is too shallow")
        if not shallow_ok:
            failures.append("a corner left of the top-last letter is too deep")
        if suspension_area(data) == 1:
            re_bound = Fraction((d - 1) * M, M + 2 - 2 * d) / H
            im_bound = Fraction(2 * d - 1, M) * H
            witness = _closed_geodesic_witness(data, re_bound, im_bound)
            witness_ok = witness is not None
            if not witness_ok:
                failures.append("no closed geodesic found in the stated box")

    return SingularityReport(
        True,
        "hypotheses hold",
        depth_ok=depth_ok,
        offset_ok=offset_ok,
        deep_ok=deep_ok,
        shallow_ok=shallow_ok,
        witness=witness,
        witness_ok=witness_ok,
        failures=tuple(failures),
    )


def homologous_boundary_pair(data: ZipperedData) -> bool:
    """Two distinct saddle connections share the bottom-last letter's vector.

    When they do they cut out a cylinder whose boundary walls both carry
    that holonomy, the configuration behind the widest-cylinder estimates.
    """
    pi = data.combinatorial
    beta = pi.bottom[-1]
    vx, vy = data.lengths[beta], data.offsets[beta]
    if vy < 0:
        vx, vy = -vx, -vy
    rs = build_surface(data)
    if vy == 0:
        found = horizontal_connections(rs, vx)
        return found.count(vx) >= 2
    found = saddle_connections_bounded(rs, abs(vx) + 1, vy + 1)
    return found.count((vx, vy)) >= 2


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------

_LETTER_NAMES = "ABCDEFGHIJKLMNOPQRSTUVWXYZ"


def _frac_str(f: Fraction) -> str:
    return f"{f.numerator}/{f.denominator}"


def zippered_to_json(data: ZipperedData) -> str:
    pi = data.combinatorial
    if pi.d > len(_LETTER_NAMES):
        raise ValueError("too many letters to name")
    names = _LETTER_NAMES[: pi.d]
    doc = {
        "top": [names[l] for l in pi.top],
        "bottom": [names[l] for l in pi.bottom],
        "lengths": {names[l]: _frac_str(data.lengths[l]) for l in range(pi.d)},
        "offsets": {names[l]: _frac_str(data.offsets[l]) for l in range(pi.d)},
    }
    return json.dumps(doc, indent=2, sort_keys=True)


def zippered_from_json(text: str) -> ZipperedData:
    doc = json.loads(text)
    names = sorted(doc["top"])
    if names != sorted(doc["bottom"]) or len(set(names)) != len(names):
        raise ValueError("rows must order the same letters")
    idx = {nm: i for i, nm in enumerate(names)}
    top = tuple(idx[nm] for nm in doc["top"])
    bottom = tuple(idx[nm] for nm in doc["bottom"])
    lengths = tuple(Fraction(doc["lengths"][nm]) for nm in names)
    offsets = tuple(Fraction(doc["offsets"][nm]) for nm in names)
    return ZipperedData(CombinatorialDatum(top, bottom), lengths, offsets)


# ---------------------------------------------------------------------------
# samplers
# ---------------------------------------------------------------------------

def random_combinatorial_datum(d: int, rng: Random) -> CombinatorialDatum:
    """Admissible datum with the identity top row."""
    top = tuple(range(d))
    for _ in range(10000):
        row = list(range(d))
        rng.shuffle(row)
        pi = CombinatorialDatum(top, tuple(row))
        if pi.is_admissible:
            return pi
    raise RuntimeError("no admissible datum found")


def _offsets_from_profile(
    pi: CombinatorialDatum, prefixes: list[Fraction], net: Fraction
) -> Optional[tuple[Fraction, ...]]:
    """Offsets whose top prefix sums follow the profile, or None if some
    bottom prefix then fails to stay negative."""
    taus: dict[int, Fraction] = {}
    prev = Fraction(0)
    for l, cur in zip(pi.top, prefixes + [net]):
        taus[l] = cur - prev
        prev = cur
    acc = Fraction(0)
    for l in pi.bottom[:-1]:
        acc += taus[l]
        if acc >= 0:
            return None
    return tuple(taus[l] for l in range(pi.d))


def random_zippered(pi: CombinatorialDatum, rng: Random, *, span: int = 60) -> ZipperedData:
    """Random suspension: integer lengths, rejection-sampled offsets."""
    for _ in range(10000):
        lengths = tuple(Fraction(rng.randint(1, span)) for _ in range(pi.d))
        if lengths[pi.top[-1]] == lengths[pi.bottom[-1]]:
            continue
        prefixes = [Fraction(rng.randint(1, span), span) for _ in range(pi.d - 1)]
        net = Fraction(rng.randint(-span, span), span)
        offsets = _offsets_from_profile(pi, prefixes, net)
        if offsets is not None:
            return ZipperedData(pi, lengths, offsets)
    raise RuntimeError("no suspension found for this datum")


def random_shallow_zippered(pi: CombinatorialDatum, rng: Random, M: int) -> ZipperedData:
    """Unit-area suspension with low top corners and a deep net offset.

    Every top prefix stays under 1/(4M) while the net offset lands in
    (-1, -1/2]; the tallest box then dwarfs the top corners by more than a
    factor of M, which is exactly the regime the depth chains speak about.
    """
    for _ in range(10000):
        prefixes = [
            Fraction(rng.randint(1, 999), 999 * 4 * M) for _ in range(pi.d - 1)
        ]
        net = -Fraction(rng.randint(500, 999), 1000)
        offsets = _offsets_from_profile(pi, prefixes, net)
        if offsets is None:
            continue
        lengths = tuple(Fraction(rng.randint(1, 999)) for _ in range(pi.d))
        data = ZipperedData(pi, lengths, offsets)
        a = suspension_area(data)
        return ZipperedData(pi, tuple(l / a for l in lengths), offsets)
    raise RuntimeError("no shallow suspension found for this datum")
