"""Exact linear flows: trajectories, hitting times, return maps.

The flow moves with unit speed in direction (sin t, cos t) for slope
alpha = tan t, so slope 0 is straight up and the direction vector of a
rational slope p/q is (p, q).  All queries run on the integer event engine
in chartsurf; times come back as exact square roots of rationals.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd
from typing import Iterable, Optional, Sequence, Union

from .cfrac import RationalSlope, Word, as_word, convergents, cylinder_length
from .chartsurf import (
    RectSurface,
    ball_copies,
    max_ball_radius_sq,
    rect_surface_from_origami,
    run_flow,
)
from .exact import SqrtSurd, Surd, log_fraction
from .surface import ChartPoint, Holonomy, Origami, quaternion_origami, saddle_connections

SurfacePoint = ChartPoint
SlopeLike = Union[int, str, Fraction, RationalSlope]
SurfaceLike = Union[Origami, RectSurface]


class FlowPrecisionError(ValueError):
    """A rational slope proxy is too coarse for the requested experiment."""


class ConeHit(RuntimeError):
    """The orbit ran into a cone point before the query could resolve."""


@lru_cache(maxsize=64)
def _rect_cache(o: Origami) -> RectSurface:
    return rect_surface_from_origami(o)


def _as_rect(surface: SurfaceLike) -> RectSurface:
    if isinstance(surface, RectSurface):
        return surface
    return _rect_cache(surface)


def _as_direction(slope: SlopeLike) -> tuple[int, int, Fraction]:
    """(p, q, alpha) with the flow direction (p, q) upward, alpha = p/q."""
    if isinstance(slope, RationalSlope):
        alpha = slope.value
    else:
        alpha = Fraction(slope)
    if alpha < 0:
        raise ValueError("slopes are nonnegative; 0 flows straight up")
    return alpha.numerator, alpha.denominator, alpha


def _scaled_time(s: int | Surd, kappa: int, den: int, nrm: int) -> SqrtSurd:
    if isinstance(s, int):
        s = Surd.make(Fraction(s))
    return SqrtSurd.of_square(s * s * Fraction(nrm, (kappa * den) ** 2))


# ---------------------------------------------------------------------------
# trajectories
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TrajectoryEvent:
    time: SqrtSurd
    square: int
    x: Fraction
    y: Fraction
    kind: str  # 'right', 'top', or 'corner'


@dataclass(frozen=True)
class Trajectory:
    start: SurfacePoint
    slope: Fraction
    events: tuple[TrajectoryEvent, ...]
    total_length: object  # Fraction or SqrtSurd
    singular: bool
    final_square: int
    final_x: object  # Fraction or Surd
    final_y: object

    def squares_visited(self) -> list[int]:
        return [e.square for e in self.events]


def flow_to(
    surface: SurfaceLike,
    slope: SlopeLike,
    point: SurfacePoint,
    horizon: Fraction,
    *,
    max_events: int = 5_000_000,
) -> Trajectory:
    """Flow from `point` for total arclength `horizon`, logging crossings.

    The trajectory is truncated (and flagged) if it runs into a cone.
    """
    rs = _as_rect(surface)
    p, q, alpha = _as_direction(slope)
    pt = SurfacePoint(point.square, point.x, point.y)
    horizon = Fraction(horizon)
    if horizon <= 0:
        raise ValueError("horizon must be positive")
    if (pt.square, pt.x, pt.y) in rs.cones:
        raise ValueError("cannot flow from a cone point")
    res = run_flow(
        rs, p, q, (pt.square, pt.x, pt.y),
        horizon=horizon, record=True, max_events=max_events,
    )
    if res.status == "cap":
        raise RuntimeError("event cap exhausted before the horizon")
    nrm = p * p + q * q
    kd = res.kappa * res.den
    labels = rs.labels or tuple(range(rs.n_charts))
    events = tuple(
        TrajectoryEvent(
            _scaled_time(s, res.kappa, res.den, nrm),
            labels[c],
            Fraction(x, res.den),
            Fraction(y, res.den),
            kind,
        )
        for s, c, x, y, kind in res.events
    )
    if res.status == "singular":
        return Trajectory(
            pt, alpha, events,
            _scaled_time(res.s_total, res.kappa, res.den, nrm),
            True, labels[res.chart],
            Fraction(res.x, res.den), Fraction(res.y, res.den),
        )
    # horizon reached: the final point sits mid-leg, at distance
    # horizon - arc(last event) past the last recorded position
    x_rat = Fraction(res.x, res.den) - Fraction(p * res.s_total, kd)
    y_rat = Fraction(res.y, res.den) - Fraction(q * res.s_total, kd)
    fx = Surd.make(x_rat, Fraction(p, nrm) * horizon, nrm)
    fy = Surd.make(y_rat, Fraction(q, nrm) * horizon, nrm)
    final_x = fx.as_fraction() if fx.is_rational() else fx
    final_y = fy.as_fraction() if fy.is_rational() else fy
    return Trajectory(
        pt, alpha, events, horizon, False, labels[res.chart], final_x, final_y
    )


# ---------------------------------------------------------------------------
# hitting and return times
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class HittingRecord:
    """One radius-r hitting query.

    A hit carries the exact time R and the exponent log R / -log r.  A miss
    (horizon exhausted) carries hit=False and the certified lower bound
    R > horizon, with `lower_exponent` the exponent of that bound.
    """

    r: Fraction
    hit: bool
    R: Optional[SqrtSurd]
    exponent: Optional[float]
    horizon: Optional[Fraction]
    lower_exponent: Optional[float]
    n_events: int

    def exponent_sample(self) -> float:
        """Best available exponent information (exact or censored-below)."""
        return self.exponent if self.hit else self.lower_exponent


def _separation_ok(rs: RectSurface, p: SurfacePoint, p2: SurfacePoint, r: Fraction) -> bool:
    two_r = 2 * r
    for c, cx, cy in ball_copies(rs, (p2.square, p2.x, p2.y), two_r):
        if c == p.square:
            if (p.x - cx) ** 2 + (p.y - cy) ** 2 <= two_r * two_r:
                return False
    return True


def hitting_time(
    surface: SurfaceLike,
    slope: SlopeLike,
    point: SurfacePoint,
    target: SurfacePoint,
    r: Fraction,
    *,
    horizon: Optional[Fraction] = None,
    max_events: int = 50_000_000,
) -> HittingRecord:
    """First time beyond r at which the orbit of `point` enters B(target, r).

    Requires r below the safety radius of the target (quarter of the
    systole-ish bound, so the ball is an embedded disk away from cones) and,
    for distinct points, initial separation above 2r; this makes R > r
    automatic.  With target == point this is the return time.
    """
    rs = _as_rect(surface)
    p, q, _ = _as_direction(slope)
    r = Fraction(r)
    if r <= 0:
        raise ValueError("radius must be positive")
    if (point.square, point.x, point.y) in rs.cones:
        raise ValueError("cannot flow from a cone point")
    tgt = (target.square, target.x, target.y)
    if r * r >= max_ball_radius_sq(rs, tgt):
        raise ValueError("radius at or above the safety radius of the target")
    same = (point.square, point.x, point.y) == tgt
    if not same and not _separation_ok(rs, point, target, r):
        raise ValueError("start and target closer than 2r; no clean hit clause")
    res = run_flow(
        rs, p, q, (point.square, point.x, point.y),
        horizon=horizon,
        targets=ball_copies(rs, tgt, r),
        radius=r,
        min_arc=r,
        max_events=max_events,
    )
    if res.status == "singular":
        nrm = p * p + q * q
        t = _scaled_time(res.s_total, res.kappa, res.den, nrm)
        raise ConeHit(f"orbit hit a cone at time {float(t):.6g} before resolving")
    if res.status == "cap":
        raise RuntimeError("event cap exhausted; raise max_events or set a horizon")
    nrm = p * p + q * q
    if res.status == "hit":
        big_r = _scaled_time(res.hit_s, res.kappa, res.den, nrm)
        assert big_r > r, "hit inside the excluded initial stretch"
        exponent = big_r.log() / -log_fraction(r) if r < 1 else None
        return HittingRecord(r, True, big_r, exponent, horizon, None, res.n_events)
    lower = log_fraction(horizon) / -log_fraction(r) if r < 1 and horizon > 1 else None
    return HittingRecord(r, False, None, None, horizon, lower, res.n_events)


def return_time(
    surface: SurfaceLike,
    slope: SlopeLike,
    point: SurfacePoint,
    r: Fraction,
    *,
    horizon: Optional[Fraction] = None,
    max_events: int = 50_000_000,
) -> HittingRecord:
    return hitting_time(
        surface, slope, point, point, r, horizon=horizon, max_events=max_events
    )


# ---------------------------------------------------------------------------
# exponent scans
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ExponentScan:
    records: tuple[HittingRecord, ...]
    w_inf: Optional[float]
    w_sup: Optional[float]


def radius_schedule(
    kind: str,
    *,
    word: Optional[Word] = None,
    count: int = 6,
    start: int = 1,
) -> list[Fraction]:
    """Standard radius sequences.

    'dyadic' needs no word.  The word-driven kinds read the convergent
    denominators q_n of the slope word: 'one_cylinder' gives 2/q_{2n},
    'splitting' gives 1/(12 q_{2n}), 'small_slope' gives 16/q_n.
    """
    if kind == "dyadic":
        return [Fraction(1, 2 ** k) for k in range(start + 3, start + 3 + count)]
    if word is None:
        raise ValueError(f"schedule '{kind}' needs the slope word")
    qs = [den for _, den in convergents(as_word(word))]
    out = []
    for n in range(start, start + count):
        if kind == "one_cylinder":
            idx = 2 * n
            num = Fraction(2)
        elif kind == "splitting":
            idx = 2 * n
            num = Fraction(1, 12)
        elif kind == "small_slope":
            idx = n
            num = Fraction(16)
        else:
            raise ValueError(f"unknown schedule kind '{kind}'")
        if idx > len(qs):
            break
        out.append(num / qs[idx - 1])
    return out


def ensure_proxy_precision(
    word: Word,
    horizon: Fraction,
    r_min: Fraction,
) -> None:
    """Guard: slope uncertainty times horizon must stay under r_min/10.

    Any slope in the cylinder of `word` differs from the proxy by at most
    the cylinder length, and two unit-speed orbits with slopes that close
    diverge by under |dalpha| * horizon.  Set FLATLAB_PRECISION_GUARD=0 to
    disable (results then bind only the proxy slope itself).
    """
    if os.environ.get("FLATLAB_PRECISION_GUARD", "1") == "0":
        return
    err = cylinder_length(as_word(word))
    if err * horizon >= Fraction(r_min) / 10:
        raise FlowPrecisionError(
            "slope word too shallow for this experiment: "
            f"cylinder length {float(err):.3g} * horizon {float(horizon):.3g} "
            f"is not below r_min/10 = {float(r_min) / 10:.3g}; deepen the word"
        )


def exponent_scan(
    surface: SurfaceLike,
    slope: SlopeLike,
    point: SurfacePoint,
    target: SurfacePoint,
    radii: Sequence[Fraction],
    *,
    horizon: Optional[Fraction] = None,
    horizons: Optional[Sequence[Optional[Fraction]]] = None,
    max_events: int = 50_000_000,
) -> ExponentScan:
    """Hitting records over a radius schedule plus finite-depth exponents.

    w_inf is the min exponent over resolved hits; w_sup is the max over all
    samples, counting a censored miss at its certified lower bound.  When
    the slope carries its continued fraction word, the proxy precision
    guard runs against the smallest radius first.
    """
    radii = [Fraction(r) for r in radii]
    if not radii:
        raise ValueError("empty radius schedule")
    if horizons is None:
        horizons = [horizon] * len(radii)
    if isinstance(slope, RationalSlope) and slope.word:
        hs = [h for h in horizons if h is not None]
        if hs:
            ensure_proxy_precision(slope.word, max(hs), min(radii))
    same = (point.square, point.x, point.y) == (target.square, target.x, target.y)
    records = []
    for r, h in zip(radii, horizons):
        if same:
            rec = return_time(surface, slope, point, r, horizon=h, max_events=max_events)
        else:
            rec = hitting_time(
                surface, slope, point, target, r, horizon=h, max_events=max_events
            )
        records.append(rec)
    hit_exps = [rec.exponent for rec in records if rec.hit and rec.exponent is not None]
    all_exps = [e for rec in records if (e := rec.exponent_sample()) is not None]
    return ExponentScan(
        tuple(records),
        min(hit_exps) if hit_exps else None,
        max(all_exps) if all_exps else None,
    )


# ---------------------------------------------------------------------------
# cutting sequences over the quaternion alphabet
# ---------------------------------------------------------------------------

QUATERNION_LABELS = ("1", "i", "j", "k", "-1", "-i", "-j", "-k")

_AXIS_MUL = {
    (0, 0): (1, 0), (0, 1): (1, 1), (0, 2): (1, 2), (0, 3): (1, 3),
    (1, 0): (1, 1), (1, 1): (-1, 0), (1, 2): (1, 3), (1, 3): (-1, 2),
    (2, 0): (1, 2), (2, 1): (-1, 3), (2, 2): (-1, 0), (2, 3): (1, 1),
    (3, 0): (1, 3), (3, 1): (1, 2), (3, 2): (-1, 1), (3, 3): (-1, 0),
}


def quaternion_mul(a: int, b: int) -> int:
    """Product in the unit quaternion group, indices into QUATERNION_LABELS."""
    s1, a1 = divmod(a, 4)
    s2, a2 = divmod(b, 4)
    s3, a3 = _AXIS_MUL[(a1, a2)]
    sign = (-1) ** (s1 + s2) * s3
    return a3 if sign > 0 else a3 + 4


def quaternion_inv(a: int) -> int:
    s, ax = divmod(a, 4)
    if ax == 0:
        return a
    return ax + 4 if s == 0 else ax


@dataclass(frozen=True)
class CuttingWord:
    labels: tuple[str, ...]
    lead: str
    tail: tuple[str, ...]  # lead^-1 * labels, so tail[0] == '1'
    axis: str
    singular: bool


def cutting_sequence(
    surface: SurfaceLike,
    slope: SlopeLike,
    point: SurfacePoint,
    length: Fraction,
    axis: str = "vertical",
) -> CuttingWord:
    """Square labels along a flow segment, read off one crossing family.

    axis='vertical' lists the squares entered through their left side,
    axis='horizontal' those entered through their bottom.  On the eight
    square quaternion surface the labels are group elements and the tail
    is the word normalized to start at the identity.
    """
    if axis not in ("vertical", "horizontal"):
        raise ValueError("axis must be 'vertical' or 'horizontal'")
    kind = "right" if axis == "vertical" else "top"
    traj = flow_to(surface, slope, point, length)
    squares = [e.square for e in traj.events if e.kind == kind]
    rs = _as_rect(surface)
    is_quat = rs.n_charts == 8 and isinstance(surface, Origami) and surface == quaternion_origami()
    if is_quat:
        labels = tuple(QUATERNION_LABELS[s] for s in squares)
        if squares:
            g0 = squares[0]
            inv = quaternion_inv(g0)
            tail = tuple(QUATERNION_LABELS[quaternion_mul(inv, s)] for s in squares)
        else:
            tail = ()
        lead = labels[0] if labels else "1"
    else:
        labels = tuple(str(s) for s in squares)
        lead = labels[0] if labels else "0"
        tail = labels
    return CuttingWord(labels, lead, tail, axis, traj.singular)


# ---------------------------------------------------------------------------
# first-return interval exchange on a horizontal transversal
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class IetReturn:
    """First-return map of the flow to a horizontal segment.

    Piece i is [breaks[i], breaks[i+1]) with image starting at images[i];
    perm[i] is the rank of that image from left to right.  heights[i] is
    the vertical extent swept before returning, so sum(lengths * heights)
    is the area of the part of the surface the pieces sweep.
    """

    x0: Fraction
    x1: Fraction
    breaks: tuple[Fraction, ...]
    lengths: tuple[Fraction, ...]
    images: tuple[Fraction, ...]
    heights: tuple[Fraction, ...]
    perm: tuple[int, ...]

    @property
    def n_pieces(self) -> int:
        return len(self.lengths)

    def area_swept(self) -> Fraction:
        return sum(l * h for l, h in zip(self.lengths, self.heights))


def first_return_iet(
    surface: SurfaceLike,
    slope: SlopeLike,
    transversal: tuple[int, Fraction, Fraction, Fraction],
    *,
    max_pieces: int = 200,
    max_events: int = 5_000_000,
) -> IetReturn:
    """Exact return map to the segment y = const, x in [x0, x1) of a chart.

    Sweeps the segment left to right: each flow started just right of a
    breakpoint pins down a maximal subinterval on which the return is a
    single translation, with the next breakpoint found from exact event
    slacks.  The permutation comes from sorting the image intervals.
    """
    rs = _as_rect(surface)
    p, q, _ = _as_direction(slope)
    sq, ty, tx0, tx1 = transversal
    ty, tx0, tx1 = Fraction(ty), Fraction(tx0), Fraction(tx1)
    if not (0 <= tx0 < tx1 <= rs.widths[sq]) or not (0 <= ty < rs.heights[sq]):
        raise ValueError("transversal outside its chart")
    pieces = []
    a = tx0
    while a < tx1:
        res = run_flow(
            rs, p, q, (sq, a, ty),
            transversal=(sq, ty, tx0, tx1),
            bias=True,
            stop_at_cones=False,
            max_events=max_events,
        )
        if res.status != "cross":
            raise RuntimeError(f"return sweep failed with status '{res.status}'")
        image = Fraction(res.cross_x, res.den)
        height = Fraction(q * res.s_total, res.kappa * res.den)
        assert res.slack is not None and res.slack > 0
        length = min(res.slack, tx1 - a)
        pieces.append((a, length, image, height))
        a += length
        if len(pieces) > max_pieces:
            raise RuntimeError("return map did not stabilize; too many pieces")
    # merge neighbours that continue the same translation
    merged = []
    for a, length, image, height in pieces:
        if merged:
            a0, l0, im0, h0 = merged[-1]
            if a0 + l0 == a and im0 + l0 == image and h0 == height:
                merged[-1] = (a0, l0 + length, im0, h0)
                continue
        merged.append((a, length, image, height))
    breaks = tuple(m[0] for m in merged) + (tx1,)
    lengths = tuple(m[1] for m in merged)
    images = tuple(m[2] for m in merged)
    heights = tuple(m[3] for m in merged)
    # the images must tile [tx0, tx1)
    order = sorted(range(len(merged)), key=lambda i: images[i])
    pos = tx0
    for i in order:
        if images[i] != pos:
            raise RuntimeError("image intervals do not tile the transversal")
        pos += lengths[i]
    if pos != tx1:
        raise RuntimeError("image intervals do not tile the transversal")
    perm = tuple(order.index(i) for i in range(len(merged)))
    return IetReturn(tx0, tx1, breaks, lengths, images, heights, perm)


# ---------------------------------------------------------------------------
# short saddle connections relative to a direction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ShortConnection:
    holonomy: Holonomy
    re_abs: float  # |component across the flow direction|
    im_abs: float  # |component along the flow direction|
    c_ratio: Fraction  # exact |re * im| in the unit-speed frame


def find_short_saddle_connection(
    surface: Origami,
    slope: SlopeLike,
    omega: Fraction,
    r: Fraction,
) -> Optional[ShortConnection]:
    """Scan connections of length under r^-omega for the best re*im ratio.

    Frame components are taken relative to the unit flow direction; the
    reported c_ratio = |re * im| is exact and scale free, and the witness
    minimizes it.  Returns None when no connection fits the length bound.
    """
    p, q, _ = _as_direction(slope)
    omega = Fraction(omega)
    r = Fraction(r)
    if not (0 < r < 1) or omega <= 0:
        raise ValueError("need 0 < r < 1 and omega > 0")
    # bound = floor(r^-omega), exactly
    on, od = omega.numerator, omega.denominator
    rn, rd = r.numerator, r.denominator
    bound = int(float(r) ** -float(omega))
    while (bound + 1) ** od * rn ** on <= rd ** on:
        bound += 1
    while bound > 0 and bound ** od * rn ** on > rd ** on:
        bound -= 1
    if bound == 0:
        return None
    nrm = p * p + q * q
    len_lhs_mult = rn ** (2 * on)
    len_rhs = rd ** (2 * on)
    best = None
    for h in saddle_connections(surface, bound):
        im_s = p * h.x + q * h.y
        re_s = q * h.x - p * h.y
        if im_s < 0 or (im_s == 0 and re_s <= 0):
            continue  # keep one orientation per connection
        l2 = h.x * h.x + h.y * h.y
        if l2 ** od * len_lhs_mult >= len_rhs:
            continue
        ratio = Fraction(abs(re_s * im_s), nrm)
        if best is None or ratio < best[0]:
            best = (ratio, h, abs(re_s), abs(im_s))
    if best is None:
        return None
    ratio, h, re_s, im_s = best
    root = nrm ** 0.5
    return ShortConnection(h, re_s / root, im_s / root, ratio)
