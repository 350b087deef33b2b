"""Axis-aligned chart surfaces with an exact event-driven linear flow.

A RectSurface is a translation surface cut into rectangular charts.  Every
gluing is a translation, so crossing the right side of a chart lands on the
left side of some chart and crossing the top lands on a bottom.  All stored
geometry is rational; each flow query rescales to integers chosen so that
every boundary crossing, corner hit, and ball entry is decided by integer
sign tests (plus one exact square root for entry times into round targets).

Conventions: a chart owns its bottom and left edges.  Flow directions are
(p, q) with p, q >= 0, not both zero, so motion is up and right; time is
arclength and the flow parameter u (position = start + (p,q)u) relates to
it by t = u * sqrt(p^2 + q^2).
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, lcm
from typing import Iterable, Optional

from .exact import Surd

FracPoint = tuple[int, Fraction, Fraction]


@dataclass(frozen=True)
class Seg:
    """One glued piece of a right or top chart edge.

    Source positions in [a, b) map to position + off on the target chart's
    opposite (left resp. bottom) edge.
    """

    a: Fraction
    b: Fraction
    chart: int
    off: Fraction


@dataclass(frozen=True)
class RectSurface:
    widths: tuple[Fraction, ...]
    heights: tuple[Fraction, ...]
    right: tuple[tuple[Seg, ...], ...]
    top: tuple[tuple[Seg, ...], ...]
    cones: frozenset[FracPoint]
    # origami square behind each chart, when there is one
    labels: Optional[tuple[int, ...]] = None

    @property
    def n_charts(self) -> int:
        return len(self.widths)

    def area(self) -> Fraction:
        return sum(w * h for w, h in zip(self.widths, self.heights))

    def left_segs(self, chart: int) -> list[Seg]:
        """Pieces of this chart's left edge: [a, b) maps back by off."""
        out = []
        for src, segs in enumerate(self.right):
            for s in segs:
                if s.chart == chart:
                    out.append(Seg(s.a + s.off, s.b + s.off, src, -s.off))
        out.sort(key=lambda s: s.a)
        return out

    def bottom_segs(self, chart: int) -> list[Seg]:
        out = []
        for src, segs in enumerate(self.top):
            for s in segs:
                if s.chart == chart:
                    out.append(Seg(s.a + s.off, s.b + s.off, src, -s.off))
        out.sort(key=lambda s: s.a)
        return out


def _check_cover(segs: Iterable[Seg], total: Fraction, what: str) -> None:
    pos = Fraction(0)
    for s in sorted(segs, key=lambda s: s.a):
        if s.a != pos or s.b <= s.a:
            raise ValueError(f"{what}: gluing pieces do not tile the edge")
        pos = s.b
    if pos != total:
        raise ValueError(f"{what}: gluing pieces do not tile the edge")


def validate_surface(rs: RectSurface) -> None:
    """Check the gluing combinatorics and the cone bookkeeping."""
    n = rs.n_charts
    for c in range(n):
        _check_cover(rs.right[c], rs.heights[c], f"right edge of chart {c}")
        _check_cover(rs.top[c], rs.widths[c], f"top edge of chart {c}")
        for s in rs.right[c]:
            if not (0 <= s.a + s.off and s.b + s.off <= rs.heights[s.chart]):
                raise ValueError("right gluing lands outside its target")
        for s in rs.top[c]:
            if not (0 <= s.a + s.off and s.b + s.off <= rs.widths[s.chart]):
                raise ValueError("top gluing lands outside its target")
        _check_cover(rs.left_segs(c), rs.heights[c], f"left edge of chart {c}")
        _check_cover(rs.bottom_segs(c), rs.widths[c], f"bottom edge of chart {c}")
    for c, x, y in rs.cones:
        on_boundary = x == 0 or y == 0 or x == rs.widths[c] or y == rs.heights[c]
        if not on_boundary:
            raise ValueError("cone point off the chart boundary")
        # interior edge cones must sit at gluing-piece endpoints so that the
        # flow loop can treat piece lookups as cone-free
        if x == rs.widths[c] and 0 < y < rs.heights[c]:
            if not any(y in (s.a, s.b) for s in rs.right[c]):
                raise ValueError("edge cone not aligned with gluing pieces")
        if y == rs.heights[c] and 0 < x < rs.widths[c]:
            if not any(x in (s.a, s.b) for s in rs.top[c]):
                raise ValueError("edge cone not aligned with gluing pieces")
    if close_cone_reps(rs, rs.cones) != rs.cones:
        raise ValueError("cone representative set is not closed under gluings")


def _boundary_neighbors(rs: RectSurface, rep: FracPoint) -> list[FracPoint]:
    c, x, y = rep
    out = []
    w, h = rs.widths[c], rs.heights[c]
    if x == w:
        for s in rs.right[c]:
            if s.a <= y < s.b or y == s.b:
                out.append((s.chart, Fraction(0), y + s.off))
    if x == 0:
        for s in rs.left_segs(c):
            if s.a <= y < s.b or y == s.b:
                out.append((s.chart, rs.widths[s.chart], y + s.off))
    if y == h:
        for s in rs.top[c]:
            if s.a <= x < s.b or x == s.b:
                out.append((s.chart, x + s.off, Fraction(0)))
    if y == 0:
        for s in rs.bottom_segs(c):
            if s.a <= x < s.b or x == s.b:
                out.append((s.chart, x + s.off, rs.heights[s.chart]))
    return out


def close_cone_reps(rs: RectSurface, seeds: Iterable[FracPoint]) -> frozenset[FracPoint]:
    """All boundary representatives reachable from the seed positions."""
    seen = set()
    stack = [(c, Fraction(x), Fraction(y)) for c, x, y in seeds]
    while stack:
        rep = stack.pop()
        if rep in seen:
            continue
        seen.add(rep)
        for nxt in _boundary_neighbors(rs, rep):
            if nxt not in seen:
                stack.append(nxt)
        if len(seen) > 10000:
            raise RuntimeError("cone representative closure exploded")
    return frozenset(seen)


def rect_surface_from_origami(o, mark_all: bool = False) -> RectSurface:
    """Unit-square charts glued by the origami permutations.

    Cone seeds are the bottom-left corners of singular squares; with
    mark_all every corner class is included (torus covers have no cones
    but their lattice points still matter as reference points).
    """
    from .surface import singular_square_set

    one = Fraction(1)
    n = o.n
    right = tuple((Seg(Fraction(0), one, o.right[s], Fraction(0)),) for s in range(n))
    top = tuple((Seg(Fraction(0), one, o.up[s], Fraction(0)),) for s in range(n))
    if mark_all:
        sing = set(range(n))
    else:
        sing = singular_square_set(o)
    seeds = [(s, Fraction(0), Fraction(0)) for s in sing]
    rs = RectSurface(
        widths=(one,) * n,
        heights=(one,) * n,
        right=right,
        top=top,
        cones=frozenset(),
        labels=tuple(range(n)),
    )
    rs = RectSurface(
        widths=rs.widths,
        heights=rs.heights,
        right=rs.right,
        top=rs.top,
        cones=close_cone_reps(rs, seeds),
        labels=rs.labels,
    )
    validate_surface(rs)
    return rs


# ---------------------------------------------------------------------------
# ball replication and safety radius
# ---------------------------------------------------------------------------

def ball_copies(rs: RectSurface, center: FracPoint, r: Fraction) -> list[FracPoint]:
    """Centers of every chart copy whose r-box meets the chart.

    The center is mirrored through gluings; copies may have coordinates
    outside their chart rectangle (the disk still pokes into it).
    """
    c0, x0, y0 = center
    out: list[FracPoint] = []
    seen = {(c0, x0, y0)}
    stack = [(c0, x0, y0)]
    while stack:
        c, x, y = stack.pop()
        w, h = rs.widths[c], rs.heights[c]
        # keep copies whose box meets the (closed) chart rectangle
        if x + r < 0 or x - r > w or y + r < 0 or y - r > h:
            continue
        out.append((c, x, y))
        if x + r > w:
            for s in rs.right[c]:
                if y - r <= s.b and s.a <= y + r:
                    cand = (s.chart, x - w, y + s.off)
                    if cand not in seen:
                        seen.add(cand)
                        stack.append(cand)
        if x - r < 0:
            for s in rs.left_segs(c):
                if y - r <= s.b and s.a <= y + r:
                    cand = (s.chart, x + rs.widths[s.chart], y + s.off)
                    if cand not in seen:
                        seen.add(cand)
                        stack.append(cand)
        if y + r > h:
            for s in rs.top[c]:
                if x - r <= s.b and s.a <= x + r:
                    cand = (s.chart, x + s.off, y - h)
                    if cand not in seen:
                        seen.add(cand)
                        stack.append(cand)
        if y - r < 0:
            for s in rs.bottom_segs(c):
                if x - r <= s.b and s.a <= x + r:
                    cand = (s.chart, x + s.off, y + rs.heights[s.chart])
                    if cand not in seen:
                        seen.add(cand)
                        stack.append(cand)
        if len(seen) > 512:
            raise RuntimeError("ball replication exploded; radius too large?")
    return out


def max_ball_radius_sq(rs: RectSurface, point: FracPoint) -> Fraction:
    """Square of the largest legal target radius at this point.

    The radius is half of min(1/4, distance to the nearest cone), so the
    ball is an embedded disk staying clear of every cone.
    """
    quarter = Fraction(1, 4)
    best_d2: Optional[Fraction] = None
    cones_by_chart: dict[int, list[tuple[Fraction, Fraction]]] = {}
    for c, ex, ey in rs.cones:
        cones_by_chart.setdefault(c, []).append((ex, ey))
    for c, cx, cy in ball_copies(rs, point, quarter):
        for ex, ey in cones_by_chart.get(c, ()):
            d2 = (cx - ex) ** 2 + (cy - ey) ** 2
            if best_d2 is None or d2 < best_d2:
                best_d2 = d2
    d2_cap = quarter * quarter
    if best_d2 is not None and best_d2 < d2_cap:
        d2_cap = best_d2
    return d2_cap / 4


def point_on_cone(rs: RectSurface, point: FracPoint) -> bool:
    return (point[0], point[1], point[2]) in rs.cones


# ---------------------------------------------------------------------------
# the flow engine
# ---------------------------------------------------------------------------

@dataclass
class RunResult:
    """Raw integer-scaled outcome of one flow query.

    status: 'horizon', 'singular', 'hit', 'cross', 'param', or 'cap'.
    Positions and S-times are in the scaled units of `den` (length scale)
    and kappa (time scale): flow parameter u = S / (kappa * den).
    """

    status: str
    den: int
    kappa: int
    chart: int
    x: int
    y: int
    s_total: int
    events: list[tuple[int, int, int, int, str]]
    hit_s: Optional[Surd] = None
    cross_x: Optional[int] = None
    slack: Optional[Fraction] = None
    n_events: int = 0


def _denominators(rs: RectSurface) -> int:
    d = 1
    for w in rs.widths:
        d = lcm(d, w.denominator)
    for h in rs.heights:
        d = lcm(d, h.denominator)
    for table in (rs.right, rs.top):
        for segs in table:
            for s in segs:
                d = lcm(d, s.a.denominator, s.b.denominator, s.off.denominator)
    for _, x, y in rs.cones:
        d = lcm(d, x.denominator, y.denominator)
    return d


def run_flow(
    rs: RectSurface,
    p: int,
    q: int,
    start: FracPoint,
    *,
    horizon: Optional[Fraction] = None,
    targets: Iterable[FracPoint] = (),
    radius: Fraction = Fraction(0),
    min_arc: Fraction = Fraction(0),
    stop_at_cones: bool = True,
    bias: bool = False,
    record: bool = False,
    transversal: Optional[tuple[int, Fraction, Fraction, Fraction]] = None,
    stop_u: Optional[Fraction] = None,
    max_events: int = 20_000_000,
) -> RunResult:
    """Flow from `start` in direction (p, q) until something happens.

    Stops at the first of: a cone point (exact corner/edge hit), entry into
    the open ball of `radius` around any target copy at arclength beyond
    `min_arc`, a crossing of the transversal (chart, height, x0, x1), total
    arclength `horizon`, flow parameter `stop_u` (status 'param'; the
    position reported for a stop landing exactly on an edge is in the
    outgoing chart), or the event cap.  With bias=True the trajectory is
    the limit of trajectories started infinitesimally to the right: exact
    cone hits are passed below and segment lookups on right edges are
    end-anchored; per-event start-offset slacks are accumulated.
    """
    if p < 0 or q < 0 or (p == 0 and q == 0):
        raise ValueError("direction must be (p, q) with p, q >= 0, not both zero")
    if transversal is not None and q == 0:
        raise ValueError("transversal sweeps need upward motion")
    if stop_u is not None and stop_u < 0:
        raise ValueError("stop_u must be nonnegative")
    g = gcd(p, q)
    p, q = p // g, q // g

    d0 = _denominators(rs)
    d0 = lcm(d0, start[1].denominator, start[2].denominator, radius.denominator)
    targets = list(targets)
    for _, tx, ty in targets:
        d0 = lcm(d0, tx.denominator, ty.denominator)
    if transversal is not None:
        tc, th, tx0, tx1 = transversal
        d0 = lcm(d0, th.denominator, tx0.denominator, tx1.denominator)
    if stop_u is not None:
        d0 = lcm(d0, stop_u.denominator)
    den = d0 * max(p, 1) * max(q, 1)
    kappa = max(p, 1) * max(q, 1)
    nrm = p * p + q * q

    def sc(f: Fraction) -> int:
        v = f * den
        assert v.denominator == 1
        return v.numerator

    nch = rs.n_charts
    widths = [sc(w) for w in rs.widths]
    heights = [sc(h) for h in rs.heights]
    right = [[(sc(s.a), sc(s.b), s.chart, sc(s.off)) for s in segs] for segs in rs.right]
    top = [[(sc(s.a), sc(s.b), s.chart, sc(s.off)) for s in segs] for segs in rs.top]
    stops: list[set[tuple[int, int]]] = [set() for _ in range(nch)]
    if stop_at_cones:
        for c, x, y in rs.cones:
            stops[c].add((sc(x), sc(y)))

    copies: dict[int, list[tuple[int, int, int]]] = {}
    r_int = sc(radius)
    r2_line = nrm * r_int * r_int
    for c, tx, ty in targets:
        cx, cy = sc(tx), sc(ty)
        copies.setdefault(c, []).append((cx, cy, q * cx - p * cy))

    # horizon: arc(S) >= L  <=>  S^2 * nrm * Ld^2 >= Ln^2 * (kappa*den)^2
    if horizon is not None:
        hor_lhs_mult = nrm * horizon.denominator**2
        hor_rhs = horizon.numerator**2 * (kappa * den) ** 2
    # min_arc: arc(S) <= m  <=>  S^2 * nrm * md^2 <= mn^2 * (kappa*den)^2
    min_lhs_mult = nrm * min_arc.denominator**2
    min_rhs = min_arc.numerator**2 * (kappa * den) ** 2

    if transversal is not None:
        t_chart, t_y, t_x0, t_x1 = tc, sc(th), sc(tx0), sc(tx1)
    s_stop: Optional[int] = None
    if stop_u is not None:
        v = stop_u * kappa * den
        assert v.denominator == 1
        s_stop = v.numerator

    chart, x, y = start[0], sc(start[1]), sc(start[2])
    if not (0 <= x < widths[chart] and 0 <= y < heights[chart]):
        raise ValueError("start point not in canonical chart position")

    s_total = 0
    slack: Optional[Fraction] = None
    events: list[tuple[int, int, int, int, str]] = []
    n_events = 0

    def note_slack(v: Fraction):
        nonlocal slack
        if slack is None or v < slack:
            slack = v

    while True:
        w, h = widths[chart], heights[chart]
        # S-distance to the right and top edges (S = flow parameter * kappa)
        sx = max(q, 1) * (w - x) if p else None
        sy = max(p, 1) * (h - y) if q else None
        if sx is None:
            ds = sy
        elif sy is None:
            ds = sx
        else:
            ds = sx if sx <= sy else sy
        # clip this visit at the parameter stop, if one is set
        ds_eff = ds if s_stop is None else min(ds, s_stop - s_total)

        # transversal crossing inside this visit
        if transversal is not None and chart == t_chart and y <= t_y:
            s_c = max(p, 1) * (t_y - y)
            if s_c < ds_eff or (s_c == 0 and ds_eff == 0):
                if s_total + s_c > 0:
                    x_c = x + (p * s_c) // kappa if p else x
                    if t_x0 <= x_c < t_x1:
                        note_slack(Fraction(t_x1 - x_c, den))
                        return RunResult(
                            "cross", den, kappa, chart, x_c, t_y,
                            s_total + s_c, events, cross_x=x_c, slack=slack,
                            n_events=n_events,
                        )
                    if x_c < t_x0:
                        note_slack(Fraction(t_x0 - x_c, den))

        # ball entries inside this visit
        if ds_eff > 0 and chart in copies:
            best: Optional[Surd] = None
            phi = q * x - p * y
            for cx, cy, phi_c in copies[chart]:
                delta = phi - phi_c
                if delta * delta >= r2_line:
                    continue
                dx0, dy0 = x - cx, y - cy
                b_half = kappa * (p * dx0 + q * dy0)
                c0 = kappa * kappa * (dx0 * dx0 + dy0 * dy0 - r_int * r_int)
                disc = b_half * b_half - nrm * c0
                if disc <= 0:
                    continue
                s_in = Surd.make(Fraction(-b_half, nrm), Fraction(-1, nrm), disc)
                # entry inside this visit?
                if s_in._cmp(Fraction(ds_eff)) >= 0:
                    continue
                s_g = s_in + Fraction(s_total)
                if s_g.sign() < 0:
                    continue
                # honor arclength > min_arc
                arc_cmp = (s_g * s_g * min_lhs_mult)._cmp(Fraction(min_rhs))
                if arc_cmp <= 0:
                    continue
                if horizon is not None:
                    if (s_g * s_g * hor_lhs_mult)._cmp(Fraction(hor_rhs)) >= 0:
                        continue
                if best is None or s_g._cmp(best) < 0:
                    best = s_g
            if best is not None:
                return RunResult(
                    "hit", den, kappa, chart, x, y, s_total, events,
                    hit_s=best, slack=slack, n_events=n_events,
                )

        # parameter stop inside this visit (horizon wins if it comes first)
        if s_stop is not None and s_stop - s_total <= ds:
            rem = s_stop - s_total
            before_horizon = horizon is None or (
                s_stop * s_stop * hor_lhs_mult < hor_rhs
            )
            if before_horizon:
                assert (p * rem) % kappa == 0 and (q * rem) % kappa == 0
                return RunResult(
                    "param", den, kappa, chart,
                    x + (p * rem) // kappa, y + (q * rem) // kappa,
                    s_stop, events, slack=slack, n_events=n_events,
                )

        # horizon reached before the next boundary event?
        if horizon is not None:
            s_next = s_total + ds
            if s_next * s_next * hor_lhs_mult >= hor_rhs:
                return RunResult(
                    "horizon", den, kappa, chart, x, y, s_total, events,
                    slack=slack, n_events=n_events,
                )

        # advance to the boundary
        s_total += ds
        n_events += 1
        if n_events > max_events:
            return RunResult(
                "cap", den, kappa, chart, x, y, s_total, events,
                slack=slack, n_events=n_events,
            )

        corner = sx is not None and sy is not None and sx == sy
        if corner and not bias:
            # exact corner hit
            if (w, h) in stops[chart]:
                return RunResult(
                    "singular", den, kappa, chart, w, h, s_total, events,
                    slack=slack, n_events=n_events,
                )
            seg = next(s for s in right[chart] if s[1] == h)
            mid_chart, mid_y = seg[2], h + seg[3]
            if mid_y < heights[mid_chart]:
                chart, x, y = mid_chart, 0, mid_y
            else:
                seg2 = next(s for s in top[mid_chart] if s[0] == 0)
                chart, x, y = seg2[2], seg2[3], 0
            if record:
                events.append((s_total, chart, x, y, "corner"))
            continue

        take_x = sx is not None and (sy is None or sx < sy or (corner and bias))
        if take_x:
            y_hit = y + (q * sx) // kappa if q else y
            if not bias:
                if (w, y_hit) in stops[chart]:
                    return RunResult(
                        "singular", den, kappa, chart, w, y_hit, s_total,
                        events, slack=slack, n_events=n_events,
                    )
                seg = next(s for s in right[chart] if s[0] <= y_hit < s[1])
            else:
                seg = next(s for s in right[chart] if s[0] < y_hit <= s[1])
                if p:
                    note_slack(Fraction(p * (y_hit - seg[0]), q * den))
            chart, x, y = seg[2], 0, y_hit + seg[3]
        else:
            x_hit = x + (p * sy) // kappa if p else x
            if not bias and (x_hit, h) in stops[chart]:
                return RunResult(
                    "singular", den, kappa, chart, x_hit, h, s_total, events,
                    slack=slack, n_events=n_events,
                )
            seg = next(s for s in top[chart] if s[0] <= x_hit < s[1])
            if bias:
                note_slack(Fraction(seg[1] - x_hit, den))
            chart, x, y = seg[2], x_hit + seg[3], 0
        if record:
            events.append((s_total, chart, x, y, "right" if take_x else "top"))

# ---------------------------------------------------------------------------
# whole-surface transforms
# ---------------------------------------------------------------------------

def transpose_surface(rs: RectSurface) -> RectSurface:
    """Swap the axes, (x, y) -> (y, x); right tables become top tables."""
    return RectSurface(
        widths=rs.heights,
        heights=rs.widths,
        right=rs.top,
        top=rs.right,
        cones=frozenset((c, y, x) for c, x, y in rs.cones),
        labels=rs.labels,
    )


def reflect_surface(rs: RectSurface) -> RectSurface:
    """Mirror every chart horizontally, (x, y) -> (width - x, y).

    Right tables of the mirror are the old left-edge pieces, and top pieces
    flip inside their edge.  A regular joint between adjacent pieces always
    maps to a chart corner, so the flipped half-open lookup resolves joint
    points to the same surface point through the corner identification.
    """
    n = rs.n_charts
    right = tuple(tuple(rs.left_segs(c)) for c in range(n))
    top = []
    for c in range(n):
        w = rs.widths[c]
        pieces = [
            Seg(w - s.b, w - s.a, s.chart, rs.widths[s.chart] - w - s.off)
            for s in rs.top[c]
        ]
        top.append(tuple(sorted(pieces, key=lambda s: s.a)))
    return RectSurface(
        widths=rs.widths,
        heights=rs.heights,
        right=right,
        top=tuple(top),
        cones=frozenset((c, rs.widths[c] - x, y) for c, x, y in rs.cones),
        labels=rs.labels,
    )


# ---------------------------------------------------------------------------
# horizontal structure: seam walks, cone-to-cone segments, cylinder cores
# ---------------------------------------------------------------------------

def _owned_right_step(rs: RectSurface, c: int, y: Fraction) -> tuple[int, Fraction]:
    """Cross the right edge of chart c at height y onto an owned point.

    At a joint between two gluing pieces the candidate landing on its
    target's top edge is the non-owned duplicate of a corner, so exactly
    one candidate survives the ownership filter.
    """
    cands = []
    for s in rs.right[c]:
        if s.a <= y < s.b or y == s.b:
            y2 = y + s.off
            if 0 <= y2 < rs.heights[s.chart]:
                cands.append((s.chart, y2))
    if len(cands) != 1:
        raise RuntimeError("horizontal step is ambiguous; malformed gluing?")
    return cands[0]


def horizontal_connections(rs: RectSurface, bound: Fraction) -> list[Fraction]:
    """Lengths of rightward cone-to-cone segments, one per source germ.

    Walks the horizontal line from every cone representative that owns a
    rightward ray and stops at the first cone met or once `bound` is
    exceeded.  Each unoriented horizontal connection shows up exactly once.
    """
    by_chart: dict[int, list[tuple[Fraction, Fraction]]] = {}
    for c, x, y in rs.cones:
        by_chart.setdefault(c, []).append((x, y))
    out = []
    for c0, x0, y0 in sorted(rs.cones):
        if x0 >= rs.widths[c0] or y0 >= rs.heights[c0]:
            continue
        c, x, y = c0, x0, y0
        total = Fraction(0)
        guard = 0
        while total <= bound:
            guard += 1
            if guard > 1_000_000:
                raise RuntimeError("horizontal walk budget exhausted")
            ahead = [cx for cx, cy in by_chart.get(c, ()) if cy == y and x < cx]
            if ahead:
                total += min(ahead) - x
                if total <= bound:
                    out.append(total)
                break
            total += rs.widths[c] - x
            c, y = _owned_right_step(rs, c, y)
            x = Fraction(0)
    return sorted(out)


def horizontal_core_lengths(
    rs: RectSurface,
    *,
    step_cap: int = 5000,
    budget: int = 10000,
    max_circ: Optional[Fraction] = None,
) -> set[Fraction]:
    """Circumferences of horizontal cylinders, found by midpoint orbits.

    Follows the horizontal line through midpoints of left-edge intervals
    and widens each closed orbit to the band of parallel leaves crossing
    the same gluing pieces.  Bands of one cylinder may be found separately
    (each reports the true circumference); orbits exceeding step_cap, or
    accumulating more than max_circ when that cap is given, are abandoned,
    so surfaces with non-periodic horizontal leaves yield a best-effort
    subset.
    """
    cone_h: dict[int, set[Fraction]] = {}
    for c, x, y in rs.cones:
        cone_h.setdefault(c, set()).add(y)
    covered: dict[int, list[tuple[Fraction, Fraction]]] = {c: [] for c in range(rs.n_charts)}

    def subtract(c: int, lo: Fraction, hi: Fraction) -> list[tuple[Fraction, Fraction]]:
        gaps = [(lo, hi)]
        for a, b in covered[c]:
            nxt = []
            for g0, g1 in gaps:
                if b <= g0 or g1 <= a:
                    nxt.append((g0, g1))
                    continue
                if g0 < a:
                    nxt.append((g0, a))
                if b < g1:
                    nxt.append((b, g1))
            gaps = nxt
        return gaps

    def explore(c0: int, m: Fraction):
        # returns ('per', circ, dlo, dhi) | ('sing',) | ('cap',)
        c, y = c0, m
        circ = Fraction(0)
        dlo: Optional[Fraction] = None
        dhi: Optional[Fraction] = None
        for _ in range(step_cap):
            if any(cy == y for cy in cone_h.get(c, ())):
                return ("sing",)
            segs = [
                s
                for s in rs.right[c]
                if (s.a <= y < s.b or y == s.b)
                and 0 <= y + s.off < rs.heights[s.chart]
            ]
            if len(segs) != 1:
                raise RuntimeError("horizontal orbit step is ambiguous")
            seg = segs[0]
            lo_m = y - seg.a
            hi_m = seg.b - y
            for cy in cone_h.get(c, ()):
                if cy < y:
                    lo_m = min(lo_m, y - cy)
                elif cy > y:
                    hi_m = min(hi_m, cy - y)
            dlo = lo_m if dlo is None else min(dlo, lo_m)
            dhi = hi_m if dhi is None else min(dhi, hi_m)
            circ += rs.widths[c]
            if max_circ is not None and circ > max_circ:
                return ("cap",)
            c, y = seg.chart, y + seg.off
            if (c, y) == (c0, m):
                return ("per", circ, dlo, dhi)
        return ("cap",)

    out: set[Fraction] = set()
    work: list[tuple[int, Fraction, Fraction]] = []
    for c in range(rs.n_charts):
        cuts = sorted({Fraction(0), rs.heights[c]} | cone_h.get(c, set()))
        for a, b in zip(cuts, cuts[1:]):
            if a < b:
                work.append((c, a, b))
    spent = 0
    while work and spent < budget:
        c, lo, hi = work.pop()
        for g0, g1 in subtract(c, lo, hi):
            if g0 >= g1:
                continue
            spent += 1
            m = (g0 + g1) / 2
            res = explore(c, m)
            if res[0] == "cap":
                continue
            if res[0] == "sing":
                work.append((c, g0, m))
                work.append((c, m, g1))
                continue
            _, circ, dlo, dhi = res
            out.add(circ)
            if dlo + dhi > 0:
                # replay the orbit to mark the whole band as covered
                cc, yy = c, m
                while True:
                    covered[cc].append((yy - dlo, yy + dhi))
                    cc, yy = _owned_right_step(rs, cc, yy)
                    if (cc, yy) == (c, m):
                        break
                if g0 < m - dlo:
                    work.append((c, g0, m - dlo))
                if m + dhi < g1:
                    work.append((c, m + dhi, g1))
            else:
                work.append((c, g0, m))
                work.append((c, m, g1))
    return out


# ---------------------------------------------------------------------------
# bounded saddle-connection enumeration
# ---------------------------------------------------------------------------

def _quadrant_connections(
    rs: RectSurface, bx: Fraction, by: Fraction, max_copies: int
) -> list[tuple[Fraction, Fraction]]:
    """Connections with both holonomy parts strictly positive, re<=bx, im<=by."""
    by_chart: dict[int, list[tuple[Fraction, Fraction]]] = {}
    for c, x, y in rs.cones:
        by_chart.setdefault(c, []).append((x, y))
    out: list[tuple[Fraction, Fraction]] = []
    for c0, x0, y0 in sorted(rs.cones):
        if x0 >= rs.widths[c0] or y0 >= rs.heights[c0]:
            continue
        dirs: set[tuple[int, int]] = set()
        seen = {(c0, -x0, -y0)}
        stack = [(c0, -x0, -y0)]
        while stack:
            c, ox, oy = stack.pop()
            w, h = rs.widths[c], rs.heights[c]
            if ox > bx or ox + w < 0 or oy > by or oy + h < 0:
                continue
            for cx, cy in by_chart.get(c, ()):
                px, py = ox + cx, oy + cy
                if 0 < px <= bx and 0 < py <= by:
                    dd = lcm(px.denominator, py.denominator)
                    ip, iq = int(px * dd), int(py * dd)
                    g = gcd(ip, iq)
                    dirs.add((ip // g, iq // g))
            grow = []
            for s in rs.right[c]:
                grow.append((s.chart, ox + w, oy - s.off))
            for s in rs.left_segs(c):
                grow.append((s.chart, ox - rs.widths[s.chart], oy - s.off))
            for s in rs.top[c]:
                grow.append((s.chart, ox - s.off, oy + h))
            for s in rs.bottom_segs(c):
                grow.append((s.chart, ox - s.off, oy - rs.heights[s.chart]))
            for cand in grow:
                if cand not in seen:
                    seen.add(cand)
                    stack.append(cand)
            if len(seen) > max_copies:
                raise RuntimeError("connection search window has too many copies")
        for ip, iq in sorted(dirs):
            res = run_flow(rs, ip, iq, (c0, x0, y0), horizon=bx + by + 1)
            if res.status == "singular":
                u = Fraction(res.s_total, res.kappa * res.den)
                re, im = ip * u, iq * u
                if 0 < re <= bx and 0 < im <= by:
                    out.append((re, im))
    return out


def saddle_connections_bounded(
    rs: RectSurface, bx: Fraction, by: Fraction, *, max_copies: int = 20000
) -> list[tuple[Fraction, Fraction]]:
    """Holonomies of saddle connections in the upper band |re|<=bx, 0<=im<=by.

    One entry per unoriented connection: slanted ones are found by flowing
    from every cone germ toward candidate cone images of a developed chart
    window, horizontal and vertical ones by exact seam walks.  The result
    is sorted and keeps multiplicity.
    """
    out: list[tuple[Fraction, Fraction]] = []
    for re_h in horizontal_connections(rs, bx):
        out.append((re_h, Fraction(0)))
    for im_v in horizontal_connections(transpose_surface(rs), by):
        out.append((Fraction(0), im_v))
    for sign in (1, -1):
        surf = rs if sign == 1 else reflect_surface(rs)
        for re, im in _quadrant_connections(surf, bx, by, max_copies):
            out.append((sign * re, im))
    return sorted(out)
