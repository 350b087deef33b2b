"""Billiards in an L-shaped table: exact reflections and unfolding.

The table L(a, a', b, b') is the rectangle [0, a] x [0, b] minus the open
block (a', a) x (b', b).  Reflections off its six sides flip one sign of
the direction, so every trajectory is a single straight line watched
through the four sign sheets; pasting the four sign copies of the table
into a cross and gluing opposite sides yields a genus-two translation
surface with one cone of angle 6*pi, square-tiled once the sides are
scaled to a common integer model.  Directions follow the flow convention:
slope alpha = p/q rides the vector (p, q) and slope 0 points straight up.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from math import gcd
from typing import Optional, Sequence, Union

from .exact import SqrtSurd, Surd, format_frac, log_fraction, parse_frac
from .flow import ConeHit, HittingRecord, SlopeLike, _as_direction
from .surface import ChartPoint, Origami, make_origami

Point = tuple[Fraction, Fraction]
Sheet = tuple[int, int]

SHEETS: tuple[Sheet, ...] = ((1, 1), (-1, 1), (1, -1), (-1, -1))


def sheet_apply(sheet: Sheet, x, y) -> Point:
    return (sheet[0] * Fraction(x), sheet[1] * Fraction(y))


def sheet_compose(s: Sheet, t: Sheet) -> Sheet:
    return (s[0] * t[0], s[1] * t[1])


def direction_sheet(dx: int, dy: int) -> Sheet:
    """The sign flip carrying (dx, dy) to the closed first quadrant."""
    return (-1 if dx < 0 else 1, -1 if dy < 0 else 1)


@dataclass(frozen=True)
class LShape:
    """Table with outer corner (a, b) notched above and right of (a', b')."""

    a: Fraction
    a_inner: Fraction
    b: Fraction
    b_inner: Fraction

    def __init__(self, a, a_inner, b, b_inner):
        object.__setattr__(self, "a", Fraction(a))
        object.__setattr__(self, "a_inner", Fraction(a_inner))
        object.__setattr__(self, "b", Fraction(b))
        object.__setattr__(self, "b_inner", Fraction(b_inner))
        if not 0 < self.a_inner < self.a:
            raise ValueError("need 0 < a_inner < a")
        if not 0 < self.b_inner < self.b:
            raise ValueError("need 0 < b_inner < b")

    @property
    def area(self) -> Fraction:
        return self.a * self.b_inner + self.a_inner * (self.b - self.b_inner)

    @property
    def vertices(self) -> tuple[Point, ...]:
        z = Fraction(0)
        return (
            (z, z),
            (self.a, z),
            (self.a, self.b_inner),
            (self.a_inner, self.b_inner),
            (self.a_inner, self.b),
            (z, self.b),
        )

    @property
    def cone_corner(self) -> Point:
        return (self.a_inner, self.b_inner)

    def contains(self, x, y) -> bool:
        x, y = Fraction(x), Fraction(y)
        if not (0 <= x <= self.a and 0 <= y <= self.b):
            return False
        return x <= self.a_inner or y <= self.b_inner

    def integer_model(self) -> tuple[int, "LShape"]:
        """Scale factor k and the table with all four sides k-times larger,
        integral; the smallest such k."""
        k = 1
        for v in (self.a, self.a_inner, self.b, self.b_inner):
            k = k * v.denominator // gcd(k, v.denominator)
        return k, LShape(k * self.a, k * self.a_inner, k * self.b, k * self.b_inner)


def lshape_to_json(shape: LShape) -> str:
    return json.dumps(
        {
            "a": format_frac(shape.a),
            "a'": format_frac(shape.a_inner),
            "b": format_frac(shape.b),
            "b'": format_frac(shape.b_inner),
        }
    )


def lshape_from_json(text: str) -> LShape:
    blob = json.loads(text)
    return LShape(
        parse_frac(blob["a"]),
        parse_frac(blob["a'"]),
        parse_frac(blob["b"]),
        parse_frac(blob["b'"]),
    )


@dataclass(frozen=True)
class BilliardState:
    """Position in the table plus the sign sheet of the current direction."""

    x: Fraction
    y: Fraction
    sheet: Sheet = (1, 1)

    def __init__(self, x, y, sheet: Sheet = (1, 1)):
        object.__setattr__(self, "x", Fraction(x))
        object.__setattr__(self, "y", Fraction(y))
        object.__setattr__(self, "sheet", (int(sheet[0]), int(sheet[1])))
        if self.sheet not in SHEETS:
            raise ValueError("sheet must be a pair of signs")


# ---------------------------------------------------------------------------
# reflective tracing
# ---------------------------------------------------------------------------

def _walls(shape: LShape):
    # (axis, level, lo, hi, approach sign of d[axis])
    z = Fraction(0)
    return (
        (0, z, z, shape.b, -1),
        (0, shape.a, z, shape.b_inner, 1),
        (0, shape.a_inner, shape.b_inner, shape.b, 1),
        (1, z, z, shape.a, -1),
        (1, shape.b, z, shape.a_inner, 1),
        (1, shape.b_inner, shape.a_inner, shape.a, 1),
    )


def _next_reflection(shape, x, y, dx, dy):
    """Earliest wall event from (x, y) along (dx, dy): (u, point, flips).

    flips is the pair of direction signs to toggle; both toggle on a corner
    hit.  Raises if the ray escapes, which only a boundary start aimed
    outward can produce.
    """
    pos = (x, y)
    d = (dx, dy)
    best_u: Optional[Fraction] = None
    hits: list[tuple[int, Fraction]] = []
    for axis, level, lo, hi, sign in _walls(shape):
        if d[axis] == 0 or (1 if d[axis] > 0 else -1) != sign:
            continue
        u = Fraction(level - pos[axis], d[axis])
        if u <= 0:
            continue
        other = pos[1 - axis] + u * d[1 - axis]
        if not lo <= other <= hi:
            continue
        if best_u is None or u < best_u:
            best_u, hits = u, [(axis, other)]
        elif u == best_u:
            hits.append((axis, other))
    if best_u is None:
        raise ValueError("ray escapes the table; boundary start aimed outward")
    axis0, other0 = hits[0]
    point = (other0, pos[1] + best_u * d[1]) if axis0 == 1 else (pos[0] + best_u * d[0], other0)
    if axis0 == 1:
        point = (other0, pos[1] + best_u * dy)
    else:
        point = (pos[0] + best_u * dx, other0)
    flips = [False, False]
    for axis, _ in hits:
        flips[axis] = True
    if point in shape.vertices:
        flips = [True, True]
    return best_u, point, (flips[0], flips[1])


def _inward(shape, x, y, dx, dy):
    """Flip outward-pointing components of a boundary start."""
    if x == 0 and dx < 0:
        dx = -dx
    if y == 0 and dy < 0:
        dy = -dy
    if dx > 0 and (x == shape.a or (x == shape.a_inner and y >= shape.b_inner)):
        dx = -dx
    if dy > 0 and (y == shape.b or (y == shape.b_inner and x >= shape.a_inner)):
        dy = -dy
    return dx, dy


@dataclass(frozen=True)
class BilliardPath:
    """Exact reflected polyline; `status` is 'horizon' or 'vertex'.

    points[0] is the start; later entries are wall hits with arclength at
    most the horizon.  On a vertex hit the offending vertex is the last
    point and `vertex` repeats it.
    """

    points: tuple[Point, ...]
    directions: tuple[tuple[int, int], ...]
    status: str
    vertex: Optional[Point]
    u_total: Fraction
    speed_sq: int

    @property
    def length_sq(self) -> Fraction:
        return self.u_total * self.u_total * self.speed_sq


def simulate_billiard(
    shape: LShape,
    start: Point,
    direction: tuple[int, int],
    horizon,
    *,
    max_reflections: int = 100_000,
) -> BilliardPath:
    """Reflect a ray until its arclength passes `horizon` or a vertex stops it.

    The start must not be a vertex; a boundary start aimed outward is
    reflected inward first.  Wall hits whose arclength is exactly the
    horizon are still reported.
    """
    x, y = Fraction(start[0]), Fraction(start[1])
    if not shape.contains(x, y):
        raise ValueError("start point outside the table")
    if (x, y) in shape.vertices:
        raise ValueError("cannot start a billiard path on a vertex")
    dx, dy = int(direction[0]), int(direction[1])
    if dx == 0 and dy == 0:
        raise ValueError("direction must be nonzero")
    g = gcd(abs(dx), abs(dy))
    dx, dy = dx // g, dy // g
    dx, dy = _inward(shape, x, y, dx, dy)
    horizon = Fraction(horizon)
    nrm = dx * dx + dy * dy
    pts = [(x, y)]
    dirs = [(dx, dy)]
    u_total = Fraction(0)
    for _ in range(max_reflections):
        u, point, flips = _next_reflection(shape, x, y, dx, dy)
        u_next = u_total + u
        if u_next * u_next * nrm > horizon * horizon:
            return BilliardPath(tuple(pts), tuple(dirs), "horizon", None, u_total, nrm)
        pts.append(point)
        u_total = u_next
        if point in shape.vertices:
            return BilliardPath(tuple(pts), tuple(dirs), "vertex", point, u_total, nrm)
        x, y = point
        dx = -dx if flips[0] else dx
        dy = -dy if flips[1] else dy
        dirs.append((dx, dy))
    raise RuntimeError("reflection cap exhausted; shorten the horizon")


def path_to_csv(path: BilliardPath) -> str:
    lines = ["x,y"]
    for x, y in path.points:
        lines.append(f"{format_frac(x)},{format_frac(y)}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# hitting queries through the sign sheets
# ---------------------------------------------------------------------------

def _cross_wall_segments(shape: LShape):
    """Outer walls of the cross with their pasting translations."""
    a, a1, b, b1 = shape.a, shape.a_inner, shape.b, shape.b_inner
    segs = []
    for sx in (1, -1):
        segs.append((0, sx * a, -b1, b1, (-2 * sx * a, Fraction(0))))
        segs.append((0, sx * a1, b1, b, (-2 * sx * a1, Fraction(0))))
        segs.append((0, sx * a1, -b, -b1, (-2 * sx * a1, Fraction(0))))
    for sy in (1, -1):
        segs.append((1, sy * b, -a1, a1, (Fraction(0), -2 * sy * b)))
        segs.append((1, sy * b1, a1, a, (Fraction(0), -2 * sy * b1)))
        segs.append((1, sy * b1, -a, -a1, (Fraction(0), -2 * sy * b1)))
    return segs


def _disk_meets_segment(cx, cy, r2, axis, level, lo, hi) -> bool:
    d_perp = (cx - level) if axis == 0 else (cy - level)
    t = cy if axis == 0 else cx
    t = min(max(t, lo), hi)
    d_par = (cy - t) if axis == 0 else (cx - t)
    return d_perp * d_perp + d_par * d_par < r2


def _ball_copies_cross(shape: LShape, center: Point, r: Fraction) -> list[Point]:
    """Plane centers whose r-disk piece inside the cross is part of the
    surface ball; the center itself plus pasting translations, closed under
    composition."""
    r2 = r * r
    segs = _cross_wall_segments(shape)
    seen = {center}
    stack = [center]
    out = []
    while stack:
        c = stack.pop()
        cx, cy = c
        if cx - r > shape.a or cx + r < -shape.a or cy - r > shape.b or cy + r < -shape.b:
            continue
        out.append(c)
        for axis, level, lo, hi, (tx, ty) in segs:
            if _disk_meets_segment(cx, cy, r2, axis, level, lo, hi):
                cand = (cx + tx, cy + ty)
                if cand not in seen:
                    seen.add(cand)
                    stack.append(cand)
    return out


def _fold_to_cross(shape: LShape, state: BilliardState) -> Point:
    if not shape.contains(state.x, state.y):
        raise ValueError("state position outside the table")
    return sheet_apply(state.sheet, state.x, state.y)


def billiard_hitting_time(
    shape: LShape,
    slope: SlopeLike,
    start: BilliardState,
    target: BilliardState,
    r,
    *,
    horizon=None,
    max_events: int = 5_000_000,
) -> HittingRecord:
    """First arclength beyond r at which the reflected orbit of `start`
    enters the radius-r ball of `target`, sheets included.

    The ball lives on the unfolded surface: the orbit is traced by exact
    reflections in the table while its straight image is tested against
    the target's plane copies, so right-angle corners retroreflect (the
    straight line passes a regular point there) and only the notch corner
    is singular.  Equality with the square-tiled engine is exact.
    """
    p, q, _ = _as_direction(slope)
    r = Fraction(r)
    if r <= 0:
        raise ValueError("radius must be positive")
    horizon = None if horizon is None else Fraction(horizon)
    z0 = _fold_to_cross(shape, start)
    zt = _fold_to_cross(shape, target)
    a1, b1 = shape.a_inner, shape.b_inner
    if (abs(z0[0]), abs(z0[1])) == (a1, b1):
        raise ValueError("cannot flow from the notch corner")
    copies = _ball_copies_cross(shape, zt, r)
    cones = [(sx * a1, sy * b1) for sx in (1, -1) for sy in (1, -1)]
    safety = min(
        (cx - ex) ** 2 + (cy - ey) ** 2 for cx, cy in copies for ex, ey in cones
    )
    if 4 * r * r >= safety:
        raise ValueError("radius at or above the safety radius of the target")
    if z0 != zt:
        for cx, cy in _ball_copies_cross(shape, zt, 2 * r):
            if (z0[0] - cx) ** 2 + (z0[1] - cy) ** 2 <= 4 * r * r:
                raise ValueError("start and target closer than 2r; no clean hit clause")

    nrm = p * p + q * q
    r2_line = nrm * r * r
    # precompute line offsets of the copies for the transversality prefilter
    marks = [(cx, cy, q * cx - p * cy) for cx, cy in copies]

    x, y = start.x, start.y
    dx, dy = start.sheet[0] * p, start.sheet[1] * q
    dx, dy = _inward(shape, x, y, dx, dy)
    u_total = Fraction(0)
    n_events = 0
    cone = shape.cone_corner
    while True:
        u_seg, point, flips = _next_reflection(shape, x, y, dx, dy)
        sx = 1 if dx >= 0 else -1
        sy = 1 if dy >= 0 else -1
        zx, zy = sx * x, sy * y
        phi = q * zx - p * zy
        best: Optional[Surd] = None
        for cx, cy, phi_c in marks:
            delta = phi - phi_c
            if delta * delta >= r2_line:
                continue
            dx0, dy0 = zx - cx, zy - cy
            b_half = p * dx0 + q * dy0
            c0 = dx0 * dx0 + dy0 * dy0 - r * r
            disc = b_half * b_half - nrm * c0
            if disc.numerator <= 0:
                continue
            dn, dd = disc.numerator, disc.denominator
            u_in = Surd.make(
                Fraction(-b_half, nrm), Fraction(-1, nrm * dd), dn * dd
            )
            if u_in._cmp(u_seg) >= 0:
                continue
            u_g = u_in + u_total
            if u_g.sign() < 0:
                continue
            if (u_g * u_g * nrm)._cmp(r * r) <= 0:
                continue
            if horizon is not None and (u_g * u_g * nrm)._cmp(horizon * horizon) >= 0:
                continue
            if best is None or u_g._cmp(best) < 0:
                best = u_g
        if best is not None:
            big_r = SqrtSurd.of_square(best * best * nrm)
            exponent = big_r.log() / -log_fraction(r) if r < 1 else None
            return HittingRecord(r, True, big_r, exponent, horizon, None, n_events)
        u_next = u_total + u_seg
        if horizon is not None and u_next * u_next * nrm >= horizon * horizon:
            lower = (
                log_fraction(horizon) / -log_fraction(r)
                if r < 1 and horizon > 1
                else None
            )
            return HittingRecord(r, False, None, None, horizon, lower, n_events)
        if point == cone:
            t = float(u_next) * math.sqrt(nrm)
            raise ConeHit(f"orbit hit the notch corner at time {t:.6g} before resolving")
        u_total = u_next
        x, y = point
        dx = -dx if flips[0] else dx
        dy = -dy if flips[1] else dy
        n_events += 1
        if n_events > max_events:
            raise RuntimeError("event cap exhausted; raise max_events or set a horizon")


# ---------------------------------------------------------------------------
# unfolding to a square-tiled surface
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class UnfoldedBilliard:
    """Square-tiled unfolding of an L-shaped table.

    Squares are the unit cells of the cross of the integer model, listed
    bottom-to-top then left-to-right; `scale` converts table lengths to
    surface lengths.  Point maps are mutually inverse off the gluing seams.
    """

    shape: LShape
    origami: Origami
    scale: int
    cells: tuple[tuple[int, int], ...]

    @cached_property
    def _index(self) -> dict[tuple[int, int], int]:
        return {cell: k for k, cell in enumerate(self.cells)}

    @cached_property
    def _model(self) -> LShape:
        return self.shape.integer_model()[1]

    def _wrap(self, zx: Fraction, zy: Fraction) -> tuple[int, int, Fraction, Fraction]:
        m = self._model
        A, A1, B, B1 = int(m.a), int(m.a_inner), int(m.b), int(m.b_inner)
        for _ in range(4):
            i, j = math.floor(zx), math.floor(zy)
            if (i, j) in self._index:
                return i, j, zx - i, zy - j
            if zx == A or (zx == A1 and not -B1 <= j < B1):
                zx = -zx
                continue
            if zx == -A or (zx == -A1 and not -B1 <= j < B1 and math.floor(zx) < -A1):
                zx = -zx
                continue
            if zy == B or (zy == B1 and not -A1 <= i < A1):
                zy = -zy
                continue
            if zy == -B or (zy == -B1 and not -A1 <= i < A1 and math.floor(zy) < -B1):
                zy = -zy
                continue
            break
        raise ValueError("point does not lie on the unfolded surface")

    def to_surface(self, state: BilliardState) -> ChartPoint:
        zx, zy = _fold_to_cross(self.shape, state)
        i, j, fx, fy = self._wrap(self.scale * zx, self.scale * zy)
        return ChartPoint(self._index[(i, j)], fx, fy)

    def to_billiard(self, point: ChartPoint) -> BilliardState:
        i, j = self.cells[point.square]
        zx, zy = i + point.x, j + point.y
        sheet = (1 if 2 * i + 1 > 0 else -1, 1 if 2 * j + 1 > 0 else -1)
        return BilliardState(abs(zx) / self.scale, abs(zy) / self.scale, sheet)


def unfold(shape: LShape) -> UnfoldedBilliard:
    """Cross of the four sign copies with opposite sides pasted.

    The result has 4 * area(L) unit squares in the integer model and a
    single cone of angle 6*pi (stratum H(2)).
    """
    k, m = shape.integer_model()
    A, A1, B, B1 = int(m.a), int(m.a_inner), int(m.b), int(m.b_inner)

    def row_span(j: int) -> int:
        return A if -B1 <= j < B1 else A1

    def col_span(i: int) -> int:
        return B if -A1 <= i < A1 else B1

    cells = [
        (i, j)
        for j in range(-B, B)
        for i in range(-row_span(j), row_span(j))
        if -B1 <= j < B1 or -A1 <= i < A1
    ]
    index = {cell: n for n, cell in enumerate(cells)}
    right = []
    up = []
    for i, j in cells:
        w = row_span(j)
        right.append(index[(i + 1 if i + 1 < w else -w, j)])
        h = col_span(i)
        up.append(index[(i, j + 1 if j + 1 < h else -h)])
    origami = make_origami(tuple(right), tuple(up))
    return UnfoldedBilliard(shape, origami, k, tuple(cells))


# ---------------------------------------------------------------------------
# generalized diagonals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GeneralizedDiagonal:
    """Vertex-to-vertex reflected segment with its planar development."""

    points: tuple[Point, ...]
    hol: Point

    @property
    def start(self) -> Point:
        return self.points[0]

    @property
    def end(self) -> Point:
        return self.points[-1]

    @property
    def length_sq(self) -> Fraction:
        return self.hol[0] ** 2 + self.hol[1] ** 2


def _cross_special_points(m: LShape) -> list[Point]:
    pts = set()
    for vx, vy in m.vertices:
        for sheet in SHEETS:
            pts.add(sheet_apply(sheet, vx, vy))
    return sorted(pts)


def _cross_advance(m: LShape, zx, zy, p, q):
    """Next pasting event from (zx, zy) along (p, q) >= 0 inside the cross:
    (u, exit point, wrapped point)."""
    best = None
    for axis, level, lo, hi, _tr in _cross_wall_segments(m):
        d = p if axis == 0 else q
        if d <= 0:
            continue
        cur = zx if axis == 0 else zy
        if level <= cur:
            continue
        u = Fraction(level - cur, d)
        other = (zy + u * q) if axis == 0 else (zx + u * p)
        if not lo <= other <= hi:
            continue
        if best is None or u < best[0]:
            best = (u, axis, level, other)
    if best is None:
        raise ValueError("ray escapes the cross")
    u, axis, level, other = best
    if axis == 0:
        exit_pt = (level, other)
    else:
        exit_pt = (other, level)
    wx, wy = exit_pt
    # wrap every outer wall the exit point lies on (two at a cross corner)
    if abs(wx) == m.a or (abs(wx) == m.a_inner and abs(wy) >= m.b_inner):
        wx = -wx
    if abs(wy) == m.b or (abs(wy) == m.b_inner and abs(wx) >= m.a_inner):
        wy = -wy
    return u, exit_pt, (wx, wy)


def _fold_segment(zx, zy, p, q, u_end):
    """Reflection points of the folded image of one straight cross segment:
    the axis crossings, strictly inside the segment."""
    cuts = []
    if p and zx < 0 < zx + u_end * p:
        cuts.append(Fraction(-zx, p))
    if q and zy < 0 < zy + u_end * q:
        cuts.append(Fraction(-zy, q))
    return [
        (abs(zx + u * p), abs(zy + u * q)) for u in sorted(cuts)
    ]


def generalized_diagonals(shape: LShape, bound) -> tuple[GeneralizedDiagonal, ...]:
    """Vertex-to-vertex billiard segments of length at most `bound`.

    Traced as straight chords of the unfolded cross between images of the
    table's vertices (the cone among them), then folded back to reflected
    paths; each unoriented segment appears once.
    """
    bound = Fraction(bound)
    if bound <= 0:
        raise ValueError("length bound must be positive")
    k, m = shape.integer_model()
    bound_sq = bound * bound * k * k
    specials = _cross_special_points(m)
    special_set = set(specials)
    found: dict[tuple[Point, ...], GeneralizedDiagonal] = {}
    dirs = [(0, 1), (1, 0)]
    top = math.isqrt(int(bound_sq)) + 1
    for p in range(1, top + 1):
        for q in range(1, top + 1):
            if p * p + q * q <= bound_sq and gcd(p, q) == 1:
                dirs.append((p, q))
    for start in specials:
        for p, q in dirs:
            _trace_diagonal(m, k, start, p, q, bound_sq, special_set, found)
    return tuple(
        sorted(found.values(), key=lambda d: (d.length_sq, d.hol, d.points))
    )


def _trace_diagonal(m, k, start, p, q, bound_sq, special_set, found):
    nrm = p * p + q * q
    zx, zy = start
    # enter the cross if the start sits on an outgoing wall or corner
    if zx == m.a or (zx == m.a_inner and abs(zy) >= m.b_inner):
        zx = -zx
    if zy == m.b or (zy == m.b_inner and abs(zx) >= m.a_inner):
        zy = -zy
    u_total = Fraction(0)
    folded = [(abs(zx), abs(zy))]
    for _ in range(10_000):
        u_seg, exit_pt, wrapped = _cross_advance(m, zx, zy, p, q)
        # earliest interior special point of this segment, the exit included
        hit_u = None
        for wx, wy in special_set:
            if p:
                u = Fraction(wx - zx, p)
                if not 0 < u <= u_seg or zy + u * q != wy:
                    continue
            else:
                if wx != zx:
                    continue
                u = Fraction(wy - zy, q)
                if not 0 < u <= u_seg:
                    continue
            if hit_u is None or u < hit_u:
                hit_u = u
        if hit_u is not None:
            u_end = u_total + hit_u
            if u_end * u_end * nrm > bound_sq:
                return
            folded.extend(_fold_segment(zx, zy, p, q, hit_u))
            folded.append((abs(zx + hit_u * p), abs(zy + hit_u * q)))
            pts = tuple(
                (Fraction(x, k), Fraction(y, k)) for x, y in _dedup(folded)
            )
            key = min(pts, key=None) and min((pts, tuple(reversed(pts))))
            if key not in found:
                hol = (Fraction(u_end * p, k), Fraction(u_end * q, k))
                found[key] = GeneralizedDiagonal(pts if key == pts else tuple(reversed(pts)), hol)
            return
        u_next = u_total + u_seg
        if u_next * u_next * nrm > bound_sq:
            return
        folded.extend(_fold_segment(zx, zy, p, q, u_seg))
        folded.append((abs(exit_pt[0]), abs(exit_pt[1])))
        zx, zy = wrapped
        u_total = u_next
    raise RuntimeError("diagonal trace did not terminate")


def _dedup(points):
    out = [points[0]]
    for pt in points[1:]:
        if pt != out[-1]:
            out.append(pt)
    return out


def billiard_diophantine_type(shape: LShape, slope: SlopeLike, bound) -> float:
    """Finite-bound diophantine type of a direction from its diagonals.

    Largest exponent w with |re| < im**-w over enumerated diagonals, re and
    im being the development's coordinates in the frame of the direction;
    for commensurable sides this tracks the continued-fraction type of the
    slope.
    """
    p, q, _ = _as_direction(slope)
    nrm = p * p + q * q
    root = math.sqrt(nrm)
    best = 1.0
    for diag in generalized_diagonals(shape, bound):
        hx, hy = diag.hol
        im = (p * hx + q * hy) / root
        re = (q * hx - p * hy) / root
        if im > 1 and re != 0:
            w = -math.log(abs(re)) / math.log(im)
            best = max(best, w)
    return best
