"""Square-tiled surfaces: combinatorics, SL(2,Z) action, cylinders.

An origami is a pair of permutations (right, up) of {0..n-1} generating a
transitive group: square s has square right[s] across its right edge and
up[s] across its top edge.  All gluings are by translation, so the shape
data is purely combinatorial and everything here is exact integer work.

The generator action on surfaces is
    T.(right, up) = (right, up o right^-1)
    V.(right, up) = (right o up^-1, up)
with composition (f o g)(x) = f(g(x)), and for an alternating word
g(a_1, .., a_n) = V^{a_1} T^{a_2} V^{a_3} ... the LAST factor acts first.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional, Sequence

from .cfrac import MAT_T, MAT_V, Mat2, Word

Perm = tuple[int, ...]


# ---------------------------------------------------------------------------
# permutation helpers
# ---------------------------------------------------------------------------

def perm_check(p: Sequence[int]) -> Perm:
    p = tuple(int(x) for x in p)
    if sorted(p) != list(range(len(p))):
        raise ValueError("not a permutation of 0..n-1")
    return p


def perm_compose(f: Perm, g: Perm) -> Perm:
    """(f o g)(x) = f(g(x))."""
    return tuple(f[g[x]] for x in range(len(f)))


def perm_inv(f: Perm) -> Perm:
    out = [0] * len(f)
    for i, j in enumerate(f):
        out[j] = i
    return tuple(out)


def perm_pow(f: Perm, k: int) -> Perm:
    n = len(f)
    if k < 0:
        return perm_pow(perm_inv(f), -k)
    out = tuple(range(n))
    base = f
    while k:
        if k & 1:
            out = perm_compose(base, out)
        base = perm_compose(base, base)
        k >>= 1
    return out


def perm_cycles(f: Perm) -> list[tuple[int, ...]]:
    seen = [False] * len(f)
    cycles = []
    for start in range(len(f)):
        if seen[start]:
            continue
        cyc = [start]
        seen[start] = True
        x = f[start]
        while x != start:
            seen[x] = True
            cyc.append(x)
            x = f[x]
        cycles.append(tuple(cyc))
    return cycles


def _is_transitive(right: Perm, up: Perm) -> bool:
    n = len(right)
    seen = [False] * n
    stack = [0]
    seen[0] = True
    count = 1
    while stack:
        s = stack.pop()
        for t in (right[s], up[s]):
            if not seen[t]:
                seen[t] = True
                count += 1
                stack.append(t)
    return count == n


# ---------------------------------------------------------------------------
# origami
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Origami:
    right: Perm
    up: Perm

    @property
    def n(self) -> int:
        return len(self.right)

    def __repr__(self):
        return f"Origami(right={self.right}, up={self.up})"


def make_origami(right: Sequence[int], up: Sequence[int]) -> Origami:
    right, up = perm_check(right), perm_check(up)
    if len(right) != len(up):
        raise ValueError("permutation sizes differ")
    if not _is_transitive(right, up):
        raise ValueError("origami is not connected")
    return Origami(right, up)


def origami_to_json(o: Origami) -> str:
    return json.dumps({"n": o.n, "right": list(o.right), "up": list(o.up)})


def origami_from_json(text: str) -> Origami:
    data = json.loads(text)
    o = make_origami(data["right"], data["up"])
    if o.n != data.get("n", o.n):
        raise ValueError("inconsistent square count")
    return o


def torus_origami() -> Origami:
    return make_origami((0,), (0,))


def three_square_origami() -> Origami:
    """Smallest surface with a single cone of angle 6 pi."""
    return make_origami((1, 2, 0), (1, 0, 2))


def quaternion_origami() -> Origami:
    """Eight squares indexed by 1,i,j,k,-1,-i,-j,-k; right = *i, up = *j."""
    right = (1, 4, 7, 2, 5, 0, 3, 6)
    up = (2, 3, 4, 5, 6, 7, 0, 1)
    return make_origami(right, up)


# ---------------------------------------------------------------------------
# vertices and strata
# ---------------------------------------------------------------------------

def commutator(o: Origami) -> Perm:
    """Return map of the counterclockwise walk around a bottom-left corner."""
    r, u = o.right, o.up
    ri, ui = perm_inv(r), perm_inv(u)
    return perm_compose(u, perm_compose(r, perm_compose(ui, ri)))


def vertex_classes(o: Origami) -> list[tuple[int, ...]]:
    """Cycles of the corner walk; a cycle of length l has cone angle 2 pi l."""
    return perm_cycles(commutator(o))


def corner_class_index(o: Origami, square: int, corner: str) -> int:
    """Vertex class of a square corner; corner in {'bl','br','tl','tr'}."""
    if corner == "bl":
        anchor = square
    elif corner == "br":
        anchor = o.right[square]
    elif corner == "tl":
        anchor = o.up[square]
    elif corner == "tr":
        anchor = o.right[o.up[square]]
    else:
        raise ValueError("corner must be one of bl, br, tl, tr")
    for idx, cyc in enumerate(vertex_classes(o)):
        if anchor in cyc:
            return idx
    raise AssertionError("unreachable")


def stratum(o: Origami) -> tuple[int, ...]:
    """Cone orders (angle = 2 pi (k+1)), largest first; () for a torus cover."""
    orders = sorted(
        (len(c) - 1 for c in vertex_classes(o) if len(c) >= 2), reverse=True
    )
    return tuple(orders)


def genus(o: Origami) -> int:
    v = len(vertex_classes(o))
    return 1 + (o.n - v) // 2


def singular_square_set(o: Origami) -> set[int]:
    """Squares whose bottom-left corner is a cone point."""
    out: set[int] = set()
    for cyc in vertex_classes(o):
        if len(cyc) >= 2:
            out.update(cyc)
    return out


def marked_square_set(o: Origami) -> set[int]:
    """Cone squares, or every square when the surface is a torus cover."""
    sing = singular_square_set(o)
    if sing:
        return sing
    return set(range(o.n))


# ---------------------------------------------------------------------------
# SL(2, Z) action
# ---------------------------------------------------------------------------

def act_T(o: Origami, m: int = 1) -> Origami:
    return Origami(o.right, perm_compose(o.up, perm_pow(o.right, -m)))


def act_V(o: Origami, m: int = 1) -> Origami:
    return Origami(perm_compose(o.right, perm_pow(o.up, -m)), o.up)


def apply_gword(word: Sequence[int], o: Origami) -> Origami:
    """g(a_1..a_n).o with the last factor acting first; odd slots are V."""
    for i in range(len(word) - 1, -1, -1):
        if i % 2 == 0:
            o = act_V(o, word[i])
        else:
            o = act_T(o, word[i])
    return o


def gword_matrix(word: Sequence[int]) -> Mat2:
    out = Mat2(1, 0, 0, 1)
    for i, a in enumerate(word):
        out = out * ((MAT_V if i % 2 == 0 else MAT_T) ** a)
    return out


def canonical_form(o: Origami) -> Origami:
    """Lexicographically least relabeling over BFS labelings from each start."""
    n = o.n
    best = None
    for start in range(n):
        label = [-1] * n
        order = [start]
        label[start] = 0
        head = 0
        while head < len(order):
            s = order[head]
            head += 1
            for t in (o.right[s], o.up[s]):
                if label[t] < 0:
                    label[t] = len(order)
                    order.append(t)
        right = [0] * n
        up = [0] * n
        for s in range(n):
            right[label[s]] = label[o.right[s]]
            up[label[s]] = label[o.up[s]]
        enc = (tuple(right), tuple(up))
        if best is None or enc < best:
            best = enc
    return Origami(best[0], best[1])


def origami_iso(a: Origami, b: Origami) -> bool:
    return a.n == b.n and canonical_form(a) == canonical_form(b)


@dataclass
class OrbitGraph:
    vertices: list[Origami]
    # edges[i] = (T_image_index, V_image_index)
    edges: list[tuple[int, int]]
    index: dict[Origami, int] = field(default_factory=dict)

    def size(self) -> int:
        return len(self.vertices)

    def find(self, o: Origami) -> int:
        return self.index[canonical_form(o)]

    def to_dot(self) -> str:
        lines = ["digraph orbit {"]
        for i, (ti, vi) in enumerate(self.edges):
            lines.append(f'  v{i} -> v{ti} [label="T"];')
            lines.append(f'  v{i} -> v{vi} [label="V"];')
        lines.append("}")
        return "\n".join(lines)


def orbit(o: Origami) -> OrbitGraph:
    start = canonical_form(o)
    vertices = [start]
    index = {start: 0}
    edges: list[tuple[int, int]] = []
    head = 0
    while head < len(vertices):
        cur = vertices[head]
        imgs = []
        for mover in (act_T, act_V):
            img = canonical_form(mover(cur))
            if img not in index:
                index[img] = len(vertices)
                vertices.append(img)
            imgs.append(index[img])
        edges.append((imgs[0], imgs[1]))
        head += 1
    return OrbitGraph(vertices, edges, index)


def cusp_widths(o: Origami, bound: Optional[int] = None) -> tuple[int, int]:
    """(h, v): least positive powers with T^h.o ~ o and V^v.o ~ o."""
    base = canonical_form(o)
    limit = bound or 4 * o.n * o.n + 4
    h = v = 0
    cur = o
    for k in range(1, limit + 1):
        cur = act_T(cur)
        if canonical_form(cur) == base:
            h = k
            break
    cur = o
    for k in range(1, limit + 1):
        cur = act_V(cur)
        if canonical_form(cur) == base:
            v = k
            break
    if not h or not v:
        raise RuntimeError("cusp width search exceeded bound")
    return h, v


def connect_word(src: Origami, dst: Origami) -> Word:
    """Even alternating word w with g(w).src isomorphic to dst.

    Entries stay bounded by the orbit size and the length by twice that,
    via run contraction and cusp padding.
    """
    graph = orbit(src)
    n_orb = graph.size()
    start = graph.find(src)
    goal = graph.find(dst)
    # BFS over letters T, V applied on the left
    prev: dict[int, tuple[int, str]] = {start: (-1, "")}
    queue = [start]
    while queue and goal not in prev:
        nxt = []
        for i in queue:
            ti, vi = graph.edges[i]
            for j, letter in ((ti, "T"), (vi, "V")):
                if j not in prev:
                    prev[j] = (i, letter)
                    nxt.append(j)
        queue = nxt
    if goal not in prev:
        raise ValueError("surfaces are not in the same orbit")
    letters = []
    cur = goal
    while cur != start:
        i, letter = prev[cur]
        letters.append(letter)
        cur = i
    # letters currently ordered with the first applied move last
    # g-word slots: odd positions V, even positions T, last factor acts first,
    # so position 1 holds the letter applied last = letters[0]
    runs: list[tuple[str, int]] = []
    for letter in letters:
        if runs and runs[-1][0] == letter:
            runs[-1] = (letter, runs[-1][1] + 1)
        else:
            runs.append((letter, 1))
    h_src, v_src = cusp_widths(src)
    _, v_dst = cusp_widths(dst)
    word: list[int] = []
    if not runs:
        return (v_dst, h_src)
    if runs[0][0] == "T":
        # word must open with a V slot; pad with a power fixing dst
        word.append(v_dst)
    for letter, count in runs:
        word.append(count)
    if len(word) % 2 == 1:
        # word must close with a T slot; pad with a power fixing src
        word.append(h_src)
    return tuple(word)


# ---------------------------------------------------------------------------
# point transport through the affine action
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ChartPoint:
    """A point in square `square` with offsets 0 <= x, y < 1."""

    square: int
    x: Fraction
    y: Fraction

    def __post_init__(self):
        object.__setattr__(self, "x", Fraction(self.x))
        object.__setattr__(self, "y", Fraction(self.y))
        if not (0 <= self.x < 1 and 0 <= self.y < 1):
            raise ValueError("chart offsets must lie in [0,1)")


def point_through_T(o: Origami, m: int, pt: ChartPoint) -> ChartPoint:
    new_x = pt.x + m * pt.y
    k = new_x // 1
    return ChartPoint(perm_pow(o.right, int(k))[pt.square], new_x - k, pt.y)


def point_through_V(o: Origami, m: int, pt: ChartPoint) -> ChartPoint:
    new_y = pt.y + m * pt.x
    k = new_y // 1
    return ChartPoint(perm_pow(o.up, int(k))[pt.square], pt.x, new_y - k)


def transport_point(word: Sequence[int], o: Origami, pt: ChartPoint) -> tuple[Origami, ChartPoint]:
    """Push pt through the affine map of g(word); returns (g(word).o, image)."""
    for i in range(len(word) - 1, -1, -1):
        if i % 2 == 0:
            pt = point_through_V(o, word[i], pt)
            o = act_V(o, word[i])
        else:
            pt = point_through_T(o, word[i], pt)
            o = act_T(o, word[i])
    return o, pt


# ---------------------------------------------------------------------------
# vertical cylinders
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Cylinder:
    """A vertical cylinder: `strips` ordered left to right, aligned by height.

    strips[i][j] is the square at column i, height j (mod the circumference).
    `closed` marks a decomposition with no singular line at all (torus-like
    wrap); then the boundary circles are empty.
    """

    strips: tuple[tuple[int, ...], ...]
    closed: bool

    @property
    def width(self) -> int:
        return len(self.strips)

    @property
    def circumference(self) -> int:
        return len(self.strips[0])

    def area(self) -> int:
        return self.width * self.circumference

    def squares(self) -> set[int]:
        return {s for strip in self.strips for s in strip}


def _aligned_strip(o: Origami, base: int) -> tuple[int, ...]:
    strip = [base]
    cur = o.up[base]
    while cur != base:
        strip.append(cur)
        cur = o.up[cur]
    return tuple(strip)


def vertical_cylinders(o: Origami) -> list[Cylinder]:
    """Vertical cylinder decomposition by merging columns across regular lines."""
    sing = singular_square_set(o)
    cycles = perm_cycles(o.up)
    cyc_of = {}
    for idx, cyc in enumerate(cycles):
        for s in cyc:
            cyc_of[s] = idx

    def line_regular(strip: tuple[int, ...]) -> bool:
        # the line left of `strip`: corners are bottom-left corners of its squares
        return all(s not in sing for s in strip)

    # left_of[idx]: the column strip whose right edges glue to cycle idx's left
    strips = {idx: _aligned_strip(o, min(cyc)) for idx, cyc in enumerate(cycles)}
    merged_left: dict[int, Optional[int]] = {}
    for idx, strip in strips.items():
        if line_regular(strip):
            left_strip = tuple(perm_inv(o.right)[s] for s in strip)
            merged_left[idx] = cyc_of[left_strip[0]]
        else:
            merged_left[idx] = None

    right_of = {v: k for k, v in merged_left.items() if v is not None}
    cylinders = []
    used: set[int] = set()
    for idx in range(len(cycles)):
        if idx in used:
            continue
        # walk to the leftmost strip of this cylinder
        cur = idx
        closed = False
        while merged_left[cur] is not None:
            cur = merged_left[cur]
            if cur == idx:
                closed = True
                break
        chain = [cur]
        used.add(cur)
        while chain[-1] in right_of:
            nxt = right_of[chain[-1]]
            if nxt in used:
                break
            chain.append(nxt)
            used.add(nxt)
        # align strips so that strip i+1 at height j is right of strip i at j
        aligned = [strips[chain[0]]]
        for k in range(1, len(chain)):
            aligned.append(tuple(o.right[s] for s in aligned[-1]))
            if set(aligned[-1]) != set(strips[chain[k]]):
                raise AssertionError("strip alignment broke")
        cylinders.append(Cylinder(tuple(aligned), closed))
    return cylinders


@dataclass(frozen=True)
class SplittingPair:
    """A vertical cylinder C0 with a boundary connection on both of its sides."""

    cylinder: Cylinder
    gamma_squares: tuple[int, ...]  # left edges of these squares form gamma_0
    gamma_len: int
    y_left: int  # height of gamma_0 on the left boundary circle of C0
    y_right: int  # height of gamma_0 on the right boundary circle
    delta0: int  # (y_right - y_left) mod circumference
    width: int
    circumference: int
    has_second_cylinder: bool

    def gcd_ok(self) -> bool:
        from math import gcd

        return gcd(self.width, self.circumference) == 1


def _boundary_chains(o: Origami, cyl: Cylinder) -> list[tuple[tuple[int, ...], int, int]]:
    """Connections lying on both boundary circles of cyl.

    Returns (squares, y_left, y_right) triples: `squares` are the squares of
    the first strip whose left edges form the connection, bottom first;
    y_left / y_right are the heights of its bottom end on the two circles.
    """
    if cyl.closed:
        return []
    sing = singular_square_set(o)
    first = cyl.strips[0]
    last = cyl.strips[-1]
    ell = cyl.circumference
    right_images = {o.right[t]: j for j, t in enumerate(last)}
    common = [j for j in range(ell) if first[j] in right_images]
    if not common:
        return []
    common_set = set(common)
    chains = []
    for j in common:
        # a chain starts where the previous unit segment is absent or split by a cone
        prev_j = (j - 1) % ell
        starts_here = prev_j not in common_set or first[j] in sing
        if not starts_here:
            continue
        squares = [first[j]]
        k = (j + 1) % ell
        while k in common_set and first[k] not in sing and len(squares) < ell:
            squares.append(first[k])
            k = (k + 1) % ell
        # both endpoints must be cone points for a genuine connection
        bottom_sing = first[j] in sing
        top_sing = first[(j + len(squares)) % ell] in sing
        if not (bottom_sing and top_sing):
            continue
        y_left = j
        y_right = right_images[first[j]]
        chains.append((tuple(squares), y_left, y_right))
    return chains


def find_splitting_pair(o: Origami) -> Optional[SplittingPair]:
    """First vertical splitting pair of o, scanning cylinders in order."""
    cyls = vertical_cylinders(o)
    if len(cyls) < 2:
        return None
    for cyl in cyls:
        for squares, y_left, y_right in _boundary_chains(o, cyl):
            glen = len(squares)
            if not 1 <= glen <= cyl.circumference - 1:
                continue
            pair = SplittingPair(
                cylinder=cyl,
                gamma_squares=squares,
                gamma_len=glen,
                y_left=y_left,
                y_right=y_right,
                delta0=(y_right - y_left) % cyl.circumference,
                width=cyl.width,
                circumference=cyl.circumference,
                has_second_cylinder=True,
            )
            if pair.gcd_ok():
                return pair
    return None


def find_splitting_vertex(o: Origami) -> Optional[tuple[Origami, SplittingPair]]:
    """Search the orbit for a vertex carrying a vertical splitting pair."""
    for vert in orbit(o).vertices:
        pair = find_splitting_pair(vert)
        if pair is not None:
            return vert, pair
    return None


def find_one_cylinder_vertex(o: Origami) -> Optional[Origami]:
    """Search the orbit for a vertex that is one vertical cylinder."""
    for vert in orbit(o).vertices:
        if len(vertical_cylinders(vert)) == 1:
            return vert
    return None


# ---------------------------------------------------------------------------
# saddle connections
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Holonomy:
    x: int
    y: int

    def __iter__(self):
        return iter((self.x, self.y))


def direction_to_vertical(o: Origami, p: int, q: int) -> tuple[Origami, Mat2]:
    """Transform o so the primitive direction (p, q) becomes (0, 1).

    Returns (o', M) with o' = M.o and M (p,q)^t = (0,1)^t.
    """
    from math import gcd

    if q < 0 or (q == 0 and p <= 0):
        raise ValueError("need q > 0, or q = 0 with p > 0")
    if gcd(abs(p), q) != 1:
        raise ValueError("direction must be primitive")
    m = Mat2(1, 0, 0, 1)
    cur_p, cur_q = p, q
    cur_o = o
    # subtractive Euclid: T^k maps (p,q) to (p+kq, q), V^k to (p, q+kp)
    while True:
        if cur_q == 0:
            # (1, 0): one V step sends it to (1, 1), then continue
            cur_o = act_V(cur_o, 1)
            m = MAT_V * m
            cur_p, cur_q = 1, 1
            continue
        if cur_p == 0:
            break
        if cur_p < 0 or cur_p >= cur_q:
            k = -(cur_p // cur_q)
            cur_o = act_T(cur_o, k)
            m = (MAT_T**k) * m
            cur_p += k * cur_q
            continue
        # now 0 < p < q: V^{-k} with k = q // p lowers q
        k = cur_q // cur_p
        cur_o = act_V(cur_o, -k)
        m = (MAT_V**-k) * m
        cur_q -= k * cur_p
    if cur_q != 1:
        raise AssertionError("euclid reduction failed")
    return cur_o, m


def _vertical_connection_lengths(o: Origami) -> list[int]:
    """Lengths of vertical saddle connections, marked points included."""
    marked = marked_square_set(o)
    out = []
    for cyc in perm_cycles(o.up):
        strip = _aligned_strip(o, min(cyc))
        ell = len(strip)
        anchors = [j for j in range(ell) if strip[j] in marked]
        if not anchors:
            continue
        for idx, j in enumerate(anchors):
            nxt = anchors[(idx + 1) % len(anchors)]
            length = (nxt - j) % ell
            if length == 0:
                length = ell
            out.append(length)
    return out


def saddle_connections(o: Origami, bound: int) -> list[Holonomy]:
    """Oriented saddle connection holonomies with |x|, |y| <= bound."""
    from math import gcd

    out: list[Holonomy] = []
    for q in range(0, bound + 1):
        for p in range(-bound, bound + 1):
            if q == 0 and p <= 0:
                continue
            if q == 0:
                if p != 1:
                    continue
            elif gcd(abs(p), q) != 1:
                continue
            vert, _ = direction_to_vertical(o, p, q)
            for ell in _vertical_connection_lengths(vert):
                hx, hy = ell * p, ell * q
                if abs(hx) <= bound and abs(hy) <= bound:
                    out.append(Holonomy(hx, hy))
                    out.append(Holonomy(-hx, -hy))
    return out


def _xgcd(a: int, b: int) -> tuple[int, int, int]:
    """(g, u, v) with u*a + v*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def holonomy_lattice_basis(vectors: Iterable[tuple[int, int]]) -> tuple[int, int, int]:
    """Hermite form of the spanned lattice: rows (a, b) and (0, d), 0 <= b < d.

    Degenerate spans return zeros in the missing places.
    """
    from math import gcd

    a = b = d = 0
    for x, y in vectors:
        if x == 0 and y == 0:
            continue
        if a == 0:
            if x != 0:
                a, b = (x, y) if x > 0 else (-x, -y)
            else:
                d = gcd(d, abs(y))
            continue
        # fold (x, y) into rows (a, b), (0, d)
        g, u, v = _xgcd(a, x)
        leftover_y = (a * y - x * b) // g
        a, b = g, u * b + v * y
        d = gcd(d, abs(leftover_y))
    if d:
        b %= d
    return a, b, d


def _square_positions(o: Origami, root: int) -> tuple[list[tuple[int, int]], list[tuple[int, int]]]:
    """Developed positions from a BFS tree plus the non-tree loop defects."""
    n = o.n
    pos: list[Optional[tuple[int, int]]] = [None] * n
    pos[root] = (0, 0)
    queue = [root]
    vectors: list[tuple[int, int]] = []
    while queue:
        s = queue.pop()
        px, py = pos[s]
        for t, step in ((o.right[s], (1, 0)), (o.up[s], (0, 1))):
            tx, ty = px + step[0], py + step[1]
            if pos[t] is None:
                pos[t] = (tx, ty)
                queue.append(t)
            else:
                vectors.append((tx - pos[t][0], ty - pos[t][1]))
    return pos, vectors


def absolute_period_lattice(o: Origami) -> tuple[int, int, int]:
    """Hermite basis of the closed-curve holonomy lattice, via BFS defects."""
    _, vectors = _square_positions(o, 0)
    return holonomy_lattice_basis(vectors)


def period_lattice(o: Origami) -> tuple[int, int, int]:
    """Hermite basis of the lattice of holonomies of paths between cones.

    Closed-curve defects plus cone-to-cone displacements; with no cones at
    all this is just the closed-curve lattice.
    """
    classes = [c for c in vertex_classes(o) if len(c) >= 2]
    root = classes[0][0] if classes else 0
    pos, vectors = _square_positions(o, root)
    for cyc in classes:
        s = cyc[0]
        vectors.append(pos[s])
    return holonomy_lattice_basis(vectors)


def is_reduced(o: Origami) -> bool:
    a, b, d = period_lattice(o)
    return a == 1 and d == 1


def rotate_half_turn(o: Origami) -> Origami:
    """The surface rotated by pi (the -identity action)."""
    return Origami(perm_inv(o.right), perm_inv(o.up))


def act_matrix(o: Origami, m: Mat2) -> Origami:
    """Apply any determinant-one integer matrix via a generator factorization."""
    if m.det() != 1:
        raise ValueError("matrix must have determinant one")
    # peel factors off the left: record F, continue with F^-1 * M
    factors: list[tuple[str, int]] = []
    a, b, c, d = m.a, m.b, m.c, m.d
    while c != 0:
        if a == 0:
            factors.append(("T", 1))
            a, b = a - c, b - d
            continue
        k = c // a
        if k:
            factors.append(("V", k))
            c, d = c - k * a, d - k * b
        if c == 0:
            break
        k = a // c
        if k:
            factors.append(("T", k))
            a, b = a - k * c, b - k * d
        elif a == 0:
            continue
        else:
            # |a| < |c| and c // a == 0 cannot happen together; guard anyway
            raise AssertionError("factorization stalled")
    if a == 1:
        factors.append(("T", b))
    else:
        factors.append(("neg", 0))
        factors.append(("T", -b))
    out = o
    for gen, k in reversed(factors):
        if gen == "neg":
            out = rotate_half_turn(out)
        elif k:
            out = act_T(out, k) if gen == "T" else act_V(out, k)
    return out


def _smith_2x2(m: tuple[int, int, int, int]) -> tuple[Mat2, tuple[int, int], Mat2]:
    """U, (s1, s2), W with U*M*W = diag(s1, s2), det U = det W = 1, s_i > 0."""
    a, b, c, d = m
    u = Mat2(1, 0, 0, 1)
    w = Mat2(1, 0, 0, 1)
    # clear the off-diagonal by alternating row and column reductions
    for _ in range(64):
        if b == 0 and c == 0:
            break
        if c != 0:
            g, x, y = _xgcd(a, c)
            # row ops: new r1 = x*r1 + y*r2; new r2 = (-c/g) r1 + (a/g) r2
            rr = Mat2(x, y, -c // g, a // g)
            u = rr * u
            a, b, c, d = (
                x * a + y * c,
                x * b + y * d,
                0,
                (-c // g) * b + (a // g) * d,
            )
        if b != 0:
            g, x, y = _xgcd(a, b)
            cc = Mat2(x, -b // g, y, a // g)
            w = w * cc
            a, b, c, d = (
                a * x + b * y,
                0,
                c * x + d * y,
                (-b // g) * c + (a // g) * d,
            )
        if c == 0 and b == 0:
            break
    if b or c:
        raise AssertionError("smith reduction did not converge")
    # a*d = det(M) > 0 for a lattice basis; negate through -I if needed
    if a < 0:
        u = Mat2(-1, 0, 0, -1) * u
        a, d = -a, -d
    if d < 0:
        raise AssertionError("diagonal signs disagree with the determinant")
    return u, (a, d), w


def reduce_origami(o: Origami) -> tuple[Origami, Mat2]:
    """Present o over its own period lattice; returns (reduced, B).

    B is an integer matrix with o isomorphic to B . reduced, det B = the
    covering degree over the reduced surface.  Already-reduced input comes
    back unchanged with B = I.
    """
    a, b, d = period_lattice(o)
    if a == 1 and d == 1:
        return o, Mat2(1, 0, 0, 1)
    if a == 0 or d == 0:
        raise ValueError("degenerate period lattice")
    # columns of B0 span the lattice; diagonalize and move o so the lattice
    # becomes alpha*Z x beta*Z
    u, (alpha, beta), _w = _smith_2x2((a, 0, b, d))
    y = act_matrix(o, u)
    n = y.n
    classes = [c for c in vertex_classes(y) if len(c) >= 2]
    root = classes[0][0] if classes else 0
    pos, _ = _square_positions(y, root)

    def tile_corner(s: int) -> int:
        # walk down-left to the representative square at offset (0, 0)
        i = pos[s][0] % alpha
        j = pos[s][1] % beta
        cur = s
        cur = perm_pow(y.right, -i)[cur]
        cur = perm_pow(y.up, -j)[cur]
        return cur

    corners = sorted({tile_corner(s) for s in range(n)})
    if len(corners) * alpha * beta != n:
        raise AssertionError("tile grouping inconsistent with lattice index")
    idx = {s: i for i, s in enumerate(corners)}
    new_right = [idx[tile_corner(perm_pow(y.right, alpha)[s])] for s in corners]
    new_up = [idx[tile_corner(perm_pow(y.up, beta)[s])] for s in corners]
    reduced = make_origami(new_right, new_up)
    if not is_reduced(reduced):
        raise AssertionError("reduction did not produce a reduced surface")
    b_mat = u.inv() * Mat2(alpha, 0, 0, beta)
    return reduced, b_mat


# ---------------------------------------------------------------------------
# Weierstrass points (genus two)
# ---------------------------------------------------------------------------

def _flip_automorphisms(o: Origami) -> list[Perm]:
    """Square permutations of rotation-by-pi affine automorphisms.

    A half-turn sends the square right of s to the square left of rho(s),
    so rho is pinned by one value and the relations rho(r(s)) = r^-1(rho(s)),
    rho(u(s)) = u^-1(rho(s)).
    """
    n = o.n
    ri, ui = perm_inv(o.right), perm_inv(o.up)
    found = []
    for image0 in range(n):
        rho = [-1] * n
        rho[0] = image0
        stack = [0]
        ok = True
        while stack and ok:
            s = stack.pop()
            for nbr, img in ((o.right[s], ri[rho[s]]), (o.up[s], ui[rho[s]])):
                if rho[nbr] == -1:
                    rho[nbr] = img
                    stack.append(nbr)
                elif rho[nbr] != img:
                    ok = False
                    break
        if not ok:
            continue
        rho = tuple(rho)
        if perm_compose(rho, rho) != tuple(range(n)):
            continue
        # propagation used a spanning set; confirm both relations everywhere
        if all(
            rho[o.right[s]] == ri[rho[s]] and rho[o.up[s]] == ui[rho[s]]
            for s in range(n)
        ):
            found.append(rho)
    return found


def _flip_fixed_counts(o: Origami, rho: Perm) -> dict[str, int]:
    """Fixed points of the half-turn with square action rho, by location."""
    ri, ui = perm_inv(o.right), perm_inv(o.up)
    centers = sum(1 for s in range(o.n) if rho[s] == s)
    mid_bottom = sum(1 for s in range(o.n) if rho[s] == ui[s])
    mid_left = sum(1 for s in range(o.n) if rho[s] == ri[s])
    classes = vertex_classes(o)
    class_of = {}
    for idx, cyc in enumerate(classes):
        for s in cyc:
            class_of[s] = idx
    # the corner at bottom-left of s maps to the top-right corner of rho(s),
    # which is the bottom-left corner anchored at r(u(rho(s)))
    fixed_classes = {
        class_of[s]
        for s in range(o.n)
        if class_of[o.right[o.up[rho[s]]]] == class_of[s]
    }
    return {
        "vertex": len(fixed_classes),
        "center": centers,
        "edge_mid_h": mid_bottom,
        "edge_mid_v": mid_left,
    }


def weierstrass_points(o: Origami) -> dict[str, int]:
    """Fixed-point counts of the hyperelliptic involution by location type.

    Keys: 'vertex' (lattice points), 'center', 'edge_mid_h' (bottom edge
    midpoints), 'edge_mid_v' (left edge midpoints).  The counts total six.
    """
    if genus(o) != 2:
        raise ValueError("Weierstrass bookkeeping implemented for genus two")
    candidates = []
    for rho in _flip_automorphisms(o):
        counts = _flip_fixed_counts(o, rho)
        if sum(counts.values()) == 6:
            candidates.append(counts)
    if len(candidates) != 1:
        raise AssertionError(
            f"expected one six-point involution, found {len(candidates)}"
        )
    return candidates[0]


def integer_weierstrass_points(o: Origami) -> int:
    """Number of Weierstrass points at lattice points (vertex classes)."""
    return weierstrass_points(o)["vertex"]


@dataclass(frozen=True)
class SeparatrixDiagram:
    n_cylinders: int
    cycle_type: tuple[int, ...]


def separatrix_diagram(o: Origami) -> SeparatrixDiagram:
    """Horizontal separatrix diagram class of a genus-two one-cone surface."""
    if stratum(o) != (2,):
        raise ValueError("separatrix diagrams implemented for a single cone of order 2")
    transposed = Origami(o.up, o.right)
    ncyl = len(vertical_cylinders(transposed))
    cyc = (3,) if ncyl == 1 else (1, 2)
    return SeparatrixDiagram(ncyl, cyc)


# ---------------------------------------------------------------------------
# enumeration
# ---------------------------------------------------------------------------

def _partitions(n: int):
    if n == 0:
        yield ()
        return
    for first in range(n, 0, -1):
        for rest in _partitions(n - first):
            if not rest or rest[0] <= first:
                yield (first,) + rest


def _partition_rep(part: tuple[int, ...]) -> Perm:
    out = []
    base = 0
    for size in part:
        out.extend(list(range(base + 1, base + size)) + [base])
        base += size
    return tuple(out)


def _comm_is_h2(right: Perm, up: Perm) -> bool:
    n = len(right)
    ri, ui = perm_inv(right), perm_inv(up)
    comm = [up[right[ui[ri[s]]]] for s in range(n)]
    moved = [s for s in range(n) if comm[s] != s]
    if len(moved) != 3:
        return False
    a = moved[0]
    return comm[comm[comm[a]]] == a and comm[a] != a


def enumerate_h2_reduced(n: int) -> list[Origami]:
    """All reduced n-square origamis with one cone of angle 6 pi, up to iso."""
    import itertools

    seen: set[tuple] = set()
    out: list[Origami] = []
    for part in _partitions(n):
        right = _partition_rep(part)
        for up in itertools.permutations(range(n)):
            if not _comm_is_h2(right, up):
                continue
            if not _is_transitive(right, up):
                continue
            o = Origami(right, up)
            if not is_reduced(o):
                continue
            can = canonical_form(o)
            key = (can.right, can.up)
            if key not in seen:
                seen.add(key)
                out.append(can)
    return out


def diophantine_type_surface(o: Origami, bound: int) -> float:
    """Finite-depth diophantine type of the vertical direction from connections.

    Scans saddle connections up to `bound` and returns the largest exponent w
    with |re| < |im|^-w among connections with |im| > 1, where re/im are taken
    in the frame of the vertical direction.
    """
    import math

    best = 1.0
    for hol in saddle_connections(o, bound):
        re, im = hol.x, hol.y
        if abs(im) > 1 and re != 0:
            w = -math.log(abs(re)) / math.log(abs(im))
            best = max(best, w)
    return best
