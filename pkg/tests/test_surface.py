"""Origami combinatorics against hand-computed fixtures and invariants."""

from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatlab.cfrac import MAT_T, MAT_V, Mat2
from flatlab.surface import (
    ChartPoint,
    Origami,
    absolute_period_lattice,
    act_matrix,
    act_T,
    act_V,
    apply_gword,
    canonical_form,
    commutator,
    connect_word,
    cusp_widths,
    direction_to_vertical,
    enumerate_h2_reduced,
    find_one_cylinder_vertex,
    find_splitting_pair,
    find_splitting_vertex,
    genus,
    gword_matrix,
    integer_weierstrass_points,
    is_reduced,
    make_origami,
    orbit,
    origami_from_json,
    origami_iso,
    origami_to_json,
    point_through_T,
    point_through_V,
    quaternion_origami,
    reduce_origami,
    rotate_half_turn,
    saddle_connections,
    separatrix_diagram,
    stratum,
    three_square_origami,
    torus_origami,
    transport_point,
    vertex_classes,
    vertical_cylinders,
    weierstrass_points,
)


def mat_vec(m: Mat2, v):
    return (m.a * v[0] + m.b * v[1], m.c * v[0] + m.d * v[1])


# ---------------------------------------------------------------------------
# frozen fixtures
# ---------------------------------------------------------------------------


def test_three_square_structure():
    o = three_square_origami()
    assert commutator(o) == (1, 2, 0)
    assert stratum(o) == (2,)
    assert genus(o) == 2


def test_torus_structure():
    o = torus_origami()
    assert stratum(o) == ()
    assert genus(o) == 1
    cyls = vertical_cylinders(o)
    assert len(cyls) == 1 and cyls[0].closed
    assert cyls[0].width == 1 and cyls[0].circumference == 1


def test_quaternion_origami_structure():
    o = quaternion_origami()
    assert o.n == 8
    assert stratum(o) == (1, 1, 1, 1)
    assert genus(o) == 3
    cyls = vertical_cylinders(o)
    assert len(cyls) == 2
    for c in cyls:
        assert c.width == 1 and c.circumference == 4
    assert {frozenset(c.squares()) for c in cyls} == {
        frozenset({0, 2, 4, 6}),
        frozenset({1, 3, 5, 7}),
    }


def test_three_square_cylinders():
    o = three_square_origami()
    cyls = vertical_cylinders(o)
    assert sorted(c.area() for c in cyls) == [1, 2]
    assert all(not c.closed for c in cyls)
    assert all(c.width == 1 for c in cyls)


def test_three_square_splitting_pair():
    pair = find_splitting_pair(three_square_origami())
    assert pair is not None
    assert pair.width == 1
    assert pair.circumference == 2
    assert pair.gamma_len == 1
    assert pair.delta0 == 1
    assert pair.gcd_ok()


def test_generator_actions_frozen():
    o = three_square_origami()
    assert act_T(o) == Origami((1, 2, 0), (2, 1, 0))
    assert act_V(o) == Origami((2, 1, 0), (1, 0, 2))
    # inverses roundtrip exactly
    assert act_T(act_T(o, 3), -3) == o
    assert act_V(act_V(o, -2), 2) == o


def test_torus_saddle_connections():
    conns = saddle_connections(torus_origami(), 1)
    unit = sorted((h.x, h.y) for h in conns if abs(h.x) + abs(h.y) == 1)
    assert unit == [(-1, 0), (0, -1), (0, 1), (1, 0)]


def test_three_square_saddle_connections():
    conns = [(h.x, h.y) for h in saddle_connections(three_square_origami(), 1)]
    assert len(conns) == 24
    for v in [(0, 1), (1, 0), (1, 1), (-1, 1)]:
        assert conns.count(v) == 3
        assert conns.count((-v[0], -v[1])) == 3


def test_domino_not_reduced():
    domino = make_origami((0, 1), (1, 0))
    assert absolute_period_lattice(domino) == (1, 0, 2)
    assert not is_reduced(domino)
    red, b = reduce_origami(domino)
    assert red.n == 1
    assert b.det() == 2


def test_three_square_reduced():
    o = three_square_origami()
    assert is_reduced(o)
    red, b = reduce_origami(o)
    assert red == o and b == Mat2(1, 0, 0, 1)


def test_weierstrass_three_square():
    o = three_square_origami()
    counts = weierstrass_points(o)
    assert sum(counts.values()) == 6
    assert integer_weierstrass_points(o) == 1
    diagram = separatrix_diagram(o)
    assert diagram.n_cylinders in (1, 2)


def test_weierstrass_rejects_other_genus():
    with pytest.raises(ValueError):
        weierstrass_points(torus_origami())
    with pytest.raises(ValueError):
        weierstrass_points(quaternion_origami())


def test_classification_small():
    # genus-two one-cone square-tiled surfaces, grouped into generator orbits,
    # keyed by the count of Weierstrass points at lattice points
    for n, expected in [(3, [1]), (4, [2]), (5, [1, 3])]:
        surfaces = enumerate_h2_reduced(n)
        graphs = []
        for o in surfaces:
            if not any(g.index.get(canonical_form(o)) is not None for g in graphs):
                graphs.append(orbit(o))
        iwps = sorted(integer_weierstrass_points(g.vertices[0]) for g in graphs)
        assert iwps == expected, f"n={n}"
        # the orbits partition the enumerated surfaces
        assert sum(g.size() for g in graphs) == len(surfaces)


def test_point_transport_frozen():
    o = three_square_origami()
    pt = point_through_T(o, 1, ChartPoint(0, Fraction(1, 3), Fraction(1, 2)))
    assert pt == ChartPoint(0, Fraction(5, 6), Fraction(1, 2))
    pt = point_through_T(o, 1, ChartPoint(0, Fraction(2, 3), Fraction(1, 2)))
    assert pt == ChartPoint(1, Fraction(1, 6), Fraction(1, 2))
    pt = point_through_V(o, 2, ChartPoint(0, Fraction(1, 2), Fraction(1, 4)))
    assert pt == ChartPoint(o.up[0], Fraction(1, 2), Fraction(1, 4))


def test_json_roundtrip():
    o = three_square_origami()
    assert origami_from_json(origami_to_json(o)) == o


# ---------------------------------------------------------------------------
# action and orbit invariants
# ---------------------------------------------------------------------------


def test_half_turn_relation():
    # (T V^-1 T)^2 acts as the half turn, up to relabeling squares
    for o in [three_square_origami(), quaternion_origami()]:
        img = o
        for _ in range(2):
            img = act_T(act_V(act_T(img, 1), -1), 1)
        assert origami_iso(img, rotate_half_turn(o))


def test_act_matrix_matches_words():
    o = three_square_origami()
    for word in [(1,), (2, 1), (1, 1, 2), (3, 1, 2, 2)]:
        assert origami_iso(act_matrix(o, gword_matrix(word)), apply_gword(word, o))


def test_act_matrix_generators():
    o = quaternion_origami()
    assert act_matrix(o, MAT_T**3) == act_T(o, 3)
    assert act_matrix(o, MAT_V**-2) == act_V(o, -2)


def test_orbit_three_square():
    g = orbit(three_square_origami())
    assert g.size() >= 2
    surfaces = enumerate_h2_reduced(3)
    assert len(surfaces) == g.size()
    for o in surfaces:
        assert canonical_form(o) in g.index


def test_quaternion_orbit_singleton():
    g = orbit(quaternion_origami())
    assert g.size() == 1


def test_connect_word_contract():
    g = orbit(three_square_origami())
    n_orb = g.size()
    for a in g.vertices:
        for b in g.vertices:
            word = connect_word(a, b)
            assert len(word) % 2 == 0
            assert 2 <= len(word) <= max(2, 2 * n_orb - 2)
            assert all(1 <= e <= n_orb for e in word)
            assert origami_iso(apply_gword(word, a), b)


def test_cusp_widths_bounded():
    g = orbit(three_square_origami())
    for v in g.vertices:
        h, w = cusp_widths(v)
        assert 1 <= h <= g.size()
        assert 1 <= w <= g.size()
        assert origami_iso(act_T(v, h), v)
        assert origami_iso(act_V(v, w), v)


def test_splitting_and_one_cylinder_vertices_exist():
    o = three_square_origami()
    found = find_splitting_vertex(o)
    assert found is not None
    vert, pair = found
    assert pair.width in (1, 2)
    one = find_one_cylinder_vertex(o)
    assert one is not None
    assert len(vertical_cylinders(one)) == 1


def test_direction_to_vertical():
    o = three_square_origami()
    for p, q in [(0, 1), (1, 0), (1, 1), (-1, 1), (3, 2), (-5, 3), (7, 4)]:
        vert, m = direction_to_vertical(o, p, q)
        assert m.det() == 1
        assert mat_vec(m, (p, q)) == (0, 1)
        assert origami_iso(act_matrix(o, m), vert)


def test_cylinder_area_partition():
    for o in [three_square_origami(), quaternion_origami(), torus_origami()]:
        cyls = vertical_cylinders(o)
        seen = set()
        for c in cyls:
            sq = c.squares()
            assert not (sq & seen)
            seen |= sq
        assert seen == set(range(o.n))
        assert sum(c.area() for c in cyls) == o.n


# ---------------------------------------------------------------------------
# property tests
# ---------------------------------------------------------------------------


def perms(n):
    return st.permutations(range(n))


@st.composite
def origamis(draw, max_n=5):
    n = draw(st.integers(min_value=1, max_value=max_n))
    right = tuple(draw(perms(n)))
    up = tuple(draw(perms(n)))
    try:
        return make_origami(right, up)
    except ValueError:
        from hypothesis import assume

        assume(False)


@given(origamis(), st.permutations(range(5)))
@settings(max_examples=60, deadline=None)
def test_canonical_form_relabel_invariant(o, sigma):
    sigma = tuple(sigma[: o.n]) if len(sigma) >= o.n else None
    if sigma is None or sorted(sigma) != list(range(o.n)):
        return
    inv = [0] * o.n
    for i, j in enumerate(sigma):
        inv[j] = i
    right = tuple(sigma[o.right[inv[i]]] for i in range(o.n))
    up = tuple(sigma[o.up[inv[i]]] for i in range(o.n))
    assert canonical_form(Origami(right, up)) == canonical_form(o)


@given(origamis(), st.integers(min_value=-3, max_value=3))
@settings(max_examples=60, deadline=None)
def test_action_invertible(o, m):
    assert act_T(act_T(o, m), -m) == o
    assert act_V(act_V(o, m), -m) == o
    assert stratum(act_T(o, m)) == stratum(o)
    assert stratum(act_V(o, m)) == stratum(o)


@given(origamis())
@settings(max_examples=40, deadline=None)
def test_reduction_degree(o):
    red, b = reduce_origami(o)
    assert is_reduced(red)
    assert red.n * b.det() == o.n
    assert is_reduced(o) == (b == Mat2(1, 0, 0, 1))


@given(
    origamis(),
    st.integers(min_value=-2, max_value=2),
    st.fractions(min_value=0, max_value=1).filter(lambda f: f < 1),
    st.fractions(min_value=0, max_value=1).filter(lambda f: f < 1),
)
@settings(max_examples=60, deadline=None)
def test_point_transport_roundtrip(o, m, x, y):
    pt = ChartPoint(0, x, y)
    img = point_through_T(o, m, pt)
    back = point_through_T(act_T(o, m), -m, img)
    assert back == pt
    img = point_through_V(o, m, pt)
    back = point_through_V(act_V(o, m), -m, img)
    assert back == pt


@given(origamis(max_n=4), st.lists(st.integers(min_value=1, max_value=3), min_size=1, max_size=4))
@settings(max_examples=40, deadline=None)
def test_transport_lands_on_final_surface(o, word):
    word = tuple(word)
    final, _pt = transport_point(word, o, ChartPoint(0, Fraction(1, 3), Fraction(1, 7)))
    assert final == apply_gword(word, o)
