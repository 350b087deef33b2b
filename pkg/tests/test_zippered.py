"""Interval exchanges, suspension data, induction, and the depth checkers."""

from fractions import Fraction as F
from random import Random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatlab.chartsurf import (
    horizontal_core_lengths,
    saddle_connections_bounded,
    transpose_surface,
)
from flatlab.zippered import (
    CombinatorialDatum,
    Iet,
    ZipperedData,
    apply_move,
    build_surface,
    check_top_singularity_lemmas,
    detect_closed_cylinder,
    heights_and_singularities,
    homologous_boundary_pair,
    iet_apply,
    iet_first_return,
    inverse_rauzy_step,
    random_combinatorial_datum,
    random_shallow_zippered,
    random_zippered,
    rauzy_class,
    rauzy_step,
    suspension_area,
    zippered_from_json,
    zippered_to_json,
)

ROT = CombinatorialDatum((0, 1), (1, 0))
# top-last box is wide, the two short boxes trail it in the bottom row
WIDE = ZipperedData(
    CombinatorialDatum((0, 1, 2, 3), (2, 3, 0, 1)), (1, 1, 10, 10), (2, 2, -3, -2)
)
# four-letter instance whose bottom row splits around the top-last letter
FIG = ZipperedData(
    CombinatorialDatum((0, 1, 2, 3), (2, 0, 3, 1)), (2, 3, 5, 7), (1, 2, -2, -1)
)


def rotation_iet(alpha):
    return Iet(ROT, (1 - alpha, alpha))


# ---------------------------------------------------------------------------
# combinatorial data
# ---------------------------------------------------------------------------


def test_combinatorial_rows_must_be_permutations():
    with pytest.raises(ValueError):
        CombinatorialDatum((0, 1), (0, 0))
    with pytest.raises(ValueError):
        CombinatorialDatum((0, 2), (2, 0))


def test_admissibility_rejects_common_prefix():
    assert ROT.is_admissible
    assert not CombinatorialDatum((0, 1, 2), (1, 0, 2)).is_admissible
    assert CombinatorialDatum((0, 1, 2), (2, 1, 0)).is_admissible


def test_rauzy_class_of_symmetric_four_letter_datum():
    cls = rauzy_class(CombinatorialDatum((0, 1, 2, 3), (3, 2, 1, 0)))
    assert len(cls) == 7
    assert all(pi.is_admissible for pi in cls)


@given(st.integers(2, 6), st.integers(0, 10_000))
@settings(max_examples=60, deadline=None)
def test_moves_preserve_admissibility_and_close_up(d, seed):
    pi = random_combinatorial_datum(d, Random(seed))
    cls = rauzy_class(pi)
    for q in cls:
        assert q.is_admissible
        assert apply_move(q, "t") in cls
        assert apply_move(q, "b") in cls


# ---------------------------------------------------------------------------
# suspension data and derived corners
# ---------------------------------------------------------------------------


def test_rotation_suspension_heights_and_zero_net_offset():
    data = ZipperedData(ROT, (F(3, 5), F(2, 5)), (1, -1))
    geo = heights_and_singularities(data)
    assert geo.heights == (F(1), F(1))
    assert geo.net_offset == 0
    assert suspension_area(data) == 1


def test_suspension_conditions_are_strict():
    # top prefix sums must be positive, bottom ones negative
    with pytest.raises(ValueError):
        ZipperedData(ROT, (1, 1), (-1, 1))
    with pytest.raises(ValueError):
        ZipperedData(FIG.combinatorial, FIG.lengths, (1, 2, 2, -1))
    with pytest.raises(ValueError):
        ZipperedData(CombinatorialDatum((0, 1, 2), (1, 0, 2)), (1, 1, 1), (1, -1, 1))


def test_lengths_must_be_positive():
    with pytest.raises(ValueError):
        ZipperedData(ROT, (1, 0), (1, -1))


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_corners_stay_on_box_sides_except_one(seed):
    rng = Random(seed)
    data = random_zippered(random_combinatorial_datum(4, rng), rng)
    geo = heights_and_singularities(data)
    d = data.combinatorial.d
    for l in range(d):
        re, im = geo.top_corners[l]
        assert 0 <= im <= geo.heights[l]
    off_box = [
        l
        for l in range(d)
        if not -geo.heights[l] <= geo.bottom_corners[l][1] <= 0
    ]
    if geo.net_offset == 0:
        assert off_box == []
    else:
        assert off_box in ([], [geo.exception_letter])


def test_exceptional_corner_value():
    geo = heights_and_singularities(FIG)
    assert geo.net_offset == 0
    geo = heights_and_singularities(WIDE)
    assert geo.net_offset == -1
    assert geo.exception_side == "bottom"
    beta = geo.exception_letter
    top_last = WIDE.combinatorial.top[-1]
    assert geo.bottom_corners[beta][1] == geo.net_offset - geo.heights[top_last]


def test_tallest_box_dominates_net_offset():
    for data in (WIDE, FIG):
        geo = heights_and_singularities(data)
        assert max(geo.heights) >= abs(geo.net_offset)


# ---------------------------------------------------------------------------
# interval exchange maps and first returns
# ---------------------------------------------------------------------------


def test_rotation_iet_is_rotation():
    T = rotation_iet(F(2, 5))
    for x in (F(0), F(1, 10), F(3, 5), F(99, 100)):
        assert iet_apply(T, x) == (x + F(2, 5)) % 1


def test_iet_bijects_interval_pieces():
    T = Iet(FIG.combinatorial, FIG.lengths)
    pieces = T.pieces()
    assert [p[1] - p[0] for p in pieces] == [2, 3, 5, 7]
    images = sorted((a + s, b + s) for a, b, s in pieces)
    assert images[0][0] == 0 and images[-1][1] == T.total
    for (_, hi), (lo, _) in zip(images, images[1:]):
        assert hi == lo


def test_gauss_renormalization_oracle():
    # returning a rotation to its short interval performs one continued
    # fraction step: 2/5 -> 1/(2/5) has fractional part 1/2, so the induced
    # map is the rotation by 1/2 of a length-2/5 interval
    T = rotation_iet(F(2, 5))
    fr = iet_first_return(T, 0, F(2, 5))
    assert fr.iet.pattern() == ((F(1, 5), F(1, 5)), (1, 0))
    assert fr.steps == (3, 2)


def test_first_return_composition_lands_back():
    T = rotation_iet(F(2, 7))
    fr = iet_first_return(T, 0, F(2, 7))
    for (a, b, _), n in zip(fr.iet.pieces(), fr.steps):
        x = (a + b) / 2
        y = x
        for _ in range(n):
            y = iet_apply(T, y)
        assert iet_apply(fr.iet, x) == y
        assert 0 <= y < F(2, 7)


def test_first_return_step_cap():
    T = rotation_iet(F(355, 1130))
    with pytest.raises(RuntimeError):
        iet_first_return(T, 0, F(1, 1000), max_steps=50)


# ---------------------------------------------------------------------------
# induction steps
# ---------------------------------------------------------------------------


def test_rotation_steps_follow_continued_fraction():
    # 2/7 = [0; 3, 2]: two bottom moves, one top move, then the exact tie
    data = Iet(ROT, (F(5, 7), F(2, 7)))
    kinds = []
    for _ in range(3):
        data, kind, _ = rauzy_step(data)
        kinds.append(kind)
    assert kinds == ["b", "b", "t"]
    with pytest.raises(ValueError):
        rauzy_step(data)


def test_step_matrix_recovers_old_lengths():
    new, kind, B = rauzy_step(FIG)
    assert kind == "t"
    d = FIG.combinatorial.d
    rebuilt = tuple(
        sum(B[i][j] * new.lengths[j] for j in range(d)) for i in range(d)
    )
    assert rebuilt == FIG.lengths
    assert new.combinatorial.is_admissible


@given(st.integers(0, 10_000))
@settings(max_examples=40, deadline=None)
def test_step_preserves_area_and_unimodularity(seed):
    rng = Random(seed)
    data = random_zippered(random_combinatorial_datum(rng.randint(2, 5), rng), rng)
    area = suspension_area(data)
    try:
        new, _, B = rauzy_step(data)
    except ValueError:
        return
    assert suspension_area(new) == area
    assert all(v >= 0 for row in B for v in row)
    # elementary row addition, so expanding along the modified row gives 1
    n = len(B)
    assert sum(B[i][j] for i in range(n) for j in range(n)) == n + 1


def test_first_return_contract_on_random_data():
    done = 0
    rng = Random(2)
    while done < 40:
        d = rng.randint(2, 5)
        data = random_zippered(random_combinatorial_datum(d, rng), rng, span=10**6)
        try:
            new, _, _ = rauzy_step(data)
        except ValueError:
            continue
        T = Iet(data.combinatorial, data.lengths)
        fr = iet_first_return(T, 0, sum(new.lengths), merge=False)
        assert fr.iet.pattern() == Iet(new.combinatorial, new.lengths).pattern()
        done += 1


def test_thirty_steps_contract_lengths_and_stretch_heights():
    rng = Random(221)
    data = random_zippered(random_combinatorial_datum(4, rng), rng, span=10**9)
    total = sum(data.lengths)
    h0 = min(heights_and_singularities(data).heights)
    area = suspension_area(data)
    cur = data
    for _ in range(30):
        cur, _, _ = rauzy_step(cur)
    assert suspension_area(cur) == area
    assert max(cur.lengths) < total / 1000
    assert min(heights_and_singularities(cur).heights) > 100 * h0


def test_inverse_step_roundtrips():
    rng = Random(5)
    for _ in range(60):
        data = random_zippered(random_combinatorial_datum(rng.randint(2, 5), rng), rng)
        try:
            fwd, kind, B = rauzy_step(data)
        except ValueError:
            continue
        back, kind2, B2 = inverse_rauzy_step(fwd)
        assert (back, kind2, B2) == (data, kind, B)


def test_inverse_step_needs_signed_net_offset():
    # symmetric torus data: not an induction image, and both forced
    # preimages leave the suspension cone
    data = ZipperedData(ROT, (F(3, 5), F(2, 5)), (1, -1))
    with pytest.raises(ValueError):
        inverse_rauzy_step(data)
    with pytest.raises(ValueError):
        inverse_rauzy_step(data, "t")
    with pytest.raises(ValueError):
        inverse_rauzy_step(data, "b")


# ---------------------------------------------------------------------------
# assembled surfaces
# ---------------------------------------------------------------------------


def test_torus_suspension_assembles_to_unit_torus():
    data = ZipperedData(ROT, (F(3, 5), F(2, 5)), (1, -1))
    rs = build_surface(data)
    assert rs.area() == 1
    assert len(rs.cones) == 4


def test_assembled_area_matches_suspension_area():
    rng = Random(9)
    for _ in range(8):
        data = random_zippered(random_combinatorial_datum(rng.randint(2, 5), rng), rng)
        assert build_surface(data).area() == suspension_area(data)


def test_induction_step_preserves_the_surface():
    new, _, _ = rauzy_step(FIG)
    a = saddle_connections_bounded(build_surface(FIG), F(4), F(4))
    b = saddle_connections_bounded(build_surface(new), F(4), F(4))
    assert a == b
    assert len(a) == 6


# ---------------------------------------------------------------------------
# closed cylinders and depth lemmas
# ---------------------------------------------------------------------------


def test_center_geodesic_found_and_flow_validated():
    geo = heights_and_singularities(WIDE)
    g = detect_closed_cylinder(WIDE)
    assert g is not None and g.letter == 3
    assert g.re_abs == 2 and g.im_abs == geo.heights[3]
    assert g.re_abs < sum(WIDE.lengths)


def test_center_geodesic_absent_when_displacement_too_wide():
    data = ZipperedData(WIDE.combinatorial, (10, 10, 7, 1), (2, 2, -3, -2))
    assert detect_closed_cylinder(data) is None


def test_center_geodesic_other_letters():
    # any box whose top and bottom intervals overlap past its midpoint
    # carries a closed geodesic of its own
    for letter in range(4):
        g = detect_closed_cylinder(FIG, letter)
        if g is not None:
            assert g.im_abs == heights_and_singularities(FIG).heights[letter]
            assert g.re_abs < FIG.lengths[letter]


def test_homologous_pair_on_split_bottom_row():
    assert homologous_boundary_pair(FIG)


def test_depth_checks_inapplicable_reports():
    rot = ZipperedData(ROT, (F(3, 5), F(2, 5)), (1, -1))
    rep = check_top_singularity_lemmas(rot, 10)
    assert not rep.applicable and "net offset" in rep.reason
    rep = check_top_singularity_lemmas(WIDE, 3)
    assert not rep.applicable and "M" in rep.reason
    rep = check_top_singularity_lemmas(WIDE, 100)
    assert not rep.applicable and "corner" in rep.reason


def test_depth_checks_on_shallow_random_batch():
    rng = Random(31)
    seen_witness = False
    for _ in range(50):
        data = random_shallow_zippered(random_combinatorial_datum(4, rng), rng, 100)
        assert suspension_area(data) == 1
        rep = check_top_singularity_lemmas(data, 100)
        assert rep.applicable
        assert rep.passed, rep.failures
        if rep.witness is not None:
            seen_witness = True
            re, im = rep.witness
            geo = heights_and_singularities(data)
            H = max(geo.heights)
            assert re < F(3 * 100, 94) / H
            assert im < F(7, 100) * H
    assert seen_witness


def test_axis_cylinder_fallback_on_flat_torus():
    # sheared torus from two half-width boxes: horizontal leaves close
    # after crossing both boxes, vertical ones after climbing both
    data = ZipperedData(ROT, (F(1, 2), F(1, 2)), (1, -1))
    rs = build_surface(data)
    assert horizontal_core_lengths(rs) == {F(1)}
    assert horizontal_core_lengths(rs, max_circ=F(1, 2)) == set()
    assert horizontal_core_lengths(transpose_surface(rs)) == {F(2)}


# ---------------------------------------------------------------------------
# serialization
# ---------------------------------------------------------------------------


def test_json_roundtrip():
    for data in (WIDE, FIG):
        text = zippered_to_json(data)
        assert '"3/5"' not in text  # exact integers stay integers
        assert zippered_from_json(text) == data


def test_json_roundtrip_fractional():
    data = ZipperedData(ROT, (F(3, 5), F(2, 5)), (F(1, 3), -F(1, 7)))
    text = zippered_to_json(data)
    assert '"2/5"' in text
    assert zippered_from_json(text) == data


@given(st.integers(0, 10_000))
@settings(max_examples=30, deadline=None)
def test_json_roundtrip_random(seed):
    rng = Random(seed)
    data = random_zippered(random_combinatorial_datum(rng.randint(2, 6), rng), rng)
    assert zippered_from_json(zippered_to_json(data)) == data
