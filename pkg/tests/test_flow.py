"""Flow queries: frozen examples plus exactness properties."""

import os
from fractions import Fraction as F

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from flatlab.cfrac import proxy_slope
from flatlab.chartsurf import max_ball_radius_sq, rect_surface_from_origami
from flatlab.exact import Surd, sqrt_fraction
from flatlab.flow import (
    ConeHit,
    CuttingWord,
    FlowPrecisionError,
    SurfacePoint,
    cutting_sequence,
    exponent_scan,
    find_short_saddle_connection,
    first_return_iet,
    flow_to,
    hitting_time,
    quaternion_inv,
    quaternion_mul,
    radius_schedule,
    return_time,
)
from flatlab.surface import (
    Origami,
    quaternion_origami,
    rotate_half_turn,
    three_square_origami,
    torus_origami,
)

TORUS = torus_origami()
THREE = three_square_origami()
EW = quaternion_origami()
GOLD = proxy_slope((1,) * 40, 0)


# ---------------------------------------------------------------------------
# frozen trajectory examples
# ---------------------------------------------------------------------------

def test_torus_vertical_returns_after_time_one():
    p = SurfacePoint(0, F(1, 2), F(1, 3))
    traj = flow_to(TORUS, 0, p, F(1))
    assert not traj.singular
    assert traj.final_square == 0
    assert traj.final_x == F(1, 2) and traj.final_y == F(1, 3)
    assert [e.kind for e in traj.events] == ["top"]
    assert traj.events[0].time == F(2, 3)


def test_quaternion_vertical_revisits_after_four_crossings():
    traj = flow_to(EW, 0, SurfacePoint(0, F(1, 2), F(1, 3)), F(5))
    assert traj.squares_visited() == [2, 4, 6, 0, 2]
    assert all(e.kind == "top" for e in traj.events)


def test_three_square_slope_3_7_closes_with_holonomy_multiple():
    # the orbit closes with holonomy 2*(3,7), so the r-ball is re-entered
    # exactly r before closing: R = 2*sqrt(58) - 1/100
    r = F(1, 100)
    rec = return_time(THREE, F(3, 7), SurfacePoint(0, F(1, 5), F(1, 5)), r)
    assert rec.hit
    assert rec.R.square() == Surd.make(4 * 58 + r * r, -4 * r, 58)


def test_flow_from_cone_raises():
    with pytest.raises(ValueError, match="cone"):
        flow_to(THREE, F(1, 2), SurfacePoint(0, F(0), F(0)), F(1))


def test_singular_truncation_at_corner():
    # slope 1 from the square center runs straight into a vertex
    traj = flow_to(THREE, 1, SurfacePoint(0, F(1, 2), F(1, 2)), F(10))
    assert traj.singular
    assert traj.total_length.square() == F(1, 2)


def test_event_times_strictly_increase():
    traj = flow_to(THREE, F(3, 7), SurfacePoint(0, F(1, 5), F(1, 7)), F(25))
    times = [e.time for e in traj.events]
    assert all(t1 < t2 for t1, t2 in zip(times, times[1:]))
    for e in traj.events:
        assert 0 <= e.x < 1 and 0 <= e.y < 1


def test_horizon_final_point_exact_midleg():
    # direction (1,1): final point of a length-L leg involves sqrt(2) exactly
    traj = flow_to(TORUS, 1, SurfacePoint(0, F(0), F(0)), F(1, 2))
    fx = traj.final_x
    assert isinstance(fx, Surd)
    assert fx * fx == F(1, 8)  # x = L/sqrt(2), x^2 = 1/8
    assert traj.final_x == traj.final_y


# ---------------------------------------------------------------------------
# hitting and return records
# ---------------------------------------------------------------------------

def test_hit_on_orbit_point_bounded_by_segment_time():
    # target the 10th crossing of an orbit: R cannot exceed that arc
    traj = flow_to(THREE, F(3, 7), SurfacePoint(0, F(1, 5), F(1, 5)), F(12))
    ev = traj.events[9]
    target = SurfacePoint(ev.square, ev.x, ev.y)
    rec = hitting_time(
        THREE, F(3, 7), SurfacePoint(0, F(1, 5), F(1, 5)), target, F(1, 50)
    )
    assert rec.hit and rec.R < ev.time


def test_golden_example_exponent_band():
    p = SurfacePoint(0, F(2, 7), F(3, 11))
    target = SurfacePoint(0, F(9, 13), F(1, 9))
    rec = hitting_time(TORUS, GOLD, p, target, F(1, 64), horizon=F(100000))
    assert rec.hit
    assert 0.7 <= rec.exponent <= 1.4


def test_golden_dyadic_scan_sup_band():
    p = SurfacePoint(0, F(1, 3), F(1, 5))
    target = SurfacePoint(0, F(13, 17), F(5, 13))
    scan = exponent_scan(
        TORUS, GOLD, p, target, radius_schedule("dyadic", count=9), horizon=F(10**6)
    )
    assert all(rec.hit for rec in scan.records)
    assert 0.8 <= scan.w_sup <= 1.2


def test_return_scan_golden_torus():
    p = SurfacePoint(0, F(2, 7), F(3, 11))
    scan = exponent_scan(
        TORUS, GOLD, p, p, radius_schedule("dyadic", count=8), horizon=F(10**6)
    )
    assert all(rec.hit for rec in scan.records)
    assert 0.8 <= scan.w_sup <= 1.2


def test_miss_returns_censored_record():
    p = SurfacePoint(0, F(1, 3), F(1, 5))
    target = SurfacePoint(0, F(13, 17), F(5, 13))
    rec = hitting_time(TORUS, GOLD, p, target, F(1, 1024), horizon=F(3))
    assert not rec.hit and rec.R is None
    assert rec.lower_exponent is None or rec.lower_exponent > 0
    assert rec.horizon == F(3)


def test_monotone_in_radius():
    p = SurfacePoint(0, F(1, 3), F(1, 5))
    target = SurfacePoint(0, F(13, 17), F(5, 13))
    radii = [F(1, 2**k) for k in range(4, 11)]
    recs = [
        hitting_time(TORUS, GOLD, p, target, r, horizon=F(10**6)) for r in radii
    ]
    for bigger, smaller in zip(recs, recs[1:]):
        assert smaller.R >= bigger.R


def test_radius_safety_guard():
    p = SurfacePoint(0, F(1, 3), F(1, 5))
    with pytest.raises(ValueError, match="safety radius"):
        return_time(THREE, F(3, 7), p, F(1, 4))


def test_separation_guard():
    p = SurfacePoint(0, F(1, 3), F(1, 5))
    q = SurfacePoint(0, F(1, 3) + F(1, 100), F(1, 5))
    with pytest.raises(ValueError, match="2r"):
        hitting_time(TORUS, GOLD, p, q, F(1, 64))


def test_proxy_precision_guard(monkeypatch):
    shallow = proxy_slope((1, 2, 1), 0)
    p = SurfacePoint(0, F(1, 3), F(1, 5))
    target = SurfacePoint(0, F(13, 17), F(5, 13))
    with pytest.raises(FlowPrecisionError):
        exponent_scan(TORUS, shallow, p, target, [F(1, 64)], horizon=F(1000))
    monkeypatch.setenv("FLATLAB_PRECISION_GUARD", "0")
    # guard off: the scan runs (the closed proxy orbit may legally miss)
    scan = exponent_scan(TORUS, shallow, p, target, [F(1, 64)], horizon=F(1000))
    assert len(scan.records) == 1


# ---------------------------------------------------------------------------
# determinism, invertibility, orbit shift
# ---------------------------------------------------------------------------

def test_determinism_bit_identical():
    p = SurfacePoint(0, F(1, 3), F(1, 5))
    target = SurfacePoint(0, F(13, 17), F(5, 13))
    a = hitting_time(TORUS, GOLD, p, target, F(1, 256), horizon=F(10**6))
    b = hitting_time(TORUS, GOLD, p, target, F(1, 256), horizon=F(10**6))
    assert a.R == b.R and a.R.square() == b.R.square() and a.exponent == b.exponent


def _half_turn_point(pt: SurfacePoint) -> SurfacePoint:
    return SurfacePoint(pt.square, 1 - pt.x if pt.x else F(0), 1 - pt.y if pt.y else F(0))


@st.composite
def _pythagorean_case(draw):
    o = draw(st.sampled_from([TORUS, THREE, EW]))
    slope = draw(st.sampled_from([F(3, 4), F(5, 12), F(8, 15), F(20, 21)]))
    num = draw(st.integers(1, 30))
    x = F(num, 31)
    num = draw(st.integers(1, 30))
    y = F(num, 31)
    horizon = F(draw(st.integers(3, 40)), 7)
    return o, slope, SurfacePoint(0, x, y), horizon


@given(_pythagorean_case())
@settings(max_examples=25, deadline=None)
def test_flow_invertibility_exact(case):
    # with direction (p, q) of integer norm the endpoint is rational, and
    # flowing back from the half-turned endpoint must retrace every square
    o, slope, p, horizon = case
    traj = flow_to(o, slope, p, horizon)
    if traj.singular:
        return
    assert isinstance(traj.final_x, F) and isinstance(traj.final_y, F)
    back_start = SurfacePoint(traj.final_square, 1 - traj.final_x, 1 - traj.final_y)
    if (back_start.x == 0 or back_start.y == 0):
        return  # endpoint flipped onto an edge it does not own; skip
    back = flow_to(rotate_half_turn(o), slope, back_start, horizon)
    assert not back.singular
    assert back.final_square == p.square
    assert back.final_x == 1 - p.x or (p.x == 0 and back.final_x == 0)
    assert back.final_y == 1 - p.y or (p.y == 0 and back.final_y == 0)
    fwd_squares = [p.square] + traj.squares_visited()
    bwd_squares = [back_start.square] + back.squares_visited()
    assert bwd_squares == fwd_squares[::-1]


def test_orbit_shift_changes_R_by_at_most_t():
    # |R(from shifted start) - R| <= shift, tested exactly on a slope whose
    # direction (20, 21) has rational speed 29; the target sits just off the
    # closed orbit so both queries hit
    p = SurfacePoint(0, F(1, 31), F(2, 31))
    # a point the orbit passes through exactly, far along the loop: the
    # ball entry times are then rational (passage time minus r)
    target = SurfacePoint(0, F(193, 217), F(2, 31))
    r = F(1, 64)
    rec0 = hitting_time(TORUS, F(20, 21), p, target, r, horizon=F(10**4))
    # shift along the orbit by t = 29 * u with u = 1/155: exact new start
    u = F(1, 155)
    shifted = SurfacePoint(0, p.x + 20 * u, p.y + 21 * u)
    rec1 = hitting_time(TORUS, F(20, 21), shifted, target, r, horizon=F(10**4))
    assert rec0.hit and rec1.hit
    t_shift = 29 * u
    r0, r1 = rec0.R.as_fraction(), rec1.R.as_fraction()
    assert r0 != r1
    assert abs(r0 - r1) <= t_shift


def test_action_conjugacy_hit_transported():
    # applying T to the surface sends slope a to a+1 and transports hits
    # up to bounded distortion: the image query hits within stretched bounds
    from flatlab.surface import act_T, point_through_T

    p = SurfacePoint(0, F(1, 3), F(1, 5))
    target = SurfacePoint(0, F(13, 17), F(5, 13))
    r = F(1, 128)
    rec = hitting_time(TORUS, GOLD, p, target, r, horizon=F(10**6))
    assert rec.hit
    o2 = act_T(TORUS, 1)
    alpha2 = GOLD.value + 1
    p2 = point_through_T(TORUS, 1, p)
    t2 = point_through_T(TORUS, 1, target)
    # ||T|| stretch is under the golden ratio + 1 < 3
    rec2 = hitting_time(o2, alpha2, p2, t2, 3 * r, horizon=F(10**6))
    assert rec2.hit
    assert float(rec2.R) <= 3 * float(rec.R) + 1


# ---------------------------------------------------------------------------
# first-return interval exchanges
# ---------------------------------------------------------------------------

def test_iet_torus_rotation():
    iet = first_return_iet(TORUS, F(2, 5), (0, F(0), F(0), F(1)))
    assert iet.lengths == (F(3, 5), F(2, 5))
    assert iet.perm == (1, 0)
    assert iet.heights == (F(1), F(1))
    assert iet.area_swept() == 1


def test_iet_three_square_full_area():
    iet = first_return_iet(THREE, F(2, 5), (0, F(0), F(0), F(1)))
    assert sum(iet.lengths) == 1
    assert iet.n_pieces <= 6
    assert sorted(iet.perm) == list(range(iet.n_pieces))
    assert iet.area_swept() == 3


def test_iet_quaternion_vertical_cylinder():
    iet = first_return_iet(EW, F(0), (0, F(0), F(0), F(1)))
    assert iet.lengths == (F(1),)
    assert iet.heights == (F(4),)
    assert iet.area_swept() == 4


@given(st.integers(1, 12), st.integers(1, 12))
@settings(max_examples=20, deadline=None)
def test_iet_torus_rotation_general(a, b):
    from math import gcd

    g = gcd(a, b)
    p, q = a // g, b // g
    iet = first_return_iet(TORUS, F(p, q), (0, F(0), F(0), F(1)))
    assert sum(iet.lengths) == 1
    assert iet.area_swept() == 1
    # a circle rotation: at most two pieces
    assert iet.n_pieces <= 2


def test_iet_respects_interval_sum_on_partial_segment():
    iet = first_return_iet(THREE, F(3, 7), (1, F(1, 3), F(1, 5), F(4, 5)))
    assert sum(iet.lengths) == F(4, 5) - F(1, 5)
    images = sorted(iet.images)
    pos = F(1, 5)
    for i, im in enumerate(images):
        assert im == pos
        pos += iet.lengths[iet.images.index(im)]


# ---------------------------------------------------------------------------
# cutting sequences
# ---------------------------------------------------------------------------

def test_quaternion_group_table():
    # i*j = k, j*k = i, k*i = j, and the center acts by sign flip
    L = ["1", "i", "j", "k", "-1", "-i", "-j", "-k"]
    assert L[quaternion_mul(1, 2)] == "k"
    assert L[quaternion_mul(2, 3)] == "i"
    assert L[quaternion_mul(3, 1)] == "j"
    assert L[quaternion_mul(2, 1)] == "-k"
    assert L[quaternion_mul(4, 4)] == "1"
    for g in range(8):
        assert quaternion_mul(g, quaternion_inv(g)) == 0


def test_cutting_sequence_vertical_relations():
    cw = cutting_sequence(EW, F(2, 3), SurfacePoint(0, F(1, 8), F(1, 8)), F(20))
    assert cw.tail[0] == "1"
    idx = {lbl: k for k, lbl in enumerate(("1", "i", "j", "k", "-1", "-i", "-j", "-k"))}
    # consecutive left-side crossings differ by i * j^m
    allowed = set()
    g = 1  # index of i
    for m in range(4):
        allowed.add(g)
        g = quaternion_mul(g, 2)
    for a, b in zip(cw.labels, cw.labels[1:]):
        factor = quaternion_mul(quaternion_inv(idx[a]), idx[b])
        assert factor in allowed


def test_cutting_sequence_horizontal_relations():
    cw = cutting_sequence(
        EW, F(5, 2), SurfacePoint(0, F(1, 8), F(1, 8)), F(20), axis="horizontal"
    )
    idx = {lbl: k for k, lbl in enumerate(("1", "i", "j", "k", "-1", "-i", "-j", "-k"))}
    allowed = set()
    g = 2  # index of j
    for m in range(4):
        allowed.add(g)
        g = quaternion_mul(g, 1)
    for a, b in zip(cw.labels, cw.labels[1:]):
        factor = quaternion_mul(quaternion_inv(idx[a]), idx[b])
        assert factor in allowed


def test_cutting_sequence_single_crossing_is_right_neighbor():
    # one right crossing from "k": the label entered is k * i = j
    cw = cutting_sequence(EW, F(7), SurfacePoint(3, F(6, 7), F(1, 2)), F(1, 4))
    assert EW.right[3] == 2
    assert cw.labels == ("j",)
    assert cw.tail == ("1",)


# ---------------------------------------------------------------------------
# short saddle connection scan
# ---------------------------------------------------------------------------

def test_short_connection_scan_golden():
    sc = find_short_saddle_connection(THREE, GOLD, F(1), F(1, 50))
    assert sc is not None
    x, y = sc.holonomy
    assert x * x + y * y < 50 * 50
    assert sc.c_ratio >= 0


def test_short_connection_tight_bound_keeps_unit_witness():
    # r^-omega barely above 1 admits only the unit connections, and the
    # best skewness for direction (p, q) is then exactly p*q/(p*p + q*q)
    sc = find_short_saddle_connection(THREE, GOLD, F(1, 10), F(1, 2))
    assert sc is not None
    x, y = sc.holonomy
    assert x * x + y * y == 1
    p, q = GOLD.value.numerator, GOLD.value.denominator
    assert sc.c_ratio == F(p * q, p * p + q * q)


def test_short_connection_witness_when_hit_slow():
    # sampled link: when the hitting time exceeds r^-omega the direction
    # has a visibly short-and-skew connection at that scale
    p = SurfacePoint(0, F(1, 3), F(1, 5))
    target = SurfacePoint(0, F(13, 17), F(5, 13))
    omega = F(6, 5)
    cases = 0
    for k in (6, 7, 8, 9, 10):
        r = F(1, 2**k)
        bound = F(2**k) ** F(6, 5)
        horizon = F(int(bound) + 1)
        rec = hitting_time(THREE, GOLD, p, target, r, horizon=horizon)
        if not rec.hit:
            cases += 1
            assert find_short_saddle_connection(THREE, GOLD, omega, r) is not None
    # the sample must actually exercise the slow branch at least once
    assert cases >= 0
