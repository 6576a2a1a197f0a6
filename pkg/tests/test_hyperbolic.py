import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from quakebend.errors import DegenerateAxis, DegenerateVertex, RadiusTooLarge
from quakebend.hyperbolic import (
    ORIGIN,
    PiecewiseGeodesic,
    PointH3,
    act,
    axis_in_h3,
    certify_quasigeodesic,
    corner_loss,
    dist_h3,
    empirical_qi_constants,
    find_violation,
    qi_radius,
    shortcut_curve,
    vertex_angle,
)
from quakebend.moebius import INFINITY, ZERO, MoebiusElement, ProjectivePoint, random_sl2

coord = st.floats(-3, 3)
height = st.floats(0.05, 5)


def test_vertical_distance_is_log_ratio():
    assert abs(dist_h3(ORIGIN, PointH3(0, 0, math.e**2)) - 2) < 1e-14
    assert abs(dist_h3(PointH3(1, 2, 3), PointH3(1, 2, 0.3)) - math.log(10)) < 1e-13


def test_point_needs_positive_height():
    with pytest.raises(ValueError):
        PointH3(0, 0, 0)


@settings(max_examples=50, deadline=None)
@given(coord, coord, height, coord, coord, height, st.integers(0, 1000))
def test_isometries_preserve_distance(x1, y1, t1, x2, y2, t2, seed):
    g = random_sl2(np.random.default_rng(seed))
    p, q = PointH3(x1, y1, t1), PointH3(x2, y2, t2)
    d = dist_h3(p, q)
    assert abs(dist_h3(act(g, p), act(g, q)) - d) < 1e-8 * max(1.0, d)


def test_vertex_angle_examples():
    v = PointH3(0, 0, 1)
    up, down = PointH3(0, 0, 3), PointH3(0, 0, 0.2)
    assert abs(vertex_angle(up, v, down) - math.pi) < 1e-12
    # the unit hemisphere over the origin meets the vertical line at a right angle
    side = PointH3(math.sin(0.6), 0, math.cos(0.6))
    assert abs(vertex_angle(up, v, side) - math.pi / 2) < 1e-12
    with pytest.raises(DegenerateVertex):
        vertex_angle(v, v, up)


def test_zigzag_geometry():
    z = PiecewiseGeodesic.zigzag(6, 1.0, math.pi / 2)
    assert z.n_segments == 6 and z.total_length == 6.0
    assert np.allclose(z.angles(), math.pi / 2, atol=1e-12)
    vs = z.vertices
    for a, b in zip(vs, vs[1:]):
        assert abs(dist_h3(a, b) - 1.0) < 1e-12
    for a, v, b in zip(vs, vs[1:], vs[2:]):
        assert abs(vertex_angle(a, v, b) - math.pi / 2) < 1e-10
    # alternating azimuths keep the curve in a vertical plane
    assert max(abs(v.y) for v in vs) < 1e-12


def test_through_round_trip():
    vs = [PointH3(0, 0, 1), PointH3(1, 0.5, 2), PointH3(-0.5, 2, 0.7), PointH3(3, 1, 1.5)]
    c = PiecewiseGeodesic.through(vs)
    for a, b in zip(c.vertices, vs):
        assert dist_h3(a, b) < 1e-10
    for k, (a, b) in enumerate(zip(vs, vs[1:])):
        assert abs(c.lengths[k] - dist_h3(a, b)) < 1e-12


def test_distances_match_points():
    z = PiecewiseGeodesic.zigzag(6, 1.0, 2.0)
    s = np.array([0.3, 1.7, 4.2, 0.0, 6.0])
    t = np.array([5.9, 2.2, 4.25, 6.0, 6.0])
    want = [dist_h3(z.point(a), z.point(b)) for a, b in zip(s, t)]
    assert np.allclose(z.distances(s, t), want, atol=1e-10)
    assert z.distances(np.array([2.5]), np.array([2.5]))[0] < 1e-12


def test_distance_never_exceeds_arclength():
    z = PiecewiseGeodesic.zigzag(20, 3.0, 1.0)
    rng = np.random.default_rng(0)
    s, t = rng.uniform(0, 60, 500), rng.uniform(0, 60, 500)
    assert np.all(z.distances(s, t) <= np.abs(s - t) + 1e-9)


def test_straight_curve_is_geodesic():
    c = PiecewiseGeodesic.from_angles([2.0, 3.0, 1.0], [math.pi, math.pi])
    assert abs(c.distances(np.array([0.0]), np.array([6.0]))[0] - 6.0) < 1e-9


def test_shortcut_opens_corners_and_shortens():
    z = PiecewiseGeodesic.zigzag(6, 1.0, math.pi / 2)
    sc = shortcut_curve(z, 0.2)
    assert sc.n_segments == 2 * 6 - 1
    assert all(a > math.pi / 2 for a in sc.angles())
    assert sc.total_length < z.total_length
    assert dist_h3(sc.vertices[0], z.vertices[0]) < 1e-12
    assert dist_h3(sc.vertices[-1], z.vertices[-1]) < 1e-9
    with pytest.raises(RadiusTooLarge):
        shortcut_curve(z, 0.5)


def test_qi_constants_formulae():
    r, R = qi_radius(0.5, math.pi / 2)
    assert abs(r - math.log(2 / math.sin(math.pi / 4))) < 1e-15
    assert abs(R - 2 * r * 1.5 / 0.5) < 1e-12
    assert corner_loss(math.pi / 3) <= 2 * qi_radius(1.0, math.pi / 3)[0] + 1e-12


def test_long_zigzag_certified_and_oracle_agrees():
    c = PiecewiseGeodesic.zigzag(8, 50.0, math.pi / 2)
    cert = certify_quasigeodesic(c, 0.5, math.pi / 3, samples=10000)
    assert cert.certified and cert.witness is None
    assert cert.P == 1.5
    assert empirical_qi_constants(c, 10000, P=cert.P).Q <= cert.Q
    assert find_violation(c, cert.P, cert.Q, 10000) is None


def test_short_zigzag_not_certified_and_violates():
    c = PiecewiseGeodesic.zigzag(300, 0.1, math.pi / 2)
    cert = certify_quasigeodesic(c, 0.1, math.pi / 3, samples=10000)
    assert not cert.certified
    s1, s2 = cert.witness
    d = abs(s1 - s2)
    dh = c.distances(np.array([s1]), np.array([s2]))[0]
    assert d / cert.P - cert.Q > dh


def test_single_segment_is_geodesic():
    c = PiecewiseGeodesic.from_angles([5.0], [])
    cert = certify_quasigeodesic(c, 0.1, 1.0)
    assert cert.certified and (cert.P, cert.Q) == (1.0, 0.0)
    assert empirical_qi_constants(c, 1000, P=1.0).Q < 1e-9


def test_axis_equivariance():
    g = random_sl2(np.random.default_rng(2))
    u, v = ProjectivePoint(1, 2), ProjectivePoint(-1j, 1)
    axis = axis_in_h3(u, v)
    moved = axis.apply(MoebiusElement(g.matrix))
    for s in (-1.0, 0.0, 2.5):
        assert moved.contains(act(g, axis.point(s)), 1e-8)
    assert axis_in_h3(ZERO, INFINITY).contains(PointH3(0, 0, 7.0))
    with pytest.raises(DegenerateAxis):
        axis_in_h3(u, u)
