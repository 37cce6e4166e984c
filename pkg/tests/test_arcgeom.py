import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from screenlab.arcgeom import CircularArc, Segment, SplineArc, UNIT_SLIT, arc_from_dict
from screenlab.errors import ConfigError, DegenerateArcError, DomainError

params = st.floats(min_value=-1.0, max_value=1.0, allow_nan=False)
coords = st.floats(min_value=-3.0, max_value=3.0, allow_nan=False)


def test_segment_midpoint_and_endpoint(slit):
    assert np.allclose(slit.eval(0.0), [0.0, 0.0], atol=0)
    assert np.array_equal(slit.eval(1.0), [1.0, 0.0])


def test_half_circle_midpoint(half_circle):
    assert np.allclose(half_circle.eval(0.0), [0.0, 1.0], atol=1e-15)


def test_eval_outside_parameter_domain_raises(slit):
    with pytest.raises(DomainError):
        slit.eval(1.5)
    with pytest.raises(DomainError):
        slit.eval(np.nan)


def test_endpoints_exact_for_circular_arc(quarter_arc):
    a, b = quarter_arc.endpoints
    assert tuple(quarter_arc.eval(-1.0)) == a
    assert tuple(quarter_arc.eval(1.0)) == b


def test_tangent_normal_segment(slit):
    tau, nu = slit.tangent_normal(0.3)
    assert np.allclose(tau, [1.0, 0.0]) and np.allclose(nu, [0.0, 1.0])


def test_tangent_normal_half_circle(half_circle):
    tau, nu = half_circle.tangent_normal(0.0)
    assert np.allclose(tau, [-1.0, 0.0], atol=1e-15)
    assert np.allclose(nu, [0.0, -1.0], atol=1e-15)


@pytest.mark.parametrize("arc,expected", [
    (UNIT_SLIT, 1.0),
    (Segment((0.0, 0.0), (2.0, 0.0)), 1.0),
    (CircularArc((0.0, 0.0), 1.0, (0.0, math.pi)), math.pi / 2),
])
def test_speed_constant(arc, expected):
    t = np.linspace(-1, 1, 11)
    assert np.allclose(arc.speed(t), expected, rtol=1e-15)


@settings(max_examples=50, deadline=None)
@given(cx=coords, cy=coords, r=st.floats(0.1, 3.0), a0=st.floats(-3.0, 3.0),
       span=st.floats(0.1, 6.0), t=params)
def test_tangent_normal_orthonormal(cx, cy, r, a0, span, t):
    arc = CircularArc((cx, cy), r, (a0, a0 + span))
    tau, nu = arc.tangent_normal(t)
    assert abs(np.linalg.norm(tau) - 1) <= 1e-14
    assert abs(np.linalg.norm(nu) - 1) <= 1e-14
    assert abs(tau @ nu) <= 1e-14


@settings(max_examples=30, deadline=None)
@given(t=st.floats(-0.99, 0.99))
def test_derivative_matches_central_difference(t):
    arcs = [CircularArc((0.2, -0.1), 1.3, (0.3, 2.5)),
            SplineArc(((0, 0), (0.5, 0.4), (1.0, 0.3), (1.5, -0.2), (2.0, 0.1)))]
    h = 1e-5
    for arc in arcs:
        fd = (arc.eval(t + h) - arc.eval(t - h)) / (2 * h)
        tau, _ = arc.tangent_normal(t)
        assert np.allclose(fd, tau * arc.speed(t), atol=1e-6)


def test_spline_reproduces_circular_arc():
    circ = CircularArc((0.0, 0.0), 1.0, (0.2, 2.6))
    pts = circ.eval(np.linspace(-1, 1, 12))
    spline = SplineArc(tuple(map(tuple, pts)))
    t = np.linspace(-1, 1, 401)
    assert np.max(np.abs(spline.eval(t) - circ.eval(t))) <= 1e-4


def test_degenerate_arcs_rejected():
    with pytest.raises(DegenerateArcError):
        Segment((1.0, 1.0), (1.0, 1.0))
    with pytest.raises(DegenerateArcError):
        CircularArc((0, 0), 1.0, (0.0, 2 * math.pi))
    with pytest.raises(DegenerateArcError):
        CircularArc((0, 0), 0.0, (0.0, 1.0))
    # a spline that doubles back on itself
    with pytest.raises(DegenerateArcError):
        SplineArc(((0, 0), (2, 0), (2, 1), (1, 1), (1, -1)))


def test_arclength_and_inverse(quarter_arc):
    total = quarter_arc.length()
    assert math.isclose(total, math.pi / 2, rel_tol=1e-14)
    d = np.array([1e-6, 1e-3, 0.4, total])
    t = quarter_arc.param_at_distance(1, d)
    assert np.allclose(quarter_arc.arclength_from(1, t), d, rtol=1e-12)
    assert t[-1] == -1.0


def test_closest_point_and_hausdorff(slit):
    t, dist = slit.closest_point(np.array([[0.3, 0.5], [2.0, 0.0], [-1.0, -1.0]]))
    assert np.allclose(t, [0.3, 1.0, -1.0])
    assert np.allclose(dist, [0.5, 1.0, 1.0])
    shifted = Segment((-1.0, 0.25), (1.0, 0.25))
    assert math.isclose(slit.hausdorff(shifted), 0.25, rel_tol=1e-12)
    assert slit.hausdorff(slit) <= 1e-15


@settings(max_examples=25, deadline=None)
@given(scale=st.floats(0.2, 5.0), angle=st.floats(-3.0, 3.0), sx=coords, sy=coords)
def test_transformed_preserves_shape(scale, angle, sx, sy):
    arc = CircularArc((0.1, 0.2), 0.8, (0.4, 2.0))
    moved = arc.transformed(scale, angle, (sx, sy))
    assert math.isclose(moved.length(), scale * arc.length(), rel_tol=1e-12)


@pytest.mark.parametrize("arc", [UNIT_SLIT, CircularArc((0, 0), 1.0, (0.1, 1.0)),
                                 SplineArc(((0, 0), (1, 1), (2, 0), (3, 1)))])
def test_dict_round_trip(arc):
    assert arc_from_dict(arc.to_dict()) == arc


def test_bad_record():
    with pytest.raises(ConfigError):
        arc_from_dict({"kind": "ellipse"})
    with pytest.raises(ConfigError):
        arc_from_dict({"kind": "segment", "a": [0, 0]})


@settings(max_examples=100, deadline=None)
@given(ax=coords, ay=coords, bx=coords, by=coords)
def test_any_segment_is_valid(ax, ay, bx, by):
    # collinear sample edges must not be mistaken for a self-crossing
    if math.hypot(bx - ax, by - ay) < 1e-3:
        return
    seg = Segment((ax, ay), (bx, by))
    assert math.isclose(seg.length(), math.hypot(bx - ax, by - ay), rel_tol=1e-12)
