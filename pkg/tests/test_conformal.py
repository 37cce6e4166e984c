import cmath
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from screenlab.arcgeom import CircularArc, Segment, SplineArc, UNIT_SLIT
from screenlab.conformal import (Mobius, build_slit_map, inverse_joukowski, joukowski, slit_gradient,
                                 slit_map_deviation, slit_potential, to_complex, transplant_density)
from screenlab.electrostatic import eval_gradient, solve_equilibrium
from screenlab.errors import BranchCutError, DomainError, UnsupportedArcError
from screenlab.singular import fit_density_exponent, fit_gradient_exponent

QUARTER = CircularArc((0.0, 0.0), 1.0, (math.pi / 4, 3 * math.pi / 4))


def exterior_sample(arc, count, seed):
    rng = np.random.default_rng(seed)
    pts = rng.uniform(-3, 3, size=(4 * count, 2))
    pts = pts[arc.distance(pts) > 0.05]
    return to_complex(pts[:count])


def test_joukowski_values():
    assert abs(joukowski(cmath.exp(1j * math.pi / 3)) - 0.5) <= 1e-15
    assert joukowski(2.0) == 1.25
    assert abs(joukowski(cmath.exp(1j * math.pi)) + 1) <= 1e-15
    with pytest.raises(DomainError):
        joukowski(0.0)


def test_inverse_joukowski_values():
    assert abs(inverse_joukowski(2.0) - (2 + math.sqrt(3))) <= 1e-15
    assert abs(inverse_joukowski(1j) - 1j * (1 + math.sqrt(2))) <= 1e-15
    assert abs(inverse_joukowski(-5.0) - (-5 - math.sqrt(24))) <= 1e-14
    with pytest.raises(BranchCutError):
        inverse_joukowski(0.5)


@settings(max_examples=60, deadline=None)
@given(x=st.floats(-5, 5), y=st.floats(-5, 5))
def test_inverse_joukowski_round_trip(x, y):
    z = complex(x, y)
    if y == 0 and abs(x) <= 1:
        return
    w = inverse_joukowski(z)
    assert abs(w) >= 1 - 1e-12
    assert abs(joukowski(w) - z) <= 1e-12 * max(1, abs(z))


def test_mobius_basics():
    m = Mobius(1, 2, 3, 4)
    z = np.array([0.3 + 0.1j, -2.0 + 1j])
    assert np.allclose(m.inverse()(m(z)), z, atol=1e-14)
    with pytest.raises(DomainError):
        Mobius(1, 2, 2, 4)


def test_identity_chain_for_unit_slit():
    smap = build_slit_map(UNIT_SLIT)
    assert [name for name, _ in smap.factors] == ["identity"]
    assert smap.pole is None


def test_affine_for_shifted_segment():
    smap = build_slit_map(Segment((0.0, 0.0), (2.0, 0.0)))
    z = np.array([0.0, 1.0, 2.0, 0.5 + 2j])
    assert np.allclose(smap.forward(z), z - 1, atol=1e-15)


def test_circular_arc_endpoints():
    smap = build_slit_map(QUARTER)
    ends = smap.forward(np.array([complex(*p) for p in QUARTER.endpoints]))
    assert abs(ends[0] + 1) <= 1e-10 and abs(ends[1] - 1) <= 1e-10
    assert slit_map_deviation(smap) <= 1e-6


def test_spline_unsupported():
    with pytest.raises(UnsupportedArcError):
        build_slit_map(SplineArc(((0, 0), (1, 1), (2, 0), (3, 1))))


@pytest.mark.parametrize("arc", [UNIT_SLIT, Segment((0.3, -1.0), (2.0, 0.5)), QUARTER,
                                 CircularArc((0.5, 0.2), 2.0, (-2.0, 1.5))])
def test_forward_inverse_identity(arc):
    smap = build_slit_map(arc)
    z = exterior_sample(arc, 200, 1)
    assert np.max(np.abs(smap.inverse(smap.forward(z)) - z)) <= 1e-12
    xi = smap.exterior_map(z)
    assert np.all(np.abs(xi) > 1)
    assert np.max(np.abs(smap.exterior_inverse(xi) - z)) <= 1e-12


@pytest.mark.parametrize("arc", [Segment((0.3, -1.0), (2.0, 0.5)), QUARTER])
def test_cauchy_riemann(arc):
    smap = build_slit_map(arc)
    z = exterior_sample(arc, 100, 2)
    h = 1e-5
    dx = (smap.exterior_map(z + h) - smap.exterior_map(z - h)) / (2 * h)
    dy = (smap.exterior_map(z + 1j * h) - smap.exterior_map(z - 1j * h)) / (2 * h)
    # analytic: dy = i dx, so equal magnitudes and orthogonal arguments
    assert np.max(np.abs(dy - 1j * dx) / np.abs(dx)) <= 1e-4
    assert np.max(np.abs(smap.exterior_derivative(z) - dx) / np.abs(dx)) <= 1e-4


@pytest.mark.parametrize("arc", [UNIT_SLIT, Segment((-2.0, 1.0), (2.0, -1.0)), QUARTER,
                                 CircularArc((0.5, 0.2), 2.0, (-2.0, 1.5))])
def test_robin_constant_from_map(arc):
    smap = build_slit_map(arc)
    direct = solve_equilibrium(arc, 64, allow_degenerate=True).robin_constant
    assert abs(smap.robin_constant() - direct) <= 1e-9


def test_quarter_capacity_closed_form():
    # chord half-length sin(pi/4) times the half-angle factor: cap = sin(pi/8)
    smap = build_slit_map(QUARTER)
    assert abs(smap.robin_constant() - math.log(math.sin(math.pi / 8))) <= 1e-12


def test_exterior_potential_matches_solver():
    smap = build_slit_map(QUARTER)
    sol = solve_equilibrium(QUARTER, 64)
    from screenlab.electrostatic import eval_potential
    pts = np.array([[0.0, 0.0], [0.3, 1.5], [-2.0, -1.0], [0.0, 0.6]])
    assert np.max(np.abs(eval_potential(sol, pts) - smap.exterior_potential(pts))) <= 1e-8
    assert np.max(np.abs(eval_gradient(sol, pts) - smap.exterior_gradient(pts))) <= 1e-8


def test_transplant_identity():
    sol = solve_equilibrium(UNIT_SLIT, 32)
    moved = transplant_density(sol, build_slit_map(UNIT_SLIT))
    assert np.max(np.abs(moved.values - sol.density.values)) <= 1e-14


def test_transplant_scaled_segment_has_unit_charge():
    sol = solve_equilibrium(UNIT_SLIT, 32)
    moved = transplant_density(sol, build_slit_map(Segment((-2.0, 0.0), (2.0, 0.0))))
    assert abs(moved.total() - 1) <= 1e-12


@pytest.mark.parametrize("arc", [QUARTER, CircularArc((0.5, 0.2), 2.0, (-2.0, 1.5))])
def test_transplant_matches_direct_solve(arc):
    sol = solve_equilibrium(UNIT_SLIT, 64)
    moved = transplant_density(sol, build_slit_map(arc))
    direct = solve_equilibrium(arc, 64).density
    rel = np.max(np.abs(moved.values - direct.values)) / np.max(np.abs(direct.values))
    assert rel <= 1e-6


def test_transplant_preserves_endpoint_exponent():
    sol = solve_equilibrium(UNIT_SLIT, 64)
    moved = transplant_density(sol, build_slit_map(QUARTER))
    for end in (-1, 1):
        assert abs(fit_density_exponent(moved, end).exponent + 0.5) <= 0.05
    smap = build_slit_map(QUARTER)
    d = np.geomspace(1e-5, 1e-2, 12)
    for end in (-1, 1):
        fit = fit_gradient_exponent(smap.exterior_gradient, QUARTER, end, d)
        assert abs(fit.exponent + 0.5) <= 0.05


def test_slit_potential_and_gradient():
    x = np.array([[2.0, 0.0], [0.0, 1.0], [-3.0, 0.5]])
    assert abs(slit_potential(x[0]) - math.log(2 + math.sqrt(3))) <= 1e-15
    h = 1e-6
    for p in x:
        fd = [(slit_potential(p + e) - slit_potential(p - e)) / (2 * h)
              for e in (np.array([h, 0]), np.array([0, h]))]
        assert np.allclose(slit_gradient(p), fd, atol=1e-8)


def test_transplant_requires_slit_solution():
    with pytest.raises(DomainError):
        transplant_density(solve_equilibrium(QUARTER, 32), build_slit_map(QUARTER))
