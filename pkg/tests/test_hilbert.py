import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import hilbert_pv
from screenlab.errors import BranchCutError, DomainError
from screenlab.hilbert import (WeightedFunction, exterior_points, finite_hilbert, hardy_trace,
                               hilbert_kernel, interior_points, mode_transforms, support_pair_check)

T0 = WeightedFunction([1.0])


def test_constant_mode_inside_vanishes():
    assert abs(finite_hilbert(T0, 0.3)) <= 1e-15


def test_constant_mode_outside():
    oracle = hilbert_pv(2.0, lambda s: 1.0)
    assert abs(oracle - math.pi / math.sqrt(3)) <= 1e-10
    assert abs(finite_hilbert(T0, 2.0) - oracle) <= 1e-8


def test_semicircle_density_inside():
    # psi = 1 - s^2 has Chebyshev coefficients (1/2, 0, -1/2)
    g = WeightedFunction([0.5, 0.0, -0.5])
    oracle = hilbert_pv(0.5, lambda s: 1 - s * s)
    assert abs(oracle - math.pi / 2) <= 1e-9
    assert abs(finite_hilbert(g, 0.5) - oracle) <= 1e-9


@pytest.mark.parametrize("n", [1, 2, 3, 6])
@pytest.mark.parametrize("t", [-0.7, 0.15, 0.9, 1.3, -2.5, 6.0])
def test_modes_against_pv_quadrature(n, t):
    tn = lambda s: math.cos(n * math.acos(s))  # noqa: E731
    assert abs(mode_transforms(n + 1, [t])[0, n] - hilbert_pv(t, tn)) <= 1e-8


def test_endpoint_rejected():
    with pytest.raises(DomainError):
        finite_hilbert(T0, 1.0)
    with pytest.raises(DomainError):
        finite_hilbert(T0, np.array([0.0, -1.0]))


def test_weighted_function_limits():
    with pytest.raises(DomainError):
        WeightedFunction(np.ones(300))
    assert WeightedFunction([1.0, 1e-3, 1e-14]).is_resolved()


def test_hardy_trace_values():
    assert hardy_trace(0.0) == 1.0
    assert abs(hardy_trace(2.0) - 1j / math.sqrt(3)) <= 1e-15
    assert abs(hardy_trace(1j) - 1 / math.sqrt(2)) <= 1e-15
    assert abs(hardy_trace(-2.0) + 1j / math.sqrt(3)) <= 1e-15


@pytest.mark.parametrize("z", [-1j, -2j, 0.5 - 1e-9j, 1.0, -1.0])
def test_hardy_trace_branch_errors(z):
    with pytest.raises(BranchCutError):
        hardy_trace(z)


def test_hardy_trace_is_upper_limit():
    t = np.concatenate([np.linspace(-3, -1.1, 7), np.linspace(-0.9, 0.9, 7), np.linspace(1.1, 3, 7)])
    assert np.max(np.abs(hardy_trace(t + 1e-12j) - hardy_trace(t))) <= 1e-9


def test_hardy_trace_solves_defining_equation():
    z = np.array([0.3 + 0.2j, -2 + 1j, 5j, 0.9 + 1e-3j])
    f = hardy_trace(z)
    assert np.max(np.abs(f**2 * (1 - z**2) - 1)) <= 1e-13


def test_hardy_trace_boundary_values_are_g_plus_i_hilbert_over_pi():
    # boundary values of an upper half-plane function: g + (i/pi) H g
    t = np.concatenate([interior_points(16), exterior_points(16)])
    g = np.where(np.abs(t) < 1, 1 / np.sqrt(np.abs(1 - t * t)), 0.0)
    assert np.max(np.abs(hardy_trace(t) - (g + 1j / math.pi * finite_hilbert(T0, t)))) <= 1e-13


def test_support_pair_constant_mode():
    inside, outside = support_pair_check(T0)
    assert inside <= 1e-10
    assert outside >= 0.5


def test_support_pair_first_mode():
    g = WeightedFunction([0.0, 1.0])
    h = finite_hilbert(g, interior_points())
    assert np.max(np.abs(np.abs(h) - math.pi)) <= 1e-10
    assert abs(support_pair_check(g)[0] - math.pi) <= 1e-10


def test_support_pair_zero():
    assert support_pair_check(WeightedFunction([0.0])) == (0.0, 0.0)


def test_random_nonconstant_densities_fail_inside():
    rng = np.random.default_rng(7)
    for _ in range(50):
        c = rng.standard_normal(50)
        assert support_pair_check(WeightedFunction(c))[0] > 1e-6


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-5, 5), min_size=2, max_size=12),
       st.integers(1, 11))
def test_nonconstant_fails_inside(coeffs, j):
    c = np.array(coeffs)
    j = min(j, len(c) - 1)
    c[j] = 1.0 if abs(c[j]) < 1e-3 else c[j]
    assert support_pair_check(WeightedFunction(c))[0] > 1e-6


@pytest.mark.parametrize("nmodes", [2, 8, 32])
def test_kernel_is_constant_mode(nmodes):
    sv, basis = hilbert_kernel(nmodes)
    assert basis.shape[1] == 1
    assert sv[1] > 1e-8
    v = basis[:, 0]
    assert abs(abs(v[0]) - 1.0) <= 1e-12


@settings(max_examples=30, deadline=None)
@given(a=st.floats(-3, 3), b=st.floats(-3, 3))
def test_linearity(a, b):
    rng = np.random.default_rng(3)
    c1, c2 = rng.standard_normal(10), rng.standard_normal(10)
    t = np.concatenate([interior_points(8), exterior_points(8)])
    lhs = finite_hilbert(WeightedFunction(a * c1 + b * c2), t)
    rhs = a * finite_hilbert(WeightedFunction(c1), t) + b * finite_hilbert(WeightedFunction(c2), t)
    assert np.max(np.abs(lhs - rhs)) <= 1e-12 * max(1.0, np.max(np.abs(rhs)))


def test_exterior_decay():
    g = WeightedFunction([1.0, 0.5, -0.25, 0.1])
    t = np.geomspace(2, 1e4, 50)
    c = np.concatenate([np.abs(finite_hilbert(g, t)) * t, np.abs(finite_hilbert(g, -t)) * t])
    assert np.all(np.isfinite(c)) and np.max(c) <= 10.0
    # leading term pi * c0 / |t|
    assert abs(c[49] - math.pi) <= 1e-3
