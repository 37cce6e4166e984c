"""Electrostatic (k = 0) screen problem: equilibrium charge, potential, Cauchy data.

With unit total charge rho on the arc, U(z) = int ln|z - y| rho(y) ds(y) is
constant (the Robin constant c) on the arc, and u = U - c is the potential
that vanishes on the screen and grows like ln|z| - c at infinity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arcgeom import Arc
from .errors import DegenerateCapacityError, DomainError, GeometryError, NearBoundaryError, SolverError
from .helmholtz import Density
from .quadrature import cheb_nodes, layer_integral, log_weights

DEGENERACY_TOL = 1e-8
NEAR_BOUNDARY = 1e-12


@dataclass(frozen=True, eq=False)
class EquilibriumSolution:
    density: Density
    robin_constant: float

    @property
    def arc(self) -> Arc:
        return self.density.arc

    @property
    def capacity(self) -> float:
        return math.exp(self.robin_constant)


@dataclass(frozen=True, eq=False)
class CauchyData:
    """Trace and radial derivative of the potential on a circle enclosing the arc."""

    center: tuple[float, float]
    radius: float
    angles: np.ndarray
    u_values: np.ndarray
    du_dr_values: np.ndarray

    @property
    def points(self) -> np.ndarray:
        c = np.array(self.center)
        return c + self.radius * np.stack([np.cos(self.angles), np.sin(self.angles)], axis=-1)

    def stacked(self) -> np.ndarray:
        return np.concatenate([self.u_values, self.du_dr_values])


def log_operator(arc: Arc, n: int) -> np.ndarray:
    """Matrix of psi -> int ln|p(t_i) - y| rho(y) ds(y) at the nodes."""
    t, _ = cheb_nodes(n)
    p = arc.eval(t)
    r = np.linalg.norm(p[:, None, :] - p[None, :, :], axis=-1)
    dt = np.abs(t[:, None] - t[None, :])
    diag = np.eye(n, dtype=bool)
    with np.errstate(divide="ignore", invalid="ignore"):
        smooth = np.log(np.where(diag, 1.0, r) / np.where(diag, 1.0, dt))
    smooth[diag] = np.log(arc.speed(t))
    return log_weights(t, n) + (math.pi / n) * smooth


def solve_equilibrium(arc: Arc, n: int, allow_degenerate: bool = False) -> EquilibriumSolution:
    """Unit-charge equilibrium density and Robin constant of ``arc``.

    Raises DegenerateCapacityError when |c| < 1e-8 (capacity one) unless
    ``allow_degenerate`` is set.
    """
    if n < 8:
        raise DomainError("node count must be at least 8")
    a = log_operator(arc, n)
    big = np.zeros((n + 1, n + 1))
    big[:n, :n] = a
    big[:n, n] = -1.0
    big[n, :n] = math.pi / n
    rhs = np.zeros(n + 1)
    rhs[n] = 1.0
    try:
        x = np.linalg.solve(big, rhs)
    except np.linalg.LinAlgError as exc:
        raise SolverError(f"equilibrium system singular: {exc}") from exc
    if not np.all(np.isfinite(x)):
        raise SolverError("equilibrium solve produced non-finite values")
    c = float(x[n])
    if abs(c) < DEGENERACY_TOL and not allow_degenerate:
        raise DegenerateCapacityError(
            f"arc has logarithmic capacity 1 (Robin constant {c:.3e}); the potential "
            "is not normalisable with a nonzero constant")
    return EquilibriumSolution(Density(arc, 0.0, x[:n]), c)


def boundary_potential(sol: EquilibriumSolution, t) -> np.ndarray:
    """u = U - c on the arc at arbitrary parameters (should vanish)."""
    dens = sol.density
    t = np.atleast_1d(np.asarray(t, dtype=float))
    n = dens.n
    p = dens.arc.eval(t)
    q = dens.arc.eval(dens.nodes)
    r = np.linalg.norm(p[:, None, :] - q[None, :, :], axis=-1)
    dt = np.abs(t[:, None] - dens.nodes[None, :])
    on = dt < 1e-15
    with np.errstate(divide="ignore", invalid="ignore"):
        smooth = np.log(np.where(on, 1.0, r) / np.where(on, 1.0, dt))
    smooth = np.where(on, np.log(dens.arc.speed(t))[:, None], smooth)
    row = log_weights(t, n) + (math.pi / n) * smooth
    return row @ dens.values - sol.robin_constant


def _log_kernel(z, y):
    return np.log(np.linalg.norm(z[:, None, :] - y[None, :, :], axis=-1))


def _grad_kernel(z, y):
    d = z[:, None, :] - y[None, :, :]
    return d / np.sum(d * d, axis=-1)[..., None]


def _checked_points(sol, z):
    z = np.asarray(z, dtype=float)
    pts = z.reshape(-1, 2)
    if np.any(sol.arc.distance(pts) < NEAR_BOUNDARY):
        raise NearBoundaryError("evaluation point on the screen")
    return z.shape[:-1], pts


def eval_potential(sol: EquilibriumSolution, z) -> np.ndarray:
    """u(z) = U(z) - c for points z (..., 2) off the arc."""
    shape, pts = _checked_points(sol, z)
    d = sol.density
    u = layer_integral(d.arc, d.coefficients, _log_kernel, pts, d.n).real - sol.robin_constant
    return u.reshape(shape)


def eval_gradient(sol: EquilibriumSolution, z) -> np.ndarray:
    """grad u(z), shape (..., 2), from the differentiated kernel."""
    shape, pts = _checked_points(sol, z)
    d = sol.density
    g = layer_integral(d.arc, d.coefficients, _grad_kernel, pts, d.n).real
    return g.reshape(shape + (2,))


def cauchy_data(sol: EquilibriumSolution, center=(0.0, 0.0), radius: float = 3.0, m: int = 256) -> CauchyData:
    """Potential and its radial derivative at m equispaced points of a circle."""
    if m < 32:
        raise DomainError("Cauchy data needs at least 32 samples")
    c = np.array(center, dtype=float)
    _, pts = sol.arc._dense
    if np.max(np.linalg.norm(pts - c, axis=-1)) >= radius:
        raise GeometryError("arc is not strictly inside the measurement circle")
    angles = 2.0 * math.pi * np.arange(m) / m
    rhat = np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    x = c + radius * rhat
    u = eval_potential(sol, x)
    du = np.sum(eval_gradient(sol, x) * rhat, axis=-1)
    return CauchyData((float(c[0]), float(c[1])), float(radius), angles, u, du)


def gauss_flux(data: CauchyData) -> float:
    """Trapezoidal value of the closed-circle integral of du/dr."""
    return float(2.0 * math.pi * data.radius / len(data.angles) * np.sum(data.du_dr_values))
