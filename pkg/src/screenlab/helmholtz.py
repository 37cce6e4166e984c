"""Sound-soft scattering by an open arc via the first-kind single-layer equation.

The scattered field is the single-layer potential

    u_s(x) = -(i/4) int_Gamma H0(k|x - y|) rho(y) ds(y),

and the density solves -(i/4) int H0(k|x-y|) rho ds = -u_i(x) on the arc. The
density is written rho(p(t)) |p'(t)| = psi(t) / sqrt(1 - t^2), so the unknown
psi is smooth up to the tips. The logarithmic part of the kernel is integrated
exactly against Chebyshev interpolants (see :func:`quadrature.log_weights`),
the remainder by Gauss-Chebyshev (the midpoint rule in s = arccos t).
"""

from __future__ import annotations

import logging
import math
import warnings
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg

from . import specfun
from .arcgeom import Arc
from .errors import DomainError, IllConditioningWarning, NearBoundaryError, SolverError
from .quadrature import cheb_coefficients, cheb_eval, cheb_nodes, layer_integral, log_weights

logger = logging.getLogger(__name__)

CONDITION_WARN = 1e12
NEAR_BOUNDARY = 1e-12
_INV_2PI = 1.0 / (2.0 * math.pi)


def _check_k(k: float) -> float:
    k = float(k)
    if not (math.isfinite(k) and k > 0.0):
        raise DomainError("wavenumber must be finite and positive")
    return k


@dataclass(frozen=True)
class IncidentWave:
    """Plane wave exp(i k <direction, x>)."""

    direction: tuple[float, float]
    k: float

    def __post_init__(self):
        d = tuple(float(v) for v in self.direction)
        if abs(math.hypot(*d) - 1.0) > 1e-14:
            raise DomainError("incidence direction must be a unit vector")
        object.__setattr__(self, "direction", d)
        object.__setattr__(self, "k", _check_k(self.k))

    @classmethod
    def from_angle(cls, angle: float, k: float) -> "IncidentWave":
        return cls((math.cos(angle), math.sin(angle)), k)

    @property
    def angle(self) -> float:
        return math.atan2(self.direction[1], self.direction[0])

    def __call__(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        return np.exp(1j * self.k * (x[..., 0] * self.direction[0] + x[..., 1] * self.direction[1]))


@dataclass(frozen=True, eq=False)
class Density:
    """Smooth density factor psi at the Chebyshev nodes of ``arc``.

    ``k = 0`` marks an electrostatic (logarithmic) density.
    """

    arc: Arc
    k: float
    values: np.ndarray
    nodes: np.ndarray = field(init=False)

    def __post_init__(self):
        v = np.asarray(self.values)
        if v.ndim != 1 or len(v) < 8:
            raise DomainError("density needs at least 8 node values")
        if not np.all(np.isfinite(v)):
            raise SolverError("density has non-finite values")
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "nodes", cheb_nodes(len(v))[0])

    @property
    def n(self) -> int:
        return len(self.values)

    @cached_property
    def coefficients(self) -> np.ndarray:
        return cheb_coefficients(self.values)

    def psi(self, t) -> np.ndarray:
        """Chebyshev interpolant of the smooth factor at arbitrary t in [-1, 1]."""
        return cheb_eval(self.coefficients, t)

    def rho(self, t) -> np.ndarray:
        """Arc-length density rho(p(t)) for t in (-1, 1)."""
        t = np.asarray(t, dtype=float)
        return self.psi(t) / (np.sqrt((1.0 - t) * (1.0 + t)) * self.arc.speed(t))

    def total(self) -> complex:
        """int_Gamma rho ds, by the Gauss-Chebyshev rule."""
        return complex(math.pi / self.n * np.sum(self.values))


@dataclass(frozen=True, eq=False)
class FarField:
    angles: np.ndarray
    values: np.ndarray
    theta: float
    k: float

    def __post_init__(self):
        if len(self.angles) < 16:
            raise DomainError("far field needs at least 16 directions")


@dataclass(frozen=True, eq=False)
class LinearSystem:
    """Discrete single-layer operator on ``arc`` at the Chebyshev nodes."""

    arc: Arc
    k: float
    matrix: np.ndarray
    condition: float

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @cached_property
    def points(self) -> np.ndarray:
        return self.arc.eval(cheb_nodes(self.n)[0])

    def rhs(self, incident: IncidentWave) -> np.ndarray:
        return -incident(self.points)

    @cached_property
    def _lu(self):
        return scipy.linalg.lu_factor(self.matrix)

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        if self.condition > 1.0 / np.finfo(float).eps:
            raise SolverError(f"singular single-layer system (cond ~ {self.condition:.3e})",
                              self.condition)
        x = scipy.linalg.lu_solve(self._lu, rhs)
        if not np.all(np.isfinite(x)):
            raise SolverError("linear solve produced non-finite values", self.condition)
        return x


def _smooth_kernel(k: float, r: np.ndarray, dt: np.ndarray, speed_diag) -> tuple[np.ndarray, np.ndarray]:
    """J0(kr) and the smooth remainder M of -(i/4) H0(kr) - (1/2pi) J0(kr) ln|t - tau|.

    Entries with dt == 0 take the diagonal limit using ``speed_diag``.
    """
    diag = dt == 0.0
    z = np.where(diag, 0.0, k * r)
    split = specfun.kernel_split(z)
    j0 = 0.5 * math.pi * split.log_coefficient
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio = np.where(diag, speed_diag, r / np.where(diag, 1.0, dt))
    m = _INV_2PI * j0 * (math.log(k) + np.log(ratio)) - 0.25j * split.smooth_part
    return j0, m


def assemble(arc: Arc, k: float, n: int) -> LinearSystem:
    """Nystrom matrix A with (A psi)_i ~ -(i/4) int H0(k|p(t_i) - y|) rho(y) ds(y)."""
    k = _check_k(k)
    if n < 8 or n % 2:
        raise DomainError("node count must be even and at least 8")
    t, _ = cheb_nodes(n)
    p = arc.eval(t)
    r = np.linalg.norm(p[:, None, :] - p[None, :, :], axis=-1)
    dt = np.abs(t[:, None] - t[None, :])
    speed = arc.speed(t)
    j0, m = _smooth_kernel(k, r, dt, np.broadcast_to(speed[:, None], r.shape))
    a = _INV_2PI * log_weights(t, n) * j0 + (math.pi / n) * m
    cond = float(np.linalg.cond(a))
    if cond > CONDITION_WARN:
        warnings.warn(f"single-layer matrix condition number {cond:.3e}", IllConditioningWarning,
                      stacklevel=2)
    logger.debug("assembled N=%d k=%g cond=%.3e", n, k, cond)
    return LinearSystem(arc, k, a, cond)


def solve_density(arc: Arc, incident: IncidentWave, n: int) -> Density:
    system = assemble(arc, incident.k, n)
    return Density(arc, incident.k, system.solve(system.rhs(incident)))


def boundary_trace(density: Density, t) -> np.ndarray:
    """Single-layer potential evaluated on the arc at parameters t (any, not only nodes)."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    n = density.n
    nodes = density.nodes
    arc = density.arc
    p = arc.eval(t)
    q = arc.eval(nodes)
    r = np.linalg.norm(p[:, None, :] - q[None, :, :], axis=-1)
    dt = np.abs(t[:, None] - nodes[None, :])
    dt = np.where(dt < 1e-15, 0.0, dt)
    speed = np.broadcast_to(arc.speed(t)[:, None], r.shape)
    j0, m = _smooth_kernel(density.k, r, dt, speed)
    row = _INV_2PI * log_weights(t, n) * j0 + (math.pi / n) * m
    return row @ density.values


def check_points(n: int) -> np.ndarray:
    """4n parameters interleaved with (never equal to) the n Chebyshev nodes."""
    s = (np.arange(4 * n) + 0.25) * math.pi / (4 * n)
    return np.cos(s)


def boundary_residual(density: Density, incident: IncidentWave) -> float:
    """max |u_s + u_i| over the off-node check points on the arc."""
    t = check_points(density.n)
    total = boundary_trace(density, t) + incident(density.arc.eval(t))
    return float(np.max(np.abs(total)))


def _hankel_kernel(k):
    def kern(z, y):
        r = np.linalg.norm(z[:, None, :] - y[None, :, :], axis=-1)
        return -0.25j * specfun.hankel1_0(k * r)
    return kern


def eval_scattered(density: Density, x) -> np.ndarray:
    """Scattered field at points x off the arc (shape (..., 2))."""
    x = np.asarray(x, dtype=float)
    shape = x.shape[:-1]
    pts = x.reshape(-1, 2)
    if np.any(density.arc.distance(pts) < NEAR_BOUNDARY):
        raise NearBoundaryError("evaluation point on the arc; use boundary_trace")
    if not np.any(density.values):
        return np.zeros(shape, dtype=complex)
    vals = layer_integral(density.arc, density.coefficients, _hankel_kernel(density.k), pts, density.n)
    return vals.reshape(shape)


def far_field_constant(k: float) -> complex:
    """c_k with u_s(R xhat) ~ exp(ikR)/sqrt(R) * c_k int exp(-ik <xhat, y>) rho ds."""
    return -0.25j * math.sqrt(2.0 / (math.pi * k)) * complex(math.cos(-0.25 * math.pi),
                                                              math.sin(-0.25 * math.pi))


def far_field_at(density: Density, angles) -> np.ndarray:
    angles = np.atleast_1d(np.asarray(angles, dtype=float))
    xhat = np.stack([np.cos(angles), np.sin(angles)], axis=-1)
    y = density.arc.eval(density.nodes)
    phase = np.exp(-1j * density.k * (xhat @ y.T))
    return far_field_constant(density.k) * (math.pi / density.n) * (phase @ density.values)


def far_field(density: Density, m: int, theta: float = float("nan")) -> FarField:
    """Far-field pattern on m equispaced directions in [0, 2 pi)."""
    if m < 16:
        raise DomainError("far field needs at least 16 directions")
    angles = 2.0 * math.pi * np.arange(m) / m
    return FarField(angles, far_field_at(density, angles), theta, density.k)


def far_field_for(arc: Arc, incident: IncidentWave, n: int, m: int) -> FarField:
    return far_field(solve_density(arc, incident, n), m, incident.angle)


def reciprocity_check(arc: Arc, k: float, theta1: float, theta2: float, n: int) -> float:
    """|u_inf(-theta2; theta1) - u_inf(-theta1; theta2)| with incidence angles in radians."""
    if theta1 == theta2:
        return 0.0
    system = assemble(arc, k, n)
    out = []
    for a, b in ((theta1, theta2), (theta2, theta1)):
        inc = IncidentWave.from_angle(a, k)
        dens = Density(arc, k, system.solve(system.rhs(inc)))
        out.append(far_field_at(dens, [b + math.pi])[0])
    return float(abs(out[0] - out[1]))
