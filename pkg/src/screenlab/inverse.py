"""Single-measurement problems: synthetic data, arc reconstruction, uniqueness probes.

Far-field data come from one incident plane wave; electrostatic data are the
Cauchy pair (u, du/dr) on a circle enclosing the screen. Reconstruction is a
damped Gauss-Newton (Levenberg-Marquardt) iteration over a low-dimensional
arc parametrization with a forward-difference Jacobian.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Sequence

import numpy as np

from .arcgeom import Arc, CircularArc, Segment, SplineArc
from .electrostatic import CauchyData, cauchy_data, eval_gradient, solve_equilibrium
from .errors import ConfigError, DegenerateArcError, DegenerateCapacityError, DomainError, SolverError
from .helmholtz import FarField, IncidentWave, far_field, far_field_for, solve_density
from .singular import ray_exponent

logger = logging.getLogger(__name__)

DEFAULT_N = 64
SINGULAR_BOUND = -0.3
SAME_POINT_TOL = 1e-6


class MeasurementKind(str, Enum):
    FAR_FIELD = "FarFieldSingleIncidence"
    CAUCHY = "ElectrostaticCauchy"


@dataclass(frozen=True, eq=False)
class Measurement:
    """Synthetic data with the settings needed to reproduce the forward map.

    ``n`` records the node count used to generate the payload, so an inversion
    can deliberately use a different discretization.
    """

    kind: MeasurementKind
    payload: FarField | CauchyData
    noise_level: float = 0.0
    seed: int = 0
    n: int = DEFAULT_N

    def __post_init__(self):
        kind = MeasurementKind(self.kind)
        object.__setattr__(self, "kind", kind)
        if not 0.0 <= self.noise_level < 1.0:
            raise DomainError("noise level must lie in [0, 1)")
        expected = FarField if kind is MeasurementKind.FAR_FIELD else CauchyData
        if not isinstance(self.payload, expected):
            raise DomainError(f"{kind.value} measurement needs a {expected.__name__} payload")

    def vector(self) -> np.ndarray:
        """Data as one real vector (real parts, then imaginary parts for far fields)."""
        return _as_vector(self.payload)


def _as_vector(payload) -> np.ndarray:
    if isinstance(payload, FarField):
        return np.concatenate([payload.values.real, payload.values.imag])
    return payload.stacked()


def _relative_gaussian(rng: np.random.Generator, values: np.ndarray, level: float) -> np.ndarray:
    """Perturbation with RMS equal to ``level`` times the RMS of ``values``."""
    scale = level * np.linalg.norm(values) / math.sqrt(values.size)
    if np.iscomplexobj(values):
        z = rng.standard_normal(values.shape) + 1j * rng.standard_normal(values.shape)
        return scale * z / math.sqrt(2.0)
    return scale * rng.standard_normal(values.shape)


def simulate(arc: Arc, kind, *, k: float = 1.0, theta: float = 0.0, m: int = 64,
             circle: tuple[tuple[float, float], float] = ((0.0, 0.0), 3.0),
             noise_level: float = 0.0, seed: int = 0, n: int = DEFAULT_N) -> Measurement:
    """Forward data for ``arc`` plus seeded relative Gaussian noise.

    ``theta`` is the incidence angle in radians (far field); ``circle`` is
    (center, radius) of the Cauchy-data circle.
    """
    kind = MeasurementKind(kind)
    rng = np.random.default_rng(seed)
    if kind is MeasurementKind.FAR_FIELD:
        ff = far_field_for(arc, IncidentWave.from_angle(theta, k), n, m)
        if noise_level > 0:
            ff = FarField(ff.angles, ff.values + _relative_gaussian(rng, ff.values, noise_level),
                          ff.theta, ff.k)
        payload = ff
    else:
        center, radius = circle
        data = cauchy_data(solve_equilibrium(arc, n), center, radius, m)
        if noise_level > 0:
            data = CauchyData(data.center, data.radius, data.angles,
                              data.u_values + _relative_gaussian(rng, data.u_values, noise_level),
                              data.du_dr_values + _relative_gaussian(rng, data.du_dr_values, noise_level))
        payload = data
    return Measurement(kind, payload, noise_level, seed, n)


def forward_vector(arc: Arc, meas: Measurement, n: int) -> np.ndarray:
    """Noiseless data for ``arc`` under the settings of ``meas``."""
    p = meas.payload
    if meas.kind is MeasurementKind.FAR_FIELD:
        dens = solve_density(arc, IncidentWave.from_angle(p.theta, p.k), n)
        return _as_vector(far_field(dens, len(p.angles), p.theta))
    return cauchy_data(solve_equilibrium(arc, n), p.center, p.radius, len(p.angles)).stacked()


# -- parametrizations -------------------------------------------------------

@dataclass(frozen=True)
class Parametrization:
    """Map between parameter vectors and arcs.

    ``"circular"`` uses (cx, cy, r, alpha0, alpha1); ``"spline"`` uses the
    flattened control points of a SplineArc with ``control_points`` points.
    """

    name: str = "circular"
    control_points: int = 6

    def __post_init__(self):
        if self.name not in ("circular", "spline"):
            raise ConfigError(f"unknown parametrization {self.name!r}")
        if self.name == "spline" and self.control_points < 4:
            raise ConfigError("spline parametrization needs at least 4 control points")

    def to_params(self, arc: Arc) -> np.ndarray:
        if self.name == "circular":
            if not isinstance(arc, CircularArc):
                raise ConfigError("circular parametrization needs a CircularArc initial guess")
            return np.array([*arc.center, arc.radius, *arc.angles])
        t = np.linspace(-1.0, 1.0, self.control_points)
        return arc.eval(t).ravel()

    def to_arc(self, q) -> Arc:
        q = np.asarray(q, dtype=float)
        if self.name == "circular":
            return CircularArc((q[0], q[1]), q[2], (q[3], q[4]))
        return SplineArc(tuple(map(tuple, q.reshape(-1, 2))))


@dataclass(frozen=True)
class ReconstructionConfig:
    parametrization: Parametrization = field(default_factory=Parametrization)
    lam: float = 1e-6
    max_iterations: int = 30
    step_tolerance: float = 1e-9
    jacobian_step: float = 1e-6
    n: int = DEFAULT_N

    def __post_init__(self):
        if self.lam < 0:
            raise ConfigError("regularization parameter must be non-negative")
        if self.max_iterations < 1:
            raise ConfigError("max_iterations must be at least 1")
        if self.jacobian_step <= 0 or self.step_tolerance <= 0:
            raise ConfigError("step sizes must be positive")


@dataclass(frozen=True, eq=False)
class ReconstructionResult:
    arc: Arc
    residuals: list[float]
    converged: bool
    iterations: int
    hausdorff: float | None = None


def _jacobian(fun: Callable, q: np.ndarray, f0: np.ndarray, h: float) -> np.ndarray:
    jac = np.empty((f0.size, q.size))
    for i in range(q.size):
        dq = h * max(1.0, abs(q[i]))
        qp = q.copy()
        qp[i] += dq
        jac[:, i] = (fun(qp) - f0) / dq
    return jac


def reconstruct(meas: Measurement, config: ReconstructionConfig, initial: Arc,
                truth: Arc | None = None) -> ReconstructionResult:
    """Levenberg-Marquardt fit of the arc parameters to the measured data.

    Residual norms are relative to the data norm. A trial step is rejected,
    and the damping multiplied by 10, when it does not lower the residual or
    produces an invalid arc; accepted steps divide the damping by 10, down to
    the configured Tikhonov level. The run has converged once a step is
    smaller than ``step_tolerance`` relative to the parameter vector.
    """
    par = config.parametrization
    data = meas.vector()
    scale = max(float(np.linalg.norm(data)), 1e-300)

    def residual(q):
        return (forward_vector(par.to_arc(q), meas, config.n) - data) / scale

    q = par.to_params(initial)
    r = residual(q)
    history = [float(np.linalg.norm(r))]
    lam = config.lam
    converged = history[0] == 0.0
    iterations = 0
    while not converged and iterations < config.max_iterations:
        iterations += 1
        jac = _jacobian(residual, q, r, config.jacobian_step)
        jtj = jac.T @ jac
        grad = jac.T @ r
        floor = 1e-12 * max(float(np.trace(jtj)) / q.size, 1e-300)
        accepted = stalled = False
        for _ in range(16):
            mu = max(lam, floor)
            step = np.linalg.solve(jtj + mu * np.eye(q.size), -grad)
            if np.linalg.norm(step) < config.step_tolerance * max(np.linalg.norm(q), 1e-300):
                stalled = True
                break
            try:
                r_new = residual(q + step)
            except (DegenerateArcError, DomainError, SolverError) as exc:
                logger.debug("iteration %d: rejected invalid iterate (%s)", iterations, exc)
                lam = 10.0 * mu
                continue
            if np.linalg.norm(r_new) < history[-1]:
                accepted = True
                break
            lam = 10.0 * mu
        if stalled:
            # even the damped steps are below tolerance: a stationary point
            converged = True
            break
        if not accepted:
            logger.info("iteration %d: no descent step found", iterations)
            break
        q = q + step
        r = r_new
        history.append(float(np.linalg.norm(r)))
        lam = max(lam / 10.0, config.lam)
        rel = float(np.linalg.norm(step) / max(np.linalg.norm(q), 1e-300))
        logger.debug("iteration %d: residual %.3e, step %.3e", iterations, history[-1], rel)
        converged = rel < config.step_tolerance or history[-1] == 0.0
    arc = par.to_arc(q)
    hd = arc.hausdorff(truth) if truth is not None else None
    return ReconstructionResult(arc, history, converged, iterations, hd)


# -- uniqueness experiments -------------------------------------------------

def relative_distance(a: np.ndarray, b: np.ndarray) -> float:
    """2 |a - b| / (|a| + |b|), symmetric in its arguments."""
    na, nb = float(np.linalg.norm(a)), float(np.linalg.norm(b))
    if na + nb == 0.0:
        return 0.0
    return 2.0 * float(np.linalg.norm(a - b)) / (na + nb)


def far_field_discrepancy(arc1: Arc, arc2: Arc, k: float, theta: float, m: int,
                          n: int = DEFAULT_N) -> float:
    """Relative L2 distance of the far fields of two arcs for one incident wave."""
    inc = IncidentWave.from_angle(theta, k)
    f1 = far_field_for(arc1, inc, n, m).values
    f2 = f1 if arc2 == arc1 else far_field_for(arc2, inc, n, m).values
    return relative_distance(f1, f2)


def solver_floor(arc: Arc, k: float, theta: float, m: int, n: int = DEFAULT_N) -> float:
    """Discretization error proxy: relative far-field change from n to 2n nodes."""
    inc = IncidentWave.from_angle(theta, k)
    return relative_distance(far_field_for(arc, inc, n, m).values,
                             far_field_for(arc, inc, 2 * n, m).values)


@dataclass(frozen=True)
class EndpointReport:
    """Gradient exponents at one endpoint of arc 1 that is not on arc 2."""

    endpoint: tuple[float, float]
    foreign_exponent: float | None
    own_exponent: float | None
    foreign_regular: bool
    own_singular: bool


@dataclass(frozen=True)
class CauchyUniquenessReport:
    data_distance: float
    endpoints: tuple[EndpointReport, ...]

    @property
    def mechanism_holds(self) -> bool:
        """Every foreign endpoint is regular for arc 2 and singular for arc 1."""
        return all(e.foreign_regular and e.own_singular for e in self.endpoints)


def cauchy_uniqueness_experiment(arc1: Arc, arc2: Arc, circle=((0.0, 0.0), 3.0), m: int = 256,
                                 n: int = DEFAULT_N, threshold: float = -0.05) -> CauchyUniquenessReport:
    """Compare Cauchy data of two conductors and probe the tips of arc 1.

    Each tip of arc 1 lying off arc 2 is approached along the outward tangent
    of arc 1. Arc 2's potential should be regular there while arc 1's own
    potential has the inverse square-root gradient singularity.
    """
    center, radius = circle
    sol1 = solve_equilibrium(arc1, n)
    if arc2 == arc1:
        return CauchyUniquenessReport(0.0, ())
    sol2 = solve_equilibrium(arc2, n)
    d1 = cauchy_data(sol1, center, radius, m).stacked()
    d2 = cauchy_data(sol2, center, radius, m).stacked()
    reports = []
    for end in (-1, 1):
        tip = np.array(arc1.endpoints[int(end > 0)])
        dist = float(arc2.distance(tip[None, :])[0])
        if dist < SAME_POINT_TOL:
            continue
        tau, _ = arc1.tangent_normal(float(end))
        direction = tau * end
        probe = min(0.1, dist / 6.0)
        foreign = ray_exponent(lambda x: eval_gradient(sol2, x), tip, probe, direction)
        own = ray_exponent(lambda x: eval_gradient(sol1, x), tip, probe, direction)
        fe = None if foreign is None else foreign.exponent
        oe = None if own is None else own.exponent
        reports.append(EndpointReport(
            (float(tip[0]), float(tip[1])), fe, oe,
            foreign_regular=fe is None or fe > threshold,
            own_singular=oe is not None and oe < SINGULAR_BOUND))
    return CauchyUniquenessReport(relative_distance(d1, d2), tuple(reports))


# -- random pairs and batches ----------------------------------------------

BOX = 1.5


def random_arc(rng: np.random.Generator) -> Arc:
    """A segment or circular arc inside the box [-1.5, 1.5]^2 with length >= 0.5."""
    while True:
        if rng.random() < 0.5:
            a, b = rng.uniform(-BOX, BOX, size=(2, 2))
            if np.linalg.norm(a - b) >= 0.5:
                return Segment(tuple(a), tuple(b))
        else:
            r = rng.uniform(0.4, 1.5)
            span = rng.uniform(0.6, 1.5 * math.pi)
            a0 = rng.uniform(-math.pi, math.pi)
            c = rng.uniform(-BOX + 0.2, BOX - 0.2, size=2)
            arc = CircularArc(tuple(c), r, (a0, a0 + span))
            pts = arc._dense[1]
            if np.all(np.abs(pts) <= BOX) and arc.length() >= 0.5:
                return arc


def _capacity_ok(arc: Arc) -> bool:
    try:
        return abs(solve_equilibrium(arc, 32).robin_constant) > 1e-3
    except DegenerateCapacityError:
        return False


def random_pairs(count: int, seed: int, min_hausdorff: float = 0.05,
                 foreign_gap: float = 0.0) -> list[tuple[Arc, Arc]]:
    """Seeded pairs of distinct random arcs.

    With ``foreign_gap`` > 0, every endpoint of the first arc is at least that
    far from the second arc, and both arcs have capacity away from one.
    """
    rng = np.random.default_rng(seed)
    pairs = []
    while len(pairs) < count:
        a1, a2 = random_arc(rng), random_arc(rng)
        if a1.hausdorff(a2) < min_hausdorff:
            continue
        if foreign_gap > 0:
            ends = np.array(a1.endpoints)
            if np.min(a2.distance(ends)) < foreign_gap:
                continue
            if not (_capacity_ok(a1) and _capacity_ok(a2)):
                continue
        pairs.append((a1, a2))
    return pairs


def worker_count() -> int:
    """Thread cap from SCREENLAB_THREADS, defaulting to the CPU count."""
    raw = os.environ.get("SCREENLAB_THREADS")
    if raw:
        try:
            return max(1, int(raw))
        except ValueError as exc:
            raise ConfigError(f"SCREENLAB_THREADS must be an integer, got {raw!r}") from exc
    return os.cpu_count() or 1


def run_batch(fn: Callable, items: Sequence) -> list:
    """fn over items in a thread pool; results keep the input order."""
    workers = min(worker_count(), max(len(items), 1))
    if workers == 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, items))


@dataclass(frozen=True)
class PairDiscrepancy:
    pair_id: int
    hausdorff: float
    discrepancy: float
    floor: float


def far_field_uniqueness_batch(count: int = 100, seed: int = 0, k: float = 2.0, theta: float = 0.0,
                               m: int = 64, n: int = DEFAULT_N) -> list[PairDiscrepancy]:
    """Discrepancy and solver floor over seeded random pairs."""
    pairs = random_pairs(count, seed)

    def one(item):
        i, (a1, a2) = item
        floor = max(solver_floor(a1, k, theta, m, n), solver_floor(a2, k, theta, m, n))
        return PairDiscrepancy(i, a1.hausdorff(a2), far_field_discrepancy(a1, a2, k, theta, m, n), floor)

    return run_batch(one, list(enumerate(pairs)))


def cauchy_uniqueness_batch(count: int = 100, seed: int = 0, circle=((0.0, 0.0), 3.0), m: int = 256,
                            n: int = DEFAULT_N, gap: float = 0.3) -> list[CauchyUniquenessReport]:
    pairs = random_pairs(count, seed, foreign_gap=gap)
    return run_batch(lambda p: cauchy_uniqueness_experiment(p[0], p[1], circle, m, n), pairs)
