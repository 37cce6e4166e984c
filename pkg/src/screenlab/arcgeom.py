"""Screens in the plane as parametrized open arcs.

Every arc is parametrized over the canonical interval [-1, 1], so the unit
slit is ``Segment((-1, 0), (1, 0))`` with the identity parametrization.
Points are numpy arrays with a trailing axis of length 2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any

import numpy as np
from scipy.interpolate import make_interp_spline

from .errors import ConfigError, DegenerateArcError, DomainError

REGULARITY_SAMPLES = 256
INJECTIVITY_MIN_GAP = 1.0 / 64.0
_DOMAIN_SLACK = 1e-14


def _as_param(t) -> np.ndarray:
    t = np.asarray(t, dtype=float)
    if not np.all(np.isfinite(t)):
        raise DomainError("parameter must be finite")
    if np.any(t < -1.0 - _DOMAIN_SLACK) or np.any(t > 1.0 + _DOMAIN_SLACK):
        raise DomainError("parameter outside [-1, 1]")
    return np.clip(t, -1.0, 1.0)


def _point(p) -> tuple[float, float]:
    p = tuple(float(v) for v in p)
    if len(p) != 2 or not all(math.isfinite(v) for v in p):
        raise DegenerateArcError(f"not a finite plane point: {p!r}")
    return p


@dataclass(frozen=True)
class Arc:
    """Base class; subclasses implement ``_position`` and ``_derivative``."""

    kind = "abstract"

    def __post_init__(self):
        self._validate()

    # -- subclass hooks -------------------------------------------------
    def _position(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def _derivative(self, t: np.ndarray, order: int) -> np.ndarray:
        raise NotImplementedError

    def to_dict(self) -> dict[str, Any]:
        raise NotImplementedError

    def transformed(self, scale: float = 1.0, angle: float = 0.0, shift=(0.0, 0.0)) -> "Arc":
        """Image of the arc under x -> scale * R(angle) x + shift."""
        raise NotImplementedError

    # -- public geometry ------------------------------------------------
    def eval(self, t) -> np.ndarray:
        """Point p(t); endpoints are returned exactly at t = -1 and t = 1."""
        t = _as_param(t)
        p = self._position(t)
        a, b = np.array(self.endpoints[0]), np.array(self.endpoints[1])
        p = np.where((t == -1.0)[..., None], a, p)
        p = np.where((t == 1.0)[..., None], b, p)
        return p

    def eval_complex(self, t) -> np.ndarray:
        p = self.eval(t)
        return p[..., 0] + 1j * p[..., 1]

    def derivative(self, t, order: int = 1) -> np.ndarray:
        return self._derivative(_as_param(t), order)

    def speed(self, t) -> np.ndarray:
        """|p'(t)|, length per unit parameter."""
        return np.linalg.norm(self.derivative(t), axis=-1)

    def tangent_normal(self, t) -> tuple[np.ndarray, np.ndarray]:
        """Unit tangent and the unit normal obtained by a +pi/2 rotation."""
        d = self.derivative(t)
        s = np.linalg.norm(d, axis=-1, keepdims=True)
        if np.any(s == 0.0):
            raise DegenerateArcError("zero speed: tangent undefined")
        tau = d / s
        nu = np.stack([-tau[..., 1], tau[..., 0]], axis=-1)
        return tau, nu

    @property
    def endpoints(self) -> tuple[tuple[float, float], tuple[float, float]]:
        raise NotImplementedError

    def length(self) -> float:
        x, w = np.polynomial.legendre.leggauss(64)
        return float(np.sum(w * self.speed(x)))

    def arclength_from(self, end: int, t) -> np.ndarray:
        """Arc length between the tip ``end`` (+1 or -1) and parameter t."""
        t = np.atleast_1d(_as_param(t))
        return self._length_from_tip(end, 1.0 - end * t)

    def _length_from_tip(self, end: int, delta: np.ndarray) -> np.ndarray:
        # length of p over the parameter interval of width delta at the tip
        x, w = np.polynomial.legendre.leggauss(48)
        delta = np.atleast_1d(np.asarray(delta, dtype=float))
        u = 0.5 * delta[:, None] * (x[None, :] + 1.0)
        sp = self.speed(end * (1.0 - u))
        return 0.5 * delta * np.sum(w * sp, axis=1)

    def param_at_distance(self, end: int, d) -> np.ndarray:
        """Parameter whose arc-length distance to the tip ``end`` equals d."""
        from scipy.optimize import brentq

        d = np.atleast_1d(np.asarray(d, dtype=float))
        total = self.length()
        out = np.empty(d.shape)
        for i, di in enumerate(d):
            if not 0.0 <= di <= total * (1.0 + 1e-12):
                raise DomainError("distance exceeds arc length")
            if di == 0.0:
                out[i] = float(end)
                continue
            f = lambda delta: self._length_from_tip(end, delta)[0] - di
            if f(2.0) <= 0.0:
                out[i] = float(-end)
                continue
            delta = brentq(f, 0.0, 2.0, xtol=1e-300, rtol=1e-15)
            out[i] = end * (1.0 - delta)
        return out

    # -- distance queries -----------------------------------------------
    @cached_property
    def _dense(self) -> tuple[np.ndarray, np.ndarray]:
        t = -np.cos(np.linspace(0.0, math.pi, 2049))
        return t, self.eval(t)

    def closest_point(self, x) -> tuple[np.ndarray, np.ndarray]:
        """Parameter of the nearest arc point and the distance, for points x (..., 2)."""
        x = np.asarray(x, dtype=float)
        shape = x.shape[:-1]
        xf = x.reshape(-1, 2)
        tgrid, pgrid = self._dense
        idx = np.empty(len(xf), dtype=int)
        for lo in range(0, len(xf), 512):
            chunk = xf[lo:lo + 512]
            dist2 = np.sum((chunk[:, None, :] - pgrid[None, :, :]) ** 2, axis=-1)
            idx[lo:lo + 512] = np.argmin(dist2, axis=1)
        t = tgrid[idx]
        # Newton on |p(t) - x|^2 with the bracket of neighbouring samples
        lo_b = tgrid[np.maximum(idx - 1, 0)]
        hi_b = tgrid[np.minimum(idx + 1, len(tgrid) - 1)]
        for _ in range(12):
            r = self._position(t) - xf
            d1 = self._derivative(t, 1)
            d2 = self._derivative(t, 2)
            g = np.sum(r * d1, axis=-1)
            h = np.sum(d1 * d1, axis=-1) + np.sum(r * d2, axis=-1)
            step = np.where(h > 0, g / np.where(h > 0, h, 1.0), 0.0)
            t = np.clip(t - step, lo_b, hi_b)
        dist = np.linalg.norm(self.eval(t) - xf, axis=-1)
        # tips may win over the refined interior candidate
        for tip in (-1.0, 1.0):
            dt = np.linalg.norm(xf - np.array(self.endpoints[int(tip > 0)]), axis=-1)
            better = dt < dist
            t = np.where(better, tip, t)
            dist = np.where(better, dt, dist)
        return t.reshape(shape), dist.reshape(shape)

    def distance(self, x) -> np.ndarray:
        return self.closest_point(x)[1]

    def hausdorff(self, other: "Arc", samples: int = 512) -> float:
        """Hausdorff distance, one side sampled and the other projected exactly."""
        t = -np.cos(np.linspace(0.0, math.pi, samples))
        d_ab = float(np.max(other.distance(self.eval(t))))
        d_ba = float(np.max(self.distance(other.eval(t))))
        return max(d_ab, d_ba)

    # -- validation -----------------------------------------------------
    def _validate(self) -> None:
        t = np.linspace(-1.0, 1.0, REGULARITY_SAMPLES)
        s = np.linalg.norm(self._derivative(t, 1), axis=-1)
        if not np.all(np.isfinite(s)) or np.any(s <= 0.0):
            raise DegenerateArcError("parametrization has zero speed")
        a, b = self.endpoints
        if a == b:
            raise DegenerateArcError("endpoints coincide")
        p = self._position(t)
        gap = np.abs(t[:, None] - t[None, :])
        sep = np.linalg.norm(p[:, None, :] - p[None, :, :], axis=-1)
        mask = gap >= INJECTIVITY_MIN_GAP
        scale = float(np.max(s))
        if np.min(sep[mask] / gap[mask]) <= 1e-9 * scale or _polyline_crosses(p):
            raise DegenerateArcError("arc is not injective (self-intersection)")


@dataclass(frozen=True)
class Segment(Arc):
    a: tuple[float, float]
    b: tuple[float, float]

    kind = "segment"

    def __post_init__(self):
        object.__setattr__(self, "a", _point(self.a))
        object.__setattr__(self, "b", _point(self.b))
        super().__post_init__()

    @property
    def endpoints(self):
        return self.a, self.b

    def _position(self, t):
        a, b = np.array(self.a), np.array(self.b)
        t = np.asarray(t)[..., None]
        return 0.5 * (1.0 - t) * a + 0.5 * (1.0 + t) * b

    def _derivative(self, t, order):
        t = np.asarray(t)
        d = 0.5 * (np.array(self.b) - np.array(self.a)) if order == 1 else np.zeros(2)
        return np.broadcast_to(d, t.shape + (2,)).copy()

    def to_dict(self):
        return {"kind": "segment", "a": list(self.a), "b": list(self.b)}

    def transformed(self, scale=1.0, angle=0.0, shift=(0.0, 0.0)):
        f = _affine(scale, angle, shift)
        return Segment(f(self.a), f(self.b))


@dataclass(frozen=True)
class CircularArc(Arc):
    """Arc of the circle |x - center| = radius for angles in [angles[0], angles[1]]."""

    center: tuple[float, float]
    radius: float
    angles: tuple[float, float]

    kind = "circular"

    def __post_init__(self):
        object.__setattr__(self, "center", _point(self.center))
        object.__setattr__(self, "radius", float(self.radius))
        object.__setattr__(self, "angles", tuple(float(v) for v in self.angles))
        if not (self.radius > 0.0 and math.isfinite(self.radius)):
            raise DegenerateArcError("radius must be positive")
        span = self.angles[1] - self.angles[0]
        if not 0.0 < span < 2.0 * math.pi:
            raise DegenerateArcError("angle span must lie in (0, 2*pi)")
        super().__post_init__()

    def _angle(self, t):
        a0, a1 = self.angles
        return a0 + 0.5 * (np.asarray(t) + 1.0) * (a1 - a0)

    @property
    def endpoints(self):
        p = self._position(np.array([-1.0, 1.0]))
        return tuple(map(float, p[0])), tuple(map(float, p[1]))

    def _position(self, t):
        th = self._angle(t)
        c = np.array(self.center)
        return c + self.radius * np.stack([np.cos(th), np.sin(th)], axis=-1)

    def _derivative(self, t, order):
        th = self._angle(t)
        w = 0.5 * (self.angles[1] - self.angles[0])
        # d^n/dt^n of (cos, sin)(th) = w^n (cos, sin)(th + n pi/2)
        ph = th + order * 0.5 * math.pi
        return self.radius * w**order * np.stack([np.cos(ph), np.sin(ph)], axis=-1)

    def to_dict(self):
        return {"kind": "circular", "center": list(self.center), "radius": self.radius,
                "angles": list(self.angles)}

    def transformed(self, scale=1.0, angle=0.0, shift=(0.0, 0.0)):
        if scale <= 0:
            raise DomainError("scale must be positive")
        f = _affine(scale, angle, shift)
        return CircularArc(f(self.center), self.radius * scale,
                           (self.angles[0] + angle, self.angles[1] + angle))


@dataclass(frozen=True)
class SplineArc(Arc):
    """Interpolating spline through control points at uniform parameters in [-1, 1]."""

    points: tuple[tuple[float, float], ...]
    degree: int = 3
    _spline: Any = field(init=False, repr=False, compare=False)

    kind = "spline"

    def __post_init__(self):
        pts = tuple(_point(p) for p in self.points)
        object.__setattr__(self, "points", pts)
        if self.degree < 3:
            raise DegenerateArcError("spline degree must be at least 3")
        if len(pts) < self.degree + 1:
            raise DegenerateArcError(f"need at least {self.degree + 1} control points")
        u = np.linspace(-1.0, 1.0, len(pts))
        object.__setattr__(self, "_spline", make_interp_spline(u, np.array(pts), k=self.degree))
        super().__post_init__()

    @property
    def endpoints(self):
        return self.points[0], self.points[-1]

    def _position(self, t):
        return self._spline(np.asarray(t))

    def _derivative(self, t, order):
        return self._spline(np.asarray(t), nu=order)

    def to_dict(self):
        return {"kind": "spline", "points": [list(p) for p in self.points], "degree": self.degree}

    def transformed(self, scale=1.0, angle=0.0, shift=(0.0, 0.0)):
        f = _affine(scale, angle, shift)
        return SplineArc(tuple(f(p) for p in self.points), self.degree)


def _polyline_crosses(p: np.ndarray) -> bool:
    """True when two non-adjacent edges of the polyline through p intersect."""
    a, b = p[:-1], p[1:]
    # cross products below this size are roundoff (collinear edges)
    tol = 1e-12 * float(np.max(np.ptp(p, axis=0))) ** 2

    def orient(o, u, v):
        # sign of cross(u - o, v - o) for every edge pair (rows: edge i, cols: edge j)
        c = ((u[..., 0] - o[..., 0]) * (v[..., 1] - o[..., 1])
             - (u[..., 1] - o[..., 1]) * (v[..., 0] - o[..., 0]))
        return np.where(np.abs(c) <= tol, 0.0, np.sign(c))

    ai, bi = a[:, None, :], b[:, None, :]
    aj, bj = a[None, :, :], b[None, :, :]
    o1 = orient(ai, bi, aj)
    o2 = orient(ai, bi, bj)
    o3 = orient(aj, bj, ai)
    o4 = orient(aj, bj, bi)
    hit = (o1 * o2 < 0) & (o3 * o4 < 0)
    i, j = np.indices(hit.shape)
    return bool(np.any(hit & (j > i + 1)))


def _affine(scale, angle, shift):
    c, s = math.cos(angle), math.sin(angle)

    def f(p):
        x, y = p
        return (scale * (c * x - s * y) + shift[0], scale * (s * x + c * y) + shift[1])

    return f


UNIT_SLIT = Segment((-1.0, 0.0), (1.0, 0.0))


def arc_from_dict(d: dict[str, Any]) -> Arc:
    """Build an arc from its tagged-record description."""
    try:
        kind = d["kind"]
        if kind == "segment":
            return Segment(tuple(d["a"]), tuple(d["b"]))
        if kind == "circular":
            return CircularArc(tuple(d["center"]), d["radius"], tuple(d["angles"]))
        if kind == "spline":
            return SplineArc(tuple(tuple(p) for p in d["points"]), int(d.get("degree", 3)))
    except (KeyError, TypeError) as exc:
        raise ConfigError(f"malformed arc record {d!r}: {exc}") from exc
    raise ConfigError(f"unknown arc kind {d.get('kind')!r}")
