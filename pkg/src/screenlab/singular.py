"""Endpoint singularities: power-law fits v ~ A d^alpha near arc tips."""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import FitError, InsufficientRangeError, NonMonotoneError, VanishingAmplitudeWarning

REGULARITY_THRESHOLD = -0.05
MIN_DECADES = 2.0
VANISHING_AMPLITUDE = 1e-10


@dataclass(frozen=True)
class FitResult:
    amplitude: float
    exponent: float
    residual: float
    sample_count: int


def fit_exponent(d, v) -> FitResult:
    """Least-squares fit of ln|v| = ln A + alpha ln d.

    The amplitude carries the common sign of v.
    """
    d = np.asarray(d, dtype=float).ravel()
    v = np.asarray(v, dtype=float).ravel()
    if d.shape != v.shape:
        raise FitError("distance and value arrays differ in length")
    if len(d) < 5:
        raise FitError("need at least 5 samples")
    if np.any(d <= 0) or not np.all(np.isfinite(d)) or len(np.unique(d)) != len(d):
        raise FitError("distances must be distinct, positive and finite")
    if math.log10(d.max() / d.min()) < MIN_DECADES - 1e-9:
        raise InsufficientRangeError("distances span fewer than two decades")
    if np.any(v == 0) or not np.all(np.isfinite(v)):
        raise FitError("values must be nonzero and finite")
    if np.any(v > 0) and np.any(v < 0):
        raise NonMonotoneError("values change sign")
    x = np.log(d)
    y = np.log(np.abs(v))
    design = np.stack([np.ones_like(x), x], axis=1)
    (c0, alpha), *_ = np.linalg.lstsq(design, y, rcond=None)
    rms = float(np.sqrt(np.mean((design @ np.array([c0, alpha]) - y) ** 2)))
    return FitResult(float(np.sign(v[0]) * math.exp(c0)), float(alpha), rms, len(d))


def endpoint_amplitudes(solution) -> tuple[complex, complex]:
    """(A-, A+) with rho ~ A dist^(-1/2) at the tips b-, b+.

    Accepts a Density or anything with a ``density`` attribute. Since
    1 - t^2 ~ 2 d / |p'(+-1)| near a tip, A = psi(+-1) / sqrt(2 |p'(+-1)|).
    """
    density = getattr(solution, "density", solution)
    ends = np.array([-1.0, 1.0])
    psi = density.psi(ends)
    speed = density.arc.speed(ends)
    amps = psi / np.sqrt(2.0 * speed)
    if np.any(np.abs(psi) < VANISHING_AMPLITUDE):
        warnings.warn("endpoint amplitude numerically zero", VanishingAmplitudeWarning, stacklevel=2)
    if not np.iscomplexobj(amps):
        return float(amps[0]), float(amps[1])
    return complex(amps[0]), complex(amps[1])


def tip_ray(arc, end: int, distances) -> np.ndarray:
    """Points b + d * (outward tangent at the tip ``end``)."""
    t = float(end)
    tau, _ = arc.tangent_normal(t)
    tip = np.array(arc.endpoints[int(end > 0)])
    out = tau * (1.0 if end > 0 else -1.0)
    return tip + np.asarray(distances, dtype=float)[:, None] * out


def default_distances(radius: float, count: int = 16, decades: float = 3.0) -> np.ndarray:
    return np.geomspace(radius * 10.0 ** (-decades), radius, count)


def density_profile(density, end: int, distances) -> np.ndarray:
    """|rho| at arc-length distances from the tip ``end``."""
    t = density.arc.param_at_distance(end, distances)
    return np.abs(density.rho(t))


def fit_density_exponent(density, end: int, distances=None) -> FitResult:
    d = default_distances(1e-2) if distances is None else np.asarray(distances, dtype=float)
    return fit_exponent(d, density_profile(density, end, d))


def fit_gradient_exponent(gradient: Callable, arc, end: int, distances=None) -> FitResult:
    """Exponent of |grad u| along the outward tangent ray beyond a tip."""
    d = default_distances(1e-2) if distances is None else np.asarray(distances, dtype=float)
    g = np.asarray(gradient(tip_ray(arc, end, d)))
    mag = np.linalg.norm(g, axis=-1) if g.ndim == 2 else np.abs(g)
    return fit_exponent(d, mag)


def _fd_gradient_magnitude(field: Callable, x: np.ndarray, h: np.ndarray) -> np.ndarray:
    """|grad f| by central differences with a per-point step h."""
    ex = np.stack([h, np.zeros_like(h)], axis=-1)
    ey = np.stack([np.zeros_like(h), h], axis=-1)
    gx = (np.asarray(field(x + ex)) - np.asarray(field(x - ex))) / (2 * h)
    gy = (np.asarray(field(x + ey)) - np.asarray(field(x - ey))) / (2 * h)
    return np.hypot(gx, gy)


def ray_exponent(sampler: Callable, point, radius: float, direction=(1.0, 0.0),
                 count: int = 16, scalar_field: bool = False) -> FitResult | None:
    """Fitted exponent of |grad u| at point + d * direction, d in [radius 1e-3, radius].

    ``sampler`` maps points (P, 2) to gradients (P, 2) or magnitudes (P,); with
    ``scalar_field`` it returns u itself and the gradient is taken by central
    differences with step 1e-3 d. Returns None when |grad u| vanishes at some
    sample (a critical point, or a constant field), where no power law applies.
    """
    e = np.asarray(direction, dtype=float)
    e = e / np.linalg.norm(e)
    d = default_distances(radius, count)
    x = np.asarray(point, dtype=float) + d[:, None] * e
    if scalar_field:
        mag = _fd_gradient_magnitude(sampler, x, 1e-3 * d)
    else:
        g = np.asarray(sampler(x))
        mag = np.linalg.norm(g, axis=-1) if g.ndim == 2 else np.abs(g)
    if np.max(mag) <= 1e-14 or np.any(mag == 0.0):
        return None
    return fit_exponent(d, mag)


def is_regular_at(sampler: Callable, point, radius: float, direction=(1.0, 0.0),
                  threshold: float = REGULARITY_THRESHOLD, count: int = 16,
                  scalar_field: bool = False) -> bool:
    """True when |grad u| shows no blow-up approaching ``point`` along a ray.

    The point is regular when the exponent from :func:`ray_exponent` exceeds
    ``threshold``, or when the gradient vanishes on the ray.
    """
    fit = ray_exponent(sampler, point, radius, direction, count, scalar_field)
    return fit is None or fit.exponent > threshold
