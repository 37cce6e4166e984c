"""Finite Hilbert transform on I = [-1, 1] and the Hardy-space trace (1 - z^2)^(-1/2).

Functions on I are represented as g(s) = psi(s) / sqrt(1 - s^2) with psi given
by Chebyshev coefficients. With the kernel 1/(t - s),

    PV int T_n(s) / ((t - s) sqrt(1 - s^2)) ds = -pi U_{n-1}(t),   |t| < 1, n >= 1,
                                                = pi w^{-n} / ((w - 1/w) / 2),   |t| > 1,

where w = t + sqrt(t^2 - 1) is the root with |w| > 1; the n = 0 term vanishes
inside I.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import BranchCutError, DomainError

MAX_MODES = 256
INTERIOR_POINTS = 64
EXTERIOR_POINTS = 64


@dataclass(frozen=True, eq=False)
class WeightedFunction:
    """g(s) = psi(s) (1 - s^2)^(-1/2) with psi = sum_n coefficients[n] T_n."""

    coefficients: np.ndarray

    def __post_init__(self):
        c = np.atleast_1d(np.asarray(self.coefficients, dtype=float))
        if c.ndim != 1 or len(c) > MAX_MODES:
            raise DomainError(f"expected at most {MAX_MODES} Chebyshev coefficients")
        object.__setattr__(self, "coefficients", c)

    @classmethod
    def mode(cls, n: int, scale: float = 1.0) -> "WeightedFunction":
        c = np.zeros(n + 1)
        c[n] = scale
        return cls(c)

    def psi(self, s) -> np.ndarray:
        return np.polynomial.chebyshev.chebval(np.asarray(s, dtype=float), self.coefficients)

    def __call__(self, s) -> np.ndarray:
        s = np.asarray(s, dtype=float)
        return self.psi(s) / np.sqrt((1.0 - s) * (1.0 + s))

    def is_resolved(self, rtol: float = 1e-12) -> bool:
        c = np.abs(self.coefficients)
        scale = np.max(c) if len(c) else 0.0
        tail = c[-max(1, len(c) // 8):]
        return scale == 0.0 or bool(np.max(tail) <= rtol * scale) or len(c) <= 8


def _cheb_u(nmax: int, t: np.ndarray) -> np.ndarray:
    """U_0..U_{nmax-1} at t, rows indexed by order."""
    out = np.empty((max(nmax, 1), len(t)))
    out[0] = 1.0
    if nmax > 1:
        out[1] = 2.0 * t
    for j in range(2, nmax):
        out[j] = 2.0 * t * out[j - 1] - out[j - 2]
    return out[:nmax]


def mode_transforms(nmodes: int, t) -> np.ndarray:
    """Matrix H[i, n] = PV int T_n(s) (1-s^2)^(-1/2) / (t_i - s) ds."""
    t = np.atleast_1d(np.asarray(t, dtype=float))
    if np.any(np.abs(t) == 1.0):
        raise DomainError("finite Hilbert transform undefined at t = +-1")
    h = np.zeros((len(t), nmodes))
    inside = np.abs(t) < 1.0
    if np.any(inside) and nmodes > 1:
        u = _cheb_u(nmodes - 1, t[inside])
        h[inside, 1:] = -math.pi * u.T
    out = ~inside
    if np.any(out):
        to = t[out]
        w = to + np.sign(to) * np.sqrt(to * to - 1.0)
        half_diff = 0.5 * (w - 1.0 / w)
        n = np.arange(nmodes)
        h[out] = math.pi * w[:, None] ** (-n[None, :].astype(float)) / half_diff[:, None]
    return h


def finite_hilbert(g: WeightedFunction, t) -> np.ndarray:
    """PV int_{-1}^{1} g(s) / (t - s) ds for t inside or outside I (not at +-1)."""
    h = mode_transforms(len(g.coefficients), t)
    out = h @ g.coefficients
    return out.item() if np.ndim(t) == 0 else out


def _sqrt_branch(w: np.ndarray, lo: float) -> np.ndarray:
    """Square root with arg(w) taken in (lo, lo + 2 pi]."""
    a = np.angle(w)
    a = np.where(a <= lo, a + 2.0 * math.pi, a)
    a = np.where(a > lo + 2.0 * math.pi, a - 2.0 * math.pi, a)
    return np.sqrt(np.abs(w)) * np.exp(0.5j * a)


def hardy_trace(z) -> np.ndarray:
    """(1 - z^2)^(-1/2) on the closed upper half-plane, continued from f(0) = 1.

    Real z gives the boundary values from above: (1 - t^2)^(-1/2) on I,
    i sign(t) (t^2 - 1)^(-1/2) off I. Points with Im z < 0 (which includes the
    negative imaginary axis) and t = +-1 raise BranchCutError.
    """
    za = np.asarray(z, dtype=complex)
    if np.any(za.imag < 0.0):
        raise BranchCutError("hardy_trace is defined on the closed upper half-plane")
    if np.any((za.imag == 0.0) & (np.abs(za.real) == 1.0)):
        raise BranchCutError("branch point at z = +-1")
    # cuts of the two factors run downward from +1 and -1
    f = 1.0 / (_sqrt_branch(1.0 - za, -1.5 * math.pi) * _sqrt_branch(1.0 + za, -0.5 * math.pi))
    return f.item() if np.ndim(z) == 0 else f


def interior_points(n: int = INTERIOR_POINTS) -> np.ndarray:
    return np.cos((np.arange(n) + 0.5) * math.pi / n)


def exterior_points(n: int = EXTERIOR_POINTS) -> np.ndarray:
    half = np.geomspace(1.05, 20.0, n // 2)
    return np.concatenate([-half[::-1], half])


def support_pair_check(g: WeightedFunction) -> tuple[float, float]:
    """(max |Hg| over interior points, max |Hg| over exterior points)."""
    inside = float(np.max(np.abs(finite_hilbert(g, interior_points()))))
    outside = float(np.max(np.abs(finite_hilbert(g, exterior_points()))))
    return inside, outside


def hilbert_kernel(nmodes: int, npoints: int = INTERIOR_POINTS, tol: float = 1e-8):
    """Null space of psi -> Hg restricted to interior collocation points.

    Returns (singular values ascending, kernel basis as columns); the kernel
    dimension is the number of singular values below ``tol``.
    """
    if nmodes < 2:
        raise DomainError("kernel test needs at least two modes")
    h = mode_transforms(nmodes, interior_points(npoints))
    _, sv, vt = np.linalg.svd(h)
    order = np.argsort(sv)
    sv = sv[order]
    basis = vt[order[sv <= tol]].T if np.any(sv <= tol) else np.zeros((nmodes, 0))
    return sv, basis
