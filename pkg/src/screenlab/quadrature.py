"""Chebyshev machinery shared by the single-layer solvers.

Densities are stored as samples of the smooth factor psi at the nodes
t_j = cos(s_j), s_j = (2j+1) pi / (2N); the measure on the arc is
psi(t) (1 - t^2)^(-1/2) dt, i.e. psi(cos s) ds in the angle variable.
"""

from __future__ import annotations

import math
from typing import Callable

import numpy as np
from numpy.polynomial import chebyshev as C
from scipy.fft import dct

from .arcgeom import Arc

GL_ORDER = 16
_GL_X, _GL_W = np.polynomial.legendre.leggauss(GL_ORDER)


def cheb_nodes(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes t_j = cos(s_j) and angles s_j, j = 0..n-1 (t decreasing)."""
    s = (2.0 * np.arange(n) + 1.0) * math.pi / (2.0 * n)
    return np.cos(s), s


def cheb_coefficients(values: np.ndarray) -> np.ndarray:
    """Chebyshev coefficients of the degree n-1 interpolant through node samples."""
    values = np.asarray(values)
    n = values.shape[0]
    if np.iscomplexobj(values):
        a = dct(values.real, type=2, axis=0) + 1j * dct(values.imag, type=2, axis=0)
    else:
        a = dct(values, type=2, axis=0)
    a = a / n
    a[0] = a[0] / 2.0
    return a


def cheb_eval(coeffs: np.ndarray, t) -> np.ndarray:
    return C.chebval(np.asarray(t, dtype=float), coeffs)


def log_eigenvalues(n: int) -> np.ndarray:
    """Values of int ln|t-s| T_m(s) (1-s^2)^(-1/2) ds / T_m(t), m = 0..n-1."""
    lam = np.empty(n)
    lam[0] = -math.pi * math.log(2.0)
    m = np.arange(1, n)
    lam[1:] = -math.pi / m
    return lam


def log_weights(t, n: int) -> np.ndarray:
    """Product-quadrature weights W with sum_j W[i, j] f(t_j) ~ int ln|t_i - s| f(s) (1-s^2)^(-1/2) ds.

    Exact when f is a polynomial of degree < n.
    """
    t = np.atleast_1d(np.asarray(t, dtype=float))
    _, s = cheb_nodes(n)
    m = np.arange(n)
    lam = log_eigenvalues(n)
    tm = np.cos(np.outer(np.arccos(np.clip(t, -1.0, 1.0)), m))   # T_m(t_i)
    tj = np.cos(np.outer(s, m))                                    # T_m(t_j)
    scale = np.full(n, 2.0)
    scale[0] = 1.0
    return (tm * (lam * scale)) @ tj.T / n


def _panel_breaks(center: float, width: float) -> np.ndarray:
    pts = [0.0, math.pi]
    w = width
    while w < math.pi:
        pts.extend([center - w, center + w])
        w *= 2.0
    pts = np.clip(np.array(pts), 0.0, math.pi)
    return np.unique(pts)


def graded_rule(center: float, width: float) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre rule on [0, pi] refined geometrically toward ``center``."""
    br = _panel_breaks(center, max(width, 1e-15))
    lo, hi = br[:-1], br[1:]
    half = 0.5 * (hi - lo)
    mid = 0.5 * (hi + lo)
    nodes = (mid[:, None] + half[:, None] * _GL_X[None, :]).ravel()
    weights = (half[:, None] * _GL_W[None, :]).ravel()
    return nodes, weights


Kernel = Callable[[np.ndarray, np.ndarray], np.ndarray]


def layer_integral(arc: Arc, coeffs: np.ndarray, kernel: Kernel, points,
                   n_base: int, far_factor: float = 18.0, max_nodes: int = 4096) -> np.ndarray:
    """int_0^pi kernel(z, p(cos s)) psi(cos s) ds for each z in ``points``.

    ``kernel(z, y)`` maps (P, 2) x (Q, 2) to (P, Q) or (P, Q, C). Points far from
    the arc use Gauss-Chebyshev with enough nodes for the distance; points too
    close for ``max_nodes`` use a graded Gauss-Legendre rule around the nearest
    arc point.
    """
    z = np.atleast_2d(np.asarray(points, dtype=float))
    tstar, dist = arc.closest_point(z)
    vmax = float(np.max(arc.speed(arc._dense[0])))
    need = np.ceil(far_factor * vmax / np.maximum(dist, 1e-300))
    out = None

    def _accumulate(idx, vals):
        nonlocal out
        if out is None:
            out = np.zeros((len(z),) + vals.shape[1:], dtype=complex)
        out[idx] = vals

    n_levels = [n_base]
    while n_levels[-1] < max_nodes:
        n_levels.append(n_levels[-1] * 2)
    assigned = np.zeros(len(z), dtype=bool)
    for n in n_levels:
        idx = np.nonzero((~assigned) & (need <= n))[0]
        if len(idx) == 0:
            continue
        assigned[idx] = True
        tn, _ = cheb_nodes(n)
        y = arc.eval(tn)
        psi = cheb_eval(coeffs, tn)
        k = kernel(z[idx], y)
        vals = k @ psi if k.ndim == 2 else np.einsum("pqc,q->pc", k, psi)
        _accumulate(idx, (math.pi / n) * vals)
    for i in np.nonzero(~assigned)[0]:
        s_star = math.acos(float(np.clip(tstar[i], -1.0, 1.0)))
        width = dist[i] / float(arc.speed(tstar[i]))
        s, w = graded_rule(s_star, width)
        tn = np.cos(s)
        y = arc.eval(tn)
        psi = cheb_eval(coeffs, tn) * w
        k = kernel(z[i:i + 1], y)
        val = (k[0] @ psi)[None] if k.ndim == 2 else np.einsum("qc,q->c", k[0], psi)[None]
        _accumulate(np.array([i]), val)
    return out
