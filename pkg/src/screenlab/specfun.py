"""Bessel functions J0, Y0 and the Hankel function H0^(1) for real arguments.

Three regimes, each accurate to a few ulps of the function scale:

* ``x <= 8``: ascending power series (and the logarithmic series for Y0);
* ``8 < x <= 25``: Miller backward recurrence for J_{2k}, normalised by
  J0 + 2 sum J_{2k} = 1, with Neumann's series for Y0;
* ``x > 25``: Hankel asymptotic expansion, truncated at the smallest term.

The split ``H0(z) = i (2/pi) J0(z) ln z + S(z)`` with ``S`` entire in z^2 (up to
the constant) is exposed as :class:`KernelSplit` for product quadrature.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError

EULER_GAMMA = 0.57721566490153286061
SERIES_MAX = 8.0
MILLER_MAX = 25.0
ARG_MAX = 1e4
_TWO_OVER_PI = 2.0 / math.pi


def _check(x, *, allow_zero: bool) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(x)):
        raise DomainError("argument must be finite")
    if allow_zero and np.any(x < 0.0):
        raise DomainError("argument must be non-negative")
    if not allow_zero and np.any(x <= 0.0):
        raise DomainError("argument must be positive (logarithmic singularity at 0)")
    if np.any(x > ARG_MAX):
        raise DomainError(f"argument exceeds {ARG_MAX:g}")
    return x


def _j0_series(x):
    q = -0.25 * x * x
    term = np.ones_like(x)
    total = np.ones_like(x)
    for m in range(1, 40):
        term = term * q / (m * m)
        total = total + term
    return total


def _y0_series_remainder(x):
    """sum_{m>=1} (-1)^{m+1} H_m (x^2/4)^m / (m!)^2."""
    q = 0.25 * x * x
    term = np.ones_like(x)
    harmonic = 0.0
    total = np.zeros_like(x)
    for m in range(1, 40):
        term = -term * q / (m * m)
        harmonic += 1.0 / m
        total = total - harmonic * term
    return total


def _miller(x):
    """J0 and the Neumann sum sum_{k>=1} (-1)^k J_{2k}/k by backward recurrence."""
    start = 2 * int(0.5 * (1.5 * float(np.max(x)) + 40.0))
    j_next = np.zeros_like(x)
    j_cur = np.full_like(x, 1e-300)
    norm = np.zeros_like(x)
    neumann = np.zeros_like(x)
    for n in range(start, 0, -1):
        j_prev = (2.0 * n / x) * j_cur - j_next
        j_next, j_cur = j_cur, j_prev
        # j_cur now holds the unnormalised J_{n-1}
        m = n - 1
        if m > 0 and m % 2 == 0:
            norm = norm + 2.0 * j_cur
            neumann = neumann + (-1) ** (m // 2) * j_cur / (m // 2)
        big = np.abs(j_cur) > 1e250
        if np.any(big):
            s = np.where(big, 1e-250, 1.0)
            j_cur, j_next, norm, neumann = j_cur * s, j_next * s, norm * s, neumann * s
    norm = norm + j_cur
    return j_cur / norm, neumann / norm


def _asymptotic(x):
    """Hankel expansion: returns (J0, Y0)."""
    p = np.ones_like(x)
    q = np.zeros_like(x)
    # a_k(0) = prod_{j<=k} (-(2j-1)^2) / (k! 8^k)
    a = 1.0
    inv = 1.0 / x
    pw = np.ones_like(x)
    last = np.full_like(x, np.inf)
    active = np.ones(x.shape, dtype=bool)
    for k in range(1, 60):
        a *= -((2 * k - 1) ** 2) / (8.0 * k)
        pw = pw * inv
        term = a * pw
        mag = np.abs(term)
        active &= mag < last
        last = mag
        if not np.any(active):
            break
        # sum_k (-1)^k a_{2k}/x^{2k} into P, (-1)^k a_{2k+1}/x^{2k+1} into Q
        sign = (-1) ** (k // 2)
        if k % 2 == 0:
            p = p + np.where(active, sign * term, 0.0)
        else:
            q = q + np.where(active, sign * term, 0.0)
    chi = x - 0.25 * math.pi
    amp = np.sqrt(_TWO_OVER_PI / x)
    c, s = np.cos(chi), np.sin(chi)
    return amp * (p * c - q * s), amp * (p * s + q * c)


def _j0_y0(x, need_y: bool):
    j = np.empty_like(x)
    y = np.empty_like(x) if need_y else None
    lo = x <= SERIES_MAX
    mid = (x > SERIES_MAX) & (x <= MILLER_MAX)
    hi = x > MILLER_MAX
    if np.any(lo):
        xl = x[lo]
        jl = _j0_series(xl)
        j[lo] = jl
        if need_y:
            with np.errstate(divide="ignore"):
                y[lo] = _TWO_OVER_PI * ((np.log(0.5 * xl) + EULER_GAMMA) * jl
                                        + _y0_series_remainder(xl))
    if np.any(mid):
        xm = x[mid]
        jm, neu = _miller(xm)
        j[mid] = jm
        if need_y:
            y[mid] = _TWO_OVER_PI * ((np.log(0.5 * xm) + EULER_GAMMA) * jm - 2.0 * neu)
    if np.any(hi):
        ja, ya = _asymptotic(x[hi])
        j[hi] = ja
        if need_y:
            y[hi] = ya
    return j, y


def _unwrap(x_in, out):
    return out.item() if np.ndim(x_in) == 0 else out


def bessel_j0(x):
    """J0(x) for 0 <= x <= 1e4 (scalar or array)."""
    xa = _check(x, allow_zero=True)
    j, _ = _j0_y0(np.atleast_1d(xa).astype(float), need_y=False)
    return _unwrap(x, j.reshape(xa.shape))


def bessel_y0(x):
    """Y0(x) for 0 < x <= 1e4 (scalar or array)."""
    xa = _check(x, allow_zero=False)
    _, y = _j0_y0(np.atleast_1d(xa).astype(float), need_y=True)
    return _unwrap(x, y.reshape(xa.shape))


def hankel1_0(x):
    """H0^(1)(x) = J0(x) + i Y0(x) for 0 < x <= 1e4."""
    xa = _check(x, allow_zero=False)
    j, y = _j0_y0(np.atleast_1d(xa).astype(float), need_y=True)
    return _unwrap(x, (j + 1j * y).reshape(xa.shape))


@dataclass(frozen=True)
class KernelSplit:
    """H0^(1)(z) = i * log_coefficient * ln(z) + smooth_part.

    ``log_coefficient`` is the real factor (2/pi) J0(z); the imaginary unit is
    kept outside so the coefficient stays real.
    """

    z: np.ndarray
    smooth_part: np.ndarray
    log_coefficient: np.ndarray

    def value(self) -> np.ndarray:
        return 1j * self.log_coefficient * np.log(self.z) + self.smooth_part


def kernel_split(z) -> KernelSplit:
    """Split of H0^(1) at z >= 0; at z = 0 the smooth part is its limit."""
    za = _check(z, allow_zero=True)
    zf = np.atleast_1d(za).astype(float)
    j, _ = _j0_y0(zf, need_y=False)
    smooth = np.empty(zf.shape, dtype=complex)
    lo = zf <= SERIES_MAX
    if np.any(lo):
        xl = zf[lo]
        jl = j[lo]
        smooth[lo] = jl + 1j * _TWO_OVER_PI * ((EULER_GAMMA - math.log(2.0)) * jl
                                             + _y0_series_remainder(xl))
    hi = ~lo
    if np.any(hi):
        xh = zf[hi]
        _, yh = _j0_y0(xh, need_y=True)
        smooth[hi] = j[hi] + 1j * (yh - _TWO_OVER_PI * j[hi] * np.log(xh))
    shape = za.shape
    return KernelSplit(za, smooth.reshape(shape), (_TWO_OVER_PI * j).reshape(shape))
