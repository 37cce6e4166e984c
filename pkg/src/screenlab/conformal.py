"""Exact slit maps for segments and circular arcs.

A :class:`SlitMap` is a Moebius transformation m with m(Gamma) = [-1, 1] and
m(b-) = -1, m(b+) = 1, hence a biholomorphism of the sphere minus Gamma onto
the sphere minus the slit. Composing with the inverse Joukowski map and, when
m moves infinity to a finite pole w0 = m(inf), with the automorphism of the
disk exterior sending phi(w0) back to infinity, gives the exterior map
Phi: C minus Gamma -> {|zeta| > 1} with Phi(inf) = inf. Everything here is
closed form.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .arcgeom import Arc, CircularArc, Segment, UNIT_SLIT
from .errors import BranchCutError, DomainError, GeometryError, UnsupportedArcError
from .helmholtz import Density
from .quadrature import cheb_eval, cheb_nodes


def to_complex(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x[..., 0] + 1j * x[..., 1]


def to_plane(z) -> np.ndarray:
    z = np.asarray(z, dtype=complex)
    return np.stack([z.real, z.imag], axis=-1)


def _scalar_or_array(inp, out):
    return complex(out) if np.ndim(inp) == 0 else out


def joukowski(w):
    """(w + 1/w) / 2."""
    wa = np.asarray(w, dtype=complex)
    if np.any(wa == 0):
        raise DomainError("joukowski map undefined at w = 0")
    return _scalar_or_array(w, 0.5 * (wa + 1.0 / wa))


def inverse_joukowski(z):
    """z + sqrt(z^2 - 1), the root of modulus > 1; undefined on [-1, 1]."""
    za = np.asarray(z, dtype=complex)
    if np.any((za.imag == 0.0) & (np.abs(za.real) <= 1.0)):
        raise BranchCutError("inverse Joukowski map undefined on the slit [-1, 1]")
    r = np.sqrt(za * za - 1.0)
    w1, w2 = za + r, za - r
    return _scalar_or_array(z, np.where(np.abs(w1) >= np.abs(w2), w1, w2))


@dataclass(frozen=True)
class Mobius:
    a: complex
    b: complex
    c: complex
    d: complex

    def __post_init__(self):
        for name in "abcd":
            object.__setattr__(self, name, complex(getattr(self, name)))
        if self.det == 0:
            raise DomainError("Moebius coefficients have zero determinant")

    @property
    def det(self) -> complex:
        return self.a * self.d - self.b * self.c

    def __call__(self, z):
        z = np.asarray(z, dtype=complex)
        return (self.a * z + self.b) / (self.c * z + self.d)

    def derivative(self, z):
        z = np.asarray(z, dtype=complex)
        return self.det / (self.c * z + self.d) ** 2

    def inverse(self) -> "Mobius":
        return Mobius(self.d, -self.b, -self.c, self.a)

    def then(self, other: "Mobius") -> "Mobius":
        """other o self."""
        return Mobius(other.a * self.a + other.b * self.c, other.a * self.b + other.b * self.d,
                      other.c * self.a + other.d * self.c, other.c * self.b + other.d * self.d)

    @property
    def image_of_infinity(self):
        return None if self.c == 0 else self.a / self.c


IDENTITY = Mobius(1, 0, 0, 1)


@dataclass(frozen=True, eq=False)
class SlitMap:
    arc: Arc
    factors: tuple[tuple[str, Mobius], ...]

    @property
    def mobius(self) -> Mobius:
        m = IDENTITY
        for _, f in self.factors:
            m = m.then(f)
        return m

    def forward(self, z):
        return self.mobius(z)

    def inverse(self, w):
        return self.mobius.inverse()(w)

    def derivative(self, z):
        return self.mobius.derivative(z)

    @property
    def pole(self):
        """Image of infinity under the forward map (None when infinity is fixed)."""
        return self.mobius.image_of_infinity

    @property
    def _zeta0(self):
        w0 = self.pole
        return None if w0 is None else complex(inverse_joukowski(w0))

    def exterior_map(self, z):
        """Phi(z): conformal onto |zeta| > 1 with Phi(inf) = inf."""
        zeta = np.asarray(inverse_joukowski(self.forward(z)), dtype=complex)
        z0 = self._zeta0
        if z0 is None:
            return zeta
        return (np.conj(z0) * zeta - 1.0) / (zeta - z0)

    def exterior_derivative(self, z):
        w = self.forward(z)
        zeta = np.asarray(inverse_joukowski(w), dtype=complex)
        dphi = zeta / (zeta - w)                      # phi'(w) = phi / sqrt(w^2 - 1)
        d = dphi * self.derivative(z)
        z0 = self._zeta0
        if z0 is None:
            return d
        return d * (1.0 - abs(z0) ** 2) / (zeta - z0) ** 2

    def exterior_inverse(self, xi):
        xi = np.asarray(xi, dtype=complex)
        z0 = self._zeta0
        zeta = xi if z0 is None else (z0 * xi - 1.0) / (xi - np.conj(z0))
        return self.inverse(0.5 * (zeta + 1.0 / zeta))

    def robin_constant(self) -> float:
        """ln of the logarithmic capacity, from the behaviour of Phi at infinity."""
        m = self.mobius
        if m.c == 0:
            return -math.log(2.0 * abs(m.a / m.d))
        w0 = m.a / m.c
        z0 = self._zeta0
        dphi = abs(z0 / (z0 - w0))
        scale = (abs(z0) ** 2 - 1.0) * abs(m.c) ** 2 / (abs(m.det) * dphi)
        return -math.log(scale)

    def exterior_potential(self, x) -> np.ndarray:
        """Green's function with pole at infinity, u = ln|Phi|, at plane points."""
        return np.log(np.abs(self.exterior_map(to_complex(x))))

    def exterior_gradient(self, x) -> np.ndarray:
        z = to_complex(x)
        f = self.exterior_derivative(z) / self.exterior_map(z)
        return np.stack([f.real, -f.imag], axis=-1)


def build_slit_map(arc: Arc, verify: bool = True) -> SlitMap:
    """Slit map for a segment or circular arc, endpoints sent to -1 and +1."""
    if isinstance(arc, Segment):
        a, b = (complex(*p) for p in arc.endpoints)
        if arc == UNIT_SLIT:
            smap = SlitMap(arc, (("identity", IDENTITY),))
        else:
            smap = SlitMap(arc, (("affine", Mobius(2.0, -(a + b), 0.0, b - a)),))
    elif isinstance(arc, CircularArc):
        a, b = (complex(*p) for p in arc.endpoints)
        mid = 0.5 * (arc.angles[0] + arc.angles[1]) + math.pi
        q = complex(*arc.center) + arc.radius * complex(math.cos(mid), math.sin(mid))
        m0 = Mobius(1.0, -a, 1.0, -q)
        mb = complex(m0(b))
        smap = SlitMap(arc, (("mobius", m0), ("affine", Mobius(2.0, -mb, 0.0, mb))))
    else:
        raise UnsupportedArcError(f"no exact slit map for arc kind {arc.kind!r}")
    if verify:
        dev = slit_map_deviation(smap)
        if dev > 1e-6:
            raise GeometryError(f"slit map check failed (deviation {dev:.3e})")
    return smap


def slit_map_deviation(smap: SlitMap, samples: int = 64, offset: float = 1e-9) -> float:
    """Largest of: endpoint image errors, distance of pushed near-arc points to [-1, 1]."""
    arc = smap.arc
    ends = smap.forward(np.array([complex(*p) for p in arc.endpoints]))
    dev = float(max(abs(ends[0] + 1.0), abs(ends[1] - 1.0)))
    t = np.cos((np.arange(samples) + 0.5) * math.pi / samples)
    _, nu = arc.tangent_normal(t)
    pts = to_complex(arc.eval(t) + offset * nu)
    w = smap.forward(pts)
    dist = np.abs(w.imag) + np.maximum(np.abs(w.real) - 1.0, 0.0)
    return max(dev, float(np.max(dist)))


def transplant_density(sol, smap: SlitMap, n: int | None = None) -> Density:
    """Equilibrium density on smap.arc obtained from one on the unit slit.

    Each arc point x has two sides; on the unit circle (after the exterior map)
    they sit at angles theta_pm, and the slit measure psi(cos theta) d theta / 2
    per side is pulled back with the boundary derivative |dtheta/ds|.
    """
    if sol.arc != UNIT_SLIT:
        raise DomainError("transplant expects an equilibrium solution on the unit slit")
    arc = smap.arc
    n = sol.density.n if n is None else n
    t, _ = cheb_nodes(n)
    x = to_complex(arc.eval(t))
    tau = np.clip(smap.forward(x).real, -1.0, 1.0)
    root = np.sqrt((1.0 - tau) * (1.0 + tau))
    dtau_ds = np.abs(smap.derivative(x))
    z0 = smap._zeta0
    total = np.zeros(n)
    for side in (1.0, -1.0):
        zeta = tau + 1j * side * root
        if z0 is None:
            theta = np.angle(zeta)
            stretch = np.ones(n)
        else:
            theta = np.angle((np.conj(z0) * zeta - 1.0) / (zeta - z0))
            stretch = (abs(z0) ** 2 - 1.0) / np.abs(zeta - z0) ** 2
        g = 0.5 * cheb_eval(sol.density.coefficients, np.cos(theta))
        # |dtheta/ds| = stretch * |dzeta/dtau| * |dtau/ds|, |dzeta/dtau| = 1/root;
        # psi_arc = rho * |p'| * sqrt(1 - t^2)
        total += g * stretch * dtau_ds
    psi = total * arc.speed(t) * np.sqrt((1.0 - t) * (1.0 + t)) / root
    return Density(arc, 0.0, psi)


def slit_potential(x) -> np.ndarray:
    """ln|z + sqrt(z^2 - 1)|: the unit-slit potential vanishing on the slit."""
    return np.log(np.abs(inverse_joukowski(to_complex(x))))


def slit_gradient(x) -> np.ndarray:
    z = to_complex(x)
    f = 1.0 / (np.asarray(inverse_joukowski(z)) - z)   # 1/sqrt(z^2 - 1) on the |phi| > 1 branch
    return np.stack([f.real, -f.imag], axis=-1)
