"""The planar Euclidean group SE(2) in complex notation.

A group element is ``(A, a)`` with ``|A| = 1`` acting on the plane by
``z -> A z + a``.  Lie algebra elements are ``(u, v)`` with ``u`` real (angular
rate) and ``v`` complex (translational rate); dual elements are ``(mu, nu)``
paired by ``mu u + nu . v`` where ``z . w = Re(z conj(w))``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

_SERIES_SWITCH = 1e-6


def dot(z: complex, w: complex) -> float:
    """Euclidean inner product of two plane vectors, ``Re(z conj(w))``."""
    return (z * w.conjugate()).real


def wedge(z: complex, w: complex) -> float:
    """Planar cross product ``-Im(z conj(w))``."""
    return -(z * w.conjugate()).imag


@dataclass(frozen=True)
class SE2Element:
    A: complex = 1.0 + 0j
    a: complex = 0j

    def __post_init__(self):
        A = complex(self.A)
        r = abs(A)
        if r == 0.0 or not math.isfinite(r):
            raise ValueError(f"rotation part must be a finite nonzero complex number, got {self.A!r}")
        object.__setattr__(self, "A", A / r)
        object.__setattr__(self, "a", complex(self.a))

    @classmethod
    def identity(cls) -> SE2Element:
        return cls(1.0, 0.0)

    @classmethod
    def rotation(cls, angle: float) -> SE2Element:
        return cls(cmath.exp(1j * angle), 0.0)

    @classmethod
    def translation(cls, a: complex) -> SE2Element:
        return cls(1.0, a)

    @property
    def angle(self) -> float:
        return cmath.phase(self.A)

    def __matmul__(self, other: SE2Element) -> SE2Element:
        return compose(self, other)

    def __call__(self, z):
        return act(self, z)


@dataclass(frozen=True)
class Se2Vector:
    u: float = 0.0
    v: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "u", float(self.u))
        object.__setattr__(self, "v", complex(self.v))

    def __mul__(self, s: float) -> Se2Vector:
        return Se2Vector(self.u * s, self.v * s)

    __rmul__ = __mul__

    def __add__(self, other: Se2Vector) -> Se2Vector:
        return Se2Vector(self.u + other.u, self.v + other.v)

    def __sub__(self, other: Se2Vector) -> Se2Vector:
        return Se2Vector(self.u - other.u, self.v - other.v)


@dataclass(frozen=True)
class Se2Momentum:
    mu: float = 0.0
    nu: complex = 0j

    def __post_init__(self):
        object.__setattr__(self, "mu", float(self.mu))
        object.__setattr__(self, "nu", complex(self.nu))

    def __add__(self, other: Se2Momentum) -> Se2Momentum:
        return Se2Momentum(self.mu + other.mu, self.nu + other.nu)

    def __sub__(self, other: Se2Momentum) -> Se2Momentum:
        return Se2Momentum(self.mu - other.mu, self.nu - other.nu)


def pairing(m: Se2Momentum, xi: Se2Vector) -> float:
    return m.mu * xi.u + dot(m.nu, xi.v)


def compose(g: SE2Element, h: SE2Element) -> SE2Element:
    # SE2Element renormalizes A on construction
    return SE2Element(g.A * h.A, g.a + g.A * h.a)


def inverse(g: SE2Element) -> SE2Element:
    Ainv = g.A.conjugate()
    return SE2Element(Ainv, -Ainv * g.a)


def act(g: SE2Element, z):
    """Standard action ``A z + a``; ``z`` may be a scalar or an array."""
    if np.isscalar(z):
        return g.A * z + g.a
    return g.A * np.asarray(z, dtype=complex) + g.a


def exp(xi: Se2Vector) -> SE2Element:
    u, v = xi.u, xi.v
    A = cmath.exp(1j * u)
    if abs(u) < _SERIES_SWITCH:
        # (e^{iu} - 1)/(iu) = sum_k (iu)^k/(k+1)!
        iu = 1j * u
        a = v * (1 + iu / 2 + iu**2 / 6 + iu**3 / 24 + iu**4 / 120)
    else:
        a = (A - 1) * v / (1j * u)
    return SE2Element(A, a)


def adjoint(g: SE2Element, xi: Se2Vector) -> Se2Vector:
    return Se2Vector(xi.u, g.A * xi.v - 1j * xi.u * g.a)


def ad(xi: Se2Vector, eta: Se2Vector) -> Se2Vector:
    return Se2Vector(0.0, 1j * (xi.u * eta.v - eta.u * xi.v))


def coadjoint(g: SE2Element, m: Se2Momentum) -> Se2Momentum:
    Anu = g.A * m.nu
    return Se2Momentum(m.mu + wedge(g.a, Anu), Anu)


def coad(xi: Se2Vector, m: Se2Momentum) -> Se2Momentum:
    return Se2Momentum(wedge(xi.v, m.nu), 1j * xi.u * m.nu)


def generator(xi: Se2Vector, z):
    """Infinitesimal generator of the standard action, ``i u z + v``."""
    if np.isscalar(z):
        return 1j * xi.u * z + xi.v
    return 1j * xi.u * np.asarray(z, dtype=complex) + xi.v


def isclose(g: SE2Element, h: SE2Element, tol: float = 1e-12) -> bool:
    return abs(g.A - h.A) <= tol and abs(g.a - h.a) <= tol
