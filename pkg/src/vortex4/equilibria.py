"""Rotating relative equilibria of the four-vortex family.

Two families exist at every size ``alpha``, both with zero translational
momentum, angular momentum ``G alpha^2/2`` and angular velocity
``u_e = G / (3 pi alpha^2)``:

* ``O``: the satellites form an equilateral triangle around the central vortex,
  ``v = (alpha, 0)``;
* ``Y``: a collinear-pair shape with ``v = alpha (1, r1)/sqrt(1 + r1^2)`` where
  ``r1 = (1 + sqrt 3 - 12^(1/4))/2`` is the small positive root of
  ``r^4 - 2r^3 - 2r + 1``.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass

import numpy as np

from .calculus import as_complex, as_real
from .reduced_dynamics import v_field_u0
from .resolution import THETA3, VState, from_v, section
from .se2 import Se2Vector
from .vortex_core import Strengths, check_collisions, momentum, req_residual

SQRT3 = math.sqrt(3.0)
R1 = (1 + SQRT3 - 12 ** 0.25) / 2
R2 = (1 + SQRT3 + 12 ** 0.25) / 2


def rotation_rate(alpha_e: float, gamma: float) -> float:
    return gamma / (3 * math.pi * alpha_e**2)


@dataclass(frozen=True)
class ReqSpec:
    """A relative equilibrium.

    ``z`` is placed with its rotation center at the origin, so it rotates
    rigidly with generator ``(u_e, 0)``.  ``v_e`` and ``center`` refer to the
    standard-gauge copy (central vortex at the origin, see :meth:`standard_gauge`),
    whose generator is ``(u_e, v_e)`` with ``v_e = -i u_e center``.
    """

    family: str
    alpha_e: float
    gamma: float
    u_e: float
    v_e: complex
    mu_e: float
    z: np.ndarray
    v: VState
    center: complex

    @property
    def strengths(self) -> Strengths:
        return Strengths.family(self.gamma, 3)

    def xi(self) -> Se2Vector:
        return Se2Vector(self.u_e, 0.0)

    def standard_gauge(self) -> tuple[np.ndarray, Se2Vector]:
        return section(from_v(self.v), self.strengths), Se2Vector(self.u_e, self.v_e)

    def to_dict(self) -> dict:
        def c(x):
            return [float(np.real(x)), float(np.imag(x))]

        return {
            "family": self.family,
            "alpha_e": self.alpha_e,
            "gamma": self.gamma,
            "u_e": self.u_e,
            "v_e": c(self.v_e),
            "mu_e": self.mu_e,
            "z": [c(x) for x in self.z],
            "v": {"v1": c(self.v.v1), "v2": c(self.v.v2), "u": self.v.u},
            "center": c(self.center),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    @classmethod
    def from_dict(cls, d: dict) -> ReqSpec:
        def c(x):
            return complex(x[0], x[1])

        return cls(d["family"], float(d["alpha_e"]), float(d["gamma"]), float(d["u_e"]), c(d["v_e"]),
                   float(d["mu_e"]), np.array([c(x) for x in d["z"]]),
                   VState(c(d["v"]["v1"]), c(d["v"]["v2"]), float(d["v"]["u"])), c(d["center"]))


def _check(alpha_e: float, gamma: float):
    if not alpha_e > 0:
        raise ValueError("alpha_e must be positive")
    if gamma == 0:
        raise ValueError("gamma must be nonzero")


def make_O(alpha_e: float, gamma: float) -> ReqSpec:
    _check(alpha_e, gamma)
    z = alpha_e * np.array([0, 1, THETA3, THETA3**2])
    return ReqSpec("O", float(alpha_e), float(gamma), rotation_rate(alpha_e, gamma), 0j,
                   gamma * alpha_e**2 / 2, z, VState(alpha_e, 0.0), 0j)


def make_Y(alpha_e: float, gamma: float) -> ReqSpec:
    _check(alpha_e, gamma)
    r1 = R1
    s = math.sqrt(1 + r1**2)
    pref = alpha_e * (1 + r1) / (2 * s)
    z = pref * (np.array([-1, 1, -2, -2]) + 1j * SQRT3 * (1 - r1) / (1 + r1) * np.array([0, 0, 1, -1]))
    v1 = alpha_e / s
    u_e = rotation_rate(alpha_e, gamma)
    center = (r1 + 1) * v1 / 2
    return ReqSpec("Y", float(alpha_e), float(gamma), u_e, -1j * u_e * center,
                   gamma * alpha_e**2 / 2, z, VState(v1, r1 * v1), complex(center))


def make(family: str, alpha_e: float, gamma: float) -> ReqSpec:
    if family == "O":
        return make_O(alpha_e, gamma)
    if family == "Y":
        return make_Y(alpha_e, gamma)
    raise ValueError(f"unknown family {family!r} (expected 'O' or 'Y')")


def solve_radial(theta_branch: int) -> list[float]:
    """Positive roots ``r = |v1/v2|`` of the radial equilibrium equations with ``cos 3 theta = +-1``."""
    if theta_branch not in (1, -1):
        raise ValueError("theta_branch must be +1 or -1")
    c = float(theta_branch)
    roots = []
    for R in (c + SQRT3, c - SQRT3):
        disc = R * R - 4
        if disc < 0 or R <= 0:
            continue
        for r in ((R - math.sqrt(disc)) / 2, (R + math.sqrt(disc)) / 2):
            if r > 0:
                roots.append(r)
    return sorted(roots)


def radial_residual(r: float, theta: float) -> tuple[float, float]:
    """Real and imaginary parts of the equilibrium condition in polar form ``v1/v2 = r e^{i theta}``."""
    re = r**4 * math.cos(6 * theta) - 2 * r * (r**2 + 1) * math.cos(3 * theta) + 1
    im = r**3 * math.sin(6 * theta) - 2 * (r**2 + 1) * math.sin(3 * theta)
    return re, im


def v_req_residual(vs: VState, u_e: float, g: Strengths) -> np.ndarray:
    return v_field_u0(vs, g) - 1j * u_e * vs.v


@dataclass(frozen=True)
class Linearization:
    jacobian: np.ndarray
    eigenvalues: np.ndarray


def field_jacobian(s, g: Strengths, xi: Se2Vector) -> np.ndarray:
    """Exact real Jacobian of ``X(z) - (i u z + v)`` in ``(x0, y0, x1, y1, ...)``.

    The vortex velocity depends only on ``conj(z_n - z_m)``, so its derivative
    is ``dX_n/dzbar_m = (i/2 pi) G_m / conj(z_n - z_m)^2`` for ``m != n`` (and
    minus their sum on the diagonal) and ``dX/dz = 0``.
    """
    z = np.asarray(s, dtype=complex)
    check_collisions(z)
    gam = g.array
    n = z.size
    d = np.conj(z[:, None] - z[None, :])
    with np.errstate(divide="ignore", invalid="ignore"):
        B = (1j / (2 * math.pi)) * gam[None, :] / d**2
    np.fill_diagonal(B, 0.0)
    np.fill_diagonal(B, -B.sum(axis=1))
    A = -1j * xi.u * np.eye(n)
    dx = A + B
    dy = 1j * (A - B)
    J = np.empty((2 * n, 2 * n))
    J[0::2, 0::2] = dx.real
    J[1::2, 0::2] = dx.imag
    J[0::2, 1::2] = dy.real
    J[1::2, 1::2] = dy.imag
    return J


def fd_jacobian(s, g: Strengths, xi: Se2Vector, h: float | None = None) -> np.ndarray:
    """The same Jacobian by central 5-point differences and one Richardson step.

    The default step is ``1e-5`` times the configuration size.
    """
    z0 = np.asarray(s, dtype=complex)
    x0 = as_real(z0)
    scale = float(np.max(np.abs(z0 - z0.mean())))
    h = 1e-5 * scale if h is None else h

    def f(x):
        return as_real(req_residual(as_complex(x), g, xi))

    def jac(step):
        n = x0.size
        J = np.empty((n, n))
        for k in range(n):
            e = np.zeros(n)
            e[k] = step
            J[:, k] = (-f(x0 + 2 * e) + 8 * f(x0 + e) - 8 * f(x0 - e) + f(x0 - 2 * e)) / (12 * step)
        return J

    Jh = jac(h)
    J2h = jac(2 * h)
    return Jh + (Jh - J2h) / 15.0


def linearize(s, g: Strengths, xi: Se2Vector, method: str = "exact") -> Linearization:
    """Linearization of the co-rotating flow at a relative equilibrium.

    ``method='exact'`` uses the closed-form derivative; ``'fd'`` uses finite
    differences.  The O spectrum has repeated eigenvalues with nontrivial
    Jordan blocks, so an O(h^4) perturbation of the matrix moves them by its
    square root; only the exact Jacobian resolves them to 1e-6.
    """
    if method == "exact":
        J = field_jacobian(s, g, xi)
    elif method == "fd":
        J = fd_jacobian(s, g, xi)
    else:
        raise ValueError(f"unknown method {method!r}")
    return Linearization(J, np.linalg.eigvals(J))


def y_geometry(spec: ReqSpec) -> tuple[float, float]:
    """Outer/inner rotation-radius ratio and the angle (degrees) subtended at the center by the outer pair."""
    if spec.family != "Y":
        raise ValueError("y_geometry needs a Y equilibrium")
    rel = spec.z  # centered on the rotation center
    inner = 0.5 * (abs(rel[0]) + abs(rel[1]))
    outer = 0.5 * (abs(rel[2]) + abs(rel[3]))
    ang = abs(np.angle(rel[2] / rel[3], deg=True))
    return outer / inner, float(ang)


def momentum_of(spec: ReqSpec):
    return momentum(spec.z, spec.strengths)


__all__ = [
    "Linearization",
    "R1",
    "R2",
    "ReqSpec",
    "fd_jacobian",
    "field_jacobian",
    "linearize",
    "make",
    "make_O",
    "make_Y",
    "momentum_of",
    "radial_residual",
    "rotation_rate",
    "solve_radial",
    "v_req_residual",
    "y_geometry",
]
