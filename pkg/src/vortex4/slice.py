"""Slice coordinates near the equilateral equilibrium and the perturbative return map.

Near ``v = (alpha, 0)`` the reduced state is written as

    v1 = f e^{i theta},  v2 = (q - i p) e^{i theta},  f = sqrt(alpha^2 + 2j - q^2 - p^2)

so that ``theta`` is the SO(2) angle, ``j`` the momentum offset and ``z = q + i p``
the transverse shape.  In these coordinates the reduced symplectic form is
``G (dtheta ^ dj + dq ^ dp)``.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .calculus import jacobian_real
from .errors import ChartError, HyperbolicRegimeError
from .resolution import VState


def wrap_angle(theta: float) -> float:
    """Representative in ``(-pi, pi]``."""
    t = math.remainder(theta, 2 * math.pi)
    return math.pi if t == -math.pi else t


@dataclass(frozen=True)
class SliceState:
    theta: float
    j: float
    q: float
    p: float

    @property
    def z(self) -> complex:
        return complex(self.q, self.p)


@dataclass(frozen=True)
class WState:
    theta: float
    k: float
    w: complex


@dataclass(frozen=True)
class PoincareEstimate:
    omega_plus: float
    omega_minus: float
    matrix: np.ndarray

    @property
    def rotation_number(self) -> float:
        """Signed rotation per return of the linear map (negative: clockwise in ``(q, p)``)."""
        return -self.omega_minus


def from_slice(ss: SliceState, alpha_e: float, u: float = 0.0) -> VState:
    f2 = alpha_e**2 + 2 * ss.j - ss.q**2 - ss.p**2
    if not f2 > 0:
        raise ChartError(f"alpha^2 + 2j - q^2 - p^2 = {f2:.3g} is not positive")
    e = cmath.exp(1j * ss.theta)
    return VState(math.sqrt(f2) * e, complex(ss.q, -ss.p) * e, u)


def to_slice(vs: VState, alpha_e: float) -> SliceState:
    v1, v2 = vs.v1, vs.v2
    if not abs(v1 - alpha_e) < alpha_e:
        raise ChartError(f"|v1 - alpha| = {abs(v1 - alpha_e):.3g} is outside the chart")
    r = abs(v1)
    z = v1 * v2.conjugate() / r
    j = 0.5 * (r**2 + abs(v2) ** 2 - alpha_e**2)
    return SliceState(wrap_angle(cmath.phase(v1)), j, z.real, z.imag)


def _v_form(gamma: float) -> np.ndarray:
    # symplectic form -G (dx1 ^ dy1 + dx2 ^ dy2) in coordinates (x1, y1, x2, y2)
    om = np.zeros((4, 4))
    for k in (0, 2):
        om[k, k + 1] = -gamma
        om[k + 1, k] = gamma
    return om


def _canonical(scale: float = 1.0) -> np.ndarray:
    # scale (dtheta ^ dj + dq ^ dp) in coordinates (theta, j, q, p)
    om = np.zeros((4, 4))
    om[0, 1], om[1, 0] = scale, -scale
    om[2, 3], om[3, 2] = scale, -scale
    return om


def slice_symplectic_check(ss: SliceState, alpha_e: float, gamma: float) -> float:
    """Max-norm defect (relative to ``|G|``) between the pulled-back v-space form and ``G(dtheta^dj + dq^dp)``."""
    from_slice(ss, alpha_e)

    def fmap(x):
        vs = from_slice(SliceState(*x), alpha_e)
        return [vs.v1.real, vs.v1.imag, vs.v2.real, vs.v2.imag]

    x0 = np.array([ss.theta, ss.j, ss.q, ss.p])
    J = jacobian_real(fmap, x0, h=1e-5 * alpha_e)
    pulled = J.T @ _v_form(gamma) @ J
    return float(np.max(np.abs(pulled - _canonical(gamma))) / abs(gamma))


def h_slice_trunc0(ss: SliceState, u: float, alpha_e: float, gamma: float, epsilon_order: int = 4) -> float:
    """Taylor expansion of the reduced energy about the equilateral point.

    Terms are grouped by their order in ``epsilon`` under ``(q, p, j) ->
    (eps q, eps p, eps^2 j)``; every group up to ``epsilon_order`` (0..4) is
    included, each carrying its ``u`` and ``u^2`` coefficients.
    """
    if epsilon_order not in range(5):
        raise ValueError("epsilon_order must be 0..4")
    a, G = alpha_e, gamma
    z = ss.z
    e = cmath.exp(1j * ss.theta)
    s = 2 * ss.j - abs(z) ** 2
    pi = math.pi
    terms = [
        G**2 * math.log(a) / (3 * pi),
        -G**2 * (e * z).real * u / (2 * pi * a**2),
        G**2 * s / (6 * pi * a**2) - 3 * G**2 * (z**2 * e**2).real * u**2 / (4 * pi * a**4),
        2 * G**2 * (z**3).real / (9 * pi * a**3) + G**2 * s * (e * z).real * u / (2 * pi * a**4),
        -G**2 * s**2 / (12 * pi * a**4) + G**2 * (z**4 * e).real * u / (2 * pi * a**5)
        + 3 * G**2 * s * (z**2 * e**2).real * u**2 / (2 * pi * a**6),
    ]
    return float(sum(terms[: epsilon_order + 1]))


def h_slice_trunc1(ss: SliceState, u: float, alpha_e: float) -> float:
    """Rescaled low-order Hamiltonian (energy divided by ``G^2/(3 pi alpha^2)``, constants dropped)."""
    z = ss.z
    return float(ss.j - 0.5 * abs(z) ** 2 - 1.5 * u * (cmath.exp(1j * ss.theta) * z).real
                 + 2 * (z**3).real / (3 * alpha_e))


def to_w(ss: SliceState, u: float) -> WState:
    z = ss.z
    return WState(ss.theta, ss.j + 0.5 * abs(z) ** 2, cmath.exp(1j * ss.theta) * z + 0.75 * u)


def from_w(ws: WState, u: float) -> SliceState:
    z = cmath.exp(-1j * ws.theta) * (ws.w - 0.75 * u)
    return SliceState(ws.theta, ws.k - 0.5 * abs(z) ** 2, z.real, z.imag)


def w_symplectic_check(ss: SliceState, u: float) -> float:
    """Defect of ``dtheta^dk + dQ^dP`` pulled back to ``(theta, j, q, p)`` against ``dtheta^dj + dq^dp``."""

    def fmap(x):
        ws = to_w(SliceState(*x), u)
        return [ws.theta, ws.k, ws.w.real, ws.w.imag]

    x0 = np.array([ss.theta, ss.j, ss.q, ss.p])
    J = jacobian_real(fmap, x0)
    return float(np.max(np.abs(J.T @ _canonical() @ J - _canonical())))


def omega_minus(u: float, alpha_e: float) -> float:
    """``(1 - sqrt(1 - x))/2`` with ``x = 36u^2/alpha^2``, written to avoid cancellation at small ``u``."""
    x = 36 * u**2 / alpha_e**2
    if x > 1:
        raise HyperbolicRegimeError(f"36u^2/alpha^2 = {x:.4g} > 1")
    return x / (2 * (1 + math.sqrt(1 - x)))


def omega_slow(u: float, alpha_e: float) -> float:
    """Slow rotation rate of the full return map, ``omega_minus + 9u^2/(4 alpha^2)``.

    The low-order Hamiltonian drops slice terms of orders eps^3 and eps^4
    (``s Re(e^{i theta} z) u`` and ``s^2``, with ``s = 2j - |z|^2``).  Evaluated
    along the orbit shifted by ``-3u/4``, they change the |z|^2 coefficient and
    the rotation speed by amounts of order ``u^2``, the same order as
    ``omega_minus`` itself.  Together they add ``9u^2/(4 alpha^2)``: the
    Floquet rotation of the full flow approaches this law with an ``O(u^4)``
    remainder (see ``poincare.floquet_rotation``).
    """
    return omega_minus(u, alpha_e) + 9 * u**2 / (4 * alpha_e**2)


def omegas(u: float, alpha_e: float) -> tuple[float, float]:
    """``(omega_plus, omega_minus) = ((1 +- sqrt(1 - 36u^2/alpha^2))/2``."""
    om_m = omega_minus(u, alpha_e)
    return 1 - om_m, om_m


def poincare_estimate(u: float, alpha_e: float) -> PoincareEstimate:
    """Linear estimate of the return map on ``w`` at ``theta = 0``.

    The matrix is ``P R(-2 pi omega_minus) P^{-1}`` with
    ``P = diag(sqrt(1 - 6u/alpha), sqrt(1 + 6u/alpha))``, which is exactly the
    map ``w(0) -> w(2 pi)`` of :func:`w_solution` (the rotation is clockwise).
    """
    x = 36 * u**2 / alpha_e**2
    if x >= 1:
        raise HyperbolicRegimeError(f"36u^2/alpha^2 = {x:.4g}: no elliptic estimate")
    om_m = omega_minus(u, alpha_e)
    om_p = 1 - om_m
    P = np.diag([math.sqrt(1 - 6 * u / alpha_e), math.sqrt(1 + 6 * u / alpha_e)])
    phi = -2 * math.pi * om_m
    R = np.array([[math.cos(phi), -math.sin(phi)], [math.sin(phi), math.cos(phi)]])
    return PoincareEstimate(om_p, om_m, P @ R @ np.linalg.inv(P))


def w_solution(t: float, a_const: complex, u: float, alpha_e: float) -> complex:
    """Closed-form solution of ``dw/dt = 2iw + (3iu/alpha) e^{3it} conj(w)``."""
    om_p, om_m = omegas(u, alpha_e)
    return (a_const * math.sqrt(om_m) * cmath.exp(-1j * om_p * t)
            - a_const.conjugate() * math.sqrt(om_p) * cmath.exp(-1j * om_m * t)) * cmath.exp(2j * t)


def w_constant(w0: complex, u: float, alpha_e: float) -> complex:
    """The constant ``A`` of :func:`w_solution` that gives ``w(0) = w0``."""
    om_m = omega_minus(u, alpha_e)
    om_p = 1 - om_m
    sm, sp = math.sqrt(om_m), math.sqrt(om_p)
    return complex(w0.real / (sm - sp), w0.imag / (sm + sp))


__all__ = [
    "PoincareEstimate",
    "SliceState",
    "WState",
    "from_slice",
    "from_w",
    "h_slice_trunc0",
    "h_slice_trunc1",
    "omega_minus",
    "omega_slow",
    "omegas",
    "poincare_estimate",
    "slice_symplectic_check",
    "to_slice",
    "to_w",
    "w_constant",
    "w_solution",
    "w_symplectic_check",
    "wrap_angle",
]
