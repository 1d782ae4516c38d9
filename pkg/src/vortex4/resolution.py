"""Reduction of the four-vortex family by SE(2) and its resolution.

The projection ``project`` sends an ambient configuration with nonzero
translational momentum to reduced coordinates ``(u0, u_1..u_N)`` with
``u0 >= 0`` and ``sum u_n = 0``; the section ``section`` (the standard gauge)
is a right inverse defined on the whole closed half space, including the
boundary ``u0 = 0`` that carries the rotational (``nu = 0``) states.

For three satellites the coordinates are canonicalized to ``(v1, v2)`` by a
discrete Fourier change of basis.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

import numpy as np

from .errors import DomainError, SingularSectorError
from .se2 import SE2Element, Se2Momentum
from .vortex_core import Strengths, Trajectory, check_collisions, diameter, vector_field

THETA3 = cmath.exp(2j * math.pi / 3)
SINGULAR_TOL = 1e-10


@dataclass(frozen=True)
class UState:
    """Reduced state: boundary coordinate ``u0 >= 0`` and zero-sum satellites ``u``."""

    u0: float
    u: np.ndarray

    def __post_init__(self):
        u0 = float(self.u0)
        if not u0 >= 0.0:
            raise DomainError(f"u0 must be nonnegative, got {u0}")
        u = np.array(self.u, dtype=complex).ravel()
        # stay on the constraint surface sum u_n = 0
        u = u - u.mean()
        object.__setattr__(self, "u0", u0)
        object.__setattr__(self, "u", u)

    @property
    def n(self) -> int:
        return self.u.size

    @property
    def shift(self) -> float:
        """The rescaled parameter ``u0 / N``."""
        return self.u0 / self.n


@dataclass(frozen=True)
class VState:
    """Canonical reduced state for three satellites; ``u = u0/3``."""

    v1: complex
    v2: complex
    u: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "v1", complex(self.v1))
        object.__setattr__(self, "v2", complex(self.v2))
        u = float(self.u)
        if not u >= 0.0:
            raise DomainError(f"u must be nonnegative, got {u}")
        object.__setattr__(self, "u", u)

    @property
    def v(self) -> np.ndarray:
        return np.array([self.v1, self.v2])


def _family_check(g: Strengths, n: int | None = None):
    if not g.is_family:
        raise ValueError("reduction needs the family strengths (G, -G/N, ..., -G/N)")
    if n is not None and g.n_sat != n:
        raise ValueError(f"state has {n} satellites but strengths have {g.n_sat}")


def project(s, g: Strengths) -> UState:
    z = np.asarray(s, dtype=complex).ravel()
    _family_check(g, z.size - 1)
    N = g.n_sat
    rel = z[1:] - z[0]
    S = complex(np.sum(rel))
    if abs(S) < SINGULAR_TOL * max(diameter(z), np.finfo(float).tiny):
        raise SingularSectorError(f"|sum(z_m - z_0)| = {abs(S):.3g}: state has zero translational momentum")
    u0 = abs(S)
    return UState(u0, u0 * rel / S - u0 / N)


def project_alt(s, g: Strengths) -> UState:
    """Same map written through the momentum ``nu``: ``u0 = N|nu|/|G|``."""
    z = np.asarray(s, dtype=complex).ravel()
    _family_check(g, z.size - 1)
    N, G = g.n_sat, g.gamma
    nu = -1j * complex(np.sum(g.array * z))
    if abs(nu) < SINGULAR_TOL * abs(G) / N * max(diameter(z), np.finfo(float).tiny):
        raise SingularSectorError("translational momentum is zero")
    u0 = N * abs(nu) / abs(G)
    return UState(u0, (u0 / (N * nu)) * (1j * G * (z[1:] - z[0]) - nu))


def section(us: UState, g: Strengths) -> np.ndarray:
    """Standard gauge: ``z0 = 0`` and ``z_n = u_n + u0/N``."""
    _family_check(g, us.n)
    z = np.concatenate([[0.0 + 0j], us.u + us.u0 / us.n])
    check_collisions(z)
    return z


def gauge_momentum(us: UState, g: Strengths) -> Se2Momentum:
    N, G = us.n, g.gamma
    mu = G / (2 * N) * float(np.sum(np.abs(us.u) ** 2)) + G * us.u0**2 / (2 * N**2)
    return Se2Momentum(mu, 1j * G * us.u0 / N)


def bracket_structure(us: UState, g: Strengths) -> np.ndarray:
    """Table ``C`` with ``{u_m, conj(u_n)} = -2i C[m, n]``.

    ``C`` is the coefficient of the canonical bracket (the convention in which
    one vortex of strength ``G`` has coefficient ``1/G``); ``{u_m, u_n}`` and
    ``{u_m, u0}`` vanish.  The table does not depend on the state.
    """
    N, G = us.n, g.gamma
    return np.full((N, N), 1.0 / G, dtype=complex) - (N / G) * np.eye(N)


def bracket_values(table: np.ndarray) -> np.ndarray:
    """Convert a coefficient table into actual bracket values."""
    return -2j * np.asarray(table)


# N = 3 canonicalization

_T3 = np.array([[1, 1], [THETA3, THETA3**2], [THETA3**2, THETA3]])
_T3_INV = np.array([[1, THETA3**2, THETA3], [1, THETA3, THETA3**2]]) / 3


def to_v(us: UState) -> VState:
    if us.n != 3:
        raise ValueError("to_v needs exactly three satellites")
    v = _T3_INV @ us.u
    return VState(v[0], v[1], us.u0 / 3)


def from_v(vs: VState) -> UState:
    return UState(3 * vs.u, _T3 @ vs.v)


def v_coordinates(u: np.ndarray) -> np.ndarray:
    """``(v1, v2)`` as linear functions of three satellite coordinates."""
    return _T3_INV @ np.asarray(u, dtype=complex)


# general N

def general_matrices(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Forward matrix (columns: ones, then shifted powers of theta) and its closed-form inverse."""
    if n < 3:
        raise ValueError("general canonicalization needs n >= 3")
    th = cmath.exp(2j * math.pi / n)
    a = -1 / (1 - th)
    b = th / (1 - th)
    tt = [th**k for k in range(1, n)]
    ee = [1 + n * a, 1 + n * b] + [1.0] * (n - 3)
    fwd = np.empty((n, n), dtype=complex)
    inv = np.empty((n, n), dtype=complex)
    fwd[:, 0] = 1
    inv[:, 0] = 1
    for i in range(n - 1):
        # right rotation of the list by i places
        fwd[:, i + 1] = [1] + tt[-i:] + tt[:-i] if i else [1] + tt
        inv[:, i + 1] = [1] + ee[-i:] + ee[:-i] if i else [1] + ee
    return fwd, inv / n


def to_v_general(us: UState, n: int | None = None) -> np.ndarray:
    """Coordinates ``v_1..v_{N-1}`` (the mean coordinate is zero on reduced states)."""
    n = us.n if n is None else n
    if n != us.n:
        raise ValueError(f"state has {us.n} satellites, asked for {n}")
    _, inv = general_matrices(n)
    return (inv @ us.u)[1:]


def from_v_general(v, u0: float = 0.0) -> UState:
    v = np.asarray(v, dtype=complex).ravel()
    n = v.size + 1
    fwd, _ = general_matrices(n)
    return UState(u0, fwd @ np.concatenate([[0.0], v]))


def v_bracket_structure(g: Strengths) -> np.ndarray:
    """Coefficient table for ``(v1, v2)``: ``{v_i, conj(v_j)} = -2i C[i, j]``.

    Obtained from the u-table by the linear change of basis; both diagonal
    entries are ``-1/G`` and the off-diagonal ones vanish.
    """
    _family_check(g, 3)
    C = np.full((3, 3), 1.0 / g.gamma) - (3 / g.gamma) * np.eye(3)
    return _T3_INV @ C @ _T3_INV.conj().T


# reconstruction

def body_velocity(s: np.ndarray, x: np.ndarray, sdot: np.ndarray) -> tuple[float, complex]:
    """Least-squares ``(w, b)`` with ``x_n - sdot_n = i w s_n + b`` for all vortices."""
    r = x - sdot
    M = np.zeros((2 * s.size, 3))
    M[0::2, 0] = -s.imag
    M[1::2, 0] = s.real
    M[0::2, 1] = 1.0
    M[1::2, 2] = 1.0
    rhs = np.empty(2 * s.size)
    rhs[0::2] = r.real
    rhs[1::2] = r.imag
    sol, *_ = np.linalg.lstsq(M, rhs, rcond=None)
    return float(sol[0]), complex(sol[1], sol[2])


def reconstruct(c: Trajectory, g: Strengths, g0: SE2Element | None = None, cfg=None) -> Trajectory:
    """Lift a reduced trajectory to the ambient space.

    ``c.states`` rows are either reduced satellite vectors ``u`` (with
    ``c.diagnostics['u0']`` or a zero boundary coordinate) or ``(v1, v2)``
    pairs for three satellites with ``c.diagnostics['u']``.  The gauge
    ``g(t)`` solves ``g^{-1} dg/dt = (w, b)`` where ``(w, b)`` matches the
    ambient velocity at ``g . section(c)``; the reduced state and the gauge
    are advanced together by the adaptive integrator from ``c(0)`` and sampled
    at the times of ``c``.
    """
    from .integrate import IntegratorConfig, integrate
    from .reduced_dynamics import u_field

    cfg = cfg or IntegratorConfig()
    g0 = g0 or SE2Element.identity()
    states = np.asarray(c.states, dtype=complex)
    if states.ndim != 2:
        raise ValueError("reduced trajectory states must be a 2-d array")
    N = g.n_sat
    if states.shape[1] == 2 and N == 3:
        upar = float(np.asarray(c.diagnostics.get("u", np.zeros(len(c))))[0])
        us0 = from_v(VState(states[0, 0], states[0, 1], upar))
    elif states.shape[1] == N:
        u0 = float(np.asarray(c.diagnostics.get("u0", np.zeros(len(c))))[0])
        us0 = UState(u0, states[0])
    else:
        raise ValueError(f"cannot interpret reduced states of width {states.shape[1]}")
    u0 = us0.u0

    def rhs(t, y):
        us = UState(u0, y[:N])
        A = y[N] / abs(y[N])
        s = section(us, g)
        udot = u_field(us, g)
        sdot = np.concatenate([[0.0], udot])
        w, b = body_velocity(s, vector_field(s, g), sdot)
        return np.concatenate([udot, [A * 1j * w, A * b]])

    y = np.concatenate([us0.u, [g0.A, g0.a]])
    times = np.asarray(c.times, dtype=float)
    out = np.empty((times.size, N + 1), dtype=complex)

    def ambient(y):
        gel = SE2Element(y[N], y[N + 1])
        return gel.A * section(UState(u0, y[:N]), g) + gel.a

    out[0] = ambient(y)
    for i in range(1, times.size):
        seg = integrate(rhs, y, (times[i - 1], times[i]), cfg)
        y = seg.final.copy()
        y[N] /= abs(y[N])
        out[i] = ambient(y)
    return Trajectory(times, out)


def permute_u(us: UState, perm) -> UState:
    """``(sigma . u)_k = u_{sigma(k)}`` with ``perm`` listing images of ``1..N``."""
    idx = [int(p) - 1 for p in perm]
    if sorted(idx) != list(range(us.n)):
        raise ValueError(f"{perm} is not a permutation of 1..{us.n}")
    return UState(us.u0, us.u[idx])


__all__ = [
    "THETA3",
    "UState",
    "VState",
    "body_velocity",
    "bracket_structure",
    "bracket_values",
    "from_v",
    "from_v_general",
    "gauge_momentum",
    "general_matrices",
    "permute_u",
    "project",
    "project_alt",
    "reconstruct",
    "section",
    "to_v",
    "to_v_general",
    "v_bracket_structure",
    "v_coordinates",
]
