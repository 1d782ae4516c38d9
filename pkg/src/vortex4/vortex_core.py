"""Planar point vortices: energy, velocity field, momentum map and cocycle.

States are arrays of complex positions ``z_n`` (index 0 is the central vortex
for the four-vortex family).  The Hamiltonian is

    H = -(1/8 pi) sum_{m != n} G_m G_n ln |z_m - z_n|^2

and the equations of motion are ``dz_n/dt = -(2i/G_n) dH/dzbar_n``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import CollisionError
from .se2 import SE2Element, Se2Momentum, Se2Vector

COLLISION_GUARD = 1e-9


@dataclass(frozen=True)
class Strengths:
    """Vortex circulations.

    ``Strengths.family(gamma, n_sat)`` builds the zero-total family
    ``(G, -G/N, ..., -G/N)``; the total is then exactly zero by construction.
    """

    values: tuple
    gamma: float | None = None
    n_sat: int | None = None

    def __post_init__(self):
        vals = tuple(float(x) for x in self.values)
        if not vals:
            raise ValueError("need at least one vortex")
        if any(v == 0.0 or not math.isfinite(v) for v in vals):
            raise ValueError(f"strengths must be finite and nonzero, got {vals}")
        object.__setattr__(self, "values", vals)

    @classmethod
    def family(cls, gamma: float, n_sat: int) -> Strengths:
        if n_sat < 1:
            raise ValueError("n_sat must be positive")
        if gamma == 0:
            raise ValueError("gamma must be nonzero")
        return cls((gamma,) + (-gamma / n_sat,) * n_sat, float(gamma), int(n_sat))

    @property
    def is_family(self) -> bool:
        return self.gamma is not None

    @property
    def total(self) -> float:
        # exact zero for the family instead of a rounded sum
        return 0.0 if self.is_family else float(sum(self.values))

    @property
    def array(self) -> np.ndarray:
        return np.asarray(self.values)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class FullState:
    z: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "z", np.array(self.z, dtype=complex).ravel())

    def __array__(self, dtype=None, copy=None):
        return self.z if dtype is None else self.z.astype(dtype)

    def __len__(self):
        return self.z.size


@dataclass
class Trajectory:
    """Sampled solution.  ``states`` is a 2-d array, one row per time.

    ``events`` holds ``(t, state)`` pairs located by the integrator, if any.
    """

    times: np.ndarray
    states: np.ndarray
    diagnostics: dict = field(default_factory=dict)
    events: list = field(default_factory=list)

    def __post_init__(self):
        self.times = np.asarray(self.times, dtype=float)
        self.states = np.asarray(self.states)
        if self.states.shape[0] != self.times.size:
            raise ValueError("times and states must have the same length")
        if self.times.size > 1:
            dt = np.diff(self.times)
            # backward integrations produce decreasing times
            if not (np.all(dt > 0) or np.all(dt < 0)):
                raise ValueError("times must be strictly monotone")
        for k, v in self.diagnostics.items():
            if len(v) != self.times.size:
                raise ValueError(f"diagnostic {k!r} has wrong length")

    def __len__(self):
        return self.times.size

    @property
    def final(self) -> np.ndarray:
        return self.states[-1]


def _positions(s) -> np.ndarray:
    return np.asarray(s, dtype=complex).ravel()


def pair_differences(z: np.ndarray) -> np.ndarray:
    return z[:, None] - z[None, :]


def check_collisions(z, guard: float = COLLISION_GUARD) -> np.ndarray:
    """Return the pairwise difference matrix, raising if two points nearly coincide."""
    z = _positions(z)
    d = pair_differences(z)
    dist = np.abs(d)
    n = z.size
    if n < 2:
        return d
    iu = np.triu_indices(n, 1)
    diam = float(np.max(dist[iu]))
    dmin = float(np.min(dist[iu]))
    if not np.isfinite(diam):
        raise CollisionError("non-finite vortex position")
    if dmin <= guard * diam or diam == 0.0:
        m, k = (int(x[np.argmin(dist[iu])]) for x in iu)
        raise CollisionError(f"vortices {m} and {k} collide (distance {dmin:.3g}, diameter {diam:.3g})")
    return d


def hamiltonian(s, g: Strengths) -> float:
    z = _positions(s)
    d = check_collisions(z)
    gam = g.array
    n = z.size
    iu = np.triu_indices(n, 1)
    w = gam[iu[0]] * gam[iu[1]]
    # factor 2 from m<n symmetry: -(2/8pi) sum_{m<n} G G ln|d|^2
    return float(-np.sum(w * np.log(np.abs(d[iu]) ** 2)) / (4.0 * math.pi))


def vector_field(s, g: Strengths) -> np.ndarray:
    z = _positions(s)
    d = check_collisions(z)
    gam = g.array
    with np.errstate(divide="ignore", invalid="ignore"):
        k = d / np.abs(d) ** 2
    np.fill_diagonal(k, 0.0)
    return (1j / (2.0 * math.pi)) * (k @ gam)


def momentum(s, g: Strengths) -> Se2Momentum:
    z = _positions(s)
    gam = g.array
    mu = -0.5 * float(np.sum(gam * np.abs(z) ** 2))
    nu = -1j * complex(np.sum(gam * z))
    return Se2Momentum(mu, nu)


def cocycle(gel: SE2Element, g: Strengths) -> Se2Momentum:
    tot = g.total
    return Se2Momentum(-tot * 0.5 * abs(gel.a) ** 2, -tot * 1j * gel.a)


def req_residual(s, g: Strengths, xi: Se2Vector) -> np.ndarray:
    z = _positions(s)
    return vector_field(z, g) - (1j * xi.u * z + xi.v)


def diameter(z) -> float:
    z = _positions(z)
    return float(np.max(np.abs(pair_differences(z))))


__all__ = [
    "FullState",
    "Strengths",
    "Trajectory",
    "check_collisions",
    "cocycle",
    "diameter",
    "hamiltonian",
    "momentum",
    "req_residual",
    "vector_field",
]
