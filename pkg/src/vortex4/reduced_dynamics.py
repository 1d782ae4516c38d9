"""Reduced Hamiltonian dynamics in the u- and v-coordinates.

The reduced energy in u-space is

    h_u = -(1/4 pi)(G/N)^2 sum_{m<n} ln|u_m - u_n|^2 + (G^2/4 pi N) sum_m ln|u_m + u|^2

with ``u = u0/N`` a parameter (``u0`` does not evolve).  For three satellites,
in the canonical coordinates ``(v1, v2)``,

    h_v = -(G^2/36 pi) ln|v1^3 - v2^3|^2 + (G^2/12 pi) ln|v1^3 + v2^3 - 3u v1 v2 + u^3|^2

which equals ``h_u`` up to the constant ``(G^2/36 pi) ln 27``.  The bracket
``{v_i, conj(v_i)}`` carries coefficient ``-1/G`` so ``dv/dt = (2i/G) dh/dvbar``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage, optimize

from .errors import CollisionError
from .integrate import IntegratorConfig, integrate
from .resolution import UState, VState, from_v, permute_u, to_v
from .vortex_core import Strengths, Trajectory

_GUARD = 1e-12
S3 = ((1, 2, 3), (2, 3, 1), (3, 1, 2), (1, 3, 2), (3, 2, 1), (2, 1, 3))


def _gamma(g: Strengths) -> float:
    if not g.is_family:
        raise ValueError("reduced dynamics needs the family strengths")
    return g.gamma


# u-space

def _u_guard(us: UState):
    scale = max(float(np.max(np.abs(us.u))), us.shift, 1e-300)
    d = us.u[:, None] - us.u[None, :]
    np.fill_diagonal(d, np.inf)
    if np.min(np.abs(d)) < _GUARD * scale:
        raise CollisionError("two satellites coincide in the reduced state")
    if np.min(np.abs(us.u + us.shift)) < _GUARD * scale:
        raise CollisionError("a satellite coincides with the central vortex")


def h_u(us: UState, g: Strengths) -> float:
    G, N = _gamma(g), us.n
    _u_guard(us)
    iu = np.triu_indices(N, 1)
    pair = np.sum(np.log(np.abs(us.u[iu[0]] - us.u[iu[1]]) ** 2))
    cen = np.sum(np.log(np.abs(us.u + us.shift) ** 2))
    return float(-(G / N) ** 2 * pair / (4 * math.pi) + G**2 * cen / (4 * math.pi * N))


def h_u_gradient(us: UState, g: Strengths) -> np.ndarray:
    """``dh_u / d conj(u_m)`` treating every ``u_m`` as independent."""
    G, N = _gamma(g), us.n
    _u_guard(us)
    d = us.u[:, None] - us.u[None, :]
    np.fill_diagonal(d, np.inf)
    pair = np.sum(1.0 / np.conj(d), axis=1)
    return -(G / N) ** 2 * pair / (4 * math.pi) + G**2 / (4 * math.pi * N) / np.conj(us.u + us.shift)


def u_field(us: UState, g: Strengths) -> np.ndarray:
    """Reduced velocity ``du_m/dt = sum_n {u_m, conj(u_n)} dh/dconj(u_n)``.

    With the constant bracket table this is ``(2iN/G)(grad_m - mean(grad))``.
    """
    G, N = _gamma(g), us.n
    grad = h_u_gradient(us, g)
    return (2j * N / G) * (grad - grad.mean())


# v-space

def _v_polys(vs: VState):
    v1, v2, u = vs.v1, vs.v2, vs.u
    D = v1**3 - v2**3
    P = v1**3 + v2**3 - 3 * u * v1 * v2 + u**3
    scale = max(abs(v1), abs(v2), u, 1e-300) ** 3
    if abs(D) < _GUARD * scale:
        raise CollisionError("satellite collision (v1^3 = v2^3)")
    if abs(P) < _GUARD * scale:
        raise CollisionError("central collision (v1^3 + v2^3 - 3u v1 v2 + u^3 = 0)")
    return D, P


def h_v(vs: VState, g: Strengths) -> float:
    G = _gamma(g)
    D, P = _v_polys(vs)
    return float(-G**2 / (36 * math.pi) * math.log(abs(D) ** 2) + G**2 / (12 * math.pi) * math.log(abs(P) ** 2))


def h_v_display(vs: VState, g: Strengths) -> float:
    """The same energy in its quotient form, kept for cross-checking."""
    G = _gamma(g)
    _v_polys(vs)
    v1, v2, u = vs.v1, vs.v2, vs.u
    s = v1**3 + v2**3
    a = math.log(abs((v1**3 - v2**3) / s**3))
    b = math.log(abs(1 - (3 * v1 * v2 - u**2) * u / s))
    return float(-G**2 / (18 * math.pi) * (a - 3 * b))


H_U_MINUS_H_V = -math.log(27.0) / (36 * math.pi)
"""``(h_u - h_v) / G^2``, a constant."""


def v_field(vs: VState, g: Strengths) -> np.ndarray:
    """``(dv1/dt, dv2/dt)`` from the analytic Wirtinger gradient of ``h_v``."""
    G = _gamma(g)
    D, P = _v_polys(vs)
    v1, v2, u = vs.v1, vs.v2, vs.u
    Dc, Pc = np.conj(D), np.conj(P)
    c1 = 1j * G / (6 * math.pi)
    c2 = 1j * G / (2 * math.pi)
    d1 = -c1 * np.conj(v1) ** 2 / Dc + c2 * (np.conj(v1) ** 2 - u * np.conj(v2)) / Pc
    d2 = c1 * np.conj(v2) ** 2 / Dc + c2 * (np.conj(v2) ** 2 - u * np.conj(v1)) / Pc
    return np.array([d1, d2])


def v_field_u0(vs: VState, g: Strengths) -> np.ndarray:
    """Closed form of the field on the boundary ``u = 0``."""
    G = _gamma(g)
    _v_polys(VState(vs.v1, vs.v2, 0.0))
    v1, v2 = vs.v1, vs.v2
    w = v1**6 - v2**6
    pref = -1j * G / (3 * math.pi) * w / abs(w) ** 2
    d1 = pref * np.conj(v1) ** 2 * (2 * np.conj(v2) ** 3 - np.conj(v1) ** 3)
    d2 = -pref * np.conj(v2) ** 2 * (2 * np.conj(v1) ** 3 - np.conj(v2) ** 3)
    return np.array([d1, d2])


def so2_momentum(vs: VState, g: Strengths) -> float:
    return 0.5 * _gamma(g) * (abs(vs.v1) ** 2 + abs(vs.v2) ** 2)


def s3_act(perm, vs: VState) -> VState:
    """Permutation action on ``(v1, v2)``.

    ``perm`` lists the images of ``(1, 2, 3)``; the satellites are relabelled by
    ``u_k -> u_{perm(k)}``.  The 3-cycle ``(2, 3, 1)`` gives
    ``(theta v1, v2/theta)`` and the transposition ``(1, 3, 2)`` swaps ``v1, v2``.
    """
    return to_v(permute_u(from_v(vs), perm))


def integrate_v(vs: VState, t_span, g: Strengths, cfg: IntegratorConfig | None = None, **kw) -> Trajectory:
    """Integrate the v-flow; states are rows ``(v1, v2)`` and ``u`` is held fixed."""
    u = vs.u

    def rhs(t, y):
        return v_field(VState(y[0], y[1], u), g)

    def diag(y):
        s = VState(y[0], y[1], u)
        return {"H": h_v(s, g), "mu": so2_momentum(s, g)}

    traj = integrate(rhs, vs.v, t_span, cfg, diagnostics=kw.pop("diagnostics", diag), **kw)
    traj.diagnostics["u"] = np.full(len(traj), u)
    return traj


def integrate_u(us: UState, t_span, g: Strengths, cfg: IntegratorConfig | None = None, **kw) -> Trajectory:
    u0 = us.u0

    def rhs(t, y):
        return u_field(UState(u0, y), g)

    def diag(y):
        return {"H": h_u(UState(u0, y), g)}

    traj = integrate(rhs, us.u, t_span, cfg, diagnostics=diag, **kw)
    traj.diagnostics["u0"] = np.full(len(traj), u0)
    return traj


# energy levels in the ratio v = v2/v1 at fixed SO(2) momentum

COLLISION_POINTS = tuple(np.concatenate([np.exp(2j * math.pi * np.arange(3) / 3),
                                         -np.exp(2j * math.pi * np.arange(3) / 3)]))


def ratio_energy(v: complex, mu: float, gamma: float) -> float:
    num = (gamma / (2 * mu)) ** 3 * (1 + abs(v) ** 2) ** 3 * (1 - v**3)
    return float(-gamma**2 / (18 * math.pi) * math.log(abs(num / (1 + v**3) ** 3)))


def ratio_energy_gradient(v: complex, gamma: float) -> complex:
    """``dH/dvbar`` of :func:`ratio_energy` (independent of ``mu``)."""
    inner = (3 * v / (1 + abs(v) ** 2)
             + 0.5 * np.conj(-3 * v**2 / (1 - v**3))
             - 1.5 * np.conj(3 * v**2 / (1 + v**3)))
    return complex(-gamma**2 / (18 * math.pi) * inner)


@dataclass
class ReducedEnergyGrid:
    mu: float
    bounds: tuple
    resolution: int
    values: np.ndarray
    gamma: float = 1.0
    flagged: np.ndarray = field(default=None)

    @property
    def axes(self) -> tuple[np.ndarray, np.ndarray]:
        x0, x1, y0, y1 = self.bounds
        return np.linspace(x0, x1, self.resolution), np.linspace(y0, y1, self.resolution)

    def collision_clusters(self) -> int:
        _, n = ndimage.label(self.flagged, structure=np.ones((3, 3)))
        return int(n)

    def critical_points(self, tol: float = 1e-10) -> list[tuple[complex, str]]:
        """Critical points of the ratio energy inside the grid, refined by Newton's method.

        Seeds are grid nodes where ``|dH/dvbar|`` is a local minimum among
        their neighbours; each is classified by the Hessian determinant as
        ``'center'`` (extremum) or ``'saddle'``.
        """
        xs, ys = self.axes
        X, Y = np.meshgrid(xs, ys)
        grad = np.full(X.shape, np.inf)
        ok = ~self.flagged
        for i, j in zip(*np.nonzero(ok)):
            grad[i, j] = abs(ratio_energy_gradient(complex(X[i, j], Y[i, j]), self.gamma))
        local_min = (grad == ndimage.minimum_filter(grad, size=3, mode="nearest")) & np.isfinite(grad)
        found: list[tuple[complex, str]] = []
        dx = xs[1] - xs[0]
        for i, j in zip(*np.nonzero(local_min)):
            def f(p):
                gr = ratio_energy_gradient(complex(p[0], p[1]), self.gamma)
                return [gr.real, gr.imag]

            sol, info, ier, _ = optimize.fsolve(f, [X[i, j], Y[i, j]], full_output=True, xtol=1e-13)
            v = complex(sol[0], sol[1])
            if ier != 1 or abs(ratio_energy_gradient(v, self.gamma)) > tol * self.gamma**2:
                continue
            x0, x1, y0, y1 = self.bounds
            if not (x0 <= v.real <= x1 and y0 <= v.imag <= y1):
                continue
            if any(abs(v - w) < 0.5 * dx for w, _ in found):
                continue
            if min(abs(v - c) for c in COLLISION_POINTS) < 2 * dx:
                continue
            found.append((v, _classify(v, self.mu, self.gamma)))
        return found

    def to_csv(self, header: str | None = None) -> str:
        buf = io.StringIO()
        if header:
            buf.write(header.rstrip("\n") + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["re(v)", "im(v)", "H"])
        xs, ys = self.axes
        for i, y in enumerate(ys):
            for j, x in enumerate(xs):
                val = "sing" if self.flagged[i, j] else repr(float(self.values[i, j]))
                w.writerow([repr(float(x)), repr(float(y)), val])
        return buf.getvalue()


def _classify(v: complex, mu: float, gamma: float) -> str:
    h = 1e-4 * (1 + abs(v))

    def H(x, y):
        return ratio_energy(complex(x, y), mu, gamma)

    x, y = v.real, v.imag
    hxx = (H(x + h, y) - 2 * H(x, y) + H(x - h, y)) / h**2
    hyy = (H(x, y + h) - 2 * H(x, y) + H(x, y - h)) / h**2
    hxy = (H(x + h, y + h) - H(x + h, y - h) - H(x - h, y + h) + H(x - h, y - h)) / (4 * h**2)
    return "center" if hxx * hyy - hxy**2 > 0 else "saddle"


def energy_grid(mu: float, bounds=(-1.5, 1.5, -1.5, 1.5), resolution: int = 301,
                g: Strengths | None = None) -> ReducedEnergyGrid:
    """Sample the reduced energy on a ``resolution x resolution`` grid in ``v = v2/v1``.

    Nodes within 1.5 cell widths of a collision point are flagged.
    """
    gamma = _gamma(g) if g is not None else 1.0
    if not mu * gamma > 0:
        raise ValueError("need mu * gamma > 0")
    x0, x1, y0, y1 = bounds
    xs = np.linspace(x0, x1, resolution)
    ys = np.linspace(y0, y1, resolution)
    cell = max(xs[1] - xs[0], ys[1] - ys[0])
    X, Y = np.meshgrid(xs, ys)
    V = X + 1j * Y
    near = np.zeros(V.shape, dtype=bool)
    for c in COLLISION_POINTS:
        near |= np.abs(V - c) < 1.5 * cell
    with np.errstate(divide="ignore", invalid="ignore"):
        num = (gamma / (2 * mu)) ** 3 * (1 + np.abs(V) ** 2) ** 3 * (1 - V**3) / (1 + V**3) ** 3
        vals = -gamma**2 / (18 * math.pi) * np.log(np.abs(num))
    flagged = near | ~np.isfinite(vals)
    vals = np.where(flagged, np.nan, vals)
    return ReducedEnergyGrid(mu, tuple(bounds), resolution, vals, gamma, flagged)


__all__ = [
    "H_U_MINUS_H_V",
    "ReducedEnergyGrid",
    "S3",
    "energy_grid",
    "h_u",
    "h_u_gradient",
    "h_v",
    "h_v_display",
    "integrate_u",
    "integrate_v",
    "ratio_energy",
    "s3_act",
    "so2_momentum",
    "u_field",
    "v_field",
    "v_field_u0",
]
