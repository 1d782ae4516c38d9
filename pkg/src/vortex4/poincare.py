"""Return maps of the reduced flow near the equilateral equilibrium, and the crawl experiment.

The section is ``theta = arg v1 = 0`` (mod 2 pi), crossed in the direction of
rotation (the sign of ``G``); each crossing is recorded in the slice
coordinates ``(q, p)``.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import fsolve

from .equilibria import make_O
from .errors import ChartError, DegenerateError, DomainError
from .integrate import IntegratorConfig, integrate
from .reduced_dynamics import h_v, v_field
from .resolution import VState
from .slice import SliceState, from_slice, to_slice
from .vortex_core import Strengths, vector_field


@dataclass
class SectionData:
    points: np.ndarray
    energies: np.ndarray
    params: dict
    anchor: complex | None = None
    times: np.ndarray = field(default=None)

    @property
    def z(self) -> np.ndarray:
        return self.points[:, 0] + 1j * self.points[:, 1]

    def to_csv(self, header: str | None = None) -> str:
        buf = io.StringIO()
        if header:
            buf.write(header.rstrip("\n") + "\n")
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iter", "q", "p", "H"])
        for i, ((q, p), h) in enumerate(zip(self.points, self.energies), start=1):
            w.writerow([i, repr(float(q)), repr(float(p)), repr(float(h))])
        return buf.getvalue()


def _flow(u: float, g: Strengths):
    def rhs(t, y):
        return v_field(VState(y[0], y[1], u), g)

    return rhs


def section_events(v0: VState, alpha_e: float, gamma: float, n_iters: int,
                   cfg: IntegratorConfig | None = None, section_angle: float = 0.0) -> list[tuple[float, VState]]:
    """Times and states of the first ``n_iters`` crossings of ``arg v1 = section_angle``."""
    g = Strengths.family(gamma, 3)
    u = v0.u
    rot = complex(math.cos(section_angle), -math.sin(section_angle))
    direction = 1 if gamma > 0 else -1

    def event(t, y):
        return (y[0] * rot).imag

    def guard(t, y):
        # the slice chart needs v1 to dominate v2 (the orbit stays near O)
        if not abs(y[0]) > abs(y[1]):
            raise ChartError(f"trajectory left the slice chart at t={t:.6g}")

    # generous horizon: about 10 rotation periods per requested crossing
    period = 2 * math.pi / abs(gamma / (3 * math.pi * alpha_e**2))
    tr = integrate(_flow(u, g), v0.v, (0.0, 10 * period * (n_iters + 1)), cfg,
                   event=event, direction=direction, max_events=n_iters, callback=guard)
    if len(tr.events) < n_iters:
        raise DegenerateError(f"only {len(tr.events)} section crossings found")
    return [(t, VState(y[0], y[1], u)) for t, y in tr.events]


def section_map(v0: VState, alpha_e: float, gamma: float, n_iters: int,
                cfg: IntegratorConfig | None = None, anchor: complex | None = None,
                j_tol: float = 1e-9) -> SectionData:
    """Iterate the first-return map ``n_iters`` times starting from ``v0``.

    ``v0`` must lie on the section's momentum level ``j = 0``.
    """
    s0 = to_slice(v0, alpha_e)
    if abs(s0.j) > j_tol * alpha_e**2:
        raise DomainError(f"initial state has j = {s0.j:.3g}, expected 0")
    g = Strengths.family(gamma, 3)
    ev = section_events(v0, alpha_e, gamma, n_iters, cfg)
    pts = []
    en = []
    for _, vs in ev:
        s = to_slice(vs, alpha_e)
        pts.append((s.q, s.p))
        en.append(h_v(vs, g))
    params = {"alpha_e": alpha_e, "u": v0.u, "gamma": gamma, "n_iters": n_iters}
    return SectionData(np.array(pts), np.array(en), params, anchor, np.array([t for t, _ in ev]))


def return_map(q: float, p: float, alpha_e: float, gamma: float, u: float,
               cfg: IntegratorConfig | None = None) -> tuple[float, float]:
    """One application of the return map to the section point ``(q, p)`` on ``j = 0``."""
    v0 = from_slice(SliceState(0.0, 0.0, q, p), alpha_e, u)
    (_, vs), = section_events(v0, alpha_e, gamma, 1, cfg)
    s = to_slice(vs, alpha_e)
    return s.q, s.p


def periodic_point(alpha_e: float, gamma: float, u: float, cfg: IntegratorConfig | None = None,
                   tol: float = 1e-12) -> complex:
    """Fixed point of the return map (the periodic orbit continuing the equilibrium), by Newton iteration.

    The starting guess is ``z = -3u/4``, the first-order shift of the orbit.
    """

    def disp(x):
        q, p = return_map(x[0], x[1], alpha_e, gamma, u, cfg)
        return [q - x[0], p - x[1]]

    sol, info, ier, msg = fsolve(disp, [-0.75 * u, 0.0], full_output=True, xtol=tol)
    if ier != 1:
        raise DegenerateError(f"periodic point not found: {msg}")
    return complex(sol[0], sol[1])


def floquet_rotation(alpha_e: float, gamma: float, u: float, cfg: IntegratorConfig | None = None,
                     h: float | None = None) -> float:
    """Rotation per return of the linearized return map at the periodic point, in turns.

    The 2x2 Jacobian is taken by central differences with step ``h`` (default
    ``1e-5 alpha``); its trace is ``2 cos(2 pi rho)``.  Returns ``|rho|``; the
    direction is clockwise, as for :func:`rotation_number`.
    """
    zc = periodic_point(alpha_e, gamma, u, cfg) if u > 0 else 0j
    h = 1e-5 * alpha_e if h is None else h
    J = np.empty((2, 2))
    for k, d in enumerate((h, 1j * h)):
        a = return_map((zc + d).real, (zc + d).imag, alpha_e, gamma, u, cfg)
        b = return_map((zc - d).real, (zc - d).imag, alpha_e, gamma, u, cfg)
        J[:, k] = (np.array(a) - np.array(b)) / (2 * h)
    tr = 0.5 * np.trace(J)
    if abs(tr) > 1 + 1e-9:
        raise DegenerateError(f"return map is not elliptic (half trace {tr:.6g})")
    return math.acos(min(1.0, max(-1.0, tr))) / (2 * math.pi)


def rotation_number(sd: SectionData, center: complex | None = None) -> float:
    """Mean signed angle advanced per return about ``center``, in turns.

    ``center`` defaults to the run's anchor, or the centroid of the points.
    Positive means counterclockwise in the ``(q, p)`` plane.
    """
    z = sd.z
    if z.size < 10:
        raise DegenerateError("need at least 10 section points")
    c = center if center is not None else (sd.anchor if sd.anchor is not None else z.mean())
    rel = z - c
    scale = max(float(np.max(np.abs(z))), 1e-300)
    if np.max(np.abs(z - z[0])) <= 1e-12 * scale or np.min(np.abs(rel)) <= 1e-12 * scale:
        raise DegenerateError("section points coincide with the rotation center")
    ang = np.unwrap(np.angle(rel))
    return float((ang[-1] - ang[0]) / (2 * math.pi * (z.size - 1)))


def anchored_section(alpha_e: float, gamma: float, u: float, amplitude: float, n_iters: int,
                     cfg: IntegratorConfig | None = None) -> SectionData:
    """Section data started ``amplitude`` away from the periodic point, anchored at it."""
    zc = periodic_point(alpha_e, gamma, u, cfg) if u > 0 else 0j
    v0 = from_slice(SliceState(0.0, 0.0, zc.real + amplitude, zc.imag), alpha_e, u)
    return section_map(v0, alpha_e, gamma, n_iters, cfg, anchor=zc)


def emergent_mass(alpha_e: float) -> float:
    return 8 * math.pi * alpha_e**2 / 3


def crawl_experiment(alpha_e: float, gamma: float, eps: float, t_end: float,
                     cfg: IntegratorConfig | None = None) -> tuple[complex, complex]:
    """Displace the central vortex of O by ``i eps/G`` (so ``nu = eps``) and measure the drift.

    Returns the least-squares drift velocity of the mean vortex position and
    the prediction ``eps / m_e`` with ``m_e = 8 pi alpha^2/3``.
    """
    spec = make_O(alpha_e, gamma)
    g = spec.strengths
    z0 = spec.z.copy()
    z0[0] += 1j * eps / gamma
    tr = integrate(lambda t, z: vector_field(z, g), z0, (0.0, t_end), cfg)
    m = tr.states.mean(axis=1)
    A = np.vstack([tr.times, np.ones_like(tr.times)]).T
    sx = np.linalg.lstsq(A, m.real, rcond=None)[0][0]
    sy = np.linalg.lstsq(A, m.imag, rcond=None)[0][0]
    return complex(sx, sy), complex(eps / emergent_mass(alpha_e))


__all__ = [
    "SectionData",
    "anchored_section",
    "crawl_experiment",
    "emergent_mass",
    "floquet_rotation",
    "periodic_point",
    "return_map",
    "rotation_number",
    "section_events",
    "section_map",
]
