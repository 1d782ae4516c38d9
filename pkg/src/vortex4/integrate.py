"""Adaptive Runge-Kutta integration (Prince-Dormand 8(7), 13 stages).

The 8th-order solution is propagated and the 7th-order one supplies the error
estimate.  Step size follows a PI controller.  States may be real or complex
numpy arrays.

Values between accepted steps are produced by re-stepping from the start of
the containing step with a shortened step, which keeps 8th-order accuracy and
is what the event locator uses.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.optimize import brentq

from .errors import CollisionError, NoSignChangeError, NonFiniteError, StepSizeUnderflow
from .vortex_core import Trajectory

log = logging.getLogger(__name__)

# Prince & Dormand (1981) RK8(7)13M
_C = np.array([0., 1./18., 1./12., 1./8., 5./16., 3./8., 59./400., 93./200.,
               5490023248./9719169821., 13./20., 1201146811./1299019798., 1., 1.])

_A = np.zeros((13, 13))
_A[1, 0] = 1./18.
_A[2, 0:2] = [1./48., 1./16.]
_A[3, 0:3] = [1./32., 0., 3./32.]
_A[4, 0:4] = [5./16., 0., -75./64., 75./64.]
_A[5, 0:5] = [3./80., 0., 0., 3./16., 3./20.]
_A[6, 0:6] = [29443841./614563906., 0., 0., 77736538./692538347.,
              -28693883./1125000000., 23124283./1800000000.]
_A[7, 0:7] = [16016141./946692911., 0., 0., 61564180./158732637.,
              22789713./633445777., 545815736./2771057229., -180193667./1043307555.]
_A[8, 0:8] = [39632708./573591083., 0., 0., -433636366./683701615.,
              -421739975./2616292301., 100302831./723423059.,
              790204164./839813087., 800635310./3783071287.]
_A[9, 0:9] = [246121993./1340847787., 0., 0., -37695042795./15268766246.,
              -309121744./1061227803., -12992083./490766935.,
              6005943493./2108947869., 393006217./1396673457., 123872331./1001029789.]
_A[10, 0:10] = [-1028468189./846180014., 0., 0., 8478235783./508512852.,
                1311729495./1432422823., -10304129995./1701304382.,
                -48777925059./3047939560., 15336726248./1032824649.,
                -45442868181./3398467696., 3065993473./597172653.]
_A[11, 0:11] = [185892177./718116043., 0., 0., -3185094517./667107341.,
                -477755414./1098053517., -703635378./230739211.,
                5731566787./1027545527., 5232866602./850066563.,
                -4093664535./808688257., 3962137247./1805957418., 65686358./487910083.]
_A[12, 0:12] = [403863854./491063109., 0., 0., -5068492393./434740067.,
                -411421997./543043805., 652783627./914296604.,
                11173962825./925320556., -13158990841./6184727034.,
                3936647629./1978049680., -160528059./685178525., 248638103./1413531060., 0.]

_B8 = np.array([14005451./335480064., 0., 0., 0., 0., -59238493./1068277825.,
                181606767./758867731., 561292985./797845732., -1041891430./1371343529.,
                760417239./1151165299., 118820643./751138087., -528747749./2220607170., 1./4.])
_B7 = np.array([13451932./455176623., 0., 0., 0., 0., -808719846./976000145.,
                1757004468./5645159321., 656045339./265891186., -3867574721./1518517206.,
                465885868./322736535., 53011238./667516719., 2./45., 0.])
_E = _B8 - _B7

_ORDER = 8
_SAFETY = 0.9
_MIN_FACTOR = 0.2
_MAX_FACTOR = 5.0
_BETA1 = 0.7 / _ORDER
_BETA2 = 0.4 / _ORDER


@dataclass(frozen=True)
class IntegratorConfig:
    rel_tol: float = 1e-10
    abs_tol: float = 1e-12
    max_step: float = math.inf
    collision_guard: float = 1e-9
    max_steps: int = 1_000_000
    first_step: float | None = None

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be positive")
        if not self.max_step > 0:
            raise ValueError("max_step must be positive")


Field = Callable[[float, np.ndarray], np.ndarray]


def _rk_step(field: Field, t: float, y: np.ndarray, h: float, k0: np.ndarray | None = None):
    """One RK8(7) step; returns the 8th-order state and the embedded error vector."""
    k = np.empty((13,) + y.shape, dtype=np.result_type(y, float))
    k[0] = field(t, y) if k0 is None else k0
    for s in range(1, 13):
        ys = y + h * np.tensordot(_A[s, :s], k[:s], axes=1)
        k[s] = field(t + _C[s] * h, ys)
    y8 = y + h * np.tensordot(_B8, k, axes=1)
    err = h * np.tensordot(_E, k, axes=1)
    return y8, err


def _check_finite(dy, t):
    if not np.all(np.isfinite(dy)):
        raise NonFiniteError(f"vector field returned a non-finite value at t={t:.17g}")


def _initial_step(field, t0, y0, f0, direction, cfg: IntegratorConfig) -> float:
    scale = cfg.abs_tol + cfg.rel_tol * np.abs(y0)
    d0 = np.sqrt(np.mean((np.abs(y0) / scale) ** 2))
    d1 = np.sqrt(np.mean((np.abs(f0) / scale) ** 2))
    h0 = 1e-6 if (d0 < 1e-5 or d1 < 1e-5) else 0.01 * d0 / d1
    h0 = min(h0, cfg.max_step)
    y1 = y0 + direction * h0 * f0
    try:
        f1 = field(t0 + direction * h0, y1)
        _check_finite(f1, t0)
        d2 = np.sqrt(np.mean((np.abs(f1 - f0) / scale) ** 2)) / h0
    except (CollisionError, NonFiniteError):
        return h0 * 1e-3
    if max(d1, d2) <= 1e-15:
        h1 = max(1e-6, h0 * 1e-3)
    else:
        h1 = (0.01 / max(d1, d2)) ** (1.0 / (_ORDER + 1))
    return min(100 * h0, h1, cfg.max_step)


def _find_crossings(field, t0, y0, h, g0, g1, event, direction, cfg):
    """Locate the root of ``event`` inside one accepted step by re-stepping."""

    def g_at(t):
        return float(event(t, dense_value(field, t0, y0, t - t0)))

    if direction > 0 and not (g0 < 0 <= g1):
        return None
    if direction < 0 and not (g0 > 0 >= g1):
        return None
    if direction == 0 and not (g0 * g1 < 0 or (g1 == 0 and g0 != 0)):
        return None
    if g1 == 0:
        ts = t0 + h
    else:
        a, b = (t0, t0 + h) if h > 0 else (t0 + h, t0)
        ts = brentq(g_at, a, b, xtol=1e-15, rtol=4 * np.finfo(float).eps, maxiter=200)
    return ts, dense_value(field, t0, y0, ts - t0)


def dense_value(field: Field, t0: float, y0: np.ndarray, dt: float) -> np.ndarray:
    """State at ``t0 + dt`` from one RK8 step of length ``dt`` (``dt`` within an accepted step)."""
    if dt == 0:
        return np.array(y0, copy=True)
    y, _ = _rk_step(field, t0, y0, dt)
    return y


def integrate(field: Field, y0, t_span, cfg: IntegratorConfig | None = None,
              diagnostics: Callable[[np.ndarray], dict] | None = None,
              event: Callable[[float, np.ndarray], float] | None = None,
              direction: int = 0, max_events: int | None = None,
              callback: Callable[[float, np.ndarray], None] | None = None) -> Trajectory:
    """Integrate ``dy/dt = field(t, y)`` over ``t_span = (t0, t1)``.

    Every accepted step is recorded.  When ``event`` is given, its roots in
    the requested crossing ``direction`` are located to full precision and
    returned as ``traj.events`` (a list of ``(t, y)``); the run stops early once
    ``max_events`` roots have been found.
    """
    cfg = cfg or IntegratorConfig()
    t0, t1 = float(t_span[0]), float(t_span[1])
    y = np.array(y0, copy=True)
    if not np.issubdtype(y.dtype, np.inexact):
        y = y.astype(float)
    sign = 1.0 if t1 >= t0 else -1.0
    f = field(t0, y)
    _check_finite(f, t0)

    times = [t0]
    states = [y.copy()]
    diag = {}
    if diagnostics is not None:
        for k, v in diagnostics(y).items():
            diag[k] = [v]
    events = []
    g_prev = float(event(t0, y)) if event is not None else None

    if t1 == t0:
        return Trajectory(np.array(times), np.array(states), {k: np.array(v) for k, v in diag.items()}, events)

    h = cfg.first_step if cfg.first_step is not None else _initial_step(field, t0, y, f, sign, cfg)
    h = min(abs(h), abs(t1 - t0), cfg.max_step)
    err_prev = 1e-4
    t = t0
    nsteps = 0
    done = False
    while not done:
        nsteps += 1
        if nsteps > cfg.max_steps:
            raise StepSizeUnderflow(f"exceeded {cfg.max_steps} steps at t={t:.6g}")
        hmin = 16 * np.finfo(float).eps * max(abs(t), 1.0)
        if h < hmin:
            raise StepSizeUnderflow(f"step size {h:.3g} below resolvable limit at t={t:.17g}")
        last = abs(t1 - t) <= h * (1 + 1e-12)
        hs = (t1 - t) if last else sign * h
        try:
            y_new, err_vec = _rk_step(field, t, y, hs, k0=f)
            if not np.all(np.isfinite(y_new)):
                raise NonFiniteError(f"non-finite trial state at t={t:.17g}")
        except (CollisionError, NonFiniteError) as exc:
            # the trial stages may overshoot into a singularity; retry smaller
            if h * 0.25 < hmin:
                raise exc
            log.debug("rejecting step at t=%.6g (%s)", t, exc)
            h *= 0.25
            continue
        scale = cfg.abs_tol + cfg.rel_tol * np.maximum(np.abs(y), np.abs(y_new))
        err = float(np.max(np.abs(err_vec) / scale))
        if err > 1.0:
            h *= max(_MIN_FACTOR, _SAFETY * err ** (-1.0 / _ORDER))
            continue
        try:
            f_new = field(t + hs, y_new)
            _check_finite(f_new, t + hs)
        except (CollisionError, NonFiniteError):
            if h * 0.25 < hmin:
                raise
            h *= 0.25
            continue

        t_new = t1 if last else t + hs
        if event is not None:
            g_new = float(event(t_new, y_new))
            hit = _find_crossings(field, t, y, t_new - t, g_prev, g_new, event, direction, cfg)
            if hit is not None:
                events.append(hit)
            g_prev = g_new
        t, y, f = t_new, y_new, f_new
        times.append(t)
        states.append(y.copy())
        if diagnostics is not None:
            for k, v in diagnostics(y).items():
                diag[k].append(v)
        if callback is not None:
            callback(t, y)
        if last:
            done = True
        if max_events is not None and len(events) >= max_events:
            done = True

        err = max(err, 1e-10)
        fac = _SAFETY * err ** (-_BETA1) * err_prev ** _BETA2
        h = abs(hs) * min(_MAX_FACTOR, max(_MIN_FACTOR, fac))
        h = min(h, cfg.max_step)
        err_prev = err

    return Trajectory(np.array(times), np.array(states), {k: np.array(v) for k, v in diag.items()}, events)


def find_event(field: Field, traj: Trajectory, event: Callable[[float, np.ndarray], float],
               direction: int = 0) -> tuple[float, np.ndarray]:
    """First root of ``event`` along an already computed trajectory."""
    g = [float(event(t, y)) for t, y in zip(traj.times, traj.states)]
    for i in range(len(g) - 1):
        hit = _find_crossings(field, traj.times[i], traj.states[i], traj.times[i + 1] - traj.times[i],
                              g[i], g[i + 1], event, direction, None)
        if hit is not None:
            return hit
    raise NoSignChangeError("event function does not change sign in the requested direction")


__all__ = ["IntegratorConfig", "dense_value", "find_event", "integrate"]
