"""Rotation number of the return map under truncated slice Hamiltonians.

Integrates Hamilton's equations for the low-order model and for the slice
expansion cut at increasing orders, and compares each rotation number with
``omega_minus`` and ``omega_slow``.  Shows which term of the expansion moves
the full-flow rotation away from the low-order estimate.
"""

import argparse
import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import fsolve

from vortex4.calculus import jacobian_real
from vortex4.integrate import IntegratorConfig, integrate
from vortex4.slice import SliceState, h_slice_trunc0, h_slice_trunc1, omega_minus, omega_slow


@dataclass
class StudyConfig:
    alpha_e: float = 2.0
    u: float = 0.075
    amplitude: float = 1e-3
    n_iters: int = 40
    rel_tol: float = 1e-11

    @property
    def gamma(self) -> float:
        return 3 * math.pi * self.alpha_e**2


def hamilton_rhs(H, gamma):
    # form G (dtheta ^ dj + dq ^ dp) in coordinates (theta, j, q, p)
    def rhs(t, x):
        gr = jacobian_real(lambda y: [H(y)], x)[0]
        return np.array([gr[1], -gr[0], gr[3], -gr[2]]) / gamma

    return rhs


def rotation(H, cfg: StudyConfig) -> float:
    rhs = hamilton_rhs(H, cfg.gamma)
    icfg = IntegratorConfig(rel_tol=cfg.rel_tol)

    def returns(q, p, n):
        tr = integrate(rhs, np.array([0.0, 0.0, q, p]), (0.0, 1e7), icfg,
                       event=lambda t, x: math.sin(x[0]), direction=1, max_events=n)
        return np.array([complex(y[2], y[3]) for _, y in tr.events])

    def disp(x):
        z1 = returns(x[0], x[1], 1)[0]
        return [z1.real - x[0], z1.imag - x[1]]

    fp = fsolve(disp, [-0.75 * cfg.u, 0.0], xtol=1e-12)
    zc = complex(*fp)
    rel = returns(zc.real + cfg.amplitude, zc.imag, cfg.n_iters) - zc
    ang = np.unwrap(np.concatenate([[0.0], np.angle(rel)]))
    return -ang[-1] / (2 * math.pi * cfg.n_iters)


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--n-iters", type=int, default=40)
    args = ap.parse_args()
    cfg = StudyConfig(n_iters=args.n_iters)
    a, u, G = cfg.alpha_e, cfg.u, cfg.gamma
    scale = G**2 / (3 * math.pi * a**2)
    models = {
        "low-order": lambda x: scale * h_slice_trunc1(SliceState(*x), u, a),
        "order 2": lambda x: h_slice_trunc0(SliceState(*x), u, a, G, 2),
        "order 3": lambda x: h_slice_trunc0(SliceState(*x), u, a, G, 3),
        "order 4": lambda x: h_slice_trunc0(SliceState(*x), u, a, G, 4),
    }
    om, osl = omega_minus(u, a), omega_slow(u, a)
    print(f"alpha={a:g} u={u:g}: omega_minus {om:.6f}  omega_slow {osl:.6f}")
    for name, H in models.items():
        rho = rotation(H, cfg)
        print(f"{name:10s} rotation {rho:.6f}  /omega_minus {rho / om:.4f}  /omega_slow {rho / osl:.4f}", flush=True)


if __name__ == "__main__":
    main()
