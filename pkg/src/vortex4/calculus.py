"""Wirtinger derivatives and Poisson brackets by finite differences.

Every analytic gradient in the package is checked against these routines, so
they deliberately use nothing but function evaluations.  A "complex function"
here is any callable taking a 1-d complex array ``z`` and returning a complex
(or real) scalar.

Conventions: for ``z = x + i y``

    d/dz    = (d/dx - i d/dy) / 2
    d/dzbar = (d/dx + i d/dy) / 2

and the canonical bracket of one complex variable is

    {f, g} = f_x g_y - f_y g_x = -2i (f_z g_zbar - f_zbar g_z).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .errors import NonHolomorphicError, VortexError

_OFFSETS = np.array([-2.0, -1.0, 1.0, 2.0])


def _stencil(vals, h):
    # paired differences so constants cancel exactly
    return ((vals[0] - vals[3]) + 8.0 * (vals[2] - vals[1])) / (12.0 * h)


@dataclass(frozen=True)
class ComplexFunction:
    """A callable of ``nvars`` complex variables."""

    fn: Callable[[np.ndarray], complex]
    nvars: int

    def __call__(self, z):
        return self.fn(np.asarray(z, dtype=complex))


def default_step(point) -> float:
    return 1e-5 * (1.0 + float(np.max(np.abs(point))))


def _partial(f, idx: int, point: np.ndarray, direction: complex, h: float) -> complex:
    vals = []
    for s in _OFFSETS:
        z = point.copy()
        z[idx] += s * h * direction
        val = f(z)
        if not np.isfinite(val):
            raise VortexError(f"non-finite sample at variable {idx}")
        vals.append(val)
    return complex(_stencil(vals, h))


def partial_x(f, idx: int, point, h: float | None = None) -> complex:
    point = np.array(point, dtype=complex)
    h = default_step(point) if h is None else h
    return _partial(f, idx, point, 1.0, h)


def partial_y(f, idx: int, point, h: float | None = None) -> complex:
    point = np.array(point, dtype=complex)
    h = default_step(point) if h is None else h
    return _partial(f, idx, point, 1j, h)


def d_dz(f, idx: int, point, h: float | None = None) -> complex:
    point = np.array(point, dtype=complex)
    h = default_step(point) if h is None else h
    return 0.5 * (_partial(f, idx, point, 1.0, h) - 1j * _partial(f, idx, point, 1j, h))


def d_dzbar(f, idx: int, point, h: float | None = None) -> complex:
    point = np.array(point, dtype=complex)
    h = default_step(point) if h is None else h
    return 0.5 * (_partial(f, idx, point, 1.0, h) + 1j * _partial(f, idx, point, 1j, h))


def wirtinger_gradient(f, point, h: float | None = None) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(df/dz_k, df/dzbar_k)`` for every variable ``k``."""
    point = np.array(point, dtype=complex)
    h = default_step(point) if h is None else h
    n = point.size
    dz = np.empty(n, dtype=complex)
    dzb = np.empty(n, dtype=complex)
    for k in range(n):
        fx = _partial(f, k, point, 1.0, h)
        fy = _partial(f, k, point, 1j, h)
        dz[k] = 0.5 * (fx - 1j * fy)
        dzb[k] = 0.5 * (fx + 1j * fy)
    return dz, dzb


def _weights(weights, n: int) -> np.ndarray:
    if weights is None:
        return np.ones(n)
    w = np.asarray(weights, dtype=float)
    if w.shape != (n,):
        raise ValueError(f"expected {n} weights, got shape {w.shape}")
    return w


def poisson_bracket(f, g, point, weights: Sequence[float] | None = None, h: float | None = None) -> complex:
    """Weighted sum over variables of the canonical bracket.

    With ``weights = 1/Gamma_p`` this is the point-vortex bracket.
    """
    point = np.array(point, dtype=complex)
    w = _weights(weights, point.size)
    fz, fzb = wirtinger_gradient(f, point, h)
    gz, gzb = wirtinger_gradient(g, point, h)
    return complex(np.sum(w * (-2j) * (fz * gzb - fzb * gz)))


def hamiltonian_field(hfun, point, weights: Sequence[float] | None = None, h: float | None = None,
                      real_tol: float = 1e-10) -> np.ndarray:
    """``dz_k/dt = -2i w_k dH/dzbar_k`` for a real-valued ``H``."""
    point = np.array(point, dtype=complex)
    val = complex(hfun(point))
    if abs(val.imag) > real_tol * max(1.0, abs(val.real)):
        raise ValueError(f"Hamiltonian must be real-valued, got imaginary part {val.imag:g}")
    w = _weights(weights, point.size)
    _, hzb = wirtinger_gradient(lambda z: complex(hfun(z)).real, point, h)
    return -2j * w * hzb


def bracket_transform_check(w_funcs, f, g, point, weights: Sequence[float] | None = None,
                            h: float | None = None, holo_tol: float = 1e-8) -> float:
    """Defect between a direct bracket of ``f(w(z)), g(w(z))`` and its structure-constant form.

    ``w_funcs`` are holomorphic coordinate functions of ``z``; ``f`` and ``g`` take
    the array of ``w`` values.  The structure-constant form is

        sum_ij {w_i, conj(w_j)} (f_{w_i} g_{wbar_j} - f_{wbar_j} g_{w_i}).
    """
    point = np.array(point, dtype=complex)
    for i, wi in enumerate(w_funcs):
        _, dzb = wirtinger_gradient(wi, point, h)
        scale = 1.0 + abs(complex(wi(point)))
        if np.max(np.abs(dzb)) > holo_tol * scale:
            raise NonHolomorphicError(f"coordinate function {i} has |d/dzbar| = {np.max(np.abs(dzb)):.3g}")

    def wvec(z):
        return np.array([complex(wi(z)) for wi in w_funcs])

    direct = poisson_bracket(lambda z: f(wvec(z)), lambda z: g(wvec(z)), point, weights, h)

    w0 = wvec(point)
    n = len(w_funcs)
    struct = np.empty((n, n), dtype=complex)
    for i in range(n):
        for j in range(n):
            struct[i, j] = poisson_bracket(w_funcs[i], lambda z, j=j: np.conj(w_funcs[j](z)), point, weights, h)
    fw, fwb = wirtinger_gradient(f, w0, h)
    gw, gwb = wirtinger_gradient(g, w0, h)
    transformed = sum(
        struct[i, j] * (fw[i] * gwb[j] - fwb[j] * gw[i]) for i in range(n) for j in range(n)
    )
    return float(abs(direct - transformed))


def jacobian_real(fn, x, h: float | None = None) -> np.ndarray:
    """Real Jacobian of ``fn: R^n -> R^m`` by the 5-point central stencil."""
    x = np.asarray(x, dtype=float)
    h = 1e-5 * (1.0 + float(np.max(np.abs(x)))) if h is None else h
    cols = []
    for k in range(x.size):
        vals = []
        for s in _OFFSETS:
            xs = x.copy()
            xs[k] += s * h
            vals.append(np.asarray(fn(xs), dtype=float))
        cols.append(_stencil(vals, h))
    return np.column_stack(cols)


def as_real(z) -> np.ndarray:
    """Interleave a complex vector into ``[x0, y0, x1, y1, ...]``."""
    z = np.asarray(z, dtype=complex)
    out = np.empty(2 * z.size)
    out[0::2] = z.real
    out[1::2] = z.imag
    return out


def as_complex(x) -> np.ndarray:
    x = np.asarray(x, dtype=float)
    return x[0::2] + 1j * x[1::2]


def canonical_form(n: int, coeffs: Sequence[float] | None = None) -> np.ndarray:
    """Matrix of ``sum_k c_k dx_k ^ dy_k`` in interleaved real coordinates."""
    c = np.ones(n) if coeffs is None else np.asarray(coeffs, dtype=float)
    om = np.zeros((2 * n, 2 * n))
    for k in range(n):
        om[2 * k, 2 * k + 1] = c[k]
        om[2 * k + 1, 2 * k] = -c[k]
    return om


__all__ = [
    "ComplexFunction",
    "as_complex",
    "as_real",
    "bracket_transform_check",
    "canonical_form",
    "d_dz",
    "d_dzbar",
    "hamiltonian_field",
    "jacobian_real",
    "partial_x",
    "partial_y",
    "poisson_bracket",
    "wirtinger_gradient",
]
