import cmath
import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from vortex4.errors import ChartError, HyperbolicRegimeError
from vortex4.reduced_dynamics import h_v, so2_momentum
from vortex4.slice import (SliceState, WState, from_slice, from_w, h_slice_trunc0, h_slice_trunc1,
                           omega_minus, omegas, poincare_estimate, slice_symplectic_check, to_slice,
                           to_w, w_constant, w_solution, w_symplectic_check, wrap_angle)
from vortex4.vortex_core import Strengths

small = st.floats(-0.3, 0.3)
slice_states = st.builds(SliceState, st.floats(-3.0, 3.0), small, small, small)


def test_from_slice_origin():
    vs = from_slice(SliceState(0, 0, 0, 0), 1.7)
    assert vs.v1 == 1.7 and vs.v2 == 0


chart_states = st.builds(SliceState, st.floats(-0.9, 0.9), small, small, small)


@given(chart_states, st.floats(0.8, 3.0))
def test_slice_round_trip(ss, a):
    f2 = a**2 + 2 * ss.j - ss.q**2 - ss.p**2
    assume(f2 > 1e-2 * a**2 and math.sqrt(f2) < 2 * a * math.cos(ss.theta))
    back = to_slice(from_slice(ss, a), a)
    assert abs(wrap_angle(back.theta - ss.theta)) < 1e-12
    for x, y in ((back.j, ss.j), (back.q, ss.q), (back.p, ss.p)):
        assert abs(x - y) < 1e-12


@given(slice_states, st.floats(1.0, 3.0), st.sampled_from([1.0, -2.0]))
def test_j_is_momentum_offset(ss, a, gam):
    g = Strengths.family(gam, 3)
    assert abs(so2_momentum(from_slice(ss, a), g) - gam * (ss.j + a**2 / 2)) < 1e-12 * abs(gam) * a**2 * 10


def test_chart_errors():
    with pytest.raises(ChartError):
        from_slice(SliceState(0, -1.0, 0.5, 0.5), 1.0)
    from vortex4.resolution import VState
    with pytest.raises(ChartError):
        to_slice(VState(-1.0, 0.1), 1.0)
    with pytest.raises(ChartError):
        slice_symplectic_check(SliceState(0, -0.5, 0, 0), 1.0, 1.0)


def test_wrap_angle():
    assert wrap_angle(math.pi) == math.pi
    assert wrap_angle(-math.pi) == math.pi
    assert abs(wrap_angle(3 * math.pi / 2) + math.pi / 2) < 1e-15


def test_symplectic_at_origin():
    assert slice_symplectic_check(SliceState(0, 0, 0, 0), 1.3, 2.0) < 1e-8


def test_symplectic_random_points():
    rng = np.random.default_rng(0)
    for _ in range(50):
        ss = SliceState(rng.uniform(-3, 3), *rng.uniform(-0.3, 0.3, 3))
        assert slice_symplectic_check(ss, 1.0, float(rng.choice([1.0, -3.0]))) < 1e-6


def test_trunc0_leading_term():
    a, gam = 1.7, 2.0
    assert abs(h_slice_trunc0(SliceState(0.4, 0, 0, 0), 0.0, a, gam) - gam**2 * math.log(a) / (3 * math.pi)) < 1e-15


def _residual(eps, ss, u, a, gam, order=4, hfun=None):
    g = Strengths.family(gam, 3)
    sc = SliceState(ss.theta, eps**2 * ss.j, eps * ss.q, eps * ss.p)
    approx = hfun(sc) if hfun else h_slice_trunc0(sc, u, a, gam, order)
    return abs(h_v(from_slice(sc, a, u), g) - approx)


@pytest.mark.parametrize("seed", range(4))
def test_trunc0_order_at_u0(seed):
    rng = np.random.default_rng(seed)
    ss = SliceState(rng.uniform(-3, 3), *rng.uniform(-1, 1, 3))
    a, gam = 1.0 + rng.uniform(), 1.0
    r = [_residual(e, ss, 0.0, a, gam) for e in (0.02, 0.01, 0.005)]
    for big, sm in zip(r, r[1:]):
        assert 32 / 1.5 < big / sm < 32 * 1.5


def test_trunc0_theta_independent_at_u0():
    ss = SliceState(0.3, 0.01, 0.05, -0.02)
    h = 1e-4
    vals = [h_slice_trunc0(SliceState(ss.theta + k * h, ss.j, ss.q, ss.p), 0.0, 1.2, 1.0) for k in (-2, -1, 1, 2)]
    d = (vals[0] - 8 * vals[1] + 8 * vals[2] - vals[3]) / (12 * h)
    assert abs(d) < 1e-12


def test_trunc0_u_coefficient():
    # d/du of the exact energy at u = 0 along the slice matches -G^2 Re(e z)/(2 pi a^2) + O(eps^3)
    a, gam = 1.3, 1.0
    g = Strengths.family(gam, 3)
    ss = SliceState(0.7, 0.0, 0.02, -0.01)
    us = np.array([0.0, 1e-4, 2e-4, 3e-4, 4e-4])
    vals = [h_v(from_slice(ss, a, u), g) for u in us]
    slope = np.polyfit(us, vals, 2)[1]
    vals0 = [h_slice_trunc0(ss, u, a, gam) for u in us]
    assert abs(slope - np.polyfit(us, vals0, 2)[1]) < 1e-5
    coeff = -gam**2 * (cmath.exp(1j * ss.theta) * ss.z).real / (2 * math.pi * a**2)
    assert abs(slope - coeff) < 1e-4
    # the displayed first-order term itself, extracted by differences in u
    lin = [h_slice_trunc0(ss, u, a, gam, 1) for u in us]
    assert abs(np.polyfit(us, lin, 1)[0] - coeff) < 1e-8


def test_trunc1_examples():
    assert h_slice_trunc1(SliceState(0.5, 0, 0, 0), 0.2, 1.0) == 0.0
    q, j, a = 0.13, 0.02, 1.4
    assert abs(h_slice_trunc1(SliceState(0.3, j, q, 0), 0.0, a) - (j - q**2 / 2 + 2 * q**3 / (3 * a))) < 1e-15


@given(slice_states, st.floats(0, 0.1), st.floats(0.8, 3.0), st.sampled_from([1.0, 2.0, -1.5]))
def test_trunc1_is_rescaled_trunc0(ss, u, a, gam):
    t0 = h_slice_trunc0(ss, u, a, gam, 3)
    dropped = (gam**2 * math.log(a) / (3 * math.pi)
               - 3 * gam**2 * (ss.z**2 * cmath.exp(2j * ss.theta)).real * u**2 / (4 * math.pi * a**4)
               + gam**2 * (2 * ss.j - abs(ss.z) ** 2) * (cmath.exp(1j * ss.theta) * ss.z).real * u
               / (2 * math.pi * a**4))
    assert abs(h_slice_trunc1(ss, u, a) - 3 * math.pi * a**2 / gam**2 * (t0 - dropped)) < 1e-12


def test_trunc1_order():
    # against the exact energy at u = 0 the remainder is the eps^4 group
    a, gam = 1.0, 1.0
    ss = SliceState(0.2, 0.4, 0.3, -0.5)
    c = gam**2 / (3 * math.pi * a**2)
    const = gam**2 * math.log(a) / (3 * math.pi)

    def hfun(sc):
        return const + c * h_slice_trunc1(sc, 0.0, a)

    r = [_residual(e, ss, 0.0, a, gam, hfun=hfun) for e in (0.04, 0.02, 0.01)]
    for big, sm in zip(r, r[1:]):
        assert 16 / 1.5 < big / sm < 16 * 1.5


@given(slice_states, st.floats(-math.pi, math.pi), st.floats(0, 0.1))
def test_trunc1_low_order_symmetry(ss, phi, u):
    # quadratic and u-terms are invariant for every phi; the cubic term for phi in (2 pi / 3) Z
    def rot(s, f):
        z = cmath.exp(-1j * f) * s.z
        return SliceState(s.theta + f, s.j, z.real, z.imag)

    def low(s):
        return h_slice_trunc1(s, u, 1.0) - 2 * (s.z**3).real / 3

    assert abs(low(rot(ss, phi)) - low(ss)) < 1e-12
    for k in range(3):
        f = 2 * math.pi * k / 3
        assert abs(h_slice_trunc1(rot(ss, f), u, 1.0) - h_slice_trunc1(ss, u, 1.0)) < 1e-12


def test_w_examples():
    ws = to_w(SliceState(0.3, 0, 0, 0), 0.2)
    assert ws.k == 0 and abs(ws.w - 0.15) < 1e-15


@given(slice_states, st.floats(0, 0.1))
def test_w_round_trip(ss, u):
    back = from_w(to_w(ss, u), u)
    assert abs(back.j - ss.j) < 1e-12 and abs(back.z - ss.z) < 1e-12 and back.theta == ss.theta


def test_w_symplectic():
    rng = np.random.default_rng(2)
    for _ in range(50):
        ss = SliceState(rng.uniform(-3, 3), *rng.uniform(-0.5, 0.5, 3))
        assert w_symplectic_check(ss, rng.uniform(0, 0.1)) < 1e-8


def test_poincare_estimate_examples():
    pe = poincare_estimate(0.0, 1.0)
    assert pe.omega_plus == 1 and pe.omega_minus == 0
    assert np.max(np.abs(pe.matrix - np.eye(2))) < 1e-15
    pe = poincare_estimate(0.075, 2.0)
    assert abs(pe.omega_minus - 0.0128206) < 1e-7
    assert abs(pe.omega_minus - (1 - math.sqrt(1 - 36 * 0.075**2 / 4)) / 2) < 1e-15
    assert abs(np.linalg.det(pe.matrix) - 1) < 1e-10
    assert np.allclose(np.abs(np.linalg.eigvals(pe.matrix)), 1, atol=1e-12)
    assert abs(pe.omega_plus + pe.omega_minus - 1) < 1e-12
    with pytest.raises(HyperbolicRegimeError):
        poincare_estimate(0.4, 2.0)
    with pytest.raises(HyperbolicRegimeError):
        poincare_estimate(1 / 3, 2.0)


@given(st.floats(0, 0.16), st.floats(1.0, 3.0))
def test_poincare_estimate_invariants(u, a):
    pe = poincare_estimate(u, a)
    assert abs(pe.omega_plus + pe.omega_minus - 1) < 1e-12
    assert abs(np.linalg.det(pe.matrix) - 1) < 1e-10


def test_omega_minus_small_u_law():
    for a in (0.5, 1.0, 2.0):
        u = 1e-3 * a
        assert abs(omega_minus(u, a) / u**2 / (9 / a**2) - 1) < 0.01
    assert omegas(0.0, 1.0) == (1.0, 0.0)


@settings(max_examples=50)
@given(st.floats(-2, 2), st.floats(-2, 2), st.floats(0, 10), st.floats(0, 0.15), st.floats(1.0, 3.0))
def test_w_solution_solves_ode(ar, ai, t, u, a):
    A = complex(ar, ai)
    h = 1e-4
    w = lambda s: w_solution(s, A, u, a)
    dw = (-w(t + 2 * h) + 8 * w(t + h) - 8 * w(t - h) + w(t - 2 * h)) / (12 * h)
    rhs = 2j * w(t) + 3j * u / a * cmath.exp(3j * t) * w(t).conjugate()
    assert abs(dw - rhs) < 1e-9 * (1 + abs(A))


def test_w_solution_u0_limit():
    w0 = 0.3 - 0.1j
    A = w_constant(w0, 0.0, 1.0)
    for t in (0.5, 1.7):
        assert abs(w_solution(t, A, 0.0, 1.0) - w0 * cmath.exp(2j * t)) < 1e-14


@pytest.mark.parametrize("u,a", [(0.075, 2.0), (0.05, 1.0), (0.0, 1.0)])
def test_w_solution_reproduces_matrix(u, a):
    M = poincare_estimate(u, a).matrix
    for w0 in (1.0 + 0j, 1j, 0.3 - 0.7j):
        A = w_constant(w0, u, a)
        assert abs(w_solution(0.0, A, u, a) - w0) < 1e-12
        w1 = w_solution(2 * math.pi, A, u, a)
        pred = M @ np.array([w0.real, w0.imag])
        assert abs(w1 - complex(*pred)) < 1e-10


def test_wstate_fields():
    ws = WState(0.1, 0.2, 0.3j)
    assert ws.w == 0.3j
