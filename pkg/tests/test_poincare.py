import math

import numpy as np
import pytest

from vortex4.errors import DegenerateError, DomainError
from vortex4.poincare import (SectionData, anchored_section, crawl_experiment, emergent_mass, floquet_rotation,
                              periodic_point,
                              rotation_number, section_events, section_map)
from vortex4.reduced_dynamics import s3_act
from vortex4.resolution import VState
from vortex4.slice import SliceState, from_slice, omega_minus, omega_slow, to_slice

ALPHA, U = 2.0, 0.075
GAMMA = 3 * math.pi * ALPHA**2


@pytest.fixture(scope="module")
def run():
    return anchored_section(ALPHA, GAMMA, U, 1e-3, 40)


def _lattice(rho, n=50, center=0.3 - 0.1j, r=0.02):
    z = center + r * np.exp(2j * math.pi * rho * np.arange(n))
    return SectionData(np.column_stack([z.real, z.imag]), np.zeros(n), {}, center)


@pytest.mark.parametrize("rho", [0.0128, -0.2, 0.37, -0.49])
def test_rotation_number_on_lattice(rho):
    assert abs(rotation_number(_lattice(rho)) - rho) < 1e-6


def test_rotation_number_degenerate():
    sd = SectionData(np.zeros((20, 2)), np.zeros(20), {})
    with pytest.raises(DegenerateError):
        rotation_number(sd)
    with pytest.raises(DegenerateError):
        rotation_number(_lattice(0.1, n=5))


def test_section_energy_level(run):
    H = run.energies
    assert np.ptp(H) < 1e-6 * abs(H).max()
    assert len(run.points) == 40


def test_periodic_point(run):
    zc = run.anchor
    assert abs(zc.imag) < 1e-9
    assert abs(zc.real + 0.75 * U) < U**2


def test_rotation_direction_and_size(run):
    rho = rotation_number(run)
    # clockwise, like the linear estimate, and within a factor 1.5 of it
    assert rho < 0
    assert 1 / 1.5 < -rho / omega_minus(U, ALPHA) < 1.5


def test_birkhoff_consistency(run):
    n = 20
    half = SectionData(run.points[:n], run.energies[:n], run.params, run.anchor)
    assert abs(rotation_number(half) - rotation_number(run)) < 1 / n


def test_u0_return_is_identity():
    v0 = from_slice(SliceState(0, 0, 1e-4, 0), ALPHA)
    sd = section_map(v0, ALPHA, GAMMA, 10)
    z0 = complex(1e-4, 0)
    assert np.max(np.abs(sd.z - z0)) < 1e-6


def test_requires_zero_j():
    v0 = from_slice(SliceState(0, 0.05, 0.01, 0), ALPHA, U)
    with pytest.raises(DomainError):
        section_map(v0, ALPHA, GAMMA, 3)


def test_s3_related_sections():
    th = np.exp(2j * math.pi / 3)
    v0 = from_slice(SliceState(0, 0, -0.05, 0.01), ALPHA, U)
    sv0 = s3_act((2, 3, 1), v0)
    a = section_events(sv0, ALPHA, GAMMA, 5)
    b = section_events(v0, ALPHA, GAMMA, 5, section_angle=-2 * math.pi / 3)
    for (ta, va), (tb, vb) in zip(a, b):
        img = s3_act((2, 3, 1), vb)
        assert abs(ta - tb) < 1e-6
        sa, sb = to_slice(va, ALPHA), to_slice(img, ALPHA)
        assert abs(sa.z - sb.z) < 1e-6 and abs(img.v1 - th * vb.v1) < 1e-12


def test_negative_gamma_crosses_the_other_way():
    v0 = from_slice(SliceState(0, 0, 1e-4, 0), ALPHA)
    sd = section_map(v0, ALPHA, -GAMMA, 3)
    assert np.all(np.diff(sd.times) > 0)


def test_csv_format(run):
    text = run.to_csv("# meta")
    lines = text.splitlines()
    assert lines[0] == "# meta" and lines[1] == "iter,q,p,H"
    assert len(lines) == 2 + len(run.points)
    assert lines[2].startswith("1,")


def test_crawl_zero_eps():
    drift, pred = crawl_experiment(1.0, 3 * math.pi, 0.0, 4 * math.pi)
    assert abs(drift) < 1e-9 and pred == 0


def test_crawl_matches_emergent_mass():
    drift, pred = crawl_experiment(1.0, 3 * math.pi, 1e-3, 20 * 2 * math.pi)
    assert abs(pred - 1e-3 / emergent_mass(1.0)) < 1e-18
    assert abs(drift - pred) / abs(pred) < 0.05
    assert abs(math.degrees(np.angle(drift / pred))) < 5


def test_periodic_point_u0_is_origin_like():
    zc = periodic_point(ALPHA, GAMMA, 0.01)
    assert abs(zc + 0.0075) < 1e-3


@pytest.mark.parametrize("alpha", [1.0, 2.0])
def test_rotation_matches_second_order_rate(alpha):
    sd = anchored_section(alpha, 3 * math.pi * alpha**2, U, 1e-3, 100)
    assert abs(-rotation_number(sd) / omega_slow(U, alpha) - 1) < 0.03


@pytest.mark.parametrize("alpha", [1.0, 2.0])
def test_floquet_rotation_quadratic_coefficient(alpha):
    # (rho - omega_minus) alpha^2 / u^2 tends to 9/4; the remainder is O(u^2)
    u = 0.01 * alpha
    rho = floquet_rotation(alpha, 3 * math.pi * alpha**2, u)
    assert abs((rho - omega_minus(u, alpha)) * alpha**2 / u**2 - 2.25) < 5e-3


def test_floquet_agrees_with_section_rotation(run):
    long = anchored_section(ALPHA, GAMMA, U, 1e-3, 200)
    assert abs(-rotation_number(long) / floquet_rotation(ALPHA, GAMMA, U) - 1) < 0.01
