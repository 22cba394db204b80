import cmath
import math

import mpmath
import pytest
from hypothesis import given
from hypothesis import strategies as st

from artin_scattering.errors import BranchPointError, BudgetError, ConfigError, DomainError, PoleError
from artin_scattering.scattering import (
    ENERGY_SHIFT,
    MAX_PHASE_STEP,
    Resonance,
    ResonanceMethod,
    Sheet,
    approx_resonances,
    exact_resonances,
    local_s_matrix,
    momentum_from_energy,
    phase_derivative,
    phase_scan,
    s_matrix,
    theta,
    theta_prime,
    width_ratios,
)
from artin_scattering.tables import load_published_table
from tests.conftest import KNOWN_ZEROS

mpmath.mp.dps = 30


def _mp_theta(s):
    return mpmath.pi ** (-s) * mpmath.zeta(2 * s) * mpmath.gamma(s)


@pytest.fixture(scope="module")
def exact(first_ten_zeros):
    return exact_resonances(first_ten_zeros)


@pytest.fixture(scope="module")
def approx(first_ten_zeros):
    return approx_resonances(first_ten_zeros)


@given(st.floats(min_value=0.1, max_value=60.0))
def test_s_matrix_is_unitary(p):
    assert abs(abs(s_matrix(p)) - 1.0) <= 1e-12


def test_s_matrix_matches_multiprecision_ratio():
    s = mpmath.mpc(0.5, 5.0)
    expected = complex(_mp_theta(s) / _mp_theta(mpmath.mpc(0.5, -5.0)))
    assert s_matrix(5.0) == pytest.approx(expected, abs=1e-9)


def test_s_matrix_equals_theta_ratio():
    p = 11.3
    ratio = theta(complex(0.5, p)) / theta(complex(0.5, -p))
    assert s_matrix(p) == pytest.approx(ratio, abs=1e-10)


@pytest.mark.parametrize("p", [0.0, -1.0, float("nan")])
def test_s_matrix_domain(p):
    with pytest.raises(DomainError):
        s_matrix(p)


@pytest.mark.parametrize("s", [complex(0.1, 3.0), complex(0.35, 12.5), complex(-0.2, 7.0), complex(0.8, -4.0)])
def test_theta_symmetry(s):
    assert theta(s) == pytest.approx(theta(0.5 - s), rel=1e-9)


def test_theta_matches_mpmath():
    s = complex(0.3, 4.0)
    assert theta(s) == pytest.approx(complex(_mp_theta(mpmath.mpc(s))), rel=1e-10)


@pytest.mark.parametrize("s", [0.5, 0.0, -2.0])
def test_theta_poles(s):
    with pytest.raises(PoleError):
        theta(s)


@pytest.mark.parametrize("s", [complex(0.3, 5.0), complex(0.25, KNOWN_ZEROS[0] / 2.0), complex(0.5, -9.0)])
def test_theta_prime_matches_finite_difference(s):
    h = 1e-5
    estimate = (theta(s + h) - theta(s - h)) / (2.0 * h)
    assert abs(theta_prime(s) - estimate) <= 1e-6 * max(abs(estimate), abs(theta(s)))


def test_momentum_sheets():
    assert momentum_from_energy(49.25) == pytest.approx(complex(7.0, 0.0))
    assert momentum_from_energy(49.25, Sheet.SECOND) == pytest.approx(complex(-7.0, 0.0))
    below = momentum_from_energy(complex(10.0, -1.0))
    assert below.imag >= 0


def test_momentum_branch_point():
    with pytest.raises(BranchPointError):
        momentum_from_energy(0.25)
    with pytest.raises(DomainError):
        momentum_from_energy(0.25, Sheet.SECOND)


def test_exact_resonances_reproduce_published_table(exact):
    table = load_published_table("exact")
    for resonance in exact:
        assert resonance.method is ResonanceMethod.EXACT
        assert resonance.energy == pytest.approx(table.loc[resonance.index, "E"], abs=1.01e-3)
        assert resonance.width == pytest.approx(resonance.u / 2.0)
        assert resonance.half_width == pytest.approx(table.loc[resonance.index, "Gamma"], abs=1.01e-4)
    assert exact[0].energy == pytest.approx(50.1351, abs=1e-4)
    assert exact[6].half_width == pytest.approx(10.2297, abs=1e-4)


def test_exact_pole_lies_at_zeta_zero(exact):
    for resonance in exact[:3]:
        momentum = momentum_from_energy(resonance.pole, Sheet.SECOND)
        assert momentum == pytest.approx(complex(resonance.u / 2.0, -0.25), abs=1e-9)
        assert resonance.pole.real == pytest.approx(resonance.u ** 2 / 4.0 + ENERGY_SHIFT)


def test_approx_resonances_reproduce_published_table(approx):
    table = load_published_table("approx")
    for resonance in approx:
        assert resonance.method is ResonanceMethod.APPROX
        assert resonance.phase_offset is not None
        assert resonance.energy == pytest.approx(table.loc[resonance.index, "E_approx"], rel=1e-3)
        assert resonance.half_width == pytest.approx(table.loc[resonance.index, "Gamma_approx"], rel=1e-3)
    assert approx[0].energy == pytest.approx(51.2732, abs=1e-3)
    assert approx[0].half_width == pytest.approx(3.05908, abs=1e-4)


def test_approx_stays_close_to_exact(exact, approx):
    for e, a in zip(exact, approx):
        assert abs(a.energy - e.energy) / e.energy <= 0.03
        assert abs(a.width - e.width) / e.width <= 0.35


def test_newton_steps_converge_to_exact_pole(first_ten_zeros, exact):
    refined = approx_resonances(first_ten_zeros[:3], newton_steps=6)
    for r, e in zip(refined, exact):
        assert r.energy == pytest.approx(e.energy, rel=1e-8)
        assert r.width == pytest.approx(e.width, rel=1e-6)


def test_newton_steps_validation(first_ten_zeros):
    with pytest.raises(ConfigError):
        approx_resonances(first_ten_zeros[:1], newton_steps=-1)
    with pytest.raises(DomainError):
        approx_resonances([])


def test_local_s_matrix_matches_at_bump(approx):
    for resonance in approx[:4]:
        bump = resonance.u ** 2 / 4.0 + ENERGY_SHIFT
        expected = s_matrix(math.sqrt(bump - 0.25))
        assert local_s_matrix(bump, resonance) == pytest.approx(expected, abs=1e-9)
        assert abs(local_s_matrix(bump + 3.0, resonance)) == pytest.approx(1.0)


def test_local_s_matrix_needs_phase_offset(exact):
    with pytest.raises(DomainError):
        local_s_matrix(50.0, exact[0])


def test_width_ratios(exact):
    ratios = width_ratios(exact)
    assert len(ratios) == 10
    assert ratios[-1][1] is None
    assert all(spacing is not None and spacing > 0 for _, spacing in ratios[:-1])
    assert ratios[-1][0] * exact[-1].u / 2.0 == pytest.approx(1.0, rel=5e-3)
    assert ratios[0][0] == pytest.approx(exact[0].width / exact[0].energy)


def test_width_ratios_validation(exact, approx):
    with pytest.raises(DomainError):
        width_ratios(exact[:1])
    with pytest.raises(DomainError):
        width_ratios(approx)
    with pytest.raises(DomainError):
        width_ratios(list(reversed(exact)))


def test_resonance_validation():
    with pytest.raises(ConfigError):
        Resonance(index=1, u=14.0, energy=50.0, width=0.0, method=ResonanceMethod.EXACT)
    resonance = Resonance(index=1, u=14.0, energy=50.0, width=7.0, method=ResonanceMethod.EXACT)
    assert resonance.pole == complex(50.0, -3.5)


def test_phase_scan_is_continuous_and_unitary():
    scan = phase_scan(10.0, 130.0, 200)
    assert scan[0].energy == 10.0 and scan[-1].energy == 130.0
    assert -math.pi / 2 < scan[0].delta <= math.pi / 2
    for previous, current in zip(scan, scan[1:]):
        assert previous.energy < current.energy
        assert abs(current.delta - previous.delta) < MAX_PHASE_STEP
    for sample in scan:
        assert abs(abs(sample.s_value) - 1.0) <= 1e-12
        assert sample.momentum ** 2 + 0.25 == pytest.approx(sample.energy, rel=1e-14)
        assert cmath.exp(2j * sample.delta) == pytest.approx(sample.s_value, abs=1e-9)


def test_phase_scan_refines_coarse_grid():
    scan = phase_scan(48.0, 52.0, 2)
    assert len(scan) > 2
    for previous, current in zip(scan, scan[1:]):
        assert abs(current.delta - previous.delta) < MAX_PHASE_STEP


def test_phase_scan_budget():
    with pytest.raises(BudgetError):
        phase_scan(48.0, 52.0, 2, max_samples=2)


@pytest.mark.parametrize("e_min, e_max, samples", [(0.2, 10.0, 10), (20.0, 10.0, 10), (10.0, 20.0, 1)])
def test_phase_scan_domain(e_min, e_max, samples):
    with pytest.raises(DomainError):
        phase_scan(e_min, e_max, samples)


def test_phase_jumps_by_pi_across_resonances(approx):
    for resonance in approx[:3] + approx[-1:]:
        window = 3.0 * resonance.half_width
        scan = phase_scan(resonance.energy - window, resonance.energy + window, 120)
        jump = scan[-1].delta - scan[0].delta
        assert 0.7 * math.pi <= jump <= 1.3 * math.pi


def test_phase_derivative_peaks_near_resonance(approx):
    resonance = approx[0]
    half = resonance.half_width
    scan = phase_scan(resonance.energy - 2.0 * half, resonance.energy + 2.0 * half, 400)
    slopes = phase_derivative(scan)
    assert len(slopes) == len(scan)
    peak_energy = max(slopes, key=lambda pair: pair[1])[0]
    assert abs(peak_energy - resonance.energy) <= half


def test_phase_derivative_needs_two_samples():
    with pytest.raises(DomainError):
        phase_derivative(phase_scan(10.0, 11.0, 2)[:1])
