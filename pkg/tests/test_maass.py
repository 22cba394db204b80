import math

import numpy as np
import pytest
from hypothesis import assume, given
from hypothesis import strategies as st
from scipy import integrate

from artin_scattering.errors import BudgetError, ConfigError, DomainError
from artin_scattering.maass import (
    INVARIANCE_BAND,
    HalfPlanePoint,
    MaassWaveFunction,
    TruncationSpec,
    area_below,
    divisors,
    generator_residuals,
    horizontal_length,
    modular_invariance_residual,
    pde_residual,
    reduce_to_fundamental_domain,
    tau,
    wavefunction,
    wavefunction_grid,
)
from tests.conftest import KNOWN_ZEROS

P_FIRST = 7.06735


def test_half_plane_point():
    point = HalfPlanePoint.from_xy(0.2, 1.1)
    assert point.y == pytest.approx(1.1)
    assert point.z == pytest.approx(complex(0.2, 1.1))
    assert point.translated().x == pytest.approx(1.2)
    inverted = point.inverted()
    assert inverted.z == pytest.approx(-1.0 / point.z)
    with pytest.raises(DomainError):
        HalfPlanePoint.from_xy(0.0, 0.0)


def test_divisors():
    assert divisors(1) == [1]
    assert divisors(12) == [1, 2, 3, 4, 6, 12]
    assert divisors(97) == [1, 97]
    assert divisors(7 * 7 * 11) == [1, 7, 11, 49, 77, 539]
    with pytest.raises(DomainError):
        divisors(0)


def test_tau_small_arguments():
    p = 3.7
    assert tau(p, 1) == 1.0
    assert tau(p, 2) == pytest.approx(2.0 * math.cos(p * math.log(2.0)))
    expected = 2.0 * math.cos(p * math.log(6.0)) + 2.0 * math.cos(p * math.log(1.5))
    assert tau(p, 6) == pytest.approx(expected, abs=1e-12)


def test_tau_of_square_has_middle_term():
    p = 1.3
    # divisors of 4: 1, 2, 4 -> cos(-p ln 4) + 1 + cos(p ln 4)
    assert tau(p, 4) == pytest.approx(1.0 + 2.0 * math.cos(p * math.log(4.0)), abs=1e-12)


@given(
    st.floats(min_value=0.1, max_value=30.0),
    st.integers(min_value=1, max_value=100),
    st.integers(min_value=1, max_value=100),
)
def test_tau_is_multiplicative(p, m, n):
    assume(math.gcd(m, n) == 1)
    assert tau(p, m) * tau(p, n) == pytest.approx(tau(p, m * n), abs=1e-10)


def test_tau_budget_and_domain():
    with pytest.raises(BudgetError):
        tau(1.0, 10 ** 9 + 1)
    with pytest.raises(DomainError):
        tau(1.0, 0)


def test_truncation_spec_validation():
    with pytest.raises(ConfigError):
        TruncationSpec(tail_tol=0.0)
    with pytest.raises(ConfigError):
        TruncationSpec(l_min=10, l_max_cap=5)


def test_mode_cap():
    function = MaassWaveFunction(P_FIRST, TruncationSpec(l_max_cap=8))
    assert 3 <= function.modes_for(2.0) <= 8
    with pytest.raises(BudgetError):
        function.modes_for(0.1)


def test_sample_records_bracket_and_half_density():
    point = HalfPlanePoint(0.1, 0.4)
    sample = wavefunction(P_FIRST, point)
    assert sample.psi == pytest.approx(math.exp(0.2) * sample.psi_reduced, rel=1e-14)
    assert sample.modes_used >= 3
    assert sample.tail_bound < 1e-12
    assert math.isfinite(sample.psi.real) and math.isfinite(sample.psi.imag)


def test_translation_is_exact_for_dyadic_x():
    for x in (0.25, -0.375, 0.125):
        a = wavefunction(P_FIRST, HalfPlanePoint(x, 0.3)).psi
        b = wavefunction(P_FIRST, HalfPlanePoint(x + 1.0, 0.3)).psi
        assert a == b


def test_reflection_symmetry_in_x():
    a = wavefunction(P_FIRST, HalfPlanePoint(0.3, 0.2)).psi
    b = wavefunction(P_FIRST, HalfPlanePoint(-0.3, 0.2)).psi
    assert a == b


def test_invariance_at_i_is_exact():
    residuals = generator_residuals(P_FIRST, HalfPlanePoint(0.0, 0.0))
    assert residuals == {"translate": 0.0, "invert": 0.0}


def test_invariance_at_generic_point():
    point = HalfPlanePoint.from_xy(0.2, 1.1)
    assert modular_invariance_residual(P_FIRST, point) <= 1e-6
    assert generator_residuals(P_FIRST, HalfPlanePoint(0.25, 0.1))["translate"] == 0.0


@pytest.mark.parametrize("n", [6, 9, 10])
def test_invariance_at_higher_resonance_momenta(n):
    p = KNOWN_ZEROS[n - 1] / 2.0
    assert modular_invariance_residual(p, HalfPlanePoint.from_xy(0.2, 1.1)) <= 1e-6


def test_modes_grow_with_the_prefactor():
    low = MaassWaveFunction(P_FIRST)
    high = MaassWaveFunction(KNOWN_ZEROS[9] / 2.0)
    assert high.log_scale > low.log_scale > 0.0
    assert high.modes_for(0.9) > low.modes_for(0.9)


def test_doubling_the_modes_stays_within_tail_tol():
    function = MaassWaveFunction(KNOWN_ZEROS[9] / 2.0)
    point = HalfPlanePoint.from_xy(-0.2, 0.9)
    sample = function.evaluate(point)
    doubled = function.evaluate(point, modes=2 * sample.modes_used)
    assert sample.tail_bound <= 1e-12
    assert abs(doubled.psi - sample.psi) <= 1e-12 * max(1.0, abs(sample.psi))


@pytest.mark.parametrize("x", [0.1, 0.3, 0.45])
def test_invariance_on_unit_arc(x):
    point = HalfPlanePoint.from_xy(x, math.sqrt(1.0 - x * x))
    assert modular_invariance_residual(P_FIRST, point) <= 1e-6


def test_invariance_band():
    low, high = INVARIANCE_BAND
    with pytest.raises(DomainError):
        generator_residuals(P_FIRST, HalfPlanePoint(0.0, low - 0.1))
    with pytest.raises(DomainError):
        modular_invariance_residual(P_FIRST, HalfPlanePoint(0.0, high + 0.1))


@pytest.mark.slow
@pytest.mark.parametrize("p", [KNOWN_ZEROS[0] / 2.0, KNOWN_ZEROS[1] / 2.0, 5.0])
def test_invariance_on_grid(p):
    worst = 0.0
    for y_tilde in np.linspace(-0.1, 1.0, 5):
        for x in np.linspace(-0.45, 0.45, 5):
            worst = max(worst, modular_invariance_residual(p, HalfPlanePoint(float(x), float(y_tilde))))
    assert worst <= 1e-6


def test_pde_residual_budget_at_reference_point():
    assert pde_residual(P_FIRST, HalfPlanePoint.from_xy(0.1, 1.2), 1e-3) <= 1e-4


@pytest.mark.slow
@pytest.mark.parametrize("x, y", [(0.1, 1.2), (-0.3, 1.5), (0.25, 2.0), (0.4, 1.1), (-0.15, 3.0)])
def test_pde_residual_is_second_order(x, y):
    point = HalfPlanePoint.from_xy(x, y)
    residuals = [pde_residual(P_FIRST, point, h) for h in (4e-3, 2e-3, 1e-3)]
    for coarse, fine in zip(residuals, residuals[1:]):
        assert 3.5 <= coarse / fine <= 4.5


def test_pde_residual_is_periodic():
    a = pde_residual(P_FIRST, HalfPlanePoint(0.25, 0.2), 2e-3)
    b = pde_residual(P_FIRST, HalfPlanePoint(1.25, 0.2), 2e-3)
    assert a == pytest.approx(b, rel=1e-3)


def test_pde_residual_step_domain():
    with pytest.raises(DomainError):
        pde_residual(P_FIRST, HalfPlanePoint.from_xy(0.0, 0.5), 0.6)


def test_wavefunction_grid_is_y_tilde_major():
    xs = [-0.25, 0.0, 0.25]
    y_tildes = [0.0, 0.5]
    samples = wavefunction_grid(P_FIRST, xs, y_tildes)
    assert len(samples) == 6
    assert [(s.point.x, s.point.y_tilde) for s in samples[:3]] == [(x, 0.0) for x in xs]
    assert samples[3].point == HalfPlanePoint(-0.25, 0.5)
    assert samples[0].psi == samples[2].psi


def test_area_below_matches_double_integral():
    y_top = math.e
    brute, _ = integrate.dblquad(
        lambda y, x: 1.0 / (y * y),
        -0.5,
        0.5,
        lambda x: math.sqrt(1.0 - x * x),
        lambda x: y_top,
        epsabs=1e-12,
        epsrel=1e-12,
    )
    assert area_below(1.0) == pytest.approx(math.pi / 3.0 - math.exp(-1.0))
    assert abs(area_below(1.0) - brute) <= 1e-6


def test_area_and_length_limits():
    assert area_below(0.0) == pytest.approx(math.pi / 3.0 - 1.0)
    assert area_below(50.0) == pytest.approx(math.pi / 3.0)
    assert horizontal_length(0.0) == 1.0
    assert horizontal_length(2.0) == pytest.approx(math.exp(-2.0))
    with pytest.raises(DomainError):
        area_below(-0.01)


@given(st.floats(min_value=-5.0, max_value=5.0), st.floats(min_value=0.05, max_value=5.0))
def test_reduction_lands_in_fundamental_domain(x, y):
    reduced = reduce_to_fundamental_domain(x, y)
    assert abs(reduced.x) <= 0.5
    assert reduced.x ** 2 + reduced.y ** 2 >= 1.0 - 1e-12


def test_reduction_of_known_points():
    reduced = reduce_to_fundamental_domain(3.0, 0.5)
    # 3 + 0.5i -> 0.5i -> -1/(0.5i) = 2i
    assert reduced.x == pytest.approx(0.0, abs=1e-15)
    assert reduced.y == pytest.approx(2.0)
    with pytest.raises(DomainError):
        reduce_to_fundamental_domain(0.0, 0.0)
