import numpy as np
import pytest

from dnOperator import DirichletNeumannSolver
from fluidGeometry import FluidBase, SurfaceState, periodic_grid, spectral_derivative
from labErrors import FitError, InstabilityError, PreconditionError
from waterWaves import (
    at_rest, b_and_v, bump_state, fit_frequency, linear_dispersion_check, linear_frequency, mode_amplitude,
    rest_propagation_probe, total_energy, v_standard, window_activity, window_mask, zcs_rhs,
)

BASE = FluidBase(1.0, 64, nz=24)


def test_rest_state_is_an_equilibrium():
    eta_t, phi_t = zcs_rhs(SurfaceState.zeros(64), BASE, 9.81)
    assert np.all(eta_t == 0)
    assert np.all(phi_t == 0)


def test_surface_elevation_drives_the_potential():
    x = periodic_grid(64)
    state = SurfaceState(1e-6 * np.cos(x), np.zeros(64))
    eta_t, phi_t = zcs_rhs(state, BASE, 2.0)
    assert np.all(eta_t == 0)
    assert np.array_equal(phi_t, -2.0 * state.eta)


def test_linearization_around_rest():
    x = periodic_grid(64)
    eps = 1e-6
    eta_t, phi_t = zcs_rhs(SurfaceState(np.zeros(64), eps * np.cos(x)), BASE, 1.0)
    assert np.allclose(eta_t / eps, np.tanh(1.0) * np.cos(x), rtol=0, atol=5e-3)
    assert np.max(np.abs(phi_t)) <= 1e-11


def test_linearization_error_is_second_order():
    x = periodic_grid(64)
    eta, phi = np.cos(x), np.sin(2 * x)
    solver = DirichletNeumannSolver()
    G0phi = solver.dn_apply(BASE.geometry(np.zeros(64)), phi)

    epsilons = [1e-4, 1e-5, 1e-6]
    residuals = []
    for eps in epsilons:
        eta_t, phi_t = zcs_rhs(SurfaceState(eps * eta, eps * phi), BASE, 9.81, solver)
        residuals.append(max(np.max(np.abs(eta_t - eps * G0phi)), np.max(np.abs(phi_t + 9.81 * eps * eta))))

    slope = np.polyfit(np.log(epsilons), np.log(residuals), 1)[0]
    assert slope == pytest.approx(2.0, abs=0.2)


def test_potential_terms_are_quadratic():
    x = periodic_grid(64)
    _, small = zcs_rhs(SurfaceState(np.zeros(64), 1e-3 * np.cos(x)), BASE, 1.0)
    _, large = zcs_rhs(SurfaceState(np.zeros(64), 2e-3 * np.cos(x)), BASE, 1.0)
    assert np.max(np.abs(large)) / np.max(np.abs(small)) == pytest.approx(4.0, rel=1e-6)


def test_b_and_v_on_a_flat_surface():
    x = periodic_grid(32)
    state = SurfaceState(np.zeros(32), np.cos(x))
    Gphi = np.tanh(1.0) * np.cos(x)

    B, V = b_and_v(state, Gphi)
    assert np.allclose(B, -Gphi, atol=1e-14)
    assert np.allclose(V, -np.sin(x) * (1 + Gphi), atol=1e-13)
    assert np.allclose(v_standard(state, B), -np.sin(x), atol=1e-13)


def test_b_and_v_with_a_sloped_surface():
    x = periodic_grid(32)
    state = SurfaceState(0.1 * np.sin(x), np.cos(x))
    Gphi = 0.5 * np.cos(x)
    eta_x, phi_x = 0.1 * np.cos(x), -np.sin(x)

    B, V = b_and_v(state, Gphi)
    assert np.allclose(B, (eta_x * phi_x - Gphi) / (1 + eta_x ** 2), atol=1e-13)
    assert np.allclose(V, phi_x - B * phi_x, atol=1e-13)
    assert np.allclose(v_standard(state, B), phi_x - B * eta_x, atol=1e-13)

    with pytest.raises(PreconditionError):
        b_and_v(state, np.zeros(31))


def test_window_mask():
    assert np.count_nonzero(window_mask(8, [0.0, 7.0])) == 8
    assert list(np.nonzero(window_mask(8, [0.5, 1.6]))[0]) == [1, 2]
    # [6, 7] wraps past 2pi and holds x = 0
    assert list(np.nonzero(window_mask(8, [6.0, 7.0]))[0]) == [0]

    with pytest.raises(PreconditionError):
        window_mask(8, [1.0, 0.5])
    with pytest.raises(PreconditionError):
        window_mask(8, [0.01, 0.02])


def test_window_activity():
    x = periodic_grid(64)
    state = SurfaceState(np.zeros(64), np.sin(x))
    assert window_activity(state, [0.0, 0.1]) == pytest.approx(1.0)

    bump = bump_state(64, np.pi, 0.5, 1e-3)
    assert window_activity(bump, [0.3, 1.0]) == 0.0
    assert window_activity(bump, [3.0, 3.3]) > 0

    assert at_rest(bump, [0.3, 1.0], 0.0)
    assert not at_rest(bump, [3.0, 3.3], 1e-6)
    assert at_rest(bump, [3.0, 3.3], 1e-3)


def test_bump_state():
    bump = bump_state(64, np.pi, 0.5, 1e-3)
    assert np.max(bump.eta) == pytest.approx(1e-3 * np.exp(-1.0))
    assert np.all(bump.phi == 0)
    x = bump.x()
    assert np.all(bump.eta[np.abs(x - np.pi) >= 0.5] == 0)


def test_mode_amplitude():
    x = periodic_grid(32)
    assert mode_amplitude(0.3 * np.cos(2 * x) + np.sin(2 * x), 2) == pytest.approx(0.3)


def test_fit_frequency():
    t = np.arange(0, 10, 0.01)
    assert fit_frequency(t, np.cos(2.0 * t)) == pytest.approx(2.0, rel=1e-6)
    with pytest.raises(FitError):
        fit_frequency(t[:200], np.cos(2.0 * t[:200]))


def test_fit_frequency_needs_two_periods():
    # four crossings, 1.8 periods
    t = np.arange(0, 1.8 * np.pi, 0.01)
    with pytest.raises(FitError, match="periods"):
        fit_frequency(t, np.cos(2.0 * t))

    t = np.arange(0, 2.1 * np.pi, 0.01)
    assert fit_frequency(t, np.cos(2.0 * t)) == pytest.approx(2.0, rel=1e-6)


def test_linear_frequency():
    assert linear_frequency(1, 1.0, 1.0) == pytest.approx(np.sqrt(np.tanh(1.0)))
    assert linear_frequency(2, 1.0, 4.0) == pytest.approx(2 * np.sqrt(2 * np.tanh(2.0)))


def run_dispersion(k, H, g, **kwargs):
    omega = linear_frequency(k, H, g)
    dt = 0.04 / omega
    steps = int(np.ceil(2.2 * 2 * np.pi / omega / dt))
    return linear_dispersion_check(k, H, g, steps, dt, **kwargs), omega


@pytest.mark.slow
def test_small_waves_follow_linear_dispersion():
    one, expected_one = run_dispersion(1, 1.0, 1.0)
    four, expected_four = run_dispersion(1, 1.0, 4.0)
    assert one == pytest.approx(expected_one, rel=1e-3)
    assert four == pytest.approx(expected_four, rel=1e-3)
    assert four / one == pytest.approx(2.0, rel=1e-3)


@pytest.mark.slow
def test_small_waves_in_deeper_water():
    omega, expected = run_dispersion(1, 2.0, 1.0, nz=96)
    assert omega == pytest.approx(expected, rel=2e-3)


@pytest.mark.slow
def test_second_mode_in_deep_water():
    # tanh(6) is 1 to within 1e-5
    omega, _ = run_dispersion(2, 3.0, 1.0, nz=160)
    assert omega == pytest.approx(np.sqrt(2.0), rel=2e-3)


def test_linear_check_preconditions():
    with pytest.raises(PreconditionError):
        linear_dispersion_check(1, 1.0, 1.0, 10, 0.01, amplitude=1e-3)
    with pytest.raises(PreconditionError):
        linear_dispersion_check(16, 1.0, 1.0, 10, 0.01)
    with pytest.raises(PreconditionError):
        linear_dispersion_check(1, 1.0, 1.0, 10, 0.1)


def test_rest_propagation_of_the_rest_state():
    result = rest_propagation_probe(SurfaceState.zeros(32), FluidBase(1.0, 32, nz=12), [0.5, 1.5], 1.0, 0.5, 0.05, 0.0)
    assert len(result.times) == 11
    assert not result.ever_active()
    assert result.first_exceed is None
    assert result.energy == [0.0] * 11
    assert result.final_state.sup_norm() == 0.0


def test_rest_propagation_of_a_distant_bump():
    state = bump_state(64, np.pi, 0.5, 1e-3)
    tol = 1e-12 * float(np.max(state.eta))
    result = rest_propagation_probe(state, FluidBase(1.0, 64, nz=16), [0.3, 1.0], 1.0, 0.2, 0.02, tol)

    assert result.activity[0] == 0.0
    assert result.first_exceed is not None and result.first_exceed > 0
    assert result.rows()[0] == [0.0, 0.0, result.energy[0]]
    assert result.energy[-1] == pytest.approx(result.energy[0], rel=1e-2)


def test_rest_propagation_requires_rest_on_the_window():
    state = SurfaceState(1e-3 * np.cos(periodic_grid(32)), np.zeros(32))
    with pytest.raises(PreconditionError):
        rest_propagation_probe(state, FluidBase(1.0, 32, nz=12), [0.5, 1.5], 1.0, 1.0, 0.05, 1e-15)


def test_rest_propagation_stops_on_growth():
    # RK4 is far outside its stability region for the resolved modes at this step.
    state = bump_state(32, np.pi, 0.5, 1e-3)
    with pytest.raises(InstabilityError):
        rest_propagation_probe(state, FluidBase(1.0, 32, nz=12), [0.3, 1.0], 1.0, 20.0, 2.0, 1e-15)


def test_total_energy_of_a_still_surface():
    x = periodic_grid(64)
    state = SurfaceState(0.01 * np.cos(x), np.zeros(64))
    assert total_energy(state, BASE, 2.0) == pytest.approx(0.5 * 2.0 * 1e-4 * np.pi)


def test_spectral_velocity_matches_the_potential():
    x = periodic_grid(64)
    state = SurfaceState(np.zeros(64), np.sin(2 * x))
    assert np.allclose(v_standard(state, np.zeros(64)), spectral_derivative(state.phi))
