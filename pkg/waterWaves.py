import logging
import numpy as np
from tqdm import tqdm

from dnOperator import DirichletNeumannSolver
from fluidGeometry import FluidBase, SurfaceState, dealias, periodic_grid, spectral_derivative
from labErrors import FitError, InstabilityError, PreconditionError

logger = logging.getLogger(__name__)

# The probe aborts once the sup norm grows past this multiple of its initial value.
GROWTH_LIMIT = 10.0

MAX_LINEAR_AMPLITUDE = 1e-6
MAX_PHASE_STEP = 0.05


def zcs_rhs(state, base, g, solver = None):
    """(eta_t, phi_t) of the Zakharov-Craig-Sulem system in one horizontal dimension:

    eta_t = G(eta, b) phi
    phi_t = -g eta - phi_x^2 / 2 + (G phi + phi_x eta_x)^2 / (2 (1 + eta_x^2))
    """

    if solver is None:
        solver = DirichletNeumannSolver()

    geometry = base.geometry(state.eta)
    geometry.check_depth()

    Gphi = solver.dn_apply(geometry, state.phi)
    eta_x = spectral_derivative(state.eta)
    phi_x = spectral_derivative(state.phi)

    eta_t = Gphi
    phi_t = -g * state.eta - 0.5 * phi_x ** 2 + (Gphi + phi_x * eta_x) ** 2 / (2 * (1 + eta_x ** 2))

    return eta_t, phi_t


def b_and_v(state, Gphi):
    """B = (eta_x phi_x - G phi) / (1 + eta_x^2) and V = phi_x - B phi_x, as printed."""

    Gphi = np.asarray(Gphi, dtype=float)
    if Gphi.shape != state.eta.shape:
        raise PreconditionError("G phi must be sampled on the surface grid.")

    eta_x = spectral_derivative(state.eta)
    phi_x = spectral_derivative(state.phi)

    B = (eta_x * phi_x - Gphi) / (1 + eta_x ** 2)
    return B, phi_x - B * phi_x


def v_standard(state, B):
    """The horizontal velocity at the surface, phi_x - B eta_x."""
    return spectral_derivative(state.phi) - B * spectral_derivative(state.eta)


def total_energy(state, base, g, solver = None):
    """1/2 int phi G phi + g/2 int eta^2 over one period."""

    if solver is None:
        solver = DirichletNeumannSolver()

    Gphi = solver.dn_apply(base.geometry(state.eta), state.phi)
    dx = 2 * np.pi / state.nx

    return float(0.5 * dx * np.sum(state.phi * Gphi) + 0.5 * g * dx * np.sum(state.eta ** 2))


def window_mask(nx, window):
    """Grid points of [a, b] on the circle; the window may wrap around 2pi."""

    a, b = float(window[0]), float(window[1])
    if not a < b:
        raise PreconditionError("Window must satisfy a < b.")
    if b - a >= 2 * np.pi:
        return np.ones(nx, dtype=bool)

    mask = np.mod(periodic_grid(nx) - a, 2 * np.pi) <= b - a
    if not np.any(mask):
        raise PreconditionError(f"Window [{a}, {b}] holds no grid points at nx={nx}.")
    return mask


def window_activity(state, window):
    """max(|eta|, |phi_x|) over the grid points of the window."""

    mask = window_mask(state.nx, window)
    phi_x = spectral_derivative(state.phi)
    return float(max(np.max(np.abs(state.eta[mask])), np.max(np.abs(phi_x[mask]))))


def at_rest(state, window, tol):
    return window_activity(state, window) <= tol


def rk4_step(state, rate, dt):

    k1 = rate(state)
    k2 = rate(state.combined(*k1, dt / 2))
    k3 = rate(state.combined(*k2, dt / 2))
    k4 = rate(state.combined(*k3, dt))

    eta_rate = (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]) / 6
    phi_rate = (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1]) / 6

    return state.combined(eta_rate, phi_rate, dt)


def linear_frequency(k, H, g):
    return float(np.sqrt(g * k * np.tanh(k * H)))


def mode_amplitude(eta, k):
    """Cosine coefficient of mode k in eta."""
    x = periodic_grid(len(eta))
    return float(2 / len(eta) * np.sum(eta * np.cos(k * x)))


def fit_frequency(times, signal):
    """Angular frequency from the zero crossings of a sampled sinusoid.

    Consecutive crossings are half a period apart; each crossing time is linearly
    interpolated between the samples that bracket it.
    """

    times = np.asarray(times, dtype=float)
    signal = np.asarray(signal, dtype=float)

    sign_change = np.nonzero(signal[:-1] * signal[1:] < 0)[0]
    if len(sign_change) < 4:
        raise FitError(f"Found {len(sign_change)} zero crossings; fewer than 2 periods were simulated.")

    t0, t1 = times[sign_change], times[sign_change + 1]
    s0, s1 = signal[sign_change], signal[sign_change + 1]
    crossings = t0 - s0 * (t1 - t0) / (s1 - s0)

    fitted = float(np.pi * (len(crossings) - 1) / (crossings[-1] - crossings[0]))
    periods = (times[-1] - times[0]) * fitted / (2 * np.pi)
    if periods < 2:
        raise FitError(f"Only {periods:.2f} periods were simulated; at least 2 are needed.")

    return fitted


def linear_dispersion_check(k, H, g, steps, dt, amplitude = 1e-6, nx = 96, nz = 32, show_progress = False):
    """Fitted frequency of mode k of eta, started from (eps cos kx, 0) over a flat bottom."""

    if not 0 < amplitude <= MAX_LINEAR_AMPLITUDE:
        raise PreconditionError(f"Amplitude must lie in (0, {MAX_LINEAR_AMPLITUDE}] for a linear check.")
    if k < 1 or 2 * k >= nx / 3:
        raise PreconditionError(f"Wavenumber {k} is not resolved by nx={nx}.")

    expected = linear_frequency(k, H, g)
    if dt * expected > MAX_PHASE_STEP:
        raise PreconditionError(f"dt * omega = {dt * expected:.3f} exceeds {MAX_PHASE_STEP}.")

    base = FluidBase(H, nx, nz=nz)
    solver = DirichletNeumannSolver()
    rate = lambda s: zcs_rhs(s, base, g, solver)

    x = periodic_grid(nx)
    state = SurfaceState(amplitude * np.cos(k * x), np.zeros(nx))

    times = [0.0]
    signal = [mode_amplitude(state.eta, k)]
    for n in tqdm(range(steps), ascii=True, desc="ZCS k=" + str(k), disable=not show_progress):
        state = rk4_step(state, rate, dt)
        times.append((n + 1) * dt)
        signal.append(mode_amplitude(state.eta, k))

    fitted = fit_frequency(times, signal)
    logger.info("Fitted omega %.8f against %.8f for k=%d H=%g g=%g.", fitted, expected, k, H, g)

    return fitted


def bump_state(nx, center, width, amplitude):
    """eta = amplitude * exp(-1 / (1 - s^2)) for |s| < 1, s the periodic distance to
    center over width; phi = 0. Smooth and exactly zero outside the bump."""

    x = periodic_grid(nx)
    s = (np.mod(x - center + np.pi, 2 * np.pi) - np.pi) / width
    eta = np.zeros(nx)
    inside = np.abs(s) < 1
    eta[inside] = amplitude * np.exp(-1 / (1 - s[inside] ** 2))
    return SurfaceState(eta, np.zeros(nx))


class ProbeResult:

    def __init__(self, times, activity, energy, tol, first_exceed, final_state):
        self.times = times
        self.activity = activity
        self.energy = energy
        self.tol = tol
        self.first_exceed = first_exceed
        self.final_state = final_state

    def rows(self):
        return [[t, a, e] for t, a, e in zip(self.times, self.activity, self.energy)]

    def ever_active(self):
        return any(a > 0 for a in self.activity)


def rest_propagation_probe(state0, base, window, g, T, dt, tol, solver = None, show_progress = False):
    """Evolve a state at rest on the window and record when the window wakes up."""

    if not (T > 0 and dt > 0):
        raise PreconditionError("Probe needs T > 0 and dt > 0.")
    if not at_rest(state0, window, tol):
        raise PreconditionError("The initial state is not at rest on the window.")

    if solver is None:
        solver = DirichletNeumannSolver()

    rate = lambda s: zcs_rhs(s, base, g, solver)
    steps = int(np.ceil(T / dt - 1e-9))
    initial_norm = state0.sup_norm()

    state = state0
    times, activity, energy = [], [], []
    first_exceed = None

    for n in tqdm(range(steps + 1), ascii=True, desc="Rest probe", disable=not show_progress):
        t = n * dt
        times.append(t)
        activity.append(window_activity(state, window))
        energy.append(total_energy(state, base, g, solver))

        if first_exceed is None and activity[-1] > tol:
            first_exceed = t
            logger.info("Window activity %.3e exceeds %.3e at t = %g.", activity[-1], tol, t)

        if n == steps:
            break

        state = rk4_step(state, rate, dt)
        state = SurfaceState(dealias(state.eta), dealias(state.phi))

        if initial_norm > 0 and state.sup_norm() > GROWTH_LIMIT * initial_norm:
            raise InstabilityError(f"Sup norm grew past {GROWTH_LIMIT}x its initial value at t = {t + dt:g}", residual=state.sup_norm())

    return ProbeResult(times, activity, energy, tol, first_exceed, state)
