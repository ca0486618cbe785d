import json
import numpy as np

from labErrors import DepthError, PreconditionError


def periodic_grid(nx):
    return 2 * np.pi * np.arange(nx) / nx


def spectral_derivative(f, order = 1):
    """d^order f / dx^order for real samples on the periodic grid over [0, 2pi)."""

    f = np.asarray(f, dtype=float)
    n = len(f)
    multiplier = (1j * np.arange(n // 2 + 1)) ** order

    # The Nyquist mode of an even grid has no odd derivative.
    if n % 2 == 0 and order % 2 == 1:
        multiplier[-1] = 0

    return np.fft.irfft(np.fft.rfft(f) * multiplier, n)


def dealias(f):
    """Two-thirds rule: drop every mode with |k| > nx/3."""

    f = np.asarray(f, dtype=float)
    n = len(f)
    spectrum = np.fft.rfft(f)
    spectrum[np.arange(len(spectrum)) > n / 3] = 0
    return np.fft.irfft(spectrum, n)


class FluidGeometry:
    """Periodic strip -H0 + b(x) < z < eta(x) sampled on nx points, with nz sigma levels.

    The sigma coordinate maps z = bottom + sigma * depth, sigma in [0, 1], onto a rectangle.
    """

    def __init__(self, H0, eta, b = None, nz = 32, h_min = None):

        if not H0 > 0:
            raise PreconditionError("The mean depth H0 must be positive.")

        self.eta = np.asarray(eta, dtype=float)
        self.nx = len(self.eta)
        self.b = np.zeros(self.nx) if b is None else np.asarray(b, dtype=float)

        if self.b.shape != self.eta.shape:
            raise PreconditionError("Bottom and surface must be sampled on the same grid.")
        if nz < 8:
            raise PreconditionError("The vertical grid needs nz >= 8.")

        self.H0 = float(H0)
        self.nz = int(nz)
        self.h_min = 0.05 * self.H0 if h_min is None else float(h_min)

    @staticmethod
    def flat(H0, nx, nz = 32):
        return FluidGeometry(H0, np.zeros(nx), None, nz)

    def x(self):
        return periodic_grid(self.nx)

    def sigma(self):
        return np.linspace(0.0, 1.0, self.nz)

    def bottom(self):
        return -self.H0 + self.b

    def depth(self):
        return self.eta - self.bottom()

    def check_depth(self):
        """Positive depth everywhere (at least h_min) and a bottom strictly below z = 0."""

        if np.any(self.bottom() >= 0):
            raise DepthError("The bottom -H0 + b must stay below z = 0.")

        shallowest = float(np.min(self.depth()))
        if shallowest < self.h_min:
            raise DepthError(f"Water depth {shallowest:.3e} is below h_min = {self.h_min:.3e}.")

    def key(self):
        return (self.H0, self.nz, self.eta.tobytes(), self.b.tobytes())


class FluidBase:
    """The time-independent part of a fluid geometry: mean depth, bottom and grids."""

    def __init__(self, H0, nx, b = None, nz = 32, h_min = None):
        self.H0 = float(H0)
        self.nx = int(nx)
        self.b = np.zeros(self.nx) if b is None else np.asarray(b, dtype=float)
        self.nz = int(nz)
        self.h_min = h_min

    def geometry(self, eta):
        return FluidGeometry(self.H0, eta, self.b, self.nz, self.h_min)


class SurfaceState:
    """Surface elevation eta and surface potential phi on the periodic grid."""

    def __init__(self, eta, phi):

        self.eta = np.asarray(eta, dtype=float)
        self.phi = np.asarray(phi, dtype=float)

        if self.eta.shape != self.phi.shape or self.eta.ndim != 1:
            raise PreconditionError("eta and phi must be 1-D samples on the same grid.")
        if not (np.all(np.isfinite(self.eta)) and np.all(np.isfinite(self.phi))):
            raise PreconditionError("Surface samples must be finite.")

        self.nx = len(self.eta)

    @staticmethod
    def zeros(nx):
        return SurfaceState(np.zeros(nx), np.zeros(nx))

    def x(self):
        return periodic_grid(self.nx)

    def combined(self, eta_rate, phi_rate, dt):
        return SurfaceState(self.eta + dt * eta_rate, self.phi + dt * phi_rate)

    def sup_norm(self):
        return max(float(np.max(np.abs(self.eta))), float(np.max(np.abs(self.phi))))

    def to_record(self):
        return {"nx": self.nx, "eta": self.eta.tolist(), "phi": self.phi.tolist()}

    @staticmethod
    def from_record(record):
        state = SurfaceState(record["eta"], record["phi"])
        if state.nx != record["nx"]:
            raise PreconditionError("Surface record length does not match its nx.")
        return state

    def to_ndjson(self):
        return json.dumps(self.to_record())
