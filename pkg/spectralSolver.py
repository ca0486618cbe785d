import json
import numpy as np

from labErrors import AliasingError, PreconditionError


class FourierState:
    """Truncated coefficients g_k, k = -N..N, of u(x) = sum_k g_k e^{ikx}.

    Coefficient k is stored at position k + N.
    """

    def __init__(self, truncation_N, coeffs = None):

        if truncation_N < 0 or int(truncation_N) != truncation_N:
            raise PreconditionError("The truncation N must be a non-negative integer.")

        self.truncation_N = int(truncation_N)
        size = 2 * self.truncation_N + 1

        if coeffs is None:
            coeffs = np.zeros(size, dtype=complex)

        coeffs = np.array(coeffs, dtype=complex)
        if coeffs.shape != (size,):
            raise PreconditionError(f"Expected {size} coefficients for N={truncation_N}, got {coeffs.shape}.")
        if not np.all(np.isfinite(coeffs)):
            raise PreconditionError("Fourier coefficients must be finite.")

        self.coeffs = coeffs

    @staticmethod
    def delta(truncation_N, k, value = 1.0):
        state = FourierState(truncation_N)
        state.coeffs[state.index_of(k)] = value
        return state

    @staticmethod
    def random(truncation_N, seed = 0):
        rng = np.random.default_rng(seed)
        size = 2 * truncation_N + 1
        return FourierState(truncation_N, rng.standard_normal(size) + 1j * rng.standard_normal(size))

    def wavenumbers(self):
        return np.arange(-self.truncation_N, self.truncation_N + 1)

    def index_of(self, k):
        if abs(k) > self.truncation_N:
            raise PreconditionError(f"Wavenumber {k} is outside the truncation N={self.truncation_N}.")
        return int(k) + self.truncation_N

    def coefficient(self, k):
        return self.coeffs[self.index_of(k)]

    def l2_norm(self):
        # Parseval: the mass of u over a period is 2*pi times this squared.
        return float(np.sqrt(np.sum(np.abs(self.coeffs) ** 2)))

    def copy(self):
        return FourierState(self.truncation_N, self.coeffs.copy())

    def __add__(self, other):
        self._check_same_truncation(other)
        return FourierState(self.truncation_N, self.coeffs + other.coeffs)

    def __rmul__(self, scalar):
        return FourierState(self.truncation_N, scalar * self.coeffs)

    def _check_same_truncation(self, other):
        if other.truncation_N != self.truncation_N:
            raise PreconditionError("Fourier states have different truncations.")

    def to_record(self):
        return {"N": self.truncation_N, "re": self.coeffs.real.tolist(), "im": self.coeffs.imag.tolist()}

    @staticmethod
    def from_record(record):
        return FourierState(record["N"], np.asarray(record["re"]) + 1j * np.asarray(record["im"]))

    def to_ndjson(self):
        return json.dumps(self.to_record())

    @staticmethod
    def from_ndjson(line):
        return FourierState.from_record(json.loads(line))


class GridSpec:
    """nx equispaced points on [0, 2pi) and nt time samples on [t0, t1]."""

    def __init__(self, nx, nt = 1, t0 = 0.0, t1 = 0.0):

        if nx < 1 or nt < 1:
            raise PreconditionError("Grid sizes must be positive.")
        if t1 < t0:
            raise PreconditionError("The time window must satisfy t0 <= t1.")

        self.nx = int(nx)
        self.nt = int(nt)
        self.t0 = float(t0)
        self.t1 = float(t1)

    def x(self):
        return 2 * np.pi * np.arange(self.nx) / self.nx

    def t(self):
        return np.linspace(self.t0, self.t1, self.nt)

    def check_resolves(self, truncation_N):
        if self.nx < 2 * truncation_N + 1:
            raise AliasingError(f"nx={self.nx} aliases modes of truncation N={truncation_N}; need nx >= {2 * truncation_N + 1}.")


class SpectralSolver:
    """Exact evolution of u_t = -i omega(D) u in Fourier space. Time is a
    parameter: mode k simply picks up the phase e^{-i omega(k) t}."""

    @staticmethod
    def evolve(g, rel, t):
        if not np.isfinite(t):
            raise PreconditionError("Evolution time must be finite.")
        phases = np.exp(-1j * rel.omega(g.wavenumbers()) * t)
        return FourierState(g.truncation_N, g.coeffs * phases)

    @staticmethod
    def synthesize(state, grid):
        """u(x_j) = sum_k g_k e^{ik x_j} on the x-grid."""

        grid.check_resolves(state.truncation_N)

        spectrum = np.zeros(grid.nx, dtype=complex)
        spectrum[np.mod(state.wavenumbers(), grid.nx)] = state.coeffs

        return grid.nx * np.fft.ifft(spectrum)

    @staticmethod
    def analyze(samples, truncation_N):
        """Inverse of synthesize for samples on an equispaced grid over [0, 2pi)."""

        samples = np.asarray(samples, dtype=complex)
        GridSpec(len(samples)).check_resolves(truncation_N)

        spectrum = np.fft.fft(samples) / len(samples)
        ks = np.arange(-truncation_N, truncation_N + 1)

        return FourierState(truncation_N, spectrum[np.mod(ks, len(samples))])

    @staticmethod
    def synthesize_space_time(g, rel, grid):
        """Samples of u on the full (t, x) grid, shape (nt, nx)."""
        return np.array([SpectralSolver.synthesize(SpectralSolver.evolve(g, rel, t), grid) for t in grid.t()])

    @staticmethod
    def evaluate_solution(g, rel, points):
        """Direct summation of u(x, t) = sum_k g_k e^{i(kx - omega(k)t)} at (x, t) points."""

        points = np.atleast_2d(np.asarray(points, dtype=float))
        x = points[:, 0]
        t = points[:, 1]

        if np.any(t < 0):
            raise PreconditionError("Solution points must have t >= 0.")

        ks = g.wavenumbers()
        exponent = np.outer(x, ks) - np.outer(t, rel.omega(ks))

        return np.exp(1j * exponent) @ g.coeffs

    @staticmethod
    def sample_rows(g, rel, grid):
        """(x, t, re, im) rows for the CSV sample dump."""

        values = SpectralSolver.synthesize_space_time(g, rel, grid)
        x = grid.x()
        rows = []
        for i, t in enumerate(grid.t()):
            for j in range(grid.nx):
                rows.append([x[j], t, values[i, j].real, values[i, j].imag])
        return rows
