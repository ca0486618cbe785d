import logging
import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from fluidGeometry import spectral_derivative
from labErrors import NumericalError, PreconditionError

logger = logging.getLogger(__name__)

# Relative residual target of the direct solve, in units of max|phi|.
SOLVER_TOLERANCE = 1e-10

REFINEMENT_STEPS = 2


def dn_flat_symbol(k, H = None):
    """Fourier symbol of the DN operator for a flat surface over a flat bottom:
    |k| tanh(H|k|) at depth H, |k| in infinite depth (H None or inf)."""

    k = np.abs(np.asarray(k, dtype=float))
    if H is None or np.isinf(H):
        value = k
    else:
        if not H > 0:
            raise PreconditionError("Depth H must be positive.")
        value = k * np.tanh(H * k)
    return value if value.ndim > 0 else float(value)


class PotentialField:
    """Phi[i, j] at x_i and sigma_j; sigma = 0 is the bottom, sigma = 1 the surface."""

    def __init__(self, Phi, geometry, residual):
        self.Phi = Phi
        self.geometry = geometry
        self.residual = residual

    def z(self):
        geometry = self.geometry
        return geometry.bottom()[:, None] + geometry.sigma()[None, :] * geometry.depth()[:, None]

    def surface(self):
        return self.Phi[:, -1]

    def bottom(self):
        return self.Phi[:, 0]


class DirichletNeumannSolver:
    """Harmonic extension in the sigma-mapped strip and the DN map built on it.

    With sigma = (z - beta(x)) / h(x), beta the bottom and h the depth, the Laplacian
    becomes psi_xx + 2 s_x psi_xs + (s_x^2 + 1/h^2) psi_ss + s_xx psi_s, discretized
    with second-order central differences, periodic in x. The surface carries the
    Dirichlet data; the bottom row imposes the no-flux condition with a one-sided
    second-order difference in sigma. Rows are scaled to unit diagonal magnitude.

    The factorization of the last geometry is kept, so a solver instance is not
    shareable while solving; use clone() for independent workers.
    """

    def __init__(self):
        self._key = None
        self._matrix = None
        self._lu = None

    def clone(self):
        return DirichletNeumannSolver()

    @staticmethod
    def _index(i, j, nx):
        return j * nx + np.mod(i, nx)

    @staticmethod
    def assemble(geometry):

        nx, nz = geometry.nx, geometry.nz
        dx = 2 * np.pi / nx
        ds = 1.0 / (nz - 1)

        beta = geometry.bottom()
        h = geometry.depth()
        beta_x, beta_xx = spectral_derivative(beta, 1), spectral_derivative(beta, 2)
        h_x, h_xx = spectral_derivative(h, 1), spectral_derivative(h, 2)

        rows, cols, vals = [], [], []

        def add(r, c, v):
            rows.append(r)
            cols.append(c)
            vals.append(v)

        i = np.arange(nx)
        index = DirichletNeumannSolver._index

        # Interior sigma levels.
        for j in range(1, nz - 1):
            s = j * ds
            s_x = -(beta_x + s * h_x) / h
            s_xx = -(beta_xx + s * h_xx) / h - 2 * s_x * h_x / h

            c_xx = np.full(nx, 1 / dx ** 2)
            c_ss = (s_x ** 2 + 1 / h ** 2) / ds ** 2
            c_xs = s_x / (2 * dx * ds)
            c_s = s_xx / (2 * ds)
            scale = 1 / (2 * c_xx + 2 * c_ss)

            r = index(i, j, nx)
            add(r, r, -(2 * c_xx + 2 * c_ss) * scale)
            add(r, index(i + 1, j, nx), c_xx * scale)
            add(r, index(i - 1, j, nx), c_xx * scale)
            add(r, index(i, j + 1, nx), (c_ss + c_s) * scale)
            add(r, index(i, j - 1, nx), (c_ss - c_s) * scale)
            add(r, index(i + 1, j + 1, nx), c_xs * scale)
            add(r, index(i - 1, j - 1, nx), c_xs * scale)
            add(r, index(i + 1, j - 1, nx), -c_xs * scale)
            add(r, index(i - 1, j + 1, nx), -c_xs * scale)

        # Bottom: psi_s = h beta_x / (1 + beta_x^2) psi_x, times 2 ds.
        c_b = h * beta_x / (1 + beta_x ** 2) * ds / dx
        r = index(i, 0, nx)
        add(r, r, np.full(nx, -3.0))
        add(r, index(i, 1, nx), np.full(nx, 4.0))
        add(r, index(i, 2, nx), np.full(nx, -1.0))
        add(r, index(i + 1, 0, nx), -c_b)
        add(r, index(i - 1, 0, nx), c_b)

        # Surface: Dirichlet.
        r = index(i, nz - 1, nx)
        add(r, r, np.ones(nx))

        size = nx * nz
        matrix = sp.coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(size, size))
        return matrix.tocsc()

    def _factorize(self, geometry):

        key = geometry.key()
        if key == self._key:
            return

        self._matrix = DirichletNeumannSolver.assemble(geometry)
        try:
            self._lu = splu(self._matrix)
        except RuntimeError as e:
            self._key = None
            raise NumericalError(f"Singular sigma-coordinate system: {e}", residual=float("inf"))
        self._key = key

    def harmonic_extend(self, geometry, phi):
        """Phi with Phi = phi at the surface, no flux through the bottom, harmonic inside."""

        geometry.check_depth()
        phi = np.asarray(phi, dtype=float)
        if phi.shape != (geometry.nx,):
            raise PreconditionError("Surface potential must be sampled on the geometry grid.")

        self._factorize(geometry)

        nx, nz = geometry.nx, geometry.nz
        rhs = np.zeros(nx * nz)
        rhs[(nz - 1) * nx:] = phi

        solution = self._lu.solve(rhs)
        residual = self._residual(solution, rhs)
        tolerance = SOLVER_TOLERANCE * float(np.max(np.abs(phi)))

        for _ in range(REFINEMENT_STEPS):
            if residual <= tolerance:
                break
            solution = solution + self._lu.solve(rhs - self._matrix @ solution)
            residual = self._residual(solution, rhs)

        if not np.all(np.isfinite(solution)):
            raise NumericalError("Harmonic extension produced non-finite values", residual=residual)
        if residual > tolerance:
            logger.warning("Harmonic extension residual %.3e exceeds tolerance %.3e.", residual, tolerance)

        return PotentialField(solution.reshape(nz, nx).T, geometry, residual)

    def _residual(self, solution, rhs):
        return float(np.max(np.abs(self._matrix @ solution - rhs)))

    def dn_apply(self, geometry, phi):
        """G(eta, b) phi = sqrt(1 + eta_x^2) d_n Phi at the surface
        = -eta_x phi_x + (1 + eta_x^2) psi_s / h."""

        field = self.harmonic_extend(geometry, phi)
        return DirichletNeumannSolver.surface_flux(field)

    @staticmethod
    def surface_flux(field):

        geometry = field.geometry
        ds = 1.0 / (geometry.nz - 1)
        Phi = field.Phi

        psi_s = (3 * Phi[:, -1] - 4 * Phi[:, -2] + Phi[:, -3]) / (2 * ds)
        eta_x = spectral_derivative(geometry.eta)
        phi_x = spectral_derivative(Phi[:, -1])

        return -eta_x * phi_x + (1 + eta_x ** 2) * psi_s / geometry.depth()
