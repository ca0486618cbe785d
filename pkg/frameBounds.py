import logging
import numpy as np
import scipy.linalg
from tqdm import tqdm

from frequencyLattice import FrequencyLattice
from labErrors import NumericalError, PreconditionError
from spectralSolver import FourierState, SpectralSolver

logger = logging.getLogger(__name__)

# Below this value of |a| (beta - alpha) the interval integral uses its Taylor series.
SERIES_THRESHOLD = 1e-6

# d_minus below CLAMP_FRACTION * domain_area is reported as zero.
CLAMP_FRACTION = 1e-10


class SpaceTimeDomain:
    """A finite union of closed rectangles [x0, x1] x [t0, t1] inside (0, 2pi) x (0, t_max)
    that overlap at most along their boundaries."""

    def __init__(self, rects, t_max):

        if not t_max > 0:
            raise PreconditionError("The ambient time window must have t_max > 0.")
        if len(rects) == 0:
            raise PreconditionError("A space-time domain needs at least one rectangle.")

        self.t_max = float(t_max)
        self.rects = [tuple(float(v) for v in rect) for rect in rects]

        for i, (x0, x1, t0, t1) in enumerate(self.rects):
            if not (x0 < x1 and t0 < t1):
                raise PreconditionError(f"Rectangle {i} is degenerate: needs x0 < x1 and t0 < t1.")
            if x0 < 0 or x1 > 2 * np.pi or t0 < 0 or t1 > self.t_max:
                raise PreconditionError(f"Rectangle {i} leaves the ambient box (0, 2pi) x (0, {self.t_max}).")

        for i in range(len(self.rects)):
            for j in range(i + 1, len(self.rects)):
                if SpaceTimeDomain._overlap(self.rects[i], self.rects[j]) > 0:
                    raise PreconditionError(f"Rectangles {i} and {j} overlap.")

    @staticmethod
    def full(t_max):
        return SpaceTimeDomain([(0.0, 2 * np.pi, 0.0, t_max)], t_max)

    @staticmethod
    def _overlap(a, b):
        width = min(a[1], b[1]) - max(a[0], b[0])
        height = min(a[3], b[3]) - max(a[2], b[2])
        return max(0.0, width) * max(0.0, height)

    def area(self):
        total = 0.0
        for x0, x1, t0, t1 in self.rects:
            total += (x1 - x0) * (t1 - t0)
        return total

    def time_shifted(self, s):
        return SpaceTimeDomain([(x0, x1, t0 + s, t1 + s) for x0, x1, t0, t1 in self.rects], self.t_max + max(s, 0.0))

    def to_json(self):
        return {"t_max": self.t_max, "rects": [list(r) for r in self.rects]}


def interval_integral(a, alpha, beta):
    """I(a; alpha, beta) = integral of e^{ias} over [alpha, beta], elementwise in a."""

    a = np.asarray(a, dtype=float)
    length = beta - alpha
    z = a * length

    small = np.abs(z) < SERIES_THRESHOLD
    safe_a = np.where(small, 1.0, a)

    direct = (np.exp(1j * safe_a * beta) - np.exp(1j * safe_a * alpha)) / (1j * safe_a)
    # e^{ia alpha} L (1 + iz/2 - z^2/6 - iz^3/24)
    series = np.exp(1j * a * alpha) * length * (1 + 1j * z / 2 - z * z / 6 - 1j * z ** 3 / 24)

    return np.where(small, series, direct)


class GramMatrix:

    def __init__(self, entries, domain_area, truncation_N):
        self.entries = entries
        self.domain_area = domain_area
        self.truncation_N = truncation_N
        self.dim = entries.shape[0]

    def submatrix(self, truncation_N):
        """The Gram matrix of the nested lattice |k| <= truncation_N."""

        if truncation_N > self.truncation_N:
            raise PreconditionError("Cannot extract a larger truncation from a Gram matrix.")

        offset = self.truncation_N - truncation_N
        block = self.entries[offset:offset + 2 * truncation_N + 1, offset:offset + 2 * truncation_N + 1]
        return GramMatrix(block.copy(), self.domain_area, truncation_N)


def _rect_block(x_diff, t_diff, rect):
    x0, x1, t0, t1 = rect
    return interval_integral(x_diff, x0, x1) * interval_integral(t_diff, t0, t1)


def gram_matrix(lat, dom):
    """entry(m, n) = integral over dom of e^{i((m-n)x - (omega(m)-omega(n))t)}.

    Rows and columns are indexed by k + N. Each rectangle contributes a product of
    two closed-form interval integrals; the lower triangle is the conjugate mirror
    of the upper one and the diagonal is the domain area.
    """

    ks = lat.points[:, 0]
    frequencies = lat.sign_convention * lat.points[:, 1]

    x_diff = ks[:, None] - ks[None, :]
    t_diff = -(frequencies[:, None] - frequencies[None, :])

    entries = np.zeros(x_diff.shape, dtype=complex)
    for rect in dom.rects:
        entries = entries + _rect_block(x_diff, t_diff, rect)

    area = dom.area()
    upper = np.triu(entries, 1)
    entries = upper + upper.conj().T + area * np.eye(len(ks))

    return GramMatrix(entries, area, lat.truncation_N)


class FrameBounds:

    def __init__(self, d_minus_raw, d_plus, domain_area, truncation_N):
        self.d_minus_raw = float(d_minus_raw)
        self.d_plus = float(d_plus)
        self.domain_area = float(domain_area)
        self.truncation_N = truncation_N

        self.d_minus = 0.0 if self.d_minus_raw < CLAMP_FRACTION * domain_area else self.d_minus_raw

    def row(self):
        return [self.truncation_N, self.d_minus_raw, self.d_minus, self.d_plus, self.domain_area]


def _eigh(G, **kwargs):
    try:
        return scipy.linalg.eigh(G.entries, **kwargs)
    except (np.linalg.LinAlgError, ValueError) as e:
        raise NumericalError(f"Hermitian eigensolve failed for dim {G.dim}: {e}", residual=float("nan"))


def frame_bounds(G):
    """Extreme eigenvalues d_minus <= d_plus of the Gram matrix."""

    eigenvalues = _eigh(G, eigvals_only=True)
    d_minus_raw, d_plus = eigenvalues[0], eigenvalues[-1]

    if d_minus_raw < -CLAMP_FRACTION * G.domain_area:
        raise NumericalError(f"Gram matrix is not positive semidefinite at N={G.truncation_N}", residual=-d_minus_raw)
    if d_minus_raw < CLAMP_FRACTION * G.domain_area:
        logger.debug("d_minus = %.3e at N=%d is numerically zero; clamped.", d_minus_raw, G.truncation_N)

    return FrameBounds(d_minus_raw, d_plus, G.domain_area, G.truncation_N)


def restricted_mass(g, rel, dom):
    """Integral of |u|^2 over dom for u(x, t) = sum_k g_k e^{i(kx - omega(k)t)}.

    With G(m, n) built from e^{i(theta_m - theta_n)}, the mass is the quadratic form
    of G in the conjugated coefficients: conj(a)^* G conj(a) = a^T G conj(a).
    """

    G = gram_matrix(FrequencyLattice(rel, g.truncation_N), dom)
    a = g.coeffs
    return float(np.real(a @ G.entries @ a.conj()))


def midpoint_mass(g, rel, dom, resolution = 512):
    """Composite-midpoint quadrature of |u|^2 over dom, resolution^2 cells per rectangle."""

    total = 0.0
    for x0, x1, t0, t1 in dom.rects:
        hx = (x1 - x0) / resolution
        ht = (t1 - t0) / resolution
        xs = x0 + hx * (np.arange(resolution) + 0.5)
        ts = t0 + ht * (np.arange(resolution) + 0.5)
        for t in ts:
            values = SpectralSolver.evaluate_solution(g, rel, np.column_stack([xs, np.full(resolution, t)]))
            total += float(np.sum(np.abs(values) ** 2)) * hx * ht
    return total


def ucp_certificate(rel, dom, N_list, show_progress = False):
    """FrameBounds for each truncation in N_list, from nested lattices.

    A positive d_minus(N) certifies that no nonzero solution truncated at N vanishes
    on dom. Interlacing makes the d_minus column non-increasing.
    """

    N_list = [int(n) for n in N_list]
    if any(b <= a for a, b in zip(N_list, N_list[1:])):
        raise PreconditionError("N_list must be strictly increasing.")

    largest = gram_matrix(FrequencyLattice(rel, N_list[-1]), dom)

    rows = []
    for n in tqdm(N_list, ascii=True, desc="Certificate " + str(rel), disable=not show_progress):
        rows.append(frame_bounds(largest.submatrix(n)))

    return rows


def vanishing_witness(rel, dom, truncation_N):
    """The unit-norm state with the least restricted mass, and that mass."""

    if truncation_N < 0:
        raise PreconditionError("The truncation N must be non-negative.")

    G = gram_matrix(FrequencyLattice(rel, truncation_N), dom)
    eigenvalues, vectors = _eigh(G, subset_by_index=[0, 0])

    v = vectors[:, 0]
    residual = np.linalg.norm(G.entries @ v - eigenvalues[0] * v)
    if residual > 1e-8 * max(abs(G.entries).max(), 1.0):
        raise NumericalError("Eigenvector residual too large for the vanishing witness", residual=residual)

    witness = FourierState(truncation_N, v.conj())
    return witness, restricted_mass(witness, rel, dom)
