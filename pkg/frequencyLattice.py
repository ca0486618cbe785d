import logging
import numpy as np
from scipy.optimize import brentq
from scipy.spatial import cKDTree
from tqdm import tqdm

from dispersionRelation import inverse_on_positive_axis
from labErrors import LabDomainError, PreconditionError

logger = logging.getLogger(__name__)

PASS = "PASS"
FAIL = "FAIL"
INCONCLUSIVE = "INCONCLUSIVE"

# Ball centers sit on a square grid with this step, relative to the radius.
CENTER_GRID_FRACTION = 0.25


class FrequencyLattice:
    """Lambda = {(k, s * omega(k)) : |k| <= N} with s = sign_convention (+1 or -1)."""

    def __init__(self, rel, truncation_N, sign_convention = 1):

        if truncation_N < 0:
            raise PreconditionError("The truncation N must be non-negative.")
        if sign_convention not in (1, -1):
            raise PreconditionError("sign_convention must be +1 or -1.")

        self.rel = rel
        self.truncation_N = int(truncation_N)
        self.sign_convention = sign_convention

        ks = np.arange(-self.truncation_N, self.truncation_N + 1)
        self.points = np.column_stack([ks.astype(float), sign_convention * np.atleast_1d(rel.omega(ks))])
        self.tree = cKDTree(self.points)

    def __len__(self):
        return len(self.points)

    def mirrored(self):
        return FrequencyLattice(self.rel, self.truncation_N, -self.sign_convention)

    def extent(self):
        """Half side of the smallest origin-centered square holding every point."""
        return float(np.max(np.abs(self.points)))

    def separation(self):
        """Exact minimum pairwise distance; at least 1 since the k are distinct integers."""

        if len(self) < 2:
            raise PreconditionError("Separation needs at least two lattice points.")

        distances, _ = self.tree.query(self.points, k=2)
        return float(np.min(distances[:, 1]))

    def count_in_ball(self, center, r):
        """Number of points at distance <= r from center."""

        if not r > 0:
            raise PreconditionError("Ball radius must be positive.")

        return int(self.tree.query_ball_point(np.asarray(center, dtype=float), r, return_length=True))

    def counting_function(self, r, X_max, workers = 1):
        """Largest ball count over far-field centers.

        Centers range over the grid (r/4) Z^2 inside [-X_max, X_max]^2 with |x| >= X_max/2.
        Only grid nodes within r of some lattice point can have a nonzero count, so those
        are the only centers that are enumerated.
        """

        if not r > 0:
            raise PreconditionError("Ball radius must be positive.")
        if X_max < self.extent():
            raise PreconditionError(f"X_max={X_max} does not cover the lattice extent {self.extent()}.")

        step = CENTER_GRID_FRACTION * r
        limit = int(np.floor(X_max / step))
        if limit < 1:
            raise PreconditionError(f"X_max={X_max} is too small to hold any far-field center at step {step}.")

        norms = np.hypot(self.points[:, 0], self.points[:, 1])
        near = self.points[norms >= X_max / 2 - r]
        if len(near) == 0:
            return 0

        span = int(np.ceil(r / step)) + 1
        offsets = np.arange(-span, span + 1)
        base = np.round(near / step).astype(np.int64)

        ix = base[:, 0][:, None, None] + offsets[None, :, None]
        iy = base[:, 1][:, None, None] + offsets[None, None, :]
        ix, iy = np.broadcast_arrays(ix, iy)

        nodes = np.unique(np.column_stack([ix.ravel(), iy.ravel()]), axis=0)
        nodes = nodes[(np.abs(nodes[:, 0]) <= limit) & (np.abs(nodes[:, 1]) <= limit)]

        centers = nodes * step
        centers = centers[np.hypot(centers[:, 0], centers[:, 1]) >= X_max / 2]
        if len(centers) == 0:
            return 0

        counts = self.tree.query_ball_point(centers, r, return_length=True, workers=workers)
        return int(np.max(counts))

    def annulus_count(self, x_abs, r):
        """Points of the k >= 0 half lattice with x_abs - r <= |lambda| <= x_abs + r."""

        if not 0 < r < x_abs:
            raise PreconditionError("Annulus needs 0 < r < x_abs.")

        half = self.points[self.points[:, 0] >= 0]
        norms = np.hypot(half[:, 0], half[:, 1])
        return int(np.count_nonzero((norms >= x_abs - r) & (norms <= x_abs + r)))


class CountingReport:

    def __init__(self, rel, truncation_N, radii, n_of_r, center_window):
        self.relation = rel
        self.truncation_N = truncation_N
        self.radii = [float(r) for r in radii]
        self.n_of_r = [int(n) for n in n_of_r]
        self.ratios = [n / r for n, r in zip(self.n_of_r, self.radii)]
        self.center_window = float(center_window)
        self.center_grid_fraction = CENTER_GRID_FRACTION
        # ball centers are searched on a grid of this spacing, one per radius
        self.center_grid_step = [CENTER_GRID_FRACTION * r for r in self.radii]
        self.verdict = self._classify()

    def _classify(self):
        ratios = self.ratios
        if len(ratios) < 2:
            return INCONCLUSIVE

        tail = ratios[-3:]
        first, last, previous = ratios[0], ratios[-1], ratios[-2]

        if all(b <= a for a, b in zip(tail, tail[1:])) and last < 0.5 * first:
            return PASS

        # Settled on a positive floor: the last step moves the ratio by at most 5%.
        # The smallest radius overshoots by the r/4 center quantization, so it is
        # not part of the stability test.
        if last > 0 and last >= 0.5 * first and abs(last - previous) <= 0.05 * previous:
            return FAIL

        return INCONCLUSIVE

    def rows(self):
        return [[r, n, q] for r, n, q in zip(self.radii, self.n_of_r, self.ratios)]

    def metadata(self):
        return {
            "relation": self.relation.to_json(),
            "N": self.truncation_N,
            "verdict": self.verdict,
            "center_window": self.center_window,
            "center_grid_step": self.center_grid_step
        }


def beurling_ratio_curve(rel, truncation_N, radii, workers = 1, show_progress = False):
    """N(r)/r at the given radii for the lattice of rel truncated at N."""

    radii = [float(r) for r in radii]
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise PreconditionError("Radii must be strictly increasing.")
    if max(radii) > truncation_N / 4:
        raise PreconditionError(f"Largest radius {max(radii)} exceeds N/4 = {truncation_N / 4}.")

    lattice = FrequencyLattice(rel, truncation_N)
    X_max = lattice.extent()

    counts = []
    for r in tqdm(radii, ascii=True, desc="Counting " + str(rel), disable=not show_progress):
        counts.append(lattice.counting_function(r, X_max, workers))
        logger.debug("N(%g) = %d for %s", r, counts[-1], rel)

    return CountingReport(rel, truncation_N, radii, counts, X_max)


def annulus_vertical_extent(x_abs, r, k):
    """d(k): vertical distance between the inner and outer circle of the annulus."""

    if not 0 < r < x_abs:
        raise PreconditionError("Annulus needs 0 < r < x_abs.")

    inner = (x_abs - r) ** 2 - k * k
    if np.any(inner < 0):
        raise LabDomainError("The vertical line at k misses the inner circle of the annulus.")

    return np.sqrt((x_abs + r) ** 2 - k * k) - np.sqrt(inner)


def max_vertical_extent(x_abs, r):
    """D: the longest vertical segment of the annulus above the diagonal y = k.

    D grows with x_abs and tends to sqrt(8) r.
    """

    if not 0 < r < x_abs:
        raise PreconditionError("Annulus needs 0 < r < x_abs.")

    half_inner = (x_abs - r) ** 2 / 2
    return float(np.sqrt((x_abs + r) ** 2 - half_inner) - np.sqrt(half_inner))


def graph_circle_crossing(rel, radius):
    """The k >= 0 where the graph of |omega| meets the circle of the given radius."""

    if not radius > 0:
        raise PreconditionError("Circle radius must be positive.")

    f = lambda k: np.hypot(k, abs(rel.omega(k))) - radius
    return brentq(f, 0.0, radius, xtol=1e-12, rtol=1e-14)


def annulus_count_bound(rel, x_abs, r):
    """1 + (k_+ - k_-), an upper bound on the half-lattice points in the annulus."""

    if not 0 < r < x_abs:
        raise PreconditionError("Annulus needs 0 < r < x_abs.")

    return 1 + graph_circle_crossing(rel, x_abs + r) - graph_circle_crossing(rel, x_abs - r)


def sublinearity_curve(rel, x_abs, radii):
    """omega^{-1}(|x| + r) / r for each radius; tends to 0 when omega is superlinear."""
    return [inverse_on_positive_axis(rel, x_abs + r) / r for r in radii]


if __name__ == "__main__":

    import argparse
    from tabulate import tabulate
    from dispersionRelation import DispersionRelation, FAMILIES

    parser = argparse.ArgumentParser()
    parser.add_argument('--family', type=str, default="schrodinger", choices=FAMILIES, help="Dispersion family of the lattice.")
    parser.add_argument('--c', type=float, default=None, help="Speed for the transport family.")
    parser.add_argument('--N', type=int, default=1024, help="Truncation of the lattice.")
    parser.add_argument('--radii', type=float, nargs='+', default=[10, 40, 160], help="Ball radii.")
    args = parser.parse_args()

    report = beurling_ratio_curve(DispersionRelation(args.family, c=args.c), args.N, args.radii, show_progress=True)
    print(tabulate(report.rows(), headers=["r", "N(r)", "N(r)/r"]))
    print("Verdict:", report.verdict)
