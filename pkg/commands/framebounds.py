import numpy as np

from checkResult import CheckResult
from frameBounds import frame_bounds, gram_matrix, midpoint_mass, restricted_mass
from frequencyLattice import FrequencyLattice
from spectralSolver import FourierState

# Eigensolver slack of the sandwich test, relative to d_plus * sum |a|^2.
SANDWICH_SLACK = 1e-10


class FrameBoundsCommand:

    def run(self, config, writer, timer, workers = 1, show_progress = False):

        section = config.frame_bounds
        expected = config.checks
        domain = config.domain.build()

        checks = []
        summary = {}
        bound_rows = []
        sandwich_rows = []

        for rel in config.relations():

            G = gram_matrix(FrequencyLattice(rel, section.N), domain)
            bounds = frame_bounds(G)
            timer.time("Gram assembly and eigensolve")

            bound_rows.append([rel.name] + bounds.row())
            summary[rel.name] = {"d_minus": bounds.d_minus, "d_plus": bounds.d_plus}

            if expected.orthogonality is not None:
                deviation = float(np.max(np.abs(G.entries - G.domain_area * np.eye(G.dim))))
                checks.append(CheckResult.at_most("orthogonality " + rel.name, deviation, expected.orthogonality))
            if expected.bounds is not None:
                deviation = max(abs(bounds.d_minus_raw - G.domain_area), abs(bounds.d_plus - G.domain_area))
                checks.append(CheckResult.at_most("frame bounds " + rel.name, deviation, expected.bounds))

            if section.samples > 0:
                worst, worst_quadrature = self.sandwich(rel, domain, bounds, section, rel.name, sandwich_rows)
                timer.time("Sandwich samples")

                if expected.sandwich:
                    checks.append(CheckResult("sandwich " + rel.name, worst >= 0, worst, 0.0))
                if expected.quadrature is not None:
                    checks.append(CheckResult.at_most("midpoint quadrature " + rel.name, worst_quadrature, expected.quadrature))

        writer.write_csv("frame_bounds.csv", ["relation", "N", "d_minus_raw", "d_minus", "d_plus", "domain_area"], bound_rows)
        if len(sandwich_rows) > 0:
            writer.write_csv("sandwich.csv", ["relation", "sample", "coefficient_energy", "lower", "mass", "upper", "midpoint_mass"], sandwich_rows)

        return checks, summary

    def sandwich(self, rel, domain, bounds, section, name, rows):
        """Smallest margin of d_minus |a|^2 <= mass <= d_plus |a|^2 over random states
        (negative means violated) and the largest relative midpoint deviation."""

        rng = np.random.default_rng(section.seed)
        size = 2 * section.N + 1

        worst = None
        worst_quadrature = 0.0

        for sample in range(section.samples):

            g = FourierState(section.N, rng.standard_normal(size) + 1j * rng.standard_normal(size))
            energy = g.l2_norm() ** 2
            mass = restricted_mass(g, rel, domain)

            lower = bounds.d_minus_raw * energy
            upper = bounds.d_plus * energy
            slack = SANDWICH_SLACK * upper
            margin = min(mass - lower + slack, upper - mass + slack)
            worst = margin if worst is None else min(worst, margin)

            quadrature = None
            if sample < section.quadrature_samples:
                quadrature = midpoint_mass(g, rel, domain, section.quadrature_resolution)
                worst_quadrature = max(worst_quadrature, abs(quadrature - mass) / mass)

            rows.append([name, sample, energy, lower, mass, upper, quadrature])

        return worst, worst_quadrature
