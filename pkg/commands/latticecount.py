import numpy as np

from checkResult import CheckResult
from frequencyLattice import FAIL, FrequencyLattice, annulus_count_bound, beurling_ratio_curve, max_vertical_extent, sublinearity_curve


class LatticeCountCommand:
    """Counting-function curves N(r)/r and the annulus geometry behind them."""

    def run(self, config, writer, timer, workers = 1, show_progress = False):

        section = config.lattice_count
        expected = config.checks
        relations = config.relations()

        checks = []
        summary = {}

        if len(section.radii) > 0:
            self.count(relations, section, expected, writer, workers, show_progress, checks, summary)
            timer.time("Lattice counting")

        if len(section.annulus_x) > 0:
            self.annulus(relations, section, expected, writer, checks, summary)
            timer.time("Annulus geometry")

        return checks, summary

    def count(self, relations, section, expected, writer, workers, show_progress, checks, summary):

        rows = []
        metadata = []
        for i, rel in enumerate(relations):

            report = beurling_ratio_curve(rel, section.N, section.radii, workers, show_progress)
            steps = report.center_grid_step
            for (r, n, q), step in zip(report.rows(), steps):
                rows.append([rel.name, r, n, q, step])

            summary[rel.name] = report.metadata()
            metadata.append(report.metadata())

            if expected.verdicts is not None:
                checks.append(CheckResult.equals("beurling " + rel.name, report.verdict, expected.verdicts[i]))

            settles = expected.verdicts[i] == FAIL if expected.verdicts is not None else True
            if expected.floor_ratio is not None and settles:
                deviation = abs(report.ratios[-1] - expected.floor_ratio) / expected.floor_ratio
                checks.append(CheckResult.at_most("ratio floor " + rel.name, deviation, expected.floor_tolerance))

        writer.write_csv("counting.csv", ["relation", "r", "N_r", "ratio", "center_grid_step"], rows)
        writer.write_ndjson("counting_metadata.ndjson", metadata)

    def annulus(self, relations, section, expected, writer, checks, summary):

        r = section.annulus_r
        extents = [max_vertical_extent(x, r) for x in section.annulus_x]
        limit = float(np.sqrt(8))

        writer.write_csv("annulus_extent.csv", ["x_abs", "r", "D", "D_over_r", "limit"],
                         [[x, r, d, d / r, limit] for x, d in zip(section.annulus_x, extents)])
        summary["annulus_extent"] = extents

        if expected.annulus_limit is not None:
            checks.append(CheckResult.at_most("annulus limit", abs(extents[-1] / r - limit), expected.annulus_limit))
        if expected.annulus_monotone:
            steps = np.diff(extents)
            checks.append(CheckResult("annulus monotone", bool(np.all(steps >= 0)), float(np.min(steps)) if len(steps) > 0 else 0.0, 0.0))

        if len(relations) == 0 or section.N is None:
            return

        count_rows = []
        sublinear_rows = []
        for rel in relations:
            lattice = FrequencyLattice(rel, section.N)
            worst = None
            for x in section.annulus_x:
                count = lattice.annulus_count(x, r)
                bound = annulus_count_bound(rel, x, r)
                count_rows.append([rel.name, x, r, count, bound])
                margin = bound - count
                worst = margin if worst is None else min(worst, margin)

                if len(section.radii) > 0:
                    for radius, ratio in zip(section.radii, sublinearity_curve(rel, x, section.radii)):
                        sublinear_rows.append([rel.name, x, radius, ratio])

            if expected.annulus_bound:
                checks.append(CheckResult("annulus bound " + rel.name, worst >= 0, worst, 0.0))

        writer.write_csv("annulus_count.csv", ["relation", "x_abs", "r", "count", "bound"], count_rows)
        if len(sublinear_rows) > 0:
            writer.write_csv("sublinearity.csv", ["relation", "x_abs", "r", "ratio"], sublinear_rows)
