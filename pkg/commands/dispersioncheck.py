import numpy as np

from checkResult import CheckResult
from dispersionRelation import check_dispersive, check_superlinear, check_symbol_bound, smallest_symbol_constants


class DispersionCheckCommand:

    def run(self, config, writer, timer, workers = 1, show_progress = False):

        section = config.dispersion_check
        expected = config.checks

        checks = []
        summary = {}
        ratio_rows = []
        bound_rows = []

        for i, rel in enumerate(config.relations()):

            report = check_superlinear(rel, section.k_max)
            for row in report.rows():
                ratio_rows.append([rel.name] + row)

            if section.k_samples is not None:
                k_samples = np.asarray(section.k_samples, dtype=float)
            else:
                dyadic = 2.0 ** report.exponents
                k_samples = np.concatenate([-dyadic[::-1], dyadic])

            order_m = section.order_m if section.order_m is not None else rel.order_m
            constants = smallest_symbol_constants(rel, order_m, k_samples)
            dispersive = check_dispersive(rel, k_samples)

            bound_rows.append([rel.name, order_m] + constants + [dispersive, report.verdict])
            summary[rel.name] = {"verdict": report.verdict, "dispersive": dispersive, "symbol_constants": constants}

            if expected.verdicts is not None:
                checks.append(CheckResult.equals("superlinearity " + rel.name, report.verdict, expected.verdicts[i]))
            if expected.dispersive is not None:
                checks.append(CheckResult.equals("dispersive " + rel.name, dispersive, expected.dispersive[i]))
            if expected.symbol_constant is not None:
                passed = check_symbol_bound(rel, order_m, expected.symbol_constant, k_samples)
                checks.append(CheckResult("symbol bound " + rel.name, passed, max(constants), expected.symbol_constant))

        timer.time("Dispersion checks")

        writer.write_csv("superlinearity.csv", ["relation", "j", "k", "ratio_plus", "ratio_minus"], ratio_rows)
        writer.write_csv("symbol_bounds.csv", ["relation", "order_m", "C0", "C1", "C2", "dispersive", "verdict"], bound_rows)

        return checks, summary
