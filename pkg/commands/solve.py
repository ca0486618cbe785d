from checkResult import CheckResult
from spectralSolver import FourierState, GridSpec, SpectralSolver


class SolveCommand:
    """Evolves one random state under every relation and measures the L2 drift."""

    def run(self, config, writer, timer, workers = 1, show_progress = False):

        section = config.solve
        g = FourierState.random(section.N, section.seed)
        before = g.l2_norm()

        checks = []
        summary = {}
        rows = []

        writer.write_ndjson("initial_state.ndjson", [g.to_record()])

        for rel in config.relations():

            evolved = SpectralSolver.evolve(g, rel, section.t)
            after = evolved.l2_norm()
            drift = abs(after - before) / before if before > 0 else 0.0

            rows.append([rel.name, section.N, section.t, before, after, drift])
            summary[rel.name] = {"drift": drift}
            writer.write_ndjson("state_" + rel.name + ".ndjson", [evolved.to_record()])

            if section.nx is not None:
                grid = GridSpec(section.nx, section.nt, 0.0, section.t)
                writer.write_csv("samples_" + rel.name + ".csv", ["x", "t", "re", "im"], SpectralSolver.sample_rows(g, rel, grid))

            if config.checks.unitarity is not None:
                checks.append(CheckResult.at_most("unitarity " + rel.name, drift, config.checks.unitarity))

        timer.time("Spectral evolution")

        writer.write_csv("unitarity.csv", ["relation", "N", "t", "l2_before", "l2_after", "relative_drift"], rows)

        return checks, summary
