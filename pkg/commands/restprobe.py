import numpy as np

from checkResult import CheckResult
from fluidGeometry import FluidBase, SurfaceState, periodic_grid
from waterWaves import bump_state, rest_propagation_probe


def initial_state(section):

    if section.initial == "zero":
        return SurfaceState.zeros(section.nx)
    if section.initial == "bump":
        return bump_state(section.nx, section.bump_center, section.bump_width, section.amplitude)

    return SurfaceState(section.amplitude * np.cos(periodic_grid(section.nx)), np.zeros(section.nx))


class RestProbeCommand:
    """Does a surface at rest on a window stay at rest? Illustrative only."""

    def run(self, config, writer, timer, workers = 1, show_progress = False):

        section = config.rest_probe
        expected = config.checks

        state0 = initial_state(section)
        tol = section.tol_factor * float(np.max(np.abs(state0.eta)))
        base = FluidBase(section.H, section.nx, nz=section.nz)

        writer.write_ndjson("initial_state.ndjson", [state0.to_record()])

        result = rest_propagation_probe(state0, base, section.window, section.g, section.T, section.dt, tol, show_progress=show_progress)
        timer.time("Rest probe")

        writer.write_csv("probe.csv", ["t", "activity", "total_energy"], result.rows())
        writer.write_ndjson("final_state.ndjson", [result.final_state.to_record()])

        checks = []
        if expected.silent:
            checks.append(CheckResult("silent window", not result.ever_active(), max(result.activity), 0.0))
        if expected.wakes:
            checks.append(CheckResult("window wakes up", result.first_exceed is not None, result.first_exceed, tol))

        return checks, {"tol": tol, "first_exceed": result.first_exceed}
