import numpy as np

from checkResult import CheckResult
from waterWaves import linear_dispersion_check, linear_frequency

# Default time step as a fraction of one radian of phase.
DEFAULT_PHASE_STEP = 0.04


class ZcsDispersionCommand:

    def run(self, config, writer, timer, workers = 1, show_progress = False):

        section = config.zcs_dispersion
        expected = config.checks

        checks = []
        rows = []
        fitted = []

        for g in section.g:
            target = linear_frequency(section.k, section.H, g)
            dt = section.dt if section.dt is not None else DEFAULT_PHASE_STEP / target
            steps = int(np.ceil(section.periods * 2 * np.pi / target / dt))

            omega = linear_dispersion_check(section.k, section.H, g, steps, dt, section.amplitude, section.nx, section.nz, show_progress)
            error = abs(omega - target) / target
            timer.time("ZCS integration")

            fitted.append(omega)
            rows.append([g, section.k, section.H, dt, steps, omega, target, error])

            if expected.relative_error is not None:
                checks.append(CheckResult.at_most(f"linear dispersion g={g:g}", error, expected.relative_error))

        if expected.sqrt_g_scaling is not None:
            for g, omega in zip(section.g[1:], fitted[1:]):
                scale = np.sqrt(g / section.g[0])
                deviation = abs(omega / fitted[0] - scale) / scale
                checks.append(CheckResult.at_most(f"sqrt(g) scaling g={g:g}", deviation, expected.sqrt_g_scaling))

        writer.write_csv("zcs_dispersion.csv", ["g", "k", "H", "dt", "steps", "fitted_omega", "linear_omega", "relative_error"], rows)

        return checks, {"fitted_omega": fitted}
