import numpy as np

from checkResult import CheckResult
from dnOperator import DirichletNeumannSolver, dn_flat_symbol
from fluidGeometry import FluidGeometry, periodic_grid


def grid_inner(f, g):
    return float(2 * np.pi / len(f) * np.sum(f * g))


def symbol_error(solver, H, n, k, target):
    """max |G cos(kx) - target cos(kx)| on the flat n x n grid."""

    geometry = FluidGeometry.flat(H, n, n)
    phi = np.cos(k * periodic_grid(n))
    return float(np.max(np.abs(solver.dn_apply(geometry, phi) - target * phi)))


def modulated_geometry(H, n, modulation):
    """Surface and bottom each move the depth by modulation * H / 2."""

    x = periodic_grid(n)
    eta = 0.5 * modulation * H * np.cos(x)
    b = 0.5 * modulation * H * np.sin(2 * x)
    return FluidGeometry(H, eta, b, n)


def asymmetry(solver, geometry):

    x = geometry.x()
    phi = np.cos(x) + 0.5 * np.sin(2 * x) + 0.25 * np.cos(3 * x)
    psi = 0.8 * np.cos(x) - np.sin(2 * x) + 0.5 * np.sin(3 * x)

    left = grid_inner(solver.dn_apply(geometry, phi), psi)
    right = grid_inner(phi, solver.dn_apply(geometry, psi))
    return abs(left - right) / max(abs(left), abs(right))


def smallest_rayleigh_quotient(solver, geometry, samples, seed):
    """min <G phi, phi> / <phi, phi> over random smooth phi.

    The samples are restricted to the span of the modes 1..8 with standard normal
    coefficients divided by the mode number. The mean spans the kernel and is left
    out, and higher modes are not sampled.
    """

    rng = np.random.default_rng(seed)
    x = geometry.x()
    modes = np.arange(1, 9)

    smallest = float("inf")
    for _ in range(samples):
        a, b = rng.standard_normal(len(modes)), rng.standard_normal(len(modes))
        phi = (np.cos(np.outer(x, modes)) @ (a / modes)) + (np.sin(np.outer(x, modes)) @ (b / modes))
        smallest = min(smallest, grid_inner(solver.dn_apply(geometry, phi), phi) / grid_inner(phi, phi))
    return smallest


class DnCheckCommand:
    """Grid convergence of the DN operator against its flat symbol, and its structure."""

    def run(self, config, writer, timer, workers = 1, show_progress = False):

        section = config.dn
        expected = config.checks
        solver = DirichletNeumannSolver()

        checks = []
        summary = {}

        symbol = dn_flat_symbol(section.k, section.H)
        errors = [symbol_error(solver, section.H, n, section.k, symbol) for n in section.grids]
        ratios = [None] + [a / b for a, b in zip(errors, errors[1:])]
        timer.time("DN convergence")

        writer.write_csv("dn_convergence.csv", ["n", "k", "H", "symbol", "error", "ratio"],
                         [[n, section.k, section.H, symbol, e, q] for n, e, q in zip(section.grids, errors, ratios)])
        summary["errors"] = errors

        if expected.order is not None:
            low, high = expected.order
            for n, q in zip(section.grids[1:], ratios[1:]):
                checks.append(CheckResult(f"convergence ratio n={n}", low <= q <= high, q, [low, high]))
        if expected.max_error is not None:
            checks.append(CheckResult.at_most("symbol error", errors[-1], expected.max_error))
        if expected.deep_error is not None:
            deep = symbol_error(solver, section.deep_H, section.grids[-1], section.deep_k, float(section.deep_k))
            summary["deep_error"] = deep
            checks.append(CheckResult.at_most("infinite-depth limit", deep, expected.deep_error))

        structure = [expected.self_adjoint_flat, expected.self_adjoint_variable, expected.kernel, expected.positivity]
        if all(v is None for v in structure):
            return checks, summary

        n = section.structure_n
        flat = FluidGeometry.flat(section.H, n, n)
        variable = modulated_geometry(section.H, n, section.modulation)

        values = {
            "self_adjoint_flat": asymmetry(solver, flat),
            "self_adjoint_variable": asymmetry(solver, variable),
            "kernel": float(np.max(np.abs(solver.dn_apply(variable, np.ones(n))))),
            "positivity": smallest_rayleigh_quotient(solver, variable, section.random_samples, section.seed)
        }
        timer.time("DN structure")

        writer.write_csv("dn_structure.csv", ["quantity", "n", "value"], [[key, n, value] for key, value in values.items()])
        summary.update(values)

        for key in ["self_adjoint_flat", "self_adjoint_variable", "kernel"]:
            threshold = getattr(expected, key)
            if threshold is not None:
                checks.append(CheckResult.at_most(key.replace("_", " "), values[key], threshold))
        if expected.positivity is not None:
            checks.append(CheckResult("positivity", values["positivity"] >= -expected.positivity, values["positivity"], -expected.positivity))

        return checks, summary
