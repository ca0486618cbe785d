import numpy as np
from scipy.optimize import brentq

from labErrors import LabDomainError, PreconditionError

# |k| up to this value must evaluate to a finite frequency.
WORKING_RANGE = 1e6

FAMILIES = ["power", "transport", "schrodinger", "kdv_linear", "gravity_capillary"]

SUPERLINEAR = "SUPERLINEAR"
NOT_SUPERLINEAR = "NOT_SUPERLINEAR"
INCONCLUSIVE = "INCONCLUSIVE"


class DispersionRelation:
    """A named real symbol omega(k) of the multiplier equation u_t = -i omega(D) u.

    The symbol is evaluated for real (not only integer) k so that annulus geometry
    and mean-value arguments can use it; integer restriction happens in the lattice.
    """

    def __init__(self, family, name = None, p = None, c = None, g = None, S = None, H = None):

        if family not in FAMILIES:
            raise ValueError("Unknown dispersion family: " + str(family))

        self.family = family
        self.name = name if name is not None else family
        self.params = {}

        if family == "power":
            if p is None or not p > 0:
                raise ValueError("power family needs an exponent p > 0.")
            self.params["p"] = float(p)
            self.order_m = float(p)
        elif family == "transport":
            if c is None:
                raise ValueError("transport family needs a speed c.")
            self.params["c"] = float(c)
            self.order_m = 1.0
        elif family == "schrodinger":
            self.order_m = 2.0
        elif family == "kdv_linear":
            self.order_m = 3.0
        else:
            if g is None or S is None or H is None:
                raise ValueError("gravity_capillary family needs g, S and H.")
            if g < 0 or S < 0:
                raise ValueError("gravity_capillary needs g >= 0 and S >= 0.")
            if not H > 0:
                raise ValueError("gravity_capillary needs a positive depth H.")
            if not g + S > 0:
                raise ValueError("gravity_capillary needs g + S > 0.")
            self.params.update(g=float(g), S=float(S), H=float(H))
            self.order_m = 1.5 if S > 0 else 0.5

    @staticmethod
    def from_table(table):
        """Builds a relation from a mapping such as {"name": "transport", "c": 1.0}."""
        table = dict(table)
        family = table.pop("name")
        label = table.pop("label", None)
        return DispersionRelation(family, name=label, **table)

    def to_json(self):
        data = {"name": self.name, "family": self.family, "order_m": self.order_m}
        data.update(self.params)
        return data

    def __str__(self):
        if len(self.params) == 0:
            return self.name
        return self.name + "(" + ", ".join(f"{k}={v:g}" for k, v in self.params.items()) + ")"

    def omega(self, k):
        """omega(k) for scalar or array k. gravity_capillary is extended to k < 0 by
        odd reflection, so the radicand is always evaluated at |k|."""

        k = np.asarray(k, dtype=float)
        family = self.family

        if family == "power":
            value = np.abs(k) ** self.params["p"]
        elif family == "transport":
            value = self.params["c"] * k
        elif family == "schrodinger":
            value = k * k
        elif family == "kdv_linear":
            value = -k * k * k
        else:
            value = self._gravity_capillary(k)

        return value if value.ndim > 0 else float(value)

    def _gravity_capillary(self, k):
        g, S, H = self.params["g"], self.params["S"], self.params["H"]
        a = np.abs(k)
        radicand = (g * a + S * a ** 3) * np.tanh(a * H)

        if np.any(radicand < 0):
            raise LabDomainError(f"Negative gravity-capillary radicand for {self}; check g, S and H.")

        return np.sign(k) * np.sqrt(radicand)

    def derivative(self, k, n):
        """n-th derivative (n = 1 or 2). Closed forms for the polynomial families,
        central differences with step max(1e-5, 1e-5 |k|) for gravity_capillary."""

        if n not in (1, 2):
            raise PreconditionError("Only first and second derivatives are available.")

        k = np.asarray(k, dtype=float)
        family = self.family

        if family == "gravity_capillary":
            h = np.maximum(1e-5, 1e-5 * np.abs(k))
            if n == 1:
                value = (self.omega(k + h) - self.omega(k - h)) / (2 * h)
            else:
                value = (self.omega(k + h) - 2 * self.omega(k) + self.omega(k - h)) / (h * h)
        elif family == "transport":
            value = self.params["c"] * np.ones_like(k) if n == 1 else np.zeros_like(k)
        elif family == "schrodinger":
            value = 2 * k if n == 1 else 2 * np.ones_like(k)
        elif family == "kdv_linear":
            value = -3 * k * k if n == 1 else -6 * k
        else:
            value = self._power_derivative(k, n)

        value = np.asarray(value, dtype=float)
        return value if value.ndim > 0 else float(value)

    def _power_derivative(self, k, n):
        p = self.params["p"]
        a = np.abs(k)
        coefficient = p if n == 1 else p * (p - 1)

        with np.errstate(divide="ignore", invalid="ignore"):
            value = coefficient * a ** (p - n)
            if n == 1:
                value = value * np.sign(k)

        # At k = 0 the derivative is 0 when p > n, a constant when p == n and
        # unbounded below that.
        if p > n:
            at_zero = 0.0
        elif p == n:
            at_zero = coefficient
        else:
            at_zero = np.inf
        return np.where(a == 0, at_zero, value)

    def phase_velocity(self, k):
        k = np.asarray(k, dtype=float)
        if np.any(k == 0):
            raise LabDomainError("Phase velocity is undefined at k = 0.")
        value = self.omega(k) / k
        return value


def check_superlinear(rel, k_max):
    """Dyadic test of |omega(k)|/|k| -> infinity, see SuperlinearityReport."""

    if k_max < 2 ** 6:
        raise PreconditionError("check_superlinear needs k_max >= 2^6.")

    exponents = np.arange(0, int(np.floor(np.log2(k_max))) + 1)
    ks = 2.0 ** exponents
    ratios_plus = np.abs(rel.omega(ks)) / ks
    ratios_minus = np.abs(rel.omega(-ks)) / ks

    return SuperlinearityReport(rel, exponents, ratios_plus, ratios_minus)


class SuperlinearityReport:

    def __init__(self, rel, exponents, ratios_plus, ratios_minus):
        self.relation = rel
        self.exponents = exponents
        self.ratios_plus = ratios_plus
        self.ratios_minus = ratios_minus
        self.verdict = self._classify()

    @staticmethod
    def _growing(ratios):
        tail = ratios[-5:]
        return bool(np.all(np.diff(tail) > 0)) and ratios[0] > 0 and ratios[-1] / ratios[0] > 10

    @staticmethod
    def _bounded(ratios):
        tail = ratios[-5:]
        return bool(np.all(tail <= 1.01 * tail[0]))

    def _classify(self):
        signs = [self.ratios_plus, self.ratios_minus]
        if all(self._growing(r) for r in signs):
            return SUPERLINEAR
        if all(self._bounded(r) for r in signs):
            return NOT_SUPERLINEAR
        return INCONCLUSIVE

    def rows(self):
        return [[int(j), 2.0 ** j, a, b] for j, a, b in zip(self.exponents, self.ratios_plus, self.ratios_minus)]


def symbol_bound_ratios(rel, order_m, k_samples):
    """|d^n omega(k)| / (1 + k^2)^((m - n)/2) for n = 0, 1, 2, one row per n."""

    k = np.asarray(k_samples, dtype=float)
    rows = []
    for n in range(3):
        value = rel.omega(k) if n == 0 else rel.derivative(k, n)
        weight = (1 + k * k) ** ((order_m - n) / 2)
        rows.append(np.abs(np.atleast_1d(value)) / np.atleast_1d(weight))
    return rows


def check_symbol_bound(rel, order_m, C, k_samples):

    if not C > 0:
        raise PreconditionError("The symbol constant C must be positive.")

    return all(bool(np.all(r <= C)) for r in symbol_bound_ratios(rel, order_m, k_samples))


def smallest_symbol_constants(rel, order_m, k_samples):
    """Smallest C_n, n = 0, 1, 2, for which the symbol bound holds on the samples."""
    return [float(np.max(r)) for r in symbol_bound_ratios(rel, order_m, k_samples)]


def check_dispersive(rel, k_samples):
    """omega is real by construction; dispersive additionally needs omega'' != 0."""

    k = np.asarray(k_samples, dtype=float)
    k = k[k != 0]
    second = np.atleast_1d(rel.derivative(k, 2))
    return bool(np.all(np.isfinite(second)) and np.all(second != 0))


def inverse_on_positive_axis(rel, y):
    """The k >= 0 with |omega(k)| = y. Needs |omega| increasing on k > 0."""

    if y < 0:
        raise LabDomainError("Cannot invert |omega| at a negative value.")
    if y == 0:
        return 0.0

    f = lambda k: abs(rel.omega(k)) - y
    upper = 1.0
    while f(upper) < 0:
        upper *= 2
        if upper > WORKING_RANGE:
            raise LabDomainError(f"|omega| of {rel} does not reach {y} inside the working range.")

    return brentq(f, 0.0, upper, xtol=1e-12, rtol=1e-14)


if __name__ == "__main__":

    import argparse
    from tabulate import tabulate

    parser = argparse.ArgumentParser()
    parser.add_argument('--family', type=str, default="schrodinger", choices=FAMILIES, help="Dispersion family to inspect.")
    parser.add_argument('--p', type=float, default=None, help="Exponent for the power family.")
    parser.add_argument('--c', type=float, default=None, help="Speed for the transport family.")
    parser.add_argument('--g', type=float, default=None, help="Gravity for gravity_capillary.")
    parser.add_argument('--S', type=float, default=None, help="Surface tension for gravity_capillary.")
    parser.add_argument('--H', type=float, default=None, help="Depth for gravity_capillary.")
    parser.add_argument('--k-max', type=float, default=2 ** 10, help="Largest dyadic sample.")
    args = parser.parse_args()

    rel = DispersionRelation(args.family, p=args.p, c=args.c, g=args.g, S=args.S, H=args.H)
    report = check_superlinear(rel, args.k_max)

    print(tabulate(report.rows(), headers=["j", "k", "|w(k)|/k", "|w(-k)|/k"]))
    print("Verdict:", report.verdict)
