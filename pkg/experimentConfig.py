import re
import math
try:
    import tomllib
except ModuleNotFoundError:
    import tomli as tomllib
from typing import ClassVar, List, Literal, Optional, Tuple

from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from dispersionRelation import DispersionRelation
from frameBounds import SpaceTimeDomain
from labErrors import ConfigError

COMMANDS = ["dispersion-check", "solve", "lattice-count", "frame-bounds", "certificate", "dn", "zcs-dispersion", "rest-probe"]

# Parameters each dispersion family takes; every one of them is required.
FAMILY_PARAMETERS = {
    "power": ["p"],
    "transport": ["c"],
    "schrodinger": [],
    "kdv_linear": [],
    "gravity_capillary": ["g", "S", "H"]
}


class StrictModel(BaseModel):
    model_config = ConfigDict(extra="forbid")


class RelationSpec(StrictModel):
    name: Literal["power", "transport", "schrodinger", "kdv_linear", "gravity_capillary"]
    label: Optional[str] = None
    p: Optional[float] = None
    c: Optional[float] = None
    g: Optional[float] = None
    S: Optional[float] = None
    H: Optional[float] = None

    @model_validator(mode="after")
    def check_parameters(self):
        wanted = FAMILY_PARAMETERS[self.name]
        for key in wanted:
            if getattr(self, key) is None:
                raise ValueError(f"missing key '{key}' for relation '{self.name}'")
        for key in ["p", "c", "g", "S", "H"]:
            if key not in wanted and getattr(self, key) is not None:
                raise ValueError(f"key '{key}' does not apply to relation '{self.name}'")

        # Parameter ranges are checked by the relation itself.
        self.build()
        return self

    def build(self):
        return DispersionRelation.from_table(self.model_dump(exclude_none=True))

    def display_name(self):
        return self.label if self.label is not None else self.name


class RectSpec(StrictModel):
    x0: float
    x1: float
    t0: float
    t1: float

    @model_validator(mode="after")
    def check_order(self):
        if not self.x0 < self.x1:
            raise ValueError(f"rectangle needs x0 < x1, got x0={self.x0}, x1={self.x1}")
        if not self.t0 < self.t1:
            raise ValueError(f"rectangle needs t0 < t1, got t0={self.t0}, t1={self.t1}")
        return self


class DomainSpec(StrictModel):
    t_max: float = Field(gt=0)
    full: bool = False
    rect: List[RectSpec] = []

    @model_validator(mode="after")
    def check_rectangles(self):
        if self.full and len(self.rect) > 0:
            raise ValueError("a full domain takes no [[domain.rect]] tables")
        if not self.full and len(self.rect) == 0:
            raise ValueError("domain needs at least one [[domain.rect]] or full = true")
        self.build()
        return self

    def build(self):
        if self.full:
            return SpaceTimeDomain.full(self.t_max)
        return SpaceTimeDomain([(r.x0, r.x1, r.t0, r.t1) for r in self.rect], self.t_max)


# Command sections

class DispersionCheckSection(StrictModel):
    k_max: float = Field(1024.0, ge=64)
    k_samples: Optional[List[float]] = None
    order_m: Optional[float] = Field(None, gt=0)


class DispersionCheckChecks(StrictModel):
    verdicts: Optional[List[Literal["SUPERLINEAR", "NOT_SUPERLINEAR", "INCONCLUSIVE"]]] = None
    dispersive: Optional[List[bool]] = None
    symbol_constant: Optional[float] = Field(None, gt=0)


class SolveSection(StrictModel):
    N: int = Field(ge=0)
    t: float
    seed: int = 0
    nx: Optional[int] = Field(None, ge=1)
    nt: int = Field(1, ge=1)


class SolveChecks(StrictModel):
    unitarity: Optional[float] = Field(None, gt=0)


class LatticeSection(StrictModel):
    N: Optional[int] = Field(None, ge=1)
    radii: List[float] = []
    annulus_x: List[float] = []
    annulus_r: float = Field(1.0, gt=0)

    @model_validator(mode="after")
    def check_curve(self):
        if len(self.radii) > 0 and self.N is None:
            raise ValueError("missing key 'N' needed for the radii")
        if any(r <= 0 for r in self.radii):
            raise ValueError("radii must be positive")
        if any(b <= a for a, b in zip(self.radii, self.radii[1:])):
            raise ValueError("radii must be strictly increasing")
        if self.N is not None and len(self.radii) > 0 and max(self.radii) > self.N / 4:
            raise ValueError(f"largest radius exceeds N/4 = {self.N / 4}")
        if any(x <= self.annulus_r for x in self.annulus_x):
            raise ValueError("every annulus_x must exceed annulus_r")
        return self


class LatticeChecks(StrictModel):
    verdicts: Optional[List[Literal["PASS", "FAIL", "INCONCLUSIVE"]]] = None
    floor_ratio: Optional[float] = Field(None, gt=0)
    floor_tolerance: float = Field(0.05, gt=0)
    annulus_limit: Optional[float] = Field(None, gt=0)
    annulus_monotone: bool = False
    annulus_bound: bool = False


class FrameBoundsSection(StrictModel):
    N: int = Field(ge=0)
    samples: int = Field(0, ge=0)
    seed: int = 0
    quadrature_samples: int = Field(0, ge=0)
    quadrature_resolution: int = Field(512, ge=16)


class FrameBoundsChecks(StrictModel):
    orthogonality: Optional[float] = Field(None, gt=0)
    bounds: Optional[float] = Field(None, gt=0)
    sandwich: bool = False
    quadrature: Optional[float] = Field(None, gt=0)


class CertificateSection(StrictModel):
    N_list: List[int] = Field(min_length=1)
    witness_N: Optional[int] = Field(None, ge=0)
    witness: Optional[List[str]] = None

    @model_validator(mode="after")
    def check_increasing(self):
        if any(n < 0 for n in self.N_list):
            raise ValueError("N_list entries must be non-negative")
        if any(b <= a for a, b in zip(self.N_list, self.N_list[1:])):
            raise ValueError("N_list must be strictly increasing")
        return self


class CertificateChecks(StrictModel):
    interlacing: Optional[float] = Field(None, ge=0)
    contrast: Optional[float] = Field(None, ge=1)
    witness_mass: Optional[float] = Field(None, gt=0)


class DnSection(StrictModel):
    grids: List[int] = Field(min_length=1)
    H: float = Field(gt=0)
    k: int = Field(1, ge=1)
    deep_H: float = Field(8.0, gt=0)
    deep_k: int = Field(1, ge=1)
    modulation: float = Field(0.1, ge=0, lt=0.5)
    structure_n: int = Field(128, ge=8)
    random_samples: int = Field(50, ge=1)
    seed: int = 0

    @model_validator(mode="after")
    def check_grids(self):
        if any(n < 8 for n in self.grids):
            raise ValueError("every grid needs n >= 8")
        if any(b <= a for a, b in zip(self.grids, self.grids[1:])):
            raise ValueError("grids must be strictly increasing")
        if 2 * self.k >= self.grids[0] / 2:
            raise ValueError(f"k={self.k} is not resolved by the coarsest grid")
        return self


class DnChecks(StrictModel):
    order: Optional[Tuple[float, float]] = None
    max_error: Optional[float] = Field(None, gt=0)
    deep_error: Optional[float] = Field(None, gt=0)
    self_adjoint_flat: Optional[float] = Field(None, gt=0)
    self_adjoint_variable: Optional[float] = Field(None, gt=0)
    kernel: Optional[float] = Field(None, gt=0)
    positivity: Optional[float] = Field(None, gt=0)


class ZcsSection(StrictModel):
    k: int = Field(1, ge=1)
    H: float = Field(gt=0)
    g: List[float] = Field(min_length=1)
    amplitude: float = Field(1e-6, gt=0, le=1e-6)
    dt: Optional[float] = Field(None, gt=0)
    periods: float = Field(2.2, ge=2)
    nx: int = Field(96, ge=8)
    nz: int = Field(32, ge=8)

    @model_validator(mode="after")
    def check_gravity(self):
        if any(g <= 0 for g in self.g):
            raise ValueError("every g must be positive")
        return self


class ZcsChecks(StrictModel):
    relative_error: Optional[float] = Field(None, gt=0)
    sqrt_g_scaling: Optional[float] = Field(None, gt=0)


class RestProbeSection(StrictModel):
    nx: int = Field(64, ge=8)
    nz: int = Field(24, ge=8)
    H: float = Field(1.0, gt=0)
    g: float = Field(1.0, gt=0)
    T: float = Field(gt=0)
    dt: float = Field(gt=0)
    window: Tuple[float, float]
    initial: Literal["zero", "bump", "cosine"] = "zero"
    amplitude: float = Field(1e-3, ge=0)
    bump_center: float = math.pi
    bump_width: float = Field(0.5, gt=0, lt=math.pi)
    tol_factor: float = Field(1e-12, ge=0)

    @model_validator(mode="after")
    def check_window(self):
        if not self.window[0] < self.window[1]:
            raise ValueError("window must satisfy a < b")
        return self


class RestProbeChecks(StrictModel):
    silent: bool = False
    wakes: bool = False


class ExperimentConfig(StrictModel):
    """Fields common to every command; one subclass per command adds its section."""

    relation_use: ClassVar[str] = "none"
    domain_use: ClassVar[str] = "none"

    command: str
    output: Optional[str] = None
    relation: List[RelationSpec] = []
    domain: Optional[DomainSpec] = None

    @model_validator(mode="after")
    def check_inputs(self):
        if self.relation_use == "required" and len(self.relation) == 0:
            raise ValueError(f"command '{self.command}' needs at least one [[relation]]")
        if self.relation_use == "none" and len(self.relation) > 0:
            raise ValueError(f"command '{self.command}' takes no [[relation]]")
        if self.domain_use == "required" and self.domain is None:
            raise ValueError(f"command '{self.command}' needs a [domain]")
        if self.domain_use == "none" and self.domain is not None:
            raise ValueError(f"command '{self.command}' takes no [domain]")

        names = [r.display_name() for r in self.relation]
        if len(set(names)) != len(names):
            raise ValueError("relations must have distinct names; set label to tell them apart")

        self.check_lists()
        return self

    def check_lists(self):
        pass

    def relations(self):
        return [r.build() for r in self.relation]

    def section(self):
        return getattr(self, self.command.replace("-", "_"))

    def echo(self):
        return self.model_dump(by_alias=True, exclude_none=True)

    def _check_list_length(self, values, key):
        if values is not None and len(values) != len(self.relation):
            raise ValueError(f"checks.{key} needs one entry per relation ({len(self.relation)})")


class DispersionCheckConfig(ExperimentConfig):
    relation_use: ClassVar[str] = "required"
    command: Literal["dispersion-check"]
    dispersion_check: DispersionCheckSection = Field(DispersionCheckSection(), alias="dispersion-check")
    checks: DispersionCheckChecks = DispersionCheckChecks()

    def check_lists(self):
        self._check_list_length(self.checks.verdicts, "verdicts")
        self._check_list_length(self.checks.dispersive, "dispersive")


class SolveConfig(ExperimentConfig):
    relation_use: ClassVar[str] = "required"
    command: Literal["solve"]
    solve: SolveSection
    checks: SolveChecks = SolveChecks()


class LatticeCountConfig(ExperimentConfig):
    relation_use: ClassVar[str] = "optional"
    command: Literal["lattice-count"]
    lattice_count: LatticeSection = Field(alias="lattice-count")
    checks: LatticeChecks = LatticeChecks()

    def check_lists(self):
        section = self.lattice_count
        if len(section.radii) > 0 and len(self.relation) == 0:
            raise ValueError("radii need at least one [[relation]]")
        if self.checks.annulus_bound and (len(self.relation) == 0 or section.N is None):
            raise ValueError("checks.annulus_bound needs a [[relation]] and N")
        if (self.checks.annulus_limit is not None or self.checks.annulus_monotone) and len(section.annulus_x) == 0:
            raise ValueError("annulus checks need annulus_x")
        self._check_list_length(self.checks.verdicts, "verdicts")


class FrameBoundsConfig(ExperimentConfig):
    relation_use: ClassVar[str] = "required"
    domain_use: ClassVar[str] = "required"
    command: Literal["frame-bounds"]
    frame_bounds: FrameBoundsSection = Field(alias="frame-bounds")
    checks: FrameBoundsChecks = FrameBoundsChecks()

    def check_lists(self):
        if self.checks.sandwich and self.frame_bounds.samples == 0:
            raise ValueError("checks.sandwich needs samples > 0")
        if self.checks.quadrature is not None and self.frame_bounds.quadrature_samples == 0:
            raise ValueError("checks.quadrature needs quadrature_samples > 0")


class CertificateConfig(ExperimentConfig):
    relation_use: ClassVar[str] = "required"
    domain_use: ClassVar[str] = "required"
    command: Literal["certificate"]
    certificate: CertificateSection
    checks: CertificateChecks = CertificateChecks()

    def check_lists(self):
        if self.checks.contrast is not None and len(self.relation) != 2:
            raise ValueError("checks.contrast compares exactly two relations")
        if self.checks.witness_mass is not None and self.certificate.witness_N is None:
            raise ValueError("checks.witness_mass needs witness_N")
        names = [r.display_name() for r in self.relation]
        for name in self.certificate.witness or []:
            if name not in names:
                raise ValueError(f"witness names unknown relation '{name}'")


class DnConfig(ExperimentConfig):
    command: Literal["dn"]
    dn: DnSection
    checks: DnChecks = DnChecks()

    def check_lists(self):
        if self.checks.order is not None and len(self.dn.grids) < 2:
            raise ValueError("checks.order needs at least two grids")


class ZcsDispersionConfig(ExperimentConfig):
    command: Literal["zcs-dispersion"]
    zcs_dispersion: ZcsSection = Field(alias="zcs-dispersion")
    checks: ZcsChecks = ZcsChecks()

    def check_lists(self):
        if self.checks.sqrt_g_scaling is not None and len(self.zcs_dispersion.g) < 2:
            raise ValueError("checks.sqrt_g_scaling needs at least two values of g")


class RestProbeConfig(ExperimentConfig):
    command: Literal["rest-probe"]
    rest_probe: RestProbeSection = Field(alias="rest-probe")
    checks: RestProbeChecks = RestProbeChecks()


CONFIG_MODELS = {
    "dispersion-check": DispersionCheckConfig,
    "solve": SolveConfig,
    "lattice-count": LatticeCountConfig,
    "frame-bounds": FrameBoundsConfig,
    "certificate": CertificateConfig,
    "dn": DnConfig,
    "zcs-dispersion": ZcsDispersionConfig,
    "rest-probe": RestProbeConfig
}


def key_lines(text):
    """Source line of every table header and key, keyed by its pydantic location.

    [[name]] headers are numbered in order of appearance so that ("relation", 1, "H")
    finds the H key of the second [[relation]] table.
    """

    lines = {}
    counters = {}
    table = ()

    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#")[0].strip()
        if len(line) == 0:
            continue

        if line.startswith("[["):
            name = tuple(part.strip() for part in line.strip("[]").split("."))
            counters[name] = counters.get(name, -1) + 1
            table = name + (counters[name],)
            lines[table] = number
        elif line.startswith("["):
            table = tuple(part.strip() for part in line.strip("[]").split("."))
            lines[table] = number
        elif "=" in line:
            key = line.split("=")[0].strip().strip('"')
            lines[table + (key,)] = number

    return lines


def _locate(loc, lines):
    loc = tuple(loc)
    while len(loc) > 0:
        if loc in lines:
            return lines[loc]
        loc = loc[:-1]
    return None


def _describe(error):
    loc = ".".join(str(part) for part in error["loc"])
    kind = error["type"]

    if kind == "missing":
        return f"missing key '{loc}'"
    if kind == "extra_forbidden":
        return f"unknown key '{loc}'"

    message = error["msg"].removeprefix("Value error, ")
    return message if len(loc) == 0 else f"{loc}: {message}"


def parse_config(text):
    """A validated ExperimentConfig subclass, or ConfigError listing every issue with its line."""

    try:
        data = tomllib.loads(text)
    except tomllib.TOMLDecodeError as e:
        match = re.search(r"line (\d+)", str(e))
        raise ConfigError([(int(match.group(1)) if match else None, "invalid TOML: " + str(e))])

    lines = key_lines(text)

    command = data.get("command")
    if command not in COMMANDS:
        message = "missing key 'command'" if command is None else f"unknown command '{command}'; expected one of {', '.join(COMMANDS)}"
        raise ConfigError([(lines.get(("command",)), message)])

    try:
        return CONFIG_MODELS[command].model_validate(data)
    except ValidationError as e:
        raise ConfigError([(_locate(error["loc"], lines), _describe(error)) for error in e.errors()])


def load_config(path):
    with open(path, "r", encoding="utf-8") as file:
        return parse_config(file.read())
