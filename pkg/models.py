import math
from enum import Enum
from typing import Dict, List, Literal, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

PARAMETER_NAMES = ("beta", "alpha", "rho", "kappa")


class StabilityClass(str, Enum):
    ASYMPTOTICALLY_STABLE = "AsymptoticallyStable"
    UNSTABLE = "Unstable"
    CRITICAL = "Critical"


class HopfClass(str, Enum):
    SUPERCRITICAL = "Supercritical"
    SUBCRITICAL = "Subcritical"
    DEGENERATE = "Degenerate"


class OrbitStability(str, Enum):
    ATTRACTING = "Attracting"
    REPELLING = "Repelling"
    INCONCLUSIVE = "Inconclusive"


class TerminationReason(str, Enum):
    TIME_END = "TimeEnd"
    DOMAIN_EXIT = "DomainExit"
    CONVERGED = "Converged"


class Direction(str, Enum):
    BELOW = "below"
    ABOVE = "above"


class FormulaId(str, Enum):
    R = "R"
    L1 = "l1"
    G1 = "G1"
    G2 = "G2"


class ScanFormula(str, Enum):
    G1 = "G1"
    G2 = "G2"
    L1_NUMERIC = "l1_numeric"
    L1_CLOSED = "l1_closed"


class DimensionlessParams(BaseModel):
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    beta: float = Field(..., gt=0.0, lt=1.0, description="Load to steam torque ratio F/mu")
    alpha: float = Field(..., gt=0.0, description="Engine gain")
    epsilon: float = Field(..., gt=0.0, description="Damping")
    rho: float = Field(0.0, ge=0.0, description="Geometry ratio L/l")
    kappa: float = Field(0.0, ge=0.0, lt=1.0, description="Spring ratio 2kl/(2kl+mg)")

    def with_epsilon(self, epsilon: float) -> "DimensionlessParams":
        return DimensionlessParams(**{**self.model_dump(), "epsilon": epsilon})

    def point(self) -> Tuple[float, float, float, float]:
        return self.beta, self.alpha, self.rho, self.kappa


class PhysicalParams(BaseModel):
    model_config = ConfigDict(frozen=True, allow_inf_nan=False)

    mass: float = Field(..., gt=0.0, description="Mass of each ball m (kg)")
    arm_length: float = Field(..., gt=0.0, description="Arm length l (m)")
    half_edge: float = Field(0.0, ge=0.0, description="Half horizontal edge L (m)")
    spring: float = Field(0.0, ge=0.0, description="Spring constant k (N/m)")
    friction: float = Field(..., gt=0.0, description="Friction coefficient b")
    gravity: float = Field(9.8, gt=0.0, description="Acceleration of gravity g (m/s^2)")
    gear_ratio: float = Field(..., gt=0.0, description="Transmission ratio c")
    torque_gain: float = Field(..., gt=0.0, description="Steam torque constant mu (N m)")
    inertia: float = Field(..., gt=0.0, description="Flywheel moment of inertia I (kg m^2)")
    load: float = Field(..., gt=0.0, description="Equivalent load torque F (N m)")

    @model_validator(mode="after")
    def check_load_below_torque(self):
        if self.load >= self.torque_gain:
            raise ValueError("load F must be smaller than torque_gain mu so that beta = F/mu < 1")
        return self


class State(BaseModel):
    model_config = ConfigDict(frozen=True)

    x: float = Field(..., description="Arm angle (rad)")
    y: float = Field(..., description="Scaled angular rate")
    z: float = Field(..., description="Scaled flywheel speed")

    @classmethod
    def from_array(cls, values) -> "State":
        return cls(x=float(values[0]), y=float(values[1]), z=float(values[2]))

    def as_array(self) -> np.ndarray:
        return np.array([self.x, self.y, self.z], dtype=float)

    @property
    def in_domain(self) -> bool:
        return 0.0 < self.x < math.pi / 2


class RescaledParams(BaseModel):
    params: DimensionlessParams
    time_constant: float = Field(..., description="T = ml/(2kl+mg)")
    time_factor: float = Field(..., description="t = time_factor * tau")
    y_factor: float = Field(..., description="y = y_factor * psi")
    z_factor: float = Field(..., description="z = z_factor * Omega")


class DerivedFrequencies(BaseModel):
    omega0: float = Field(..., gt=0.0)
    omega1: float = Field(..., gt=0.0)
    sigma: float = Field(..., gt=0.0)
    xi: float = Field(..., gt=0.0, description="Jacobian entry (2,3) at P0")


class CharPoly(BaseModel):
    p1: float
    p2: float
    p3: float


class StabilityVerdict(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    classification: StabilityClass
    eps_c: float
    margin: float
    roots: List[complex] = Field(default_factory=list)
    roots_agree: bool = True


class VyshnegradskiiReport(BaseModel):
    params: DimensionlessParams
    eta: float = Field(..., description="Dimensionless non-uniformity |dz0/dbeta|")
    eta_physical: float = Field(..., description="|dOmega0/dF| in physical units")
    criterion: float = Field(..., description="(b I / m) * eta_physical")
    stable: bool


class HopfFrame(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    params: DimensionlessParams
    A: np.ndarray
    omega0: float
    q: np.ndarray
    p: np.ndarray


class LyapunovReport(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    params: DimensionlessParams
    eps_c: float
    omega0: float
    g21: complex
    l1: float
    transversality: float
    classification: HopfClass
    cubic_part: float = Field(..., description="Re<p, C(q,q,qbar)>")
    h11_part: float = Field(..., description="Re<p, 2B(q,h11)>")
    h20_part: float = Field(..., description="Re<p, B(qbar,h20)>")
    h11: np.ndarray
    h20: np.ndarray
    h20_residual: float
    solvability_residual: float


class ClosedFormValue(BaseModel):
    value: float
    formula: FormulaId
    beta: float
    alpha: float
    rho: float = 0.0
    kappa: float = 0.0


class Trajectory(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    t: np.ndarray
    states: np.ndarray
    reason: TerminationReason

    @property
    def final_state(self) -> np.ndarray:
        return self.states[-1]


class PoincareSection(BaseModel):
    """Plane s[axis] = value crossed in the given direction; value None means through P0."""

    axis: Literal["x", "y", "z"] = "y"
    value: Optional[float] = None
    direction: Literal[1, -1] = 1

    @property
    def index(self) -> int:
        return "xyz".index(self.axis)


class OrbitReport(BaseModel):
    found: bool
    direction: Direction
    epsilon: float
    eps_c: float
    period: Optional[float] = None
    amplitude: Optional[float] = None
    predicted_amplitude: Optional[float] = None
    slope: Optional[float] = None
    residual: Optional[float] = None
    stability: OrbitStability = OrbitStability.INCONCLUSIVE
    returns_used: int = 0
    section_point: Optional[Tuple[float, float]] = None
    diagnostic: str = ""


class AmplitudeRow(BaseModel):
    delta: float
    amplitude: float
    period: float
    ratio_to_next: Optional[float] = None


class Axis(BaseModel):
    name: Literal["beta", "alpha", "rho", "kappa"]
    min: float
    max: float
    count: int = Field(..., ge=2)

    @model_validator(mode="after")
    def check_bounds(self):
        if not self.min < self.max:
            raise ValueError(f"axis {self.name}: min must be below max")
        return self

    def values(self) -> np.ndarray:
        return np.linspace(self.min, self.max, self.count)

    @property
    def step(self) -> float:
        return (self.max - self.min) / (self.count - 1)


class Grid(BaseModel):
    axes: List[Axis] = Field(..., min_length=2, max_length=3)
    fixed: Dict[str, float] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_admissible(self):
        names = [axis.name for axis in self.axes]
        if len(set(names)) != len(names):
            raise ValueError("grid axes must be distinct parameters")
        for name in PARAMETER_NAMES:
            if name not in names and name not in self.fixed:
                raise ValueError(f"parameter {name} is neither an axis nor fixed")
        for name in self.fixed:
            if name not in PARAMETER_NAMES or name in names:
                raise ValueError(f"fixed value for {name} is not allowed")
        for axis in self.axes:
            _check_range(axis.name, axis.min)
            _check_range(axis.name, axis.max)
        for name, value in self.fixed.items():
            _check_range(name, value)
        return self

    @property
    def shape(self) -> Tuple[int, ...]:
        return tuple(axis.count for axis in self.axes)

    def axis(self, name: str) -> Optional[Axis]:
        return next((axis for axis in self.axes if axis.name == name), None)

    def value_of(self, name: str) -> Optional[float]:
        """Fixed value of a parameter, or None when it is an axis."""
        return self.fixed.get(name)


def _check_range(name: str, value: float):
    bounds = {
        "beta": (lambda v: 0.0 < v < 1.0, "0 < beta < 1"),
        "alpha": (lambda v: v > 0.0, "alpha > 0"),
        "rho": (lambda v: v >= 0.0, "rho >= 0"),
        "kappa": (lambda v: 0.0 <= v < 1.0, "0 <= kappa < 1"),
    }
    check, text = bounds[name]
    if not (math.isfinite(value) and check(value)):
        raise ValueError(f"{name} = {value} outside admissible range {text}")


class ContourPolyline(BaseModel):
    slice_id: int
    polyline_id: int
    points: List[Tuple[float, float]]


class SignMap(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    grid: Grid
    formula: ScanFormula
    values: np.ndarray
    signs: np.ndarray
    contours: List[ContourPolyline] = Field(default_factory=list)

    @property
    def masked_count(self) -> int:
        return int(np.count_nonzero(~np.isfinite(self.values)))


class CrossScanReport(BaseModel):
    sample_count: int
    max_relative_discrepancy: float
    s1: Optional[int] = None
    s1_exceptions: int = 0
    s2: Optional[int] = None
    s2_exceptions: int = 0
    grid_sign_disagreements: int = 0
    grid_points_compared: int = 0
    agreement: Dict[str, bool] = Field(default_factory=dict)


class RunConfig(BaseModel):
    """Effective configuration of one CLI run; unknown keys are rejected."""

    model_config = ConfigDict(extra="forbid", allow_inf_nan=False)

    command: Optional[str] = None
    # parameter point
    beta: float = Field(0.5, gt=0.0, lt=1.0)
    alpha: float = Field(1.0, gt=0.0)
    epsilon: Optional[float] = Field(None, gt=0.0)
    epsilon_ratio: Optional[float] = Field(None, gt=0.0)
    rho: float = Field(0.0, ge=0.0)
    kappa: float = Field(0.0, ge=0.0, lt=1.0)
    # physical mode
    physical: bool = False
    mass: Optional[float] = Field(None, gt=0.0)
    arm_length: Optional[float] = Field(None, gt=0.0)
    half_edge: Optional[float] = Field(None, ge=0.0)
    spring: Optional[float] = Field(None, ge=0.0)
    friction: Optional[float] = Field(None, gt=0.0)
    gravity: Optional[float] = Field(None, gt=0.0)
    gear_ratio: Optional[float] = Field(None, gt=0.0)
    torque_gain: Optional[float] = Field(None, gt=0.0)
    inertia: Optional[float] = Field(None, gt=0.0)
    load: Optional[float] = Field(None, gt=0.0)
    # scan
    case: Literal["rho0", "kappa0", "general"] = "rho0"
    formula: Optional[ScanFormula] = None
    grid: str = Field("100x100", pattern=r"^\d+x\d+(x\d+)?$")
    beta_min: float = Field(0.01, gt=0.0, lt=1.0)
    beta_max: float = Field(0.99, gt=0.0, lt=1.0)
    alpha_min: float = Field(0.01, gt=0.0)
    alpha_max: float = Field(5.0, gt=0.0)
    rho_min: float = Field(0.0, ge=0.0)
    rho_max: float = Field(2.0, ge=0.0)
    kappa_min: float = Field(0.0, ge=0.0, lt=1.0)
    kappa_max: float = Field(0.99, ge=0.0, lt=1.0)
    sample_count: int = Field(200, ge=1)
    seed: int = 0
    # orbits
    t_end: float = Field(200.0, gt=0.0)
    rel_tol: float = Field(1e-10, ge=1e-12, le=1e-3)
    abs_tol: float = Field(1e-12, ge=1e-12, le=1e-3)
    direction: Optional[Direction] = None
    start_offset: float = Field(0.01, gt=0.0, lt=0.5, description="Trajectory start distance from P0 along x")
    scaling: bool = False
    # hopf
    degeneracy_tol: float = Field(1e-8, gt=0.0)
    # execution
    quick: bool = False
    workers: int = Field(1, ge=1)
    output_dir: str = "output"
    save: bool = False

    @field_validator("formula", mode="before")
    @classmethod
    def empty_formula(cls, value):
        return None if value == "" else value

    def grid_counts(self) -> List[int]:
        return [int(part) for part in self.grid.split("x")]

    def point(self, epsilon: float) -> DimensionlessParams:
        return DimensionlessParams(
            beta=self.beta, alpha=self.alpha, epsilon=epsilon, rho=self.rho, kappa=self.kappa
        )

    def physical_params(self) -> PhysicalParams:
        values = {
            name: getattr(self, name)
            for name in (
                "mass", "arm_length", "half_edge", "spring", "friction",
                "gravity", "gear_ratio", "torque_gain", "inertia", "load",
            )
            if getattr(self, name) is not None
        }
        return PhysicalParams(**values)


class CriterionResult(BaseModel):
    number: int
    name: str
    passed: bool
    skipped: bool = False
    seconds: float = 0.0
    details: Dict[str, object] = Field(default_factory=dict)
