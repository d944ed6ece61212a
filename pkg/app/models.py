"""Data models for run configuration and command results."""

from math import gcd
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from app.errors import ParameterError
from app.ncalgebra import AlgebraParams
from app.scalars import ScalarLiteral, parse_scalar
from app.settings import CENTER_DEG_CAP, SWEEP_GRID_MAX, SWEEP_WORKERS


class RunConfig(BaseModel):
    """Merged command-line flags and config file, validated before any computation."""

    m: int | None = Field(default=None, ge=1)
    n: int | None = Field(default=None, ge=1)
    k1: int = 1
    k2: int = 1
    family: Literal["V1", "V2", "V3"] | None = None
    mu: list[str] = Field(default_factory=list)
    lam: list[str] = Field(default_factory=list)
    deg_cap: int = Field(default=CENTER_DEG_CAP, ge=0)
    grid_max: int = Field(default=SWEEP_GRID_MAX, ge=2)
    format: Literal["text", "json"] = "json"
    out: str | None = None
    workers: int = Field(default=SWEEP_WORKERS, ge=1)
    action: Literal["build", "verify", "simple", "profile"] = "verify"
    grid: bool = False
    metadata: bool = False

    model_config = ConfigDict(
        extra="forbid",
        json_schema_extra={
            "example": {
                "m": 2,
                "n": 3,
                "k1": 1,
                "k2": 1,
                "family": "V3",
                "mu": ["1", "1"],
                "lam": ["1", "zeta(6)^1"],
                "format": "json",
            }
        },
    )

    @field_validator("mu", "lam")
    @classmethod
    def _literals_parse(cls, values: list[str]) -> list[str]:
        for text in values:
            parse_scalar(text)
        return values

    @model_validator(mode="after")
    def _coprime(self) -> "RunConfig":
        if self.m is not None and gcd(self.k1, self.m) != 1:
            raise ParameterError(f"k1 must be coprime to m (gcd(k1, m) = 1), got k1={self.k1}")
        if self.n is not None and gcd(self.k2, self.n) != 1:
            raise ParameterError(f"k2 must be coprime to n (gcd(k2, n) = 1), got k2={self.k2}")
        return self

    def algebra(self) -> AlgebraParams:
        if self.m is None or self.n is None:
            raise ParameterError("--m and --n are required for this command")
        return AlgebraParams(self.m, self.n, self.k1, self.k2)

    def mu_literals(self) -> list[ScalarLiteral]:
        return [parse_scalar(text) for text in self.mu]

    def lam_literals(self) -> list[ScalarLiteral]:
        return [parse_scalar(text) for text in self.lam]

    def require_family(self) -> str:
        if self.family is None:
            raise ParameterError("--family is required for this command")
        return self.family


class AlgebraSummary(BaseModel):
    m: int
    n: int
    k1: int
    k2: int
    field_order: int
    l: int  # noqa: E741
    s1: int
    s2: int
    alpha: str
    beta: str
    t1: int
    t2: int
    l1: int
    l2: int
    regime: str

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "m": 2, "n": 3, "k1": 1, "k2": 1, "field_order": 6, "l": 6, "s1": 3, "s2": 2,
                "alpha": "zeta(6)^3", "beta": "zeta(6)^2", "t1": 6, "t2": 6, "l1": 6, "l2": 6,
                "regime": "generic",
            }
        }
    )

    @classmethod
    def of(cls, p: AlgebraParams) -> "AlgebraSummary":
        return cls(
            m=p.m, n=p.n, k1=p.k1, k2=p.k2, field_order=p.field_order, l=p.l, s1=p.s1,
            s2=p.s2, alpha=str(p.alpha_root), beta=str(p.beta_root), t1=p.t1, t2=p.t2,
            l1=p.l1, l2=p.l2, regime=p.regime,
        )


class PiDegreeSummary(BaseModel):
    regime: str
    value: int
    snf: int | None
    closed: int
    special: int | None
    invariant_factors: list[int]

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "regime": "generic", "value": 36, "snf": 36, "closed": 36, "special": None,
                "invariant_factors": [1, 1, 5, 5],
            }
        }
    )


class PiDegreeReport(BaseModel):
    params: AlgebraSummary
    pideg: PiDegreeSummary
    swapped_pideg: int = Field(description="PI degree of M2(beta, alpha)")


class CenterSummary(BaseModel):
    hypothesis: bool
    generators: list[str]
    polynomial_algebra: bool

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "hypothesis": True,
                "generators": ["X11^6", "X12^6", "X21^6", "X22^6", "X11^6*X22^6", "X12^6*X21^6"],
                "polynomial_algebra": True,
            }
        }
    )


class CenterReport(BaseModel):
    params: AlgebraSummary
    deg_cap: int
    hypothesis: bool
    reason: str | None = None
    t: int | None = None
    generators: list[str]
    polynomial_algebra: bool
    dependency_relation: str | None = None
    lemma_solutions: list[list[int]]
    central_space_dim: int
    generated_span_dim: int | None = None
    brute_force_match: bool | None = None
    identity_failures: list[str]


class FamilyDimension(BaseModel):
    family: str
    dimension: int


class MaximalDimension(BaseModel):
    branch: Literal["proper-divisor", "non-divisor", "boundary"]
    l: int  # noqa: E741
    t1t2: int
    l_divides_t1t2: bool
    l_proper_divisor: bool


class MenuEntry(BaseModel):
    dimension: int
    condition: str


class TorsionMenu(BaseModel):
    family: str
    pideg: int
    dimensions: list[int]
    entries: list[MenuEntry]


class ClassificationReport(BaseModel):
    params: AlgebraSummary
    pideg: PiDegreeSummary
    center: CenterSummary
    families: list[FamilyDimension]
    simple_dimensions: list[int] | None = Field(
        default=None, description="Dimensions of all simple modules when alpha*beta = 1"
    )
    maximal_dimension: MaximalDimension
    torsion_menus: list[TorsionMenu]


class RepReport(BaseModel):
    params: AlgebraSummary
    family: str
    mu: list[str]
    action: str
    dimension: int
    ranges: list[int]
    violations: list[str] | None = None
    eigen_mismatches: list[str] | None = None
    burnside_dimension: int | None = None
    simple: bool | None = None
    profile: dict[str, str] | None = None
    dump: str | None = None

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "family": "V3", "mu": ["1", "1"], "action": "verify", "dimension": 36,
                "ranges": [6, 6], "violations": [], "eigen_mismatches": [],
            }
        }
    )


class IsoReport(BaseModel):
    params: AlgebraSummary
    family: str
    mu: list[str]
    lam: list[str]
    isomorphic: bool
    shift: list[int] | None
    oracle_isomorphic: bool
    intertwiner_dimension: int
    explicit_map_valid: bool | None
    agree: bool


class CrossValidationReport(BaseModel):
    params: AlgebraSummary
    family: str
    grid_size: int
    pairs: int
    agreements: int
    disagreements: list[list[int]]
    schur_violations: list[list[int]]
    cross_family_pairs: int
    cross_family_isomorphic: list[str]
    classes: int
    partition: list[list[int]]
    criteria_partition: list[list[int]]
    equivalence: bool
    ok: bool


class SweepRecord(BaseModel):
    m: int
    n: int
    k1: int
    k2: int
    regime: str
    pideg: int
    snf: int | None
    closed: int
    special: int | None
    swapped: int

    model_config = ConfigDict(
        json_schema_extra={
            "example": {
                "m": 2, "n": 3, "k1": 1, "k2": 1, "regime": "generic", "pideg": 36, "snf": 36,
                "closed": 36, "special": None, "swapped": 36,
            }
        }
    )


class SweepReport(BaseModel):
    grid_max: int
    points: int
    generic: int
    degenerate: int
    records: list[SweepRecord]


class MatrixDump(BaseModel):
    field_order: int
    family: str
    params: dict[str, int]
    mu: list[str]
    dimension: int
    matrices: dict[str, list[tuple[int, int, list[str]]]]


class HTTPError(BaseModel):
    detail: str = Field(description="Error message")

    model_config = ConfigDict(
        json_schema_extra={"example": {"detail": "k1 must be coprime to m (gcd(k1, m) = 1)"}}
    )


RESULT_MODELS: dict[str, type[BaseModel]] = {
    "classify": ClassificationReport,
    "pidegree": PiDegreeReport,
    "center": CenterReport,
    "rep": RepReport,
    "iso": IsoReport,
    "iso-grid": CrossValidationReport,
    "sweep": SweepReport,
    "rep-dump": MatrixDump,
}
