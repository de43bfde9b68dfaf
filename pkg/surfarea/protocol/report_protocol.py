from enum import Enum
from typing import Dict, List, Literal, Optional

from pydantic import BaseModel, Field, ValidationError, field_validator, model_validator

from surfarea.constants import (
    DEFAULT_ALPHAS,
    DEFAULT_FIELD_SPEC,
    DEFAULT_NS,
    LANTERN_SCHEDULES,
    MAX_EDGE_ORDER,
    MAX_TRIANGLE_DEGREE,
)


class ErrorResponse(BaseModel):
    object: str = "error"
    message: str
    code: int


class AreaMethod(str, Enum):
    EXACT_QUADRATURE = "ExactQuadrature"
    PL_GRAPH = "PLGraph"
    CR_FUNCTIONAL = "CRFunctional"
    PARAMETRIC_PL = "ParametricPL"
    PARAMETRIC_EXACT = "ParametricExact"


class InterpKind(str, Enum):
    LAGRANGE = "lagrange"
    CROUZEIX_RAVIART = "cr"


class AreaReport(BaseModel):
    object: str = "area"
    value: float
    method: AreaMethod
    mesh_fineness: float
    max_circumradius: float
    kind: Optional[InterpKind] = None
    triangle_count: int = 0


class ConvergenceRecord(BaseModel):
    N: int
    alpha: float
    h: float
    max_circumradius: float
    max_angle: float
    area_exact: float
    area_lagrange: Optional[float] = None
    area_cr: Optional[float] = None
    err_lagrange: Optional[float] = None
    err_cr: Optional[float] = None
    seminorm_lagrange: Optional[float] = None
    seminorm_cr: Optional[float] = None
    triangle_count: int = 0

    @field_validator("err_lagrange", "err_cr", "seminorm_lagrange", "seminorm_cr")
    @classmethod
    def nonnegative(cls, v):
        if v is not None and v < 0:
            raise ValueError("errors are absolute values and cannot be negative")
        return v


class RateFit(BaseModel):
    slope: float
    intercept: float
    r_squared: float = Field(ge=0.0, le=1.0)
    points: int = 0


class LanternRow(BaseModel):
    n: int
    m: int
    area_mesh: Optional[float] = None
    area_closed_form: float
    limit: float
    relative_gap: Optional[float] = None


class RunConfig(BaseModel):
    """Validated flags of one CLI invocation.

    Field names follow the flags; FLAG_NAMES maps the few that differ.
    """

    subcommand: Literal["lantern", "area", "converge", "export", "constants"]
    field_spec: str = DEFAULT_FIELD_SPEC
    mesh: Literal["aniso", "uniform"] = "aniso"
    N: int = 12
    alpha: float = 1.6
    alphas: List[float] = Field(default_factory=lambda: list(DEFAULT_ALPHAS))
    Ns: List[int] = Field(default_factory=lambda: list(DEFAULT_NS))
    m: int = 4
    n: int = 4
    r: float = 1.0
    H: float = 1.0
    schedule: Optional[str] = None
    n_max: int = 32
    kind: str = "both"
    quad_degree: int = 8
    edge_order: int = 5
    refine: int = 0
    seminorm: bool = False
    threads: int = 1
    check: bool = False
    output_path: Optional[str] = None
    format: Literal["csv", "json"] = "csv"

    @field_validator("N")
    @classmethod
    def check_n(cls, v):
        if v < 1:
            raise ValueError(f"must be >= 1, got {v}")
        return v

    @field_validator("alpha")
    @classmethod
    def check_alpha(cls, v):
        if not v >= 1.0:
            raise ValueError(f"must be >= 1, got {v}")
        return v

    @field_validator("alphas")
    @classmethod
    def check_alphas(cls, v):
        if not v:
            raise ValueError("needs at least one value")
        bad = [a for a in v if not a >= 1.0]
        if bad:
            raise ValueError(f"every alpha must be >= 1, got {bad}")
        return v

    @field_validator("Ns")
    @classmethod
    def check_ns(cls, v):
        if not v:
            raise ValueError("needs at least one value")
        if any(b <= a for a, b in zip(v, v[1:])):
            raise ValueError(f"must be strictly increasing, got {v}")
        if v[0] < 2:
            raise ValueError(f"values must be >= 2, got {v[0]}")
        return v

    @field_validator("m", "n_max", "threads")
    @classmethod
    def check_positive_int(cls, v):
        if v < 1:
            raise ValueError(f"must be >= 1, got {v}")
        return v

    @field_validator("n")
    @classmethod
    def check_lantern_n(cls, v):
        if v < 2:
            raise ValueError(f"must be >= 2, got {v}")
        return v

    @field_validator("r", "H")
    @classmethod
    def check_positive(cls, v):
        if not v > 0:
            raise ValueError(f"must be > 0, got {v}")
        return v

    @field_validator("schedule")
    @classmethod
    def check_schedule(cls, v):
        if v is None:
            return v
        if v in LANTERN_SCHEDULES or v.startswith("m="):
            return v
        raise ValueError(f"must be one of {', '.join(LANTERN_SCHEDULES)} or m=<int>, got {v!r}")

    @field_validator("quad_degree")
    @classmethod
    def check_degree(cls, v):
        if not 1 <= v <= MAX_TRIANGLE_DEGREE:
            raise ValueError(f"must be in [1, {MAX_TRIANGLE_DEGREE}], got {v}")
        return v

    @field_validator("edge_order")
    @classmethod
    def check_order(cls, v):
        if not 1 <= v <= MAX_EDGE_ORDER:
            raise ValueError(f"must be in [1, {MAX_EDGE_ORDER}], got {v}")
        return v

    @field_validator("refine")
    @classmethod
    def check_refine(cls, v):
        if not 0 <= v <= 6:
            raise ValueError(f"must be in [0, 6], got {v}")
        return v

    @model_validator(mode="after")
    def check_kind(self):
        allowed = {
            "converge": ("both", "lagrange-only", "cr-only"),
            "area": ("lagrange", "cr", "both"),
            "export": ("lagrange", "cr"),
        }.get(self.subcommand)
        if allowed is not None and self.kind not in allowed:
            raise ValueError(f"--kind must be one of {', '.join(allowed)} for {self.subcommand}, got {self.kind!r}")
        if self.subcommand == "export" and not self.output_path:
            raise ValueError("--out is required for export")
        if self.subcommand == "area" and self.mesh == "aniso" and self.N < 2:
            raise ValueError(f"--N must be >= 2 for the anisotropic mesh, got {self.N}")
        return self


FLAG_NAMES: Dict[str, str] = {
    "field_spec": "--field",
    "output_path": "--out",
    "n_max": "--n-max",
    "quad_degree": "--quad-degree",
    "edge_order": "--edge-order",
}


def describe_validation_error(exc: ValidationError) -> str:
    """One line per problem, each naming the offending flag."""
    lines = []
    for err in exc.errors():
        loc = [str(part) for part in err.get("loc", ()) if not isinstance(part, int)]
        msg = err.get("msg", "invalid value")
        if msg.startswith("Value error, "):
            msg = msg[len("Value error, "):]
        if loc:
            flag = FLAG_NAMES.get(loc[0], f"--{loc[0]}")
            lines.append(f"{flag}: {msg}")
        else:
            lines.append(msg)
    return "\n".join(lines)
