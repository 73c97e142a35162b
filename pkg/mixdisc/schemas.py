from typing import Any, Dict, List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator

from mixdisc.config import MAX_ITERATIONS, TRACE_TOL


# Solver Schemas
class SolverConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    trace_tol: float = Field(default=TRACE_TOL, gt=0)
    max_iterations: int = Field(default=MAX_ITERATIONS, gt=0)
    line_search_shrink: float = Field(default=0.5, gt=0, lt=1)
    armijo_constant: float = Field(default=1e-4, gt=0, lt=1)


class ScalingDiagnostics(BaseModel):
    n: int
    xi: List[float]
    tau: List[float]
    log_det_T: float
    objective: float
    residual: float
    iterations: int
    converged: bool


# Value Schemas
class ExactValue(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: float
    log_abs: float
    sign: Literal[-1, 0, 1]
    # Set when some subset determinant exceeded 1e280 in magnitude
    overflow_warning: bool = False


class ConditionReport(BaseModel):
    per_matrix_min: List[float]
    per_matrix_max: List[float]
    # None when some matrix is not positive definite
    alpha: Optional[float] = None
    positive_definite: bool = True


class StochasticityReport(BaseModel):
    sum_deviation: float
    trace_deviations: List[float]
    min_eigenvalue: float
    tol: float
    passes: bool


class DiscriminantEstimate(BaseModel):
    n: int
    log_lower: float
    log_upper: float
    log_correction: float
    alpha_input: float
    alpha_scaled: float
    iterations: int = 0
    residual: float = 0.0

    @model_validator(mode="after")
    def check_order(self):
        if self.log_lower > self.log_upper:
            raise ValueError(f"log_lower {self.log_lower} exceeds log_upper {self.log_upper}")
        return self


# File Schemas
class TupleFile(BaseModel):
    n: int = Field(ge=1)
    matrices: List[List[List[float]]]
    metadata: Dict[str, Any] = Field(default_factory=dict)

    @model_validator(mode="after")
    def check_shape(self):
        if len(self.matrices) != self.n:
            raise ValueError(f"expected {self.n} matrices, got {len(self.matrices)}")
        for index, matrix in enumerate(self.matrices):
            if len(matrix) != self.n or any(len(row) != self.n for row in matrix):
                raise ValueError(f"matrix {index} is not {self.n}x{self.n}")
        return self


# Experiment Schemas
CSV_COLUMNS = [
    "index", "suite", "n", "alpha_input", "alpha_scaled", "log_exact",
    "log_lower", "log_upper", "iterations", "residual", "wall_time_ms", "passed",
]


class ExperimentRecord(BaseModel):
    index: int
    suite: str
    n: int
    alpha_input: float
    alpha_scaled: Optional[float] = None
    log_exact: Optional[float] = None
    log_lower: float
    log_upper: float
    iterations: int = 0
    residual: float = 0.0
    wall_time_ms: float = 0.0
    passed: bool

    @model_validator(mode="after")
    def check_order(self):
        # NaN bounds mark a row that errored out; comparisons with NaN are False
        if self.log_lower > self.log_upper:
            raise ValueError(f"log_lower {self.log_lower} exceeds log_upper {self.log_upper}")
        return self

    def csv_row(self) -> Dict[str, Any]:
        row = self.model_dump()
        return {column: ("" if row[column] is None else row[column]) for column in CSV_COLUMNS}
