"""
Report schemas produced by the numerical modules.
"""

from typing import Any, Dict, List, Literal

from pydantic import BaseModel, Field, model_validator


class RankReport(BaseModel):
    """Numerical rank of the evaluation map on bracket words."""

    family: str
    n_points: int
    depth: int
    n_words: int
    rank: int
    expected_rank: int
    full_rank: bool
    sigma_max: float
    threshold: float


class TruncationReport(BaseModel):
    """Uniform error and derivative bound of a truncated expansion on a compact set."""

    basis: Literal["hermite", "fourier", "laplace"]
    order: int = Field(ge=0)
    sup_error: float = Field(ge=0.0)
    deriv_sup: float = Field(ge=0.0)
    ell: float
    grid: List[int]

    @model_validator(mode="after")
    def check_ell(self):
        if self.ell < self.deriv_sup:
            raise ValueError("ell must bound the derivative sup")
        return self


class PMPReport(BaseModel):
    """Stationarity residual and maximized-Hamiltonian profile along a schedule."""

    beta: float
    steps: int
    residual: float = Field(ge=0.0)
    hamiltonian: List[float]
    mean_hamiltonian: float
    spread: float = Field(ge=0.0)


class HistoryEntry(BaseModel):
    """One optimizer iteration."""

    iteration: int
    loss: float
    grad_norm: float
    step: float


PropertyStatus = Literal["pass", "fail", "expected-insufficient-depth"]


class PropertyResult(BaseModel):
    """Outcome of one property check inside a verification suite."""

    name: str
    status: PropertyStatus
    detail: Dict[str, Any] = Field(default_factory=dict)


class VerifyReport(BaseModel):
    """All property outcomes of one suite run."""

    suite: str
    results: List[PropertyResult]

    @property
    def passed(self) -> bool:
        return all(r.status != "fail" for r in self.results)
