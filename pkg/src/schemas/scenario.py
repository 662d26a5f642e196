"""
Scenario file schemas for the steer and train commands.
"""

from typing import List, Literal, Optional, Union

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..core.config import get_settings


class OptimizerConfig(BaseModel):
    """Descent with Armijo backtracking; directions are steepest or conjugate."""

    model_config = ConfigDict(extra="forbid")

    max_iterations: int = Field(
        default_factory=lambda: get_settings().optimizer_max_iterations, gt=0
    )
    initial_step: float = Field(default=1.0, gt=0.0)
    armijo_c1: float = Field(default=1e-4, gt=0.0, lt=1.0)
    backtrack: float = Field(default=0.5, gt=0.0, lt=1.0)
    max_backtracks: int = Field(default=40, gt=0)
    grad_tol: float = Field(default=1e-8, gt=0.0)
    loss_tol: float = Field(default=1e-14, gt=0.0)
    direction: Literal["conjugate", "steepest"] = "conjugate"
    max_expansions: int = Field(default=8, ge=0)
    init_scale: float = Field(default=1e-2, ge=0.0)
    seed: int = 0


class Sampling(BaseModel):
    """Random ensemble drawn uniformly from a coordinate box (sphere: uniform on S)."""

    model_config = ConfigDict(extra="forbid")

    n: int = Field(gt=0)
    low: float = -1.0
    high: float = 1.0

    @model_validator(mode="after")
    def check_box(self):
        if not self.low < self.high:
            raise ValueError("sampling box must satisfy low < high")
        return self


class TwoMoons(BaseModel):
    """Interleaved half-circles in the plane with 0/1 labels."""

    model_config = ConfigDict(extra="forbid")

    n: int = Field(gt=0)
    noise: float = Field(default=0.05, ge=0.0)


TargetRule = Literal["identity", "random", "labels"]


class ScenarioFile(BaseModel):
    """
    Validated scenario.

    Sources come from ``points`` or ``sampling`` (steer) or ``dataset`` /
    ``points`` + ``labels`` (train). Targets come from ``targets`` or
    ``target_rule``.
    """

    model_config = ConfigDict(extra="forbid")

    schema_version: Literal[1] = 1
    command: Literal["steer", "train"]
    family: str
    seed: int = 0

    points: Optional[List[List[float]]] = None
    sampling: Optional[Sampling] = None
    dataset: Optional[TwoMoons] = None
    labels: Optional[List[float]] = None

    targets: Optional[List[List[float]]] = None
    target_rule: Optional[TargetRule] = None
    target_sampling: Optional[Sampling] = None

    pmap: Union[Literal["identity"], List[int]] = "identity"
    nu: Optional[List[float]] = None
    beta: float = Field(default=1e-4, ge=0.0)
    T: float = Field(default=1.0, gt=0.0)
    steps: int = Field(default=20, gt=0)
    substeps: Optional[int] = Field(default=None, gt=0)

    discrepancy_tol: float = Field(default=1e-2, gt=0.0)
    label_tolerance: float = Field(default=0.25, gt=0.0)
    accuracy_threshold: float = Field(default=0.9, ge=0.0, le=1.0)

    optimizer: OptimizerConfig = Field(default_factory=OptimizerConfig)

    @field_validator("pmap")
    @classmethod
    def validate_pmap(cls, v):
        if isinstance(v, list):
            if not v:
                raise ValueError("coordinate projection needs at least one index")
            if len(set(v)) != len(v) or any(i < 0 for i in v):
                raise ValueError("projection indices must be distinct and non-negative")
        return v

    @model_validator(mode="after")
    def check_sources_and_targets(self):
        sources = [self.points is not None, self.sampling is not None, self.dataset is not None]
        if sum(sources) != 1:
            raise ValueError("give exactly one of points, sampling or dataset")
        if self.command == "steer":
            if self.dataset is not None:
                raise ValueError("datasets belong to the train command")
            if (self.targets is None) == (self.target_rule is None):
                raise ValueError("give exactly one of targets or target_rule")
            if self.target_rule == "labels":
                raise ValueError("the labels rule belongs to the train command")
        else:
            if not self.family.startswith("product-gh"):
                raise ValueError("training uses a product-gh family")
            if self.points is not None and self.labels is None:
                raise ValueError("explicit training points need labels")
            if self.labels is not None and self.points is not None:
                if len(self.labels) != len(self.points):
                    raise ValueError("one label per training point")
        return self
