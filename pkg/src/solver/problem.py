"""
Ensemble training problems: sources, targets, output map and Bolza weights.
"""

import logging
from dataclasses import dataclass, replace
from typing import Optional, Sequence, Tuple

import numpy as np

from ..dynamics.ensemble import Ensemble
from ..dynamics.gradient import GradientResult, discrete_gradient
from ..dynamics.integrator import TrajectoryBundle, flow_ensemble
from ..dynamics.output import OutputMap, PmapSpec, check_targets
from ..dynamics.schedule import ControlSchedule
from ..fields.families import ControlFamily
from ..utils.error_handler import DimensionMismatchError

logger = logging.getLogger(__name__)


@dataclass(frozen=True, eq=False)
class TrainingProblem:
    """
    Steer ``ensemble`` so that p(z_k(T)) approaches ``targets[k]``.

    Attributes:
        family: Control system
        ensemble: Initial ensemble
        targets: One target per member, shape (N, s)
        pmap: Output map p
        beta: Weight of the control energy
        T: Horizon
        steps: Number of control intervals S
        substeps: RK4 substeps per interval (settings default when None)
        threads: Worker threads for the forward flow (settings default when None)
    """

    family: ControlFamily
    ensemble: Ensemble
    targets: np.ndarray
    pmap: OutputMap
    beta: float = 1e-4
    T: float = 1.0
    steps: int = 20
    substeps: Optional[int] = None
    threads: Optional[int] = None

    def __post_init__(self):
        if self.ensemble.manifold != self.family.manifold:
            raise DimensionMismatchError(
                "ensemble does not live on the family's manifold", family=self.family.family_id
            )
        if self.beta < 0:
            raise ValueError("beta must be non-negative")
        if not self.T > 0 or self.steps < 1:
            raise ValueError("horizon and step count must be positive")
        targets = np.array(check_targets(self.pmap, self.targets, self.ensemble.N))
        targets.setflags(write=False)
        object.__setattr__(self, "targets", targets)

    @classmethod
    def build(
        cls,
        family: ControlFamily,
        ensemble: Ensemble,
        targets,
        pmap: PmapSpec = "identity",
        **kwargs,
    ) -> "TrainingProblem":
        return cls(
            family=family,
            ensemble=ensemble,
            targets=np.asarray(targets, dtype=float),
            pmap=OutputMap.build(family.manifold, pmap),
            **kwargs,
        )

    @property
    def nu(self) -> Tuple[float, ...]:
        """Base point of the label factor (product system), empty otherwise."""
        return self.family.nu

    @property
    def dt(self) -> float:
        return self.T / self.steps

    def zero_schedule(self) -> ControlSchedule:
        return ControlSchedule.zeros(self.T, self.steps, self.family.r)

    def random_schedule(self, rng: np.random.Generator, scale: float) -> ControlSchedule:
        return ControlSchedule.random_uniform(self.T, self.steps, self.family.r, rng, scale)

    def flow(self, sched: ControlSchedule) -> TrajectoryBundle:
        return flow_ensemble(
            self.family, sched, self.ensemble, substeps=self.substeps, threads=self.threads
        )

    def gradient(
        self, sched: ControlSchedule, traj: Optional[TrajectoryBundle] = None
    ) -> GradientResult:
        return discrete_gradient(
            self.family,
            sched,
            self.ensemble,
            self.targets,
            self.pmap,
            self.beta,
            substeps=self.substeps,
            traj=traj or self.flow(sched),
        )

    def with_options(self, **changes) -> "TrainingProblem":
        """Copy with some settings (beta, T, steps, substeps, threads) replaced."""
        return replace(self, **changes)

    def permuted(self, perm: Sequence[int]) -> "TrainingProblem":
        """Members and their targets reordered together."""
        perm = np.asarray(perm)
        return replace(self, ensemble=self.ensemble.permuted(perm), targets=self.targets[perm])
