"""
Piecewise-constant control schedules on a uniform time grid.
"""

import csv
import io
import json
from dataclasses import dataclass
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from ..utils.error_handler import DimensionMismatchError


@dataclass(frozen=True, eq=False)
class ControlSchedule:
    """
    u(t) = values[j] on [j dt, (j + 1) dt), j = 0..S-1.

    The step width is stored so that split schedules reuse it bit for bit.
    """

    values: np.ndarray
    dt: float

    def __post_init__(self):
        values = np.array(self.values, dtype=float)
        if values.ndim != 2 or values.shape[0] < 1 or values.shape[1] < 1:
            raise DimensionMismatchError("schedule values must be an (S, r) array with S >= 1")
        if not np.all(np.isfinite(values)):
            raise ValueError("schedule values must be finite")
        if not self.dt > 0:
            raise ValueError("step width must be positive")
        values.setflags(write=False)
        object.__setattr__(self, "values", values)
        object.__setattr__(self, "dt", float(self.dt))

    @classmethod
    def from_horizon(cls, T: float, values: np.ndarray) -> "ControlSchedule":
        values = np.asarray(values, dtype=float)
        if not T > 0:
            raise ValueError("horizon T must be positive")
        return cls(values, T / values.shape[0])

    @classmethod
    def zeros(cls, T: float, steps: int, r: int) -> "ControlSchedule":
        return cls.from_horizon(T, np.zeros((steps, r)))

    @classmethod
    def random_uniform(
        cls, T: float, steps: int, r: int, rng: np.random.Generator, scale: float = 1e-2
    ) -> "ControlSchedule":
        return cls.from_horizon(T, rng.uniform(-scale, scale, size=(steps, r)))

    @property
    def steps(self) -> int:
        return self.values.shape[0]

    @property
    def r(self) -> int:
        return self.values.shape[1]

    @property
    def T(self) -> float:
        return self.dt * self.steps

    @property
    def times(self) -> np.ndarray:
        return self.dt * np.arange(self.steps + 1)

    def with_values(self, values: np.ndarray) -> "ControlSchedule":
        return ControlSchedule(values, self.dt)

    def to_csv(self) -> str:
        buffer = io.StringIO()
        writer = csv.writer(buffer, lineterminator="\n")
        writer.writerow(["step"] + [f"u{i}" for i in range(self.r)])
        for j, row in enumerate(self.values):
            writer.writerow([j] + [repr(float(v)) for v in row])
        return buffer.getvalue()

    @classmethod
    def from_csv(cls, text: str, T: float) -> "ControlSchedule":
        rows = [r for r in csv.reader(io.StringIO(text)) if r and not r[0].startswith("#")]
        body = rows[1:]
        values = np.array([[float(v) for v in row[1:]] for row in body])
        return cls.from_horizon(T, values)

    def to_json(self) -> str:
        return json.dumps({"T": self.T, "dt": self.dt, "values": self.values.tolist()})

    @classmethod
    def from_json(cls, payload: Union[str, dict]) -> "ControlSchedule":
        data = json.loads(payload) if isinstance(payload, str) else payload
        if "dt" in data:
            return cls(np.array(data["values"]), data["dt"])
        return cls.from_horizon(data["T"], np.array(data["values"]))


def split_schedule(
    sched: ControlSchedule, at_step: Optional[int] = None
) -> Tuple[ControlSchedule, ControlSchedule]:
    """Schedules on [0, k dt] and [k dt, T] with the same step width."""
    k = sched.steps // 2 if at_step is None else at_step
    if not 0 < k < sched.steps:
        raise ValueError("split point must lie strictly inside the schedule")
    return (
        ControlSchedule(sched.values[:k], sched.dt),
        ControlSchedule(sched.values[k:], sched.dt),
    )


def rescale_schedule(sched: ControlSchedule, T_new: float) -> ControlSchedule:
    """(T', (T / T') u(T t / T')): the same trajectory traversed in time T'."""
    if not T_new > 0:
        raise ValueError("horizon T must be positive")
    return ControlSchedule.from_horizon(T_new, sched.values * (sched.T / T_new))


def concatenate_schedules(parts: Sequence[ControlSchedule]) -> ControlSchedule:
    dts = {p.dt for p in parts}
    if len(dts) != 1:
        raise ValueError("schedules with different step widths cannot be joined")
    return ControlSchedule(np.vstack([p.values for p in parts]), parts[0].dt)
