#!/usr/bin/env python3
"""
Описание состояния и результаты сканов
"""

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import List, Optional, Tuple

import pandas as pd

from functionals.algebra import Functional
from utils.errors import ParameterError

SCAN_COLUMNS = ["parameter", "re", "im", "stderr", "samples", "converged"]


class StateKind(str, Enum):
    VACUUM = "vacuum"
    THERMAL = "thermal"
    DRESSED = "dressed"


@dataclass(frozen=True)
class StateSpec:
    kind: StateKind = StateKind.VACUUM
    beta: Optional[float] = None
    dressing: Optional[Functional] = None
    monotone: bool = False

    def __post_init__(self):
        object.__setattr__(self, "kind", StateKind(self.kind))
        if self.kind is StateKind.THERMAL:
            if self.beta is None or not self.beta > 0 or not math.isfinite(self.beta):
                raise ParameterError(f"thermal state needs a finite beta > 0, got {self.beta}")
        elif self.beta is not None:
            raise ParameterError(f"beta is only meaningful for thermal states, got kind={self.kind.value}")
        if self.kind is StateKind.DRESSED:
            if self.dressing is None:
                raise ParameterError("dressed state needs a dressing functional B")
            if not self.dressing.is_fixed:
                raise ParameterError("dressing functional must have fixed vertices only")

    @classmethod
    def vacuum(cls) -> "StateSpec":
        return cls(StateKind.VACUUM)

    @classmethod
    def thermal(cls, beta: Optional[float]) -> "StateSpec":
        if beta is None:
            raise ParameterError("thermal state needs a finite beta > 0, got None")
        return cls(StateKind.THERMAL, float(beta))

    @classmethod
    def dressed(cls, B: Functional, monotone: bool = False) -> "StateSpec":
        return cls(StateKind.DRESSED, dressing=B, monotone=monotone)

    @property
    def label(self) -> str:
        if self.kind is StateKind.THERMAL:
            return f"thermal(beta={self.beta:g})"
        return self.kind.value

    def to_dict(self) -> dict:
        data = {"kind": self.kind.value}
        if self.beta is not None:
            data["beta"] = self.beta
        if self.dressing is not None:
            data["dressing"] = self.dressing.to_dict()
        return data


@dataclass(frozen=True)
class ScanPoint:
    parameter: float
    value: complex
    stderr: float
    samples: int


@dataclass(frozen=True)
class ScanResult:
    """Точки скана в порядке возрастания параметра; сходимость по последнему приращению"""

    points: Tuple[ScanPoint, ...]
    tolerance: float
    parameter_name: str = "R"
    norms: Tuple[float, ...] = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "points", tuple(self.points))
        for point in self.points:
            if point.stderr < 0:
                raise ParameterError("scan stderr must be >= 0")
        values = [p.parameter for p in self.points]
        if any(b <= a for a, b in zip(values, values[1:])):
            raise ParameterError(f"scan parameters must be strictly increasing, got {values}")

    @property
    def parameters(self) -> List[float]:
        return [p.parameter for p in self.points]

    @property
    def values(self) -> List[complex]:
        return [p.value for p in self.points]

    def increments(self) -> List[float]:
        return [abs(b.value - a.value) for a, b in zip(self.points, self.points[1:])]

    @property
    def converged(self) -> bool:
        """|v_n - v_{n-1}| ≤ tolerance·|v_n|"""
        if len(self.points) < 2:
            return False
        last = self.increments()[-1]
        scale = abs(self.points[-1].value)
        return last <= self.tolerance * scale if scale > 0 else last == 0.0

    def to_frame(self) -> pd.DataFrame:
        converged = self.converged
        return pd.DataFrame({
            "parameter": [p.parameter for p in self.points],
            "re": [p.value.real for p in self.points],
            "im": [p.value.imag for p in self.points],
            "stderr": [p.stderr for p in self.points],
            "samples": [p.samples for p in self.points],
            "converged": [converged] * len(self.points),
        }, columns=SCAN_COLUMNS)

    def to_csv(self, path: Optional[str] = None) -> str:
        text = self.to_frame().to_csv(index=False, float_format="%.12e", lineterminator="\n")
        if path:
            with open(path, "w", encoding="utf-8", newline="") as handle:
                handle.write(text)
        return text

    def to_dict(self) -> dict:
        return {
            "parameter_name": self.parameter_name,
            "tolerance": self.tolerance,
            "converged": self.converged,
            "points": [{"parameter": p.parameter, "value": {"re": p.value.real, "im": p.value.imag},
                        "stderr": p.stderr, "samples": p.samples} for p in self.points],
        }
