#!/usr/bin/env python3
"""
Параметры модели и геометрия пространства Минковского
⟨x⟩² - евклидов квадрат 4-вектора (в гауссовых затуханиях),
p² = -p0² + |p|² - квадрат Минковского (массовая оболочка)
"""

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from utils.errors import DomainError, ParameterError


@dataclass(frozen=True)
class ModelParams:
    """Масса m и длина некоммутативности λ"""

    m: float
    lam: float

    def __post_init__(self):
        if not (math.isfinite(self.m) and self.m > 0):
            raise ParameterError(f"mass must be positive and finite, got m={self.m}")
        if not (math.isfinite(self.lam) and self.lam > 0):
            raise ParameterError(f"lambda must be positive and finite, got lambda={self.lam}")

    @property
    def damping_offset(self) -> float:
        """Множитель e^{-λ²m²} из затухания e^{-λ²(2p²+m²)}"""
        return math.exp(-self.lam ** 2 * self.m ** 2)

    def to_dict(self) -> dict:
        return {"m": self.m, "lambda": self.lam}


@dataclass(frozen=True)
class Event:
    """Точка (t - iu, x); u ≥ 0 - сдвиг в нижнюю полуплоскость"""

    t: float
    x: Tuple[float, float, float] = (0.0, 0.0, 0.0)
    u: float = 0.0

    def __post_init__(self):
        x = tuple(float(c) for c in self.x)
        if len(x) != 3:
            raise ParameterError(f"spatial part must have 3 components, got {len(x)}")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "t", float(self.t))
        object.__setattr__(self, "u", float(self.u))
        if not all(math.isfinite(c) for c in (self.t, self.u) + x):
            raise ParameterError(f"event components must be finite: {self}")
        if self.u < 0:
            raise DomainError(f"imaginary-time offset must be >= 0, got u={self.u}")

    @property
    def complex_time(self) -> complex:
        return complex(self.t, -self.u)

    @property
    def radius(self) -> float:
        return math.sqrt(sum(c * c for c in self.x))

    def as_vector(self) -> np.ndarray:
        return np.array((self.t,) + self.x)

    def shifted(self, dt: float) -> "Event":
        return Event(self.t + dt, self.x, self.u)

    def separation(self, other: "Event") -> Tuple[float, float]:
        """(t_self - t_other, |x_self - x_other|)"""
        dx = [a - b for a, b in zip(self.x, other.x)]
        return self.t - other.t, math.sqrt(sum(c * c for c in dx))

    def sort_key(self) -> Tuple[float, ...]:
        return (self.t, self.u) + self.x

    def to_dict(self) -> dict:
        return {"t": self.t, "x": list(self.x), "u": self.u}

    @classmethod
    def from_dict(cls, data: dict) -> "Event":
        return cls(t=data["t"], x=tuple(data.get("x", (0.0, 0.0, 0.0))), u=data.get("u", 0.0))


ORIGIN = Event(0.0)


def euclidean_square(v) -> np.ndarray:
    """⟨v⟩² = v0² + |v|² по последней оси"""
    v = np.asarray(v, dtype=float)
    return np.sum(v * v, axis=-1)


def minkowski_square(v) -> np.ndarray:
    """v² = -v0² + |v|² по последней оси"""
    v = np.asarray(v, dtype=float)
    return -v[..., 0] ** 2 + np.sum(v[..., 1:] ** 2, axis=-1)


def mean_point(points: Sequence[Event]) -> np.ndarray:
    return np.mean([p.as_vector() for p in points], axis=0)
