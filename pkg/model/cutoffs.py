#!/usr/bin/env python3
"""
Гладкие срезки g(t, x) = χ(t)·h(x)

Построение через стандартный бамп B(s) = f(s)/(f(s)+f(1-s)), f(s) = e^{-1/s} при s > 0:
  χ(t)   = B((t+2ε)/ε) · B((T+ε-t)/ε)      (1 на [-ε, T], 0 вне (-2ε, T+ε))
  χ_on   = B((t+2ε)/ε)                     (фронт включения)
  χ_off  = B((T+ε-t)/ε)                    (фронт выключения)
  h(x)   = B((R+δ-|x|)/δ)
Производные считаются аналитически: B'(s) = [f'(s)f(1-s) + f(s)f'(1-s)]/(f(s)+f(1-s))², f' = f/s².
"""

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Tuple, Union

import numpy as np

from utils.errors import ParameterError


def _f(s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    positive = s > 0
    safe = np.where(positive, s, 1.0)
    return np.where(positive, np.exp(-1.0 / safe), 0.0)


def _f_prime(s: np.ndarray) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    positive = s > 0
    safe = np.where(positive, s, 1.0)
    return np.where(positive, np.exp(-1.0 / safe) / (safe * safe), 0.0)


def bump(s) -> np.ndarray:
    """B(s): 0 при s ≤ 0, 1 при s ≥ 1, B(1/2) = 1/2"""
    a = _f(s)
    b = _f(1.0 - np.asarray(s, dtype=float))
    return a / (a + b)


def bump_derivative(s) -> np.ndarray:
    s = np.asarray(s, dtype=float)
    a, b = _f(s), _f(1.0 - s)
    da, db = _f_prime(s), _f_prime(1.0 - s)
    return (da * b + a * db) / (a + b) ** 2


@dataclass(frozen=True)
class CutoffSpec:
    """Полуширина временного слоя eps, конец плато T, радиус R и ширина спада delta"""

    eps: float
    T: float
    R: float
    delta: float

    def __post_init__(self):
        for name in ("eps", "T", "R", "delta"):
            value = getattr(self, name)
            if not math.isfinite(value):
                raise ParameterError(f"cutoff {name} must be finite, got {value}")
        if self.eps <= 0:
            raise ParameterError(f"eps must be positive, got {self.eps}")
        if self.T < self.eps:
            raise ParameterError(f"plateau end T must be >= eps, got T={self.T}, eps={self.eps}")
        if self.R <= 0 or self.delta <= 0:
            raise ParameterError(f"R and delta must be positive, got R={self.R}, delta={self.delta}")

    @property
    def temporal_support(self) -> Tuple[float, float]:
        return -2.0 * self.eps, self.T + self.eps

    @property
    def spatial_support_radius(self) -> float:
        return self.R + self.delta

    def with_radius(self, R: float) -> "CutoffSpec":
        return replace(self, R=float(R))

    def with_plateau_end(self, T: float) -> "CutoffSpec":
        return replace(self, T=float(T))

    def to_dict(self) -> dict:
        return {"eps": self.eps, "T": self.T, "R": self.R, "delta": self.delta}


def chi_on(spec: CutoffSpec, t) -> np.ndarray:
    return bump((np.asarray(t, dtype=float) + 2.0 * spec.eps) / spec.eps)


def chi_off(spec: CutoffSpec, t, plateau_end: Optional[float] = None) -> np.ndarray:
    T = spec.T if plateau_end is None else plateau_end
    return bump((T + spec.eps - np.asarray(t, dtype=float)) / spec.eps)


def chi(spec: CutoffSpec, t, plateau_end: Optional[float] = None) -> np.ndarray:
    return chi_on(spec, t) * chi_off(spec, t, plateau_end)


def chi_dot(spec: CutoffSpec, t, plateau_end: Optional[float] = None) -> np.ndarray:
    T = spec.T if plateau_end is None else plateau_end
    t = np.asarray(t, dtype=float)
    a = (t + 2.0 * spec.eps) / spec.eps
    b = (T + spec.eps - t) / spec.eps
    return (bump_derivative(a) * bump(b) - bump(a) * bump_derivative(b)) / spec.eps


def chi_dot_minus(spec: CutoffSpec, t) -> np.ndarray:
    """χ̇·θ(-t): носитель (-2ε, -ε), интеграл равен 1"""
    t = np.asarray(t, dtype=float)
    return np.where(t < 0, chi_dot(spec, t), 0.0)


def spatial_cutoff(spec: CutoffSpec, r) -> np.ndarray:
    return bump((spec.R + spec.delta - np.asarray(r, dtype=float)) / spec.delta)


def cutoff_eval(spec: CutoffSpec, which: str, point: Union[float, Tuple[float, float, float]]) -> float:
    """Значение χ(t) (which='temporal') или h(x) (which='spatial')"""
    if which == "temporal":
        return float(chi(spec, float(point)))
    if which == "spatial":
        if np.ndim(point) == 0:
            r = abs(float(point))
        else:
            r = float(np.linalg.norm(np.asarray(point, dtype=float)))
        return float(spatial_cutoff(spec, r))
    raise ParameterError(f"unknown cutoff '{which}', expected temporal|spatial")


class TemporalWeight(str, Enum):
    """Временные веса вершин взаимодействия"""

    CHI = "chi"
    CHIDOT_MINUS = "chidot-"
    CHI_DIFFERENCE = "chi-minus-chi'"
    COCYCLE_REMAINDER = "cocycle-remainder"


def temporal_weight(kind: TemporalWeight, spec: CutoffSpec, s, parameter: float = 0.0,
                    plateau_end: Optional[float] = None,
                    alt_plateau_end: Optional[float] = None) -> np.ndarray:
    """
    Временной вес в точке s:
      chi               - χ
      chidot-           - χ̇·θ(-s)
      chi-minus-chi'    - χ(T) - χ(T')
      cocycle-remainder - χ(s) - χ_on(s) + χ_on(s - t), t = parameter (вес V - V_t⁻)
    """
    kind = TemporalWeight(kind)
    if kind is TemporalWeight.CHI:
        return chi(spec, s, plateau_end)
    if kind is TemporalWeight.CHIDOT_MINUS:
        return chi_dot_minus(spec, s)
    if kind is TemporalWeight.CHI_DIFFERENCE:
        if alt_plateau_end is None:
            raise ParameterError("chi-minus-chi' weight needs an alternate plateau end")
        return chi(spec, s, plateau_end) - chi(spec, s, alt_plateau_end)
    s = np.asarray(s, dtype=float)
    return chi(spec, s, plateau_end) - chi_on(spec, s) + chi_on(spec, s - parameter)


def temporal_weight_support(kind: TemporalWeight, spec: CutoffSpec, parameter: float = 0.0,
                            plateau_end: Optional[float] = None,
                            alt_plateau_end: Optional[float] = None) -> Tuple[float, float]:
    kind = TemporalWeight(kind)
    T = spec.T if plateau_end is None else plateau_end
    if kind is TemporalWeight.CHI:
        return -2.0 * spec.eps, T + spec.eps
    if kind is TemporalWeight.CHIDOT_MINUS:
        return -2.0 * spec.eps, -spec.eps
    if kind is TemporalWeight.CHI_DIFFERENCE:
        if alt_plateau_end is None:
            raise ParameterError("chi-minus-chi' weight needs an alternate plateau end")
        return min(T, alt_plateau_end), max(T, alt_plateau_end) + spec.eps
    return min(0.0, parameter) - 2.0 * spec.eps, max(T, parameter) + spec.eps
