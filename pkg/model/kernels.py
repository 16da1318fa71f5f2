#!/usr/bin/env python3
"""
Гауссово ядро G_λ, тождества эффективного лагранжиана и отображение сглаживания ι

G_λ(x) = e^{-⟨x⟩²/(2λ²)} / (√(2π)λ)⁴ - тень оптимально локализованных состояний.
Конфигурации поля представлены конечными суммами плоских волн c·e^{ik·x},
k·x = -k0·t + k·x; ι действует на них замкнуто: c -> c·e^{-λ²⟨k⟩²/2}.
"""

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from model.geometry import Event, euclidean_square, mean_point
from utils.errors import DomainError, ParameterError
from utils.quadrature_utils import gaussian_quadrature_mesh


def _check_lambda(lam: float):
    if not (math.isfinite(lam) and lam > 0):
        raise ParameterError(f"lambda must be positive, got {lam}")


def gaussian_kernel(x: Event, lam: float) -> float:
    """G_λ(x) в вещественной точке"""
    _check_lambda(lam)
    if x.u != 0.0:
        raise DomainError("gaussian kernel is evaluated at real points only (u = 0)")
    return float(gaussian_kernel_values(x.as_vector(), lam))


def gaussian_kernel_values(vectors, lam: float) -> np.ndarray:
    """G_λ для массива 4-векторов (последняя ось - компоненты)"""
    _check_lambda(lam)
    norm = (math.sqrt(2.0 * math.pi) * lam) ** 4
    return np.exp(-euclidean_square(vectors) / (2.0 * lam * lam)) / norm


def _gaussian_1d(y: np.ndarray, lam: float) -> np.ndarray:
    return np.exp(-y * y / (2.0 * lam * lam)) / (math.sqrt(2.0 * math.pi) * lam)


def gaussian_convolution(x: Event, lam1: float, lam2: float, nodes: int = 96) -> float:
    """
    (G_{λ1} ∗ G_{λ2})(x) тензорной квадратурой Гаусса в ℝ⁴.

    Подынтегральное выражение - произведение по координатам, поэтому
    4-мерная тензорная сумма вычисляется как произведение одномерных.
    """
    _check_lambda(lam1)
    _check_lambda(lam2)
    width = 12.0 * max(lam1, lam2)
    value = 1.0
    for component in x.as_vector():
        lo = min(0.0, component) - width
        hi = max(0.0, component) + width
        y, w = gaussian_quadrature_mesh(hi, nodes, xmin=lo)
        value *= float(np.sum(w * _gaussian_1d(y, lam1) * _gaussian_1d(component - y, lam2)))
    return value


def mean_square_identity(points: Sequence[Event], x: Event) -> Tuple[float, float]:
    """
    Σ_j⟨y_j - ȳ⟩² + n⟨x - ȳ⟩² против Σ_j⟨y_j - x⟩² (ȳ - среднее арифметическое).
    """
    if len(points) == 0:
        raise ParameterError("mean_square_identity needs at least one point")
    if any(p.u != 0.0 for p in points) or x.u != 0.0:
        raise DomainError("mean_square_identity is defined for real points")
    ys = np.array([p.as_vector() for p in points])
    y_bar = mean_point(points)
    xv = x.as_vector()
    lhs = float(np.sum(euclidean_square(ys - y_bar)) + len(points) * euclidean_square(xv - y_bar))
    rhs = float(np.sum(euclidean_square(ys - xv)))
    return lhs, rhs


def gaussian_normalization_check(n: int, lam: float, nodes: int = 64) -> float:
    """(n²/(√(2π)λ)⁴)·∫e^{-n⟨x⟩²/(2λ²)}d⁴x квадратурой; должно быть 1"""
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    _check_lambda(lam)
    half = 12.0 * lam / math.sqrt(n)
    y, w = gaussian_quadrature_mesh(half, nodes, xmin=-half)
    one_dim = float(np.sum(w * np.exp(-n * y * y / (2.0 * lam * lam))))
    return n * n / (math.sqrt(2.0 * math.pi) * lam) ** 4 * one_dim ** 4


def smear_plane_wave(amplitude: complex, k: Sequence[float], lam: float) -> Tuple[complex, Tuple[float, ...]]:
    """ι(c·e^{ik·x}) = c·e^{-λ²⟨k⟩²/2}·e^{ik·x}"""
    k = tuple(float(c) for c in k)
    if len(k) != 4 or not all(math.isfinite(c) for c in k):
        raise ParameterError(f"wave vector must be a finite 4-vector, got {k}")
    damping = math.exp(-lam * lam * float(euclidean_square(k)) / 2.0)
    return complex(amplitude) * damping, k


@dataclass(frozen=True)
class PlaneWave:
    amplitude: complex
    k: Tuple[float, float, float, float]

    def phase(self, t, x) -> np.ndarray:
        """e^{ik·x} при комплексном t (эффективное время вершины)"""
        x = np.asarray(x, dtype=float)
        spatial = x @ np.asarray(self.k[1:], dtype=float)
        return np.exp(1j * (-self.k[0] * np.asarray(t) + spatial))


@dataclass(frozen=True)
class PlaneWaveConfig:
    """Конечная сумма плоских волн; пустая сумма - нулевая конфигурация"""

    waves: Tuple[PlaneWave, ...] = ()

    @property
    def is_zero(self) -> bool:
        return len(self.waves) == 0

    def field(self, t, x) -> np.ndarray:
        """φ(t, x) = Σ c·e^{ik·x}; t может быть комплексным"""
        t = np.asarray(t)
        x = np.asarray(x, dtype=float)
        total = np.zeros(np.broadcast(t, x[..., 0]).shape, dtype=complex)
        for wave in self.waves:
            total = total + wave.amplitude * wave.phase(t, x)
        return total

    def smeared(self, lam: float) -> "PlaneWaveConfig":
        waves = []
        for wave in self.waves:
            amplitude, k = smear_plane_wave(wave.amplitude, wave.k, lam)
            waves.append(PlaneWave(amplitude, k))
        return PlaneWaveConfig(tuple(waves))

    @classmethod
    def single(cls, amplitude: complex, k: Sequence[float]) -> "PlaneWaveConfig":
        return cls((PlaneWave(complex(amplitude), tuple(float(c) for c in k)),))


ZERO_CONFIG = PlaneWaveConfig()
