#!/usr/bin/env python3
"""
Импульсное представление пропагатора Фейнмана и независимые оракулы
"""

import logging
import math
from typing import Optional, Sequence

import numpy as np

from model.geometry import ModelParams
from propagators.evaluator import sinc_factor
from propagators.kinds import QuadratureSpec
from utils.errors import DomainError, ParameterError
from utils.quadrature_utils import gaussian_quadrature_mesh

logger = logging.getLogger(__name__)


def feynman_momentum(params: ModelParams, p0, pvec_norm, epsilon: float) -> np.ndarray:
    """
    Фурье-образ ΔF,λ: (-i/(2π)⁴)·e^{-λ²(2|p|²+m²)}/(p² + m² - iε),
    p² - квадрат Минковского -p0² + |p|². Аргументы транслируются numpy.
    """
    if not epsilon > 0:
        raise ParameterError(f"epsilon must be positive, got {epsilon}")
    p0 = np.asarray(p0, dtype=float)
    pvec_norm = np.asarray(pvec_norm, dtype=float)
    damping = np.exp(-params.lam ** 2 * (2.0 * pvec_norm * pvec_norm + params.m ** 2))
    denominator = -p0 * p0 + pvec_norm * pvec_norm + params.m ** 2 - 1j * epsilon
    return -1j / (2.0 * math.pi) ** 4 * damping / denominator


def p0_pole(omega: np.ndarray, epsilon: float) -> np.ndarray:
    """Полюс ядра в нижней полуплоскости: p_ε = √(ω² - iε), Re p_ε > 0"""
    return np.sqrt(omega.astype(complex) ** 2 - 1j * epsilon)


def p0_transform(params: ModelParams, pvec_norm: np.ndarray, t: float, epsilon: float) -> np.ndarray:
    """
    ∫dp0 e^{-ip0 t}·K(p0, |p|) для t > 0.

    K = c/(p_ε² - p0²); контур замыкается в нижней полуплоскости и охватывает
    только p_ε, поэтому интеграл равен πi·c·e^{-ip_ε t}/p_ε без остатка.
    c восстанавливается из значения ядра при p0 = 0.
    """
    omega = np.sqrt(pvec_norm * pvec_norm + params.m ** 2)
    pole = p0_pole(omega, epsilon)
    residue_weight = feynman_momentum(params, 0.0, pvec_norm, epsilon) * pole * pole
    return math.pi * 1j * residue_weight * np.exp(-1j * pole * t) / pole


def feynman_inverse_transform(params: ModelParams, t: float, r: float, epsilon: float = 1e-6,
                              spec: Optional[QuadratureSpec] = None) -> complex:
    """
    ΔF,λ(t, r) обратным 2-мерным преобразованием по (p0, |p|) от feynman_momentum.
    Используется четность по t; t = 0 не поддерживается (нет подавления хвоста).
    """
    spec = spec or QuadratureSpec()
    t = abs(float(t))
    if t == 0.0:
        raise DomainError("momentum-space oracle needs t != 0")
    if r < 0:
        raise DomainError("spatial separation r must be >= 0")
    p, w = gaussian_quadrature_mesh(spec.p_max(params.lam), spec.oracle_nodes)
    inner = p0_transform(params, p, t, epsilon)
    return complex(np.sum(w * 4.0 * math.pi * p * p * sinc_factor(p, r) * inner))


def bessel_k1(z: float, nodes: int = 512) -> float:
    """K₁(z) = ∫₀^∞ e^{-z cosh θ} cosh θ dθ, отрезок обрезан при e^{-z(cosh θ - 1)} = e^{-50}"""
    if z <= 0:
        raise DomainError(f"K1 integral representation needs z > 0, got {z}")
    theta_max = math.acosh(1.0 + 50.0 / z)
    theta, w = gaussian_quadrature_mesh(theta_max, nodes)
    cosh = np.cosh(theta)
    return float(np.sum(w * np.exp(-z * cosh) * cosh))


def classical_wightman_oracle(params: ModelParams, r: float, spec: Optional[QuadratureSpec] = None) -> float:
    """Недеформированная Δ+ в пространственноподобной точке: (m/(4π²r))·K₁(mr)"""
    if not r > 0:
        raise DomainError("classical Wightman function diverges at r = 0")
    nodes = (spec or QuadratureSpec()).oracle_nodes
    return params.m / (4.0 * math.pi ** 2 * r) * bessel_k1(params.m * r, nodes)


def richardson_lambda_limit(values: Sequence[float], lambdas: Sequence[float]) -> float:
    """Экстраполяция к λ → 0 полиномом по λ² через все точки"""
    if len(values) != len(lambdas) or len(values) < 2:
        raise ParameterError("Richardson extrapolation needs matching value/lambda lists of length >= 2")
    x = np.asarray(lambdas, dtype=float) ** 2
    coeffs = np.polyfit(x, np.asarray(values, dtype=float), len(values) - 1)
    return float(coeffs[-1])
