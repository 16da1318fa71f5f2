#!/usr/bin/env python3
"""
Вычисление гауссово-затухающих двухточечных ядер

Все ядра сводятся к изотропному радиальному преобразованию
    (1/(2π²)) ∫₀^{p_max} dp p² F(p; t, u) sinc(p r),   ω = √(p² + m²),
с модовыми амплитудами (D = e^{-λ²(2p²+m²)}, τ = t - iu):
    Δ+,λ            D e^{-iτω}/(2ω)
    Δλ              -D sin(τω)/ω            (Δ+(t) - Δ+(-t) = iΔλ(t))
    Δβ,λ            D/(2ω) [(1+n)e^{-iτω} + n e^{iτω}],   n = 1/(e^{βω} - 1)
    Δβ,λ - Δ+,λ     D/(2ω) n [e^{-iτω} + e^{iτω}]
Тепловые амплитуды записаны через e^{-uω}, e^{-(β∓u)ω} и expm1, чтобы не было переполнений.
Feynman/Advanced/Retarded/Dirac собираются из Δ+ и Δλ через θ-функции (только u = 0).
"""

import logging
import math
from functools import lru_cache
from typing import Dict, Optional, Tuple

import numpy as np

from model.geometry import ModelParams
from propagators.cache import PropagatorCache, propagator_cache
from propagators.kinds import (
    KernelFamily,
    PropagatorKind,
    QuadratureSpec,
    THETA_COMPOSED,
    thermal_minus_vacuum,
    WIGHTMAN_PLUS,
)
from utils.errors import DomainError, NumericError, ParameterError
from utils.quadrature_utils import gaussian_quadrature_mesh

logger = logging.getLogger(__name__)

SINC_SERIES_THRESHOLD = 1e-4
CHUNK_ELEMENTS = 1 << 21
BUCKET_MARGIN = 64


def sinc_factor(p: np.ndarray, r: np.ndarray) -> np.ndarray:
    """sin(pr)/(pr) с разложением 1 - x²/6 при |pr| < 1e-4"""
    x = p * r
    small = np.abs(x) < SINC_SERIES_THRESHOLD
    safe = np.where(small, 1.0, x)
    return np.where(small, 1.0 - x * x / 6.0, np.sin(safe) / safe)


def mode_amplitude(family: KernelFamily, params: ModelParams, p: np.ndarray, t: np.ndarray,
                   u: np.ndarray, beta: Optional[float] = None) -> np.ndarray:
    """Модовая амплитуда F(p; t, u); p - последняя ось, t и u транслируются"""
    lam2 = params.lam ** 2
    damping = np.exp(-lam2 * (2.0 * p * p + params.m ** 2))
    omega = np.sqrt(p * p + params.m ** 2)
    if family is KernelFamily.WIGHTMAN_PLUS:
        return damping * np.exp(-1j * omega * t - u * omega) / (2.0 * omega)
    if family is KernelFamily.PAULI_JORDAN:
        return -damping * np.sin(omega * (t - 1j * u)) / omega
    bose = 1.0 / (-np.expm1(-beta * omega))
    if family is KernelFamily.THERMAL:
        waves = np.exp(-1j * omega * t - u * omega) + np.exp(1j * omega * t - (beta - u) * omega)
    elif family is KernelFamily.THERMAL_MINUS_VACUUM:
        waves = np.exp(-1j * omega * t - (beta + u) * omega) + np.exp(1j * omega * t - (beta - u) * omega)
    else:
        raise ParameterError(f"{family.value} has no direct mode amplitude")
    return damping * bose * waves / (2.0 * omega)


class PropagatorEvaluator:
    """
    Вычислитель ядер для фиксированных ModelParams и QuadratureSpec.

    Аргументы квантуются шагом кэша до вычисления, поэтому результат
    не зависит от того, включен ли кэш и в каком пакете пришла точка.
    """

    def __init__(self, params: ModelParams, spec: Optional[QuadratureSpec] = None,
                 cache: Optional[PropagatorCache] = None):
        self.params = params
        self.spec = spec or QuadratureSpec()
        self.cache = cache if cache is not None else propagator_cache
        self.logger = logging.getLogger(self.__class__.__name__)
        self.p_max = self.spec.p_max(params.lam)
        self.omega_max = math.sqrt(self.p_max ** 2 + params.m ** 2)
        self._meshes: Dict[int, Tuple[np.ndarray, np.ndarray]] = {}
        self._key_prefix = (params.m, params.lam, self.spec.nodes, self.spec.p_max_sigmas)

    # ------------------------------------------------------------------
    # радиальная квадратура
    # ------------------------------------------------------------------
    def _mesh(self, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
        mesh = self._meshes.get(nodes)
        if mesh is None:
            p, w = gaussian_quadrature_mesh(self.p_max, nodes)
            mesh = (p, w * p * p / (2.0 * math.pi ** 2))
            self._meshes[nodes] = mesh
        return mesh

    def node_bucket(self, t: np.ndarray, r: np.ndarray) -> np.ndarray:
        """Число узлов для точки: базовое или степень двойки по фазе ω_max|t| + p_max r"""
        phase = self.omega_max * np.abs(t) + self.p_max * np.abs(r)
        required = (phase / 2.0).astype(np.int64) + BUCKET_MARGIN
        bucket = np.full(required.shape, self.spec.nodes, dtype=np.int64)
        large = required > self.spec.nodes
        if np.any(large):
            bucket[large] = 2 ** np.ceil(np.log2(required[large])).astype(np.int64)
        return bucket

    def _radial_transform(self, family: KernelFamily, beta: Optional[float], t: np.ndarray,
                          u: np.ndarray, r: np.ndarray) -> np.ndarray:
        """Радиальное преобразование для одномерных массивов одинаковой длины"""
        out = np.empty(t.shape, dtype=complex)
        buckets = self.node_bucket(t, r)
        for nodes in np.unique(buckets):
            idx = np.nonzero(buckets == nodes)[0]
            p, weights = self._mesh(int(nodes))
            rows = max(1, CHUNK_ELEMENTS // int(nodes))
            for start in range(0, idx.size, rows):
                sel = idx[start:start + rows]
                tt = t[sel][:, None]
                uu = u[sel][:, None]
                rr = r[sel][:, None]
                vals = mode_amplitude(family, self.params, p[None, :], tt, uu, beta)
                vals = vals * sinc_factor(p[None, :], rr)
                out[sel] = (vals * weights[None, :]).sum(axis=-1)
        return out

    def _base_values(self, family: KernelFamily, beta: Optional[float], t: np.ndarray,
                     u: np.ndarray, r: np.ndarray) -> np.ndarray:
        """Квантование аргументов, кэш, вычисление промахов"""
        q = self.cache.quantum
        qt = np.rint(t / q).astype(np.int64)
        qu = np.rint(u / q).astype(np.int64)
        qr = np.rint(r / q).astype(np.int64)
        if not self.cache.enabled:
            return self._radial_transform(family, beta, qt * q, qu * q, qr * q)

        prefix = self._key_prefix + (family.value, beta)
        out = np.empty(t.shape, dtype=complex)
        keys = [prefix + (a, b, c) for a, b, c in zip(qt.tolist(), qu.tolist(), qr.tolist())]
        missing = []
        for i, key in enumerate(keys):
            value = self.cache.get(key)
            if value is None:
                missing.append(i)
            else:
                out[i] = value
        if missing:
            idx = np.asarray(missing, dtype=np.int64)
            values = self._radial_transform(family, beta, qt[idx] * q, qu[idx] * q, qr[idx] * q)
            out[idx] = values
            for i, value in zip(missing, values.tolist()):
                self.cache.set(keys[i], value)
        return out

    # ------------------------------------------------------------------
    # публичный интерфейс
    # ------------------------------------------------------------------
    def evaluate_many(self, kind: PropagatorKind, t, u=0.0, r=0.0) -> np.ndarray:
        """Значения ядра в массивах точек (t - iu, r); формы транслируются"""
        t, u, r = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(u, dtype=float),
                                      np.asarray(r, dtype=float))
        shape = t.shape
        t, u, r = t.ravel(), u.ravel(), r.ravel()
        if not (np.all(np.isfinite(t)) and np.all(np.isfinite(u)) and np.all(np.isfinite(r))):
            raise NumericError(f"non-finite propagator arguments for {kind.label}")
        if np.any(r < 0):
            raise DomainError("spatial separation r must be >= 0")
        if np.any(u < 0):
            raise DomainError("imaginary-time offset u must be >= 0")

        family = kind.family
        if kind.is_thermal and np.any(u > kind.beta):
            raise DomainError(f"{kind.label} requires u <= beta={kind.beta}, got u={float(np.max(u))}")
        if family in THETA_COMPOSED and np.any(u != 0):
            raise DomainError(f"{kind.label} is defined at real times only (u = 0)")

        if family is KernelFamily.FEYNMAN:
            values = self._base_values(KernelFamily.WIGHTMAN_PLUS, None, np.abs(t), u, r)
        elif family in (KernelFamily.ADVANCED, KernelFamily.RETARDED, KernelFamily.DIRAC):
            commutator = self._base_values(KernelFamily.PAULI_JORDAN, None, t, u, r)
            if family is KernelFamily.ADVANCED:
                values = np.where(t < 0, -commutator, 0.0)
            elif family is KernelFamily.RETARDED:
                values = np.where(t > 0, commutator, 0.0)
            else:
                values = 0.5j * np.sign(t) * commutator
        else:
            values = self._base_values(family, kind.beta, t, u, r)

        if not np.all(np.isfinite(values)):
            raise NumericError(f"non-finite {kind.label} values")
        return values.reshape(shape)

    def evaluate(self, kind: PropagatorKind, t: float, u: float = 0.0, r: float = 0.0) -> complex:
        return complex(self.evaluate_many(kind, t, u, r).reshape(-1)[0])

    def thermal_mass_shift(self, beta: float) -> float:
        """m_{β,λ} = (Δβ,λ - Δ+,λ)(0)"""
        return self.evaluate(thermal_minus_vacuum(beta), 0.0, 0.0, 0.0).real

    def bound(self) -> float:
        """(1/(2π)³)∫d³p D/(2ω) = Δ+,λ(0): верхняя граница |Δ+,λ| и |ΔF,λ|"""
        return self.evaluate(WIGHTMAN_PLUS, 0.0, 0.0, 0.0).real


@lru_cache(maxsize=32)
def get_evaluator(params: ModelParams, spec: Optional[QuadratureSpec] = None) -> PropagatorEvaluator:
    """Общий вычислитель на пару (params, spec) с глобальным кэшем"""
    return PropagatorEvaluator(params, spec)


def evaluate_propagator(kind: PropagatorKind, params: ModelParams, t: float, u: float = 0.0,
                        r: float = 0.0, spec: Optional[QuadratureSpec] = None) -> complex:
    """Операция eval: значение ядра kind в точке (t - iu, r)"""
    return get_evaluator(params, spec or QuadratureSpec()).evaluate(kind, t, u, r)
