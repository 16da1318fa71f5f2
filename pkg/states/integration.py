#!/usr/bin/env python3
"""
Интегрирование подынтегральных выражений по свободным вершинам

mc     - Монте-Карло: время равномерно на носителе весов, пространство -
         шар радиуса R+δ (uniform) или экспоненциальная радиальная плотность
         с показателем m (radial); блоки с подпоследовательностями SeedSequence
tensor - произведение сеток Гаусса по (t, r, cos θ, φ) для каждой свободной вершины
radial - одна свободная вершина и фиксированные вершины в пространственном начале:
         двумерная сетка (t, r)
"""

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from enum import Enum
from typing import Callable, Dict, List, NamedTuple, Optional, Sequence, Tuple

import numpy as np

from config.qst_config import GUARDS, get_thread_count
from functionals.integrand import IntegrandExpression, term_values, weight_values
from functionals.terms import MonomialTerm
from model.cutoffs import CutoffSpec, spatial_cutoff
from propagators.evaluator import PropagatorEvaluator
from propagators.kinds import QuadratureSpec
from utils.errors import ComplexityGuardError, NumericError, ParameterError
from utils.quadrature_utils import composite_gauss_mesh, gaussian_quadrature_mesh, panel_count

logger = logging.getLogger(__name__)

RADIAL_PANEL_WIDTH = 0.25
RADIAL_PANEL_NODES = 16
# h → 1: радиальный отрезок продлевается до затухания e^{-m r} ~ e^{-40}
SPATIAL_LIMIT_DECAY = 40.0


class IntegrationMethod(str, Enum):
    MC = "mc"
    TENSOR = "tensor"
    RADIAL = "radial"


class IntegrationResult(NamedTuple):
    value: complex
    stderr: float
    samples: int
    method: str

    def to_dict(self) -> dict:
        return {"value": {"re": self.value.real, "im": self.value.imag},
                "stderr": self.stderr, "samples": self.samples, "method": self.method}


def _group_terms(expr: IntegrandExpression) -> Dict[int, List[MonomialTerm]]:
    groups: Dict[int, List[MonomialTerm]] = {}
    for term in expr.terms:
        groups.setdefault(len(term.free_indices), []).append(term)
    return dict(sorted(groups.items()))


def _time_window(terms: Sequence[MonomialTerm], cutoffs: CutoffSpec) -> Tuple[float, float]:
    """Объединение носителей временных весов всех свободных вершин группы"""
    lo, hi = math.inf, -math.inf
    for term in terms:
        for index in term.free_indices:
            a, b = term.vertices[index].position.support(cutoffs)
            lo, hi = min(lo, a), max(hi, b)
    return lo, hi


def _fixed_value(terms: Sequence[MonomialTerm], evaluator: PropagatorEvaluator,
                 expr: IntegrandExpression) -> complex:
    empty_t = np.zeros((1, 0))
    empty_x = np.zeros((1, 0, 3))
    return complex(sum(term_values(t, empty_t, empty_x, evaluator, expr.beta, expr.config)[0] for t in terms))


def _finite(values: np.ndarray, label: str) -> np.ndarray:
    if not np.all(np.isfinite(values)):
        raise NumericError(f"non-finite integrand values in {label}")
    return values


class Integrator:
    """Интегратор выражений при фиксированных вычислителе, квадратуре и срезках"""

    def __init__(self, evaluator: PropagatorEvaluator, cutoffs: CutoffSpec,
                 spec: Optional[QuadratureSpec] = None, threads: Optional[int] = None):
        self.evaluator = evaluator
        self.cutoffs = cutoffs
        self.spec = spec or evaluator.spec
        self.threads = threads or get_thread_count()
        self.logger = logging.getLogger(self.__class__.__name__)

    # ------------------------------------------------------------------
    # общий вход
    # ------------------------------------------------------------------
    def integrate(self, expr: IntegrandExpression, method: str = "mc",
                  spatial_limit: bool = False) -> IntegrationResult:
        method = IntegrationMethod(method)
        if expr.is_empty:
            return IntegrationResult(0j, 0.0, 0, method.value)
        groups = _group_terms(expr)
        value = 0j
        variance = 0.0
        samples = 0
        for free, terms in groups.items():
            if free == 0:
                value += _fixed_value(terms, self.evaluator, expr)
                continue
            if method is IntegrationMethod.MC:
                v, s, n = self._mc_group(expr, free, terms)
            elif method is IntegrationMethod.TENSOR:
                v, s, n = self._tensor_group(expr, free, terms)
            else:
                v, s, n = self._radial_group(expr, free, terms, spatial_limit)
            value += v
            variance += s * s
            samples += n
        self.logger.debug(f"🔍 {method.value}: {value:.6e} ± {math.sqrt(variance):.2e} ({samples} points)")
        return IntegrationResult(complex(value), math.sqrt(variance), samples, method.value)

    # ------------------------------------------------------------------
    # Монте-Карло
    # ------------------------------------------------------------------
    def _sample_space(self, rng: np.random.Generator, shape: Tuple[int, int]) -> Tuple[np.ndarray, np.ndarray]:
        """Точки в шаре радиуса R+δ и веса 1/плотность"""
        radius = self.cutoffs.spatial_support_radius
        direction = rng.normal(size=shape + (3,))
        direction /= np.linalg.norm(direction, axis=-1, keepdims=True)
        if self.spec.sampler == "uniform":
            r = radius * rng.random(shape) ** (1.0 / 3.0)
            weight = np.full(shape, 4.0 * math.pi * radius ** 3 / 3.0)
        else:
            rate = self.evaluator.params.m
            mass = -math.expm1(-rate * radius)
            r = -np.log1p(-rng.random(shape) * mass) / rate
            weight = mass * 4.0 * math.pi * r * r * np.exp(rate * r) / rate
        return direction * r[..., None], weight

    def _mc_chunk(self, expr: IntegrandExpression, free: int, terms: Sequence[MonomialTerm],
                  window: Tuple[float, float], group: int, chunk: int, size: int) -> Tuple[complex, float]:
        rng = np.random.default_rng(np.random.SeedSequence(self.spec.seed, spawn_key=(group, chunk)))
        lo, hi = window
        free_t = lo + (hi - lo) * rng.random((size, free))
        free_x, space_weight = self._sample_space(rng, (size, free))
        density = (hi - lo) ** free * np.prod(space_weight, axis=1)
        values = np.zeros(size, dtype=complex)
        for term in terms:
            values += term_values(term, free_t, free_x, self.evaluator, expr.beta, expr.config) * \
                weight_values(term, free_t, free_x, self.cutoffs)
        values = _finite(values * density, "Monte Carlo chunk")
        return complex(values.sum()), float(np.sum(np.abs(values) ** 2))

    def _mc_group(self, expr: IntegrandExpression, free: int,
                  terms: Sequence[MonomialTerm]) -> Tuple[complex, float, int]:
        total = self.spec.mc_samples
        size = self.spec.chunk_size
        chunks = [(i, min(size, total - i * size)) for i in range(math.ceil(total / size))]
        window = _time_window(terms, self.cutoffs)
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            results = list(pool.map(lambda c: self._mc_chunk(expr, free, terms, window, free, c[0], c[1]), chunks))
        # фиксированный порядок суммирования
        sums = np.array([r[0] for r in results])
        squares = np.array([r[1] for r in results])
        mean = complex(sums.sum()) / total
        second = float(squares.sum()) / total
        variance = max(second - abs(mean) ** 2, 0.0) / max(total - 1, 1)
        return mean, math.sqrt(variance), total

    # ------------------------------------------------------------------
    # тензорная сетка
    # ------------------------------------------------------------------
    def _tensor_group(self, expr: IntegrandExpression, free: int,
                      terms: Sequence[MonomialTerm]) -> Tuple[complex, float, int]:
        dimension = 4 * free
        if dimension > GUARDS["max_tensor_dimension"]:
            raise ComplexityGuardError("max-tensor-dimension",
                                       f"tensor integration over {dimension} dimensions (limit "
                                       f"{GUARDS['max_tensor_dimension']}); use method=mc",
                                       GUARDS["max_tensor_dimension"])
        n = self.spec.tensor_nodes
        points = n ** dimension
        if points > GUARDS["max_tensor_points"]:
            raise ComplexityGuardError("max-tensor-points",
                                       f"{points} tensor points exceed {GUARDS['max_tensor_points']}; "
                                       f"lower tensor_nodes", GUARDS["max_tensor_points"])
        lo, hi = _time_window(terms, self.cutoffs)
        t, wt = gaussian_quadrature_mesh(hi, n, xmin=lo)
        r, wr = gaussian_quadrature_mesh(self.cutoffs.spatial_support_radius, n)
        c, wc = gaussian_quadrature_mesh(1.0, n, xmin=-1.0)
        phi, wphi = gaussian_quadrature_mesh(2.0 * math.pi, n)

        grids = np.meshgrid(*([t, r, c, phi] * free), indexing="ij")
        weights = np.meshgrid(*([wt, wr * r * r, wc, wphi] * free), indexing="ij")
        coords = np.stack([g.ravel() for g in grids], axis=1).reshape(-1, free, 4)
        jacobian = np.prod(np.stack([w.ravel() for w in weights], axis=1), axis=1)

        sine = np.sqrt(np.clip(1.0 - coords[..., 2] ** 2, 0.0, None))
        free_t = coords[..., 0]
        free_x = np.stack((coords[..., 1] * sine * np.cos(coords[..., 3]),
                           coords[..., 1] * sine * np.sin(coords[..., 3]),
                           coords[..., 1] * coords[..., 2]), axis=-1)

        value = 0j
        step = self.spec.chunk_size
        for start in range(0, points, step):
            sl = slice(start, start + step)
            chunk = np.zeros(jacobian[sl].shape, dtype=complex)
            for term in terms:
                chunk += term_values(term, free_t[sl], free_x[sl], self.evaluator, expr.beta, expr.config) * \
                    weight_values(term, free_t[sl], free_x[sl], self.cutoffs)
            value += complex(np.sum(_finite(chunk, "tensor grid") * jacobian[sl]))
        return value, 0.0, points

    # ------------------------------------------------------------------
    # радиальная сетка
    # ------------------------------------------------------------------
    def _radial_group(self, expr: IntegrandExpression, free: int, terms: Sequence[MonomialTerm],
                      spatial_limit: bool) -> Tuple[complex, float, int]:
        if free != 1:
            raise ParameterError(f"radial method needs exactly one free vertex per term, got {free}")
        radius = self.cutoffs.spatial_support_radius
        if spatial_limit:
            radius = max(radius, SPATIAL_LIMIT_DECAY / self.evaluator.params.m)
        r, wr = composite_gauss_mesh(0.0, radius, panel_count(radius, RADIAL_PANEL_WIDTH), RADIAL_PANEL_NODES)

        value = 0j
        points = 0
        for term in terms:
            fixed_times = []
            for vertex in term.vertices:
                if vertex.is_free:
                    continue
                if any(vertex.position.x):
                    raise ParameterError("radial method needs every fixed vertex at the spatial origin")
                fixed_times.append(vertex.position.t + vertex.shift.real)
            index = term.free_indices[0]
            tag = term.vertices[index].position
            lo, hi = tag.support(self.cutoffs)
            shift = term.vertices[index].shift.real
            # изломы ΔF,λ на совпадающих временах
            breaks = sorted({lo, hi} | {s - shift for s in fixed_times if lo < s - shift < hi})
            t_nodes, t_weights = [], []
            for a, b in zip(breaks, breaks[1:]):
                x, w = composite_gauss_mesh(a, b, panel_count(b - a, RADIAL_PANEL_WIDTH), RADIAL_PANEL_NODES)
                t_nodes.append(x)
                t_weights.append(w)
            t = np.concatenate(t_nodes)
            wt = np.concatenate(t_weights)

            tt, rr = np.meshgrid(t, r, indexing="ij")
            free_t = tt.reshape(-1, 1)
            free_x = np.zeros((free_t.shape[0], 1, 3))
            free_x[:, 0, 0] = rr.ravel()
            weights = tag.temporal(self.cutoffs, free_t[:, 0])
            if not spatial_limit:
                weights = weights * spatial_cutoff(self.cutoffs, rr.ravel())
            jacobian = (wt[:, None] * (4.0 * math.pi * wr * r * r)[None, :]).ravel()
            values = term_values(term, free_t, free_x, self.evaluator, expr.beta, expr.config)
            value += complex(np.sum(_finite(values * weights, "radial grid") * jacobian))
            points += jacobian.size
        return value, 0.0, points


def integrate(expr: IntegrandExpression, evaluator: PropagatorEvaluator, cutoffs: CutoffSpec,
              method: str = "mc", spec: Optional[QuadratureSpec] = None,
              spatial_limit: bool = False) -> IntegrationResult:
    return Integrator(evaluator, cutoffs, spec).integrate(expr, method, spatial_limit)


def integrate_function(fn: Callable[[np.ndarray], np.ndarray], domain: Sequence[Tuple[float, float]],
                       samples: int, seed: int) -> IntegrationResult:
    """Простой Монте-Карло векторизованной функции по прямоугольной области"""
    lows = np.array([d[0] for d in domain], dtype=float)
    highs = np.array([d[1] for d in domain], dtype=float)
    if np.any(highs <= lows):
        raise ParameterError(f"integration domain must have hi > lo on every axis, got {domain}")
    volume = float(np.prod(highs - lows))
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    x = lows + (highs - lows) * rng.random((samples, len(domain)))
    values = _finite(np.asarray(fn(x), dtype=complex) * volume, "integrate_function")
    mean = complex(values.mean())
    stderr = float(np.sqrt(values.real.var(ddof=1) + values.imag.var(ddof=1)) / math.sqrt(samples))
    return IntegrationResult(mean, stderr, samples, "mc")


def tree_bound_diagnostic(m: float, samples: int, seed: int) -> Tuple[IntegrationResult, float]:
    """
    ∫_{ℝ³} e^{-m|x|} d³x экспоненциальной выборкой r ~ m e^{-m r} (без срезки);
    возвращает (оценку, точное значение 8π/m³).
    """
    if not m > 0:
        raise ParameterError(f"mass must be positive, got {m}")
    rng = np.random.default_rng(np.random.SeedSequence(seed))
    r = rng.exponential(1.0 / m, samples)
    values = 4.0 * math.pi * r * r / m
    mean = float(values.mean())
    stderr = float(values.std(ddof=1) / math.sqrt(samples))
    return IntegrationResult(complex(mean), stderr, samples, "mc"), 8.0 * math.pi / m ** 3
