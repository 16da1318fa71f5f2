#!/usr/bin/env python3
"""
Взаимодействующая эволюция во времени

ω(α_t^V R_V(A)) = Σ_n iⁿ ∫_{tSₙ} ω([K_{-t₁},[…,[K_{-tₙ}, R_V(A)]…]]),
tSₙ = {0 < tₙ < … < t₁ < t}, K = R_V(V̇) - генератор коцикла.
Независимая проверка: ω(U(t) ⋆ α_t R_V(A) ⋆ U(t)⁻¹).
Кластеризация: D(t) = ωᶜ(A ⊗ α_t^V B) в первом порядке, аппроксимация |D| ~ t^p.
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Iterator, List, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy.stats import linregress

from config.qst_config import DECAY_WINDOWS, GUARDS, SCAN_DEFAULTS
from functionals.algebra import Functional, commutator, translate
from functionals.coefficients import IMAG_UNIT
from functionals.evaluation import connected_part, state_reduce
from model.cutoffs import CutoffSpec
from perturbation.bogoliubov import bogoliubov
from perturbation.cocycle import cocycle, cocycle_interaction, generator
from perturbation.interaction import Interaction
from perturbation.smatrix import series_inverse
from propagators.evaluator import PropagatorEvaluator
from propagators.kinds import QuadratureSpec
from states.expectation import state_integral
from states.integration import IntegrationResult
from states.spec import ScanPoint, ScanResult, StateKind, StateSpec
from utils.errors import ComplexityGuardError, DomainError, NumericError, ParameterError
from utils.quadrature_utils import gaussian_quadrature_mesh, simplex_mesh

logger = logging.getLogger(__name__)

CLUSTERING_COLUMNS = ["t", "re", "im", "abs"]


def _state_beta(state: Optional[StateSpec]) -> Optional[float]:
    """Эволюция определена для инвариантных состояний: вакуум и KMS"""
    if state is None or state.kind is StateKind.VACUUM:
        return None
    if state.kind is StateKind.THERMAL:
        return state.beta
    raise ParameterError("time evolution needs a time-invariant state (vacuum or thermal)")


def _commutator_order(k: int, commutator_order: Optional[int]) -> int:
    limit = GUARDS["max_commutator_order"]
    n_max = min(k, limit) if commutator_order is None else commutator_order
    if n_max < 0 or n_max > limit:
        raise ComplexityGuardError("max-commutator-order",
                                   f"commutator order {n_max} outside 0..{limit}", limit)
    if n_max < k:
        logger.warning(f"⚠️ Commutator expansion truncated at n={n_max} below coupling order {k}")
    return n_max


def _order_splits(k: int, n: int) -> Iterator[Tuple[Tuple[int, ...], int]]:
    """Порядки (j₁..jₙ) генераторов и l наблюдаемой: Σ(jᵢ + 1) + l = k"""
    for orders in itertools.product(range(k), repeat=n):
        rest = k - n - sum(orders)
        if rest >= 0:
            yield orders, rest


def nested_commutator(generators: Sequence[Functional], inner: Functional) -> Functional:
    """[G₁,[G₂,…,[Gₙ, inner]…]]"""
    result = inner
    for G in reversed(generators):
        result = commutator(G, result)
    return result


def commutator_expansion(R, K, t: float, k: int, n_max: int, nodes: int) -> Functional:
    """Коэффициент порядка k разложения по коммутаторам; узлы симплекса сведены в один функционал"""
    total = R[k]
    for n in range(1, n_max + 1):
        points, weights = simplex_mesh(t, n, nodes)
        phase = IMAG_UNIT ** n
        for orders, rest in _order_splits(k, n):
            if R[rest].is_zero or any(K[j].is_zero for j in orders):
                continue
            for node, weight in zip(points.tolist(), weights.tolist()):
                shifted = [translate(K[j], -s, 0.0) for j, s in zip(orders, node)]
                total = total + nested_commutator(shifted, R[rest]).scale(phase * weight)
    return total


def time_evolution_expectation(A: Functional, V: Interaction, t: float, evaluator: PropagatorEvaluator,
                               cutoffs: CutoffSpec, k: int = 1, commutator_order: Optional[int] = None,
                               state: Optional[StateSpec] = None, method: str = "mc",
                               spec: Optional[QuadratureSpec] = None,
                               nodes: int = SCAN_DEFAULTS["simplex_nodes"]) -> IntegrationResult:
    if t < 0:
        raise DomainError(f"time evolution is expanded for t >= 0, got t={t}")
    beta = _state_beta(state)
    n_max = _commutator_order(k, commutator_order)
    V = cocycle_interaction(V, t)
    R = bogoliubov(V, A, k)
    if t == 0 or k == 0:
        reduced = state_reduce(R[k], beta)
    else:
        K = generator(V, k - 1)
        reduced = state_reduce(commutator_expansion(R, K, t, k, n_max, nodes), beta)
    logger.info(f"⏱️ Evolution t={t:g}, order {k}, n<={n_max}: {len(reduced)} reduced terms")
    return state_integral(reduced, evaluator, cutoffs, beta, method, spec, k, "evolution")


def cocycle_conjugation_expectation(A: Functional, V: Interaction, t: float, evaluator: PropagatorEvaluator,
                                    cutoffs: CutoffSpec, k: int = 1, state: Optional[StateSpec] = None,
                                    method: str = "mc",
                                    spec: Optional[QuadratureSpec] = None) -> IntegrationResult:
    """ω(U(t) ⋆ α_t R_V(A) ⋆ U(t)⁻¹) в порядке k"""
    if t < 0:
        raise DomainError(f"cocycle conjugation needs t >= 0, got t={t}")
    beta = _state_beta(state)
    V = cocycle_interaction(V, t)
    U = cocycle(V, t, k).series
    R = bogoliubov(V, A, k).series.map(lambda F: translate(F, t, 0.0))
    conjugated = U.star(R).star(series_inverse(U))
    reduced = state_reduce(conjugated[k], beta)
    return state_integral(reduced, evaluator, cutoffs, beta, method, spec, k, "cocycle")


def evolution_scan(A: Functional, V: Interaction, times: Sequence[float], evaluator: PropagatorEvaluator,
                   cutoffs: CutoffSpec, state: Optional[StateSpec] = None, k: int = 1,
                   method: str = "mc", spec: Optional[QuadratureSpec] = None,
                   tolerance: float = SCAN_DEFAULTS["tolerance"], commutator_order: Optional[int] = None,
                   nodes: int = SCAN_DEFAULTS["simplex_nodes"]) -> ScanResult:
    """
    ω(α_t^V R_V(A)) по возрастающим t. В тепловом состоянии - профиль
    возврата к равновесию, стремящийся к interacting_kms.
    """
    times = [float(t) for t in times]
    if not times:
        raise ParameterError("evolution scan needs at least one time")
    points = []
    for t in times:
        result = time_evolution_expectation(A, V, t, evaluator, cutoffs, k, commutator_order, state, method, spec,
                                            nodes)
        logger.info(f"⏱️ t={t:g}: {result.value.real:.6e}{result.value.imag:+.6e}i ± {result.stderr:.2e}")
        points.append(ScanPoint(t, result.value, result.stderr, result.samples))
    return ScanResult(tuple(points), tolerance, "t")


# ----------------------------------------------------------------------
# кластеризация
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class ClusteringResult:
    times: Tuple[float, ...]
    values: Tuple[complex, ...]
    exponent: float
    intercept: float
    rvalue: float

    @property
    def decays(self) -> bool:
        return self.exponent < 0

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame({
            "t": list(self.times),
            "re": [v.real for v in self.values],
            "im": [v.imag for v in self.values],
            "abs": [abs(v) for v in self.values],
        }, columns=CLUSTERING_COLUMNS)

    def to_dict(self) -> dict:
        return {
            "exponent": self.exponent,
            "intercept": self.intercept,
            "rvalue": self.rvalue,
            "points": [{"t": t, "value": {"re": v.real, "im": v.imag}} for t, v in zip(self.times, self.values)],
        }


def _edge_mesh(t: float, edge: float, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """Гаусс на [0, t] со сгущением у обоих концов (окна ширины edge)"""
    edge = min(edge, t / 2.0)
    pieces = [(0.0, edge), (edge, t - edge), (t - edge, t)]
    xs, ws = [], []
    for a, b in pieces:
        if b > a:
            x, w = gaussian_quadrature_mesh(b, nodes, xmin=a)
            xs.append(x)
            ws.append(w)
    return np.concatenate(xs), np.concatenate(ws)


def clustering_value(A: Functional, B: Functional, V: Interaction, t: float, evaluator: PropagatorEvaluator,
                     cutoffs: CutoffSpec, beta: Optional[float] = None, nodes: int = 16,
                     spec: Optional[QuadratureSpec] = None) -> complex:
    """D(t) = ωᶜ(A ⊗ B_t) + i∫₀^t dt₁ ωᶜ(A ⊗ [V̇_{t₁}, B_t])"""
    B_t = translate(B, t, 0.0)
    free_part = connected_part([A, B_t], beta)
    K = generator(V, 0)[0]
    t_nodes, t_weights = _edge_mesh(t, 4.0 / evaluator.params.m, nodes)
    first = Functional.zero()
    for s, weight in zip(t_nodes.tolist(), t_weights.tolist()):
        inner = commutator(translate(K, s, 0.0), B_t)
        first = first + connected_part([A, inner], beta).scale(IMAG_UNIT * weight)
    value = state_integral(free_part, evaluator, cutoffs, beta, "radial", spec, 0, "clustering").value
    value += state_integral(first, evaluator, cutoffs, beta, "radial", spec, 1, "clustering",
                            spatial_limit=True).value
    return complex(value)


def clustering_diagnostic(A: Functional, B: Functional, V: Interaction, evaluator: PropagatorEvaluator,
                          cutoffs: CutoffSpec, times: Optional[Sequence[float]] = None,
                          state: Optional[StateSpec] = None, nodes: int = 16,
                          spec: Optional[QuadratureSpec] = None) -> ClusteringResult:
    """
    Затухание D(t) в первом порядке и показатель p аппроксимации log|D| = p·log t + c.
    A и B - фиксированные вершины в пространственном начале (радиальная сетка).
    """
    beta = _state_beta(state)
    if times is None:
        lo, hi = DECAY_WINDOWS["temporal"]
        m = evaluator.params.m
        times = np.geomspace(lo / m, hi / m, DECAY_WINDOWS["points"]).tolist()
    times = [float(t) for t in times]
    if len(times) < 2 or any(t <= 0 for t in times):
        raise ParameterError(f"clustering fit needs at least two positive times, got {times}")

    values: List[complex] = []
    for t in times:
        value = clustering_value(A, B, V, t, evaluator, cutoffs, beta, nodes, spec)
        logger.debug(f"🔍 D({t:g}) = {value:.6e}")
        values.append(value)

    magnitudes = np.abs(np.array(values))
    mask = magnitudes > 0
    if mask.sum() < 2:
        raise NumericError("clustering fit needs at least two nonzero values of D(t)")
    fit = linregress(np.log(np.array(times)[mask]), np.log(magnitudes[mask]))
    logger.info(f"📉 Clustering exponent {fit.slope:.3f} (r={fit.rvalue:.3f}) over t in [{times[0]:g}, {times[-1]:g}]")
    if not math.isfinite(fit.slope):
        raise NumericError("clustering fit produced a non-finite exponent")
    return ClusteringResult(tuple(times), tuple(values), float(fit.slope), float(fit.intercept), float(fit.rvalue))
