#!/usr/bin/env python3
"""
Ожидания в вакууме, тепловом и одетом состояниях; адиабатический и β-сканы
"""

import logging
from typing import Optional, Sequence, Union

from config.qst_config import SCAN_DEFAULTS
from functionals.algebra import Functional, involution, star_chain
from functionals.evaluation import evaluate, thermal_contract, vacuum_reduce
from functionals.integrand import IntegrandExpression
from model.cutoffs import CutoffSpec
from perturbation.smatrix import SeriesElement
from propagators.evaluator import PropagatorEvaluator
from propagators.kinds import QuadratureSpec
from states.integration import IntegrationResult, integrate
from states.spec import ScanPoint, ScanResult, StateKind, StateSpec
from utils.errors import ParameterError, StructureError

logger = logging.getLogger(__name__)

# относительный допуск на убывание нормы одевающего функционала
NORM_SLACK = 1e-12


def _coefficient(series: Union[SeriesElement, Functional], k: int) -> Functional:
    if isinstance(series, Functional):
        if k != 0:
            raise ParameterError("a bare functional only has order 0")
        return series
    if k > series.max_order:
        raise ParameterError(f"order {k} exceeds the series truncation {series.max_order}")
    return series[k]


def state_integral(reduced: Functional, evaluator: PropagatorEvaluator, cutoffs: CutoffSpec,
                   beta: Optional[float] = None, method: str = "mc", spec: Optional[QuadratureSpec] = None,
                   order: Optional[int] = None, provenance: str = "", spatial_limit: bool = False,
                   diagnostic: bool = False) -> IntegrationResult:
    """Интеграл функционала степени 0 (результат редукции состоянием)"""
    if reduced.is_zero:
        logger.debug("🔍 Degenerate observable: exact zero")
        return IntegrationResult(0j, 0.0, 0, method)
    if reduced.is_fixed:
        return IntegrationResult(complex(evaluate(reduced, evaluator=evaluator, beta=beta)), 0.0, 0, "exact")
    expr = IntegrandExpression(reduced.terms, beta=beta, order=order, provenance=provenance,
                               diagnostic=diagnostic)
    return integrate(expr, evaluator, cutoffs, method, spec, spatial_limit)


def dressing_norm(B: Functional, evaluator: PropagatorEvaluator) -> complex:
    """ω(B*⋆B)"""
    return complex(evaluate(vacuum_reduce(star_chain([involution(B), B])), evaluator=evaluator))


def expectation(state: StateSpec, series: Union[SeriesElement, Functional], k: int,
                evaluator: PropagatorEvaluator, cutoffs: CutoffSpec, method: str = "mc",
                spec: Optional[QuadratureSpec] = None, spatial_limit: bool = False) -> IntegrationResult:
    A = _coefficient(series, k)
    provenance = getattr(getattr(series, "provenance", None), "value", "functional")
    if state.kind is StateKind.VACUUM:
        return state_integral(vacuum_reduce(A), evaluator, cutoffs, None, method, spec, k, provenance,
                              spatial_limit)
    if state.kind is StateKind.THERMAL:
        return state_integral(thermal_contract(A), evaluator, cutoffs, state.beta, method, spec, k,
                              provenance, spatial_limit)

    B = state.dressing
    norm = dressing_norm(B, evaluator)
    if abs(norm) == 0.0:
        raise ParameterError("dressing functional has zero norm ω(B*⋆B)")
    numerator = vacuum_reduce(star_chain([involution(B), A, B]))
    result = state_integral(numerator, evaluator, cutoffs, None, method, spec, k, provenance, spatial_limit)
    return IntegrationResult(result.value / norm, result.stderr / abs(norm), result.samples, result.method)


def adiabatic_scan(state: StateSpec, series: Union[SeriesElement, Functional], k: int,
                   radii: Sequence[float], evaluator: PropagatorEvaluator, cutoffs: CutoffSpec,
                   method: str = "mc", spec: Optional[QuadratureSpec] = None,
                   tolerance: float = SCAN_DEFAULTS["tolerance"]) -> ScanResult:
    """Ожидание при возрастающих радиусах R пространственной срезки"""
    radii = [float(R) for R in radii]
    if not radii:
        raise ParameterError("adiabatic scan needs at least one radius")
    if any(b <= a for a, b in zip(radii, radii[1:])):
        raise ParameterError(f"radii must be strictly increasing, got {radii}")

    points = []
    norms = []
    for R in radii:
        result = expectation(state, series, k, evaluator, cutoffs.with_radius(R), method, spec)
        logger.info(f"📏 R={R:g}: {result.value.real:.6e}{result.value.imag:+.6e}i ± {result.stderr:.2e}")
        points.append(ScanPoint(R, result.value, result.stderr, result.samples))
        if state.kind is StateKind.DRESSED:
            norms.append(abs(dressing_norm(state.dressing, evaluator)))

    if state.monotone and any(b < a * (1 - NORM_SLACK) for a, b in zip(norms, norms[1:])):
        raise StructureError(f"dressing norms are not monotone in the support of h: {norms}")
    return ScanResult(tuple(points), tolerance, "R", tuple(norms))


def kms_scan(series: Union[SeriesElement, Functional], k: int, betas: Sequence[float],
             evaluator: PropagatorEvaluator, cutoffs: CutoffSpec, method: str = "mc",
             spec: Optional[QuadratureSpec] = None,
             tolerance: float = SCAN_DEFAULTS["tolerance"]) -> ScanResult:
    """Тепловое ожидание по возрастающим β"""
    betas = [float(b) for b in betas]
    if not betas:
        raise ParameterError("KMS scan needs at least one beta")
    points = []
    for beta in betas:
        result = expectation(StateSpec.thermal(beta), series, k, evaluator, cutoffs, method, spec)
        logger.info(f"🌡️ beta={beta:g}: {result.value.real:.6e}{result.value.imag:+.6e}i ± {result.stderr:.2e}")
        points.append(ScanPoint(beta, result.value, result.stderr, result.samples))
    return ScanResult(tuple(points), tolerance, "beta")
