#!/usr/bin/env python3
"""
Взаимодействующее KMS-состояние в усечении n₁ + n₂ ≤ 1

ω^V_β(A)_k = ω_β(R_V(A)_k)
           - Σ_{j+1+l=k} ∫₀^{β/2} dw [ωᶜ_β(α_{-iw}K_j ⊗ R_l) + ωᶜ_β(α_{-iw}R_l ⊗ K_j)],
α_{-iw} - сдвиг в мнимом времени translate(·, 0, w). При beta=None (вакуум)
интеграл берется по w ∈ [0, ∞).
"""

import logging
import math
from typing import Optional

from config.qst_config import GUARDS, SCAN_DEFAULTS
from functionals.algebra import Functional, translate
from functionals.evaluation import connected_part
from model.cutoffs import CutoffSpec
from perturbation.bogoliubov import bogoliubov
from perturbation.cocycle import generator
from perturbation.interaction import Interaction
from perturbation.smatrix import SeriesElement
from propagators.evaluator import PropagatorEvaluator
from propagators.kinds import QuadratureSpec
from states.expectation import state_integral
from states.integration import IntegrationResult
from utils.errors import ComplexityGuardError
from utils.quadrature_utils import exponential_mesh

logger = logging.getLogger(__name__)


def kms_correction(R: SeriesElement, K: SeriesElement, beta: Optional[float], k: int,
                   u_nodes: int, rate: float) -> Functional:
    """Сумма n = 1 членов как функционал степени 0 (узлы по w с весами)"""
    length = math.inf if beta is None else beta / 2.0
    w_nodes, w_weights = exponential_mesh(length, rate, u_nodes)
    total = Functional.zero()
    for j in range(k):
        rest = k - 1 - j
        if K[j].is_zero or R[rest].is_zero:
            continue
        for w, weight in zip(w_nodes.tolist(), w_weights.tolist()):
            left = connected_part([translate(K[j], 0.0, w), R[rest]], beta)
            right = connected_part([translate(R[rest], 0.0, w), K[j]], beta)
            total = total + (left + right).scale(-weight)
    return total


def interacting_kms(A: Functional, V: Interaction, beta: Optional[float], evaluator: PropagatorEvaluator,
                    cutoffs: CutoffSpec, k: int = 1, truncation: int = 1, method: str = "mc",
                    spec: Optional[QuadratureSpec] = None,
                    u_nodes: int = SCAN_DEFAULTS["kms_u_nodes"]) -> IntegrationResult:
    if truncation > GUARDS["max_kms_truncation"] or truncation < 0:
        raise ComplexityGuardError("max-kms-truncation",
                                   f"truncation {truncation} outside 0..{GUARDS['max_kms_truncation']}",
                                   GUARDS["max_kms_truncation"])
    if k > GUARDS["max_kms_order"]:
        raise ComplexityGuardError("max-kms-order", f"order {k} exceeds {GUARDS['max_kms_order']}",
                                   GUARDS["max_kms_order"])

    R = bogoliubov(V, A, k)
    reduced = connected_part([R[k]], beta)
    if truncation and k:
        reduced = reduced + kms_correction(R, generator(V, k), beta, k, u_nodes, evaluator.params.m)
    label = "vacuum" if beta is None else f"beta={beta:g}"
    logger.info(f"🚀 Interacting KMS ({label}, order {k}, truncation {truncation}): {len(reduced)} terms")
    return state_integral(reduced, evaluator, cutoffs, beta, method, spec, k, "interacting-kms")
