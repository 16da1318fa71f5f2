#!/usr/bin/env python3
"""
Коцикл свободной эволюции U(t) = S(V)⁻¹ ⋆ S(V - V_t⁻) и генератор K = R_V(V̇)
"""

import logging

from functionals.series import FormalSeries
from functionals.terms import VertexRole
from perturbation.bogoliubov import bogoliubov
from perturbation.interaction import Interaction
from perturbation.smatrix import SeriesElement, SeriesKind, check_order, s_inverse, s_matrix
from utils.errors import DomainError, ParameterError

logger = logging.getLogger(__name__)


def cocycle_interaction(V: Interaction, t: float) -> Interaction:
    """Взаимодействие с концом плато T ≥ t + 2ε (повышается с предупреждением)"""
    if not isinstance(V, Interaction):
        raise ParameterError("cocycle needs an Interaction with a cutoff specification")
    current = V.cutoffs.T if V.plateau_end is None else V.plateau_end
    required = t + 2.0 * V.cutoffs.eps
    if current < required:
        logger.warning(f"⚠️ Plateau end T={current} raised to {required} for the cocycle at t={t}")
        V = V.with_plateau_end(required)
    return V


def cocycle(V: Interaction, t: float, K: int) -> SeriesElement:
    if t < 0:
        raise DomainError(f"cocycle is defined for t >= 0, got t={t}")
    check_order(K)
    V = cocycle_interaction(V, t)
    if t == 0:
        return SeriesElement(FormalSeries.unit(K), SeriesKind.COCYCLE)
    S = s_matrix(V, K)
    remainder = s_matrix(V.cocycle_remainder(t), K)
    return SeriesElement(s_inverse(S).series.star(remainder.series), SeriesKind.COCYCLE)


def generator(V: Interaction, K: int) -> SeriesElement:
    """K = R_V(V̇), V̇ с ролью наблюдаемой"""
    if not isinstance(V, Interaction):
        raise ParameterError("generator needs an Interaction with a cutoff specification")
    derivative = V.derivative().functional(role=VertexRole.OBSERVABLE)
    image = bogoliubov(V, derivative, K)
    return SeriesElement(image.series, SeriesKind.GENERATOR)
