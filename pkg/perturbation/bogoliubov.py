#!/usr/bin/env python3
"""
Отображение Боголюбова R_V(A) = S(V)⁻¹ ⋆ (S(V)·T A), его обратное
A = S(-V)·T(S(V) ⋆ B) и взаимодействующее произведение
"""

import logging
from typing import Union

from config.qst_config import GUARDS
from functionals.algebra import Functional
from functionals.series import FormalSeries
from perturbation.interaction import InteractionLike, interaction_degree, interaction_functional
from perturbation.smatrix import SeriesElement, SeriesKind, check_order, exponential_series, series_inverse
from utils.errors import ComplexityGuardError

logger = logging.getLogger(__name__)

QUARTIC = 4


def check_bogoliubov_order(V: InteractionLike, K: int):
    check_order(K)
    limit = GUARDS["max_bogoliubov_order_quartic"]
    if interaction_degree(V) >= QUARTIC and K > limit:
        raise ComplexityGuardError(
            "max-bogoliubov-order",
            f"Bogoliubov map of a degree-{interaction_degree(V)} interaction is limited to order {limit}",
            limit,
        )


def _as_series(B: Union[Functional, SeriesElement, FormalSeries], K: int) -> FormalSeries:
    if isinstance(B, Functional):
        return FormalSeries.constant(B, K)
    if isinstance(B, SeriesElement):
        return B.series.truncate(min(K, B.max_order))
    return B.truncate(min(K, B.max_order))


def check_connected_components(series: FormalSeries):
    """Каждая связная компонента каждого члена касается вершины-наблюдаемой"""
    for k in series.orders():
        for term in series[k].terms:
            term.check_observable_components()


def bogoliubov(V: InteractionLike, A: Union[Functional, SeriesElement], K: int) -> SeriesElement:
    check_bogoliubov_order(V, K)
    Vf = interaction_functional(V)
    S = exponential_series(Vf, K)
    image = series_inverse(S).star(S.time_ordered(_as_series(A, K)))
    check_connected_components(image)
    logger.debug(f"🔍 Bogoliubov image to order {K}: {image!r}")
    return SeriesElement(image, SeriesKind.BOGOLIUBOV)


def bogoliubov_inverse(V: InteractionLike, B: Union[Functional, SeriesElement], K: int) -> SeriesElement:
    check_bogoliubov_order(V, K)
    Vf = interaction_functional(V)
    S = exponential_series(Vf, K)
    S_minus = exponential_series(Vf, K, sign=-1)
    preimage = S_minus.time_ordered(S.star(_as_series(B, K)))
    return SeriesElement(preimage, SeriesKind.BOGOLIUBOV_INVERSE)


def interacting_product(V: InteractionLike, A: Functional, B: Functional, K: int) -> SeriesElement:
    """A ⋆_{λ,V} B = R_V⁻¹(R_V(A) ⋆ R_V(B))"""
    product = bogoliubov(V, A, K).series.star(bogoliubov(V, B, K).series)
    result = bogoliubov_inverse(V, SeriesElement(product, SeriesKind.INTERACTING_PRODUCT), K)
    return SeriesElement(result.series, SeriesKind.INTERACTING_PRODUCT)
