#!/usr/bin/env python3
"""
S-матрица, ее обратная и относительная S-матрица как усеченные ряды

S(V)_k = ((-i)^k/k!)·V·T…·TV,   S⁻¹_k = -Σ_{j≥1} S_j ⋆ S⁻¹_{k-j},
S_V(sA) = S(V)⁻¹ ⋆ S(V + sA) раскладывается по порядкам (k, j) в V и A.
"""

import logging
import math
from dataclasses import dataclass
from enum import Enum
from typing import Dict, Optional, Tuple

from config.qst_config import GUARDS
from functionals.algebra import Functional, involution, star_product, time_ordered_product
from functionals.coefficients import minus_i_power
from functionals.series import FormalSeries
from perturbation.interaction import InteractionLike, interaction_degree, interaction_functional
from utils.errors import ComplexityGuardError, ParameterError, StructureError

logger = logging.getLogger(__name__)


class SeriesKind(str, Enum):
    S_MATRIX = "s-matrix"
    INVERSE = "inverse"
    ADJOINT = "adjoint"
    RELATIVE = "relative-s"
    BOGOLIUBOV = "bogoliubov"
    BOGOLIUBOV_INVERSE = "bogoliubov-inverse"
    INTERACTING_PRODUCT = "interacting-product"
    COCYCLE = "cocycle"
    GENERATOR = "generator"


# ряды, у которых нулевой порядок - единица
UNIT_LEADING = (SeriesKind.S_MATRIX, SeriesKind.INVERSE, SeriesKind.ADJOINT, SeriesKind.COCYCLE)


@dataclass(frozen=True)
class SeriesElement:
    series: FormalSeries
    provenance: SeriesKind

    def __post_init__(self):
        object.__setattr__(self, "provenance", SeriesKind(self.provenance))
        if self.provenance in UNIT_LEADING and self.series[0] != Functional.unit():
            raise StructureError(f"{self.provenance.value} series must start with the unit functional")

    @property
    def max_order(self) -> int:
        return self.series.max_order

    def __getitem__(self, k: int) -> Functional:
        return self.series[k]

    def truncate(self, max_order: int) -> "SeriesElement":
        return SeriesElement(self.series.truncate(max_order), self.provenance)

    def to_dict(self) -> dict:
        data = self.series.to_dict()
        data["provenance"] = self.provenance.value
        return data


def check_order(K: int, guard: str = "max-order"):
    limit = GUARDS["max_order"]
    if K < 0:
        raise ParameterError(f"truncation order must be >= 0, got {K}")
    if K > limit:
        raise ComplexityGuardError(guard, f"order {K} exceeds {limit}; pairings grow factorially", limit)


def time_ordered_power(V: Functional, k: int) -> Functional:
    """V·T…·TV (k множителей), k = 0 дает 1"""
    result = Functional.unit()
    for _ in range(k):
        result = time_ordered_product(result, V)
    return result


def exponential_series(V: Functional, K: int, sign: int = 1) -> FormalSeries:
    """Σ (-i·sign)^k/k! V^{·T k}"""
    coefficients = {}
    power = Functional.unit()
    for k in range(K + 1):
        if k:
            power = time_ordered_product(power, V)
        factor = minus_i_power(k) * (sign ** k) / math.factorial(k)
        coefficients[k] = power.scale(factor)
    return FormalSeries(coefficients, K)


def s_matrix(V: InteractionLike, K: int) -> SeriesElement:
    check_order(K)
    logger.debug(f"🔍 S-matrix of degree {interaction_degree(V)} to order {K}")
    return SeriesElement(exponential_series(interaction_functional(V), K), SeriesKind.S_MATRIX)


def series_inverse(S: FormalSeries) -> FormalSeries:
    """⋆-обратный ряд для S₀ = 1"""
    if S[0] != Functional.unit():
        raise StructureError("series inverse needs a unit leading coefficient")
    inverse: Dict[int, Functional] = {0: Functional.unit()}
    for k in range(1, S.max_order + 1):
        total = Functional.zero()
        for j in range(1, k + 1):
            if S[j].is_zero or inverse[k - j].is_zero:
                continue
            total = total + star_product(S[j], inverse[k - j])
        inverse[k] = -total
    return FormalSeries(inverse, S.max_order)


def s_inverse(S: SeriesElement, K: Optional[int] = None) -> SeriesElement:
    series = S.series if K is None else S.series.truncate(K)
    return SeriesElement(series_inverse(series), SeriesKind.INVERSE)


def s_adjoint(S: SeriesElement) -> SeriesElement:
    """S*: инволюция каждого коэффициента"""
    return SeriesElement(S.series.map(involution), SeriesKind.ADJOINT)


@dataclass(frozen=True)
class RelativeSMatrix:
    """Компоненты (k, j) ряда S_V(sA): порядок k по V, порядок j по s"""

    components: Dict[Tuple[int, int], Functional]
    max_order: int
    observable_order: int

    def component(self, k: int, j: int) -> Functional:
        if not (0 <= k <= self.max_order and 0 <= j <= self.observable_order):
            raise ParameterError(f"component ({k}, {j}) outside the computed range")
        return self.components.get((k, j), Functional.zero())

    def series(self, j: int) -> SeriesElement:
        """Коэффициент при s^j как ряд по V"""
        return SeriesElement(FormalSeries({k: self.component(k, j) for k in range(self.max_order + 1)},
                                          self.max_order), SeriesKind.RELATIVE)

    def derivative(self) -> SeriesElement:
        """i·(d/ds)S_V(sA)|₀"""
        first = self.series(1).series
        return SeriesElement(first.scale(1j), SeriesKind.RELATIVE)


def relative_s(V: InteractionLike, A: Functional, K: int, observable_order: int = 1) -> RelativeSMatrix:
    check_order(K)
    check_order(observable_order)
    Vf = interaction_functional(V)
    inverse = series_inverse(exponential_series(Vf, K))
    v_powers = [time_ordered_power(Vf, b) for b in range(K + 1)]
    a_powers = [time_ordered_power(A, j) for j in range(observable_order + 1)]

    components: Dict[Tuple[int, int], Functional] = {}
    for j in range(observable_order + 1):
        for k in range(K + 1):
            total = Functional.zero()
            for b in range(k + 1):
                mixed = time_ordered_product(v_powers[b], a_powers[j])
                mixed = mixed.scale(minus_i_power(b + j) / (math.factorial(b) * math.factorial(j)))
                total = total + star_product(inverse[k - b], mixed)
            components[(k, j)] = total
    return RelativeSMatrix(components, K, observable_order)
