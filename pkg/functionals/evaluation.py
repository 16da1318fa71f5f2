#!/usr/bin/env python3
"""
Вычисление функционалов: конфигурации плоских волн, пробные точки,
вакуумная и тепловая редукции, связные корреляторы, JSON-дамп
"""

import itertools
import json
import logging
from typing import Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
from sympy.utilities.iterables import multiset_partitions

from config.qst_config import GUARDS
from functionals.algebra import Functional, pointwise_product, star_chain
from functionals.integrand import IntegrandExpression, term_values, weight_values
from functionals.terms import Edge, EdgeKind, MonomialTerm
from functionals.wick import gaussian_pairings
from model.cutoffs import CutoffSpec
from model.geometry import Event
from model.kernels import PlaneWaveConfig, ZERO_CONFIG
from propagators.evaluator import PropagatorEvaluator
from utils.errors import ComplexityGuardError, ParameterError

logger = logging.getLogger(__name__)

EMPTY_T = np.zeros((1, 0))
EMPTY_X = np.zeros((1, 0, 3))


def _surviving_terms(A: Functional, config: PlaneWaveConfig) -> List[MonomialTerm]:
    if config.is_zero:
        return [t for t in A.terms if t.degree == 0]
    return list(A.terms)


def evaluate(A: Functional, config: PlaneWaveConfig = ZERO_CONFIG,
             evaluator: Optional[PropagatorEvaluator] = None, beta: Optional[float] = None,
             order: Optional[int] = None, provenance: str = "") -> Union[complex, IntegrandExpression]:
    """
    A(φ_cfg). Без свободных вершин - число; иначе IntegrandExpression
    из выживших членов. В нулевой конфигурации выживают члены степени 0.
    """
    terms = _surviving_terms(A, config)
    if not A.is_fixed:
        return IntegrandExpression(tuple(terms), config, beta, order, provenance)
    total = 0j
    for term in terms:
        total += complex(term_values(term, EMPTY_T, EMPTY_X, evaluator, beta, config)[0])
    return total


def vacuum_reduce(A: Functional) -> Functional:
    """ω(A) как функционал степени 0: члены без выживших степеней поля"""
    return Functional((t for t in A.terms if t.degree == 0), canonical=True)


def thermal_contract(A: Functional) -> Functional:
    """
    Гауссово спаривание всех оставшихся ножек ядром Δβ,λ - Δ+,λ;
    пары внутри вершины дают множитель m_{β,λ}.
    """
    out = []
    for term in A.terms:
        powers = [v.power for v in term.vertices]
        if not any(powers):
            out.append(term)
            continue
        bare = tuple(v.with_power(0) for v in term.vertices)
        for pairs, selfs, count in gaussian_pairings(powers):
            edges = term.edges + tuple(Edge(EdgeKind.THERMAL_PAIR, i, j, e) for i, j, e in pairs)
            shift = term.mass_shift_power + sum(s for _, s in selfs)
            out.append(MonomialTerm(term.coefficient * count, bare, edges, shift))
    return Functional(out)


def state_reduce(A: Functional, beta: Optional[float] = None) -> Functional:
    """Вакуум (beta=None) или тепловое состояние ω_β"""
    return vacuum_reduce(A) if beta is None else thermal_contract(A)


def probe_evaluate(A: Functional, probes: Sequence[Event], cutoffs: CutoffSpec,
                   evaluator: Optional[PropagatorEvaluator], config: PlaneWaveConfig = ZERO_CONFIG,
                   beta: Optional[float] = None) -> complex:
    """
    Значение подынтегрального выражения A в пробных точках: эффективные
    позиции свободных вершин закрепляются на probes[:f], результат
    усредняется по всем f! назначениям и умножается на веса χ·h.
    """
    total = 0j
    for term in _surviving_terms(A, config):
        free = term.free_indices
        f = len(free)
        if f > len(probes):
            raise ParameterError(f"term has {f} free vertices but only {len(probes)} probes were given")
        if f == 0:
            total += complex(term_values(term, EMPTY_T, EMPTY_X, evaluator, beta, config)[0])
            continue
        assignments = list(itertools.permutations(range(f)))
        free_t = np.empty((len(assignments), f))
        free_x = np.empty((len(assignments), f, 3))
        for row, assignment in enumerate(assignments):
            for slot, index in enumerate(free):
                probe = probes[assignment[slot]]
                free_t[row, slot] = probe.t - term.vertices[index].shift.real
                free_x[row, slot] = probe.x
        values = term_values(term, free_t, free_x, evaluator, beta, config)
        values = values * weight_values(term, free_t, free_x, cutoffs)
        total += complex(np.mean(values))
    return total


def connected_part(factors: Sequence[Functional], beta: Optional[float] = None) -> Functional:
    """
    ωᶜ(A₁⊗…⊗Aₙ) как функционал степени 0:
    ω(A₁⋆…⋆Aₙ) - Σ_{P собственное разбиение} Π_{I∈P} ωᶜ(⊗_{i∈I} A_i).
    """
    n = len(factors)
    limit = GUARDS["max_partition"]
    if n > limit:
        raise ComplexityGuardError("max-partition", f"connected correlator of {n} factors exceeds {limit}", limit)
    if n == 0:
        raise ParameterError("connected correlator needs at least one factor")
    memo: Dict[Tuple[int, ...], Functional] = {}

    def connected(indices: Tuple[int, ...]) -> Functional:
        if indices in memo:
            return memo[indices]
        total = state_reduce(star_chain([factors[i] for i in indices]), beta)
        for partition in multiset_partitions(list(indices)):
            if len(partition) == 1:
                continue
            product = Functional.unit()
            for block in partition:
                product = pointwise_product(product, connected(tuple(block)))
            total = total - product
        memo[indices] = total
        return total

    return connected(tuple(range(n)))


def connected_correlator(factors: Sequence[Functional], evaluator: Optional[PropagatorEvaluator],
                         beta: Optional[float] = None) -> complex:
    """Численное ωᶜ для множителей без свободных вершин"""
    for factor in factors:
        if not factor.is_fixed:
            raise ParameterError("connected_correlator needs fully fixed factors; use connected_part")
    return complex(evaluate(connected_part(factors, beta), ZERO_CONFIG, evaluator, beta))


def functional_to_json(A: Functional, indent: Optional[int] = 2) -> str:
    """Отладочная сериализация: члены, вершины, ребра, коэффициенты (re/im)"""
    return json.dumps(A.to_dict(), indent=indent, ensure_ascii=False)


def dump_functional(A: Functional, path: str):
    with open(path, "w", encoding="utf-8") as handle:
        handle.write(functional_to_json(A))
    logger.info(f"✅ Functional with {len(A)} terms written to {path}")