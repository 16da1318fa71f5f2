#!/usr/bin/env python3
"""
Подынтегральные выражения: полностью свернутые члены со свободными вершинами

Значение члена в наборе точек свободных вершин:
    c · Π_edges K(τ_i - τ_j, |x_i - x_j|)^mult · m_{β,λ}^s · Π_vertices φ_cfg(x_v)^{p_v},
τ_v = время вершины + сдвиг. Веса χ·h свободных вершин считаются отдельно
(weight_values), чтобы интегратор мог делить на плотность выборки.
"""

import logging
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from functionals.terms import EdgeKind, MonomialTerm
from model.cutoffs import CutoffSpec, spatial_cutoff
from model.kernels import PlaneWaveConfig, ZERO_CONFIG
from propagators.evaluator import PropagatorEvaluator
from propagators.kinds import FEYNMAN, PAULI_JORDAN, WIGHTMAN_PLUS, thermal, thermal_minus_vacuum
from utils.errors import ParameterError, StructureError

logger = logging.getLogger(__name__)


def _require_beta(beta: Optional[float], kind: EdgeKind) -> float:
    if beta is None:
        raise ParameterError(f"edge {kind.value} needs an inverse temperature beta")
    return beta


def edge_values(kind: EdgeKind, dt: np.ndarray, du: np.ndarray, r: np.ndarray,
                evaluator: Optional[PropagatorEvaluator], beta: Optional[float] = None) -> np.ndarray:
    """Значение ядра ребра при относительном комплексном сдвиге dt - i·du"""
    if evaluator is None:
        raise ParameterError("a propagator evaluator is required for terms with edges")
    if kind is EdgeKind.WIGHTMAN:
        return evaluator.evaluate_many(WIGHTMAN_PLUS, dt, du, r)
    if kind is EdgeKind.HALF_COMMUTATOR:
        # Δλ нечетна по τ
        sign = np.where(du < 0, -1.0, 1.0)
        return 0.5j * sign * evaluator.evaluate_many(PAULI_JORDAN, sign * dt, sign * du, r)
    if kind is EdgeKind.THERMAL:
        return evaluator.evaluate_many(thermal(_require_beta(beta, kind)), dt, du, r)
    if kind is EdgeKind.FEYNMAN:
        return evaluator.evaluate_many(FEYNMAN, dt, du, r)
    if kind is EdgeKind.ANTI_FEYNMAN:
        return np.conj(evaluator.evaluate_many(FEYNMAN, dt, du, r))
    # Δβ,λ - Δ+,λ четна по τ
    sign = np.where(du < 0, -1.0, 1.0)
    return evaluator.evaluate_many(thermal_minus_vacuum(_require_beta(beta, kind)), sign * dt, sign * du, r)


def vertex_coordinates(term: MonomialTerm, free_t: np.ndarray,
                       free_x: np.ndarray) -> Tuple[List[np.ndarray], List[np.ndarray]]:
    """
    Комплексные эффективные времена (N,) и пространственные точки (N, 3) всех вершин;
    free_t - (N, f) базовые времена свободных вершин, free_x - (N, f, 3).
    """
    n = free_t.shape[0]
    times: List[np.ndarray] = []
    spaces: List[np.ndarray] = []
    slot = 0
    for vertex in term.vertices:
        if vertex.is_free:
            times.append(free_t[:, slot] + vertex.shift)
            spaces.append(free_x[:, slot, :])
            slot += 1
        else:
            event = vertex.position
            times.append(np.full(n, event.complex_time + vertex.shift, dtype=complex))
            spaces.append(np.broadcast_to(np.asarray(event.x, dtype=float), (n, 3)))
    return times, spaces


def term_values(term: MonomialTerm, free_t: np.ndarray, free_x: np.ndarray,
                evaluator: Optional[PropagatorEvaluator], beta: Optional[float] = None,
                config: PlaneWaveConfig = ZERO_CONFIG) -> np.ndarray:
    """Значение члена без весов свободных вершин, массив (N,)"""
    times, spaces = vertex_coordinates(term, free_t, free_x)
    value = np.full(free_t.shape[0], complex(term.coefficient), dtype=complex)
    for edge in term.edges:
        tau = times[edge.i] - times[edge.j]
        r = np.linalg.norm(spaces[edge.i] - spaces[edge.j], axis=-1)
        value = value * edge_values(edge.kind, tau.real, -tau.imag, r, evaluator, beta) ** edge.multiplicity
    if term.mass_shift_power:
        if evaluator is None:
            raise ParameterError("a propagator evaluator is required for the thermal mass shift")
        shift = evaluator.thermal_mass_shift(_require_beta(beta, EdgeKind.THERMAL_PAIR))
        value = value * shift ** term.mass_shift_power
    for vertex, t, x in zip(term.vertices, times, spaces):
        if vertex.power:
            value = value * config.field(t, x) ** vertex.power
    return value


def weight_values(term: MonomialTerm, free_t: np.ndarray, free_x: np.ndarray,
                  cutoffs: CutoffSpec) -> np.ndarray:
    """Π_free (временной вес)(s_v)·h(x_v) в базовых координатах"""
    weights = np.ones(free_t.shape[0])
    for slot, index in enumerate(term.free_indices):
        tag = term.vertices[index].position
        radius = np.linalg.norm(free_x[:, slot, :], axis=-1)
        weights = weights * tag.temporal(cutoffs, free_t[:, slot]) * spatial_cutoff(cutoffs, radius)
    return weights


@dataclass(frozen=True)
class IntegrandExpression:
    """
    Полностью свернутые члены для интегрирования по свободным вершинам.
    diagnostic=True отключает проверку наблюдаемых в связных компонентах.
    """

    terms: Tuple[MonomialTerm, ...]
    config: PlaneWaveConfig = ZERO_CONFIG
    beta: Optional[float] = None
    order: Optional[int] = None
    provenance: str = ""
    diagnostic: bool = False

    def __post_init__(self):
        object.__setattr__(self, "terms", tuple(self.terms))
        for term in self.terms:
            if self.config.is_zero and term.degree:
                raise StructureError("integrand terms must be fully contracted at the zero configuration")
            if not self.diagnostic:
                term.check_observable_components()
        if any(e.kind.is_thermal for t in self.terms for e in t.edges) or \
                any(t.mass_shift_power for t in self.terms):
            _require_beta(self.beta, EdgeKind.THERMAL_PAIR)

    @property
    def is_empty(self) -> bool:
        return not self.terms

    @property
    def max_free_vertices(self) -> int:
        return max((len(t.free_indices) for t in self.terms), default=0)

    @property
    def free_dimension(self) -> int:
        return 4 * self.max_free_vertices

    def to_dict(self) -> dict:
        return {
            "order": self.order,
            "provenance": self.provenance,
            "beta": self.beta,
            "diagnostic": self.diagnostic,
            "terms": [t.to_dict() for t in self.terms],
        }
