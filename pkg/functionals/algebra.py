#!/usr/bin/env python3
"""
Алгебра полиномиальных функционалов поля

Functional - конечная сумма канонических MonomialTerm с точными коэффициентами.
Все произведения чистые: новые члены канонизируются и сливаются,
нулевые коэффициенты отбрасываются.
"""

import logging
from dataclasses import replace
from typing import Callable, Dict, Iterable, Iterator, List, Optional, Sequence, Tuple

from config.qst_config import GUARDS
from functionals.coefficients import GaussianRational, Number, ONE
from functionals.terms import (
    Edge,
    EdgeKind,
    MonomialTerm,
    Position,
    STAR_KERNELS,
    Vertex,
    VertexRole,
    canonicalize,
)
from functionals.wick import contraction_patterns
from model.geometry import Event
from utils.errors import ComplexityGuardError, DomainError, ParameterError

logger = logging.getLogger(__name__)


class Functional:
    """Неизменяемая сумма мономиальных членов в канонической форме"""

    __slots__ = ("_terms",)

    def __init__(self, terms: Iterable[MonomialTerm] = (), canonical: bool = False):
        merged: Dict[Tuple, MonomialTerm] = {}
        for term in terms:
            if not canonical:
                term = canonicalize(term)
            key = term.structure_key()
            present = merged.get(key)
            if present is None:
                merged[key] = term
            else:
                merged[key] = present.with_coefficient(present.coefficient + term.coefficient)
        kept = [(key, term) for key, term in merged.items() if term.coefficient]
        kept.sort(key=lambda item: item[0])
        self._terms: Tuple[MonomialTerm, ...] = tuple(term for _, term in kept)

    # ------------------------------------------------------------------
    # конструкторы
    # ------------------------------------------------------------------
    @classmethod
    def zero(cls) -> "Functional":
        return cls()

    @classmethod
    def constant(cls, value: Number) -> "Functional":
        return cls([MonomialTerm(GaussianRational.coerce(value), ())])

    @classmethod
    def unit(cls) -> "Functional":
        return cls.constant(ONE)

    # ------------------------------------------------------------------
    # свойства
    # ------------------------------------------------------------------
    @property
    def terms(self) -> Tuple[MonomialTerm, ...]:
        return self._terms

    @property
    def is_zero(self) -> bool:
        return not self._terms

    @property
    def degree(self) -> int:
        return max((t.degree for t in self._terms), default=0)

    @property
    def is_fixed(self) -> bool:
        return all(not t.free_indices for t in self._terms)

    @property
    def free_vertex_count(self) -> int:
        return max((len(t.free_indices) for t in self._terms), default=0)

    def __iter__(self) -> Iterator[MonomialTerm]:
        return iter(self._terms)

    def __len__(self) -> int:
        return len(self._terms)

    # ------------------------------------------------------------------
    # линейная структура
    # ------------------------------------------------------------------
    def __add__(self, other: "Functional") -> "Functional":
        if not isinstance(other, Functional):
            return NotImplemented
        return Functional(self._terms + other._terms, canonical=True)

    def __neg__(self) -> "Functional":
        return self.scale(-1)

    def __sub__(self, other: "Functional") -> "Functional":
        if not isinstance(other, Functional):
            return NotImplemented
        return self + (-other)

    def scale(self, factor: Number) -> "Functional":
        factor = GaussianRational.coerce(factor)
        return Functional((t.with_coefficient(t.coefficient * factor) for t in self._terms), canonical=True)

    def map_terms(self, fn: Callable[[MonomialTerm], MonomialTerm]) -> "Functional":
        return Functional(fn(t) for t in self._terms)

    def with_role(self, role: VertexRole) -> "Functional":
        """Все вершины получают роль role (взаимодействие или наблюдаемая)"""
        return self.map_terms(lambda t: replace(t, vertices=tuple(replace(v, role=role) for v in t.vertices)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, Functional):
            return NotImplemented
        return self._terms == other._terms

    def __hash__(self) -> int:
        return hash(self._terms)

    def __repr__(self) -> str:
        return f"Functional({len(self._terms)} terms, degree {self.degree})"

    def to_dict(self) -> dict:
        return {"terms": [t.to_dict() for t in self._terms]}


# ----------------------------------------------------------------------
# конструкторы функционалов
# ----------------------------------------------------------------------
def monomial(vertices: Sequence[Tuple[Position, int]], coefficient: Number = 1,
             role: VertexRole = VertexRole.OBSERVABLE) -> Functional:
    """c·Π φ^{p_i}(x_i); свободные позиции (WeightTag) интегрируются с весом"""
    built = []
    for position, power in vertices:
        if power < 0:
            raise ParameterError(f"vertex power must be >= 0, got {power}")
        built.append(Vertex(position, power, role=role))
    return Functional([MonomialTerm(GaussianRational.coerce(coefficient), tuple(built))])


def field(event: Event, coefficient: Number = 1) -> Functional:
    """Линейное поле c·φ(x)"""
    return monomial([(event, 1)], coefficient)


def _check_degree(a: MonomialTerm, b: MonomialTerm):
    limit = GUARDS["max_degree"]
    if a.degree + b.degree > limit:
        raise ComplexityGuardError(
            "max-degree",
            f"product of degree {a.degree} and {b.degree} exceeds {limit} legs; lower the order or the degree",
            limit,
        )


def _contract_terms(a: MonomialTerm, b: MonomialTerm, kernel: Optional[EdgeKind]) -> Iterator[MonomialTerm]:
    _check_degree(a, b)
    offset = len(a.vertices)
    shifted = tuple(Edge(e.kind, e.i + offset, e.j + offset, e.multiplicity) for e in b.edges)
    base_edges = a.edges + shifted
    coefficient = a.coefficient * b.coefficient
    if kernel is None:
        yield MonomialTerm(coefficient, a.vertices + b.vertices, base_edges,
                           a.mass_shift_power + b.mass_shift_power)
        return

    powers_a = [v.power for v in a.vertices]
    powers_b = [v.power for v in b.vertices]
    for pattern, count in contraction_patterns(powers_a, powers_b):
        left = list(powers_a)
        right = list(powers_b)
        edges: List[Edge] = list(base_edges)
        for i, j, k in pattern:
            left[i] -= k
            right[j] -= k
            edges.append(Edge(kernel, i, offset + j, k))
        vertices = tuple(v.with_power(p) for v, p in zip(a.vertices, left)) + \
            tuple(v.with_power(p) for v, p in zip(b.vertices, right))
        yield MonomialTerm(coefficient * count, vertices, tuple(edges),
                           a.mass_shift_power + b.mass_shift_power)


def _product(A: Functional, B: Functional, kernel: Optional[EdgeKind]) -> Functional:
    return Functional(term for a in A.terms for b in B.terms for term in _contract_terms(a, b, kernel))


def star_product(A: Functional, B: Functional, kernel: EdgeKind = EdgeKind.WIGHTMAN) -> Functional:
    """A ⋆_H B: все свертки вершин A с вершинами B ядром H(x_a - x_b)"""
    kernel = EdgeKind(kernel)
    if kernel not in STAR_KERNELS:
        raise ParameterError(f"kernel {kernel.value} is not a star-product kernel")
    return _product(A, B, kernel)


def time_ordered_product(A: Functional, B: Functional) -> Functional:
    """A ·T B: свертки ядром ΔF,λ; коммутативно"""
    return _product(A, B, EdgeKind.FEYNMAN)


def anti_time_ordered_product(A: Functional, B: Functional) -> Functional:
    """Свертки ядром conj(ΔF,λ)"""
    return _product(A, B, EdgeKind.ANTI_FEYNMAN)


def pointwise_product(A: Functional, B: Functional) -> Functional:
    """A·B без сверток"""
    return _product(A, B, None)


def star_chain(factors: Sequence[Functional], kernel: EdgeKind = EdgeKind.WIGHTMAN) -> Functional:
    """A₁ ⋆ A₂ ⋆ … ⋆ Aₙ слева направо; пустой список дает 1"""
    result = Functional.unit()
    for factor in factors:
        result = star_product(result, factor, kernel)
    return result


def _involve_edge(edge: Edge) -> Edge:
    if edge.kind.symmetric:
        return Edge(edge.kind.conjugate, edge.i, edge.j, edge.multiplicity)
    return Edge(edge.kind, edge.j, edge.i, edge.multiplicity)


def involution(A: Functional) -> Functional:
    """
    A*: сопряжение коэффициентов и сдвигов; звездные ядра меняют порядок
    аргументов, ΔF,λ ↔ conj(ΔF,λ), парное тепловое ядро не меняется.
    """
    def involve(term: MonomialTerm) -> MonomialTerm:
        vertices = tuple(replace(v, shift=v.shift.conjugate()) for v in term.vertices)
        edges = tuple(_involve_edge(e) for e in term.edges)
        return MonomialTerm(term.coefficient.conjugate(), vertices, edges, term.mass_shift_power)

    return A.map_terms(involve)


def shift_functional(A: Functional, tau: complex) -> Functional:
    """Сдвиг всех вершин на комплексное время tau (любой знак мнимой части)"""
    tau = complex(tau)
    if tau == 0:
        return A

    def shift(term: MonomialTerm) -> MonomialTerm:
        return replace(term, vertices=tuple(replace(v, shift=v.shift + tau) for v in term.vertices))

    return A.map_terms(shift)


def translate(A: Functional, t: float, u: float = 0.0) -> Functional:
    """α_{t - iu}A, u ≥ 0"""
    if u < 0:
        raise DomainError(f"translations are defined for u >= 0 (lower half-plane), got u={u}")
    return shift_functional(A, complex(t, -u))


def commutator(A: Functional, B: Functional, kernel: EdgeKind = EdgeKind.WIGHTMAN) -> Functional:
    """[A, B]_⋆ = A⋆B - B⋆A"""
    return star_product(A, B, kernel) - star_product(B, A, kernel)
