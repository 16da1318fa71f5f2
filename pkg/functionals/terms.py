#!/usr/bin/env python3
"""
Вершины, ребра и мономиальные члены функционалов

Член - коэффициент × произведение вершин (φ^p в фиксированной точке или
под интегралом с весом) × ребра-пропагаторы между вершинами.
Канонизация упорядочивает вершины и выбирает лексикографически
минимальный список ребер среди перестановок неразличимых вершин.
"""

import itertools
import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Dict, List, Optional, Sequence, Tuple, Union

from config.qst_config import GUARDS
from functionals.coefficients import GaussianRational
from model.cutoffs import CutoffSpec, TemporalWeight, temporal_weight, temporal_weight_support
from model.geometry import Event
from utils.errors import ComplexityGuardError, ParameterError, StructureError

UNSET = -1.0


class EdgeKind(str, Enum):
    """Ядра сверток"""

    WIGHTMAN = "star:wightman-plus"          # Δ+,λ(x_i - x_j)
    HALF_COMMUTATOR = "star:half-pauli-jordan"  # iΔλ(x_i - x_j)/2
    THERMAL = "star:thermal"                 # Δβ,λ(x_i - x_j)
    FEYNMAN = "tord:feynman"                 # ΔF,λ, четное
    ANTI_FEYNMAN = "tord:anti-feynman"       # conj ΔF,λ, четное
    THERMAL_PAIR = "pair:thermal-minus-vacuum"  # Δβ,λ - Δ+,λ, четное

    @property
    def symmetric(self) -> bool:
        return self in (EdgeKind.FEYNMAN, EdgeKind.ANTI_FEYNMAN, EdgeKind.THERMAL_PAIR)

    @property
    def conjugate(self) -> "EdgeKind":
        if self is EdgeKind.FEYNMAN:
            return EdgeKind.ANTI_FEYNMAN
        if self is EdgeKind.ANTI_FEYNMAN:
            return EdgeKind.FEYNMAN
        return self

    @property
    def is_thermal(self) -> bool:
        return self in (EdgeKind.THERMAL, EdgeKind.THERMAL_PAIR)


STAR_KERNELS = (EdgeKind.WIGHTMAN, EdgeKind.HALF_COMMUTATOR, EdgeKind.THERMAL)


class VertexRole(str, Enum):
    OBSERVABLE = "observable"
    INTERACTION = "interaction"


@dataclass(frozen=True)
class WeightTag:
    """Вес свободной вершины: временной вес × h(x)"""

    kind: TemporalWeight = TemporalWeight.CHI
    parameter: float = 0.0
    plateau_end: Optional[float] = None
    alt_plateau_end: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "kind", TemporalWeight(self.kind))
        object.__setattr__(self, "parameter", float(self.parameter))

    def key(self) -> Tuple:
        return (self.kind.value, self.parameter,
                UNSET if self.plateau_end is None else float(self.plateau_end),
                UNSET if self.alt_plateau_end is None else float(self.alt_plateau_end))

    def temporal(self, cutoffs: CutoffSpec, s):
        return temporal_weight(self.kind, cutoffs, s, self.parameter, self.plateau_end, self.alt_plateau_end)

    def support(self, cutoffs: CutoffSpec) -> Tuple[float, float]:
        return temporal_weight_support(self.kind, cutoffs, self.parameter, self.plateau_end, self.alt_plateau_end)

    @property
    def label(self) -> str:
        text = self.kind.value
        if self.kind is TemporalWeight.COCYCLE_REMAINDER:
            text += f"(t={self.parameter:g})"
        if self.plateau_end is not None:
            text += f"[T={self.plateau_end:g}]"
        if self.alt_plateau_end is not None:
            text += f"[T'={self.alt_plateau_end:g}]"
        return text + "·h"

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "parameter": self.parameter,
                "plateau_end": self.plateau_end, "alt_plateau_end": self.alt_plateau_end}


Position = Union[Event, WeightTag]


@dataclass(frozen=True)
class Vertex:
    """
    position - Event (фиксированная точка) или WeightTag (свободная вершина);
    shift - комплексный сдвиг t - iu, эффективное время вершины x⁰ + shift.
    """

    position: Position
    power: int
    shift: complex = 0j
    role: VertexRole = VertexRole.OBSERVABLE

    def __post_init__(self):
        if not isinstance(self.position, (Event, WeightTag)):
            raise ParameterError(f"vertex position must be Event or WeightTag, got {type(self.position).__name__}")
        if int(self.power) != self.power or self.power < 0:
            raise ParameterError(f"vertex power must be a nonnegative integer, got {self.power}")
        object.__setattr__(self, "power", int(self.power))
        object.__setattr__(self, "shift", complex(self.shift))
        object.__setattr__(self, "role", VertexRole(self.role))

    @property
    def is_free(self) -> bool:
        return isinstance(self.position, WeightTag)

    @property
    def is_observable(self) -> bool:
        return self.role is VertexRole.OBSERVABLE

    @property
    def imaginary_offset(self) -> float:
        """u вершины: эффективное время x⁰ + Re(shift) - i·u, плюс u самого события"""
        base = self.position.u if isinstance(self.position, Event) else 0.0
        return base - self.shift.imag

    def key(self) -> Tuple:
        if isinstance(self.position, Event):
            head = ("F",) + self.position.sort_key() + ("", 0.0, UNSET, UNSET)
        else:
            head = ("V", 0.0, 0.0, 0.0, 0.0, 0.0) + self.position.key()
        return head + (self.shift.real, self.shift.imag, self.role.value, self.power)

    def with_power(self, power: int) -> "Vertex":
        return replace(self, power=power)

    def to_dict(self) -> dict:
        if isinstance(self.position, Event):
            position = {"fixed": self.position.to_dict()}
        else:
            position = {"free": self.position.to_dict()}
        return {"position": position, "power": self.power,
                "shift": {"t": self.shift.real, "u": -self.shift.imag}, "role": self.role.value}


@dataclass(frozen=True)
class Edge:
    """kind(x_i - x_j) в степени multiplicity"""

    kind: EdgeKind
    i: int
    j: int
    multiplicity: int = 1

    def normalized(self) -> "Edge":
        if self.kind.symmetric and self.i > self.j:
            return Edge(self.kind, self.j, self.i, self.multiplicity)
        return self

    def key(self) -> Tuple:
        return (self.kind.value, self.i, self.j, self.multiplicity)

    def to_dict(self) -> dict:
        return {"kind": self.kind.value, "i": self.i, "j": self.j, "multiplicity": self.multiplicity}


@dataclass(frozen=True)
class MonomialTerm:
    coefficient: GaussianRational
    vertices: Tuple[Vertex, ...]
    edges: Tuple[Edge, ...] = ()
    mass_shift_power: int = 0

    def __post_init__(self):
        object.__setattr__(self, "coefficient", GaussianRational.coerce(self.coefficient))
        object.__setattr__(self, "vertices", tuple(self.vertices))
        object.__setattr__(self, "edges", tuple(self.edges))
        n = len(self.vertices)
        for edge in self.edges:
            if edge.i == edge.j:
                raise StructureError(f"self-contraction at vertex {edge.i}: monomials are normal ordered")
            if not (0 <= edge.i < n and 0 <= edge.j < n):
                raise StructureError(f"edge {edge} references a missing vertex (n={n})")
            if edge.multiplicity < 1:
                raise StructureError(f"edge multiplicity must be >= 1, got {edge.multiplicity}")
        if self.mass_shift_power < 0:
            raise StructureError("mass-shift power must be nonnegative")

    @property
    def degree(self) -> int:
        return sum(v.power for v in self.vertices)

    @property
    def free_indices(self) -> List[int]:
        return [i for i, v in enumerate(self.vertices) if v.is_free]

    def structure_key(self) -> Tuple:
        return (tuple(v.key() for v in self.vertices), tuple(e.key() for e in self.edges),
                self.mass_shift_power)

    def with_coefficient(self, coefficient) -> "MonomialTerm":
        return replace(self, coefficient=GaussianRational.coerce(coefficient))

    def components(self) -> List[List[int]]:
        """Связные компоненты графа ребер (изолированные вершины - отдельные компоненты)"""
        parent = list(range(len(self.vertices)))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for edge in self.edges:
            ra, rb = find(edge.i), find(edge.j)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
        groups: Dict[int, List[int]] = {}
        for i in range(len(self.vertices)):
            groups.setdefault(find(i), []).append(i)
        return list(groups.values())

    def check_observable_components(self):
        """Каждая связная компонента содержит вершину-наблюдаемую"""
        for component in self.components():
            if not any(self.vertices[i].is_observable for i in component):
                raise StructureError(
                    f"connected component {component} of a term has no observable vertex")

    def to_dict(self) -> dict:
        return {
            "coefficient": self.coefficient.to_dict(),
            "vertices": [v.to_dict() for v in self.vertices],
            "edges": [e.to_dict() for e in self.edges],
            "mass_shift_power": self.mass_shift_power,
        }


def _relabel_edges(edges: Sequence[Edge], position: Dict[int, int]) -> Tuple[Edge, ...]:
    merged: Dict[Tuple, int] = {}
    for edge in edges:
        e = Edge(edge.kind, position[edge.i], position[edge.j], edge.multiplicity).normalized()
        head = (e.kind, e.i, e.j)
        merged[head] = merged.get(head, 0) + e.multiplicity
    out = [Edge(kind, i, j, mult) for (kind, i, j), mult in merged.items()]
    out.sort(key=Edge.key)
    return tuple(out)


def canonicalize(term: MonomialTerm, max_permutations: Optional[int] = None) -> MonomialTerm:
    """
    Канонический представитель члена: фиксированные вершины степени 0 без ребер
    удаляются, вершины сортируются по ключу, среди перестановок внутри групп
    одинаковых ключей выбирается минимальный список ребер.
    """
    limit = GUARDS["max_canonical_permutations"] if max_permutations is None else max_permutations

    touched = set()
    for edge in term.edges:
        touched.add(edge.i)
        touched.add(edge.j)
    keep = [i for i, v in enumerate(term.vertices)
            if v.is_free or v.power > 0 or i in touched]

    keys = {i: term.vertices[i].key() for i in keep}
    order = sorted(keep, key=lambda i: keys[i])
    groups: List[List[int]] = []
    for i in order:
        if groups and keys[groups[-1][0]] == keys[i]:
            groups[-1].append(i)
        else:
            groups.append([i])

    total = 1
    for group in groups:
        total *= math.factorial(len(group))

    if total > limit and term.edges:
        raise ComplexityGuardError(
            "max-canonical-permutations",
            f"canonical form needs {total} vertex permutations, limit is {limit}", limit)
    if total == 1 or not term.edges:
        candidates = [order]
    else:
        candidates = (
            [i for block in blocks for i in block]
            for blocks in itertools.product(*(itertools.permutations(g) for g in groups))
        )

    best_key = None
    best = None
    for candidate in candidates:
        position = {old: new for new, old in enumerate(candidate)}
        edges = _relabel_edges(term.edges, position)
        edge_key = tuple(e.key() for e in edges)
        if best_key is None or edge_key < best_key:
            best_key = edge_key
            best = (candidate, edges)

    candidate, edges = best
    vertices = tuple(term.vertices[i] for i in candidate)
    return MonomialTerm(term.coefficient, vertices, edges, term.mass_shift_power)
