#!/usr/bin/env python3
"""
Взаимодействие V = ∫ w(x⁰)h(𝐱) φⁿ(x) dx с выбираемым временным весом w
"""

from dataclasses import dataclass, replace
from typing import Optional, Union

from functionals.algebra import Functional, monomial
from functionals.terms import VertexRole, WeightTag
from model.cutoffs import CutoffSpec, TemporalWeight
from utils.errors import ParameterError


@dataclass(frozen=True)
class Interaction:
    degree: int
    cutoffs: CutoffSpec
    variant: TemporalWeight = TemporalWeight.CHI
    parameter: float = 0.0
    plateau_end: Optional[float] = None
    alt_plateau_end: Optional[float] = None

    def __post_init__(self):
        if int(self.degree) != self.degree or self.degree < 2:
            raise ParameterError(f"interaction degree must be an integer >= 2, got {self.degree}")
        object.__setattr__(self, "degree", int(self.degree))
        object.__setattr__(self, "variant", TemporalWeight(self.variant))
        if self.variant is TemporalWeight.CHI_DIFFERENCE and self.alt_plateau_end is None:
            raise ParameterError("chi-minus-chi' interaction needs alt_plateau_end")

    @property
    def weight(self) -> WeightTag:
        return WeightTag(self.variant, self.parameter, self.plateau_end, self.alt_plateau_end)

    def functional(self, role: VertexRole = VertexRole.INTERACTION) -> Functional:
        return monomial([(self.weight, self.degree)], role=role)

    def derivative(self) -> "Interaction":
        """V̇ = V_{χ̇⁻,h}"""
        return replace(self, variant=TemporalWeight.CHIDOT_MINUS, parameter=0.0,
                       plateau_end=None, alt_plateau_end=None)

    def cocycle_remainder(self, t: float) -> "Interaction":
        """V - V_t⁻: вес χ(s) - χ_on(s) + χ_on(s - t)"""
        return replace(self, variant=TemporalWeight.COCYCLE_REMAINDER, parameter=float(t))

    def with_cutoffs(self, cutoffs: CutoffSpec) -> "Interaction":
        return replace(self, cutoffs=cutoffs)

    def with_plateau_end(self, T: float) -> "Interaction":
        """Вариант с другим концом плато (модификация χ в будущем)"""
        return replace(self, plateau_end=float(T))

    def to_dict(self) -> dict:
        return {
            "degree": self.degree,
            "variant": self.variant.value,
            "parameter": self.parameter,
            "plateau_end": self.plateau_end,
            "alt_plateau_end": self.alt_plateau_end,
            "cutoffs": self.cutoffs.to_dict(),
        }


InteractionLike = Union[Interaction, Functional]


def interaction_functional(V: InteractionLike) -> Functional:
    """Функционал взаимодействия; вершины готового функционала получают роль взаимодействия"""
    if isinstance(V, Interaction):
        return V.functional()
    if isinstance(V, Functional):
        return V.with_role(VertexRole.INTERACTION)
    raise ParameterError(f"interaction must be an Interaction or a Functional, got {type(V).__name__}")


def interaction_degree(V: InteractionLike) -> int:
    return V.degree
