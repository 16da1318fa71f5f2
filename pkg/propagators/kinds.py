#!/usr/bin/env python3
"""
Виды пропагаторов и параметры квадратуры
"""

import math
from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Dict, Optional

from config.qst_config import QUADRATURE_DEFAULTS
from utils.errors import ParameterError


class KernelFamily(str, Enum):
    PAULI_JORDAN = "pauli-jordan"
    WIGHTMAN_PLUS = "wightman-plus"
    FEYNMAN = "feynman"
    ADVANCED = "advanced"
    RETARDED = "retarded"
    DIRAC = "dirac"
    THERMAL = "thermal"
    THERMAL_MINUS_VACUUM = "thermal-minus-vacuum"


THERMAL_FAMILIES = (KernelFamily.THERMAL, KernelFamily.THERMAL_MINUS_VACUUM)

# Виды, собранные из θ-функций: определены только при u = 0
THETA_COMPOSED = (KernelFamily.FEYNMAN, KernelFamily.ADVANCED, KernelFamily.RETARDED, KernelFamily.DIRAC)


@dataclass(frozen=True)
class PropagatorKind:
    family: KernelFamily
    beta: Optional[float] = None

    def __post_init__(self):
        object.__setattr__(self, "family", KernelFamily(self.family))
        if self.family in THERMAL_FAMILIES:
            if self.beta is None or not (math.isfinite(self.beta) and self.beta > 0):
                raise ParameterError(f"{self.family.value} needs beta > 0, got {self.beta}")
            object.__setattr__(self, "beta", float(self.beta))
        elif self.beta is not None:
            raise ParameterError(f"{self.family.value} does not take beta")

    @property
    def is_thermal(self) -> bool:
        return self.family in THERMAL_FAMILIES

    @property
    def label(self) -> str:
        return self.family.value

    @classmethod
    def from_name(cls, name: str, beta: Optional[float] = None) -> "PropagatorKind":
        try:
            family = KernelFamily(name)
        except ValueError:
            known = ", ".join(f.value for f in KernelFamily)
            raise ParameterError(f"unknown propagator kind '{name}' (known: {known})")
        return cls(family, beta)


PAULI_JORDAN = PropagatorKind(KernelFamily.PAULI_JORDAN)
WIGHTMAN_PLUS = PropagatorKind(KernelFamily.WIGHTMAN_PLUS)
FEYNMAN = PropagatorKind(KernelFamily.FEYNMAN)
ADVANCED = PropagatorKind(KernelFamily.ADVANCED)
RETARDED = PropagatorKind(KernelFamily.RETARDED)
DIRAC = PropagatorKind(KernelFamily.DIRAC)


def thermal(beta: float) -> PropagatorKind:
    return PropagatorKind(KernelFamily.THERMAL, beta)


def thermal_minus_vacuum(beta: float) -> PropagatorKind:
    return PropagatorKind(KernelFamily.THERMAL_MINUS_VACUUM, beta)


@dataclass(frozen=True)
class QuadratureSpec:
    """Радиальная квадратура, MC и оракулы"""

    nodes: int = QUADRATURE_DEFAULTS["nodes"]
    p_max_sigmas: float = QUADRATURE_DEFAULTS["p_max_sigmas"]
    mc_samples: int = QUADRATURE_DEFAULTS["mc_samples"]
    seed: int = QUADRATURE_DEFAULTS["seed"]
    oracle_nodes: int = QUADRATURE_DEFAULTS["oracle_nodes"]
    tensor_nodes: int = QUADRATURE_DEFAULTS["tensor_nodes"]
    chunk_size: int = QUADRATURE_DEFAULTS["chunk_size"]
    sampler: str = QUADRATURE_DEFAULTS["sampler"]

    def __post_init__(self):
        if self.nodes < 16:
            raise ParameterError(f"nodes must be >= 16, got {self.nodes}")
        if self.p_max_sigmas < 20:
            raise ParameterError(f"p_max_sigmas must be >= 20, got {self.p_max_sigmas}")
        if self.mc_samples < 1 or self.oracle_nodes < 1 or self.tensor_nodes < 1 or self.chunk_size < 1:
            raise ParameterError("sample and node counts must be positive")
        if not 0 <= self.seed < 2 ** 64:
            raise ParameterError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.sampler not in ("radial", "uniform"):
            raise ParameterError(f"unknown sampler '{self.sampler}' (radial|uniform)")

    def p_max(self, lam: float) -> float:
        """p_max = √(W/(2λ²))"""
        return math.sqrt(self.p_max_sigmas / (2.0 * lam * lam))

    def with_overrides(self, **overrides) -> "QuadratureSpec":
        return replace(self, **overrides)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "nodes": self.nodes,
            "p_max_sigmas": self.p_max_sigmas,
            "mc_samples": self.mc_samples,
            "seed": self.seed,
            "oracle_nodes": self.oracle_nodes,
            "tensor_nodes": self.tensor_nodes,
            "chunk_size": self.chunk_size,
            "sampler": self.sampler,
        }

    @classmethod
    def from_dict(cls, data: Optional[Dict[str, Any]] = None) -> "QuadratureSpec":
        merged = dict(QUADRATURE_DEFAULTS)
        merged.update(data or {})
        unknown = set(merged) - set(QUADRATURE_DEFAULTS)
        if unknown:
            raise ParameterError(f"unknown quadrature fields: {sorted(unknown)}")
        return cls(**merged)
