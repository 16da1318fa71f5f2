#!/usr/bin/env python3
"""
Сценарии запуска (JSON): модель, взаимодействие, срезки, наблюдаемая,
состояние, квадратура и параметры сканов
"""

import json
import logging
import math
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Tuple

from config.qst_config import SCAN_DEFAULTS
from functionals.algebra import Functional, monomial
from model.cutoffs import CutoffSpec
from model.geometry import Event, ModelParams
from propagators.kinds import QuadratureSpec
from states.spec import StateKind, StateSpec
from utils.errors import DomainError, ScenarioError

logger = logging.getLogger(__name__)

METHODS = ("mc", "tensor", "radial")

# Схема: раздел -> (обязательные ключи, допустимые ключи)
SCENARIO_SCHEMA = {
    "model": ({"m", "lambda"}, {"m", "lambda"}),
    "interaction": ({"degree"}, {"degree"}),
    "cutoffs": ({"eps", "T", "R", "delta"}, {"eps", "T", "R", "delta"}),
    "state": ({"kind"}, {"kind", "beta", "dressing", "monotone"}),
    "scan": (set(), {"radii", "betas", "times", "tolerance"}),
    "kms": (set(), {"truncation", "u_nodes"}),
    "evolution": (set(), {"commutator_order", "nodes"}),
}
TOP_LEVEL_KEYS = {"model", "interaction", "cutoffs", "observable", "order", "state", "method",
                  "quadrature", "scan", "kms", "evolution", "seed"}


@dataclass(frozen=True)
class ObservableAtom:
    """c·φ^p(x)"""

    position: Event
    power: int
    coefficient: complex = 1.0 + 0.0j

    def to_dict(self) -> dict:
        return {"t": self.position.t, "x": list(self.position.x), "power": self.power,
                "coefficient": {"re": self.coefficient.real, "im": self.coefficient.imag}}


@dataclass(frozen=True)
class ScanConfig:
    radii: Tuple[float, ...] = tuple(SCAN_DEFAULTS["radii"])
    betas: Tuple[float, ...] = tuple(SCAN_DEFAULTS["betas"])
    times: Tuple[float, ...] = tuple(SCAN_DEFAULTS["times"])
    tolerance: float = SCAN_DEFAULTS["tolerance"]

    def to_dict(self) -> dict:
        return {"radii": list(self.radii), "betas": list(self.betas), "times": list(self.times),
                "tolerance": self.tolerance}


@dataclass(frozen=True)
class ScenarioConfig:
    model: ModelParams
    degree: int
    cutoffs: CutoffSpec
    observable: Tuple[ObservableAtom, ...]
    order: int = 1
    state_kind: str = "vacuum"
    beta: Optional[float] = None
    dressing: Tuple[ObservableAtom, ...] = ()
    monotone: bool = False
    method: str = "mc"
    quadrature: QuadratureSpec = field(default_factory=QuadratureSpec)
    scan: ScanConfig = field(default_factory=ScanConfig)
    kms_truncation: int = 1
    kms_u_nodes: int = SCAN_DEFAULTS["kms_u_nodes"]
    commutator_order: Optional[int] = None
    simplex_nodes: int = SCAN_DEFAULTS["simplex_nodes"]

    @property
    def seed(self) -> int:
        return self.quadrature.seed

    def observable_functional(self) -> Functional:
        return _atoms_functional(self.observable)

    def state(self) -> StateSpec:
        if self.state_kind == StateKind.THERMAL.value:
            return StateSpec.thermal(self.beta)
        if self.state_kind == StateKind.DRESSED.value:
            return StateSpec.dressed(_atoms_functional(self.dressing), self.monotone)
        return StateSpec.vacuum()

    def to_dict(self) -> dict:
        state: Dict[str, Any] = {"kind": self.state_kind}
        if self.beta is not None:
            state["beta"] = self.beta
        if self.dressing:
            state["dressing"] = [a.to_dict() for a in self.dressing]
            state["monotone"] = self.monotone
        data = {
            "model": {"m": self.model.m, "lambda": self.model.lam},
            "interaction": {"degree": self.degree},
            "cutoffs": self.cutoffs.to_dict(),
            "observable": [a.to_dict() for a in self.observable],
            "order": self.order,
            "state": state,
            "method": self.method,
            "quadrature": self.quadrature.to_dict(),
            "scan": self.scan.to_dict(),
            "kms": {"truncation": self.kms_truncation, "u_nodes": self.kms_u_nodes},
            "evolution": {"nodes": self.simplex_nodes},
        }
        if self.commutator_order is not None:
            data["evolution"]["commutator_order"] = self.commutator_order
        return data


def _atoms_functional(atoms: Tuple[ObservableAtom, ...]) -> Functional:
    total = Functional.zero()
    for atom in atoms:
        total = total + monomial([(atom.position, atom.power)], atom.coefficient)
    return total


# ----------------------------------------------------------------------
# разбор
# ----------------------------------------------------------------------
def _section(data: dict, name: str, optional: bool = False) -> dict:
    section = data.get(name)
    if section is None:
        if optional:
            return {}
        raise ScenarioError(f"scenario is missing the '{name}' section")
    if not isinstance(section, dict):
        raise ScenarioError(f"scenario section '{name}' must be an object")
    required, allowed = SCENARIO_SCHEMA[name]
    missing = required - set(section)
    if missing:
        raise ScenarioError(f"section '{name}' is missing {sorted(missing)}")
    unknown = set(section) - allowed
    if unknown:
        raise ScenarioError(f"section '{name}' has unknown keys {sorted(unknown)}")
    return section


def _number(value: Any, label: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ScenarioError(f"{label} must be a number, got {value!r}")
    return float(value)


def _integer(value: Any, label: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int):
        raise ScenarioError(f"{label} must be an integer, got {value!r}")
    return value


def _numbers(value: Any, label: str) -> Tuple[float, ...]:
    if not isinstance(value, list):
        raise ScenarioError(f"{label} must be a list of numbers")
    return tuple(_number(v, label) for v in value)


def _coefficient(value: Any, label: str) -> complex:
    if value is None:
        return 1.0 + 0.0j
    if isinstance(value, dict):
        unknown = set(value) - {"re", "im"}
        if unknown:
            raise ScenarioError(f"{label} has unknown keys {sorted(unknown)}")
        return complex(_number(value.get("re", 0.0), label), _number(value.get("im", 0.0), label))
    return complex(_number(value, label), 0.0)


def _atoms(value: Any, label: str) -> Tuple[ObservableAtom, ...]:
    if not isinstance(value, list) or not value:
        raise ScenarioError(f"{label} must be a non-empty list of atoms")
    atoms: List[ObservableAtom] = []
    for i, item in enumerate(value):
        where = f"{label}[{i}]"
        if not isinstance(item, dict):
            raise ScenarioError(f"{where} must be an object")
        unknown = set(item) - {"t", "x", "power", "coefficient"}
        if unknown:
            raise ScenarioError(f"{where} has unknown keys {sorted(unknown)}")
        if "t" not in item or "power" not in item:
            raise ScenarioError(f"{where} needs 't' and 'power'")
        x = _numbers(item.get("x", [0.0, 0.0, 0.0]), f"{where}.x")
        if len(x) != 3:
            raise ScenarioError(f"{where}.x must have 3 components")
        power = _integer(item["power"], f"{where}.power")
        if power < 0:
            raise ScenarioError(f"{where}.power must be >= 0")
        atoms.append(ObservableAtom(Event(_number(item["t"], f"{where}.t"), x), power,
                                    _coefficient(item.get("coefficient"), f"{where}.coefficient")))
    return tuple(atoms)


def parse_scenario(data: dict) -> ScenarioConfig:
    """Словарь JSON -> ScenarioConfig; ошибки формы - ScenarioError, ограничения модели - их собственные"""
    if not isinstance(data, dict):
        raise ScenarioError("scenario must be a JSON object")
    unknown = set(data) - TOP_LEVEL_KEYS
    if unknown:
        raise ScenarioError(f"unknown scenario sections {sorted(unknown)}")

    model = _section(data, "model")
    interaction = _section(data, "interaction")
    cutoffs_data = _section(data, "cutoffs")
    state = _section(data, "state")
    scan = _section(data, "scan", optional=True)
    kms = _section(data, "kms", optional=True)
    evolution = _section(data, "evolution", optional=True)
    if "observable" not in data:
        raise ScenarioError("scenario is missing the 'observable' section")

    quadrature = data.get("quadrature", {})
    if not isinstance(quadrature, dict):
        raise ScenarioError("scenario section 'quadrature' must be an object")
    if "seed" in data:
        quadrature = dict(quadrature, seed=_integer(data["seed"], "seed"))

    method = data.get("method", "mc")
    if method not in METHODS:
        raise ScenarioError(f"unknown method '{method}' ({'|'.join(METHODS)})")
    kind = state["kind"]
    if kind not in {k.value for k in StateKind}:
        raise ScenarioError(f"unknown state kind '{kind}'")

    default_scan = ScanConfig()
    config = ScenarioConfig(
        model=ModelParams(_number(model["m"], "model.m"), _number(model["lambda"], "model.lambda")),
        degree=_integer(interaction["degree"], "interaction.degree"),
        cutoffs=CutoffSpec(*(_number(cutoffs_data[k], f"cutoffs.{k}") for k in ("eps", "T", "R", "delta"))),
        observable=_atoms(data["observable"], "observable"),
        order=_integer(data.get("order", 1), "order"),
        state_kind=kind,
        beta=_number(state["beta"], "state.beta") if "beta" in state else None,
        dressing=_atoms(state["dressing"], "state.dressing") if "dressing" in state else (),
        monotone=bool(state.get("monotone", False)),
        method=method,
        quadrature=QuadratureSpec.from_dict(quadrature),
        scan=ScanConfig(
            radii=_numbers(scan["radii"], "scan.radii") if "radii" in scan else default_scan.radii,
            betas=_numbers(scan["betas"], "scan.betas") if "betas" in scan else default_scan.betas,
            times=_numbers(scan["times"], "scan.times") if "times" in scan else default_scan.times,
            tolerance=_number(scan.get("tolerance", default_scan.tolerance), "scan.tolerance"),
        ),
        kms_truncation=_integer(kms.get("truncation", 1), "kms.truncation"),
        kms_u_nodes=_integer(kms.get("u_nodes", SCAN_DEFAULTS["kms_u_nodes"]), "kms.u_nodes"),
        commutator_order=(_integer(evolution["commutator_order"], "evolution.commutator_order")
                          if "commutator_order" in evolution else None),
        simplex_nodes=_integer(evolution.get("nodes", SCAN_DEFAULTS["simplex_nodes"]), "evolution.nodes"),
    )
    validate_scenario(config)
    return config


def validate_scenario(config: ScenarioConfig):
    """Ограничения, не проверяемые конструкторами компонентов"""
    eps = config.cutoffs.eps
    for atom in config.observable:
        if not abs(atom.position.t) < eps:
            raise DomainError(f"observable atom at t={atom.position.t:g} lies outside the slice |t| < eps={eps:g}")
    if config.order < 0:
        raise ScenarioError(f"order must be >= 0, got {config.order}")
    if not (config.scan.tolerance > 0 and math.isfinite(config.scan.tolerance)):
        raise ScenarioError(f"scan tolerance must be positive, got {config.scan.tolerance}")
    # StateSpec проверяет β и одевающий функционал
    config.state()


def load_scenario(path: str) -> ScenarioConfig:
    try:
        with open(path, "r", encoding="utf-8") as handle:
            data = json.load(handle)
    except OSError as e:
        raise ScenarioError(f"cannot read scenario {path}: {e}")
    except json.JSONDecodeError as e:
        raise ScenarioError(f"scenario {path} is not valid JSON: {e}")
    config = parse_scenario(data)
    logger.info(f"✅ Scenario {path} loaded: n={config.degree}, order {config.order}, state {config.state_kind}")
    return config
