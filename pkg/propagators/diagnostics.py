#!/usr/bin/env python3
"""
Диагностики пропагаторов: аппроксимация затухания, уравнение движения,
слабое тождество для источника и CSV-таблицы
"""

import itertools
import logging
import math
from dataclasses import dataclass
from typing import Dict, Optional, Sequence, Tuple

import numpy as np
import pandas as pd
from scipy import stats

from config.qst_config import DECAY_WINDOWS
from model.geometry import ModelParams
from model.kernels import gaussian_kernel_values
from propagators.evaluator import PropagatorEvaluator, get_evaluator
from propagators.kinds import FEYNMAN, PropagatorKind, QuadratureSpec, thermal_minus_vacuum
from utils.errors import ParameterError, UnderflowError
from utils.quadrature_utils import gaussian_quadrature_mesh

logger = logging.getLogger(__name__)

UNDERFLOW_LIMIT = 1e-300
TABLE_COLUMNS = ["kind", "m", "lambda", "beta", "t", "u", "r", "re", "im"]


@dataclass(frozen=True)
class DecayFit:
    """Наклон log|value| по r (spatial), по log t (temporal) или по β (beta)"""

    kind: str
    direction: str
    slope: float
    intercept: float
    r_value: float
    window: Tuple[float, float]
    points: int

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "direction": self.direction,
            "slope": self.slope,
            "intercept": self.intercept,
            "r_value": self.r_value,
            "window": list(self.window),
            "points": self.points,
        }


def _log_magnitudes(values: np.ndarray, label: str) -> np.ndarray:
    magnitudes = np.abs(values)
    if np.any(magnitudes < UNDERFLOW_LIMIT):
        raise UnderflowError(f"{label}: values below {UNDERFLOW_LIMIT:g} in the fit window, use a smaller window")
    return np.log(magnitudes)


def decay_fit(kind: PropagatorKind, params: ModelParams, direction: str, window: Tuple[float, float],
              fixed: float, spec: Optional[QuadratureSpec] = None,
              points: int = DECAY_WINDOWS["points"]) -> DecayFit:
    """
    Наклон затухания ядра.

    spatial  - log|K(fixed, r)| против r на равномерной сетке окна
    temporal - log|K(t, fixed)| против log t на логарифмической сетке (показатель степени)
    """
    evaluator = get_evaluator(params, spec or QuadratureSpec())
    lo, hi = float(window[0]), float(window[1])
    if not 0 <= lo < hi:
        raise ParameterError(f"decay window must satisfy 0 <= lo < hi, got {window}")

    if direction == "spatial":
        validated = (DECAY_WINDOWS["spatial"][0] * params.lam / params.m,
                     DECAY_WINDOWS["spatial"][1] * params.lam / params.m)
        grid = np.linspace(lo, hi, points)
        values = evaluator.evaluate_many(kind, fixed, 0.0, grid)
        x = grid
    elif direction == "temporal":
        validated = (DECAY_WINDOWS["temporal"][0] / params.m, DECAY_WINDOWS["temporal"][1] / params.m)
        if lo <= 0:
            raise ParameterError("temporal decay window must start at t > 0")
        grid = np.geomspace(lo, hi, points)
        values = evaluator.evaluate_many(kind, grid, 0.0, fixed)
        x = np.log(grid)
    else:
        raise ParameterError(f"unknown decay direction '{direction}' (spatial|temporal)")

    if lo < validated[0] * (1 - 1e-9) or hi > validated[1] * (1 + 1e-9):
        logger.warning(f"⚠️ Decay window {window} outside validated range {validated}")

    fit = stats.linregress(x, _log_magnitudes(values, kind.label))
    logger.debug(f"🔍 {kind.label} {direction} slope={fit.slope:.4f} (r={fit.rvalue:.4f})")
    return DecayFit(kind.label, direction, float(fit.slope), float(fit.intercept), float(fit.rvalue),
                    (lo, hi), points)


def beta_decay_fit(params: ModelParams, t: float, r: float, window: Tuple[float, float],
                   spec: Optional[QuadratureSpec] = None, points: int = DECAY_WINDOWS["points"]) -> DecayFit:
    """Наклон log|Δβ,λ - Δ+,λ|(t, r) по β"""
    evaluator = get_evaluator(params, spec or QuadratureSpec())
    betas = np.linspace(float(window[0]), float(window[1]), points)
    values = np.array([evaluator.evaluate(thermal_minus_vacuum(b), t, 0.0, r) for b in betas])
    fit = stats.linregress(betas, _log_magnitudes(values, "thermal-minus-vacuum"))
    return DecayFit("thermal-minus-vacuum", "beta", float(fit.slope), float(fit.intercept),
                    float(fit.rvalue), (float(window[0]), float(window[1])), points)


def _first_derivative(f, x: float, h: float) -> complex:
    return (-f(x + 2 * h) + 8 * f(x + h) - 8 * f(x - h) + f(x - 2 * h)) / (12 * h)


def _second_derivative(f, x: float, h: float) -> complex:
    return (-f(x + 2 * h) + 16 * f(x + h) - 30 * f(x) + 16 * f(x - h) - f(x - 2 * h)) / (12 * h * h)


def equation_of_motion_residual(evaluator: PropagatorEvaluator, kind: PropagatorKind, t: float,
                                r: float, h: float) -> float:
    """
    Относительная невязка (□ - m²)K в точке (t, r), r > 0, пятиточечные разности;
    □ = -∂t² + ∂r² + (2/r)∂r для радиальной функции.
    """
    if r <= 2 * h:
        raise ParameterError("equation-of-motion check needs r > 2h")
    m2 = evaluator.params.m ** 2
    along_t = lambda s: evaluator.evaluate(kind, s, 0.0, r)
    along_r = lambda s: evaluator.evaluate(kind, t, 0.0, s)
    d2t = _second_derivative(along_t, t, h)
    d2r = _second_derivative(along_r, r, h)
    d1r = _first_derivative(along_r, r, h)
    value = evaluator.evaluate(kind, t, 0.0, r)
    residual = -d2t + d2r + 2.0 / r * d1r - m2 * value
    scale = abs(d2t) + abs(d2r) + abs(2.0 / r * d1r) + abs(m2 * value)
    return abs(residual) / scale


def weak_source_identity(params: ModelParams, width: float = 1.0, spec: Optional[QuadratureSpec] = None,
                         nodes: int = 96) -> Tuple[complex, complex]:
    """
    ∫d⁴x ΔF,λ(x)·[(□ - m²)f](x) против i·2√(2π)λe^{-λ²m²}∫d³x f(0,x)G_{2λ}(0,x)
    для f = e^{-(t² + |x|²)/(2s²)}. Левая часть - тензорная квадратура по (t, r),
    отрезок по t разбит в нуле (излом ΔF,λ).
    """
    evaluator = get_evaluator(params, spec or QuadratureSpec())
    s = float(width)
    extent = 10.0 * s
    t_neg, w_neg = gaussian_quadrature_mesh(0.0, nodes, xmin=-extent)
    t_pos, w_pos = gaussian_quadrature_mesh(extent, nodes)
    t = np.concatenate((t_neg, t_pos))
    wt = np.concatenate((w_neg, w_pos))
    r, wr = gaussian_quadrature_mesh(extent, nodes)
    tt, rr = np.meshgrid(t, r, indexing="ij")

    f = np.exp(-(tt ** 2 + rr ** 2) / (2 * s * s))
    box_f = (-tt ** 2 / s ** 4 + 1.0 / s ** 2 + rr ** 2 / s ** 4 - 3.0 / s ** 2 - params.m ** 2) * f
    feynman = evaluator.evaluate_many(FEYNMAN, tt, 0.0, rr)
    lhs = complex(np.sum(wt[:, None] * wr[None, :] * 4 * math.pi * rr ** 2 * feynman * box_f))

    a = 1.0 / (2 * s * s) + 1.0 / (8 * params.lam ** 2)
    overlap = (math.pi / a) ** 1.5 * float(gaussian_kernel_values(np.zeros(4), 2 * params.lam))
    rhs = 1j * 2 * math.sqrt(2 * math.pi) * params.lam * params.damping_offset * overlap
    return lhs, rhs


def tabulate_propagator(kind: PropagatorKind, params: ModelParams, grid: Dict[str, Sequence[float]],
                        spec: Optional[QuadratureSpec] = None) -> pd.DataFrame:
    """Таблица значений на сетке t × u × r в лексикографическом порядке"""
    evaluator = get_evaluator(params, spec or QuadratureSpec())
    ts = sorted(float(v) for v in grid.get("t", [0.0]))
    us = sorted(float(v) for v in grid.get("u", [0.0]))
    rs = sorted(float(v) for v in grid.get("r", [0.0]))
    rows = list(itertools.product(ts, us, rs))
    t, u, r = (np.array(column) for column in zip(*rows))
    values = evaluator.evaluate_many(kind, t, u, r)
    frame = pd.DataFrame({
        "kind": kind.label,
        "m": params.m,
        "lambda": params.lam,
        "beta": kind.beta if kind.beta is not None else np.nan,
        "t": t,
        "u": u,
        "r": r,
        "re": values.real,
        "im": values.imag,
    })
    return frame[TABLE_COLUMNS]


def parse_grid_spec(text: str) -> Dict[str, list]:
    """'t=0:1:5,r=0.5' -> {'t': [0, .25, .5, .75, 1], 'r': [0.5]}; a:b:n - n точек от a до b"""
    grid: Dict[str, list] = {}
    for part in filter(None, (p.strip() for p in text.split(","))):
        if "=" not in part:
            raise ParameterError(f"grid entry '{part}' must look like name=value or name=a:b:n")
        name, value = (s.strip() for s in part.split("=", 1))
        if name not in ("t", "u", "r"):
            raise ParameterError(f"unknown grid axis '{name}' (t|u|r)")
        pieces = value.split(":")
        if len(pieces) == 1:
            grid[name] = [float(pieces[0])]
        elif len(pieces) == 3:
            grid[name] = list(np.linspace(float(pieces[0]), float(pieces[1]), int(pieces[2])))
        else:
            raise ParameterError(f"grid axis '{name}' must be a value or a:b:n")
    return grid
