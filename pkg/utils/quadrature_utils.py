#!/usr/bin/env python3
"""
Квадратурные сетки Гаусса–Лежандра
Используются радиальным преобразованием пропагаторов, оракулами и тензорным интегратором
"""

import math
from functools import lru_cache
from typing import Tuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from utils.errors import ParameterError


@lru_cache(maxsize=64)
def legendre_nodes(n: int) -> Tuple[np.ndarray, np.ndarray]:
    """Узлы и веса на [-1, 1]; массивы только для чтения, т.к. кэшируются"""
    if n < 1:
        raise ParameterError(f"Gauss-Legendre rule needs at least one node, got {n}")
    y, w = leggauss(n)
    y.setflags(write=False)
    w.setflags(write=False)
    return y, w


def gaussian_quadrature_mesh(xmax: float, ntot: int, xmin: float = 0.0,
                             xmid: float = 0.0, nmod: int = 0) -> Tuple[np.ndarray, np.ndarray]:
    """
    Сетка Гаусса на [xmin, xmax]; при nmod > 0 отрезок делится в точке xmid
    и на [xmin, xmid] отдается nmod узлов.
    """
    if nmod == 0 and xmid == 0:
        y, w = legendre_nodes(ntot)
        x = 0.5 * (y + 1.0) * (xmax - xmin) + xmin
        return x, 0.5 * (xmax - xmin) * w

    if not 0 < nmod < ntot:
        raise ParameterError(f"nmod must lie in (0, {ntot}), got {nmod}")
    x1, w1 = gaussian_quadrature_mesh(xmid, nmod, xmin=xmin)
    x2, w2 = gaussian_quadrature_mesh(xmax, ntot - nmod, xmin=xmid)
    return np.concatenate((x1, x2)), np.concatenate((w1, w2))


def composite_gauss_mesh(xmin: float, xmax: float, panels: int,
                         nodes_per_panel: int) -> Tuple[np.ndarray, np.ndarray]:
    """Составная сетка: panels равных отрезков по nodes_per_panel узлов"""
    if panels < 1:
        raise ParameterError(f"panels must be positive, got {panels}")
    edges = np.linspace(xmin, xmax, panels + 1)
    y, w = legendre_nodes(nodes_per_panel)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[1:] + edges[:-1])
    x = (mid[:, None] + half[:, None] * y[None, :]).ravel()
    weights = (half[:, None] * w[None, :]).ravel()
    return x, weights


def panel_count(length: float, panel_width: float, minimum: int = 1) -> int:
    """Число панелей ширины не больше panel_width"""
    return max(minimum, int(math.ceil(abs(length) / panel_width)))


def simplex_mesh(t: float, order: int, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Узлы на симплексе t·S_n = {0 < t_n < ... < t_1 < t} для n ≤ 2.

    Возвращает (points, weights), points.shape = (M, n), столбец j содержит t_{j+1}.
    Для n = 2 используется преобразование Даффи t_1 = t·a, t_2 = t·a·b (якобиан t²·a).
    """
    if order == 0:
        return np.zeros((1, 0)), np.ones(1)
    if order == 1:
        x, w = gaussian_quadrature_mesh(t, nodes)
        return x[:, None], w
    if order == 2:
        a, wa = gaussian_quadrature_mesh(1.0, nodes)
        b, wb = gaussian_quadrature_mesh(1.0, nodes)
        aa, bb = np.meshgrid(a, b, indexing='ij')
        t1 = t * aa
        t2 = t * aa * bb
        weights = (t * t * aa) * wa[:, None] * wb[None, :]
        return np.stack((t1.ravel(), t2.ravel()), axis=1), weights.ravel()
    raise ParameterError(f"simplex quadrature implemented for order <= 2, got {order}")


def exponential_mesh(length: float, rate: float, nodes: int) -> Tuple[np.ndarray, np.ndarray]:
    """
    Узлы на [0, length], сгущенные у нуля под затухание e^{-rate·u};
    length = inf дает полуось.
    """
    if rate <= 0:
        raise ParameterError(f"rate must be positive, got {rate}")
    y, w = gaussian_quadrature_mesh(1.0, nodes)
    if math.isinf(length):
        u = -np.log1p(-y) / rate
        return u, w / (rate * (1.0 - y))
    mass = -math.expm1(-rate * length)
    u = -np.log1p(-y * mass) / rate
    return u, w * mass / (rate * (1.0 - y * mass))
