#!/usr/bin/env python3
"""
Дамп графов свертки рядов по порядкам (JSON)
"""

import json
import logging
from typing import Dict, List, Optional

from functionals.algebra import monomial
from functionals.terms import MonomialTerm
from model.cutoffs import CutoffSpec
from model.geometry import ORIGIN
from perturbation.bogoliubov import bogoliubov
from perturbation.cocycle import generator
from perturbation.interaction import Interaction
from perturbation.smatrix import SeriesElement, s_inverse, s_matrix
from utils.errors import ParameterError

logger = logging.getLogger(__name__)

GRAPH_SERIES = ("s-matrix", "inverse", "bogoliubov", "generator")


def _vertex_label(term: MonomialTerm, index: int) -> dict:
    vertex = term.vertices[index]
    if vertex.is_free:
        position = vertex.position.label
    else:
        event = vertex.position
        position = f"({event.t:g}, {event.x[0]:g}, {event.x[1]:g}, {event.x[2]:g})"
    label = {"label": index, "position": position, "power": vertex.power, "role": vertex.role.value}
    if vertex.shift:
        label["shift"] = {"t": vertex.shift.real, "u": -vertex.shift.imag}
    return label


def term_graph(term: MonomialTerm) -> dict:
    legs: Dict[int, int] = {}
    for edge in term.edges:
        legs[edge.i] = legs.get(edge.i, 0) + edge.multiplicity
        legs[edge.j] = legs.get(edge.j, 0) + edge.multiplicity
    return {
        "coefficient": {"re": float(term.coefficient.re), "im": float(term.coefficient.im),
                        "exact": str(term.coefficient)},
        "vertices": [_vertex_label(term, i) for i in range(len(term.vertices))],
        "edges": [e.to_dict() for e in term.edges],
        "components": len(term.components()),
        "mass_shift_power": term.mass_shift_power,
    }


def graph_dump(series: SeriesElement) -> dict:
    orders: List[dict] = []
    for k in range(series.max_order + 1):
        graphs = [term_graph(t) for t in series[k].terms]
        orders.append({"order": k, "terms": len(graphs), "graphs": graphs})
    return {"series": series.provenance.value, "max_order": series.max_order, "orders": orders}


def build_series(name: str, degree: int, K: int, cutoffs: CutoffSpec,
                 observable_power: int = 1) -> SeriesElement:
    """Ряд для команды graphs; наблюдаемая - φ^p в начале координат"""
    V = Interaction(degree, cutoffs)
    if name == "s-matrix":
        return s_matrix(V, K)
    if name == "inverse":
        return s_inverse(s_matrix(V, K))
    if name == "bogoliubov":
        return bogoliubov(V, monomial([(ORIGIN, observable_power)]), K)
    if name == "generator":
        return generator(V, K)
    raise ParameterError(f"unknown series '{name}', expected one of {', '.join(GRAPH_SERIES)}")


def write_graphs(series: SeriesElement, path: Optional[str] = None) -> str:
    text = json.dumps(graph_dump(series), indent=2, ensure_ascii=False)
    if path:
        with open(path, "w", encoding="utf-8") as handle:
            handle.write(text)
        logger.info(f"✅ Graphs of {series.provenance.value} written to {path}")
    return text
