"""JSON interchange formats (0-based indices throughout).

frame     {"dim": d, "vectors": [[[re, im], ... d], ... n]}
gram      {"n": n, "entries": [[[re, im], ...], ...]}          row-major
graph     {"n": n, "edges": [[j, k], ...]}
products  {"n": n, "norms": [...], "moduli": [[...]], "cycles": [{"indices": [...], "value": [re, im]}]}

``norms`` holds the 1-products ``<v_j, v_j>`` and ``moduli`` the grid of
``|<v_j, v_k>|``.
"""

from __future__ import annotations

import json

import numpy as np

from .core import Frame, GramMatrix
from .errors import InvalidInput
from .graph import FrameGraph
from .invariants import DeterminingSet, MProduct

__all__ = [
    "frame_to_json",
    "frame_from_json",
    "gram_to_json",
    "gram_from_json",
    "graph_to_json",
    "graph_from_json",
    "products_to_json",
    "products_from_json",
    "load_frame_or_gram",
    "dumps",
]


def _pair(z) -> list:
    z = complex(z)
    return [float(z.real), float(z.imag)]


def _unpair(p) -> complex:
    if isinstance(p, (int, float)):
        return complex(p)
    if not (isinstance(p, (list, tuple)) and len(p) == 2):
        raise InvalidInput(f"expected a [re, im] pair, got {p!r}")
    return complex(float(p[0]), float(p[1]))


def dumps(obj) -> str:
    return json.dumps(obj, indent=None, separators=(", ", ": "))


def frame_to_json(frame: Frame) -> dict:
    return {"dim": frame.dim, "vectors": [[_pair(z) for z in v] for v in frame.vectors]}


def frame_from_json(data: dict) -> Frame:
    try:
        dim = int(data["dim"])
        vecs = [[_unpair(z) for z in v] for v in data["vectors"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed frame JSON: {exc}") from exc
    if any(len(v) != dim for v in vecs):
        raise InvalidInput("a frame vector does not have length dim")
    return Frame.from_vectors(vecs)


def gram_to_json(g) -> dict:
    G = g.entries if isinstance(g, GramMatrix) else np.asarray(g)
    return {"n": int(G.shape[0]), "entries": [[_pair(z) for z in row] for row in G]}


def gram_from_json(data: dict) -> GramMatrix:
    try:
        n = int(data["n"])
        rows = [[_unpair(z) for z in row] for row in data["entries"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed Gram JSON: {exc}") from exc
    if len(rows) != n or any(len(r) != n for r in rows):
        raise InvalidInput("Gram entries are not n x n")
    return GramMatrix(np.array(rows, dtype=complex))


def graph_to_json(graph: FrameGraph) -> dict:
    return {"n": graph.n, "edges": [list(e) for e in graph.edges]}


def graph_from_json(data: dict) -> FrameGraph:
    try:
        return FrameGraph.from_edges(int(data["n"]), [tuple(e) for e in data["edges"]])
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed graph JSON: {exc}") from exc


def products_to_json(p: DeterminingSet) -> dict:
    return {
        "n": p.n,
        "norms": [float(x) for x in p.norms],
        "moduli": [[float(x) for x in row] for row in np.asarray(p.moduli)],
        "cycles": [{"indices": [int(j) for j in c.indices], "value": _pair(c.value)} for c in p.cycle_products],
    }


def products_from_json(data: dict) -> DeterminingSet:
    try:
        n = int(data["n"])
        norms = np.array([float(x) for x in data["norms"]])
        moduli = np.array([[float(x) for x in row] for row in data["moduli"]])
        cycles = tuple(
            MProduct(tuple(int(j) for j in c["indices"]), _unpair(c["value"])) for c in data.get("cycles", [])
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput(f"malformed products JSON: {exc}") from exc
    if norms.shape != (n,) or moduli.shape != (n, n):
        raise InvalidInput("norms/moduli do not match n")
    if np.max(np.abs(moduli - moduli.T), initial=0.0) > 1e-12 * max(1.0, float(np.max(moduli))):
        raise InvalidInput("moduli grid is not symmetric")
    for c in cycles:
        if any(not 0 <= j < n for j in c.indices):
            raise InvalidInput(f"cycle {list(c.indices)} has an index out of range")
    return DeterminingSet(norms, moduli, cycles)


def load_frame_or_gram(data: dict):
    """Parse either file kind; returns a Frame or a GramMatrix."""
    if not isinstance(data, dict):
        raise InvalidInput("expected a JSON object")
    if "vectors" in data:
        return frame_from_json(data)
    if "entries" in data:
        return gram_from_json(data)
    raise InvalidInput("JSON is neither a frame (vectors) nor a Gram matrix (entries)")
