"""Similarity and projective similarity of frames via dependency projectors.

The dependency projector ``P`` of ``(v_j)`` is the orthogonal projection of
``C^n`` onto the orthogonal complement of the linear dependencies
``{a : sum a_j v_j = 0}``.  Two frames are similar (``w_j = Q v_j``) iff their
projectors agree, and ``P`` is itself the Gram matrix of its columns, so
projective similarity reduces to projective unitary equivalence of projectors.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import DEFAULT_TOL, Frame, GramMatrix, Tolerance
from .equivalence import projective_equiv
from .errors import SizeMismatch
from .invariants import m_product

__all__ = [
    "DependencyProjector",
    "SimilarityVerdict",
    "dependency_projector",
    "canonical_m_product",
    "similar",
    "projectively_similar",
    "independent_subset",
    "similarity_map",
]


@dataclass(frozen=True)
class DependencyProjector:
    matrix: np.ndarray

    @property
    def n(self) -> int:
        return self.matrix.shape[0]

    @property
    def rank(self) -> int:
        return int(round(np.trace(self.matrix).real))

    def gram(self) -> GramMatrix:
        return GramMatrix(self.matrix)


@dataclass(frozen=True)
class SimilarityVerdict:
    """``w_j = c_j Q v_j``; ``q_recipe`` lists the indices on which ``Q v_j = conj(c_j) w_j``
    pins ``Q`` down (a maximal independent subset of the first frame)."""

    similar: bool
    phases: Optional[np.ndarray] = None
    q_recipe: Optional[tuple] = None
    witness: Optional[dict] = None

    def __bool__(self):
        return self.similar

    def to_dict(self) -> dict:
        out = {"equivalent": bool(self.similar), "status": "decided"}
        if self.phases is not None:
            out["phases"] = [[float(z.real), float(z.imag)] for z in self.phases]
        if self.q_recipe is not None:
            src, dst = self.q_recipe
            out["q_recipe"] = {"source": list(src), "target": list(dst)}
        if self.witness is not None:
            out["witness"] = self.witness
        return out


def _as_frame(f) -> Frame:
    return f if isinstance(f, Frame) else Frame(f)


def dependency_projector(frame, tol: Tolerance = DEFAULT_TOL) -> DependencyProjector:
    """Projector onto ``ker(V)^perp = range(V^*)`` from the SVD of the synthesis matrix."""
    V = _as_frame(frame).matrix
    _, s, Wh = np.linalg.svd(V, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return DependencyProjector(np.zeros((V.shape[1], V.shape[1]), dtype=complex))
    r = int(np.sum(s > tol.abs_zero * s[0]))
    W = Wh[:r].conj().T  # orthonormal basis of range(V^*)
    P = W @ W.conj().T
    P = (P + P.conj().T) / 2
    P.setflags(write=False)
    return DependencyProjector(P)


def canonical_m_product(p: DependencyProjector, idx) -> complex:
    """m-product of the columns ``(P e_j)``, whose Gram matrix is ``P``."""
    return m_product(p.matrix, idx)


def _pair(f1, f2):
    f1, f2 = _as_frame(f1), _as_frame(f2)
    if f1.n != f2.n:
        raise SizeMismatch(f"frames of {f1.n} and {f2.n} vectors")
    return f1, f2


def similar(f1, f2, tol: Tolerance = DEFAULT_TOL) -> bool:
    """``w_j = Q v_j`` for an invertible ``Q`` iff the dependency projectors agree."""
    f1, f2 = _pair(f1, f2)
    P1 = dependency_projector(f1, tol).matrix
    P2 = dependency_projector(f2, tol).matrix
    return bool(np.max(np.abs(P1 - P2)) <= tol.match_threshold(1.0))


def independent_subset(frame, tol: Tolerance = DEFAULT_TOL) -> list:
    """Greedy (lowest index first) maximal linearly independent subset."""
    V = _as_frame(frame).matrix
    scale = max(float(np.max(np.abs(V))), 1.0)
    chosen = []
    for j in range(V.shape[1]):
        trial = V[:, chosen + [j]]
        s = np.linalg.svd(trial, compute_uv=False)
        rank = int(np.sum(s > tol.abs_zero * scale * max(s[0], 1.0)))
        if rank == len(chosen) + 1:
            chosen.append(j)
    return chosen


def projectively_similar(f1, f2, tol: Tolerance = DEFAULT_TOL) -> SimilarityVerdict:
    """``w_j = c_j Q v_j`` for invertible ``Q`` and unit ``c_j``, decided on the projectors."""
    f1, f2 = _pair(f1, f2)
    P1 = dependency_projector(f1, tol).matrix
    P2 = dependency_projector(f2, tol).matrix
    verdict = projective_equiv(P1, P2, tol)
    if not verdict.equivalent:
        return SimilarityVerdict(False, witness=verdict.witness)
    basis = tuple(independent_subset(f1, tol))
    return SimilarityVerdict(True, phases=verdict.phases, q_recipe=(basis, basis))


def similarity_map(f1, f2, verdict: SimilarityVerdict) -> np.ndarray:
    """Solve for ``Q`` from ``Q v_j = conj(c_j) w_j`` on the recipe's index set.

    ``Q`` is returned as a ``dim(f2) x dim(f1)`` matrix acting on the span of
    ``f1`` (least-squares extension off that span).
    """
    f1, f2 = _pair(f1, f2)
    src, dst = verdict.q_recipe
    c = verdict.phases
    A = f1.matrix[:, list(src)]
    B = f2.matrix[:, list(dst)] * np.conj(c[list(dst)])[None, :]
    return B @ np.linalg.pinv(A)
