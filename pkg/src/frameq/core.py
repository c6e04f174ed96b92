"""Frames, Gram matrices and the diagonal phase (gauge) action.

Inner products are linear in the first slot, ``<x, y> = sum x_i conj(y_i)``,
and the Gram matrix of ``(v_j)`` has ``(j, k)`` entry ``<v_k, v_j>``, i.e.
``G = V^* V`` for the synthesis matrix ``V = [v_1, ..., v_n]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import InvalidInput, NotPSD, SizeMismatch

__all__ = [
    "Tolerance",
    "DEFAULT_TOL",
    "Frame",
    "GramMatrix",
    "as_gram",
    "gram",
    "vectors_from_gram",
    "apply_gauge",
    "permute_gram",
    "is_tight",
    "equiangularity",
    "is_psd",
    "unit_phases",
    "random_unitary",
    "random_phases",
]


@dataclass(frozen=True)
class Tolerance:
    """Numerical thresholds used by every decision in the package.

    abs_zero
        Moduli at or below this count as zero (this decides the frame graph).
    rel_match
        Relative tolerance for equality of nonzero quantities.
    """

    abs_zero: float = 1e-9
    rel_match: float = 1e-8

    def __post_init__(self):
        for name in ("abs_zero", "rel_match"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise InvalidInput(f"{name} must be a positive finite number, got {value!r}")

    def match_threshold(self, scale: float) -> float:
        """Largest difference still counted as a match for data of size ``scale``."""
        return max(self.abs_zero, self.rel_match * float(scale))


DEFAULT_TOL = Tolerance()


def _finite_complex(data, what) -> np.ndarray:
    try:
        arr = np.array(data, dtype=complex)
    except (TypeError, ValueError) as exc:
        raise InvalidInput(f"{what}: cannot interpret entries as complex numbers") from exc
    if not np.all(np.isfinite(arr)):
        raise InvalidInput(f"{what}: NaN or infinite entries")
    return arr


@dataclass(frozen=True, eq=False)
class Frame:
    """A sequence of ``n`` vectors in ``C^d``, stored as the ``d x n`` synthesis matrix."""

    matrix: np.ndarray

    def __post_init__(self):
        V = _finite_complex(self.matrix, "frame")
        if V.ndim != 2 or V.shape[0] < 1 or V.shape[1] < 1:
            raise InvalidInput(f"frame must be a non-empty d x n matrix, got shape {V.shape}")
        V.setflags(write=False)
        object.__setattr__(self, "matrix", V)

    @classmethod
    def from_vectors(cls, vectors) -> "Frame":
        vecs = [np.ravel(_finite_complex(v, "frame vector")) for v in vectors]
        if not vecs:
            raise InvalidInput("a frame needs at least one vector")
        if len({len(v) for v in vecs}) != 1:
            raise InvalidInput("frame vectors have different lengths")
        return cls(np.column_stack(vecs))

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    @property
    def n(self) -> int:
        return self.matrix.shape[1]

    @property
    def vectors(self) -> list:
        return [self.matrix[:, j] for j in range(self.n)]

    def __len__(self):
        return self.n

    def __getitem__(self, j):
        return self.matrix[:, j]


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Hermitian ``n x n`` matrix of inner products, ``entries[j, k] = <v_k, v_j>``."""

    entries: np.ndarray
    tol: Tolerance = DEFAULT_TOL

    def __post_init__(self):
        G = _finite_complex(self.entries, "Gram matrix")
        if G.ndim != 2 or G.shape[0] != G.shape[1] or G.shape[0] < 1:
            raise InvalidInput(f"Gram matrix must be square and non-empty, got shape {G.shape}")
        scale = float(np.max(np.abs(G)))
        thr = self.tol.match_threshold(scale)
        if np.max(np.abs(G - G.conj().T)) > thr:
            raise InvalidInput("Gram matrix is not Hermitian")
        if np.min(G.diagonal().real) < -thr:
            raise InvalidInput("Gram matrix has a negative diagonal entry")
        # exact Hermitian symmetry from here on
        G = (G + G.conj().T) / 2
        G.setflags(write=False)
        object.__setattr__(self, "entries", G)

    @property
    def n(self) -> int:
        return self.entries.shape[0]

    def __array__(self, dtype=None, copy=None):
        return self.entries if dtype is None else self.entries.astype(dtype)


def as_gram(g) -> np.ndarray:
    """Return the entries of ``g`` (a GramMatrix or square array) as a complex array."""
    if isinstance(g, GramMatrix):
        return g.entries
    return GramMatrix(g).entries


def gram(frame: Frame) -> GramMatrix:
    """Gram matrix ``[<v_k, v_j>]_{j,k} = V^* V`` of a frame."""
    if not isinstance(frame, Frame):
        frame = Frame(frame)
    V = frame.matrix
    return GramMatrix(V.conj().T @ V)


def is_psd(g, tol: Tolerance = DEFAULT_TOL) -> bool:
    G = as_gram(g)
    w = np.linalg.eigvalsh(G)
    rho = max(float(np.max(np.abs(w))), 0.0)
    return bool(w[0] >= -tol.abs_zero * max(rho, 1.0))


def vectors_from_gram(g, tol: Tolerance = DEFAULT_TOL) -> Frame:
    """Recover a frame from its Gram matrix by eigendecomposition.

    With ``G = U diag(w) U^*`` the rows ``sqrt(w_i) u_i^*`` for the
    eigenvalues above ``abs_zero * spectral_radius`` form the synthesis matrix,
    so the result lives in dimension ``rank(G)``.

    Raises
    ------
    NotPSD
        If an eigenvalue is below ``-abs_zero * spectral_radius``.
    """
    G = as_gram(g)
    w, U = np.linalg.eigh(G)
    rho = float(np.max(np.abs(w)))
    cutoff = tol.abs_zero * rho
    if w[0] < -cutoff:
        raise NotPSD(f"Gram matrix has eigenvalue {w[0]:.3g} < 0")
    keep = np.flatnonzero(w > cutoff)[::-1]
    if keep.size == 0:
        # the zero matrix: n zero vectors in C^1
        return Frame(np.zeros((1, G.shape[0]), dtype=complex))
    V = np.sqrt(w[keep])[:, None] * U[:, keep].conj().T
    return Frame(V)


def unit_phases(c, n: Optional[int] = None, tol: Tolerance = DEFAULT_TOL) -> np.ndarray:
    """Validate a vector of unit-modulus scalars."""
    c = np.ravel(_finite_complex(c, "phases"))
    if n is not None and c.shape[0] != n:
        raise SizeMismatch(f"expected {n} phases, got {c.shape[0]}")
    if np.any(np.abs(np.abs(c) - 1) > tol.rel_match):
        raise InvalidInput("phases must have unit modulus")
    return c


def apply_gauge(g, c) -> GramMatrix:
    """Gram matrix of ``(c_j v_j)`` given that of ``(v_j)``: ``C^* G C``."""
    G = as_gram(g)
    c = unit_phases(c, G.shape[0])
    return GramMatrix(c.conj()[:, None] * G * c[None, :])


def permute_gram(g, perm) -> GramMatrix:
    """Gram matrix of the reindexed sequence ``w_a = v_{perm[a]}``."""
    G = as_gram(g)
    perm = np.asarray(perm, dtype=int)
    if sorted(perm.tolist()) != list(range(G.shape[0])):
        raise InvalidInput("not a permutation of the vertex set")
    return GramMatrix(G[np.ix_(perm, perm)])


def is_tight(frame: Frame, tol: Tolerance = DEFAULT_TOL) -> Optional[float]:
    """Return the frame bound ``A`` if ``sum_j v_j v_j^* = A I``, else None."""
    V = frame.matrix
    S = V @ V.conj().T
    A = float(np.trace(S).real) / frame.dim
    if A <= tol.abs_zero:
        return None
    if np.max(np.abs(S - A * np.eye(frame.dim))) > tol.match_threshold(A):
        return None
    return A


def equiangularity(g, tol: Tolerance = DEFAULT_TOL) -> Optional[float]:
    """Common modulus ``C`` of the off-diagonal entries of a unit-diagonal Gram matrix.

    Returns None unless every diagonal entry is 1 and all off-diagonal
    moduli agree.
    """
    G = as_gram(g)
    n = G.shape[0]
    thr = tol.match_threshold(1.0)
    if np.max(np.abs(G.diagonal() - 1)) > thr:
        return None
    if n == 1:
        return 0.0
    mods = np.abs(G[~np.eye(n, dtype=bool)])
    lo, hi = float(mods.min()), float(mods.max())
    if hi - lo > tol.match_threshold(hi):
        return None
    C = float(mods.mean())
    return 0.0 if C <= tol.abs_zero else C


def random_unitary(d: int, rng=None) -> np.ndarray:
    """Haar-distributed unitary from the QR decomposition of a Ginibre matrix."""
    rng = np.random.default_rng(rng)
    Z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    Q, R = np.linalg.qr(Z)
    return Q * (R.diagonal() / np.abs(R.diagonal()))


def random_phases(n: int, rng=None) -> np.ndarray:
    rng = np.random.default_rng(rng)
    return np.exp(2j * np.pi * rng.random(n))
