"""Harmonic frames of finite abelian groups and their census for cyclic groups.

Orbit counting is exact integer work on subset bitmasks.  Subsets ``J`` of
``Z_n`` are counted only through orbits that contain a subset generating
``Z_n``, i.e. a subset whose harmonic frame has ``n`` distinct vectors.  For
translations and affine maps every orbit has such a member, so this only
changes the automorphism count.
"""

from __future__ import annotations

import logging
import math
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Optional, Sequence

import numpy as np

from .core import DEFAULT_TOL, Frame, Tolerance, gram
from .equivalence import DEFAULT_BUDGET, projective_equiv_reindex
from .errors import InvalidInput, SearchBudgetExceeded

logger = logging.getLogger(__name__)

__all__ = [
    "AbelianGroup",
    "SubsetJ",
    "CensusRow",
    "harmonic_frame",
    "units",
    "generates",
    "translation_orbit_count",
    "automorphism_orbit_count",
    "affine_orbit_count",
    "orbit_representatives",
    "census",
    "anomaly_flags",
    "CSV_HEADER",
]


@dataclass(frozen=True)
class AbelianGroup:
    """``Z_{n1} x ... x Z_{nk}``; elements are indexed in mixed radix, last factor fastest."""

    factors: tuple

    def __init__(self, factors):
        if isinstance(factors, (int, np.integer)):
            factors = (int(factors),)
        factors = tuple(int(f) for f in factors)
        if not factors or any(f < 1 for f in factors):
            raise InvalidInput(f"invalid group factors {factors}")
        object.__setattr__(self, "factors", factors)

    @property
    def order(self) -> int:
        return math.prod(self.factors)

    @property
    def is_cyclic(self) -> bool:
        return len(self.factors) == 1

    def element(self, index: int) -> tuple:
        out = []
        for f in reversed(self.factors):
            index, r = divmod(index, f)
            out.append(r)
        return tuple(reversed(out))

    def index(self, elem) -> int:
        idx = 0
        for g, f in zip(elem, self.factors):
            idx = idx * f + g % f
        return idx

    def add(self, a: int, b: int) -> int:
        return self.index(tuple(x + y for x, y in zip(self.element(a), self.element(b))))

    def neg(self, a: int) -> int:
        return self.index(tuple(-x for x in self.element(a)))


@dataclass(frozen=True)
class SubsetJ:
    group: AbelianGroup
    members: tuple

    def __init__(self, group, members):
        if not isinstance(group, AbelianGroup):
            group = AbelianGroup(group)
        members = tuple(sorted(int(m) for m in members))
        if len(set(members)) != len(members):
            raise InvalidInput("subset has repeated elements")
        if any(not 0 <= m < group.order for m in members):
            raise InvalidInput(f"subset elements must lie in 0..{group.order - 1}")
        if not members:
            raise InvalidInput("subset must be non-empty")
        object.__setattr__(self, "group", group)
        object.__setattr__(self, "members", members)

    @property
    def d(self) -> int:
        return len(self.members)


def harmonic_frame(group, subset) -> Frame:
    """The frame ``(xi|_J)`` over all characters ``xi`` of ``group``, in ``C^|J|``.

    The character indexed by ``k`` takes ``exp(2 pi i sum_t k_t g_t / n_t)``
    at ``g``; phases are reduced modulo the group exponent in integers
    before the exponential is taken.
    """
    if not isinstance(group, AbelianGroup):
        group = AbelianGroup(group)
    if not isinstance(subset, SubsetJ):
        subset = SubsetJ(group, subset)
    elif subset.group != group:
        raise InvalidInput("subset belongs to a different group")
    L = math.lcm(*group.factors)
    roots = np.exp(2j * np.pi * np.arange(L) / L)
    scale = [L // f for f in group.factors]
    chars = [group.element(k) for k in range(group.order)]
    V = np.empty((subset.d, group.order), dtype=complex)
    for r, m in enumerate(subset.members):
        g = group.element(m)
        for k, ch in enumerate(chars):
            e = sum(ki * gi * s for ki, gi, s in zip(ch, g, scale)) % L
            V[r, k] = roots[e]
    return Frame(V)


def units(n: int) -> list:
    return [u for u in range(1, n + 1) if math.gcd(u, n) == 1]


def generates(subset: Iterable[int], n: int) -> bool:
    """Whether ``subset`` generates ``Z_n`` (gcd of its elements and n is 1)."""
    g = n
    for j in subset:
        g = math.gcd(g, j)
    return g == 1


def _prime_factors(n: int) -> list:
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    if n > 1:
        out.append(n)
    return out


class _MaskAction:
    """A set of permutations of ``range(n)`` acting on subset bitmasks."""

    def __init__(self, n: int, perms: Sequence[Sequence[int]]):
        self.n = n
        self.chunks = (n + 7) // 8
        self.tables = []
        for perm in perms:
            tabs = []
            for c in range(self.chunks):
                tab = [0] * 256
                for byte in range(256):
                    m = 0
                    for b in range(8):
                        i = 8 * c + b
                        if byte >> b & 1 and i < n:
                            m |= 1 << perm[i]
                    tab[byte] = m
                tabs.append(tab)
            self.tables.append(tabs)

    def orbit(self, mask: int) -> set:
        out = set()
        for tabs in self.tables:
            img = 0
            m = mask
            for tab in tabs:
                img |= tab[m & 255]
                m >>= 8
            out.add(img)
        return out


def _cyclic_perms(n: int, action: str) -> list:
    if action == "translation":
        return [[(x - b) % n for x in range(n)] for b in range(n)]
    if action == "automorphism":
        return [[(u * x) % n for x in range(n)] for u in units(n)]
    if action == "affine":
        return [[(u * x - b) % n for x in range(n)] for u in units(n) for b in range(n)]
    raise InvalidInput(f"unknown action {action!r}")


def _group_translations(group: AbelianGroup) -> list:
    n = group.order
    elems = [group.element(i) for i in range(n)]
    return [[group.index(tuple(x - y for x, y in zip(elems[i], elems[b]))) for i in range(n)] for b in range(n)]


def _scan(n: int, d: int, perms, keep_generating: bool, reps: bool):
    """Count orbits (and optionally collect lexicographically least members)."""
    if not 0 <= d <= n:
        raise InvalidInput(f"need 0 <= d <= n, got d={d}, n={n}")
    act = _MaskAction(n, perms)
    full = (1 << n) - 1
    prime_masks = []
    if keep_generating:
        for p in _prime_factors(n):
            prime_masks.append(sum(1 << x for x in range(0, n, p)))

    def good(mask):
        return all(mask & ~pm & full for pm in prime_masks)

    seen = set()
    count = 0
    out = []
    for J in combinations(range(n), d):
        mask = 0
        for j in J:
            mask |= 1 << j
        if mask in seen:
            continue
        orb = act.orbit(mask)
        seen |= orb
        if keep_generating and n > 1 and not any(good(m) for m in orb):
            continue
        count += 1
        if reps:
            out.append(J)
    return out if reps else count


def translation_orbit_count(n, d: int, distinct: bool = True) -> int:
    """Orbits of ``d``-subsets under translations ``j -> j - b``.

    ``n`` may be an integer (cyclic group) or an AbelianGroup.
    """
    if isinstance(n, AbelianGroup) and not n.is_cyclic:
        return _scan(n.order, d, _group_translations(n), False, False)
    n = n.order if isinstance(n, AbelianGroup) else int(n)
    return _scan(n, d, _cyclic_perms(n, "translation"), distinct, False)


def automorphism_orbit_count(n: int, d: int, distinct: bool = True) -> int:
    """Orbits of ``d``-subsets of ``Z_n`` under ``J -> uJ`` for units ``u``.

    With ``distinct`` (the default) only subsets that generate ``Z_n`` are
    counted, matching harmonic frames of ``n`` distinct vectors.
    """
    return _scan(int(n), d, _cyclic_perms(int(n), "automorphism"), distinct, False)


def affine_orbit_count(n: int, d: int, distinct: bool = True) -> int:
    """Orbits of ``d``-subsets of ``Z_n`` under ``j -> u j - b``."""
    return _scan(int(n), d, _cyclic_perms(int(n), "affine"), distinct, False)


def orbit_representatives(n: int, d: int, action: str, distinct: bool = True) -> list:
    """Lexicographically least subset of every orbit (orbits counted as above)."""
    return _scan(int(n), d, _cyclic_perms(int(n), action), distinct, True)


CSV_HEADER = "n,d,translation_orbits,automorphism_orbits,affine_orbits,exact_unitary,exact_projective,status"


@dataclass
class CensusRow:
    n: int
    d: int
    translation_orbits: int
    automorphism_orbits: int
    affine_orbits: int
    exact_unitary: Optional[int] = None
    exact_projective: Optional[int] = None
    mode: str = "orbits"
    # lower bounds differ from the exact counts only when a search hit its budget
    unitary_lower: Optional[int] = None
    projective_lower: Optional[int] = None
    flags: list = field(default_factory=list)

    @property
    def status(self) -> str:
        if self.mode == "orbits":
            return "orbits"
        ranged = (self.unitary_lower != self.exact_unitary) or (self.projective_lower != self.exact_projective)
        parts = ["range" if ranged else "exact"] + self.flags
        return ";".join(parts)

    def _cell(self, lo, hi):
        if hi is None:
            return ""
        return str(hi) if lo == hi else f"{lo}-{hi}"

    def to_dict(self) -> dict:
        return dict(zip(CSV_HEADER.split(","), self.csv().split(",")))

    def csv(self) -> str:
        return ",".join(
            [
                str(self.n),
                str(self.d),
                str(self.translation_orbits),
                str(self.automorphism_orbits),
                str(self.affine_orbits),
                self._cell(self.unitary_lower, self.exact_unitary),
                self._cell(self.projective_lower, self.exact_projective),
                self.status,
            ]
        )


def anomaly_flags(row: CensusRow) -> list:
    """Names of the ways exact counts disagree with the orbit estimates above them."""
    flags = []
    if row.exact_projective is not None and row.exact_projective > row.affine_orbits:
        flags.append("exact_projective>affine_orbits")
    if row.exact_unitary is not None and row.exact_unitary > row.automorphism_orbits:
        flags.append("exact_unitary>automorphism_orbits")
    if row.exact_projective is not None and row.exact_unitary is not None and row.exact_projective > row.exact_unitary:
        flags.append("exact_projective>exact_unitary")
    return flags


def _pair_check(args):
    G1, G2, tol, budget, unitary = args
    try:
        return bool(projective_equiv_reindex(G1, G2, tol, budget, unitary=unitary))
    except SearchBudgetExceeded:
        return None


def _merge_classes(grams, tol, budget, unitary, pool=None):
    """Group Gramians into equivalence classes; returns (classes, lower bound)."""
    leaders = []
    unknown = []
    for i, G in enumerate(grams):
        jobs = [(grams[l], G, tol, budget, unitary) for l in leaders]
        results = list(pool.map(_pair_check, jobs)) if pool and len(jobs) > 1 else [_pair_check(j) for j in jobs]
        hit = next((l for l, r in zip(leaders, results) if r is True), None)
        if hit is None:
            unknown.extend((l, i) for l, r in zip(leaders, results) if r is None)
            leaders.append(i)
    # smallest count consistent with the undecided pairs
    root = {l: l for l in leaders}

    def find(x):
        while root[x] != x:
            root[x] = root[root[x]]
            x = root[x]
        return x

    for a, b in unknown:
        root[find(a)] = find(b)
    lower = len({find(l) for l in leaders})
    return len(leaders), lower


def census(
    n: int,
    d: int,
    mode: str = "orbits",
    budget: int = DEFAULT_BUDGET,
    tol: Tolerance = DEFAULT_TOL,
    workers: Optional[int] = None,
) -> CensusRow:
    """Orbit counts and, in ``"exact"`` mode, the true numbers of classes.

    Exact mode takes one representative per automorphism orbit (resp. affine
    orbit), builds the harmonic frames and merges representatives whose
    Gramians agree up to reindexing (resp. up to reindexing and phases).
    Undecided pairs leave a range rather than a guess.
    """
    if mode not in ("orbits", "exact"):
        raise InvalidInput(f"mode must be 'orbits' or 'exact', got {mode!r}")
    row = CensusRow(
        n,
        d,
        translation_orbit_count(n, d),
        automorphism_orbit_count(n, d),
        affine_orbit_count(n, d),
        mode=mode,
    )
    if mode == "exact":
        if workers is None:
            workers = int(os.environ.get("FRAMEQ_THREADS", "1") or 1)
        group = AbelianGroup(n)
        pool = ProcessPoolExecutor(workers) if workers > 1 else None
        try:
            uni = [gram(harmonic_frame(group, J)).entries for J in orbit_representatives(n, d, "automorphism")]
            row.exact_unitary, row.unitary_lower = _merge_classes(uni, tol, budget, True, pool)
            proj = [gram(harmonic_frame(group, J)).entries for J in orbit_representatives(n, d, "affine")]
            row.exact_projective, row.projective_lower = _merge_classes(proj, tol, budget, False, pool)
        finally:
            if pool:
                pool.shutdown()
        row.flags = anomaly_flags(row)
        logger.info("census n=%d d=%d: %s", n, d, row.csv())
    return row
