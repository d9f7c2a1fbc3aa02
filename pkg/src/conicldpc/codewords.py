"""Codewords as sets of flags, the tangent involution on parallel classes,
explicit weight-2q words, and exact minimum-distance searches."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .ffield import GF
from .geometry import Flag, GeometryError, Line, Point, conic_family, line_points, line_through
from .gf2 import SparseBinaryMatrix, code_dimension, nullspace_basis, rank_gf2
from .incidence import IncidenceStructure, cached_structure


class ClassEqualsBase(GeometryError):
    pass


class ForbiddenClass(GeometryError):
    pass


class DegenerateClassPair(GeometryError):
    pass


class DimensionTooLarge(ValueError):
    pass


@dataclass(frozen=True)
class FlagWord:
    """A binary word of a code C(i, q), seen as the set of its support flags."""

    structure: IncidenceStructure
    support: tuple[int, ...]

    def __post_init__(self):
        supp = tuple(sorted(set(int(i) for i in self.support)))
        if supp and (supp[0] < 0 or supp[-1] >= self.structure.n_points):
            raise IndexError("support index outside the point set")
        object.__setattr__(self, "support", supp)

    @classmethod
    def from_vector(cls, s: IncidenceStructure, vec) -> "FlagWord":
        return cls(s, tuple(np.flatnonzero(np.asarray(vec) % 2)))

    @classmethod
    def from_flags(cls, s: IncidenceStructure, flags) -> "FlagWord":
        idx = [s.point_index(f) for f in flags]
        if min(idx, default=0) < 0:
            raise GeometryError("flag direction not allowed in this structure")
        return cls(s, tuple(idx))

    @property
    def weight(self) -> int:
        return len(self.support)

    def to_vector(self) -> np.ndarray:
        v = np.zeros(self.structure.n_points, dtype=np.uint8)
        v[list(self.support)] = 1
        return v

    def flags(self) -> list[Flag]:
        return [self.structure.flag(i) for i in self.support]


def is_codeword(w: FlagWord) -> bool:
    """True iff every block meets the support in an even number of flags."""
    H = w.structure.incidence_matrix()
    return not np.any(H.syndrome(w.to_vector()))


# --- the involution on parallel classes ------------------------------------


def _check_classes(family: int, F: GF, class_L0: int, class_L: int) -> None:
    allowed = conic_family(F, family).classes
    for c in (class_L0, class_L):
        if c not in allowed:
            raise ForbiddenClass(f"class {c} is not admissible for family {family}")
    if class_L == class_L0:
        raise ClassEqualsBase("class_L must differ from the base class")


def psi_involution(
    family: int,
    F: GF,
    class_L0: int,
    class_L: int,
    *,
    L0: Line | None = None,
    P: Point | None = None,
    choice: int = 0,
) -> int:
    """Image of ``class_L`` under the involution attached to ``class_L0``.

    Take P on a line L0 of class ``class_L0``, the line L of class
    ``class_L`` through P, a conic tangent to L at P (the ``choice``-th one),
    and its second point Q on L0.  The answer is the class of the tangent at
    Q.  L0, P and ``choice`` only exist to let tests vary the choices.
    """
    _check_classes(family, F, class_L0, class_L)
    fam = conic_family(F, family)
    if L0 is None:
        L0 = line_through(F, Point(0, 0), class_L0)
    if L0.parallel_class(F.q) != class_L0:
        raise ValueError("L0 is not in class_L0")
    on_L0 = line_points(F, L0)
    P = on_L0[0] if P is None else Point(*P)
    if P not in on_L0:
        raise ValueError("P is not on L0")
    L = line_through(F, P, class_L)
    conic = fam.incident_conics(Flag(P, L))[choice]
    others = [Q for Q in fam.points_on(conic) if Q in set(on_L0) and Q != P]
    assert len(others) == 1, f"{conic} should meet L0 in exactly one more affine point"
    return fam.tangent_class(conic, others[0])


def psi_is_identity(family: int, F: GF, class_L0: int) -> bool:
    allowed = [c for c in conic_family(F, family).classes if c != class_L0]
    return all(psi_involution(family, F, class_L0, c) == c for c in allowed)


def min_weight_codeword(
    family: int, F: GF, L0: Line | None = None, class_L: int | None = None
) -> FlagWord:
    """Weight-2q codeword: two flags, of classes [L] and psi([L]), at each point of L0.

    When psi is the identity any two distinct admissible classes work; the
    two smallest ones are used unless ``class_L`` fixes the first.
    """
    s = cached_structure(family, F.q)
    fam = s.conic_family
    if L0 is None:
        L0 = line_through(F, Point(0, 0), fam.classes[0])
    base = L0.parallel_class(F.q)
    if base not in fam.classes:
        raise ForbiddenClass(f"L0 has a forbidden direction for family {family}")
    candidates = [c for c in fam.classes if c != base]
    if psi_is_identity(family, F, base):
        if class_L is None:
            class_L = candidates[0]
        elif class_L not in candidates:
            raise ForbiddenClass(f"class {class_L} is not admissible here")
        others = [c for c in candidates if c != class_L]
        if not others:
            raise DegenerateClassPair("no second admissible class")
        class_M = others[0]
    else:
        if class_L is None:
            class_L = next((c for c in candidates if psi_involution(family, F, base, c) != c), None)
            if class_L is None:
                raise DegenerateClassPair("psi fixes every admissible class")
        class_M = psi_involution(family, F, base, class_L)
        if class_M == class_L:
            raise DegenerateClassPair(f"class {class_L} is a fixed point of psi")
    flags = []
    for P in line_points(F, L0):
        flags.append(Flag(P, line_through(F, P, class_L)))
        flags.append(Flag(P, line_through(F, P, class_M)))
    return FlagWord.from_flags(s, flags)


# --- minimum distance -----------------------------------------------------


def _pack(rows: np.ndarray) -> np.ndarray:
    """Pack 0/1 rows into little-endian uint64 words."""
    rows = np.asarray(rows, dtype=np.uint8)
    n = rows.shape[1]
    pad = (-n) % 64
    if pad:
        rows = np.concatenate([rows, np.zeros((rows.shape[0], pad), dtype=np.uint8)], axis=1)
    return np.packbits(rows, axis=1, bitorder="little").view(np.uint64)


def _weights(words: np.ndarray) -> np.ndarray:
    return np.bitwise_count(words).sum(axis=-1, dtype=np.int64)


def _span_table(basis_words: np.ndarray) -> np.ndarray:
    """All 2^k XOR combinations of k packed rows (row i of the result = mask i)."""
    k, W = basis_words.shape
    table = np.zeros((1 << k, W), dtype=np.uint64)
    for i in range(k):
        half = 1 << i
        table[half : 2 * half] = table[:half] ^ basis_words[i]
    return table


def min_distance_exhaustive(H: SparseBinaryMatrix, max_dim: int = 24, table_bits: int = 16) -> int:
    """Exact minimum distance by enumerating every nonzero codeword.

    The low ``table_bits`` basis vectors are expanded into a table once; the
    remaining ones are walked in Gray-code order, one XOR per step, each step
    scoring the whole table.  Returns 0 for the zero code.
    """
    k = code_dimension(H)
    if k > max_dim:
        raise DimensionTooLarge(f"dimension {k} exceeds max_dim={max_dim}")
    if k == 0:
        return 0
    basis = _pack(nullspace_basis(H))
    lo = min(k, table_bits)
    high = basis[lo:]
    # column-major so every step streams through contiguous words
    table = np.ascontiguousarray(_span_table(basis[:lo]).T)
    W, size = table.shape
    acc_type = np.uint8 if H.n_cols < 256 else np.uint16
    buf = np.empty(size, dtype=np.uint64)
    acc = np.empty(size, dtype=acc_type)
    part = np.empty(size, dtype=np.uint8)

    def lightest(cur: np.ndarray) -> np.ndarray:
        acc[:] = 0
        for w in range(W):
            np.bitwise_xor(table[w], cur[w], out=buf)
            np.bitwise_count(buf, out=part)
            np.add(acc, part, out=acc, casting="unsafe")
        return acc

    cur = np.zeros(W, dtype=np.uint64)
    best = int(lightest(cur)[1:].min()) if size > 1 else 10**9
    for step in range(1, 1 << (k - lo)):
        # Gray code: flip the bit of the lowest set bit of step
        j = (step & -step).bit_length() - 1
        cur ^= high[j]
        best = min(best, int(lightest(cur).min()))
    return best


def _systematic(G: np.ndarray, cols: np.ndarray) -> tuple[np.ndarray, list[int]]:
    """Row-reduce G using pivots chosen among ``cols`` (in order).

    Returns the reduced matrix (same row space) and the pivot columns.
    """
    G = G.copy()
    r = 0
    pivots = []
    for c in cols:
        if r == G.shape[0]:
            break
        hits = np.flatnonzero(G[r:, c]) + r
        if hits.size == 0:
            continue
        p = hits[0]
        if p != r:
            G[[r, p]] = G[[p, r]]
        others = np.flatnonzero(G[:, c])
        others = others[others != r]
        G[others] ^= G[r]
        pivots.append(int(c))
        r += 1
    return G, pivots


def min_distance_information_sets(H: SparseBinaryMatrix, max_weight: int = 8, chunk: int = 1 << 16) -> int:
    """Exact minimum distance by the Brouwer-Zimmermann method.

    Builds generator matrices that are systematic on disjoint information
    sets.  After all messages of weight <= w were tried on every matrix, an
    unseen codeword has weight >= w+1 inside each full information set
    (plus a smaller share on rank-deficient leftovers); the search stops
    once that bound reaches the lightest word found.
    """
    k = code_dimension(H)
    n = H.n_cols
    if k == 0:
        return 0
    G0 = nullspace_basis(H)
    remaining = np.arange(n)
    gens: list[tuple[np.ndarray, int]] = []  # (packed matrix, rank on its set)
    while remaining.size:
        G, piv = _systematic(G0, remaining)
        gens.append((_pack(G), len(piv)))
        remaining = np.setdiff1d(remaining, piv)
        if len(piv) < k:
            break
    best = min(int(_weights(g).min()) for g, _ in gens)
    for w in range(1, max_weight + 1):
        # every generator must see every weight up to w, even while its own
        # share of the bound is still zero
        for g, _ in gens:
            for combo in _combination_chunks(k, w, chunk):
                words = np.bitwise_xor.reduce(g[combo], axis=1)
                best = min(best, int(_weights(words).min()))
        lower = sum(max(0, w + 1 - (k - rank)) for _, rank in gens)
        if lower >= best:
            return best
    raise RuntimeError(f"no certificate up to message weight {max_weight}; best found {best}")


def _combination_chunks(n: int, r: int, chunk: int):
    it = combinations(range(n), r)
    while True:
        block = list(_take(it, chunk))
        if not block:
            return
        yield np.array(block, dtype=np.int64)


def _take(it, n):
    for _ in range(n):
        try:
            yield next(it)
        except StopIteration:
            return


def random_codewords(H: SparseBinaryMatrix, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` uniformly random codewords (rows), via random basis combinations."""
    basis = nullspace_basis(H)
    coeffs = rng.integers(0, 2, size=(count, basis.shape[0]))
    return (coeffs @ basis % 2).astype(np.uint8)


__all__ = [
    "ClassEqualsBase",
    "DegenerateClassPair",
    "DimensionTooLarge",
    "FlagWord",
    "ForbiddenClass",
    "is_codeword",
    "min_distance_exhaustive",
    "min_distance_information_sets",
    "min_weight_codeword",
    "psi_involution",
    "psi_is_identity",
    "random_codewords",
    "rank_gf2",
]
