"""Binary matrices: sparse row storage plus a bit-packed dense kernel.

Rank and nullspace use Gaussian elimination on rows packed into uint64 words.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

WORD = 64


class SparseBinaryMatrix:
    """Row-major sparse 0/1 matrix (CSR layout, sorted unique column indices)."""

    def __init__(self, n_rows: int, n_cols: int, indptr, indices):
        self.n_rows = int(n_rows)
        self.n_cols = int(n_cols)
        self.indptr = np.asarray(indptr, dtype=np.int64)
        self.indices = np.asarray(indices, dtype=np.int64)
        if self.indptr.shape != (self.n_rows + 1,):
            raise ValueError("indptr has the wrong length")
        if self.indices.size and (self.indices.min() < 0 or self.indices.max() >= self.n_cols):
            raise ValueError("column index out of range")
        for r in range(self.n_rows):
            row = self.indices[self.indptr[r] : self.indptr[r + 1]]
            if row.size > 1 and np.any(np.diff(row) <= 0):
                raise ValueError(f"row {r} is not sorted/deduplicated")

    @classmethod
    def from_rows(cls, rows: Sequence[Iterable[int]], n_cols: int) -> "SparseBinaryMatrix":
        supports = [sorted(set(int(c) for c in r)) for r in rows]
        indptr = np.zeros(len(supports) + 1, dtype=np.int64)
        indptr[1:] = np.cumsum([len(s) for s in supports])
        indices = np.fromiter((c for s in supports for c in s), dtype=np.int64, count=int(indptr[-1]))
        return cls(len(supports), n_cols, indptr, indices)

    @classmethod
    def from_dense(cls, dense) -> "SparseBinaryMatrix":
        dense = np.asarray(dense) % 2
        return cls.from_rows([np.flatnonzero(row) for row in dense], dense.shape[1])

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_rows, self.n_cols)

    @property
    def nnz(self) -> int:
        return int(self.indices.size)

    def row(self, r: int) -> np.ndarray:
        return self.indices[self.indptr[r] : self.indptr[r + 1]]

    def rows(self) -> list[np.ndarray]:
        return [self.row(r) for r in range(self.n_rows)]

    def row_weights(self) -> np.ndarray:
        return np.diff(self.indptr)

    def col_weights(self) -> np.ndarray:
        return np.bincount(self.indices, minlength=self.n_cols)

    def to_scipy(self) -> sp.csr_matrix:
        data = np.ones(self.nnz, dtype=np.int64)
        return sp.csr_matrix((data, self.indices, self.indptr), shape=self.shape)

    def to_dense(self) -> np.ndarray:
        out = np.zeros(self.shape, dtype=np.uint8)
        r = np.repeat(np.arange(self.n_rows), self.row_weights())
        out[r, self.indices] = 1
        return out

    def to_bits(self) -> "BitMatrix":
        return BitMatrix.from_sparse(self)

    def transpose(self) -> "SparseBinaryMatrix":
        cols: list[list[int]] = [[] for _ in range(self.n_cols)]
        for r in range(self.n_rows):
            for c in self.row(r).tolist():
                cols[c].append(r)
        return SparseBinaryMatrix.from_rows(cols, self.n_rows)

    def syndrome(self, word) -> np.ndarray:
        """H @ word over F_2 for a 0/1 vector (or a batch, last axis = columns)."""
        word = np.asarray(word, dtype=np.int64)
        return (self.to_scipy() @ word.T).T % 2

    def permuted(self, row_perm, col_perm) -> "SparseBinaryMatrix":
        """Matrix with rows reordered by row_perm and column j moved to col_perm[j]."""
        col_perm = np.asarray(col_perm)
        rows = [col_perm[self.row(r)] for r in row_perm]
        return SparseBinaryMatrix.from_rows(rows, self.n_cols)

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseBinaryMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self.indptr, other.indptr)
            and np.array_equal(self.indices, other.indices)
        )

    def __repr__(self) -> str:
        return f"SparseBinaryMatrix({self.n_rows}x{self.n_cols}, nnz={self.nnz})"


class BitMatrix:
    """Dense binary matrix with each row packed little-endian into uint64 words."""

    def __init__(self, words: np.ndarray, n_cols: int):
        self.words = np.ascontiguousarray(words, dtype=np.uint64)
        self.n_rows = self.words.shape[0]
        self.n_cols = int(n_cols)

    @classmethod
    def zeros(cls, n_rows: int, n_cols: int) -> "BitMatrix":
        n_words = max(1, -(-n_cols // WORD))
        return cls(np.zeros((n_rows, n_words), dtype=np.uint64), n_cols)

    @classmethod
    def from_sparse(cls, m: SparseBinaryMatrix) -> "BitMatrix":
        out = cls.zeros(m.n_rows, m.n_cols)
        r = np.repeat(np.arange(m.n_rows), m.row_weights())
        c = m.indices
        bits = np.left_shift(np.uint64(1), (c % WORD).astype(np.uint64))
        np.bitwise_or.at(out.words, (r, c // WORD), bits)
        return out

    @classmethod
    def from_dense(cls, dense) -> "BitMatrix":
        dense = np.asarray(dense, dtype=np.uint8) % 2
        return cls.from_sparse(SparseBinaryMatrix.from_dense(dense))

    def to_dense(self) -> np.ndarray:
        bytes_ = self.words.view(np.uint8).reshape(self.n_rows, -1)
        bits = np.unpackbits(bytes_, axis=1, bitorder="little")
        return bits[:, : self.n_cols]

    def copy(self) -> "BitMatrix":
        return BitMatrix(self.words.copy(), self.n_cols)


def _echelon(bits: BitMatrix, reduced: bool) -> tuple[np.ndarray, list[int]]:
    """In-place elimination; returns (pivot rows, pivot columns).

    Pivot choice is deterministic: columns left to right, first row with a 1.
    With ``reduced`` the pivot columns are cleared above as well (RREF).
    """
    W = bits.words
    n_rows = W.shape[0]
    pivots: list[int] = []
    rank = 0
    for col in range(bits.n_cols):
        if rank == n_rows:
            break
        w, b = divmod(col, WORD)
        mask = np.uint64(1) << np.uint64(b)
        below = np.flatnonzero(W[rank:, w] & mask)
        if below.size == 0:
            continue
        piv = rank + below[0]
        if piv != rank:
            W[[rank, piv]] = W[[piv, rank]]
        # the swapped-out row had a 0 here, so the remaining hits are unchanged
        hit = rank + below[1:]
        prow = W[rank, w:]
        if hit.size:
            W[hit, w:] ^= prow
        if reduced and rank:
            above = np.flatnonzero(W[:rank, w] & mask)
            if above.size:
                W[above, w:] ^= prow
        pivots.append(col)
        rank += 1
    return W[:rank], pivots


def rank_gf2(m) -> int:
    """Rank over F_2 of a SparseBinaryMatrix, BitMatrix or dense 0/1 array."""
    bits = _as_bits(m)
    _, pivots = _echelon(bits, reduced=False)
    return len(pivots)


def _as_bits(m) -> BitMatrix:
    if isinstance(m, BitMatrix):
        return m.copy()
    if isinstance(m, SparseBinaryMatrix):
        return BitMatrix.from_sparse(m)
    return BitMatrix.from_dense(m)


def code_dimension(m: SparseBinaryMatrix) -> int:
    return m.n_cols - rank_gf2(m)


def nullspace_basis(m) -> np.ndarray:
    """Basis of {x : M x = 0} as rows of a (k, n) uint8 array."""
    bits = _as_bits(m)
    n = bits.n_cols
    R, pivots = _echelon(bits, reduced=True)
    dense = BitMatrix(R, n).to_dense() if len(pivots) else np.zeros((0, n), dtype=np.uint8)
    free = np.setdiff1d(np.arange(n), pivots)
    basis = np.zeros((free.size, n), dtype=np.uint8)
    basis[np.arange(free.size), free] = 1
    if pivots:
        # x_pivot = sum over free f of R[row, f] x_f
        basis[:, pivots] = dense[:, free].T
    return basis


def conjectured_dimension(family: int, q: int) -> int:
    """Interpolated dimension polynomials for odd q (families 1 and 2)."""
    if q % 2 == 0:
        raise ValueError("the dimension conjecture concerns odd q only")
    if family == 1:
        val = Fraction(1, 2) * q**3 - q**2 + Fraction(3, 2) * q - 1
    elif family == 2:
        val = Fraction(1, 2) * q**3 - Fraction(5, 2) * q**2 + Fraction(9, 2) * q - Fraction(7, 2)
    else:
        raise ValueError("no polynomial dimension formula for family 3")
    assert val.denominator == 1
    return int(val)
