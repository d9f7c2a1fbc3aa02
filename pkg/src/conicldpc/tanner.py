"""Short cycles of the bipartite (Tanner) graph of an incidence structure.

Vertices are split into *points* (code bits, matrix columns) and *blocks*
(checks, matrix rows).  Cycles are counted as subgraphs: a 6-cycle is an
unordered set of three points and three blocks joined in a ring.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import combinations

import numpy as np
import scipy.sparse as sp

from .ffield import GF
from .geometry import conic_family
from .gf2 import SparseBinaryMatrix


@dataclass(frozen=True)
class BipartiteGraph:
    point_adj: tuple[np.ndarray, ...]  # point -> blocks
    block_adj: tuple[np.ndarray, ...]  # block -> points

    @classmethod
    def from_matrix(cls, H: SparseBinaryMatrix) -> "BipartiteGraph":
        block_adj = tuple(H.row(r).copy() for r in range(H.n_rows))
        csc = H.to_scipy().tocsc()
        point_adj = tuple(
            np.sort(csc.indices[csc.indptr[c] : csc.indptr[c + 1]]).astype(np.int64)
            for c in range(H.n_cols)
        )
        return cls(point_adj, block_adj)

    @classmethod
    def from_structure(cls, s) -> "BipartiteGraph":
        return cls.from_matrix(s.incidence_matrix())

    @property
    def n_points(self) -> int:
        return len(self.point_adj)

    @property
    def n_blocks(self) -> int:
        return len(self.block_adj)

    @property
    def point_degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.point_adj], dtype=np.int64)

    @property
    def block_degrees(self) -> np.ndarray:
        return np.array([len(a) for a in self.block_adj], dtype=np.int64)

    @property
    def n_edges(self) -> int:
        return int(self.block_degrees.sum())

    def matrix(self) -> sp.csr_matrix:
        """Block x point 0/1 matrix."""
        rows = np.repeat(np.arange(self.n_blocks), self.block_degrees)
        cols = np.concatenate(self.block_adj) if self.n_blocks else np.zeros(0, dtype=np.int64)
        data = np.ones(cols.size, dtype=np.int64)
        return sp.csr_matrix((data, (rows, cols)), shape=(self.n_blocks, self.n_points))


def _as_graph(g) -> BipartiteGraph:
    if isinstance(g, BipartiteGraph):
        return g
    if isinstance(g, SparseBinaryMatrix):
        return BipartiteGraph.from_matrix(g)
    return BipartiteGraph.from_structure(g)


def _point_gram(g: BipartiteGraph) -> sp.csr_matrix:
    """Off-diagonal part of H^T H: common-block counts between points."""
    H = g.matrix()
    A = (H.T @ H).tocsr()
    A.setdiag(0)
    A.eliminate_zeros()
    return A


# --- 6-cycles ------------------------------------------------------------


def _trace_cube(A: sp.csr_matrix, chunk: int = 512) -> int:
    """trace(A^3) for a symmetric sparse matrix, in row chunks."""
    total = 0
    for start in range(0, A.shape[0], chunk):
        rows = A[start : start + chunk]
        total += int((rows @ A).multiply(rows).sum())
    return total


def count_6_cycles(g) -> int:
    """Exact number of 6-cycles.

    Counts ordered triples of distinct points (u, v, w) together with three
    distinct blocks joining them cyclically, then divides by 6.  With
    ``c`` the common-block counts and ``t`` the blocks through all three
    points, the number of distinct block choices is
    ``c_uv c_vw c_wu - t (c_uv + c_vw + c_wu) + 2 t``; summing the first term
    gives trace(A^3) and the others collapse onto per-block sums.
    """
    g = _as_graph(g)
    A = _point_gram(g)
    tr = _trace_cube(A)
    H = g.matrix()
    k = g.block_degrees
    # per block: sum of c_uv over unordered point pairs inside it
    pair_sums = np.asarray((H @ A).multiply(H).sum(axis=1)).ravel() // 2
    correction = int(np.sum((k - 2) * pair_sums))
    triples = int(np.sum(k * (k - 1) * (k - 2) // 6))
    total = tr - 6 * correction + 12 * triples
    assert total % 6 == 0, "6-cycle count is not an integer"
    return total // 6


# --- 8-cycles ------------------------------------------------------------


def count_8_cycles(g) -> int:
    """Exact number of 8-cycles by joining pairs of length-4 paths.

    Every 8-cycle has four points; picking two opposite ones u < v splits it
    into two internally disjoint paths u-b-w-b'-v.  Each cycle has two such
    opposite pairs, hence the final halving.
    """
    g = _as_graph(g)
    pa = [a.tolist() for a in g.point_adj]
    ba = [a.tolist() for a in g.block_adj]
    total = 0
    for u in range(g.n_points):
        by_end: dict[int, list[tuple[int, int, int]]] = {}
        for b1 in pa[u]:
            for w in ba[b1]:
                if w == u:
                    continue
                for b2 in pa[w]:
                    if b2 == b1:
                        continue
                    for v in ba[b2]:
                        if v > u and v != w:
                            by_end.setdefault(v, []).append((b1, w, b2))
        for paths in by_end.values():
            if len(paths) < 2:
                continue
            for (b1, w1, b2), (b3, w2, b4) in combinations(paths, 2):
                if w1 != w2 and b1 != b3 and b1 != b4 and b2 != b3 and b2 != b4:
                    total += 1
    assert total % 2 == 0
    return total // 2


def count_cycles_bruteforce(g, length: int) -> int:
    """Reference DFS enumeration of simple cycles of the given length.

    Exponential; meant for graphs with a few dozen vertices.  Each cycle is
    rooted at its smallest vertex and found once per direction.
    """
    g = _as_graph(g)
    n_p = g.n_points
    adj: list[list[int]] = [[n_p + int(b) for b in a] for a in g.point_adj]
    adj += [[int(p) for p in a] for a in g.block_adj]
    count = 0

    def dfs(start: int, v: int, depth: int, seen: set[int]) -> None:
        nonlocal count
        for w in adj[v]:
            if w == start and depth == length:
                count += 1
            elif w > start and w not in seen and depth < length:
                seen.add(w)
                dfs(start, w, depth + 1, seen)
                seen.remove(w)

    for s in range(len(adj)):
        dfs(s, s, 1, {s})
    return count // 2


# --- girth ---------------------------------------------------------------


def _shortest_cycle_through(adj: list[list[int]], root: int, cap: int) -> int | None:
    """Length of the shortest cycle seen from a BFS rooted at ``root``.

    Upper bound for the girth in general, exact for the cycles through the
    root.  Stops once no cycle shorter than ``cap`` can still be found.
    """
    dist = {root: 0}
    parent = {root: -1}
    queue = deque([root])
    best = None
    while queue:
        v = queue.popleft()
        # anything found from here on has length >= 2 * dist[v]
        if 2 * dist[v] >= min(best or cap, cap):
            break
        for w in adj[v]:
            if w == parent[v]:
                continue
            if w in dist:
                length = dist[v] + dist[w] + 1
                if best is None or length < best:
                    best = length
            else:
                dist[w] = dist[v] + 1
                parent[w] = v
                queue.append(w)
    return best


def girth(g) -> int | None:
    """Length of the shortest cycle, or None for a forest.

    Lower bounds come from the point Gram matrix (4) and the exact 6-cycle
    count (6); BFS from point vertices then supplies a matching cycle.
    """
    g = _as_graph(g)
    A = _point_gram(g)
    if A.nnz and A.max() >= 2:
        return 4
    lower = 6 if count_6_cycles(g) > 0 else 8
    n_p = g.n_points
    adj: list[list[int]] = [[n_p + int(b) for b in a] for a in g.point_adj]
    adj += [[int(p) for p in a] for a in g.block_adj]
    best = None
    for root in range(n_p):
        found = _shortest_cycle_through(adj, root, cap=best or 10**9)
        if found is not None and (best is None or found < best):
            best = found
        if best == lower:
            break
    return best


# --- (C3) configurations -------------------------------------------------


def tangent_pairs(family: int, F: GF) -> dict[tuple[int, int], int]:
    """Pairs of conics meeting in exactly one point with a common tangent there.

    Maps (i, j), i < j (conic indices), to the grid index x*q + y of the
    contact point.
    """
    fam = conic_family(F, family)
    q = F.q
    point_sets = [frozenset(idx.tolist()) for idx in fam.point_table]
    out: dict[tuple[int, int], int] = {}
    for (x, y, _), ids in fam.flag_index.items():
        for i, j in combinations(ids, 2):
            if len(point_sets[i] & point_sets[j]) == 1:
                out[(i, j)] = x * q + y
    return out


def find_c3_configurations(family: int, F: GF, limit: int | None = None) -> list[tuple]:
    """Unordered triples of conics pairwise tangent at three distinct points.

    Each pair must meet in exactly one point; the three contact points are
    distinct and so no point lies on all three.  Triples come out sorted by
    conic index; ``limit=None`` returns all of them.
    """
    fam = conic_family(F, family)
    pairs = tangent_pairs(family, F)
    nbrs: dict[int, dict[int, int]] = {}
    for (i, j), pt in pairs.items():
        nbrs.setdefault(i, {})[j] = pt
        nbrs.setdefault(j, {})[i] = pt
    points_of = [frozenset(idx.tolist()) for idx in fam.point_table]
    out = []
    for (i, j), pij in sorted(pairs.items()):
        common = set(nbrs[i]) & set(nbrs[j])
        for k in sorted(common):
            if k <= j:
                continue
            pik, pjk = nbrs[i][k], nbrs[j][k]
            if len({pij, pik, pjk}) < 3:
                continue
            if points_of[i] & points_of[j] & points_of[k]:
                continue
            out.append((fam.conics[i], fam.conics[j], fam.conics[k]))
            if limit is not None and len(out) >= limit:
                return out
    return out
