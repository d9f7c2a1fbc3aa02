"""Incidence structures I_1(q), I_2(q), I_3(q) of flags versus blown-up conics.

Points are the allowed flags (P, L); blocks are the conics (through their
flag sets) followed by one exceptional block per affine point.  The blow-up
itself never appears: a conic's strict transform is just its set of flags.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import NamedTuple

import numpy as np

from .ffield import GF
from .geometry import (
    Conic,
    ConicFamily,
    Flag,
    GeometryError,
    Line,
    Point,
    conic_family,
    line_through,
)
from .gf2 import SparseBinaryMatrix


class PointOnConic(GeometryError):
    pass


class Block(NamedTuple):
    kind: str  # "conic" or "exceptional"
    conic: Conic | None
    base: Point | None
    members: tuple[int, ...]


@dataclass(eq=False)
class IncidenceStructure:
    family: int
    field: GF
    conic_family: ConicFamily
    # (n_points, 3) array of (x, y, class) sorted lexicographically
    flags: np.ndarray
    # (n_blocks, block_size) array of sorted point indices
    members: np.ndarray
    _flag_lookup: np.ndarray = field(repr=False)

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def n_points(self) -> int:
        return int(self.flags.shape[0])

    @property
    def n_blocks(self) -> int:
        return int(self.members.shape[0])

    @property
    def n_conic_blocks(self) -> int:
        return len(self.conic_family.conics)

    @property
    def conics(self) -> list[Conic]:
        return self.conic_family.conics

    def flag(self, i: int) -> Flag:
        x, y, cls = (int(v) for v in self.flags[i])
        P = Point(x, y)
        return Flag(P, line_through(self.field, P, cls))

    def point_index(self, flag: Flag) -> int:
        """Index of a flag, or -1 if its direction is not allowed."""
        P, L = Point(*flag.point), Line(*flag.line)
        return int(self._flag_lookup[P.x, P.y, L.parallel_class(self.q)])

    def index_of_class(self, x: int, y: int, cls: int) -> int:
        return int(self._flag_lookup[x, y, cls])

    def exceptional_index(self, P: Point) -> int:
        return self.n_conic_blocks + P[0] * self.q + P[1]

    def block(self, j: int) -> Block:
        members = tuple(int(v) for v in self.members[j])
        if j < self.n_conic_blocks:
            return Block("conic", self.conics[j], None, members)
        k = j - self.n_conic_blocks
        return Block("exceptional", None, Point(k // self.q, k % self.q), members)

    @property
    def blocks(self) -> list[Block]:
        return [self.block(j) for j in range(self.n_blocks)]

    @cached_property
    def point_blocks(self) -> np.ndarray:
        """(n_points, q) array: the blocks through each point, ascending."""
        order = np.argsort(self.members.ravel(), kind="stable")
        block_of = np.repeat(np.arange(self.n_blocks), self.members.shape[1])[order]
        counts = np.bincount(self.members.ravel(), minlength=self.n_points)
        if np.any(counts != counts[0]):
            raise AssertionError("structure is not point-regular")
        return block_of.reshape(self.n_points, int(counts[0]))

    @cached_property
    def conic_flag_sets(self) -> list[frozenset[int]]:
        return [frozenset(int(v) for v in row) for row in self.members[: self.n_conic_blocks]]

    def incidence_matrix(self) -> SparseBinaryMatrix:
        """Parity-check orientation: one row per block, one column per flag."""
        m, k = self.members.shape
        indptr = np.arange(m + 1, dtype=np.int64) * k
        return SparseBinaryMatrix(m, self.n_points, indptr, self.members.ravel())

    # --- kappa ------------------------------------------------------------

    def kappa(self, flag: Flag, conic: Conic) -> int:
        """Number of conics through ``flag`` sharing an allowed flag with ``conic``.

        ``conic`` must avoid the point of ``flag``.
        """
        fam = self.conic_family
        P = Point(*flag.point)
        if fam.contains(conic, P):
            raise PointOnConic(f"{conic} passes through {P}")
        target = self.conic_flag_sets[fam.index_of(conic)]
        through = fam.incident_conics(flag)
        return sum(1 for C in through if self.conic_flag_sets[fam.index_of(C)] & target)


def build_structure(family: int, F: GF) -> IncidenceStructure:
    fam = conic_family(F, family)
    q = F.q
    classes = fam.classes
    k = len(classes)
    # points: (x, y, cls) sorted by x, then y, then class
    xs, ys, cs = np.meshgrid(np.arange(q), np.arange(q), np.array(classes), indexing="ij")
    flags = np.stack([xs.ravel(), ys.ravel(), cs.ravel()], axis=1)
    lookup = -np.ones((q, q, q + 1), dtype=np.int64)
    lookup[flags[:, 0], flags[:, 1], flags[:, 2]] = np.arange(flags.shape[0])

    rows = []
    for idx, cls in zip(fam.point_table, fam.tangent_table):
        pts = lookup[idx // q, idx % q, cls]
        if np.any(pts < 0):
            raise AssertionError(f"a tangent of family {family} has a forbidden direction")
        rows.append(np.sort(pts))
    conic_rows = np.array(rows, dtype=np.int64)
    # exceptional block of P = all allowed flags at P, already contiguous
    exc_rows = np.arange(q * q * k, dtype=np.int64).reshape(q * q, k)
    if conic_rows.shape[1] != k:
        raise AssertionError("conic blocks and exceptional blocks differ in size")
    members = np.concatenate([conic_rows, exc_rows])
    members.flags.writeable = False
    return IncidenceStructure(family, F, fam, flags, members, lookup)


@lru_cache(maxsize=32)
def cached_structure(family: int, q: int) -> IncidenceStructure:
    return build_structure(family, GF(q))


def incidence_matrix(s: IncidenceStructure) -> SparseBinaryMatrix:
    return s.incidence_matrix()


def kappa(s: IncidenceStructure, flag: Flag, conic: Conic) -> int:
    return s.kappa(flag, conic)


def kappa_samples(s: IncidenceStructure, n_conics: int = 200, seed: int = 0) -> dict[int, int]:
    """Histogram {kappa value: count} over every flag and sampled avoiding conics."""
    rng = random.Random(seed)
    fam = s.conic_family
    hist: dict[int, int] = {}
    conics = fam.conics
    for i in range(s.n_points):
        flag = s.flag(i)
        P = flag.point
        avoiding = [C for C in rng.sample(conics, min(len(conics), 2 * n_conics)) if not fam.contains(C, P)]
        for C in avoiding[:n_conics]:
            v = s.kappa(flag, C)
            hist[v] = hist.get(v, 0) + 1
    return hist
