"""Affine points, lines, flags and the three conic families over F_q.

Every conic is stored as the level set ``D_{a,b}(x, y) = c`` of a family
specific function:

* family 1 (parabolas):   y = a x^2 + b x + c,           a != 0
* family 2 (hyperbolas):  x y = a x + b y + c,           c != -ab
* family 3 (ellipses):    Q(x, y) = a x + b y + c, with Q = x^2 - beta y^2
  (odd q) or x^2 + x y + beta y^2 (even q), and c off the singular value.

Parallel classes of lines are ints: ``0..q-1`` is the slope, ``q`` is vertical.
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import cached_property, lru_cache
from typing import NamedTuple

import numpy as np

from .ffield import GF


class GeometryError(ValueError):
    pass


class PointNotOnConic(GeometryError):
    pass


class ForbiddenLineDirection(GeometryError):
    pass


class Point(NamedTuple):
    x: int
    y: int


class Line(NamedTuple):
    """``y = slope*x + offset``, or ``x = offset`` when slope is None."""

    slope: int | None
    offset: int

    @property
    def is_vertical(self) -> bool:
        return self.slope is None

    def parallel_class(self, q: int) -> int:
        return q if self.slope is None else self.slope


class Flag(NamedTuple):
    point: Point
    line: Line


@dataclass(frozen=True, order=True)
class Conic:
    family: int
    a: int
    b: int
    c: int
    beta: int = dc_field(default=0, compare=False)

    @property
    def params(self) -> tuple[int, int, int]:
        return (self.a, self.b, self.c)


def vertical_class(q: int) -> int:
    return q


def line_through(F: GF, P: Point, cls: int) -> Line:
    """The line of parallel class ``cls`` through P."""
    if cls == F.q:
        return Line(None, P.x)
    return Line(cls, F.sub(P.y, F.mul(cls, P.x)))


def line_points(F: GF, L: Line) -> list[Point]:
    if L.slope is None:
        return [Point(L.offset, y) for y in F.elements]
    return [Point(x, F.add(F.mul(L.slope, x), L.offset)) for x in F.elements]


def on_line(F: GF, P: Point, L: Line) -> bool:
    if L.slope is None:
        return P.x == L.offset
    return P.y == F.add(F.mul(L.slope, P.x), L.offset)


def allowed_classes(family: int, q: int) -> list[int]:
    """Line directions kept as points of the incidence structure."""
    if family == 1:
        return list(range(q))  # everything but vertical
    if family == 2:
        return list(range(1, q))  # neither horizontal (0) nor vertical (q)
    if family == 3:
        return list(range(q + 1))
    raise ValueError(f"unknown family {family}")


class ConicFamily:
    """One of the three conic families over a fixed field.

    Holds the vectorised level-set machinery used to enumerate conics, list
    their points and compute tangents.
    """

    def __init__(self, F: GF, family: int):
        if family not in (1, 2, 3):
            raise ValueError(f"family must be 1, 2 or 3, got {family}")
        self.F = F
        self.family = family
        self.q = F.q
        self.beta = F.pick_beta() if family == 3 else 0
        self.classes = allowed_classes(family, F.q)

    def __repr__(self) -> str:
        return f"ConicFamily({self.F!r}, {self.family})"

    # --- polynomial form -------------------------------------------------

    def poly(self, conic: Conic) -> tuple[int, int, int, int, int, int]:
        """Coefficients (xx, xy, yy, x, y, 1) of f with C = {f = 0}."""
        F = self.F
        a, b, c = conic.a, conic.b, conic.c
        na, nb, nc = F.neg(a), F.neg(b), F.neg(c)
        if self.family == 1:
            return (na, 0, 0, nb, 1, nc)
        if self.family == 2:
            return (0, 1, 0, na, nb, nc)
        if F.p == 2:
            return (1, 1, self.beta, na, nb, nc)
        return (1, 0, F.neg(self.beta), na, nb, nc)

    def from_poly(self, coeffs) -> Conic | None:
        """Inverse of :meth:`poly` up to a nonzero scalar.

        Returns None when the polynomial is not (a multiple of) a valid member
        of this family.
        """
        F = self.F
        xx, xy, yy, lx, ly, l0 = coeffs
        if self.family == 1:
            if xy or yy or ly == 0:
                return None
            s = F.inv(F.neg(ly))  # normalise the y coefficient to -1 ... then negate
            # f = xx x^2 + lx x + ly y + l0 = 0  <=>  y = -(xx x^2 + lx x + l0)/ly
            a, b, c = (F.mul(v, s) for v in (xx, lx, l0))
        elif self.family == 2:
            if xx or yy or xy == 0:
                return None
            s = F.inv(F.neg(xy))
            a, b, c = (F.mul(v, s) for v in (lx, ly, l0))
        else:
            if xx == 0:
                return None
            s = F.inv(xx)
            ref = self.poly(Conic(3, 0, 0, 0, self.beta))
            if F.mul(xy, s) != ref[1] or F.mul(yy, s) != ref[2]:
                return None
            s = F.neg(s)
            a, b, c = (F.mul(v, s) for v in (lx, ly, l0))
        if not self.is_valid(a, b, c):
            return None
        return self.conic(a, b, c)

    def evaluate(self, conic: Conic, P: Point) -> int:
        F = self.F
        xx, xy, yy, lx, ly, l0 = self.poly(conic)
        x, y = P
        terms = (
            F.mul(xx, F.mul(x, x)),
            F.mul(xy, F.mul(x, y)),
            F.mul(yy, F.mul(y, y)),
            F.mul(lx, x),
            F.mul(ly, y),
            l0,
        )
        acc = 0
        for t in terms:
            acc = F.add(acc, t)
        return acc

    def gradient(self, conic: Conic, P: Point) -> tuple[int, int]:
        """Formal partial derivatives (f_x, f_y) at P; 2 = 0 in characteristic 2."""
        F = self.F
        xx, xy, yy, lx, ly, _ = self.poly(conic)
        two = F.two
        fx = F.add(F.add(F.mul(F.mul(two, xx), P.x), F.mul(xy, P.y)), lx)
        fy = F.add(F.add(F.mul(xy, P.x), F.mul(F.mul(two, yy), P.y)), ly)
        return fx, fy

    # --- validity and enumeration ----------------------------------------

    def singular_c(self, a: int, b: int) -> int | None:
        """The single excluded value of c for given (a, b), if any."""
        F = self.F
        if self.family == 1:
            return None
        if self.family == 2:
            return F.neg(F.mul(a, b))
        if F.p == 2:
            # gradient vanishes at (b, a); reduces to a^2 + b^2 + ab only when beta = 1
            return F.add(F.add(F.mul(self.beta, F.mul(a, a)), F.mul(b, b)), F.mul(a, b))
        four = F.from_int(4)
        # b^2/(4 beta) - a^2/4
        return F.sub(F.div(F.mul(b, b), F.mul(four, self.beta)), F.div(F.mul(a, a), four))

    def is_valid(self, a: int, b: int, c: int) -> bool:
        if self.family == 1:
            return a != 0
        return c != self.singular_c(a, b)

    def conic(self, a: int, b: int, c: int) -> Conic:
        return Conic(self.family, a, b, c, self.beta)

    @cached_property
    def conics(self) -> list[Conic]:
        q = self.q
        return [
            self.conic(a, b, c)
            for a in range(q)
            for b in range(q)
            for c in range(q)
            if self.is_valid(a, b, c)
        ]

    @cached_property
    def _conic_index(self) -> dict[tuple[int, int, int], int]:
        return {C.params: i for i, C in enumerate(self.conics)}

    def index_of(self, conic: Conic) -> int:
        return self._conic_index[conic.params]

    # --- vectorised point sets -------------------------------------------

    @cached_property
    def _grids(self):
        """Field-valued arrays over the q x q grid: X, Y and the x^2/quadratic parts."""
        F, q = self.F, self.q
        X, Y = np.meshgrid(np.arange(q), np.arange(q), indexing="ij")
        if self.family == 1:
            base, ua, ub = Y, F.SQ[X], X  # y = a x^2 + b x + c
        elif self.family == 2:
            base, ua, ub = F.MUL[X, Y], X, Y
        elif F.p == 2:
            base = F.ADD[F.ADD[F.SQ[X], F.MUL[X, Y]], F.MUL[self.beta, F.SQ[Y]]]
            ua, ub = X, Y
        else:
            base = F.ADD[F.SQ[X], F.NEG[F.MUL[self.beta, F.SQ[Y]]]]
            ua, ub = X, Y
        return X.ravel(), Y.ravel(), base.ravel(), ua.ravel(), ub.ravel()

    def level_function(self, a: int, b: int) -> np.ndarray:
        """D_{a,b} on the flattened grid (index x*q + y); conic (a,b,c) is D == c."""
        F = self.F
        _, _, base, ua, ub = self._grids
        lin = F.ADD[F.MUL[a, ua], F.MUL[b, ub]]
        return F.ADD[base, F.NEG[lin]]

    @cached_property
    def point_table(self) -> list[np.ndarray]:
        """Grid indices (x*q + y) of the points of each conic, in conic order."""
        q = self.q
        out: list[np.ndarray] = []
        for a in range(q):
            if self.family == 1 and a == 0:
                continue
            for b in range(q):
                D = self.level_function(a, b)
                order = np.argsort(D, kind="stable")
                bounds = np.searchsorted(D[order], np.arange(q + 1))
                bad = self.singular_c(a, b)
                for c in range(q):
                    if c == bad:
                        continue
                    out.append(order[bounds[c] : bounds[c + 1]])
        return out

    def points_on(self, conic: Conic) -> list[Point]:
        q = self.q
        idx = self.point_table[self.index_of(conic)]
        return [Point(int(i) // q, int(i) % q) for i in idx]

    def contains(self, conic: Conic, P: Point) -> bool:
        return self.evaluate(conic, P) == 0

    # --- tangents ---------------------------------------------------------

    def tangent_class(self, conic: Conic, P: Point) -> int:
        F = self.F
        fx, fy = self.gradient(conic, P)
        if fy == 0:
            if fx == 0:
                raise GeometryError(f"{conic} is singular at {P}")
            return self.q
        return F.neg(F.div(fx, fy))

    def tangent_at(self, conic: Conic, P: Point) -> Line:
        P = Point(*P)
        if not self.contains(conic, P):
            raise PointNotOnConic(f"{P} is not on {conic}")
        return line_through(self.F, P, self.tangent_class(conic, P))

    def flags_of(self, conic: Conic) -> list[Flag]:
        return [Flag(P, self.tangent_at(conic, P)) for P in self.points_on(conic)]

    @cached_property
    def tangent_table(self) -> list[np.ndarray]:
        """Parallel class of the tangent at each point of each conic (vectorised)."""
        F, q = self.F, self.q
        out = []
        two = F.two
        for conic, idx in zip(self.conics, self.point_table):
            x, y = idx // q, idx % q
            xx, xy, yy, lx, ly, _ = self.poly(conic)
            fx = F.ADD[F.ADD[F.MUL[F.MUL[two, xx], x], F.MUL[xy, y]], lx]
            fy = F.ADD[F.ADD[F.MUL[xy, x], F.MUL[F.MUL[two, yy], y]], ly]
            cls = np.where(fy == 0, q, F.NEG[F.MUL[fx, F.INV[fy]]])
            out.append(cls)
        return out

    # --- incidence with flags --------------------------------------------

    @cached_property
    def flag_index(self) -> dict[tuple[int, int, int], list[int]]:
        """(x, y, class) -> indices of the conics incident with that flag."""
        q = self.q
        table: dict[tuple[int, int, int], list[int]] = {}
        for k, (idx, cls) in enumerate(zip(self.point_table, self.tangent_table)):
            for i, t in zip(idx.tolist(), cls.tolist()):
                table.setdefault((i // q, i % q, t), []).append(k)
        return table

    def incident_conics(self, flag: Flag) -> list[Conic]:
        P, L = Point(*flag.point), Line(*flag.line)
        if not on_line(self.F, P, L):
            raise GeometryError(f"{P} is not on {L}")
        cls = L.parallel_class(self.q)
        if cls not in self.classes:
            raise ForbiddenLineDirection(f"class {cls} is not allowed for family {self.family}")
        return [self.conics[k] for k in self.flag_index.get((P.x, P.y, cls), [])]

    # --- affine maps -----------------------------------------------------

    def transform(self, conic: Conic, scale: int, shift: Point) -> Conic | None:
        """Image of a conic under X = scale * x + shift (scale != 0).

        Works on the polynomial: the image is {f((X - shift)/scale) = 0}.
        Returns None if the image falls outside the family.
        """
        F = self.F
        if scale == 0:
            raise ValueError("scale must be nonzero")
        s = F.inv(scale)
        tx, ty = F.neg(F.mul(s, shift[0])), F.neg(F.mul(s, shift[1]))
        # substitute x -> s X + tx, y -> s Y + ty
        xx, xy, yy, lx, ly, l0 = self.poly(conic)
        M, A = F.mul, F.add
        two = F.two
        s2 = M(s, s)
        nxx = M(xx, s2)
        nxy = M(xy, s2)
        nyy = M(yy, s2)
        nlx = A(A(M(M(two, xx), M(s, tx)), M(xy, M(s, ty))), M(lx, s))
        nly = A(A(M(M(two, yy), M(s, ty)), M(xy, M(s, tx))), M(ly, s))
        n0 = l0
        for t in (M(xx, M(tx, tx)), M(xy, M(tx, ty)), M(yy, M(ty, ty)), M(lx, tx), M(ly, ty)):
            n0 = A(n0, t)
        return self.from_poly((nxx, nxy, nyy, nlx, nly, n0))

    def translate(self, conic: Conic, u: Point) -> Conic | None:
        return self.transform(conic, 1, u)

    def homothety(self, conic: Conic, center: Point, ratio: int) -> Conic | None:
        F = self.F
        # X = center + r (x - center) = r x + (1 - r) center
        one_minus = F.sub(1, ratio)
        shift = Point(F.mul(one_minus, center[0]), F.mul(one_minus, center[1]))
        return self.transform(conic, ratio, shift)


@lru_cache(maxsize=None)
def conic_family(F: GF, family: int) -> ConicFamily:
    """Shared (cached) ConicFamily instance."""
    return ConicFamily(F, family)


def enumerate_conics(family: int, F: GF) -> list[Conic]:
    return list(conic_family(F, family).conics)


def points_on(F: GF, conic: Conic) -> list[Point]:
    return conic_family(F, conic.family).points_on(conic)


def tangent_at(F: GF, conic: Conic, P: Point) -> Line:
    return conic_family(F, conic.family).tangent_at(conic, P)


def flags_of(F: GF, conic: Conic) -> list[Flag]:
    return conic_family(F, conic.family).flags_of(conic)


def incident_conics(family: int, F: GF, flag: Flag) -> list[Conic]:
    return conic_family(F, family).incident_conics(flag)
