"""Table-driven arithmetic in F_q for prime powers 4 <= q <= 32.

Elements are plain ints in ``range(q)``: the index of a polynomial over F_p
written in base p (coefficient of x**i is the i-th base-p digit).  Index 0 is
zero and index 1 is one.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import product

import numpy as np

MIN_Q = 4
MAX_Q = 32

# Lexicographically smallest irreducible monic modulus per (p, m), listed as
# coefficients c_0..c_{m-1} of the non-leading terms (x^m is implicit).
# Order: smallest integer sum(c_i * p**i).
MODULI = {
    (2, 2): (1, 1),  # x^2 + x + 1
    (2, 3): (1, 1, 0),  # x^3 + x + 1
    (2, 4): (1, 1, 0, 0),  # x^4 + x + 1
    (2, 5): (1, 0, 1, 0, 0),  # x^5 + x^2 + 1
    (3, 2): (1, 0),  # x^2 + 1
    (3, 3): (1, 2, 0),  # x^3 + 2x + 1
    (5, 2): (2, 0),  # x^2 + 2
}


class FieldError(ValueError):
    pass


class NotPrimePower(FieldError):
    pass


class OutOfSupportedRange(FieldError):
    pass


class EvenCharacteristic(FieldError):
    """Raised by operations that only make sense in odd characteristic."""


class OddCharacteristic(FieldError):
    """Raised by operations that only make sense in characteristic 2."""


def _is_prime(n: int) -> bool:
    return n >= 2 and all(n % d for d in range(2, int(n**0.5) + 1))


def factor_prime_power(q: int) -> tuple[int, int]:
    """Return ``(p, m)`` with ``q == p**m``, or raise NotPrimePower."""
    for p in range(2, q + 1):
        if q % p == 0:
            if not _is_prime(p):
                break
            m, r = 0, q
            while r % p == 0:
                r //= p
                m += 1
            if r == 1:
                return p, m
            break
    raise NotPrimePower(f"{q} is not a prime power")


def _poly_mod_has_root_or_factor(coeffs: tuple[int, ...], p: int) -> bool:
    """True when the monic polynomial x^m + sum c_i x^i is reducible over F_p.

    Exhaustive: tries every monic divisor of degree 1..m//2.
    """
    m = len(coeffs)
    target = list(coeffs) + [1]
    for d in range(1, m // 2 + 1):
        for low in product(range(p), repeat=d):
            divisor = list(low) + [1]
            rem = target[:]
            for shift in range(m - d, -1, -1):
                lead = rem[shift + d]
                if lead:
                    for i, dc in enumerate(divisor):
                        rem[shift + i] = (rem[shift + i] - lead * dc) % p
            if not any(rem[:d]):
                return True
    return False


class GF:
    """The finite field F_q with precomputed addition and multiplication tables.

    Instances are immutable and cached per q, so ``GF(9) is GF(9)``.
    """

    def __new__(cls, q: int) -> "GF":
        return _gf_instance(int(q))

    @classmethod
    def _build(cls, q: int) -> "GF":
        if not MIN_Q <= q <= MAX_Q:
            # still report non prime powers first when that is the real problem
            factor_prime_power(q) if q >= 2 else None
            raise OutOfSupportedRange(f"q={q} outside [{MIN_Q}, {MAX_Q}]")
        p, m = factor_prime_power(q)
        self = object.__new__(cls)
        self.q, self.p, self.m = q, p, m
        self.modulus = MODULI.get((p, m), (0,))
        if m > 1 and _poly_mod_has_root_or_factor(self.modulus, p):
            raise FieldError(f"modulus {self.modulus} is reducible over F_{p}")
        self._make_tables()
        return self

    def _digits(self, x: int) -> list[int]:
        out = []
        for _ in range(self.m):
            out.append(x % self.p)
            x //= self.p
        return out

    def _index(self, digits) -> int:
        return sum(int(d) * self.p**i for i, d in enumerate(digits))

    def _poly_mul(self, x: int, y: int) -> int:
        p, m = self.p, self.m
        a, b = self._digits(x), self._digits(y)
        prod = [0] * (2 * m - 1)
        for i, ai in enumerate(a):
            for j, bj in enumerate(b):
                prod[i + j] = (prod[i + j] + ai * bj) % p
        # x^m == -sum c_i x^i
        for k in range(2 * m - 2, m - 1, -1):
            lead = prod[k]
            if lead:
                prod[k] = 0
                for i, c in enumerate(self.modulus):
                    prod[k - m + i] = (prod[k - m + i] - lead * c) % p
        return self._index(prod[:m])

    def _make_tables(self) -> None:
        q, p = self.q, self.p
        digits = np.array([self._digits(x) for x in range(q)], dtype=np.int64)
        powers = p ** np.arange(self.m)
        add = ((digits[:, None, :] + digits[None, :, :]) % p) @ powers
        mul = np.array([[self._poly_mul(x, y) for y in range(q)] for x in range(q)])
        neg = ((-digits) % p) @ powers
        inv = np.zeros(q, dtype=np.int64)
        for x in range(1, q):
            inv[x] = int(np.flatnonzero(mul[x] == 1)[0])
        sq = mul[np.arange(q), np.arange(q)]
        for name, arr in (("ADD", add), ("MUL", mul), ("NEG", neg), ("INV", inv), ("SQ", sq)):
            arr = np.ascontiguousarray(arr, dtype=np.int64)
            arr.flags.writeable = False
            setattr(self, name, arr)
        self._add = [list(map(int, row)) for row in add]
        self._mul = [list(map(int, row)) for row in mul]
        self._neg = list(map(int, neg))
        self._inv = list(map(int, inv))

    # scalar API ---------------------------------------------------------

    @property
    def elements(self) -> range:
        return range(self.q)

    @property
    def two(self) -> int:
        return self._add[1][1]

    def add(self, x: int, y: int) -> int:
        return self._add[x][y]

    def sub(self, x: int, y: int) -> int:
        return self._add[x][self._neg[y]]

    def mul(self, x: int, y: int) -> int:
        return self._mul[x][y]

    def neg(self, x: int) -> int:
        return self._neg[x]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("0 has no inverse")
        return self._inv[x]

    def div(self, x: int, y: int) -> int:
        return self._mul[x][self.inv(y)]

    def pow(self, x: int, e: int) -> int:
        if e < 0:
            return self.pow(self.inv(x), -e)
        out = 1
        base = x
        while e:
            if e & 1:
                out = self._mul[out][base]
            base = self._mul[base][base]
            e >>= 1
        return out

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_p -> F_q."""
        return n % self.p

    def is_square(self, x: int) -> bool:
        if self.p == 2:
            raise EvenCharacteristic("every element is a square in characteristic 2")
        return x == 0 or self.pow(x, (self.q - 1) // 2) == 1

    def sqrt(self, x: int) -> int:
        """Unique square root in characteristic 2 (x ** (q/2))."""
        if self.p != 2:
            raise OddCharacteristic("sqrt is only defined here for even q")
        return self.pow(x, self.q // 2)

    def absolute_trace(self, x: int) -> int:
        """Trace from F_q down to F_2, returned as 0 or 1."""
        if self.p != 2:
            raise OddCharacteristic("absolute trace to F_2 needs even q")
        acc, y = 0, x
        for _ in range(self.m):
            acc = self._add[acc][y]
            y = self._mul[y][y]
        return acc

    def pick_beta(self) -> int:
        """Deterministic choice of beta for the elliptic conic family.

        Odd q: smallest nonzero non-square.  Even q: smallest nonzero element
        of absolute trace 1, so that T^2 + T + beta is irreducible.
        """
        for x in range(1, self.q):
            if self.p == 2:
                if self.absolute_trace(x) == 1:
                    return x
            elif not self.is_square(x):
                return x
        raise AssertionError("unreachable for q >= 4")

    def __repr__(self) -> str:
        return f"GF({self.q})"

    def __reduce__(self):
        return (GF, (self.q,))


@lru_cache(maxsize=None)
def _gf_instance(q: int) -> GF:
    return GF._build(q)


def field_new(q: int) -> GF:
    return GF(q)


def supported_qs() -> list[int]:
    out = []
    for q in range(MIN_Q, MAX_Q + 1):
        try:
            factor_prime_power(q)
        except NotPrimePower:
            continue
        out.append(q)
    return out
