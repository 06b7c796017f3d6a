"""
Arithmetic in GF(p^e) with elements encoded as integers in [0, p^e).

The base-p digits of an element are the coefficients of its polynomial
representative, low degree first, so the prime field F_p is the subset
[0, p). Multiplication goes through exp/log tables of a primitive element.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import product
from typing import List, Optional, Sequence

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_irreducible_p, gf_mul, gf_rem


def first_irreducible(p: int, e: int) -> List[int]:
    """First monic irreducible of degree e over F_p in lexicographic order (high degree first)."""
    if e == 1:
        return [1, 0]
    for tail in product(range(p), repeat=e):
        if tail[-1] == 0:
            continue
        candidate = [1] + list(tail)
        if gf_irreducible_p(candidate, p, ZZ):
            return candidate
    raise ValueError(f"no irreducible polynomial of degree {e} over F_{p}")


class FiniteField:
    """GF(p^e) with a deterministic modulus."""

    def __init__(self, p: int, e: int = 1):
        self.p = p
        self.e = e
        self.q = p ** e
        self.modulus = first_irreducible(p, e)
        self._exp: List[int] = []
        self._log: List[int] = []
        if e > 1:
            self._init_tables()

    # ------------------------------------------------------------------
    # Encoding
    # ------------------------------------------------------------------
    def to_poly(self, x: int) -> List[int]:
        digits = []
        for _ in range(self.e):
            x, digit = divmod(x, self.p)
            digits.append(digit)
        while digits and digits[-1] == 0:
            digits.pop()
        return digits[::-1]

    def from_poly(self, poly: Sequence[int]) -> int:
        value = 0
        for coeff in poly:
            value = value * self.p + coeff % self.p
        return value

    def _poly_mul(self, x: int, y: int) -> int:
        product_ = gf_mul(self.to_poly(x), self.to_poly(y), self.p, ZZ)
        return self.from_poly(gf_rem(product_, self.modulus, self.p, ZZ))

    def _init_tables(self):
        order = self.q - 1
        for candidate in range(2, self.q):
            powers = [1]
            value = candidate
            while value != 1:
                powers.append(value)
                value = self._poly_mul(value, candidate)
            if len(powers) == order:
                self._exp = powers + powers
                self._log = [0] * self.q
                for k, value in enumerate(powers):
                    self._log[value] = k
                return
        raise ValueError(f"no primitive element found in GF({self.q})")

    # ------------------------------------------------------------------
    # Arithmetic
    # ------------------------------------------------------------------
    def add(self, x: int, y: int) -> int:
        if self.e == 1:
            return (x + y) % self.p
        out, scale, p = 0, 1, self.p
        while x or y:
            out += ((x % p + y % p) % p) * scale
            x //= p
            y //= p
            scale *= p
        return out

    def neg(self, x: int) -> int:
        if self.e == 1:
            return (-x) % self.p
        out, scale, p = 0, 1, self.p
        while x:
            out += ((-(x % p)) % p) * scale
            x //= p
            scale *= p
        return out

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if self.e == 1:
            return (x * y) % self.p
        if x == 0 or y == 0:
            return 0
        return self._exp[self._log[x] + self._log[y]]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of 0 in a finite field")
        if self.e == 1:
            return pow(x, -1, self.p)
        return self._exp[(self.q - 1 - self._log[x]) % (self.q - 1)]

    def power(self, x: int, k: int) -> int:
        if k == 0:
            return 1
        if x == 0:
            return 0
        if self.e == 1:
            return pow(x, k, self.p)
        return self._exp[(self._log[x] * k) % (self.q - 1)]

    def scalar(self, c: int) -> int:
        """Image of an integer in the prime field."""
        return c % self.p

    def elements(self) -> range:
        return range(self.q)

    # ------------------------------------------------------------------
    # Subfields
    # ------------------------------------------------------------------
    def field_of_definition(self, coords: Sequence[int]) -> int:
        """Degree over F_p of the smallest subfield containing every coordinate."""
        for d in range(1, self.e):
            if self.e % d == 0 and all(self.power(x, self.p ** d) == x for x in coords):
                return d
        return self.e

    # ------------------------------------------------------------------
    # Linear algebra
    # ------------------------------------------------------------------
    def rank(self, matrix: Sequence[Sequence[int]]) -> int:
        """Rank of a matrix by Gaussian elimination."""
        rows = [list(row) for row in matrix]
        if not rows:
            return 0
        rank, cols = 0, len(rows[0])
        for col in range(cols):
            pivot: Optional[int] = next((i for i in range(rank, len(rows)) if rows[i][col]), None)
            if pivot is None:
                continue
            rows[rank], rows[pivot] = rows[pivot], rows[rank]
            inverse = self.inv(rows[rank][col])
            rows[rank] = [self.mul(inverse, v) for v in rows[rank]]
            for i in range(len(rows)):
                if i != rank and rows[i][col]:
                    factor = rows[i][col]
                    rows[i] = [self.sub(a, self.mul(factor, b)) for a, b in zip(rows[i], rows[rank])]
            rank += 1
            if rank == len(rows):
                break
        return rank

    def describe(self) -> str:
        return f"GF({self.p}^{self.e})" if self.e > 1 else f"GF({self.p})"


@lru_cache(maxsize=None)
def field(p: int, e: int = 1) -> FiniteField:
    """Shared instance per (p, e)."""
    return FiniteField(p, e)


def projective_points(k: FiniteField, dim: int):
    """Points of P^dim(k) normalized so the first nonzero coordinate is 1."""
    for lead in range(dim + 1):
        for tail in product(k.elements(), repeat=dim - lead):
            yield (0,) * lead + (1,) + tail
