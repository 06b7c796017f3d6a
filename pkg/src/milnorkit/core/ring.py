"""
Truncated models of a complete discrete valuation ring with residue field F_p.

EqChar models k[[pi]]/(pi^N) with k = F_p; MixedChar models Z/p^N where the
uniformizer is p itself.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple, Union

from sympy import isprime

from milnorkit.core.constants import EQCHAR, MIXEDCHAR, MODELS
from milnorkit.core.exceptions import DomainError, ShapeError


def p_valuation(value: int, p: int) -> int:
    """p-adic valuation of a nonzero integer."""
    count = 0
    while value % p == 0:
        value //= p
        count += 1
    return count


@dataclass(frozen=True)
class BaseRing:
    """A truncated complete DVR with uniformizer nilpotent of order N."""
    model: str
    p: int
    pi_precision: int

    def __post_init__(self):
        if self.model not in MODELS:
            raise DomainError(f"Unknown base ring model '{self.model}', expected one of {MODELS}")
        if not isprime(self.p):
            raise DomainError(f"Residue characteristic must be prime, got {self.p}")
        if self.pi_precision < 1:
            raise DomainError(f"Uniformizer precision must be >= 1, got {self.pi_precision}")

    @property
    def is_eqchar(self) -> bool:
        return self.model == EQCHAR

    @property
    def coeff_modulus(self) -> int:
        """Modulus of the integer coefficients stored in series terms."""
        return self.p if self.is_eqchar else self.p ** self.pi_precision

    @property
    def pi_cap(self) -> int:
        """Bound on stored uniformizer exponents (MixedChar folds them into coefficients)."""
        return self.pi_precision if self.is_eqchar else 1

    def coeff_valuation(self, coeff: int) -> int:
        """Valuation carried by a stored coefficient: 0 over EqChar, p-adic over MixedChar."""
        if self.is_eqchar:
            return 0
        if coeff % self.coeff_modulus == 0:
            return self.pi_precision
        return p_valuation(coeff, self.p)

    def with_precision(self, pi_precision: int) -> "BaseRing":
        return BaseRing(self.model, self.p, pi_precision)

    # ------------------------------------------------------------------
    # Elements
    # ------------------------------------------------------------------
    def element(self, value: int, pi_exp: int = 0) -> "RingElement":
        """The element value * pi^pi_exp."""
        if self.is_eqchar:
            return RingElement.from_pairs(self, [(pi_exp, value)])
        return RingElement(self, (value * self.p ** pi_exp) % self.coeff_modulus)

    def zero(self) -> "RingElement":
        return self.element(0)

    def one(self) -> "RingElement":
        return self.element(1)

    def uniformizer(self) -> "RingElement":
        return self.element(1, 1)

    def describe(self) -> str:
        if self.is_eqchar:
            return f"F_{self.p}[[pi]]/(pi^{self.pi_precision})"
        return f"Z/{self.p}^{self.pi_precision}"

    def to_dict(self) -> dict:
        return {"model": self.model, "p": self.p, "precision": self.pi_precision}


Raw = Union[Tuple[Tuple[int, int], ...], int]


@dataclass(frozen=True)
class RingElement:
    """
    Element of a BaseRing in canonical form.

    EqChar raw form is a sorted tuple of (pi exponent, coefficient in [1, p))
    pairs with exponents < N; MixedChar raw form is a residue in [0, p^N).
    """
    ring: BaseRing
    raw: Raw

    @classmethod
    def from_pairs(cls, ring: BaseRing, pairs) -> "RingElement":
        if not ring.is_eqchar:
            total = sum(c * ring.p ** e for e, c in pairs)
            return cls(ring, total % ring.coeff_modulus)
        acc = {}
        for exp, coeff in pairs:
            if exp < ring.pi_precision:
                acc[exp] = (acc.get(exp, 0) + coeff) % ring.p
        return cls(ring, tuple(sorted((e, c) for e, c in acc.items() if c)))

    def _check(self, other: "RingElement"):
        if self.ring != other.ring:
            raise ShapeError(f"Base ring mismatch: {self.ring} vs {other.ring}")

    def pairs(self):
        """(pi exponent, coefficient) pairs of the pi-adic expansion."""
        if self.ring.is_eqchar:
            return list(self.raw)
        digits, value, exp = [], self.raw, 0
        while value:
            value, digit = divmod(value, self.ring.p)
            if digit:
                digits.append((exp, digit))
            exp += 1
        return digits

    def __add__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        if self.ring.is_eqchar:
            return RingElement.from_pairs(self.ring, list(self.raw) + list(other.raw))
        return RingElement(self.ring, (self.raw + other.raw) % self.ring.coeff_modulus)

    def __neg__(self) -> "RingElement":
        if self.ring.is_eqchar:
            return RingElement.from_pairs(self.ring, [(e, -c) for e, c in self.raw])
        return RingElement(self.ring, (-self.raw) % self.ring.coeff_modulus)

    def __sub__(self, other: "RingElement") -> "RingElement":
        return self + (-other)

    def __mul__(self, other: "RingElement") -> "RingElement":
        self._check(other)
        if self.ring.is_eqchar:
            return RingElement.from_pairs(
                self.ring,
                [(e1 + e2, c1 * c2) for e1, c1 in self.raw for e2, c2 in other.raw],
            )
        return RingElement(self.ring, (self.raw * other.raw) % self.ring.coeff_modulus)

    @property
    def is_zero(self) -> bool:
        return not self.raw

    def valuation(self) -> int:
        """Uniformizer valuation; equals N exactly for zero."""
        if self.is_zero:
            return self.ring.pi_precision
        if self.ring.is_eqchar:
            return self.raw[0][0]
        return p_valuation(self.raw, self.ring.p)

    @property
    def is_unit(self) -> bool:
        return self.valuation() == 0

    def residue(self) -> int:
        """Image in the residue field F_p."""
        if self.ring.is_eqchar:
            return self.raw[0][1] if self.raw and self.raw[0][0] == 0 else 0
        return self.raw % self.ring.p

    def inverse(self) -> "RingElement":
        if not self.is_unit:
            raise DomainError("Only units are invertible")
        if not self.ring.is_eqchar:
            return RingElement(self.ring, pow(self.raw, -1, self.ring.coeff_modulus))
        p, n = self.ring.p, self.ring.pi_precision
        coeffs = [0] * n
        for e, c in self.raw:
            coeffs[e] = c
        inv0 = pow(coeffs[0], -1, p)
        out = [inv0] + [0] * (n - 1)
        for k in range(1, n):
            acc = sum(coeffs[j] * out[k - j] for j in range(1, k + 1))
            out[k] = (-inv0 * acc) % p
        return RingElement.from_pairs(self.ring, list(enumerate(out)))

    def __str__(self) -> str:
        pairs = self.pairs()
        if not pairs:
            return "0"
        parts = []
        for e, c in pairs:
            parts.append(str(c) if e == 0 else (f"{c}*pi^{e}" if e > 1 else f"{c}*pi"))
        return " + ".join(parts)
