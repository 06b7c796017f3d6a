"""
Multivariate power series over a BaseRing, truncated at total t-degree D.

Terms are stored as (pi exponent, exponent vector) -> integer coefficient.
Over EqChar the coefficient lives in [1, p) and the pi exponent is < N; over
MixedChar the pi exponent is always 0 and the coefficient lives in [1, p^N).
Every operation is exact modulo (t_1..t_m)^D + (pi)^N.
"""
from __future__ import annotations

from typing import Dict, Iterable, Mapping, Optional, Sequence, Tuple

from milnorkit.core.exceptions import DomainError, ShapeError
from milnorkit.core.ring import BaseRing, RingElement
from milnorkit.utils.monomials import Monomial, degree, format_monomial, zero

Key = Tuple[int, Monomial]


class TruncatedSeries:
    """Immutable truncated power series; see module docstring for the storage contract."""

    __slots__ = ("ring", "num_vars", "degree_bound", "_terms", "_hash")

    def __init__(self, ring: BaseRing, num_vars: int, degree_bound: int,
                 terms: Optional[Mapping[Key, int]] = None):
        if num_vars < 0:
            raise ShapeError(f"num_vars must be >= 0, got {num_vars}")
        if degree_bound < 1:
            raise ShapeError(f"degree_bound must be >= 1, got {degree_bound}")
        self.ring = ring
        self.num_vars = num_vars
        self.degree_bound = degree_bound
        self._terms: Dict[Key, int] = self._canonical(terms or {})
        self._hash = None

    def _canonical(self, terms: Mapping[Key, int]) -> Dict[Key, int]:
        ring = self.ring
        mod = ring.coeff_modulus
        out: Dict[Key, int] = {}
        for (a, alpha), coeff in terms.items():
            if len(alpha) != self.num_vars:
                raise ShapeError(f"Exponent {alpha} does not have {self.num_vars} entries")
            if degree(alpha) >= self.degree_bound:
                continue
            if not ring.is_eqchar and a:
                coeff = coeff * ring.p ** a
                a = 0
            if a >= ring.pi_cap:
                continue
            key = (a, alpha)
            value = (out.get(key, 0) + coeff) % mod
            if value:
                out[key] = value
            else:
                out.pop(key, None)
        return out

    @classmethod
    def _raw(cls, ring: BaseRing, num_vars: int, degree_bound: int, terms: Dict[Key, int]):
        """Wrap an already canonical term map."""
        obj = cls.__new__(cls)
        obj.ring = ring
        obj.num_vars = num_vars
        obj.degree_bound = degree_bound
        obj._terms = terms
        obj._hash = None
        return obj

    # ------------------------------------------------------------------
    # Constructors
    # ------------------------------------------------------------------
    @classmethod
    def zero(cls, ring: BaseRing, num_vars: int, degree_bound: int) -> "TruncatedSeries":
        return cls._raw(ring, num_vars, degree_bound, {})

    @classmethod
    def constant(cls, ring: BaseRing, num_vars: int, degree_bound: int,
                 value: int = 1, pi_exp: int = 0) -> "TruncatedSeries":
        return cls(ring, num_vars, degree_bound, {(pi_exp, zero(num_vars)): value})

    @classmethod
    def monomial(cls, ring: BaseRing, num_vars: int, degree_bound: int, alpha: Monomial,
                 coeff: int = 1, pi_exp: int = 0) -> "TruncatedSeries":
        return cls(ring, num_vars, degree_bound, {(pi_exp, tuple(alpha)): coeff})

    @classmethod
    def variable(cls, ring: BaseRing, num_vars: int, degree_bound: int, index: int) -> "TruncatedSeries":
        if not 0 <= index < num_vars:
            raise ShapeError(f"Variable index {index} out of range for {num_vars} variables")
        alpha = [0] * num_vars
        alpha[index] = 1
        return cls.monomial(ring, num_vars, degree_bound, tuple(alpha))

    @classmethod
    def from_integer_terms(cls, ring: BaseRing, num_vars: int, degree_bound: int,
                           triples: Iterable[Tuple[int, int, Monomial]]) -> "TruncatedSeries":
        """Build from (integer coefficient, pi exponent, exponent vector) triples."""
        acc: Dict[Key, int] = {}
        for coeff, pi_exp, alpha in triples:
            key = (pi_exp, tuple(alpha))
            acc[key] = acc.get(key, 0) + coeff
        return cls(ring, num_vars, degree_bound, acc)

    # ------------------------------------------------------------------
    # Inspection
    # ------------------------------------------------------------------
    @property
    def raw_terms(self) -> Mapping[Key, int]:
        return self._terms

    @property
    def terms(self) -> Dict[Monomial, RingElement]:
        """Map exponent vector -> coefficient in the base ring."""
        grouped: Dict[Monomial, list] = {}
        for (a, alpha), coeff in self._terms.items():
            grouped.setdefault(alpha, []).append((a, coeff))
        return {alpha: RingElement.from_pairs(self.ring, pairs) for alpha, pairs in grouped.items()}

    def coefficient(self, alpha: Monomial) -> RingElement:
        pairs = [(a, c) for (a, beta), c in self._terms.items() if beta == tuple(alpha)]
        return RingElement.from_pairs(self.ring, pairs)

    def constant_coefficient(self) -> RingElement:
        return self.coefficient(zero(self.num_vars))

    @property
    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    def term_order(self, key: Key, coeff: int) -> int:
        a, alpha = key
        return a + degree(alpha) + self.ring.coeff_valuation(coeff)

    def t_order(self) -> int:
        """
        Largest c with self in m^c, m = (pi, t_1..t_m); D + N for zero.
        """
        if not self._terms:
            return self.degree_bound + self.ring.pi_precision
        return min(self.term_order(k, c) for k, c in self._terms.items())

    def total_degree(self) -> int:
        """Largest total t-degree of a stored term (0 for zero)."""
        return max((degree(alpha) for _, alpha in self._terms), default=0)

    def reduction(self) -> Dict[Monomial, int]:
        """Image modulo the uniformizer, as exponent vector -> F_p coefficient."""
        grouped: Dict[Monomial, list] = {}
        for (a, alpha), coeff in self._terms.items():
            grouped.setdefault(alpha, []).append((a, coeff))
        out = {}
        for alpha, pairs in grouped.items():
            value = RingElement.from_pairs(self.ring, pairs).residue()
            if value:
                out[alpha] = value
        return out

    def involves_pi(self) -> bool:
        return any(self.ring.coeff_valuation(c) + a > 0 for (a, _), c in self._terms.items())

    # ------------------------------------------------------------------
    # Ring operations
    # ------------------------------------------------------------------
    def _check(self, other: "TruncatedSeries"):
        if not isinstance(other, TruncatedSeries):
            raise ShapeError(f"Expected TruncatedSeries, got {type(other).__name__}")
        if other.num_vars != self.num_vars:
            raise ShapeError(f"Variable count mismatch: {self.num_vars} vs {other.num_vars}")
        if other.ring != self.ring:
            raise ShapeError(f"Base ring mismatch: {self.ring} vs {other.ring}")

    def __add__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        bound = min(self.degree_bound, other.degree_bound)
        mod = self.ring.coeff_modulus
        out = {k: c for k, c in self._terms.items() if degree(k[1]) < bound}
        for key, coeff in other._terms.items():
            if degree(key[1]) >= bound:
                continue
            value = (out.get(key, 0) + coeff) % mod
            if value:
                out[key] = value
            else:
                out.pop(key, None)
        return TruncatedSeries._raw(self.ring, self.num_vars, bound, out)

    def __neg__(self) -> "TruncatedSeries":
        mod = self.ring.coeff_modulus
        return TruncatedSeries._raw(self.ring, self.num_vars, self.degree_bound,
                                    {k: (-c) % mod for k, c in self._terms.items()})

    def __sub__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        return self + (-other)

    def __mul__(self, other: "TruncatedSeries") -> "TruncatedSeries":
        self._check(other)
        bound = min(self.degree_bound, other.degree_bound)
        mod = self.ring.coeff_modulus
        pi_cap = self.ring.pi_cap
        left = [(a, alpha, degree(alpha), c) for (a, alpha), c in self._terms.items()]
        right = [(a, alpha, degree(alpha), c) for (a, alpha), c in other._terms.items()]
        out: Dict[Key, int] = {}
        for a1, e1, d1, c1 in left:
            if d1 >= bound:
                continue
            for a2, e2, d2, c2 in right:
                if d1 + d2 >= bound or a1 + a2 >= pi_cap:
                    continue
                key = (a1 + a2, tuple(x + y for x, y in zip(e1, e2)))
                out[key] = (out.get(key, 0) + c1 * c2) % mod
        return TruncatedSeries._raw(self.ring, self.num_vars, bound,
                                    {k: c for k, c in out.items() if c})

    def scale(self, factor: int, pi_exp: int = 0) -> "TruncatedSeries":
        """Multiply by the base-ring element factor * pi^pi_exp."""
        return TruncatedSeries(self.ring, self.num_vars, self.degree_bound,
                               {(a + pi_exp, alpha): c * factor for (a, alpha), c in self._terms.items()})

    def shift(self, alpha: Monomial, pi_exp: int = 0, coeff: int = 1) -> "TruncatedSeries":
        """Multiply by the monomial coeff * pi^pi_exp * t^alpha."""
        return TruncatedSeries(
            self.ring, self.num_vars, self.degree_bound,
            {(a + pi_exp, tuple(x + y for x, y in zip(beta, alpha))): c * coeff
             for (a, beta), c in self._terms.items()},
        )

    def power(self, exponent: int) -> "TruncatedSeries":
        result = TruncatedSeries.constant(self.ring, self.num_vars, self.degree_bound)
        for _ in range(exponent):
            result = result * self
        return result

    def partial_derivative(self, var_index: int) -> "TruncatedSeries":
        """Formal d/dt_j; the result is exact to degree D - 1."""
        if not 0 <= var_index < self.num_vars:
            raise ShapeError(f"Variable index {var_index} out of range for {self.num_vars} variables")
        if self.degree_bound < 2:
            raise ShapeError("Derivative of a series known only modulo (t) is undefined")
        out: Dict[Key, int] = {}
        for (a, alpha), coeff in self._terms.items():
            power = alpha[var_index]
            if power:
                lowered = alpha[:var_index] + (power - 1,) + alpha[var_index + 1:]
                out[(a, lowered)] = coeff * power
        return TruncatedSeries(self.ring, self.num_vars, self.degree_bound - 1, out)

    def substitute(self, images: Sequence["TruncatedSeries"]) -> "TruncatedSeries":
        """
        Composition a(x_1..x_m) with images in the maximal ideal.

        Images may carry a pi-divisible constant term; the result is then
        exact modulo m^D rather than modulo (t)^D + (pi)^N.

        Raises:
            ShapeError: wrong number of images or mismatched rings.
            DomainError: an image has a unit constant term.
        """
        if len(images) != self.num_vars:
            raise ShapeError(f"Expected {self.num_vars} images, got {len(images)}")
        if not images:
            return self
        target_vars = images[0].num_vars
        shifted = False
        for image in images:
            if image.ring != self.ring or image.num_vars != target_vars:
                raise ShapeError("Substitution images must share a base ring and variable count")
            constant = image.constant_coefficient()
            if not constant.is_zero:
                if constant.is_unit:
                    raise DomainError("Substitution image with unit constant term leaves the origin")
                shifted = True
        bound = min([self.degree_bound] + [image.degree_bound for image in images])
        one = TruncatedSeries.constant(self.ring, target_vars, bound)
        powers = [[one] for _ in images]
        result = TruncatedSeries.zero(self.ring, target_vars, bound)
        for (a, alpha), coeff in sorted(self._terms.items()):
            if shifted and a + degree(alpha) + self.ring.coeff_valuation(coeff) >= self.degree_bound:
                continue
            term = TruncatedSeries.constant(self.ring, target_vars, bound, coeff, a)
            for j, k in enumerate(alpha):
                if not k:
                    continue
                table = powers[j]
                while len(table) <= k:
                    table.append(table[-1] * images[j])
                term = term * table[k]
                if term.is_zero:
                    break
            result = result + term
        if shifted:
            result = result.truncate_order(self.degree_bound)
        return result

    # ------------------------------------------------------------------
    # Truncation and precision
    # ------------------------------------------------------------------
    def truncate(self, degree_bound: int) -> "TruncatedSeries":
        return TruncatedSeries(self.ring, self.num_vars, min(degree_bound, self.degree_bound), self._terms)

    def truncate_order(self, order: int) -> "TruncatedSeries":
        """Drop every term lying in m^order."""
        return TruncatedSeries._raw(
            self.ring, self.num_vars, self.degree_bound,
            {k: c for k, c in self._terms.items() if self.term_order(k, c) < order},
        )

    def homogeneous_part(self, total: int) -> "TruncatedSeries":
        """Terms of total t-degree exactly `total`."""
        return TruncatedSeries._raw(
            self.ring, self.num_vars, self.degree_bound,
            {k: c for k, c in self._terms.items() if degree(k[1]) == total},
        )

    def embed(self, ring: BaseRing, degree_bound: int) -> "TruncatedSeries":
        """Reinterpret the stored terms in another precision of the same model."""
        if ring.model != self.ring.model or ring.p != self.ring.p:
            raise ShapeError("Can only re-embed within the same base ring model")
        return TruncatedSeries(ring, self.num_vars, degree_bound, self._terms)

    # ------------------------------------------------------------------
    # Equality and display
    # ------------------------------------------------------------------
    def __eq__(self, other) -> bool:
        if not isinstance(other, TruncatedSeries):
            return NotImplemented
        return (self.ring == other.ring and self.num_vars == other.num_vars
                and self.degree_bound == other.degree_bound and self._terms == other._terms)

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ring, self.num_vars, self.degree_bound,
                               frozenset(self._terms.items())))
        return self._hash

    def to_string(self, names: Optional[Sequence[str]] = None) -> str:
        names = tuple(names) if names else tuple(f"t{i + 1}" for i in range(self.num_vars))
        if not self._terms:
            return "0"
        parts = []
        for (a, alpha), coeff in sorted(self._terms.items(), key=lambda kv: (kv[0][0] + degree(kv[0][1]), kv[0])):
            factors = [str(coeff)] if coeff != 1 else []
            if a:
                factors.append("pi" if a == 1 else f"pi^{a}")
            mono = format_monomial(alpha, names)
            if mono != "1":
                factors.append(mono)
            parts.append("*".join(factors) if factors else "1")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"TruncatedSeries({self.to_string()}; D={self.degree_bound}, {self.ring.describe()})"
