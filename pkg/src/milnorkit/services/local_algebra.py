"""
Local algebra service: certified colengths, normal forms, minors and
Jacobian/Fitting ideals in truncated local rings.

Submodules M of a free module P^rank are handled through explicit finite
quotients P^rank / (M + m^c), m = (pi, t_1..t_m). Over EqChar a single
echelon form over F_p serves every c below the cap; over MixedChar the
quotient is rebuilt per c as a Z/p^c-module.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from itertools import combinations
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from milnorkit.core.exceptions import LinearSolveFailed, NotFiniteLength, PrecisionInsufficient, ShapeError
from milnorkit.core.models import FiniteLengthModule, Germ, LocalIdeal, Matrix, Vector
from milnorkit.core.ring import BaseRing
from milnorkit.core.series import TruncatedSeries
from milnorkit.services.echelon import ChainEchelon, Row
from milnorkit.utils.monomials import count_of_degree, degree, monomials_of_degree


@dataclass(frozen=True)
class ModuleGenerator:
    """A generator of a submodule with the least order allowed for its multipliers."""
    label: Hashable
    vector: Vector
    floor: int = 0


class TruncatedQuotient:
    """
    The finite module P^rank / (M + m^cap) as an explicit echelon form.

    Columns are (order, slot, pi exponent, exponents) over EqChar and
    (t-degree, slot, exponents) over MixedChar; rows are the monomial
    multiples of the generators, labelled (generator label, multiplier).
    """

    def __init__(self, ring: BaseRing, num_vars: int, rank: int, cap: int,
                 generators: Sequence[ModuleGenerator], track: bool = False):
        self.ring = ring
        self.num_vars = num_vars
        self.rank = rank
        self.cap = cap
        self.generators = list(generators)
        self.track = track
        self.echelon = ChainEchelon(ring.p, 1 if ring.is_eqchar else max(cap, 1), track)
        self._base_rows = [self.vector_to_row(g.vector) for g in self.generators]
        self._inserted_layers = 0

    # ------------------------------------------------------------------
    # Row and column conversion
    # ------------------------------------------------------------------
    def vector_to_row(self, vector: Sequence[TruncatedSeries]) -> Row:
        if len(vector) != self.rank:
            raise ShapeError(f"Vector of length {len(vector)} in a free module of rank {self.rank}")
        row: Row = {}
        cap = self.cap
        if self.ring.is_eqchar:
            for slot, entry in enumerate(vector):
                for (a, alpha), coeff in entry.raw_terms.items():
                    order = a + degree(alpha)
                    if order < cap:
                        row[(order, slot, a, alpha)] = coeff
        else:
            modulus = self.ring.p ** cap
            for slot, entry in enumerate(vector):
                for (_, alpha), coeff in entry.raw_terms.items():
                    d = degree(alpha)
                    if d < cap and coeff % modulus:
                        row[(d, slot, alpha)] = coeff % modulus
        return row

    def row_to_vector(self, row: Row, degree_bound: int) -> Vector:
        slots: List[Dict] = [{} for _ in range(self.rank)]
        for column, coeff in row.items():
            if self.ring.is_eqchar:
                _, slot, a, alpha = column
                slots[slot][(a, alpha)] = coeff
            else:
                _, slot, alpha = column
                slots[slot][(0, alpha)] = coeff
        return tuple(TruncatedSeries(self.ring, self.num_vars, degree_bound, terms) for terms in slots)

    def _shifted(self, base: Row, pi_exp: int, beta, scale: int = 1) -> Row:
        """Row of (multiplier) * generator, truncated at the cap."""
        out: Row = {}
        shift = pi_exp + degree(beta)
        if self.ring.is_eqchar:
            for (order, slot, a, alpha), coeff in base.items():
                if order + shift < self.cap:
                    out[(order + shift, slot, a + pi_exp, tuple(x + y for x, y in zip(alpha, beta)))] = coeff
        else:
            modulus = self.ring.p ** self.cap
            factor = self.ring.p ** pi_exp * scale
            for (d, slot, alpha), coeff in base.items():
                if d + degree(beta) < self.cap:
                    value = (coeff * factor) % modulus
                    if value:
                        out[(d + degree(beta), slot, tuple(x + y for x, y in zip(alpha, beta)))] = value
        return out

    @staticmethod
    def _row_order(row: Row) -> Optional[int]:
        return min(row)[0] if row else None

    # ------------------------------------------------------------------
    # Building
    # ------------------------------------------------------------------
    def insert_layer(self, order: int):
        """EqChar: insert every row whose leading order is exactly `order`."""
        for generator, base in zip(self.generators, self._base_rows):
            start = self._row_order(base)
            if start is None or start > order:
                continue
            mult_order = order - start
            if mult_order < generator.floor:
                continue
            for mono in monomials_of_degree(self.num_vars + 1, mult_order):
                pi_exp, beta = mono[0], mono[1:]
                row = self._shifted(base, pi_exp, beta)
                if row:
                    self.echelon.insert(row, (generator.label, (pi_exp, beta)) if self.track else None)
        self._inserted_layers = max(self._inserted_layers, order + 1)

    def build(self) -> "TruncatedQuotient":
        if self.ring.is_eqchar:
            for order in range(self._inserted_layers, self.cap):
                self.insert_layer(order)
            return self
        p = self.ring.p
        for generator, base in zip(self.generators, self._base_rows):
            for total in range(self.cap):
                for beta in monomials_of_degree(self.num_vars, total):
                    scale_exp = max(0, generator.floor - total)
                    if scale_exp >= self.cap:
                        continue
                    row = self._shifted(base, scale_exp, beta)
                    if row:
                        self.echelon.insert(row, (generator.label, (scale_exp, beta)) if self.track else None)
        for total in range(1, self.cap):
            for slot in range(self.rank):
                for alpha in monomials_of_degree(self.num_vars, total):
                    self.echelon.insert({(total, slot, alpha): p ** (self.cap - total)})
        self._inserted_layers = self.cap
        return self

    # ------------------------------------------------------------------
    # Queries
    # ------------------------------------------------------------------
    def columns_of_order(self, order: int) -> int:
        if self.ring.is_eqchar:
            return self.rank * count_of_degree(self.num_vars + 1, order)
        return self.rank * count_of_degree(self.num_vars, order)

    def pivots_of_order(self, order: int) -> int:
        return sum(1 for column in self.echelon.pivots if column[0] == order)

    def layer_complete(self, order: int) -> bool:
        """EqChar: every column of the given order is a pivot."""
        return self.pivots_of_order(order) == self.columns_of_order(order)

    def length(self, below: Optional[int] = None) -> int:
        """Length of P^rank / (M + m^below) (below defaults to the cap)."""
        below = self.cap if below is None else below
        if self.ring.is_eqchar:
            columns = sum(self.columns_of_order(c) for c in range(below))
            pivots = sum(1 for column in self.echelon.pivots if column[0] < below)
            return columns - pivots
        total = 0
        for d in range(self.cap):
            for slot in range(self.rank):
                for alpha in monomials_of_degree(self.num_vars, d):
                    v = self.echelon.valuation_at((d, slot, alpha))
                    total += self.cap if v is None else v
        return total

    def basis(self, below: Optional[int] = None) -> List[dict]:
        """Residue-field basis of the quotient as monomial descriptors."""
        below = self.cap if below is None else below
        out = []
        if self.ring.is_eqchar:
            for order in range(below):
                for mono in monomials_of_degree(self.num_vars + 1, order):
                    for slot in range(self.rank):
                        column = (order, slot, mono[0], mono[1:])
                        if column not in self.echelon.pivots:
                            out.append({"slot": slot, "pi": mono[0], "exp": list(mono[1:])})
            return sorted(out, key=lambda b: (b["pi"] + sum(b["exp"]), b["slot"], b["pi"], b["exp"]))
        for d in range(self.cap):
            for alpha in sorted(monomials_of_degree(self.num_vars, d)):
                for slot in range(self.rank):
                    v = self.echelon.valuation_at((d, slot, alpha))
                    v = self.cap if v is None else v
                    for k in range(v):
                        out.append({"slot": slot, "pi": k, "exp": list(alpha)})
        return out

    def reduce(self, vector: Sequence[TruncatedSeries], stop: Optional[int] = None):
        return self.echelon.reduce(self.vector_to_row(vector), stop)

    def contains(self, vector: Sequence[TruncatedSeries]) -> bool:
        remainder, _ = self.reduce(vector)
        return not remainder


class LocalAlgebraService:
    """Certified lengths and normal forms in truncated local rings."""

    def __init__(self, logger: Optional[logging.Logger] = None):
        self.logger = logger or logging.getLogger(__name__)
        self._modules: Dict[tuple, FiniteLengthModule] = {}
        self._quotients: Dict[tuple, TruncatedQuotient] = {}

    # ------------------------------------------------------------------
    # Internal helpers
    # ------------------------------------------------------------------
    @staticmethod
    def _ambient(vectors: Sequence[Vector], ring: Optional[BaseRing], num_vars: Optional[int],
                 degree_bound: Optional[int]):
        entries = [entry for vector in vectors for entry in vector]
        if entries:
            ring = ring or entries[0].ring
            num_vars = entries[0].num_vars if num_vars is None else num_vars
            bound = min(entry.degree_bound for entry in entries)
            degree_bound = min(bound, degree_bound) if degree_bound else bound
        if ring is None or num_vars is None or degree_bound is None:
            raise ShapeError("Cannot infer the ambient ring of an empty presentation")
        return ring, num_vars, degree_bound

    @staticmethod
    def relation_vectors(relations: Sequence[TruncatedSeries], rank: int) -> List[Vector]:
        """rel_k * e_i for every relation and slot."""
        out = []
        for rel in relations:
            zero = TruncatedSeries.zero(rel.ring, rel.num_vars, rel.degree_bound)
            for slot in range(rank):
                out.append(tuple(rel if i == slot else zero for i in range(rank)))
        return out

    def quotient(self, vectors: Sequence[Vector], rank: int, cap: int, ring: BaseRing, num_vars: int,
                 floors: Optional[Sequence[int]] = None, track: bool = False) -> TruncatedQuotient:
        """Fully built P^rank / (span + m^cap), cached."""
        floors = tuple(floors) if floors else (0,) * len(vectors)
        key = (tuple(vectors), rank, cap, ring, num_vars, floors, track)
        cached = self._quotients.get(key)
        if cached is None:
            generators = [ModuleGenerator(index, tuple(vec), floor)
                          for index, (vec, floor) in enumerate(zip(vectors, floors))]
            cached = TruncatedQuotient(ring, num_vars, rank, cap, generators, track).build()
            self._quotients[key] = cached
        return cached

    def _not_finite(self, ring: BaseRing, degree_bound: int, message: str):
        precision = (degree_bound, ring.pi_precision)
        if ring.pi_precision < degree_bound:
            return PrecisionInsufficient(f"{message}; uniformizer precision N={ring.pi_precision} is binding",
                                         precision=precision)
        return NotFiniteLength(f"{message} at precision (D, N) = {precision}", precision=precision)

    # ------------------------------------------------------------------
    # Colength
    # ------------------------------------------------------------------
    def module_colength(self, vectors: Sequence[Vector], rank: int, relations: Sequence[TruncatedSeries] = (),
                        ring: Optional[BaseRing] = None, num_vars: Optional[int] = None,
                        degree_bound: Optional[int] = None) -> FiniteLengthModule:
        """
        Certified length of P^rank / (vectors + relations * P^rank).

        The certificate c* is the least c with m^c P^rank inside the
        submodule, witnessed by l(c) == l(c + 1) below the working cap.

        Raises:
            NotFiniteLength: no certificate below min(D, N).
            PrecisionInsufficient: as above with N < D binding.
        """
        vectors = [tuple(v) for v in vectors] + self.relation_vectors(relations, rank)
        ring, num_vars, degree_bound = self._ambient(vectors, ring, num_vars, degree_bound)
        key = (tuple(vectors), rank, ring, num_vars, degree_bound)
        cached = self._modules.get(key)
        if cached is not None:
            return cached

        if rank > 0 and all(entry.is_zero for vector in vectors for entry in vector):
            raise NotFiniteLength("zero submodule of a nonzero free module", precision=(degree_bound, ring.pi_precision))

        cap = min(degree_bound, ring.pi_precision)
        if ring.is_eqchar:
            module = self._colength_eqchar(vectors, rank, ring, num_vars, degree_bound, cap)
        else:
            module = self._colength_mixedchar(vectors, rank, ring, num_vars, degree_bound, cap)
        self._modules[key] = module
        self.logger.debug(f"Certified length {module.length} with c*={module.certificate}")
        return module

    def _colength_eqchar(self, vectors, rank, ring, num_vars, degree_bound, cap) -> FiniteLengthModule:
        generators = [ModuleGenerator(index, vec) for index, vec in enumerate(vectors)]
        quotient = TruncatedQuotient(ring, num_vars, rank, cap, generators)
        for order in range(cap):
            quotient.insert_layer(order)
            if quotient.layer_complete(order):
                return FiniteLengthModule(
                    presentation=tuple(vectors),
                    rank=rank,
                    length=quotient.length(below=order),
                    certificate=order,
                    basis=quotient.basis(below=order),
                    precision=(degree_bound, ring.pi_precision),
                    quotient=quotient,
                )
        raise self._not_finite(ring, degree_bound, "no stabilization layer found")

    def _colength_mixedchar(self, vectors, rank, ring, num_vars, degree_bound, cap) -> FiniteLengthModule:
        previous_length, previous = 0, None
        for c in range(1, cap + 1):
            current = self.quotient(vectors, rank, c, ring, num_vars)
            length = current.length()
            if length == previous_length:
                return FiniteLengthModule(
                    presentation=tuple(vectors),
                    rank=rank,
                    length=length,
                    certificate=c - 1,
                    basis=previous.basis() if previous is not None else [],
                    precision=(degree_bound, ring.pi_precision),
                    quotient=previous,
                )
            previous_length, previous = length, current
        raise self._not_finite(ring, degree_bound, "no stabilization layer found")

    def colength(self, ideal: LocalIdeal) -> FiniteLengthModule:
        """Certified length of the quotient of the ambient ring by the ideal."""
        if not ideal.generators:
            raise NotFiniteLength("empty ideal", precision=(ideal.degree_bound, ideal.ring.pi_precision))
        return self.module_colength([(g,) for g in ideal.generators], 1, ring=ideal.ring,
                                    num_vars=ideal.num_vars, degree_bound=ideal.degree_bound)

    # ------------------------------------------------------------------
    # Normal forms and membership
    # ------------------------------------------------------------------
    def normal_form_vector(self, vector: Vector, vectors: Sequence[Vector], rank: int,
                           relations: Sequence[TruncatedSeries] = (), cap: Optional[int] = None,
                           allow_capped: bool = False) -> Vector:
        """
        Representative of a vector modulo the submodule, reduced against the staircase.

        Without a cap the certified module is used; with allow_capped the
        reduction falls back to the submodule plus m^cap when no certificate
        exists. The result is zero iff the vector lies in M + m^stop.
        """
        degree_bound = min(entry.degree_bound for entry in vector)
        module = None
        if cap is None:
            try:
                module = self.module_colength(vectors, rank, relations)
            except NotFiniteLength:
                if not allow_capped:
                    raise
        all_vectors = [tuple(v) for v in vectors] + self.relation_vectors(relations, rank)
        ring, num_vars, bound = self._ambient(all_vectors + [tuple(vector)], None, None, None)
        if module is not None:
            stop = module.certificate
            quotient = module.quotient
            if quotient is None:
                return tuple(TruncatedSeries.zero(ring, num_vars, degree_bound) for _ in range(rank))
        else:
            stop = min(bound, ring.pi_precision) if cap is None else cap
            quotient = self.quotient(all_vectors, rank, stop, ring, num_vars)
        remainder, _ = quotient.reduce(vector, stop if ring.is_eqchar else None)
        return quotient.row_to_vector(remainder, degree_bound)

    def normal_form(self, a: TruncatedSeries, ideal: LocalIdeal, cap: Optional[int] = None,
                    allow_capped: bool = False) -> TruncatedSeries:
        """Normal form of a modulo the ideal (plus m^cap when capped)."""
        gens = [(g,) for g in ideal.generators]
        return self.normal_form_vector((a,), gens, 1, cap=cap, allow_capped=allow_capped)[0]

    def order_in_quotient(self, vector: Vector, vectors: Sequence[Vector], rank: int, cap: int) -> int:
        """Largest k <= cap with vector in M + m^k."""
        vectors = [tuple(v) for v in vectors]
        ring, num_vars, _ = self._ambient(vectors + [tuple(vector)], None, None, None)
        if ring.is_eqchar:
            quotient = self.quotient(vectors, rank, cap, ring, num_vars)
            remainder, _ = quotient.reduce(vector, cap)
            return min(remainder)[0] if remainder else cap
        for k in range(1, cap + 1):
            if not self.quotient(vectors, rank, k, ring, num_vars).contains(vector):
                return k - 1
        return cap

    def solve(self, target: Vector, columns: Sequence[Vector], relations: Sequence[TruncatedSeries],
              min_order: int, cap: int) -> Tuple[TruncatedSeries, ...]:
        """
        Coefficients x_j in m^min_order with sum_j x_j * columns[j] == target
        modulo relations * P^r + m^cap.

        Raises:
            LinearSolveFailed: target is not in the restricted image.
        """
        rank = len(target)
        columns = [tuple(c) for c in columns]
        rel_vectors = self.relation_vectors(relations, rank)
        ring, num_vars, degree_bound = self._ambient(columns + rel_vectors + [tuple(target)], None, None, None)
        floors = [min_order] * len(columns) + [0] * len(rel_vectors)
        quotient = self.quotient(columns + rel_vectors, rank, cap, ring, num_vars, floors, track=True)
        remainder, combination = quotient.reduce(target)
        if remainder:
            raise LinearSolveFailed(
                f"target not in the image of m^{min_order}-multiples modulo m^{cap}"
            )
        coefficients: List[Dict] = [{} for _ in columns]
        for (label, (pi_exp, beta)), coeff in combination.items():
            if label < len(columns):
                bucket = coefficients[label]
                key = (pi_exp, beta)
                bucket[key] = bucket.get(key, 0) + coeff
        return tuple(TruncatedSeries(ring, num_vars, degree_bound, terms) for terms in coefficients)

    # ------------------------------------------------------------------
    # Minors, Jacobian and Fitting ideals
    # ------------------------------------------------------------------
    @staticmethod
    def determinant(matrix: Matrix) -> TruncatedSeries:
        """Laplace expansion along the first row."""
        size = len(matrix)
        if size == 1:
            return matrix[0][0]
        total = None
        for j in range(size):
            minor = tuple(tuple(row[:j] + row[j + 1:]) for row in matrix[1:])
            term = matrix[0][j] * LocalAlgebraService.determinant(minor)
            if j % 2:
                term = -term
            total = term if total is None else total + term
        return total

    def minors(self, matrix: Matrix, size: int) -> LocalIdeal:
        """Ideal of all size x size minors."""
        rows = len(matrix)
        cols = len(matrix[0]) if rows else 0
        if not 1 <= size <= min(rows, cols):
            raise ShapeError(f"Minor size {size} out of range for a {rows}x{cols} matrix")
        found = []
        for row_set in combinations(range(rows), size):
            for col_set in combinations(range(cols), size):
                sub = tuple(tuple(matrix[i][j] for j in col_set) for i in row_set)
                found.append(self.determinant(sub))
        nonzero = [m for m in found if not m.is_zero]
        return LocalIdeal.of(nonzero or found[:1])

    @staticmethod
    def jacobian_matrix(g: Germ) -> Matrix:
        """Rows are equations, columns are the t-variables."""
        return tuple(tuple(fi.partial_derivative(j) for j in range(g.num_vars)) for fi in g.f)

    def jacobian_ideal(self, g: Germ) -> LocalIdeal:
        """(f_1..f_r) + the r x r minors of the Jacobian matrix."""
        minors = self.minors(self.jacobian_matrix(g), g.r)
        generators = list(g.f) + [m for m in minors.generators if not m.is_zero]
        return LocalIdeal.of(generators)

    def fitting_ideal(self, g: Germ) -> LocalIdeal:
        """
        Fitt_n of the relative differentials, from the presentation
        O^r -> O^{n+r} given by the transposed Jacobian, lifted to the ambient ring.
        """
        jac = self.jacobian_matrix(g)
        presentation = tuple(tuple(jac[i][j] for i in range(g.r)) for j in range(g.num_vars))
        minors = self.minors(presentation, g.num_vars - g.n)
        return LocalIdeal.of(list(g.f) + [m for m in minors.generators if not m.is_zero])
