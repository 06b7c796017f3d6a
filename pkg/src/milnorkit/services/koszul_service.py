"""
Koszul complexes, duality, derived exterior powers of two-term complexes
and homology lengths over quotients of the truncated ambient ring.
"""
from __future__ import annotations

import logging
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from milnorkit.core.exceptions import DomainError, HomologyInconsistent, NotFiniteLength, ShapeError
from milnorkit.core.models import FreeComplex, Germ, Matrix, QuotientRing, TwoTermComplex, Vector
from milnorkit.core.series import TruncatedSeries
from milnorkit.services.local_algebra import LocalAlgebraService

IndexSet = Tuple[int, ...]


def exterior_basis(rank: int, k: int) -> List[IndexSet]:
    """Basis e_I of the k-th exterior power, index sets in lexicographic order."""
    return list(combinations(range(rank), k))


def wedge_sign(i: int, index_set: IndexSet) -> int:
    """Sign of e_i ^ e_I written as +-e_{I + i}."""
    return -1 if sum(1 for j in index_set if j < i) % 2 else 1


class KoszulService:
    """Builds Koszul-type complexes and measures their homology."""

    def __init__(self, local_algebra: Optional[LocalAlgebraService] = None,
                 logger: Optional[logging.Logger] = None):
        self.logger = logger or logging.getLogger(__name__)
        self.local_algebra = local_algebra or LocalAlgebraService(self.logger)

    # ------------------------------------------------------------------
    # Helpers
    # ------------------------------------------------------------------
    @staticmethod
    def ambient_of(elements: Sequence[TruncatedSeries], relations: Sequence[TruncatedSeries] = ()) -> QuotientRing:
        if not elements:
            raise ShapeError("Cannot infer an ambient ring from an empty sequence")
        first = elements[0]
        bound = min(e.degree_bound for e in list(elements) + list(relations))
        return QuotientRing(first.ring, first.num_vars, bound, tuple(r.truncate(bound) for r in relations))

    @staticmethod
    def _entry(ambient: QuotientRing, value: TruncatedSeries, sign: int = 1) -> TruncatedSeries:
        value = value.truncate(ambient.degree_bound)
        return -value if sign < 0 else value

    @staticmethod
    def _matrix_product(left: Matrix, right: Matrix, ambient: QuotientRing) -> Matrix:
        inner = len(right)
        cols = len(right[0]) if right else 0
        rows = []
        for row in left:
            out = []
            for j in range(cols):
                acc = ambient.series(0)
                for k in range(inner):
                    if not row[k].is_zero and not right[k][j].is_zero:
                        acc = acc + row[k] * right[k][j]
                out.append(acc)
            rows.append(tuple(out))
        return tuple(rows)

    @staticmethod
    def transpose(matrix: Matrix, rows: int, cols: int) -> Matrix:
        """Transpose of a rows x cols matrix (empty shapes kept)."""
        return tuple(tuple(matrix[i][j] for i in range(rows)) for j in range(cols))

    # ------------------------------------------------------------------
    # Koszul complexes
    # ------------------------------------------------------------------
    def kos_minus(self, u: Sequence[TruncatedSeries], ambient: Optional[QuotientRing] = None) -> FreeComplex:
        """
        Kos-(u) in degrees [-r, 0] with contraction differentials
        e_{i_1..i_k} -> sum_j (-1)^(j-1) u_{i_j} e_{I - i_j}.
        """
        r = len(u)
        if r < 1:
            raise DomainError("Koszul complex needs at least one element")
        ambient = ambient or self.ambient_of(u)
        ranks = {-k: comb(r, k) for k in range(r + 1)}
        differentials: Dict[int, Matrix] = {}
        for k in range(1, r + 1):
            source = exterior_basis(r, k)
            target = exterior_basis(r, k - 1)
            position = {index_set: row for row, index_set in enumerate(target)}
            matrix = [[ambient.series(0) for _ in source] for _ in target]
            for col, index_set in enumerate(source):
                for j, i in enumerate(index_set):
                    rest = index_set[:j] + index_set[j + 1:]
                    matrix[position[rest]][col] = self._entry(ambient, u[i], -1 if j % 2 else 1)
            differentials[-k] = tuple(tuple(row) for row in matrix)
        return FreeComplex(ambient, -r, 0, ranks, differentials, tuple(self._entry(ambient, x) for x in u))

    def kos_wedge(self, v: Sequence[TruncatedSeries], ambient: Optional[QuotientRing] = None) -> FreeComplex:
        """Kos^(v) in degrees [0, r] with differentials w -> v ^ w."""
        r = len(v)
        if r < 1:
            raise DomainError("Koszul complex needs at least one element")
        ambient = ambient or self.ambient_of(v)
        ranks = {k: comb(r, k) for k in range(r + 1)}
        differentials: Dict[int, Matrix] = {}
        for k in range(r):
            source = exterior_basis(r, k)
            target = exterior_basis(r, k + 1)
            position = {index_set: row for row, index_set in enumerate(target)}
            matrix = [[ambient.series(0) for _ in source] for _ in target]
            for col, index_set in enumerate(source):
                for i in range(r):
                    if i in index_set:
                        continue
                    merged = tuple(sorted(index_set + (i,)))
                    matrix[position[merged]][col] = self._entry(ambient, v[i], wedge_sign(i, index_set))
            differentials[k] = tuple(tuple(row) for row in matrix)
        return FreeComplex(ambient, 0, r, ranks, differentials, tuple(self._entry(ambient, x) for x in v))

    def dualize(self, complex_: FreeComplex) -> FreeComplex:
        """Degreewise dual: degree k holds (C^-k)^v and d^k is the transpose of d^(-k-1)."""
        low, high = -complex_.high, -complex_.low
        ranks = {k: complex_.rank(-k) for k in range(low, high + 1)}
        differentials = {}
        for k in range(low, high):
            original = complex_.differentials[-k - 1]
            differentials[k] = self.transpose(original, complex_.rank(-k), complex_.rank(-k - 1))
        return FreeComplex(complex_.ambient, low, high, ranks, differentials, complex_.homology_annihilator)

    @staticmethod
    def shift(complex_: FreeComplex, amount: int) -> FreeComplex:
        """C[amount]: degree i moves to i - amount; differentials keep their sign."""
        return FreeComplex(
            complex_.ambient,
            complex_.low - amount,
            complex_.high - amount,
            {i - amount: rank for i, rank in complex_.ranks.items()},
            {i - amount: matrix for i, matrix in complex_.differentials.items()},
            complex_.homology_annihilator,
        )

    def derived_exterior_power(self, two_term: TwoTermComplex, r: int) -> FreeComplex:
        """L-wedge^r of [R -> R^r] (R in degree -1), i.e. Kos^(v)[r]."""
        if r != len(two_term.v):
            raise DomainError(f"Exterior power {r} of a two-term complex with target rank {len(two_term.v)}")
        return self.shift(self.kos_wedge(two_term.v, two_term.ambient), r)

    def check_differentials(self, complex_: FreeComplex) -> bool:
        """d o d == 0 modulo the relations of the ambient quotient, with shapes checked."""
        ambient = complex_.ambient
        relations = [rel for rel in ambient.relations if not rel.is_zero]
        for j in range(complex_.low, complex_.high + 1):
            matrix = complex_.differentials.get(j)
            if matrix is None:
                continue
            rows, cols = complex_.rank(j + 1), complex_.rank(j)
            if len(matrix) != rows or any(len(row) != cols for row in matrix):
                self.logger.warning(f"Differential in degree {j} does not match ranks {cols} -> {rows}")
                return False
            following = complex_.differentials.get(j + 1)
            if following is None or not rows:
                continue
            for row in self._matrix_product(following, matrix, ambient):
                for entry in row:
                    if entry.is_zero:
                        continue
                    if not relations:
                        return False
                    cap = min(ambient.degree_bound, ambient.ring.pi_precision)
                    remainder = self.local_algebra.normal_form_vector(
                        (entry,), [(rel,) for rel in relations], 1, cap=cap)
                    if any(not x.is_zero for x in remainder):
                        return False
        return True

    # ------------------------------------------------------------------
    # Homology
    # ------------------------------------------------------------------
    def _parameters(self, ambient: QuotientRing) -> List[TruncatedSeries]:
        """
        A system of parameters of the ambient quotient chosen among the
        variables and pi, the one with the smallest quotient length; ties go to
        the first subset in order, variables before pi.
        """
        relations = [rel for rel in ambient.relations if not rel.is_zero]
        dimension = ambient.num_vars + 1 - len(relations)
        if dimension <= 0:
            return []
        pi = TruncatedSeries.constant(ambient.ring, ambient.num_vars, ambient.degree_bound, 1, 1)
        candidates = [TruncatedSeries.variable(ambient.ring, ambient.num_vars, ambient.degree_bound, i)
                      for i in range(ambient.num_vars)] + [pi]
        best, best_length = None, None
        for subset in combinations(candidates, dimension):
            try:
                length = self.local_algebra.module_colength([(x,) for x in subset], 1, relations).length
            except NotFiniteLength:
                continue
            if best_length is None or length < best_length:
                best, best_length = list(subset), length
            if best_length == 1:
                break
        if best is None:
            raise NotFiniteLength("no system of parameters among the variables and the uniformizer",
                                  precision=(ambient.degree_bound, ambient.ring.pi_precision))
        self.logger.debug(f"Parameters chosen with quotient length {best_length}")
        return best

    def homology_lengths(self, complex_: FreeComplex) -> Dict[int, int]:
        """
        Length of H^j for every degree of the complex.

        Over a quotient of dimension d > 0 the complex is reduced modulo
        y_k = x_k^(c * 2^k) for parameters x_1..x_d, where m^c kills the
        homology; each reduction by a nonzerodivisor killing the homology adds
        H^(j+1) to H^j, so the lengths are recovered by descending subtraction.

        Raises:
            NotFiniteLength: the homology is not certified of finite length.
            HomologyInconsistent: the recovered lengths are not consistent.
        """
        degrees = list(complex_.degrees)
        if all(complex_.rank(j) == 0 for j in degrees):
            return {j: 0 for j in degrees}
        ambient = complex_.ambient
        la = self.local_algebra
        ring, m, bound = ambient.ring, ambient.num_vars, ambient.degree_bound
        relations = [rel for rel in ambient.relations if not rel.is_zero]

        parameters = self._parameters(ambient)
        reductions: List[TruncatedSeries] = []
        if parameters:
            annihilator = [a for a in complex_.homology_annihilator if not a.is_zero]
            if not annihilator:
                raise NotFiniteLength("homology has no annihilator of finite colength",
                                      precision=(bound, ring.pi_precision))
            killer = la.module_colength([(a,) for a in annihilator], 1, relations, ring, m, bound)
            if killer.certificate == 0:
                return {j: 0 for j in degrees}
            reductions = [x.power(killer.certificate * 2 ** k) for k, x in enumerate(parameters)]
            self.logger.debug(f"Reducing by parameter powers {[killer.certificate * 2 ** k for k in range(len(parameters))]}")

        reduced = relations + reductions
        ring_length = la.module_colength([], 1, reduced, ring, m, bound).length

        def cokernel(j: int) -> int:
            target = complex_.rank(j + 1)
            if target == 0:
                return 0
            if complex_.rank(j) == 0:
                return target * ring_length
            matrix = complex_.differentials[j]
            columns = [tuple(matrix[i][col] for i in range(target)) for col in range(complex_.rank(j))]
            return la.module_colength(columns, target, reduced, ring, m, bound).length

        cokernels = {j: cokernel(j) for j in range(complex_.low - 1, complex_.high + 1)}
        reduced_lengths = {
            j: cokernels[j] + cokernels[j - 1] - complex_.rank(j + 1) * ring_length for j in degrees
        }
        return self._recover(reduced_lengths, complex_.low, complex_.high, len(parameters))

    @staticmethod
    def _recover(reduced: Dict[int, int], low: int, high: int, d: int) -> Dict[int, int]:
        lengths: Dict[int, int] = {}
        for j in range(high, low - d - 1, -1):
            value = reduced.get(j, 0) - sum(comb(d, k) * lengths.get(j + k, 0) for k in range(1, d + 1))
            if j < low and value != 0:
                raise HomologyInconsistent(f"nonzero homology recovered below the complex in degree {j}")
            if value < 0:
                raise HomologyInconsistent(f"negative length recovered in degree {j}")
            lengths[j] = value
        return {j: lengths[j] for j in range(low, high + 1)}

    def euler_characteristic(self, complex_: FreeComplex, lengths: Optional[Dict[int, int]] = None) -> int:
        lengths = lengths if lengths is not None else self.homology_lengths(complex_)
        return sum((-1) ** (j % 2) * length for j, length in lengths.items())

    def is_regular_sequence(self, u: Sequence[TruncatedSeries], ambient: QuotientRing) -> bool:
        """u has dim(ambient) elements and (u) + relations has finite colength."""
        relations = [rel for rel in ambient.relations if not rel.is_zero]
        if len(u) != ambient.num_vars + 1 - len(relations):
            return False
        try:
            self.local_algebra.module_colength([(x,) for x in u], 1, relations,
                                               ambient.ring, ambient.num_vars, ambient.degree_bound)
        except NotFiniteLength:
            return False
        return True

    # ------------------------------------------------------------------
    # Germ-level complexes
    # ------------------------------------------------------------------
    def cotangent_complex(self, g: Germ) -> TwoTermComplex:
        """C_df = [O_X -> O_X^{n+1}] for a hypersurface germ, O_X = ambient / (f)."""
        if g.r != 1:
            raise DomainError("The two-term cotangent presentation is built for hypersurfaces (r = 1)")
        partials = tuple(g.f[0].partial_derivative(j) for j in range(g.num_vars))
        bound = g.degree_bound - 1
        ambient = QuotientRing(g.base, g.num_vars, bound, (g.f[0].truncate(bound),))
        return TwoTermComplex(ambient, partials)

    def omega_top_length(self, g: Germ) -> int:
        """
        Length of the top relative differentials wedge^{n+1} of Omega^1_{X/S},
        presented by df_k ^ e_J (|J| = n) modulo (f).
        """
        m, n = g.num_vars, g.n
        partials = [[fi.partial_derivative(j) for j in range(m)] for fi in g.f]
        bound = g.degree_bound - 1
        target = exterior_basis(m, n + 1)
        position = {index_set: k for k, index_set in enumerate(target)}
        zero = TruncatedSeries.zero(g.base, m, bound)
        vectors: List[Vector] = []
        for row in partials:
            for index_set in exterior_basis(m, n):
                vector = [zero] * len(target)
                for i in range(m):
                    if i in index_set:
                        continue
                    merged = tuple(sorted(index_set + (i,)))
                    entry = row[i] if wedge_sign(i, index_set) > 0 else -row[i]
                    vector[position[merged]] = vector[position[merged]] + entry
                vectors.append(tuple(vector))
        relations = [fi.truncate(bound) for fi in g.f]
        return self.local_algebra.module_colength(vectors, len(target), relations, g.base, m, bound).length
