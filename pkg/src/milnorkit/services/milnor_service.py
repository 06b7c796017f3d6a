"""
Germ-level Milnor number service: validation, the colength side, the T^1
side and the Koszul (Euler characteristic) side, under one precision policy.
"""
from __future__ import annotations

import logging
from itertools import combinations
from typing import Callable, Optional, TypeVar

from milnorkit.core.constants import (
    DEFAULT_MAX_DEGREE_BOUND,
    FLAG_FIBER_DEGENERACY,
    FLAG_NOT_ON_FIBER,
    FLAG_NOT_REGULAR,
    FLAG_NOT_REGULAR_SEQUENCE,
    FLAG_SMOOTH,
)
from milnorkit.core.exceptions import DomainError, NotFiniteLength, PrecisionInsufficient
from milnorkit.core.models import FiniteLengthModule, Germ, GermDiagnostics, KoszulCheckReport, LocalIdeal, MilnorReport
from milnorkit.core.series import TruncatedSeries
from milnorkit.services.koszul_service import KoszulService
from milnorkit.services.local_algebra import LocalAlgebraService
from milnorkit.utils.finite_field import field

T = TypeVar("T")


class MilnorService:
    """Computes and cross-checks Milnor numbers of complete-intersection germs."""

    def __init__(self, local_algebra: Optional[LocalAlgebraService] = None,
                 koszul: Optional[KoszulService] = None,
                 logger: Optional[logging.Logger] = None,
                 max_degree_bound: int = DEFAULT_MAX_DEGREE_BOUND):
        self.logger = logger or logging.getLogger(__name__)
        self.local_algebra = local_algebra or LocalAlgebraService(self.logger)
        self.koszul = koszul or KoszulService(self.local_algebra, self.logger)
        self.max_degree_bound = max_degree_bound

    # ------------------------------------------------------------------
    # Precision policy
    # ------------------------------------------------------------------
    def with_precision_policy(self, g: Germ, compute: Callable[[Germ], T]) -> T:
        """
        Run compute(g), doubling D on NotFiniteLength and N on
        PrecisionInsufficient until the configured cap.
        """
        current = g
        while True:
            try:
                return compute(current)
            except PrecisionInsufficient as error:
                degree_bound, pi_precision = current.degree_bound, 2 * current.base.pi_precision
                last = error
            except NotFiniteLength as error:
                degree_bound, pi_precision = 2 * current.degree_bound, current.base.pi_precision
                last = error
            if max(degree_bound, pi_precision) > self.max_degree_bound:
                raise NotFiniteLength(
                    f"non-isolated singularity at precision (D, N) = {current.precision}: {last}",
                    precision=current.precision,
                ) from last
            self.logger.warning(f"Retrying at (D, N) = ({degree_bound}, {pi_precision}) after: {last}")
            current = current.with_precision(degree_bound, pi_precision)

    # ------------------------------------------------------------------
    # Validation
    # ------------------------------------------------------------------
    def validate(self, g: Germ) -> GermDiagnostics:
        """Check the germ hypotheses; every finding is a flag, never an exception."""
        diagnostics = GermDiagnostics(is_valid=True)
        if len(g.f) != g.r:
            diagnostics.errors.append(f"expected {g.r} equations, found {len(g.f)}")
        if any(fi.num_vars != g.num_vars for fi in g.f):
            diagnostics.errors.append(f"equations must use {g.num_vars} variables")
        if diagnostics.errors:
            diagnostics.is_valid = False
            diagnostics.message = "; ".join(diagnostics.errors)
            return diagnostics

        if any(fi.constant_coefficient().is_unit for fi in g.f):
            diagnostics.flags.append(FLAG_NOT_ON_FIBER)
            diagnostics.errors.append("the origin does not lie on the special fiber")

        if not any(fi.involves_pi() for fi in g.f):
            diagnostics.flags.append(FLAG_FIBER_DEGENERACY)
            diagnostics.warnings.append("no equation involves the uniformizer; the singular locus is not isolated")

        if not self._special_fiber_regular(g):
            diagnostics.flags.append(FLAG_NOT_REGULAR_SEQUENCE)
            diagnostics.warnings.append("reductions mod pi are not certified to form a regular sequence")

        if self._linear_rank(g) < g.r:
            diagnostics.flags.append(FLAG_NOT_REGULAR)
            diagnostics.warnings.append("linear parts span fewer than r directions; the total space is not regular")

        jacobian = self.local_algebra.minors(self.local_algebra.jacobian_matrix(g), g.r)
        if any(m.constant_coefficient().is_unit for m in jacobian.generators):
            diagnostics.flags.append(FLAG_SMOOTH)
            diagnostics.warnings.append("the Jacobian has a unit minor; the germ is smooth and mu = 0")

        diagnostics.is_valid = not diagnostics.errors
        diagnostics.message = "; ".join(diagnostics.errors + diagnostics.warnings) or "valid"
        return diagnostics

    def _special_fiber_regular(self, g: Germ) -> bool:
        """Some n coordinates complete the reductions to a system of parameters of k[[t]]."""
        pi = TruncatedSeries.constant(g.base, g.num_vars, g.degree_bound, 1, 1)
        for subset in combinations(range(g.num_vars), g.n):
            extra = [TruncatedSeries.variable(g.base, g.num_vars, g.degree_bound, i) for i in subset]
            try:
                self.local_algebra.colength(LocalIdeal.of(list(g.f) + extra + [pi]))
            except NotFiniteLength:
                continue
            return True
        return False

    @staticmethod
    def _linear_rank(g: Germ) -> int:
        """Rank over F_p of the images of f_i in m / m^2, m = (pi, t)."""
        rows = []
        for fi in g.f:
            row = [0] * (g.num_vars + 1)
            for (a, alpha), coeff in fi.raw_terms.items():
                if fi.term_order((a, alpha), coeff) != 1:
                    continue
                if a == 1 or (a == 0 and sum(alpha) == 0):
                    unit = coeff if g.base.is_eqchar else coeff // g.base.p
                    row[0] = (row[0] + unit) % g.base.p
                else:
                    index = alpha.index(1)
                    row[index + 1] = (row[index + 1] + coeff) % g.base.p
            rows.append(row)
        return field(g.base.p).rank(rows)

    # ------------------------------------------------------------------
    # The three sides
    # ------------------------------------------------------------------
    def _jacobian_module(self, g: Germ) -> FiniteLengthModule:
        return self.local_algebra.colength(self.local_algebra.jacobian_ideal(g))

    def t1_length(self, g: Germ) -> int:
        """Length of coker(O_X^{n+r} -> O_X^r) given by the transposed Jacobian."""
        def compute(current: Germ) -> int:
            return self._t1_module(current).length
        return self.with_precision_policy(g, compute)

    def _t1_module(self, g: Germ) -> FiniteLengthModule:
        jac = self.local_algebra.jacobian_matrix(g)
        columns = [tuple(jac[i][j] for i in range(g.r)) for j in range(g.num_vars)]
        return self.local_algebra.module_colength(columns, g.r, list(g.f))

    def milnor_via_koszul(self, g: Germ) -> int:
        """Euler characteristic of L-wedge^{n+1} of the cotangent complex of a hypersurface."""
        if g.r != 1:
            raise DomainError("The Koszul side is available for hypersurfaces (r = 1) only")

        def compute(current: Germ) -> int:
            two_term = self.koszul.cotangent_complex(current)
            complex_ = self.koszul.derived_exterior_power(two_term, current.n + 1)
            lengths = self.koszul.homology_lengths(complex_)
            self.logger.info(f"Homology lengths of the derived exterior power: {lengths}")
            return self.koszul.euler_characteristic(complex_, lengths)

        return self.with_precision_policy(g, compute)

    def koszul_check(self, g: Germ) -> KoszulCheckReport:
        """
        Duality of Kos^-(df) and Kos^wedge(df), d o d = 0, regularity of the partials
        over O_X and chi of the derived exterior power against mu.
        """
        if g.r != 1:
            raise DomainError("koszul-check applies to hypersurfaces (r = 1)")
        mu = self.milnor_number(g, with_koszul=False).mu

        def compute(current: Germ) -> KoszulCheckReport:
            two_term = self.koszul.cotangent_complex(current)
            contraction = self.koszul.kos_minus(two_term.v, two_term.ambient)
            wedge = self.koszul.kos_wedge(two_term.v, two_term.ambient)
            exterior = self.koszul.derived_exterior_power(two_term, current.n + 1)
            exterior_homology = self.koszul.homology_lengths(exterior)
            return KoszulCheckReport(
                duality=self.koszul.dualize(contraction) == wedge,
                differentials_ok=all(self.koszul.check_differentials(c) for c in (contraction, wedge, exterior)),
                regular_sequence=self.koszul.is_regular_sequence(two_term.v, two_term.ambient),
                partials_homology=self.koszul.homology_lengths(contraction),
                exterior_homology=exterior_homology,
                euler_characteristic=self.koszul.euler_characteristic(exterior, exterior_homology),
                mu=mu,
            )

        report = self.with_precision_policy(g, compute)
        if not report.passed:
            self.logger.warning(f"Koszul check failed: {report.to_dict()}")
        return report

    def milnor_number(self, g: Germ, with_koszul: bool = True) -> MilnorReport:
        """
        mu as the colength of the Jacobian ideal, with T^1, the top
        differentials, the Fitting ideal and (for r = 1) the Koszul side
        reported next to it.

        Raises:
            DomainError: the germ fails validation.
            NotFiniteLength: no certificate up to the degree cap.
        """
        diagnostics = self.validate(g)
        if not diagnostics.is_valid:
            raise DomainError(diagnostics.message)

        def compute(current: Germ) -> MilnorReport:
            module = self._jacobian_module(current)
            report = MilnorReport(
                mu=module.length,
                certificate=module.certificate,
                precision_used=current.precision,
                basis=module.basis,
                smooth=module.length == 0,
            )
            report.t1_length = self._t1_module(current).length
            report.omega_length = self.koszul.omega_top_length(current)
            report.fitting_length = self.local_algebra.colength(self.local_algebra.fitting_ideal(current)).length
            return report

        report = self.with_precision_policy(g, compute)
        report.warnings.extend(diagnostics.warnings)
        if with_koszul:
            if g.r == 1:
                report.mu_via_koszul = self.milnor_via_koszul(g)
            else:
                report.warnings.append("Koszul side skipped: complete intersections with r >= 2")
        sides = [report.t1_length, report.omega_length, report.fitting_length, report.mu_via_koszul]
        report.agreement = all(value == report.mu for value in sides if value is not None)
        if report.agreement:
            self.logger.info(f"mu = {report.mu} certified at c* = {report.certificate}, D = {report.precision_used[0]}")
        else:
            self.logger.warning(f"Milnor sides disagree: mu={report.mu}, sides={sides}")
        return report

    def is_ordinary_quadratic(self, g: Germ) -> bool:
        """The known quadratic case: mu == 1."""
        return self.milnor_number(g, with_koszul=False).mu == 1
