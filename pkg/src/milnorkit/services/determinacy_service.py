"""
Finite determinacy: the 3*mu jet bound and the Newton coordinate change
t -> t + eps with g(t + eps) = 0 in R = ambient / (f), verified to a
finite order with a per-step ledger of residual and correction orders.
"""
from __future__ import annotations

import logging
from math import ceil, log2
from typing import List, Optional, Sequence

import numpy as np

from milnorkit.core.constants import (
    DEFAULT_TARGET_FACTOR,
    DETERMINACY_FACTOR,
    PROVENANCE_LEMMA,
    PROVENANCE_UNSUPPORTED,
)
from milnorkit.core.exceptions import DomainError, JetBoundViolated, LinearSolveFailed, PrecisionInsufficient, ShapeError
from milnorkit.core.models import DeterminacyRun, DeterminacyStep, EquisingularityReport, Germ, Vector
from milnorkit.core.series import TruncatedSeries
from milnorkit.services.local_algebra import LocalAlgebraService
from milnorkit.services.milnor_service import MilnorService
from milnorkit.utils.monomials import monomials_of_degree


class DeterminacyService:
    """Jet sufficiency checks and the quadratically convergent coordinate change."""

    def __init__(self, milnor: Optional[MilnorService] = None, logger: Optional[logging.Logger] = None):
        self.logger = logger or logging.getLogger(__name__)
        self.milnor = milnor or MilnorService(logger=self.logger)
        self.local_algebra: LocalAlgebraService = self.milnor.local_algebra

    # ------------------------------------------------------------------
    # Bounds
    # ------------------------------------------------------------------
    @staticmethod
    def determinacy_bound(mu: int) -> int:
        if mu < 1:
            raise DomainError("mu = 0: the germ is smooth and the jet bound is undefined")
        return DETERMINACY_FACTOR * mu

    @staticmethod
    def _cap(f: Germ, g: Sequence[TruncatedSeries]) -> int:
        bound = min([f.degree_bound] + [gi.degree_bound for gi in g])
        return min(bound - 1, f.base.pi_precision)

    @staticmethod
    def _order(vector: Sequence[TruncatedSeries]) -> int:
        return min(entry.t_order() for entry in vector)

    def check_star_inclusion(self, g: Germ, c: int, mu: Optional[int] = None) -> bool:
        """
        (m^{mu+c})^r inside f'((m^c)^{n+r}) + (f) R^r, decided by comparing the
        lengths of P^r / (N + m^{mu+c}) and P^r / (N + m^{mu+c+1}).

        Raises:
            PrecisionInsufficient: mu + c + 1 exceeds the working precision.
        """
        mu = self.milnor.t1_length(g) if mu is None else mu
        top = mu + c + 1
        cap = self._cap(g, g.f)
        if top > cap:
            raise PrecisionInsufficient(f"(*_c) needs order {top} but the working cap is {cap}",
                                        degree=top, precision=g.precision)
        jac = self.local_algebra.jacobian_matrix(g)
        columns = [tuple(jac[i][j] for i in range(g.r)) for j in range(g.num_vars)]
        relations = self.local_algebra.relation_vectors(g.f, g.r)
        floors = [c] * len(columns) + [0] * len(relations)
        vectors = columns + relations
        lower = self.local_algebra.quotient(vectors, g.r, top - 1, g.base, g.num_vars, floors).length()
        upper = self.local_algebra.quotient(vectors, g.r, top, g.base, g.num_vars, floors).length()
        return lower == upper

    # ------------------------------------------------------------------
    # Newton iteration
    # ------------------------------------------------------------------
    def _residual(self, f: Germ, g: Sequence[TruncatedSeries], eps: Vector) -> Vector:
        bound = min(gi.degree_bound for gi in g)
        images = [TruncatedSeries.variable(f.base, f.num_vars, bound, j) + eps[j] for j in range(f.num_vars)]
        return tuple(gi.substitute(images) for gi in g)

    def _residual_order(self, f: Germ, residual: Vector, cap: int) -> int:
        relations = self.local_algebra.relation_vectors(f.f, f.r)
        return self.local_algebra.order_in_quotient(residual, relations, f.r, cap)

    def _jacobian_at(self, f: Germ, g: Sequence[TruncatedSeries], eps: Vector) -> List[Vector]:
        images = [TruncatedSeries.variable(g[0].ring, f.num_vars, g[0].degree_bound, j) + eps[j]
                  for j in range(f.num_vars)]
        partials = [[gi.partial_derivative(j).substitute([x.truncate(gi.degree_bound - 1) for x in images])
                     for j in range(f.num_vars)] for gi in g]
        return [tuple(partials[i][j] for i in range(f.r)) for j in range(f.num_vars)]

    def newton_coordinate_change(self, f: Germ, g: Sequence[TruncatedSeries], target_order: Optional[int] = None,
                                 force: bool = False, mu: Optional[int] = None) -> DeterminacyRun:
        """
        Build eps with g(t + eps) in (f) + m^target_order.

        Args:
            f: Reference germ
            g: r series with g - f in m^{3 mu}
            target_order: Requested order (default 4 * 3 mu, capped by precision)
            force: Run even when the jet bound fails (UNSUPPORTED provenance)
            mu: Length of T^1 of f if already known

        Raises:
            JetBoundViolated: ord(g - f) < 3 mu and not forced.
            LinearSolveFailed: a correction could not be found at the needed order.
        """
        g = tuple(g)
        if len(g) != f.r or any(gi.num_vars != f.num_vars or gi.ring != f.base for gi in g):
            raise ShapeError("g must have r series over the same ambient ring as f")
        mu = self.milnor.t1_length(f) if mu is None else mu
        bound = self.determinacy_bound(mu)
        cap = self._cap(f, g)
        difference = tuple(gi - fi for gi, fi in zip(g, f.f))
        initial = min(self._order(difference), cap)
        provenance = PROVENANCE_LEMMA
        if initial < bound:
            if not force:
                raise JetBoundViolated(initial, bound)
            provenance = PROVENANCE_UNSUPPORTED
            self.logger.warning(f"Forced run with ord(g - f) = {initial} < 3*mu = {bound}; provenance UNSUPPORTED")

        target = DEFAULT_TARGET_FACTOR * bound if target_order is None else target_order
        if target > cap:
            self.logger.warning(f"Target order {target} clamped to the working cap {cap}")
            target = cap

        zero = TruncatedSeries.zero(f.base, f.num_vars, min(gi.degree_bound for gi in g))
        eps: Vector = tuple(zero for _ in range(f.num_vars))
        residual = self._residual(f, g, eps)
        order = self._residual_order(f, residual, cap)
        run = DeterminacyRun(mu=mu, bound=bound, epsilon=eps, target_order=target, initial_order=order,
                             provenance=provenance, precision_used=(min(gi.degree_bound for gi in g),
                                                                    f.base.pi_precision))
        max_steps = ceil(log2(max(target, 2) / mu)) + 3
        step = 0
        while order < target:
            if step >= max_steps:
                raise LinearSolveFailed(f"no convergence after {step} steps (order {order} < {target})")
            floor = max(order - mu, 1)
            columns = self._jacobian_at(f, g, eps)
            try:
                delta = self.local_algebra.solve(tuple(-x for x in residual), columns, f.f, floor, cap)
            except LinearSolveFailed as error:
                raise LinearSolveFailed(f"(*_c) failed at c = {floor} in step {step}: {error}") from error
            eps = tuple((e + d).truncate(zero.degree_bound) for e, d in zip(eps, delta))
            residual = self._residual(f, g, eps)
            new_order = self._residual_order(f, residual, cap)
            record = DeterminacyStep(
                i=step,
                ord_alpha=new_order,
                ord_eps=min(self._order(delta), cap),
                required_alpha=min((2 ** (step + 1) + 2) * mu, cap),
                required_eps=min((2 ** step + 1) * mu, cap),
            )
            run.steps.append(record)
            self.logger.info(f"Newton step {step}: ord(alpha)={new_order}, ord(eps)={record.ord_eps}")
            if new_order <= order:
                raise LinearSolveFailed(f"residual order did not increase in step {step}")
            order = new_order
            step += 1

        run.epsilon = eps
        run.verified_to = order
        if not run.ledger_ok:
            self.logger.warning("Newton ledger below the quadratic bounds")
        return run

    def run_for_germs(self, f: Germ, g: Germ, target_order: Optional[int] = None,
                      force: bool = False) -> DeterminacyRun:
        """newton_coordinate_change on two germ files, re-embedding once at higher precision if needed."""
        if (f.n, f.r) != (g.n, g.r) or f.base.model != g.base.model or f.base.p != g.base.p:
            raise ShapeError("Both germs must share n, r and the base ring model")
        mu = self.milnor.t1_length(f)
        target = DEFAULT_TARGET_FACTOR * self.determinacy_bound(mu) if target_order is None else target_order
        degree_bound = max(f.degree_bound, g.degree_bound)
        pi_precision = max(f.base.pi_precision, g.base.pi_precision)
        if min(degree_bound - 1, pi_precision) < target:
            degree_bound = max(2 * degree_bound, target + 1)
            pi_precision = max(pi_precision, target)
            self.logger.info(f"Re-embedding both germs at (D, N) = ({degree_bound}, {pi_precision})")
        f = f.with_precision(degree_bound, pi_precision)
        g = g.with_precision(degree_bound, pi_precision)
        return self.newton_coordinate_change(f, g.f, target, force, mu)

    # ------------------------------------------------------------------
    # Verification
    # ------------------------------------------------------------------
    def verify_equisingular(self, f: Germ, g: Sequence[TruncatedSeries], run: DeterminacyRun) -> EquisingularityReport:
        """Residual order, mu(g) == mu(f) and eps in m^2; each failure is a diagnostic."""
        g = tuple(g)
        report = EquisingularityReport(equisingular=False, provenance=run.provenance)
        residual = self._residual(f, g, run.epsilon)
        report.residual_order = self._residual_order(f, residual, self._cap(f, g))
        if report.residual_order < run.verified_to:
            report.diagnostics.append(f"residual order {report.residual_order} < verified {run.verified_to}")

        g_germ = Germ(f.base, f.n, f.r, g, min(gi.degree_bound for gi in g), f.variables)
        report.mu_f = run.mu
        report.mu_g = self.milnor.t1_length(g_germ)
        if report.mu_g != report.mu_f:
            report.diagnostics.append(f"mu(g) = {report.mu_g} differs from mu(f) = {report.mu_f}")

        report.tangent_to_identity = all(e.t_order() >= 2 for e in run.epsilon)
        if not report.tangent_to_identity:
            report.diagnostics.append("the substitution is not tangent to the identity")

        report.equisingular = not report.diagnostics
        if run.provenance == PROVENANCE_UNSUPPORTED:
            report.diagnostics.append("forced run outside the jet bound; not a lemma check")
        return report

    # ------------------------------------------------------------------
    # Random perturbations
    # ------------------------------------------------------------------
    @staticmethod
    def random_perturbation(f: Germ, order: int, rng: np.random.Generator, terms: int = 3) -> Vector:
        """f plus random monomial terms of t-order in [order, order + 2)."""
        out = []
        p = f.base.p
        for fi in f.f:
            extra = TruncatedSeries.zero(f.base, f.num_vars, fi.degree_bound)
            for _ in range(terms):
                total = int(rng.integers(order, order + 2))
                pi_exp = int(rng.integers(0, total + 1)) if f.base.is_eqchar else 0
                choices = monomials_of_degree(f.num_vars, total - pi_exp)
                alpha = choices[int(rng.integers(0, len(choices)))]
                coeff = int(rng.integers(1, p))
                extra = extra + TruncatedSeries.monomial(f.base, f.num_vars, fi.degree_bound, alpha, coeff, pi_exp)
            out.append(fi + extra)
        return tuple(out)
