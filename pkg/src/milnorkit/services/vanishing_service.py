"""
The n = 0 tame case: Newton polygons of one-variable germs, tameness
certificates and the comparison of mu with the specializing-root count.
"""
from __future__ import annotations

import logging
from math import gcd
from typing import Dict, List, Optional, Tuple, Union

from sympy.polys.domains import ZZ
from sympy.polys.galoistools import gf_diff, gf_gcd, gf_strip

from milnorkit.core.constants import TAME, UNDETERMINED, WILD
from milnorkit.core.exceptions import DomainError, NotFiniteLength, PrecisionInsufficient
from milnorkit.core.models import (
    Germ,
    NewtonPolygon,
    PolygonSegment,
    SegmentTameness,
    TamenessCertificate,
    VanishingReport,
)
from milnorkit.core.ring import p_valuation
from milnorkit.core.series import TruncatedSeries
from milnorkit.services.milnor_service import MilnorService

OneVariable = Union[Germ, TruncatedSeries]
# j -> (valuation, residue of the unit part)
Coefficients = Dict[int, Tuple[int, int]]


def lower_hull(points: List[Tuple[int, int]]) -> List[Tuple[int, int]]:
    """Lower convex hull of points sorted by abscissa (monotone chain)."""
    hull: List[Tuple[int, int]] = []
    for point in sorted(points):
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            if (x2 - x1) * (point[1] - y1) - (y2 - y1) * (point[0] - x1) <= 0:
                hull.pop()
            else:
                break
        hull.append(point)
    return hull


class VanishingService:
    """Newton polygon side of the n = 0 comparison."""

    def __init__(self, milnor: Optional[MilnorService] = None, logger: Optional[logging.Logger] = None):
        self.logger = logger or logging.getLogger(__name__)
        self.milnor = milnor or MilnorService(logger=self.logger)

    # ------------------------------------------------------------------
    # Coefficients
    # ------------------------------------------------------------------
    @staticmethod
    def _series_of(f: OneVariable) -> TruncatedSeries:
        series = f.f[0] if isinstance(f, Germ) else f
        if series.num_vars != 1:
            raise DomainError("Newton polygons are taken of one-variable germs (n = 0, r = 1)")
        return series

    def coefficients(self, f: OneVariable) -> Tuple[Coefficients, bool, int]:
        """
        Valuation and unit residue of every nonzero coefficient c_j.

        Returns:
            (coefficients, exact, p); exact is True when read from integer literals
        """
        series = self._series_of(f)
        ring = series.ring
        p = ring.p
        out: Coefficients = {}
        if isinstance(f, Germ) and f.literals:
            grouped: Dict[int, Dict[int, int]] = {}
            for coeff, pi_exp, alpha in f.literals[0]:
                bucket = grouped.setdefault(alpha[0], {})
                bucket[pi_exp] = bucket.get(pi_exp, 0) + coeff
            for j, by_power in grouped.items():
                if ring.is_eqchar:
                    live = sorted(a for a, c in by_power.items() if c % p)
                    if live:
                        out[j] = (live[0], by_power[live[0]] % p)
                else:
                    value = sum(c * p ** a for a, c in by_power.items())
                    if value:
                        v = p_valuation(value, p)
                        out[j] = (v, (value // p ** v) % p)
            return out, True, p
        for (a, alpha), coeff in series.raw_terms.items():
            j = alpha[0]
            if ring.is_eqchar:
                if j not in out or a < out[j][0]:
                    out[j] = (a, coeff % p)
            else:
                v = ring.coeff_valuation(coeff)
                out[j] = (v, (coeff // p ** v) % p)
        return out, False, p

    # ------------------------------------------------------------------
    # Polygon
    # ------------------------------------------------------------------
    def newton_polygon(self, f: OneVariable) -> NewtonPolygon:
        """
        Lower hull of {(j, v(c_j))} between the t-factor and the Weierstrass degree.

        Raises:
            DomainError: f is zero modulo the uniformizer or f(0) is a unit.
            PrecisionInsufficient: a vanishing low coefficient cannot be resolved.
        """
        coefficients, exact, _ = self.coefficients(f)
        if not coefficients:
            raise DomainError("the zero series has no Newton polygon")
        support = sorted((j, v) for j, (v, _) in coefficients.items())
        t_factor = support[0][0]
        units = [j for j, (v, _) in coefficients.items() if v == 0]
        if not units:
            raise PrecisionInsufficient("f is zero modulo the uniformizer at this precision")
        degree = min(units)
        if degree == 0:
            raise DomainError("f(0) is a unit: the origin is not on the special fiber")
        if t_factor > 0 and not exact:
            raise PrecisionInsufficient("a vanishing constant coefficient may hide a term beyond the precision")
        hull = lower_hull([(j, v) for j, v in support if t_factor <= j <= degree])
        segments = [PolygonSegment(start, end) for start, end in zip(hull, hull[1:])]
        return NewtonPolygon(segments=segments, source=[list(point) for point in support],
                             t_factor=t_factor, weierstrass_degree=degree)

    def weierstrass_degree(self, f: OneVariable) -> int:
        """Order of the reduction of f: the number of roots specializing to the origin."""
        return self.newton_polygon(f).weierstrass_degree

    def dim_phi0(self, f: OneVariable, polygon: Optional[NewtonPolygon] = None) -> int:
        """(number of specializing roots) - 1, counting the t-factor roots at 0."""
        polygon = polygon or self.newton_polygon(f)
        return polygon.positive_length + polygon.t_factor - 1

    # ------------------------------------------------------------------
    # Tameness
    # ------------------------------------------------------------------
    @staticmethod
    def residual_polynomial(segment: PolygonSegment, coefficients: Coefficients) -> List[int]:
        """Coefficients (low degree first) over F_p of the residual polynomial of a segment."""
        steps = gcd(segment.rise, segment.length)
        run, drop = segment.length // steps, segment.rise // steps
        j0, v0 = segment.start
        out = []
        for i in range(steps + 1):
            entry = coefficients.get(j0 + run * i)
            on_segment = entry is not None and entry[0] == v0 - drop * i
            out.append(entry[1] if on_segment else 0)
        return out

    def tameness(self, f: OneVariable, polygon: Optional[NewtonPolygon] = None) -> TamenessCertificate:
        """Per-segment denominators prime to p and separable residual polynomials."""
        polygon = polygon or self.newton_polygon(f)
        coefficients, _, p = self.coefficients(f)
        certificate = TamenessCertificate(status=TAME, t_factor=polygon.t_factor)
        wild = undetermined = False
        for segment in polygon.segments:
            if segment.rise <= 0:
                continue
            residual = self.residual_polynomial(segment, coefficients)
            dense = gf_strip([c % p for c in reversed(residual)])
            derivative = gf_diff(dense, p, ZZ)
            separable = bool(derivative) and len(gf_gcd(dense, derivative, p, ZZ)) == 1
            entry = SegmentTameness(
                slope=segment.slope_text(),
                length=segment.length,
                denominator=segment.denominator,
                coprime_to_p=segment.denominator % p != 0,
                residual_separable=separable,
                residual=residual,
            )
            certificate.segments.append(entry)
            if not entry.coprime_to_p:
                wild = True
                certificate.reasons.append(f"slope {entry.slope}: denominator {entry.denominator} divisible by p={p}")
            if not separable:
                undetermined = True
                certificate.reasons.append(f"slope {entry.slope}: residual polynomial is not separable")
        if polygon.t_factor > 1:
            undetermined = True
            certificate.reasons.append(f"t-factor t^{polygon.t_factor} is a multiple root at 0")
        certificate.status = WILD if wild else (UNDETERMINED if undetermined else TAME)
        return certificate

    # ------------------------------------------------------------------
    # Verification
    # ------------------------------------------------------------------
    @staticmethod
    def is_regular(g: Germ) -> bool:
        """f not in m^2 for m = (pi, t)."""
        return g.f[0].t_order() == 1

    def verify_deligne_milnor_n0(self, g: Germ) -> VanishingReport:
        """
        Compare mu with dim Phi^0 for a tame regular n = 0 hypersurface germ;
        other germs are reported with the reason they were skipped.
        """
        if g.n != 0 or g.r != 1:
            raise DomainError("the root-count comparison applies to n = 0, r = 1 germs")
        polygon = self.newton_polygon(g)
        certificate = self.tameness(g, polygon)
        dim = self.dim_phi0(g, polygon)
        report = VanishingReport(
            mu=None,
            dim_phi0=dim,
            swan=0 if certificate.is_tame else None,
            tame=certificate.is_tame,
            tameness_status=certificate.status,
            verified=None,
            slopes=[{"slope": s.slope, "length": s.length, "denominator": s.denominator,
                     "coprime_to_p": s.coprime_to_p, "residual_separable": s.residual_separable}
                    for s in certificate.segments],
        )
        if not certificate.is_tame:
            report.skipped_reason = "; ".join(certificate.reasons) or certificate.status
            self.logger.warning(f"Skipping verification: {report.skipped_reason}")
            return report
        if not self.is_regular(g):
            report.skipped_reason = "the total space is not regular at the origin (f in m^2)"
            self.logger.warning(f"Skipping verification: {report.skipped_reason}")
            return report
        try:
            report.mu = self.milnor.milnor_number(g, with_koszul=False).mu
        except NotFiniteLength as error:
            report.skipped_reason = f"mu not certified: {error}"
            return report
        report.verified = report.mu == dim
        self.logger.info(f"n = 0 comparison: mu = {report.mu}, dim Phi^0 = {dim}, verified = {report.verified}")
        return report
