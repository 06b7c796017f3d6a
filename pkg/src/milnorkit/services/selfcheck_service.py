"""
Built-in corpus of hand-derived values, run end to end through the services.
"""
from __future__ import annotations

import logging
from typing import Callable, List, Optional, Tuple

import numpy as np
import pandas as pd

from milnorkit.core.constants import EQCHAR, MIXEDCHAR
from milnorkit.core.exceptions import MilnorkitError
from milnorkit.core.models import CheckResult, QuotientRing
from milnorkit.core.ring import BaseRing
from milnorkit.core.series import TruncatedSeries
from milnorkit.services.compactify_service import CompactifyService
from milnorkit.services.determinacy_service import DeterminacyService
from milnorkit.services.milnor_service import MilnorService
from milnorkit.services.vanishing_service import VanishingService
from milnorkit.utils.serialization import germ_from_expressions

Check = Tuple[str, str, str, Callable[[], str]]


class SelfCheckService:
    """Runs every corpus entry and tabulates expected against observed."""

    FAMILY_PRIME = 11

    def __init__(self, milnor: Optional[MilnorService] = None, logger: Optional[logging.Logger] = None):
        self.logger = logger or logging.getLogger(__name__)
        self.milnor = milnor or MilnorService(logger=self.logger)
        self.koszul = self.milnor.koszul
        self.determinacy = DeterminacyService(self.milnor, self.logger)
        self.vanishing = VanishingService(self.milnor, self.logger)
        self.compactify = CompactifyService(self.milnor, self.logger)

    # ------------------------------------------------------------------
    # Corpus
    # ------------------------------------------------------------------
    @staticmethod
    def _germ(expressions, variables, p: int, model: str = EQCHAR, precision: int = 12):
        return germ_from_expressions(expressions, variables, BaseRing(model, p, precision))

    def _mu(self, expressions, variables, p: int, model: str = EQCHAR) -> str:
        return str(self.milnor.milnor_number(self._germ(expressions, variables, p, model)).mu)

    def _koszul_minus_plane(self) -> str:
        base = BaseRing(EQCHAR, 5, 8)
        ambient = QuotientRing(base, 2, 8, (TruncatedSeries.constant(base, 2, 8, 1, 1),))
        u = [TruncatedSeries.variable(base, 2, 8, i) for i in range(2)]
        return str(self.koszul.homology_lengths(self.koszul.kos_minus(u, ambient)))

    def _koszul_wedge_line(self) -> str:
        base = BaseRing(EQCHAR, 5, 8)
        t = TruncatedSeries.variable(base, 1, 8, 0)
        pi = TruncatedSeries.constant(base, 1, 8, 1, 1)
        ambient = QuotientRing(base, 1, 8, (t * t - pi,))
        return str(self.koszul.homology_lengths(self.koszul.kos_wedge([t.scale(2)], ambient)))

    def _cusp_koszul(self) -> str:
        report = self.milnor.koszul_check(self._germ(["y**2 - x**3 - pi"], ["x", "y"], 7))
        return f"duality={report.duality}, chi={report.euler_characteristic}"

    def _cusp_determinacy(self) -> str:
        f = self._germ(["y**2 - x**3 - pi"], ["x", "y"], 7)
        g = self._germ(["y**2 - x**3 - pi + x**6 + 3*x**3*y**4"], ["x", "y"], 7)
        run = self.determinacy.run_for_germs(f, g, target_order=12)
        f_big = f.with_precision(*run.precision_used)
        g_big = g.with_precision(*run.precision_used)
        report = self.determinacy.verify_equisingular(f_big, g_big.f, run)
        return f"equisingular={report.equisingular}, ledger={run.ledger_ok}"

    def _dm0(self, expression: str, p: int) -> str:
        report = self.vanishing.verify_deligne_milnor_n0(self._germ([expression], ["t"], p))
        return f"mu={report.mu}, dim_phi0={report.dim_phi0}, verified={report.verified}"

    def _codim(self, n: int, r: int, q: int) -> str:
        return str(self.compactify.determinantal_codim_count(n, r, q).count)

    def _incidence(self) -> str:
        template = self.compactify.zero_template(3, 0, 1, 1)
        verdict = self.compactify.incidence_fiber_dim_check(template, (0, 1))
        return f"count={verdict.count}, expected={verdict.expected}"

    def _homogenize_square(self) -> str:
        fam = self.compactify.family_from_germ(self._germ(["t**2 - pi"], ["t"], 5), 3)
        return str(self.compactify.homogenize(fam).forms)

    def _zero_perturbation_scan(self) -> str:
        fam = self.compactify.family_from_germ(self._germ(["t**2 - pi"], ["t"], 5), 3)
        return str(self.compactify.smoothness_scan(self.compactify.homogenize(fam), 1).smooth)

    def _sampler(self) -> str:
        germ = self._germ(["t**2 - pi"], ["t"], 7)
        fam = self.compactify.family_from_germ(germ, 3)
        report = self.compactify.sample_good(fam, seed=42, samples=50, ext_degree=2, germ=germ)
        return f"good={report.good_found}, mu_preserved={report.mu_preserved}"

    def corpus(self) -> List[Check]:
        checks: List[Check] = [
            ("milnor", "cusp y^2 - x^3 - pi, p=7", "2", lambda: self._mu(["y**2 - x**3 - pi"], ["x", "y"], 7)),
            ("milnor", "t^2 - 5 over Z/5^k", "1", lambda: self._mu(["t**2 - 5"], ["t"], 5, MIXEDCHAR)),
            ("milnor", "(x^2 - pi, y^2 - pi), p=5", "4", lambda: self._mu(["x**2 - pi", "y**2 - pi"], ["x", "y"], 5)),
            ("milnor", "x^3 + y^3 + pi, p=7", "4", lambda: self._mu(["x**3 + y**3 + pi"], ["x", "y"], 7)),
            ("koszul", "Kos-(t1, t2) over P/(pi)", "{-2: 0, -1: 0, 0: 1}", self._koszul_minus_plane),
            ("koszul", "Kos^(2t) over P/(t^2 - pi)", "{0: 0, 1: 1}", self._koszul_wedge_line),
            ("koszul", "duality and chi on the cusp", "duality=True, chi=2", self._cusp_koszul),
            ("determinacy", "cusp plus terms of order 6", "equisingular=True, ledger=True", self._cusp_determinacy),
            ("vanishing-n0", "t^4 - pi, p=5", "mu=3, dim_phi0=3, verified=True", lambda: self._dm0("t**4 - pi", 5)),
            ("vanishing-n0", "t^2 - pi, p=7", "mu=1, dim_phi0=1, verified=True", lambda: self._dm0("t**2 - pi", 7)),
            ("vanishing-n0", "t^5 - pi, p=5 (wild)", "mu=None, dim_phi0=4, verified=None",
             lambda: self._dm0("t**5 - pi", 5)),
            ("vanishing-n0", "dim Phi0 of (t^2 - pi)(t - pi)", "2",
             lambda: str(self.vanishing.dim_phi0(self._germ(["(t**2 - pi)*(t - pi)"], ["t"], 7)))),
            ("compactify", "singular 2x2 over F_3", "33", lambda: self._codim(0, 2, 3)),
            ("compactify", "rank-deficient 3x2 over F_2", "22", lambda: self._codim(1, 2, 2)),
            ("compactify", "zero 2x1 over F_5", "1", lambda: self._codim(1, 1, 5)),
            ("compactify", "incidence n=0 r=1 lambda=1 q=3 z=(0:1)", "count=1, expected=1", self._incidence),
            ("compactify", "homogenize t^2 at lambda=3", "((((3, 2), 1),),)", self._homogenize_square),
            ("compactify", "zero perturbation of t^2 is singular", "False", self._zero_perturbation_scan),
            ("compactify", "sampler on t^2, q=7, seed 42", "good=True, mu_preserved=True", self._sampler),
        ]
        for a in range(2, 9):
            checks.append(("milnor", f"t^{a} - pi, p={self.FAMILY_PRIME}", str(a - 1),
                           lambda a=a: self._mu([f"t**{a} - pi"], ["t"], self.FAMILY_PRIME)))
        return checks

    # ------------------------------------------------------------------
    # Running
    # ------------------------------------------------------------------
    def run(self) -> List[CheckResult]:
        results = []
        for module, name, expected, check in self.corpus():
            try:
                observed = check()
            except MilnorkitError as error:
                observed = f"error: {error}"
            passed = observed == expected
            if not passed:
                self.logger.error(f"Self-check '{name}' failed: expected {expected}, observed {observed}")
            results.append(CheckResult(name=name, expected=expected, observed=observed, passed=passed, module=module))
        self.logger.info(f"Self-check: {sum(r.passed for r in results)}/{len(results)} passed")
        return results

    def family_table(self, degrees=range(2, 9)) -> pd.DataFrame:
        """(a, mu, dim Phi0) for t^a - pi over the family prime."""
        rows = []
        for a in degrees:
            germ = self._germ([f"t**{a} - pi"], ["t"], self.FAMILY_PRIME)
            rows.append({
                "a": a,
                "mu": self.milnor.milnor_number(germ, with_koszul=False).mu,
                "dim_phi0": self.vanishing.dim_phi0(germ),
            })
        table = pd.DataFrame(rows, columns=["a", "mu", "dim_phi0"])
        table["agree"] = np.equal(table["mu"], table["dim_phi0"])
        return table

    @staticmethod
    def to_frame(results: List[CheckResult]) -> pd.DataFrame:
        return pd.DataFrame(
            [{"module": r.module, "check": r.name, "expected": r.expected, "observed": r.observed,
              "status": "PASS" if r.passed else "FAIL"} for r in results],
            columns=["module", "check", "expected", "observed", "status"],
        )
