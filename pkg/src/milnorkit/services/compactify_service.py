"""
Finite-field side of the compactification argument: homogenized perturbation
families, Jacobian scans of their special fibers, seeded sampling of good
perturbations and determinantal point counts.
"""
from __future__ import annotations

import logging
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import replace
from itertools import product
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from numpy.random import SeedSequence, default_rng
from sympy import factorint, isprime
from tqdm import tqdm

from milnorkit.core.constants import (
    CODIM_DECIMALS,
    CONFIDENCE_Z,
    DEFAULT_ENUMERATION_CAP,
    DEFAULT_EXT_DEGREE,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_THREADS,
    DETERMINACY_FACTOR,
    LAMBDA_AUTO,
)
from milnorkit.core.exceptions import AllSamplesFailed, DomainError, SizeCapExceeded
from milnorkit.core.models import (
    DeterminantalCount,
    Germ,
    HomogenizedSystem,
    IncidenceVerdict,
    PerturbationFamily,
    SampleReport,
    ScanReport,
)
from milnorkit.services.milnor_service import MilnorService
from milnorkit.utils.finite_field import FiniteField, field, projective_points
from milnorkit.utils.monomials import Monomial, monomials_of_degree

Form = Tuple[Tuple[Monomial, int], ...]


def prime_power(q: int) -> Tuple[int, int]:
    """(p, e) with q = p^e."""
    factors = factorint(q)
    if len(factors) != 1:
        raise DomainError(f"q = {q} is not a prime power")
    (p, e), = factors.items()
    return int(p), int(e)


def _collect(terms: Iterable[Tuple[Monomial, int]], p: int) -> Form:
    acc: Dict[Monomial, int] = {}
    for exps, coeff in terms:
        acc[exps] = (acc.get(exps, 0) + coeff) % p
    return tuple(sorted((exps, c) for exps, c in acc.items() if c))


class CompactifyService:
    """Perturbation families over F_p and their special-fiber checks."""

    def __init__(self, milnor: Optional[MilnorService] = None, logger: Optional[logging.Logger] = None,
                 threads: int = DEFAULT_THREADS, progress: bool = False,
                 enumeration_cap: int = DEFAULT_ENUMERATION_CAP):
        self.logger = logger or logging.getLogger(__name__)
        self.milnor = milnor or MilnorService(logger=self.logger)
        self.threads = threads
        self.progress = progress
        self.enumeration_cap = enumeration_cap

    # ------------------------------------------------------------------
    # Families
    # ------------------------------------------------------------------
    @staticmethod
    def resolve_lambda(mu: int, requested=None) -> int:
        """lambda = max(3 mu, requested); 'auto' or None means 3 mu."""
        floor = DETERMINACY_FACTOR * mu
        if requested in (None, LAMBDA_AUTO):
            return max(floor, 1)
        return max(floor, int(requested))

    @staticmethod
    def perturbation_keys(n: int, r: int, lam: int) -> List[Tuple[int, Monomial]]:
        """Coordinates (i, alpha) of T: |alpha| in {lam + 1, lam + 2}."""
        return [(i, alpha) for i in range(r)
                for total in (lam + 1, lam + 2)
                for alpha in monomials_of_degree(n + r, total)]

    @staticmethod
    def family_from_germ(g: Germ, lam: int) -> PerturbationFamily:
        """Template family: the reduction of f truncated to degree <= lam, zero perturbation."""
        p = g.base.p
        fbar = tuple(
            _collect(((alpha, c) for alpha, c in fi.reduction().items() if sum(alpha) <= lam), p)
            for fi in g.f
        )
        return PerturbationFamily(p=p, n=g.n, r=g.r, fbar=fbar, lam=lam)

    @staticmethod
    def zero_template(p: int, n: int, r: int, lam: int) -> PerturbationFamily:
        return PerturbationFamily(p=p, n=n, r=r, fbar=tuple(() for _ in range(r)), lam=lam)

    def with_coefficients(self, fam: PerturbationFamily, values: Sequence[int]) -> PerturbationFamily:
        keys = self.perturbation_keys(fam.n, fam.r, fam.lam)
        coefficients = tuple((key, int(v) % fam.p) for key, v in zip(keys, values) if int(v) % fam.p)
        return replace(fam, coefficients=coefficients)

    def homogenize(self, fam: PerturbationFamily) -> HomogenizedSystem:
        """a~_i = t0^{lam+2} f_i(t/t0) + sum c_{i,alpha} t0^{lam+2-|alpha|} t^alpha."""
        top = fam.lam + 2
        pieces: List[List[Tuple[Monomial, int]]] = [
            [((top - sum(alpha),) + alpha, c) for alpha, c in fam.fbar[i]] for i in range(fam.r)
        ]
        for (i, alpha), c in fam.coefficients:
            pieces[i].append(((top - sum(alpha),) + tuple(alpha), c))
        forms = tuple(_collect(piece, fam.p) for piece in pieces)
        return HomogenizedSystem(p=fam.p, n=fam.n, r=fam.r, lam=fam.lam, forms=forms)

    @staticmethod
    def dehomogenize(system: HomogenizedSystem) -> Tuple[Dict[Monomial, int], ...]:
        """Chart t0 = 1 around y = (1:0..0)."""
        out = []
        for form in system.forms:
            acc: Dict[Monomial, int] = {}
            for exps, c in form:
                acc[exps[1:]] = (acc.get(exps[1:], 0) + c) % system.p
            out.append({alpha: c for alpha, c in acc.items() if c})
        return tuple(out)

    def lifted_germ(self, g: Germ, fam: PerturbationFamily) -> Germ:
        """f with terms of t-degree > lam replaced by the lifted perturbation."""
        literals = g.literals or tuple(
            tuple((c, a, alpha) for (a, alpha), c in fi.raw_terms.items()) for fi in g.f
        )
        lifted = [[term for term in eq if sum(term[2]) <= fam.lam] for eq in literals]
        for (i, alpha), c in fam.coefficients:
            lifted[i].append((c, 0, tuple(alpha)))
        degree_bound = max(g.degree_bound, fam.lam + 3)
        return Germ.from_literals(g.base, g.n, g.r, lifted, degree_bound, g.variables)

    # ------------------------------------------------------------------
    # Evaluation over GF(p^e)
    # ------------------------------------------------------------------
    @staticmethod
    def _evaluate(k: FiniteField, form: Form, point: Sequence[int]) -> int:
        total = 0
        for exps, c in form:
            value = k.scalar(c)
            for x, e in zip(point, exps):
                if e:
                    value = k.mul(value, k.power(x, e))
            total = k.add(total, value)
        return total

    @staticmethod
    def _partial(form: Form, index: int, p: int) -> Form:
        terms = []
        for exps, c in form:
            if exps[index]:
                lowered = exps[:index] + (exps[index] - 1,) + exps[index + 1:]
                terms.append((lowered, c * exps[index]))
        return _collect(terms, p)

    def _jacobian_rank(self, k: FiniteField, system: HomogenizedSystem, point: Sequence[int]) -> int:
        """Rank of the Jacobian in the affine chart where the leading coordinate of point is 1."""
        lead = next(i for i, x in enumerate(point) if x)
        rows = []
        for form in system.forms:
            rows.append([self._evaluate(k, self._partial(form, j, system.p), point)
                         for j in range(system.num_vars) if j != lead])
        return k.rank(rows)

    def _on_fiber(self, k: FiniteField, system: HomogenizedSystem, point: Sequence[int]) -> bool:
        return all(self._evaluate(k, form, point) == 0 for form in system.forms)

    # ------------------------------------------------------------------
    # Scans
    # ------------------------------------------------------------------
    def smoothness_scan(self, system: HomogenizedSystem, ext_degree_max: int = DEFAULT_EXT_DEGREE) -> ScanReport:
        """Points of Y(a) away from y where the Jacobian has rank < r, over GF(p^e), e <= ext_degree_max."""
        report = ScanReport(
            smooth=True,
            ext_degree_max=ext_degree_max,
            caveat=f"complete only over GF({system.p}^e) for e <= {ext_degree_max}",
        )
        y = (1,) + (0,) * (system.num_vars - 1)
        for e in range(1, ext_degree_max + 1):
            k = field(system.p, e)
            for point in projective_points(k, system.num_vars - 1):
                if point == y or (e > 1 and k.field_of_definition(point) < e):
                    continue
                report.points_checked += 1
                if not self._on_fiber(k, system, point):
                    continue
                report.points_on_y += 1
                if self._jacobian_rank(k, system, point) < system.r:
                    report.bad_points.append({"field": k.describe(), "point": list(point)})
        report.smooth = not report.bad_points
        return report

    def _draw(self, fam: PerturbationFamily, seed: int, index: int) -> PerturbationFamily:
        rng = default_rng(SeedSequence(entropy=seed, spawn_key=(index,)))
        count = len(self.perturbation_keys(fam.n, fam.r, fam.lam))
        return self.with_coefficients(fam, rng.integers(0, fam.p, size=count).tolist())

    def _sample(self, fam: PerturbationFamily, seed: int, index: int, ext_degree: int):
        drawn = self._draw(fam, seed, index)
        return index, drawn, self.smoothness_scan(self.homogenize(drawn), ext_degree)

    def sample_good(self, template: PerturbationFamily, seed: int = DEFAULT_SEED, samples: int = DEFAULT_SAMPLES,
                    ext_degree: int = DEFAULT_EXT_DEGREE, germ: Optional[Germ] = None) -> SampleReport:
        """
        Draw perturbations from per-index substreams of the seed and scan each one.

        Raises:
            AllSamplesFailed: no sample gave a fiber smooth away from y.
        """
        self.logger.info(f"Sampling {samples} perturbations over F_{template.p} (lambda={template.lam}, seed={seed})")
        with ThreadPoolExecutor(max_workers=self.threads) as pool:
            futures = pool.map(lambda i: self._sample(template, seed, i, ext_degree), range(samples))
            results = list(tqdm(futures, total=samples, desc="samples", disable=not self.progress))
        results.sort(key=lambda item: item[0])

        report = SampleReport(good_found=False, samples=samples, lam=template.lam)
        for index, drawn, scan in results:
            if scan.smooth:
                if report.first_good_sample is None:
                    report.first_good_sample = index
                    report.family = drawn
            else:
                report.failures += 1
                if not report.bad_points:
                    report.bad_points = [dict(entry, sample=index) for entry in scan.bad_points]
        report.good_found = report.first_good_sample is not None
        if not report.good_found:
            raise AllSamplesFailed(f"all {samples} samples are singular away from y",
                                   {"samples": samples, "failures": report.failures, "q": template.p})
        self.logger.info(f"First good sample {report.first_good_sample}; failures {report.failure_fraction}")

        if germ is not None:
            mu = self.milnor.milnor_number(germ, with_koszul=False).mu
            report.mu = self.milnor.milnor_number(self.lifted_germ(germ, report.family), with_koszul=False).mu
            report.mu_preserved = report.mu == mu
            if not report.mu_preserved:
                self.logger.warning(f"mu changed under the perturbation: {mu} -> {report.mu}")
        return report

    # ------------------------------------------------------------------
    # Determinantal counts
    # ------------------------------------------------------------------
    @staticmethod
    def rank_deficient_closed_form(rows: int, cols: int, q: int) -> int:
        """Number of rows x cols matrices over F_q of rank < min(rows, cols)."""
        total = 0
        for rank in range(min(rows, cols)):
            numerator = denominator = 1
            for i in range(rank):
                numerator *= (q ** rows - q ** i) * (q ** cols - q ** i)
                denominator *= q ** rank - q ** i
            total += numerator // denominator
        return total

    def determinantal_codim_count(self, n: int, r: int, q: int, seed: int = DEFAULT_SEED,
                                  samples: int = DEFAULT_SAMPLES, exact_only: bool = False) -> DeterminantalCount:
        """
        Count (n + r) x r matrices over F_q of rank < r and the observed codimension
        log_q(total / count); sampled with a confidence interval above the enumeration cap.

        Raises:
            SizeCapExceeded: exact_only and q^{(n+r) r} exceeds the cap.
        """
        p, e = prime_power(q)
        k = field(p, e)
        rows, cols = n + r, r
        total = q ** (rows * cols)
        closed = self.rank_deficient_closed_form(rows, cols, q)
        result = DeterminantalCount(rows=rows, cols=cols, q=q, total=total, count=0, closed_form=closed,
                                    theoretical_codim=n + 1)
        if total <= self.enumeration_cap:
            entries = product(range(q), repeat=rows * cols)
            for flat in tqdm(entries, total=total, desc="matrices", disable=not self.progress):
                matrix = [flat[i * cols:(i + 1) * cols] for i in range(rows)]
                if k.rank(matrix) < cols:
                    result.count += 1
            if result.count != closed:
                self.logger.error(f"Enumerated {result.count} rank-deficient matrices, closed form {closed}")
        elif exact_only:
            raise SizeCapExceeded(f"{total} matrices exceed the enumeration cap {self.enumeration_cap}")
        else:
            rng = default_rng(SeedSequence(entropy=seed))
            draws = rng.integers(0, q, size=(samples, rows, cols))
            hits = sum(1 for matrix in draws if k.rank(matrix.tolist()) < cols)
            share = hits / samples
            spread = CONFIDENCE_Z * math.sqrt(share * (1 - share) / samples)
            result.mode = "sampled"
            result.count = round(share * total)
            result.interval = (max(0, math.floor((share - spread) * total)), math.ceil((share + spread) * total))
        result.ratio = f"{result.count}/{total}"
        if result.count:
            result.observed_codim = f"{math.log(total / result.count, q):.{CODIM_DECIMALS}f}"
        else:
            result.observed_codim = "inf"
        return result

    # ------------------------------------------------------------------
    # Incidence fibers
    # ------------------------------------------------------------------
    @staticmethod
    def normalize_point(z: Sequence[int], p: int, num_vars: int) -> Tuple[int, ...]:
        """Scale z so its first nonzero coordinate is 1; reject 0 and y."""
        if len(z) != num_vars:
            raise DomainError(f"z must have {num_vars} coordinates, got {len(z)}")
        coords = [c % p for c in z]
        lead = next((i for i, x in enumerate(coords) if x), None)
        if lead is None:
            raise DomainError("z = 0 is not a projective point")
        inverse = pow(coords[lead], -1, p)
        point = tuple((c * inverse) % p for c in coords)
        if point == (1,) + (0,) * (num_vars - 1):
            raise DomainError("z = y is excluded: the incidence fiber is taken at points z != y")
        return point

    def chi_vanishing(self, fam: PerturbationFamily, z: Sequence[int]) -> bool:
        """First partials of the unperturbed forms g_i vanish at z (t0^2 divides every g_i)."""
        system = self.homogenize(replace(fam, coefficients=()))
        k = field(fam.p)
        return all(self._evaluate(k, self._partial(form, j, fam.p), z) == 0
                   for form in system.forms for j in range(system.num_vars))

    def incidence_fiber_dim_check(self, template: PerturbationFamily, z: Sequence[int]) -> IncidenceVerdict:
        """
        Enumerate a in T(F_p) with Y(a) through z and singular there; the count must be
        q^{dim T - r - (n+r) r} times the number of rank-deficient (n+r) x r matrices.

        Raises:
            SizeCapExceeded: T(F_p) is too large to enumerate.
        """
        p = template.p
        if not isprime(p):
            raise DomainError("incidence checks run over prime fields")
        point = self.normalize_point(z, p, template.num_vars + 1)
        keys = self.perturbation_keys(template.n, template.r, template.lam)
        dim_t = len(keys)
        if p ** dim_t > self.enumeration_cap:
            raise SizeCapExceeded(f"T(F_{p}) has {p ** dim_t} points, above the cap {self.enumeration_cap}")
        k = field(p)
        count = 0
        for values in tqdm(product(range(p), repeat=dim_t), total=p ** dim_t, desc="T(F_q)",
                           disable=not self.progress):
            system = self.homogenize(self.with_coefficients(template, values))
            if self._on_fiber(k, system, point) and self._jacobian_rank(k, system, point) < template.r:
                count += 1

        rows = template.num_vars
        det_count = self.rank_deficient_closed_form(rows, template.r, p)
        free = dim_t - template.r - rows * template.r
        verdict = IncidenceVerdict(
            passed=False,
            count=count,
            expected=p ** free * det_count if free >= 0 else 0,
            prediction=p ** (dim_t - template.n - template.r - 1) if dim_t > template.n + template.r else 1,
            dim_t=dim_t,
            z=point,
        )
        if free < 0:
            verdict.errors.append(f"dim T = {dim_t} is below the {template.r + rows * template.r} conditions at z")
        if count != verdict.expected:
            verdict.errors.append(f"counted {count} singular members through z, expected {verdict.expected}")
        if point[0] == 0:
            verdict.chi_vanishing = self.chi_vanishing(template, point)
            if not verdict.chi_vanishing:
                verdict.errors.append("unperturbed forms have a nonzero first partial at z")
        verdict.passed = not verdict.errors
        self.logger.info(f"Incidence fiber at z={point}: {count} (expected {verdict.expected})")
        return verdict
