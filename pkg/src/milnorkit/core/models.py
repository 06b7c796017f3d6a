"""
Data models for germs, modules, complexes and the reports built from them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Any, Dict, List, Optional, Tuple

from milnorkit.core.constants import (
    DEFAULT_ENUMERATION_CAP,
    DEFAULT_EXT_DEGREE,
    DEFAULT_LOG_FILE,
    DEFAULT_MAX_DEGREE_BOUND,
    DEFAULT_SAMPLES,
    DEFAULT_SEED,
    DEFAULT_THREADS,
    TAME,
)
from milnorkit.core.ring import BaseRing
from milnorkit.core.series import TruncatedSeries
from milnorkit.utils.monomials import Monomial

Vector = Tuple[TruncatedSeries, ...]
Matrix = Tuple[Tuple[TruncatedSeries, ...], ...]
TermTriple = Tuple[int, int, Monomial]


# ----------------------------------------------------------------------
# Configuration
# ----------------------------------------------------------------------
@dataclass
class AppConfig:
    """Persistent settings read from milnorkit.json."""
    log_file: str = DEFAULT_LOG_FILE
    degree_bound: Optional[int] = None
    max_degree_bound: int = DEFAULT_MAX_DEGREE_BOUND
    pi_precision: Optional[int] = None
    ext_degree: int = DEFAULT_EXT_DEGREE
    samples: int = DEFAULT_SAMPLES
    seed: int = DEFAULT_SEED
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    threads: int = DEFAULT_THREADS
    progress: bool = False


@dataclass
class JobConfig:
    """One CLI invocation: command, inputs and effective settings."""
    command: str
    inputs: list = None
    output: Optional[str] = None
    degree_bound: Optional[int] = None
    pi_precision: Optional[int] = None
    max_degree_bound: int = DEFAULT_MAX_DEGREE_BOUND
    seed: int = DEFAULT_SEED
    q: Optional[int] = None
    lam: Any = None
    samples: int = DEFAULT_SAMPLES
    ext_degree: int = DEFAULT_EXT_DEGREE
    target_order: Optional[int] = None
    force: bool = False
    threads: int = DEFAULT_THREADS
    enumeration_cap: int = DEFAULT_ENUMERATION_CAP
    n: Optional[int] = None
    r: Optional[int] = None
    z: Optional[List[int]] = None
    config_file: Optional[str] = None
    log_file: str = DEFAULT_LOG_FILE
    summary: bool = False
    progress: bool = False

    def __post_init__(self):
        if self.inputs is None:
            self.inputs = []

    def echo(self) -> Dict[str, Any]:
        """Settings echoed into reports (paths of the log/config excluded)."""
        return {
            "command": self.command,
            "inputs": list(self.inputs),
            "degree_bound": self.degree_bound,
            "pi_precision": self.pi_precision,
            "max_degree_bound": self.max_degree_bound,
            "seed": self.seed,
            "q": self.q,
            "lambda": self.lam,
            "samples": self.samples,
            "ext_degree": self.ext_degree,
            "target_order": self.target_order,
            "force": self.force,
            "threads": self.threads,
            "enumeration_cap": self.enumeration_cap,
            "n": self.n,
            "r": self.r,
            "z": self.z,
        }


# ----------------------------------------------------------------------
# Germs
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class Germ:
    """A complete-intersection germ V(f_1..f_r) at the origin of A^{n+r} over the base."""
    base: BaseRing
    n: int
    r: int
    f: Vector
    degree_bound: int
    variables: Tuple[str, ...] = ()
    literals: Tuple[Tuple[TermTriple, ...], ...] = ()

    @property
    def num_vars(self) -> int:
        return self.n + self.r

    @property
    def names(self) -> Tuple[str, ...]:
        return self.variables or tuple(f"t{i + 1}" for i in range(self.num_vars))

    @property
    def precision(self) -> Tuple[int, int]:
        return self.degree_bound, self.base.pi_precision

    def total_degree(self) -> int:
        if self.literals:
            return max((sum(alpha) for eq in self.literals for _, _, alpha in eq), default=0)
        return max((g.total_degree() for g in self.f), default=0)

    @classmethod
    def from_literals(cls, base: BaseRing, n: int, r: int, literals, degree_bound: int,
                      variables: Tuple[str, ...] = ()) -> "Germ":
        literals = tuple(tuple((int(c), int(pi), tuple(alpha)) for c, pi, alpha in eq) for eq in literals)
        f = tuple(
            TruncatedSeries.from_integer_terms(base, n + r, degree_bound, eq) for eq in literals
        )
        return cls(base=base, n=n, r=r, f=f, degree_bound=degree_bound,
                   variables=tuple(variables), literals=literals)

    def with_precision(self, degree_bound: int, pi_precision: Optional[int] = None) -> "Germ":
        """Rebuild the germ exactly at a new (D, N) from its literals."""
        base = self.base.with_precision(pi_precision or self.base.pi_precision)
        if self.literals:
            return Germ.from_literals(base, self.n, self.r, self.literals, degree_bound, self.variables)
        f = tuple(g.embed(base, degree_bound) for g in self.f)
        return Germ(base, self.n, self.r, f, degree_bound, self.variables, ())

    def describe(self) -> str:
        equations = ", ".join(g.to_string(self.names) for g in self.f)
        return f"({equations}) over {self.base.describe()}, D={self.degree_bound}"


@dataclass
class GermDiagnostics:
    """Result of germ validation: flags are diagnostics, errors block computation."""
    is_valid: bool
    flags: list = None
    errors: list = None
    warnings: list = None
    message: str = ""

    def __post_init__(self):
        if self.flags is None:
            self.flags = []
        if self.errors is None:
            self.errors = []
        if self.warnings is None:
            self.warnings = []


# ----------------------------------------------------------------------
# Local algebra
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class LocalIdeal:
    """Ideal of the truncated ambient ring generated by series."""
    ring: BaseRing
    num_vars: int
    degree_bound: int
    generators: Vector

    @classmethod
    def of(cls, generators, ring: Optional[BaseRing] = None, num_vars: Optional[int] = None,
           degree_bound: Optional[int] = None) -> "LocalIdeal":
        generators = tuple(generators)
        if generators:
            ring = ring or generators[0].ring
            num_vars = generators[0].num_vars if num_vars is None else num_vars
            degree_bound = degree_bound or min(g.degree_bound for g in generators)
        return cls(ring, num_vars, degree_bound, generators)

    @property
    def is_proper(self) -> bool:
        return all(g.constant_coefficient().valuation() > 0 for g in self.generators)

    @property
    def is_zero(self) -> bool:
        return all(g.is_zero for g in self.generators)


@dataclass
class FiniteLengthModule:
    """P^rank / (submodule) certified of finite length."""
    presentation: tuple
    rank: int
    length: int
    certificate: int
    basis: list = None
    precision: Tuple[int, int] = (0, 0)
    quotient: Any = field(default=None, repr=False, compare=False)

    def __post_init__(self):
        if self.basis is None:
            self.basis = []


# ----------------------------------------------------------------------
# Complexes
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class QuotientRing:
    """The ambient truncated ring modulo an ideal of relations."""
    ring: BaseRing
    num_vars: int
    degree_bound: int
    relations: Vector = ()

    def series(self, value: int = 0) -> TruncatedSeries:
        if value == 0:
            return TruncatedSeries.zero(self.ring, self.num_vars, self.degree_bound)
        return TruncatedSeries.constant(self.ring, self.num_vars, self.degree_bound, value)


@dataclass(frozen=True)
class FreeComplex:
    """
    Bounded cochain complex of finite free modules over a QuotientRing.

    differentials[j] is the matrix of d^j: C^j -> C^{j+1}, with
    ranks[j+1] rows and ranks[j] columns.
    """
    ambient: QuotientRing
    low: int
    high: int
    ranks: Dict[int, int]
    differentials: Dict[int, Matrix]
    homology_annihilator: Vector = ()

    @property
    def degrees(self) -> range:
        return range(self.low, self.high + 1)

    def rank(self, degree: int) -> int:
        return self.ranks.get(degree, 0)


@dataclass(frozen=True)
class TwoTermComplex:
    """C_v = [R -> R^r] with R in degree -1."""
    ambient: QuotientRing
    v: Vector


# ----------------------------------------------------------------------
# Milnor reports
# ----------------------------------------------------------------------
@dataclass
class MilnorReport:
    mu: int
    certificate: int
    mu_via_koszul: Optional[int] = None
    t1_length: Optional[int] = None
    omega_length: Optional[int] = None
    fitting_length: Optional[int] = None
    agreement: bool = True
    precision_used: Tuple[int, int] = (0, 0)
    basis: list = None
    smooth: bool = False
    warnings: list = None

    def __post_init__(self):
        if self.basis is None:
            self.basis = []
        if self.warnings is None:
            self.warnings = []

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mu": self.mu,
            "certificate": self.certificate,
            "mu_via_koszul": self.mu_via_koszul,
            "t1_length": self.t1_length,
            "omega_length": self.omega_length,
            "fitting_length": self.fitting_length,
            "agreement": self.agreement,
            "precision_used": list(self.precision_used),
            "basis": list(self.basis),
            "smooth": self.smooth,
            "warnings": list(self.warnings),
        }


@dataclass
class KoszulCheckReport:
    """Sign conventions and homology of the complexes attached to a hypersurface germ."""
    duality: bool
    differentials_ok: bool
    regular_sequence: bool
    partials_homology: Dict[int, int]
    exterior_homology: Dict[int, int]
    euler_characteristic: int
    mu: int

    @property
    def passed(self) -> bool:
        return (self.duality and self.differentials_ok and self.regular_sequence
                and self.euler_characteristic == self.mu)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "duality": self.duality,
            "differentials_ok": self.differentials_ok,
            "regular_sequence": self.regular_sequence,
            "partials_homology": {str(j): v for j, v in sorted(self.partials_homology.items())},
            "exterior_homology": {str(j): v for j, v in sorted(self.exterior_homology.items())},
            "euler_characteristic": self.euler_characteristic,
            "mu": self.mu,
            "passed": self.passed,
        }


# ----------------------------------------------------------------------
# Determinacy
# ----------------------------------------------------------------------
@dataclass
class DeterminacyStep:
    i: int
    ord_alpha: int
    ord_eps: int
    required_alpha: int
    required_eps: int

    @property
    def within_bounds(self) -> bool:
        return self.ord_alpha >= self.required_alpha and self.ord_eps >= self.required_eps

    def to_dict(self) -> Dict[str, Any]:
        return {
            "i": self.i,
            "ord_alpha": self.ord_alpha,
            "ord_eps": self.ord_eps,
            "required_alpha": self.required_alpha,
            "required_eps": self.required_eps,
        }


@dataclass
class DeterminacyRun:
    mu: int
    bound: int
    steps: list = None
    epsilon: Vector = ()
    verified_to: int = 0
    target_order: int = 0
    initial_order: int = 0
    provenance: str = ""
    precision_used: Tuple[int, int] = (0, 0)

    def __post_init__(self):
        if self.steps is None:
            self.steps = []

    @property
    def ledger_ok(self) -> bool:
        return all(step.within_bounds for step in self.steps)


@dataclass
class EquisingularityReport:
    equisingular: bool
    residual_order: int = 0
    mu_f: Optional[int] = None
    mu_g: Optional[int] = None
    tangent_to_identity: bool = False
    provenance: str = ""
    diagnostics: list = None

    def __post_init__(self):
        if self.diagnostics is None:
            self.diagnostics = []


# ----------------------------------------------------------------------
# Newton polygons (n = 0)
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class PolygonSegment:
    start: Tuple[int, int]
    end: Tuple[int, int]

    @property
    def length(self) -> int:
        return self.end[0] - self.start[0]

    @property
    def rise(self) -> int:
        return self.start[1] - self.end[1]

    def slope_text(self) -> str:
        value = Fraction(self.rise, self.length)
        return f"{value.numerator}/{value.denominator}"

    @property
    def denominator(self) -> int:
        return self.length // gcd(self.rise, self.length)


@dataclass
class NewtonPolygon:
    segments: list = None
    source: list = None
    t_factor: int = 0
    weierstrass_degree: int = 0

    def __post_init__(self):
        if self.segments is None:
            self.segments = []
        if self.source is None:
            self.source = []

    @property
    def positive_length(self) -> int:
        return sum(s.length for s in self.segments if s.rise > 0)


@dataclass
class SegmentTameness:
    slope: str
    length: int
    denominator: int
    coprime_to_p: bool
    residual_separable: bool
    residual: list = None


@dataclass
class TamenessCertificate:
    status: str
    segments: list = None
    t_factor: int = 0
    reasons: list = None

    def __post_init__(self):
        if self.segments is None:
            self.segments = []
        if self.reasons is None:
            self.reasons = []

    @property
    def is_tame(self) -> bool:
        return self.status == TAME


@dataclass
class VanishingReport:
    mu: Optional[int]
    dim_phi0: Optional[int]
    swan: Optional[int]
    tame: bool
    tameness_status: str
    verified: Optional[bool]
    skipped_reason: Optional[str] = None
    slopes: list = None

    def __post_init__(self):
        if self.slopes is None:
            self.slopes = []

    def to_dict(self) -> Dict[str, Any]:
        return {
            "mu": self.mu,
            "dim_phi0": self.dim_phi0,
            "swan": self.swan,
            "tame": self.tame,
            "tameness_status": self.tameness_status,
            "verified": self.verified,
            "skipped_reason": self.skipped_reason,
            "slopes": list(self.slopes),
        }


# ----------------------------------------------------------------------
# Compactification over finite fields
# ----------------------------------------------------------------------
@dataclass(frozen=True)
class PerturbationFamily:
    """
    The reduced germ f-bar over F_p together with perturbation coefficients
    c[(i, alpha)] for |alpha| in {lam + 1, lam + 2}.
    """
    p: int
    n: int
    r: int
    fbar: Tuple[Tuple[Tuple[Monomial, int], ...], ...]
    lam: int
    coefficients: Tuple[Tuple[Tuple[int, Monomial], int], ...] = ()

    @property
    def num_vars(self) -> int:
        return self.n + self.r


@dataclass(frozen=True)
class HomogenizedSystem:
    """Forms of degree lam + 2 in t_0..t_{n+r}, each a tuple of (exponents, coefficient)."""
    p: int
    n: int
    r: int
    lam: int
    forms: Tuple[Tuple[Tuple[Monomial, int], ...], ...]

    @property
    def num_vars(self) -> int:
        return self.n + self.r + 1


@dataclass
class ScanReport:
    smooth: bool
    bad_points: list = None
    points_checked: int = 0
    points_on_y: int = 0
    ext_degree_max: int = 1
    caveat: str = ""

    def __post_init__(self):
        if self.bad_points is None:
            self.bad_points = []


@dataclass
class SampleReport:
    good_found: bool
    first_good_sample: Optional[int] = None
    failures: int = 0
    samples: int = 0
    bad_points: list = None
    mu_preserved: Optional[bool] = None
    mu: Optional[int] = None
    lam: int = 0
    family: Optional[PerturbationFamily] = None

    def __post_init__(self):
        if self.bad_points is None:
            self.bad_points = []

    @property
    def failure_fraction(self) -> str:
        return f"{self.failures}/{self.samples}"


@dataclass
class DeterminantalCount:
    rows: int
    cols: int
    q: int
    total: int
    count: int
    closed_form: int
    mode: str = "exact"
    observed_codim: str = ""
    theoretical_codim: int = 0
    ratio: str = ""
    interval: Optional[Tuple[int, int]] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rows": self.rows,
            "cols": self.cols,
            "q": self.q,
            "total": self.total,
            "count": self.count,
            "closed_form": self.closed_form,
            "mode": self.mode,
            "observed_codim": self.observed_codim,
            "theoretical_codim": self.theoretical_codim,
            "ratio": self.ratio,
            "interval": list(self.interval) if self.interval else None,
        }


@dataclass
class IncidenceVerdict:
    passed: bool
    count: int
    expected: int
    prediction: int
    dim_t: int
    chi_vanishing: Optional[bool] = None
    z: tuple = ()
    errors: list = None

    def __post_init__(self):
        if self.errors is None:
            self.errors = []


# ----------------------------------------------------------------------
# Self-check
# ----------------------------------------------------------------------
@dataclass
class CheckResult:
    name: str
    expected: str
    observed: str
    passed: bool
    module: str = ""
