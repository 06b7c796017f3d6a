"""
milnorkit - Command Line Entry Point

Exact Milnor numbers of complete-intersection germs over truncated discrete
valuation rings, with Koszul, determinacy, n = 0 vanishing-cycle and
finite-field compactification checks.
"""
from __future__ import annotations

import argparse
import logging
import sys
from typing import Any, Dict, List, Optional, Tuple

from milnorkit import __version__
from milnorkit.core.constants import (
    COMMANDS,
    EXIT_INPUT_ERROR,
    EXIT_OK,
    EXIT_VERIFICATION_FAILED,
    LAMBDA_AUTO,
    PROVENANCE_COMPUTED,
    PROVENANCE_ORACLE,
    PROVENANCE_SKIPPED,
)
from milnorkit.core.exceptions import AllSamplesFailed, MilnorkitError
from milnorkit.core.models import JobConfig
from milnorkit.services import (
    CompactifyService,
    ConfigManager,
    DeterminacyService,
    MilnorService,
    ReportService,
    SelfCheckService,
    VanishingService,
)
from milnorkit.utils.serialization import load_germ, parse_point, series_to_literal

Outcome = Tuple[Dict[str, Any], Dict[str, Any], Dict[str, str], bool]


def _lambda_arg(text: str):
    if text == LAMBDA_AUTO:
        return text
    try:
        return int(text)
    except ValueError as error:
        raise argparse.ArgumentTypeError("lambda must be 'auto' or an integer") from error


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="milnorkit", description=__doc__.strip().splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("command", choices=COMMANDS)
    parser.add_argument("--input", dest="inputs", action="append", default=None,
                        help="germ JSON file (determinacy takes f then g)")
    parser.add_argument("--output", help="write the JSON report here instead of stdout")
    parser.add_argument("--degree-bound", type=int, help="initial truncation degree D")
    parser.add_argument("--pi-precision", type=int, help="uniformizer precision N")
    parser.add_argument("--max-degree-bound", type=int, help="cap for precision doubling")
    parser.add_argument("--seed", type=int)
    parser.add_argument("--q", type=int, help="field size for compactify, codim and incidence")
    parser.add_argument("--lambda", dest="lam", type=_lambda_arg, help="'auto' (3 mu) or an integer")
    parser.add_argument("--samples", type=int)
    parser.add_argument("--ext-degree", type=int, help="largest extension degree scanned")
    parser.add_argument("--target-order", type=int)
    parser.add_argument("--force", action="store_true", default=None,
                        help="run determinacy outside the jet bound (UNSUPPORTED provenance)")
    parser.add_argument("--n", type=int)
    parser.add_argument("--r", type=int)
    parser.add_argument("--z", type=parse_point, help="projective point such as 0:1")
    parser.add_argument("--enumeration-cap", type=int)
    parser.add_argument("--threads", type=int)
    parser.add_argument("--progress", action="store_true", default=None)
    parser.add_argument("--summary", action="store_true", default=None,
                        help="print a plain-text summary to stderr")
    parser.add_argument("--config", dest="config_file", help="settings file (default milnorkit.json)")
    parser.add_argument("--log-file")
    return parser


def _setup_logging(log_file: str) -> logging.Logger:
    """Setup logging configuration."""
    logging.basicConfig(
        level=logging.INFO,
        format='%(asctime)s - %(levelname)s - %(message)s',
        handlers=[
            logging.FileHandler(log_file),
            logging.StreamHandler()
        ],
        force=True,
    )
    return logging.getLogger("milnorkit")


class MilnorkitApp:
    """Dispatches one job to the services and turns the outcome into a report."""

    def __init__(self, job: JobConfig, logger: Optional[logging.Logger] = None):
        self.job = job
        self.logger = logger or logging.getLogger("milnorkit")
        self.milnor_service = MilnorService(logger=self.logger, max_degree_bound=job.max_degree_bound)
        self.reports = ReportService(__version__, self.logger)

    def _germ(self, index: int = 0):
        return load_germ(self.job.inputs[index], self.job.degree_bound, self.job.pi_precision)

    @staticmethod
    def _precision(germ) -> Dict[str, Any]:
        return {"degree_bound": germ.degree_bound, "pi_precision": germ.base.pi_precision}

    # ------------------------------------------------------------------
    # Commands
    # ------------------------------------------------------------------
    def milnor(self) -> Outcome:
        germ = self._germ()
        diagnostics = self.milnor_service.validate(germ)
        report = self.milnor_service.milnor_number(germ)
        result = report.to_dict()
        result["germ"] = germ.describe()
        result["flags"] = list(diagnostics.flags)
        provenance = {"mu": PROVENANCE_COMPUTED,
                      "mu_via_koszul": PROVENANCE_COMPUTED if report.mu_via_koszul is not None else PROVENANCE_SKIPPED}
        return result, self._precision(germ), provenance, report.agreement

    def koszul_check(self) -> Outcome:
        germ = self._germ()
        report = self.milnor_service.koszul_check(germ)
        return report.to_dict(), self._precision(germ), {"koszul": PROVENANCE_COMPUTED}, report.passed

    def determinacy(self) -> Outcome:
        service = DeterminacyService(self.milnor_service, self.logger)
        f, g = self._germ(0), self._germ(1)
        run = service.run_for_germs(f, g, self.job.target_order, bool(self.job.force))
        f = f.with_precision(*run.precision_used)
        g = g.with_precision(*run.precision_used)
        check = service.verify_equisingular(f, g.f, run)
        result = {
            "mu": run.mu,
            "bound": run.bound,
            "target_order": run.target_order,
            "initial_order": run.initial_order,
            "verified_to": run.verified_to,
            "ledger": [step.to_dict() for step in run.steps],
            "ledger_ok": run.ledger_ok,
            "epsilon": [series_to_literal(e) for e in run.epsilon],
            "equisingular": check.equisingular,
            "residual_order": check.residual_order,
            "mu_f": check.mu_f,
            "mu_g": check.mu_g,
            "tangent_to_identity": check.tangent_to_identity,
            "diagnostics": list(check.diagnostics),
        }
        precision = {"degree_bound": run.precision_used[0], "pi_precision": run.precision_used[1]}
        return result, precision, {"determinacy": run.provenance}, check.equisingular and run.ledger_ok

    def dm0(self) -> Outcome:
        service = VanishingService(self.milnor_service, self.logger)
        germ = self._germ()
        report = service.verify_deligne_milnor_n0(germ)
        result = report.to_dict()
        result["weierstrass_degree"] = service.weierstrass_degree(germ)
        provenance = {"verification": PROVENANCE_COMPUTED if report.verified is not None else PROVENANCE_SKIPPED}
        return result, self._precision(germ), provenance, report.verified is not False

    def _compactify_service(self) -> CompactifyService:
        return CompactifyService(self.milnor_service, self.logger, threads=self.job.threads, progress=self.job.progress,
                                 enumeration_cap=self.job.enumeration_cap)

    def compactify(self) -> Outcome:
        service = self._compactify_service()
        germ = self._germ()
        if self.job.q is not None and self.job.q != germ.base.p:
            self.logger.warning(f"--q {self.job.q} differs from the residue field F_{germ.base.p}; using p")
        mu = self.milnor_service.milnor_number(germ, with_koszul=False).mu
        lam = service.resolve_lambda(mu, self.job.lam)
        template = service.family_from_germ(germ, lam)
        result: Dict[str, Any] = {"q": template.p, "lambda": lam, "samples": self.job.samples,
                                  "caveat": f"complete only over GF({template.p}^e) for e <= {self.job.ext_degree}"}
        try:
            report = service.sample_good(template, self.job.seed, self.job.samples, self.job.ext_degree, germ)
        except AllSamplesFailed as error:
            result.update(good_found=False, first_good_sample=None, failures=error.stats.get("failures"),
                          failure_fraction=f"{error.stats.get('failures')}/{self.job.samples}",
                          bad_points=[], mu_preserved=None, coefficients=[])
            return result, self._precision(germ), {"sampler": PROVENANCE_COMPUTED}, False
        result.update(
            good_found=report.good_found,
            first_good_sample=report.first_good_sample,
            failures=report.failures,
            failure_fraction=report.failure_fraction,
            bad_points=report.bad_points,
            mu=report.mu,
            mu_preserved=report.mu_preserved,
            coefficients=[{"i": i, "exp": list(alpha), "c": c} for (i, alpha), c in report.family.coefficients],
        )
        return result, self._precision(germ), {"sampler": PROVENANCE_COMPUTED}, report.mu_preserved is not False

    def codim(self) -> Outcome:
        service = self._compactify_service()
        count = service.determinantal_codim_count(self.job.n, self.job.r, self.job.q, self.job.seed, self.job.samples)
        verified = count.mode != "exact" or count.count == count.closed_form
        provenance = {"count": PROVENANCE_COMPUTED, "closed_form": PROVENANCE_ORACLE}
        return count.to_dict(), {}, provenance, verified

    def incidence(self) -> Outcome:
        service = self._compactify_service()
        lam = 1 if self.job.lam in (None, LAMBDA_AUTO) else self.job.lam
        if self.job.inputs:
            germ = self._germ()
            template = service.family_from_germ(germ, lam)
            if (germ.n, germ.r, germ.base.p) != (self.job.n, self.job.r, self.job.q):
                self.logger.warning("n, r and q are taken from the germ file")
        else:
            template = service.zero_template(self.job.q, self.job.n, self.job.r, lam)
        verdict = service.incidence_fiber_dim_check(template, self.job.z)
        result = {
            "passed": verdict.passed,
            "count": verdict.count,
            "expected": verdict.expected,
            "prediction": verdict.prediction,
            "dim_t": verdict.dim_t,
            "chi_vanishing": verdict.chi_vanishing,
            "z": list(verdict.z),
            "lambda": lam,
            "errors": list(verdict.errors),
        }
        return result, {}, {"incidence": PROVENANCE_COMPUTED}, verdict.passed

    def selfcheck(self) -> Outcome:
        service = SelfCheckService(self.milnor_service, self.logger)
        results = service.run()
        table = service.to_frame(results).to_string(index=False)
        family = service.family_table().to_string(index=False)
        print(table, file=sys.stderr)
        failed = sum(1 for r in results if not r.passed)
        result = {
            "passed": len(results) - failed,
            "failed": failed,
            "checks": [{"module": r.module, "check": r.name, "expected": r.expected, "observed": r.observed,
                        "passed": r.passed} for r in results],
            "table": table,
            "family_table": family,
        }
        return result, {}, {"corpus": PROVENANCE_ORACLE}, failed == 0

    # ------------------------------------------------------------------
    # Dispatch
    # ------------------------------------------------------------------
    def execute(self) -> int:
        handler = getattr(self, self.job.command.replace("-", "_"))
        try:
            result, precision, provenance, verified = handler()
        except MilnorkitError as error:
            self.logger.error(f"{self.job.command} failed: {error}")
            report = self.reports.build(self.job, {"error": type(error).__name__, "message": str(error)})
            self._emit(report)
            return EXIT_INPUT_ERROR
        report = self.reports.build(self.job, result, precision, provenance)
        self._emit(report)
        return EXIT_OK if verified else EXIT_VERIFICATION_FAILED

    def _emit(self, report: Dict[str, Any]):
        if self.reports.write(report, self.job.output) is None:
            sys.stdout.write(self.reports.to_json(report))
        if self.job.summary and "error" not in report["result"]:
            sys.stderr.write(self.reports.summary(report))


def run(config: JobConfig) -> int:
    """Run one job; returns the process exit code."""
    logger = _setup_logging(config.log_file)
    logger.info(f"milnorkit {__version__}: {config.command}")
    return MilnorkitApp(config, logger).execute()


def main(argv: Optional[List[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    overrides = {key: value for key, value in vars(args).items() if key not in ("command", "config_file")}
    try:
        job = ConfigManager(args.config_file).build_job(args.command, overrides)
    except MilnorkitError as error:
        print(f"milnorkit: {error}", file=sys.stderr)
        return EXIT_INPUT_ERROR
    job.config_file = args.config_file
    return run(job)


if __name__ == "__main__":
    sys.exit(main())
