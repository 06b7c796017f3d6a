"""
Validation utilities for germ files and job settings.
"""
from typing import Any, Dict, List

from sympy import isprime

from milnorkit.core.constants import (
    BASE_KEYS,
    COMMANDS,
    GERM_KEYS,
    LAMBDA_AUTO,
    MODELS,
    SETTINGS_KEYS,
)
from milnorkit.core.models import JobConfig


def _is_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool)


class GermValidator:
    """Utility class for germ JSON validation."""

    @staticmethod
    def validate_payload(data: Any) -> List[str]:
        """
        Validate the shape of a germ JSON object.

        Args:
            data: Parsed JSON

        Returns:
            List of validation errors, each prefixed with the field path
        """
        if not isinstance(data, dict):
            return ["germ: top-level value must be an object"]

        errors = []
        for key in sorted(set(data) - set(GERM_KEYS)):
            errors.append(f"{key}: unknown field")

        base = data.get("base")
        if not isinstance(base, dict):
            errors.append("base: missing or not an object")
        else:
            for key in sorted(set(base) - set(BASE_KEYS)):
                errors.append(f"base.{key}: unknown field")
            if base.get("model") not in MODELS:
                errors.append(f"base.model: must be one of {list(MODELS)}")
            if not _is_int(base.get("p")) or not isprime(base.get("p")):
                errors.append("base.p: must be a prime integer")
            if not _is_int(base.get("precision")) or base.get("precision") < 1:
                errors.append("base.precision: must be a positive integer")

        n, r = data.get("n"), data.get("r")
        if not _is_int(n) or n < 0:
            errors.append("n: must be a nonnegative integer")
        if not _is_int(r) or r < 1:
            errors.append("r: must be a positive integer")

        bound = data.get("degree_bound")
        if bound is not None and (not _is_int(bound) or bound < 1):
            errors.append("degree_bound: must be a positive integer")

        equations = data.get("f")
        if not isinstance(equations, list) or not equations:
            errors.append("f: must be a nonempty list of series")
        elif _is_int(r) and len(equations) != r:
            errors.append(f"f: expected {r} equations, found {len(equations)}")

        variables = data.get("variables")
        if variables is not None:
            if not isinstance(variables, list) or not all(isinstance(v, str) and v.isidentifier()
                                                          for v in variables):
                errors.append("variables: must be a list of identifiers")
            elif _is_int(n) and _is_int(r) and len(variables) != n + r:
                errors.append(f"variables: expected {n + r} names, found {len(variables)}")
            elif "pi" in variables:
                errors.append("variables: 'pi' is reserved for the uniformizer")

        return errors


class JobConfigValidator:
    """Utility class for settings and job validation."""

    @staticmethod
    def validate_settings(settings: Dict[str, Any]) -> List[str]:
        """Validate the app_settings section of the configuration file."""
        errors = []
        for key in sorted(set(settings) - set(SETTINGS_KEYS)):
            errors.append(f"app_settings.{key}: unknown setting")
        for key in ("max_degree_bound", "ext_degree", "samples", "enumeration_cap", "threads"):
            value = settings.get(key)
            if value is not None and (not _is_int(value) or value < 1):
                errors.append(f"app_settings.{key}: must be a positive integer")
        for key in ("degree_bound", "pi_precision"):
            value = settings.get(key)
            if value is not None and (not _is_int(value) or value < 1):
                errors.append(f"app_settings.{key}: must be a positive integer or null")
        if "seed" in settings and not _is_int(settings["seed"]):
            errors.append("app_settings.seed: must be an integer")
        if "progress" in settings and not isinstance(settings["progress"], bool):
            errors.append("app_settings.progress: must be true or false")
        if "log_file" in settings and not isinstance(settings["log_file"], str):
            errors.append("app_settings.log_file: must be a path string")
        return errors

    @staticmethod
    def validate_job(job: JobConfig) -> List[str]:
        """Validate one CLI job after defaults have been applied."""
        errors = []
        if job.command not in COMMANDS:
            errors.append(f"command: unknown command '{job.command}'")
            return errors

        needs = {"milnor": 1, "koszul-check": 1, "determinacy": 2, "dm0": 1, "compactify": 1}
        wanted = needs.get(job.command)
        if wanted is not None and len(job.inputs) != wanted:
            errors.append(f"input: '{job.command}' takes {wanted} germ file(s), got {len(job.inputs)}")

        if job.command in ("codim", "incidence"):
            if job.q is None:
                errors.append("q: required for this command")
            if job.n is None or job.n < 0:
                errors.append("n: required nonnegative integer")
            if job.r is None or job.r < 1:
                errors.append("r: required positive integer")
        if job.command == "incidence" and not job.z:
            errors.append("z: required point such as 0:1")

        if job.q is not None and job.q < 2:
            errors.append("q: must be at least 2")
        if job.command == "compactify" and job.q is not None and not isprime(job.q):
            errors.append("q: perturbation families live over prime fields")
        if job.lam not in (None, LAMBDA_AUTO) and (not _is_int(job.lam) or job.lam < 1):
            errors.append("lambda: must be 'auto' or a positive integer")
        for key in ("degree_bound", "pi_precision", "target_order"):
            value = getattr(job, key)
            if value is not None and value < 1:
                errors.append(f"{key}: must be positive")
        for key in ("samples", "ext_degree", "threads", "enumeration_cap", "max_degree_bound"):
            if getattr(job, key) < 1:
                errors.append(f"{key}: must be positive")
        return errors
