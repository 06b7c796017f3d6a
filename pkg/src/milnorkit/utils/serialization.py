"""
JSON literals for series and germs, plus germs from polynomial expressions.

Series literal: {"terms": [{"c": int, "pi": int?, "exp": [int, ...]}, ...]}
where "pi" appears only for EqChar. Equations of a germ file may also be
given as expression strings such as "y**2 - x**3 - pi".
"""
from __future__ import annotations

import json
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence

import sympy

from milnorkit.core.constants import DEGREE_BOUND_FACTOR, MIN_DEGREE_BOUND, TERM_KEYS
from milnorkit.core.exceptions import DomainError, InputError
from milnorkit.core.models import Germ
from milnorkit.core.ring import BaseRing
from milnorkit.core.series import TruncatedSeries
from milnorkit.core.validators import GermValidator


def default_degree_bound(total_degree: int) -> int:
    return max(DEGREE_BOUND_FACTOR * total_degree, MIN_DEGREE_BOUND)


# ----------------------------------------------------------------------
# Series literals
# ----------------------------------------------------------------------
def literal_to_triples(literal: Dict[str, Any], num_vars: int, field: str = "terms"):
    if not isinstance(literal, dict) or "terms" not in literal:
        raise InputError("series literal must be an object with a 'terms' list", field=field)
    triples = []
    for index, term in enumerate(literal["terms"]):
        where = f"{field}[{index}]"
        if not isinstance(term, dict):
            raise InputError("term must be an object", field=where)
        unknown = set(term) - set(TERM_KEYS)
        if unknown:
            raise InputError(f"unknown term keys {sorted(unknown)}", field=where)
        exps = term.get("exp", [0] * num_vars)
        if not isinstance(exps, list) or len(exps) != num_vars or any(
                not isinstance(e, int) or e < 0 for e in exps):
            raise InputError(f"'exp' must list {num_vars} nonnegative integers", field=where)
        coeff = term.get("c")
        pi_exp = term.get("pi", 0)
        if not isinstance(coeff, int) or not isinstance(pi_exp, int) or pi_exp < 0:
            raise InputError("'c' and 'pi' must be integers", field=where)
        triples.append((coeff, pi_exp, tuple(exps)))
    return tuple(triples)


def series_to_literal(series: TruncatedSeries) -> Dict[str, Any]:
    terms = []
    for (a, alpha), coeff in sorted(series.raw_terms.items()):
        term = {"c": coeff, "exp": list(alpha)}
        if series.ring.is_eqchar:
            term["pi"] = a
        terms.append(term)
    return {"terms": terms}


# ----------------------------------------------------------------------
# Expressions
# ----------------------------------------------------------------------
def expression_to_triples(expression: str, variables: Sequence[str], field: str = "f"):
    """Integer (coefficient, pi exponent, exponents) triples of a polynomial expression."""
    pi = sympy.Symbol("pi")
    symbols = [sympy.Symbol(name) for name in variables]
    namespace = {name: sym for name, sym in zip(variables, symbols)}
    namespace["pi"] = pi
    try:
        expr = sympy.sympify(expression, locals=namespace)
        poly = sympy.Poly(sympy.expand(expr), pi, *symbols)
    except (sympy.SympifyError, sympy.PolynomialError, TypeError) as error:
        raise InputError(f"cannot parse polynomial '{expression}': {error}", field=field) from error
    triples = []
    for monom, coeff in poly.terms():
        if not coeff.is_integer:
            raise InputError(f"coefficient {coeff} of '{expression}' is not an integer", field=field)
        triples.append((int(coeff), monom[0], tuple(monom[1:])))
    return tuple(triples)


def germ_from_expressions(expressions: Sequence[str], variables: Sequence[str], base: BaseRing,
                          n: Optional[int] = None, degree_bound: Optional[int] = None) -> Germ:
    r = len(expressions)
    n = len(variables) - r if n is None else n
    if n < 0 or n + r != len(variables):
        raise DomainError(f"{len(variables)} variables do not fit n + r with r = {r}")
    literals = [expression_to_triples(expr, variables, f"f[{i}]") for i, expr in enumerate(expressions)]
    if degree_bound is None:
        degree_bound = default_degree_bound(max((sum(a) for eq in literals for _, _, a in eq), default=0))
    return Germ.from_literals(base, n, r, literals, degree_bound, tuple(variables))


# ----------------------------------------------------------------------
# Germs
# ----------------------------------------------------------------------
def germ_from_dict(data: Dict[str, Any], degree_bound: Optional[int] = None,
                   pi_precision: Optional[int] = None) -> Germ:
    """
    Build a germ from its JSON object.

    Args:
        data: Parsed germ JSON
        degree_bound: Override of the file's degree bound
        pi_precision: Override of the file's base precision

    Returns:
        The germ
    """
    errors = GermValidator.validate_payload(data)
    if errors:
        raise InputError("; ".join(errors), field=errors[0].split(":", 1)[0])
    base_data = data["base"]
    base = BaseRing(base_data["model"], base_data["p"], pi_precision or base_data["precision"])
    n, r = data["n"], data["r"]
    variables = tuple(data.get("variables") or [f"t{i + 1}" for i in range(n + r)])
    literals = []
    for index, equation in enumerate(data["f"]):
        if isinstance(equation, str):
            literals.append(expression_to_triples(equation, variables, f"f[{index}]"))
        else:
            literals.append(literal_to_triples(equation, n + r, f"f[{index}]"))
    bound = degree_bound or data.get("degree_bound") or default_degree_bound(
        max((sum(a) for eq in literals for _, _, a in eq), default=0))
    return Germ.from_literals(base, n, r, literals, bound, variables)


def germ_to_dict(g: Germ) -> Dict[str, Any]:
    return {
        "base": g.base.to_dict(),
        "n": g.n,
        "r": g.r,
        "degree_bound": g.degree_bound,
        "variables": list(g.names),
        "f": [series_to_literal(fi) for fi in g.f],
    }


def load_json(path: str | Path) -> Any:
    """Read a JSON file, turning decode errors into line-level InputErrors."""
    path = Path(path)
    try:
        with open(path, "r", encoding="utf-8") as handle:
            return json.load(handle)
    except FileNotFoundError as error:
        raise InputError(f"input file not found: {path}") from error
    except json.JSONDecodeError as error:
        raise InputError(f"malformed JSON in {path}: {error.msg}", line=error.lineno) from error


def load_germ(path: str | Path, degree_bound: Optional[int] = None,
              pi_precision: Optional[int] = None) -> Germ:
    return germ_from_dict(load_json(path), degree_bound, pi_precision)


def dump_json(data: Any) -> str:
    """Deterministic JSON text used for every report."""
    return json.dumps(data, sort_keys=True, indent=2, ensure_ascii=False) + "\n"


def parse_point(text: str) -> List[int]:
    """A projective point written as '0:1' or '0,1'."""
    parts = text.replace(",", ":").split(":")
    try:
        return [int(part) for part in parts]
    except ValueError as error:
        raise InputError(f"cannot parse point '{text}'", field="z") from error
