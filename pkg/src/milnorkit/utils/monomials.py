"""
Exponent-vector helpers shared by series, elimination and the sampler.
"""
from functools import lru_cache
from itertools import combinations
from math import comb
from typing import Tuple

from typing_extensions import TypeAlias

Monomial: TypeAlias = Tuple[int, ...]


def degree(alpha: Monomial) -> int:
    return sum(alpha)


def zero(num_vars: int) -> Monomial:
    return (0,) * num_vars


@lru_cache(maxsize=None)
def monomials_of_degree(num_vars: int, total: int) -> Tuple[Monomial, ...]:
    """
    All exponent vectors of the given total degree, in lexicographically
    decreasing order of the exponent tuples.

    Args:
        num_vars: Number of variables
        total: Total degree

    Returns:
        Tuple of exponent vectors
    """
    if num_vars == 0:
        return ((),) if total == 0 else ()
    result = []
    # stars and bars: choose bar positions among total + num_vars - 1 slots
    for bars in combinations(range(total + num_vars - 1), num_vars - 1):
        exps = []
        previous = -1
        for bar in bars:
            exps.append(bar - previous - 1)
            previous = bar
        exps.append(total + num_vars - 1 - previous - 1)
        result.append(tuple(exps))
    result.sort(reverse=True)
    return tuple(result)


def count_of_degree(num_vars: int, total: int) -> int:
    if num_vars == 0:
        return 1 if total == 0 else 0
    return comb(total + num_vars - 1, num_vars - 1)


def format_monomial(alpha: Monomial, names: Tuple[str, ...]) -> str:
    parts = []
    for name, power in zip(names, alpha):
        if power == 1:
            parts.append(name)
        elif power > 1:
            parts.append(f"{name}^{power}")
    return "*".join(parts) if parts else "1"
