import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st
from sympy import GF, Matrix, multiplicity
from sympy.matrices.normalforms import smith_normal_form
from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix

from milnorkit.core.constants import EQCHAR, MIXEDCHAR
from milnorkit.core.exceptions import NotFiniteLength, ShapeError
from milnorkit.core.models import LocalIdeal
from milnorkit.core.ring import BaseRing
from milnorkit.core.series import TruncatedSeries
from milnorkit.services import LocalAlgebraService
from milnorkit.utils.monomials import monomials_of_degree

EQ7 = BaseRing(EQCHAR, 7, 12)
SHARED = LocalAlgebraService()


def _vars(ring, num_vars, bound=10):
    return [TruncatedSeries.variable(ring, num_vars, bound, i) for i in range(num_vars)]


def _pi(ring, num_vars, bound=10):
    return TruncatedSeries.constant(ring, num_vars, bound, 1, 1)


def test_monomial_ideal_colength(local_algebra, eqchar7):
    x, y = _vars(eqchar7, 2)
    module = local_algebra.colength(LocalIdeal.of([_pi(eqchar7, 2), x.power(2), y.power(3)]))
    assert module.length == 6
    assert len(module.basis) == 6


def test_colength_invariant_under_unit_multiples(local_algebra, eqchar7):
    x, y = _vars(eqchar7, 2)
    one = TruncatedSeries.constant(eqchar7, 2, 10)
    plain = LocalIdeal.of([_pi(eqchar7, 2), x.power(2), y.power(3)])
    twisted = LocalIdeal.of([_pi(eqchar7, 2).scale(3), (one + x) * x.power(2), (one.scale(2) + y) * y.power(3)])
    assert local_algebra.colength(plain).length == local_algebra.colength(twisted).length


def test_mixedchar_jacobian_ideal(local_algebra, mixedchar5):
    t, = _vars(mixedchar5, 1)
    five = TruncatedSeries.constant(mixedchar5, 1, 10, 5)
    module = local_algebra.colength(LocalIdeal.of([t * t - five, t.scale(2)]))
    assert module.length == 1


def test_free_module_colength(local_algebra, eqchar7):
    t1, t2 = _vars(eqchar7, 2)
    zero = TruncatedSeries.zero(eqchar7, 2, 10)
    module = local_algebra.module_colength([(t1, zero), (zero, t1), (t2, zero), (zero, t2)], 2,
                                           relations=[_pi(eqchar7, 2)])
    assert module.length == 2


def test_non_isolated_ideal_is_not_finite(local_algebra, eqchar7):
    t1, _ = _vars(eqchar7, 2)
    with pytest.raises(NotFiniteLength):
        local_algebra.colength(LocalIdeal.of([t1, _pi(eqchar7, 2)]))


def test_normal_form_of_member_is_zero(local_algebra, eqchar7):
    x, y = _vars(eqchar7, 2)
    ideal = LocalIdeal.of([_pi(eqchar7, 2), x.power(2), y.power(3)])
    assert local_algebra.normal_form(x.power(3) + x * y.power(3), ideal).is_zero
    assert not local_algebra.normal_form(x * y, ideal).is_zero


def test_determinant_and_minor_sizes(local_algebra, eqchar7):
    x, y = _vars(eqchar7, 2)
    matrix = ((x, y), (y, x))
    assert local_algebra.determinant(matrix) == x * x - y * y
    with pytest.raises(ShapeError):
        local_algebra.minors(matrix, 3)


def test_jacobian_ideal_of_cusp(local_algebra, make_germ):
    g = make_germ(["y**2 - x**3 - pi"], ["x", "y"])
    assert local_algebra.colength(local_algebra.jacobian_ideal(g)).length == 2


def test_unit_ideal_has_length_zero(local_algebra, eqchar7, mixedchar5):
    for ring in (eqchar7, mixedchar5):
        x, y = _vars(ring, 2)
        ideal = LocalIdeal.of([TruncatedSeries.constant(ring, 2, 10) + x, y])
        assert not ideal.is_proper
        module = local_algebra.colength(ideal)
        assert (module.length, module.certificate) == (0, 0)
    assert LocalIdeal.of([_pi(eqchar7, 2), _vars(eqchar7, 2)[0]]).is_proper


def _brute_force_length(generators, num_vars, cap):
    """
    Length of P / (generators + m^cap) from the full Macaulay matrix: rank
    over F_p for EqChar, Smith form over Z for MixedChar.
    """
    ring = generators[0].ring
    p = ring.p
    if ring.is_eqchar:
        columns = [(k, alpha) for total in range(cap) for k in range(total + 1)
                   for alpha in monomials_of_degree(num_vars, total - k)]
    else:
        columns = [(0, alpha) for total in range(cap) for alpha in monomials_of_degree(num_vars, total)]
    index = {column: i for i, column in enumerate(columns)}
    rows = []
    for g in generators:
        for shift, beta in columns:
            row = [0] * len(columns)
            for (k, alpha), c in g.raw_terms.items():
                key = (k + shift, tuple(a + b for a, b in zip(alpha, beta)))
                if key in index:
                    row[index[key]] += c
            rows.append(row)
    if ring.is_eqchar:
        field = GF(p)
        matrix = DomainMatrix([[field(v) for v in row] for row in rows], (len(rows), len(columns)), field)
        return len(columns) - matrix.rank()
    for (_, alpha), i in index.items():
        row = [0] * len(columns)
        row[i] = p ** (cap - sum(alpha))
        rows.append(row)
    snf = smith_normal_form(Matrix(rows), domain=ZZ)
    return sum(multiplicity(p, abs(snf[i, i])) for i in range(len(columns)))


@pytest.mark.parametrize("model", [EQCHAR, MIXEDCHAR])
@pytest.mark.parametrize("a", range(2, 9))
def test_colength_matches_full_macaulay_matrix(local_algebra, make_germ, model, a):
    uniformizer = "pi" if model == EQCHAR else "7"
    g = make_germ([f"t**{a} - {uniformizer}"], ["t"], p=7, model=model, precision=16)
    ideal = local_algebra.jacobian_ideal(g)
    assert local_algebra.colength(ideal).length == a - 1
    assert _brute_force_length(ideal.generators, 1, a + 6) == a - 1


def test_cusp_colength_matches_full_macaulay_matrix(local_algebra, make_germ):
    ideal = local_algebra.jacobian_ideal(make_germ(["y**2 - x**3 - pi"], ["x", "y"]))
    assert _brute_force_length(ideal.generators, 2, 8) == local_algebra.colength(ideal).length == 2


def _pure(coefficient, exps):
    return TruncatedSeries.monomial(EQ7, 2, 10, exps, coefficient)


@given(
    st.permutations(range(3)),
    st.tuples(st.integers(0, 2), st.integers(0, 2)),
    st.integers(1, 6),
    st.tuples(st.integers(0, 2), st.integers(0, 2)),
)
@settings(max_examples=20, deadline=None)
def test_colength_invariant_under_unimodular_rewrites(order, pair, coefficient, exps):
    i, j = pair
    assume(i != j)
    x, y = _vars(EQ7, 2)
    generators = [_pi(EQ7, 2), x.power(2), y.power(3)]
    generators[i] = generators[i] + _pure(coefficient, exps) * generators[j]
    rewritten = LocalIdeal.of([generators[k] for k in order])
    assert SHARED.colength(rewritten).length == 6


def _cusp_jacobian():
    x, y = _vars(EQ7, 2)
    return LocalIdeal.of([y.power(2) - x.power(3) - _pi(EQ7, 2), y.scale(2), x.power(2).scale(-3)])


series_terms = st.dictionaries(
    st.tuples(st.integers(0, 3), st.tuples(st.integers(0, 4), st.integers(0, 4))),
    st.integers(-6, 6), max_size=6,
)


@given(series_terms, series_terms, st.integers(1, 6))
@settings(max_examples=25, deadline=None)
def test_normal_form_is_idempotent_and_linear(first, second, scalar):
    ideal = _cusp_jacobian()
    a = TruncatedSeries(EQ7, 2, 10, first)
    b = TruncatedSeries(EQ7, 2, 10, second)
    na, nb = SHARED.normal_form(a, ideal), SHARED.normal_form(b, ideal)
    assert SHARED.normal_form(na, ideal) == na
    assert SHARED.normal_form(a + b, ideal) == na + nb
    assert SHARED.normal_form(a.scale(scalar), ideal) == na.scale(scalar)
