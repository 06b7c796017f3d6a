import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from milnorkit.core.constants import EQCHAR, MIXEDCHAR
from milnorkit.core.exceptions import DomainError, ShapeError
from milnorkit.core.ring import BaseRing
from milnorkit.core.series import TruncatedSeries

EQ = BaseRing(EQCHAR, 3, 4)
MIXED = BaseRing(MIXEDCHAR, 3, 4)
D = 5


def series_over(ring, num_vars=2):
    key = st.tuples(
        st.integers(min_value=0, max_value=3),
        st.tuples(*[st.integers(min_value=0, max_value=4) for _ in range(num_vars)]),
    )
    terms = st.dictionaries(key, st.integers(min_value=-20, max_value=20), max_size=6)
    return terms.map(lambda t: TruncatedSeries(ring, num_vars, D, t))


rings = st.sampled_from([EQ, MIXED])


@given(rings.flatmap(lambda ring: st.tuples(series_over(ring), series_over(ring), series_over(ring))))
@settings(max_examples=40, deadline=None)
def test_ring_axioms(triple):
    a, b, c = triple
    assert a + b == b + a
    assert a * b == b * a
    assert (a + b) * c == a * c + b * c
    assert (a * b) * c == a * (b * c)
    assert a - a == TruncatedSeries.zero(a.ring, 2, D)


@given(rings.flatmap(lambda ring: st.tuples(series_over(ring), series_over(ring))), st.integers(0, 1))
@settings(max_examples=40, deadline=None)
def test_derivative_is_a_derivation(pair, j):
    a, b = pair
    assert (a * b).partial_derivative(j) == a.partial_derivative(j) * b + a * b.partial_derivative(j)


def test_truncation_drops_high_degree_terms():
    s = TruncatedSeries.from_integer_terms(EQ, 1, 3, [(1, 0, (1,)), (1, 0, (2,)), (1, 0, (3,))])
    assert s.total_degree() == 2
    assert s.truncate(2) == TruncatedSeries.variable(EQ, 1, 2, 0)


def test_pi_exponents_beyond_precision_vanish():
    assert TruncatedSeries.constant(EQ, 1, D, 1, 4).is_zero
    assert not TruncatedSeries.constant(EQ, 1, D, 1, 3).is_zero


def test_mixedchar_folds_uniformizer_into_coefficients():
    s = TruncatedSeries.from_integer_terms(MIXED, 1, D, [(1, 1, (0,)), (-3, 0, (0,))])
    assert s.is_zero
    assert TruncatedSeries.constant(MIXED, 1, D, 3).t_order() == 1


def test_t_order_counts_uniformizer_and_degree():
    s = TruncatedSeries.from_integer_terms(EQ, 2, D, [(1, 2, (1, 0)), (1, 0, (2, 2))])
    assert s.t_order() == 3
    assert TruncatedSeries.zero(EQ, 2, D).t_order() == D + EQ.pi_precision


def test_homogeneous_part_keeps_one_degree():
    s = TruncatedSeries.from_integer_terms(EQ, 2, D, [(1, 1, (1, 0)), (2, 0, (0, 2)), (1, 0, (1, 1)), (4, 0, (3, 0))])
    part = s.homogeneous_part(2)
    assert part == TruncatedSeries.from_integer_terms(EQ, 2, D, [(2, 0, (0, 2)), (1, 0, (1, 1))])
    assert s.homogeneous_part(4).is_zero


def test_reduction_forgets_uniformizer_terms():
    s = TruncatedSeries.from_integer_terms(EQ, 1, D, [(1, 1, (0,)), (2, 0, (2,))])
    assert s.reduction() == {(2,): 2}
    assert s.involves_pi()


def test_substitution_rejects_unit_constant():
    t = TruncatedSeries.variable(EQ, 1, D, 0)
    one = TruncatedSeries.constant(EQ, 1, D)
    with pytest.raises(DomainError):
        (t * t).substitute([t + one])


def test_substitution_composes():
    t = TruncatedSeries.variable(EQ, 1, D, 0)
    square = t * t
    assert square.substitute([t + t]) == square.scale(4)


def test_mismatched_variable_counts():
    with pytest.raises(ShapeError):
        TruncatedSeries.variable(EQ, 1, D, 0) + TruncatedSeries.variable(EQ, 2, D, 0)


@pytest.mark.parametrize("ring", [EQ, MIXED])
def test_valuation_and_inverse(ring):
    u = ring.element(2) + ring.uniformizer()
    assert u.is_unit
    assert u * u.inverse() == ring.one()
    assert ring.uniformizer().valuation() == 1
    assert ring.zero().valuation() == ring.pi_precision
    with pytest.raises(DomainError):
        ring.uniformizer().inverse()


@pytest.mark.parametrize("model, p, precision", [("padic", 3, 2), (EQCHAR, 4, 2), (EQCHAR, 3, 0)])
def test_base_ring_validation(model, p, precision):
    with pytest.raises(DomainError):
        BaseRing(model, p, precision)


def images_over(ring):
    """Pairs of series without constant term, so substitution stays at the origin."""
    positive = series_over(ring).map(
        lambda s: TruncatedSeries(ring, 2, D, {k: c for k, c in s.raw_terms.items() if any(k[1])}))
    return st.tuples(positive, positive)


@given(rings.flatmap(lambda ring: st.tuples(series_over(ring), series_over(ring), images_over(ring))))
@settings(max_examples=30, deadline=None)
def test_substitution_is_a_ring_map(triple):
    a, b, images = triple
    images = list(images)
    assert (a + b).substitute(images) == a.substitute(images) + b.substitute(images)
    assert (a * b).substitute(images) == a.substitute(images) * b.substitute(images)


@given(rings.flatmap(lambda ring: st.tuples(series_over(ring), series_over(ring))))
@settings(max_examples=40, deadline=None)
def test_t_order_is_superadditive(pair):
    a, b = pair
    product = a * b
    assume(not product.is_zero)
    assert product.t_order() >= a.t_order() + b.t_order()


@pytest.mark.parametrize("ring", [EQ, MIXED])
def test_residue_drops_the_uniformizer(ring):
    assert (ring.element(2) + ring.uniformizer()).residue() == 2
    assert ring.uniformizer().residue() == 0
    assert ring.element(-1).residue() == ring.p - 1
