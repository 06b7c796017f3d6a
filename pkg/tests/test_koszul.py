from dataclasses import replace

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from milnorkit.core.constants import EQCHAR
from milnorkit.core.exceptions import DomainError, NotFiniteLength
from milnorkit.core.models import QuotientRing, TwoTermComplex
from milnorkit.core.ring import BaseRing
from milnorkit.core.series import TruncatedSeries
from milnorkit.services import KoszulService

BASE = BaseRing(EQCHAR, 5, 8)


def _plane_over_residue_field():
    ambient = QuotientRing(BASE, 2, 8, (TruncatedSeries.constant(BASE, 2, 8, 1, 1),))
    return ambient, [TruncatedSeries.variable(BASE, 2, 8, i) for i in range(2)]


def test_contraction_complex_of_parameters(koszul):
    ambient, u = _plane_over_residue_field()
    complex_ = koszul.kos_minus(u, ambient)
    assert (complex_.low, complex_.high) == (-2, 0)
    assert koszul.homology_lengths(complex_) == {-2: 0, -1: 0, 0: 1}
    assert koszul.is_regular_sequence(u, ambient)


def test_wedge_complex_over_ramified_line(koszul):
    t = TruncatedSeries.variable(BASE, 1, 8, 0)
    pi = TruncatedSeries.constant(BASE, 1, 8, 1, 1)
    ambient = QuotientRing(BASE, 1, 8, (t * t - pi,))
    complex_ = koszul.kos_wedge([t.scale(2)], ambient)
    assert koszul.homology_lengths(complex_) == {0: 0, 1: 1}
    assert koszul.euler_characteristic(complex_) == -1


def test_short_sequence_is_not_regular(koszul):
    ambient, u = _plane_over_residue_field()
    assert not koszul.is_regular_sequence(u[:1], ambient)


monomials = st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 2))
entries = st.dictionaries(st.tuples(st.just(0), monomials), st.integers(1, 4), min_size=1, max_size=3)


@given(st.lists(entries, min_size=1, max_size=3))
@settings(max_examples=25, deadline=None)
def test_duality_and_square_zero(term_maps):
    service = KoszulService()
    u = [TruncatedSeries(BASE, 3, 6, terms) for terms in term_maps]
    contraction = service.kos_minus(u)
    wedge = service.kos_wedge(u)
    assert service.dualize(contraction) == wedge
    assert service.check_differentials(contraction)
    assert service.check_differentials(wedge)


def test_corrupted_sign_breaks_square_zero(koszul):
    u = [TruncatedSeries.variable(BASE, 2, 8, i) for i in range(2)]
    wedge = koszul.kos_wedge(u)
    first = wedge.differentials[0]
    flipped = ((-first[0][0],),) + first[1:]
    corrupted = replace(wedge, differentials={**wedge.differentials, 0: flipped})
    assert koszul.check_differentials(wedge)
    assert not koszul.check_differentials(corrupted)


def test_exterior_power_rank_must_match(koszul, make_germ):
    two_term = koszul.cotangent_complex(make_germ(["y**2 - x**3 - pi"], ["x", "y"]))
    with pytest.raises(DomainError):
        koszul.derived_exterior_power(two_term, 3)


def test_cotangent_complex_needs_hypersurface(koszul, make_germ):
    with pytest.raises(DomainError):
        koszul.cotangent_complex(make_germ(["x**2 - pi", "y**2 - pi"], ["x", "y"], p=5))


def _residue_plane():
    ambient = QuotientRing(BASE, 2, 12, (TruncatedSeries.constant(BASE, 2, 12, 1, 1),))
    return ambient, [TruncatedSeries.variable(BASE, 2, 12, i) for i in range(2)]


@pytest.mark.parametrize("build, length", [
    (lambda x, y: (x, y), 1),
    (lambda x, y: (x + y * y, y), 1),
    (lambda x, y: (x * x, y), 2),
    (lambda x, y: (x + y, x - y), 1),
])
def test_regular_sequences_are_acyclic(koszul, build, length):
    ambient, (x, y) = _residue_plane()
    u = list(build(x, y))
    assert koszul.is_regular_sequence(u, ambient)
    assert koszul.homology_lengths(koszul.kos_minus(u, ambient)) == {-2: 0, -1: 0, 0: length}


@pytest.mark.parametrize("build", [lambda x, y: (x, x), lambda x, y: (x * y, x * x)])
def test_sequences_with_infinite_colength_are_rejected(koszul, build):
    ambient, (x, y) = _residue_plane()
    u = list(build(x, y))
    assert not koszul.is_regular_sequence(u, ambient)
    with pytest.raises(NotFiniteLength):
        koszul.homology_lengths(koszul.kos_minus(u, ambient))


@pytest.mark.parametrize("exponents, lengths", [
    ((1, 1), {-2: 0, -1: 1, 0: 1}),
    ((1, 2), {-2: 0, -1: 1, 0: 1}),
    ((2, 3), {-2: 0, -1: 2, 0: 2}),
])
def test_overlong_sequences_have_higher_homology(koszul, exponents, lengths):
    t = TruncatedSeries.variable(BASE, 1, 12, 0)
    ambient = QuotientRing(BASE, 1, 12, (TruncatedSeries.constant(BASE, 1, 12, 1, 1),))
    u = [t.power(k) for k in exponents]
    assert not koszul.is_regular_sequence(u, ambient)
    assert koszul.homology_lengths(koszul.kos_minus(u, ambient)) == lengths


@pytest.mark.parametrize("exponent, length", [(1, 1), (2, 2)])
def test_exterior_power_of_regular_sequence_sits_in_degree_zero(koszul, exponent, length):
    ambient, (x, y) = _residue_plane()
    power = koszul.derived_exterior_power(TwoTermComplex(ambient, (x.power(exponent), y)), 2)
    assert (power.low, power.high) == (-2, 0)
    assert koszul.homology_lengths(power) == {-2: 0, -1: 0, 0: length}


def test_wedge_complex_over_steep_ramified_line(koszul):
    ring = BaseRing(EQCHAR, 5, 12)
    t = TruncatedSeries.variable(ring, 1, 16, 0)
    pi = TruncatedSeries.constant(ring, 1, 16, 1, 1)
    ambient = QuotientRing(ring, 1, 16, (t.power(8) - pi,))
    complex_ = koszul.kos_wedge([t.power(7).scale(8)], ambient)
    assert koszul.homology_lengths(complex_) == {0: 0, 1: 7}
