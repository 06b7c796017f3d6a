import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from milnorkit.core.constants import EQCHAR, MIXEDCHAR, TAME, UNDETERMINED, WILD
from milnorkit.core.exceptions import DomainError
from milnorkit.core.ring import BaseRing
from milnorkit.services import VanishingService
from milnorkit.services.vanishing_service import lower_hull
from milnorkit.utils.serialization import germ_from_expressions


@pytest.fixture
def vanishing(milnor):
    return VanishingService(milnor)


def test_lower_hull_drops_points_above():
    assert lower_hull([(0, 2), (1, 2), (2, 0), (3, 1), (4, 0)]) == [(0, 2), (2, 0), (4, 0)]


def test_eisenstein_square(vanishing, make_germ):
    polygon = vanishing.newton_polygon(make_germ(["t**2 - pi"], ["t"]))
    assert [(s.start, s.end) for s in polygon.segments] == [((0, 1), (2, 0))]
    assert polygon.segments[0].slope_text() == "1/2"
    assert polygon.weierstrass_degree == 2
    assert vanishing.dim_phi0(make_germ(["t**2 - pi"], ["t"])) == 1


def test_t_factor_counts_root_at_origin(vanishing, make_germ):
    g = make_germ(["t**3 - pi*t"], ["t"])
    polygon = vanishing.newton_polygon(g)
    assert polygon.t_factor == 1
    assert polygon.positive_length == 2
    assert vanishing.dim_phi0(g, polygon) == 2


def test_smooth_germ_has_no_vanishing_cycles(vanishing, make_germ):
    assert vanishing.dim_phi0(make_germ(["t - pi"], ["t"])) == 0


def test_two_slopes(vanishing, make_germ):
    g = make_germ(["(t**2 - pi)*(t - pi)"], ["t"])
    polygon = vanishing.newton_polygon(g)
    assert [s.slope_text() for s in polygon.segments] == ["1/1", "1/2"]
    assert vanishing.dim_phi0(g, polygon) == 2
    assert vanishing.tameness(g, polygon).status == TAME
    report = vanishing.verify_deligne_milnor_n0(g)
    assert report.verified is None
    assert "not regular" in report.skipped_reason


def test_unit_constant_is_rejected(vanishing, make_germ):
    with pytest.raises(DomainError):
        vanishing.newton_polygon(make_germ(["1 + t"], ["t"]))


def test_tame_and_wild_at_p5(vanishing, make_germ):
    tame = vanishing.verify_deligne_milnor_n0(make_germ(["t**4 - pi"], ["t"], p=5))
    assert (tame.tameness_status, tame.mu, tame.dim_phi0, tame.verified) == (TAME, 3, 3, True)
    assert tame.swan == 0

    wild = vanishing.verify_deligne_milnor_n0(make_germ(["t**5 - pi"], ["t"], p=5))
    assert wild.tameness_status == WILD
    assert (wild.mu, wild.dim_phi0, wild.verified) == (None, 4, None)
    assert "divisible by p=5" in wild.skipped_reason


def test_inseparable_residual_is_undetermined(vanishing, make_germ):
    # residual polynomial x^2 - 2x + 1 = (x - 1)^2 on the slope-1/2 segment
    g = make_germ(["t**4 - 2*pi*t**2 + pi**2"], ["t"])
    assert vanishing.tameness(g).status == UNDETERMINED


def test_mixedchar_polygon(vanishing, make_germ):
    g = make_germ(["t**3 - 5"], ["t"], p=5, model=MIXEDCHAR)
    report = vanishing.verify_deligne_milnor_n0(g)
    assert report.dim_phi0 == 2
    assert report.verified


def test_only_curves_over_the_base(vanishing, make_germ):
    with pytest.raises(DomainError):
        vanishing.verify_deligne_milnor_n0(make_germ(["y**2 - x**3 - pi"], ["x", "y"]))


@given(st.integers(min_value=2, max_value=6), st.integers(min_value=1, max_value=10))
@settings(max_examples=12, deadline=None)
def test_tame_eisenstein_germs_match(a, unit):
    g = germ_from_expressions([f"t**{a} - {unit}*pi"], ["t"], BaseRing(EQCHAR, 11, 12))
    report = VanishingService().verify_deligne_milnor_n0(g)
    assert report.tame
    assert report.verified
    assert report.mu == report.dim_phi0 == a - 1
