import pytest

from milnorkit.core.constants import (
    EQCHAR,
    FLAG_FIBER_DEGENERACY,
    FLAG_NOT_ON_FIBER,
    FLAG_SMOOTH,
    MIXEDCHAR,
)
from milnorkit.core.exceptions import DomainError


def test_cusp(milnor, make_germ):
    report = milnor.milnor_number(make_germ(["y**2 - x**3 - pi"], ["x", "y"]))
    assert report.mu == 2
    assert report.mu_via_koszul == 2
    assert report.agreement
    assert len(report.basis) == 2


def test_mixedchar_quadratic(milnor, make_germ):
    g = make_germ(["t**2 - 5"], ["t"], p=5, model=MIXEDCHAR)
    assert milnor.milnor_number(g).mu == 1
    assert milnor.is_ordinary_quadratic(g)


def test_complete_intersection(milnor, make_germ):
    report = milnor.milnor_number(make_germ(["x**2 - pi", "y**2 - pi"], ["x", "y"], p=5))
    assert report.mu == 4
    assert report.mu_via_koszul is None
    assert any("r >= 2" in w for w in report.warnings)


def test_fermat_cubic(milnor, make_germ):
    assert milnor.milnor_number(make_germ(["x**3 + y**3 + pi"], ["x", "y"])).mu == 4


def test_koszul_check_on_cusp(milnor, make_germ):
    report = milnor.koszul_check(make_germ(["y**2 - x**3 - pi"], ["x", "y"]))
    assert report.passed
    assert report.euler_characteristic == report.mu == 2


def test_germ_off_the_special_fiber(milnor, make_germ):
    g = make_germ(["1 + t**2"], ["t"])
    assert FLAG_NOT_ON_FIBER in milnor.validate(g).flags
    with pytest.raises(DomainError):
        milnor.milnor_number(g)


def test_validation_flags(milnor, make_germ):
    assert FLAG_FIBER_DEGENERACY in milnor.validate(make_germ(["x**2 + y**2"], ["x", "y"])).flags
    assert FLAG_SMOOTH in milnor.validate(make_germ(["t - pi"], ["t"])).flags
    assert milnor.validate(make_germ(["y**2 - x**3 - pi"], ["x", "y"])).flags == []


FAMILY = [(p, a) for p in (5, 7, 11) for a in range(2, 9) if a % p]


@pytest.mark.parametrize("model", [EQCHAR, MIXEDCHAR])
@pytest.mark.parametrize("p, a", FAMILY)
def test_ramified_line_family(milnor, make_germ, model, p, a):
    uniformizer = "pi" if model == EQCHAR else str(p)
    report = milnor.milnor_number(make_germ([f"t**{a} - {uniformizer}"], ["t"], p=p, model=model))
    assert report.mu == a - 1
    assert report.t1_length == report.omega_length == report.fitting_length == a - 1
    assert report.mu_via_koszul == a - 1
    assert report.agreement


IDENTITY_CORPUS = [
    ("t**2 - pi", ["t"], 7, 1),
    ("t**3 - pi", ["t"], 7, 2),
    ("t**4 - pi", ["t"], 7, 3),
    ("x**2 + y**2 - pi", ["x", "y"], 7, 1),
    ("x*y - pi", ["x", "y"], 7, 1),
    ("x**2 + y**2 + z**2 - pi", ["x", "y", "z"], 7, 1),
    ("x*y + z**2 - pi", ["x", "y", "z"], 5, 1),
    ("y**2 - x**3 - pi", ["x", "y"], 7, 2),
    ("x**2 + y**4 - pi", ["x", "y"], 7, 3),
    ("y**2 - x**5 - pi", ["x", "y"], 7, 4),
    ("x**3 + y**3 + pi", ["x", "y"], 7, 4),
]


@pytest.mark.parametrize("expression, variables, p, mu", IDENTITY_CORPUS)
def test_identity_chain(milnor, make_germ, expression, variables, p, mu):
    report = milnor.milnor_number(make_germ([expression], variables, p=p))
    assert report.mu == report.t1_length == report.mu_via_koszul == mu
    assert report.omega_length == report.fitting_length == mu
    assert report.agreement


@pytest.mark.parametrize("expression", [
    "y**2 - x**3 - pi",
    "(1 + x + 2*y)*(y**2 - x**3 - pi)",
    "(3 + pi)*(y**2 - x**3 - pi)",
    "(x + y)**2 - x**3 - pi",
    "(2*y - x)**2 - (x + 3*y)**3 - pi",
])
def test_mu_survives_units_and_linear_changes(milnor, make_germ, expression):
    assert milnor.milnor_number(make_germ([expression], ["x", "y"]), with_koszul=False).mu == 2
