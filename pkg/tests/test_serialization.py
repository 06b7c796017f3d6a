import pytest

from milnorkit.core.constants import EQCHAR, MIXEDCHAR
from milnorkit.core.exceptions import InputError
from milnorkit.core.validators import GermValidator
from milnorkit.utils.serialization import (
    expression_to_triples,
    germ_from_dict,
    germ_to_dict,
    load_germ,
    parse_point,
)

CUSP = {
    "base": {"model": EQCHAR, "p": 7, "precision": 12},
    "n": 1,
    "r": 1,
    "variables": ["x", "y"],
    "f": ["y**2 - x**3 - pi"],
}


def test_expression_triples():
    triples = sorted(expression_to_triples("y**2 - x**3 - 2*pi*x", ["x", "y"]))
    assert triples == [(-2, 1, (1, 0)), (-1, 0, (3, 0)), (1, 0, (0, 2))]


def test_rational_coefficients_are_rejected():
    with pytest.raises(InputError):
        expression_to_triples("x/2", ["x"])


def test_literal_and_expression_agree():
    literal = dict(CUSP, f=[{"terms": [{"c": 1, "exp": [0, 2]}, {"c": -1, "exp": [3, 0]},
                                       {"c": -1, "pi": 1, "exp": [0, 0]}]}])
    assert germ_from_dict(literal).f == germ_from_dict(CUSP).f


def test_default_degree_bound():
    assert germ_from_dict(CUSP).degree_bound == 8
    assert germ_from_dict(CUSP, degree_bound=20).degree_bound == 20


def test_germ_to_dict_keeps_header():
    data = germ_to_dict(germ_from_dict(CUSP))
    assert data["base"] == CUSP["base"]
    assert data["variables"] == ["x", "y"]
    assert (data["n"], data["r"]) == (1, 1)


def test_mixedchar_literal_without_pi_key():
    data = {"base": {"model": MIXEDCHAR, "p": 5, "precision": 6}, "n": 0, "r": 1,
            "f": [{"terms": [{"c": 1, "exp": [2]}, {"c": -5, "exp": [0]}]}]}
    g = germ_from_dict(data)
    assert g.names == ("t1",)
    assert g.f[0].t_order() == 1


def test_unknown_term_key_is_rejected():
    data = {"base": {"model": EQCHAR, "p": 5, "precision": 6}, "n": 0, "r": 1,
            "f": [{"terms": [{"c": 1, "exp": [2], "deg": 2}]}]}
    with pytest.raises(InputError, match="unknown term keys"):
        germ_from_dict(data)


@pytest.mark.parametrize("patch, field", [
    ({"n": -1}, "n"),
    ({"r": 2}, "f"),
    ({"variables": ["x", "pi"]}, "variables"),
    ({"extra": 1}, "extra"),
    ({"base": {"model": EQCHAR, "p": 6, "precision": 12}}, "base.p"),
])
def test_validator_reports_field(patch, field):
    errors = GermValidator.validate_payload(dict(CUSP, **patch))
    assert any(error.startswith(f"{field}:") for error in errors)


def test_load_germ_reports_line(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text('{\n  "n": 1,\n  "r": \n}', encoding="utf-8")
    with pytest.raises(InputError) as info:
        load_germ(path)
    assert info.value.line == 4


def test_missing_file(tmp_path):
    with pytest.raises(InputError):
        load_germ(tmp_path / "absent.json")


def test_parse_point():
    assert parse_point("0:1") == [0, 1]
    assert parse_point("2,0,1") == [2, 0, 1]
    with pytest.raises(InputError):
        parse_point("a:b")
