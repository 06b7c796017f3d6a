import pytest
from hypothesis import given
from hypothesis import strategies as st

from milnorkit.utils.finite_field import field, first_irreducible, projective_points

GF9 = field(3, 2)
elements = st.integers(min_value=0, max_value=8)


@given(elements, elements, elements)
def test_distributive(x, y, z):
    assert GF9.mul(x, GF9.add(y, z)) == GF9.add(GF9.mul(x, y), GF9.mul(x, z))


@given(elements.filter(bool))
def test_inverse(x):
    assert GF9.mul(x, GF9.inv(x)) == 1


def test_inverse_of_zero():
    with pytest.raises(ZeroDivisionError):
        GF9.inv(0)


def test_modulus_is_deterministic():
    assert first_irreducible(2, 2) == [1, 1, 1]
    assert field(3, 2) is GF9


def test_field_of_definition():
    assert GF9.field_of_definition([0, 1, 2]) == 1
    assert GF9.field_of_definition([1, 3]) == 2


@pytest.mark.parametrize("p, e, dim", [(2, 1, 1), (3, 1, 2), (2, 2, 1)])
def test_projective_point_count(p, e, dim):
    k = field(p, e)
    points = list(projective_points(k, dim))
    assert len(points) == (k.q ** (dim + 1) - 1) // (k.q - 1)
    assert all(next(c for c in point if c) == 1 for point in points)


def test_rank():
    k = field(5)
    assert k.rank([[1, 2], [2, 4]]) == 1
    assert k.rank([[1, 2], [3, 4]]) == 2
    assert k.rank([[0, 0], [0, 0]]) == 0
