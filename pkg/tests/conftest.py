import json

import pytest

from milnorkit.core.constants import EQCHAR, MIXEDCHAR
from milnorkit.core.ring import BaseRing
from milnorkit.services import KoszulService, LocalAlgebraService, MilnorService
from milnorkit.utils.serialization import germ_from_expressions


@pytest.fixture
def eqchar7():
    return BaseRing(EQCHAR, 7, 12)


@pytest.fixture
def mixedchar5():
    return BaseRing(MIXEDCHAR, 5, 12)


@pytest.fixture
def make_germ():
    """germ_from_expressions with an EqChar base by default."""
    def build(expressions, variables, p=7, model=EQCHAR, precision=12, degree_bound=None):
        return germ_from_expressions(expressions, variables, BaseRing(model, p, precision),
                                     degree_bound=degree_bound)
    return build


@pytest.fixture
def local_algebra():
    return LocalAlgebraService()


@pytest.fixture
def koszul(local_algebra):
    return KoszulService(local_algebra)


@pytest.fixture
def milnor(local_algebra, koszul):
    return MilnorService(local_algebra, koszul)


@pytest.fixture
def germ_file(tmp_path):
    """Write a germ JSON object to a temporary file and return its path."""
    def write(data, name="germ.json"):
        path = tmp_path / name
        path.write_text(json.dumps(data), encoding="utf-8")
        return str(path)
    return write
