"""Configuration for the pytest test suite."""

import pytest

from pupil_labs.rel_frobenius.algebra import FrobAlgebra, HStarAlgebra, MulCandidate
from pupil_labs.rel_frobenius.finrel import FinSet
from pupil_labs.rel_frobenius.formats.structure_file import load
from pupil_labs.rel_frobenius.structures import Groupoid, Semigroupoid
from tests import FIXTURES_DIR


def z2_table(unit: str = "a", other: str = "b") -> dict[tuple[str, str], str]:
    return {(unit, unit): unit, (unit, other): other, (other, unit): other, (other, other): unit}


def load_fixture(name: str, cls: type) -> object:
    structure = load(FIXTURES_DIR / name)
    assert isinstance(structure, cls)
    return structure


@pytest.fixture
def z2() -> FrobAlgebra:
    return load_fixture("z2.frob", FrobAlgebra)


@pytest.fixture
def z2_hstar() -> HStarAlgebra:
    return HStarAlgebra(MulCandidate.from_table(FinSet(("a", "b")), z2_table()))


@pytest.fixture
def diagonal() -> FrobAlgebra:
    return load_fixture("diagonal.frob", FrobAlgebra)


@pytest.fixture
def trivial() -> FrobAlgebra:
    return load_fixture("trivial.frob", FrobAlgebra)


@pytest.fixture
def pair_groupoid() -> Groupoid:
    return load_fixture("pair.gpd", Groupoid)


@pytest.fixture
def z2_groupoid() -> Groupoid:
    return load_fixture("z2.gpd", Groupoid)


@pytest.fixture
def band() -> Semigroupoid:
    return load_fixture("band.sgd", Semigroupoid)
