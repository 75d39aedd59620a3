import random

import pytest

from pupil_labs.rel_frobenius.algebra import FrobAlgebra, HStarAlgebra, find_unit
from pupil_labs.rel_frobenius.correspond import (
    frob_to_groupoid,
    groupoid_to_frob,
    hstar_as_frobenius,
    hstar_to_semigroupoid,
    induced_unit,
    is_group,
    semigroupoid_to_hstar,
)
from pupil_labs.rel_frobenius.enumeration import (
    as_identity_labelled,
    enumerate_frobenius,
    enumerate_groupoids,
    rename_groupoid,
)
from pupil_labs.rel_frobenius.errors import PreconditionError
from pupil_labs.rel_frobenius.structures import product_groupoid, validate_groupoid


def test_z2_becomes_a_one_object_groupoid(z2, z2_groupoid):
    g = frob_to_groupoid(z2)
    assert g == z2_groupoid
    assert is_group(z2)


def test_diagonal_becomes_a_discrete_groupoid(diagonal):
    g = frob_to_groupoid(diagonal)
    assert g.objects.elements == ("a", "b")
    assert dict(g.src) == {"a": "a", "b": "b"}
    assert not is_group(diagonal)


def test_pair_groupoid_round_trip(pair_groupoid):
    f = groupoid_to_frob(pair_groupoid)
    assert f.unit_set == {"ex", "ey"}
    assert as_identity_labelled(pair_groupoid) == frob_to_groupoid(f)


def test_groupoid_to_frob_refuses_invalid_input(band):
    from pupil_labs.rel_frobenius.structures import Groupoid

    fake = Groupoid(band, {"o": "a"}, {"a": "a", "b": "b"})
    with pytest.raises(PreconditionError):
        groupoid_to_frob(fake)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_every_enumerated_frobenius_algebra_round_trips(n):
    for f in enumerate_frobenius(n):
        assert groupoid_to_frob(frob_to_groupoid(f)) == f


def test_random_groupoids_round_trip():
    rng = random.Random(7)
    small = [g for n in (1, 2, 3) for g in enumerate_groupoids(n)]
    for _ in range(200):
        g = rng.choice(small)
        if rng.random() < 0.5:
            h = rng.choice([x for x in small if x.morphisms.size * g.morphisms.size <= 6])
            g = as_identity_labelled(product_groupoid(g, h))
        atoms = list(g.morphisms.elements)
        shuffled = atoms[:]
        rng.shuffle(shuffled)
        g = rename_groupoid(g, dict(zip(atoms, shuffled, strict=True)))
        assert validate_groupoid(g).passed
        assert frob_to_groupoid(groupoid_to_frob(g)) == g


def test_hstar_round_trip_through_semigroupoids(z2_hstar):
    s = hstar_to_semigroupoid(z2_hstar)
    assert s.objects.elements == ("a",)
    assert semigroupoid_to_hstar(s) == z2_hstar


def test_semigroupoid_to_hstar_needs_local_cancellativity(band):
    with pytest.raises(PreconditionError):
        semigroupoid_to_hstar(band)


def test_induced_unit_matches_the_forced_unit(z2_hstar, diagonal):
    assert induced_unit(z2_hstar) == find_unit(z2_hstar.base)
    h = HStarAlgebra(diagonal.base)
    assert induced_unit(h) == diagonal.unit_set


def test_hstar_algebras_are_frobenius(z2_hstar):
    f = hstar_as_frobenius(z2_hstar)
    assert isinstance(f, FrobAlgebra)
    assert f.unit_set == {"a"}
