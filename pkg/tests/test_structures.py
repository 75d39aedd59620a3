import pytest

from pupil_labs.rel_frobenius.errors import CarrierMismatchError, PreconditionError
from pupil_labs.rel_frobenius.finrel import FinSet
from pupil_labs.rel_frobenius.structures import (
    Groupoid,
    Semigroupoid,
    check_lc_symmetric_equivalence,
    empty_groupoid,
    find_identities,
    groupoid_is_isomorphic,
    is_locally_cancellative,
    is_monic_epic,
    is_regular,
    is_subgroupoid,
    one_object_semigroupoid,
    product_groupoid,
    promote_to_groupoid,
    pseudoinverse_table,
    relabel_objects,
    require_lc_regular,
    restrict_groupoid,
    restrict_semigroupoid,
    validate_groupoid,
    validate_semigroupoid,
)
from tests.conftest import z2_table


def test_fixture_groupoids_are_valid(pair_groupoid, z2_groupoid):
    assert validate_groupoid(pair_groupoid).passed
    assert validate_groupoid(z2_groupoid).passed
    assert pair_groupoid.identities() == {"ex", "ey"}


def test_unknown_atoms_are_rejected():
    with pytest.raises(CarrierMismatchError):
        Semigroupoid(FinSet(("o",)), FinSet(("f",)), {"f": "o"}, {"f": "p"}, {})


def test_missing_composite_breaks_composability(pair_groupoid):
    comp = dict(pair_groupoid.comp)
    del comp[("g", "f")]
    broken = Semigroupoid(
        pair_groupoid.objects, pair_groupoid.morphisms, pair_groupoid.src, pair_groupoid.tgt, comp
    )
    report = validate_semigroupoid(broken)
    assert not report.get("composability").passed
    assert report.get("composability").witness == ("g", "f")


def test_isolated_objects_are_not_allowed():
    s = Semigroupoid(FinSet(("o", "p")), FinSet(("e",)), {"e": "o"}, {"e": "o"}, {("e", "e"): "e"})
    report = validate_semigroupoid(s)
    assert report.get("jointly-epic").witness == "p"


def test_wrong_inverse_fails_the_inverse_law(pair_groupoid):
    inv = dict(pair_groupoid.inv)
    inv["f"] = "f"
    broken = Groupoid(pair_groupoid.base, pair_groupoid.ident, inv)
    assert not validate_groupoid(broken).get("inverse-law").passed


def test_band_is_regular_but_not_locally_cancellative(band):
    regularity = is_regular(band)
    assert regularity
    assert regularity.pseudoinverses["a"] == {"a", "b"}
    cancellativity = is_locally_cancellative(band)
    assert not cancellativity
    assert cancellativity.witness is not None
    with pytest.raises(PreconditionError):
        require_lc_regular(band, "test")


def test_mirrored_local_cancellativity(band, pair_groupoid):
    assert check_lc_symmetric_equivalence(band)
    assert check_lc_symmetric_equivalence(pair_groupoid.base)


def test_groupoids_are_monic_epic_but_bands_are_not(pair_groupoid, band):
    assert is_monic_epic(pair_groupoid.base)
    assert not is_monic_epic(band)


def test_promotion_recovers_the_groupoid(pair_groupoid):
    promoted = promote_to_groupoid(pair_groupoid.base)
    assert promoted == pair_groupoid
    assert find_identities(pair_groupoid.base) == {"x": "ex", "y": "ey"}


def test_pseudoinverses_respect_endpoints(pair_groupoid):
    assert pseudoinverse_table(pair_groupoid.base)["f"] == {"g"}


def test_one_object_semigroupoid_and_relabelling():
    s = one_object_semigroupoid(z2_table(), obj="o")
    assert validate_semigroupoid(s).passed
    assert relabel_objects(s, {"o": "a"}).objects.elements == ("a",)


def test_product_groupoid(pair_groupoid, z2_groupoid):
    g = product_groupoid(pair_groupoid, z2_groupoid)
    assert validate_groupoid(g).passed
    assert g.morphisms.size == 8
    assert g.ident["(x,a)"] == "(ex,a)"


def test_restriction_to_a_subgroupoid(pair_groupoid):
    sub = restrict_groupoid(pair_groupoid, ["x"], ["ex"])
    assert is_subgroupoid(sub, pair_groupoid)
    with pytest.raises(PreconditionError):
        restrict_semigroupoid(pair_groupoid.base, ["x", "y"], ["f", "g"])


def test_isomorphism_check(z2_groupoid):
    assert groupoid_is_isomorphic(z2_groupoid, z2_groupoid, {"a": "a"}, {"a": "a", "b": "b"})
    assert not groupoid_is_isomorphic(z2_groupoid, z2_groupoid, {"a": "a"}, {"a": "b", "b": "a"})


def test_empty_groupoid_is_valid():
    assert validate_groupoid(empty_groupoid()).passed
