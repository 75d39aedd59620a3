import pytest

from pupil_labs.rel_frobenius.correspond import frob_to_groupoid
from pupil_labs.rel_frobenius.errors import PreconditionError
from pupil_labs.rel_frobenius.morphisms import Functor, Semifunctor
from pupil_labs.rel_frobenius.quotient import (
    Congruence,
    F_functor,
    F_on_semifunctor,
    F_on_subsemigroupoid,
    collapse,
    corollary_quotient,
    generated_congruence,
    idempotent_generators,
    quotient_counit,
    quotient_unit,
    quotient_unit_relation,
    unit_and_counit,
)
from pupil_labs.rel_frobenius.structures import validate_groupoid


def test_congruence_classes_must_partition_the_morphisms(pair_groupoid):
    with pytest.raises(ValueError, match="disjoint"):
        Congruence(pair_groupoid.base, ({"ex", "f"}, {"f", "g"}, {"ey"}))
    with pytest.raises(ValueError, match="cover"):
        Congruence(pair_groupoid.base, ({"ex"}, {"f"}))


def test_discrete_congruence_passes_its_checks(pair_groupoid):
    c = Congruence.discrete(pair_groupoid.base)
    assert c.is_discrete()
    assert c.check().passed
    assert c.atom("f") == "[f]"


def test_generators_must_share_endpoints(pair_groupoid):
    with pytest.raises(PreconditionError):
        generated_congruence(pair_groupoid.base, [("ex", "f")])


def test_collapsing_a_group_to_a_point(z2_groupoid):
    c = Congruence(z2_groupoid.base, ({"a", "b"},))
    assert c.check().passed
    q = collapse(z2_groupoid.base, c)
    assert q.morphisms.elements == ("[a]",)


def test_collapse_refuses_a_foreign_congruence(pair_groupoid, z2_groupoid):
    with pytest.raises(PreconditionError):
        collapse(pair_groupoid.base, Congruence.discrete(z2_groupoid.base))


def test_idempotents_of_a_groupoid_generate_nothing(pair_groupoid):
    assert idempotent_generators(pair_groupoid.base) == set()


def test_F_on_a_groupoid_renames_morphisms(pair_groupoid):
    g = F_functor(pair_groupoid.base)
    assert validate_groupoid(g).passed
    assert g.morphisms.elements == ("[ex]", "[ey]", "[f]", "[g]")
    assert g.ident == {"x": "[ex]", "y": "[ey]"}
    assert g.inv["[f]"] == "[g]"


def test_F_needs_local_cancellativity(band):
    with pytest.raises(PreconditionError):
        F_functor(band)


def test_unit_and_counit_are_mutually_inverse(pair_groupoid):
    unit = quotient_unit(pair_groupoid.base)
    counit = quotient_counit(pair_groupoid)
    assert unit.validate().passed
    assert counit.validate().passed
    assert {counit.on_morphisms[image] for image in unit.on_morphisms.values()} == set(
        pair_groupoid.morphisms
    )


def test_adjunction_laws_on_a_groupoid(z2_groupoid, trivial):
    ident = Semifunctor(
        z2_groupoid.base, z2_groupoid.base, {"a": "a"}, {"a": "a", "b": "b"}
    )
    collapse_to_point = Functor(
        z2_groupoid, frob_to_groupoid(trivial), {"a": "e"}, {"a": "e", "b": "e"}
    )
    check = unit_and_counit(z2_groupoid, semifunctors=[ident], functors=[collapse_to_point])
    ids = [r.id for r in check.report.results]
    assert ids == [
        "unit",
        "unit-relation",
        "unit-relation-F",
        "triangle-F",
        "counit",
        "triangle-inclusion",
        "naturality-unit",
        "naturality-counit",
    ]
    assert check.report.passed
    assert check.counit is not None


def test_adjunction_laws_on_a_semigroupoid(pair_groupoid):
    check = unit_and_counit(pair_groupoid.base)
    assert check.counit is None
    assert check.report.passed


def test_corollary_quotient_of_z2(z2_hstar):
    f = corollary_quotient(z2_hstar)
    assert f.carrier.elements == ("[a]", "[b]")
    assert f.unit_set == {"[a]"}


def test_F_on_morphisms(pair_groupoid):
    s = pair_groupoid.base
    projection = quotient_unit(s)
    image = F_on_semifunctor(projection)
    assert image.validate().passed
    assert image.on_morphisms["[f]"] == "[[f]]"

    graph = F_on_subsemigroupoid(quotient_unit_relation(s))
    assert graph.validate().passed
    assert graph.relation.morphisms.size == 4
