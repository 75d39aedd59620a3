import functools
import itertools
import typing as T

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pupil_labs.rel_frobenius.algebra import FrobAlgebra
from pupil_labs.rel_frobenius.correspond import frob_to_groupoid, groupoid_to_frob, is_group
from pupil_labs.rel_frobenius.enumeration import enumerate_frobenius
from pupil_labs.rel_frobenius.errors import CarrierMismatchError, CompositionError, PreconditionError
from pupil_labs.rel_frobenius.finrel import Rel, identity
from pupil_labs.rel_frobenius.formats.structure_file import MorphismFile, load
from pupil_labs.rel_frobenius.morphisms import (
    Functor,
    Multifunctor,
    RelMorphism,
    check_I,
    check_I_prime,
    check_mul_preserving,
    check_R,
    classify,
    compose_morphisms,
    functor_to_morphism,
    hstar_adjunction_report,
    hstar_morphism_to_subsemigroupoid,
    identity_morphism,
    lrs_adjunction_report,
    morphism_report,
    morphism_to_functor,
    morphism_to_multifunctor,
    morphism_to_multisemifunctor,
    morphism_to_semifunctor,
    morphism_to_subgroupoid,
    multifunctor_to_morphism,
    multisemifunctor_to_morphism,
    objects_coincide_with_idempotents,
    semifunctor_to_morphism,
    subgroupoid_to_morphism,
    subsemigroupoid_to_hstar_morphism,
    unit_iso_predicate,
)
from pupil_labs.rel_frobenius.structures import product_groupoid
from tests import FIXTURES_DIR


def relmorphism(name: str) -> RelMorphism:
    loaded = load(FIXTURES_DIR / name)
    assert isinstance(loaded, MorphismFile)
    return loaded.morphism


@pytest.fixture
def to_trivial() -> RelMorphism:
    return relmorphism("z2_to_trivial.relmor")


def test_classes_of_the_fixture_morphisms(to_trivial):
    assert classify(relmorphism("z2_identity.relmor")) == {"rel", "algebra", "func"}
    assert classify(to_trivial) == {"rel", "algebra", "func"}
    assert classify(relmorphism("z2_empty.relmor")) == {"rel", "algebra"}


def test_swapping_relation_breaks_the_unit(z2):
    swap = RelMorphism.from_pairs(z2, z2, [("a", "b"), ("b", "a")])
    assert check_R(swap) is False
    assert check_I(swap)
    assert not check_mul_preserving(swap)
    assert classify(swap) == frozenset()


def test_morphism_report_lists_every_condition(to_trivial):
    report = morphism_report(to_trivial)
    assert [r.id for r in report.results] == [
        "R",
        "I",
        "multiplication",
        "function",
        "unit",
        "class:rel",
        "class:algebra",
        "class:func",
    ]
    assert report.passed


def test_morphisms_need_matching_kinds_and_carriers(z2, z2_hstar, trivial):
    with pytest.raises(PreconditionError):
        RelMorphism(z2, z2_hstar, identity(z2.carrier))
    with pytest.raises(CarrierMismatchError):
        RelMorphism(z2, trivial, identity(z2.carrier))


def test_hstar_morphisms_use_the_pseudoinverse_condition(z2_hstar):
    m = identity_morphism(z2_hstar)
    assert check_I_prime(m)
    with pytest.raises(PreconditionError):
        check_I(m)
    semifunctor = morphism_to_semifunctor(m)
    assert semifunctor.validate().passed
    assert semifunctor_to_morphism(semifunctor).r == m.r


def test_function_morphisms_become_functors(to_trivial):
    f = morphism_to_functor(to_trivial)
    assert f.on_objects == {"a": "e"}
    assert f.validate().passed
    assert functor_to_morphism(f).r == to_trivial.r


def test_only_functions_become_functors():
    with pytest.raises(PreconditionError):
        morphism_to_functor(relmorphism("z2_empty.relmor"))


def test_empty_morphism_is_a_multifunctor_with_empty_images():
    m = relmorphism("z2_empty.relmor")
    f = morphism_to_multifunctor(m)
    assert all(not images for images in f.on_morphisms.values())
    assert multifunctor_to_morphism(f).r == m.r


def test_invalid_categorical_morphisms_are_reported(z2_groupoid):
    flip = Functor(z2_groupoid, z2_groupoid, {"a": "a"}, {"a": "b", "b": "a"})
    report = flip.validate()
    assert report.get("identities").witness == "a"
    assert not report.get("composition").passed

    multi = Multifunctor(z2_groupoid, z2_groupoid, {"a": {"b"}})
    assert not multi.validate().get("composition").passed
    with pytest.raises(PreconditionError):
        multifunctor_to_morphism(multi)


def test_graph_subgroupoid_round_trip(to_trivial):
    sub = morphism_to_subgroupoid(to_trivial)
    assert sub.validate().passed
    assert sub.relation.morphisms.elements == ("(a,e)", "(b,e)")
    assert subgroupoid_to_morphism(sub).r == to_trivial.r


def test_composition_of_algebra_morphisms(z2, to_trivial):
    composite = compose_morphisms(identity_morphism(z2), to_trivial)
    assert composite.r == to_trivial.r
    with pytest.raises(PreconditionError):
        compose_morphisms(to_trivial, identity_morphism(z2))


def test_composition_of_functors(z2, trivial, z2_groupoid):
    ident = Functor(z2_groupoid, z2_groupoid, {"a": "a"}, {"a": "a", "b": "b"})
    collapse = Functor(z2_groupoid, frob_to_groupoid(trivial), {"a": "e"}, {"a": "e", "b": "e"})
    composite = compose_morphisms(ident, collapse)
    assert composite == collapse
    with pytest.raises(PreconditionError):
        compose_morphisms(ident, identity_morphism(z2))


def test_hstar_adjunction(z2_hstar):
    assert unit_iso_predicate(z2_hstar)
    report = hstar_adjunction_report(z2_hstar)
    assert report.passed
    assert report.get("unit-iso").note == "unit is an isomorphism"


def test_semigroupoid_adjunction(pair_groupoid, band):
    report = lrs_adjunction_report(pair_groupoid.base)
    assert report.passed
    assert objects_coincide_with_idempotents(pair_groupoid.base)
    assert not objects_coincide_with_idempotents(band)


def test_hstar_morphisms_on_the_semigroupoid_side(z2_hstar):
    m = identity_morphism(z2_hstar)
    multi = morphism_to_multisemifunctor(m)
    assert multi.validate().passed
    assert multisemifunctor_to_morphism(multi).r == m.r

    sub = hstar_morphism_to_subsemigroupoid(m)
    assert sub.validate().passed
    assert subsemigroupoid_to_hstar_morphism(sub).r == m.r


def test_functor_merging_objects_is_func_class(pair_groupoid, trivial):
    point = frob_to_groupoid(trivial)
    collapse = Functor(
        pair_groupoid, point, {"x": "e", "y": "e"}, dict.fromkeys(pair_groupoid.morphisms, "e")
    )
    assert collapse.validate().passed

    m = functor_to_morphism(collapse)
    assert check_mul_preserving(m)
    assert classify(m) == {"rel", "algebra", "func"}
    assert morphism_to_functor(m).on_morphisms == collapse.on_morphisms

    singletons = Multifunctor(pair_groupoid, point, {f: {"e"} for f in pair_groupoid.morphisms})
    assert singletons.validate().passed
    assert multifunctor_to_morphism(singletons).r == m.r


def test_two_valued_multifunctor_on_z2(z2_groupoid):
    both = frozenset({"a", "b"})
    spread = Multifunctor(z2_groupoid, z2_groupoid, {"a": both, "b": both})
    assert spread.validate().passed

    m = multifunctor_to_morphism(spread)
    assert classify(m) == {"rel", "algebra"}
    assert morphism_to_multifunctor(m).on_morphisms == spread.on_morphisms


def test_lax_multifunctor_without_an_algebra_graph(z2_groupoid):
    lax = Multifunctor(z2_groupoid, z2_groupoid, {"a": {"a"}, "b": {"a", "b"}})
    assert lax.validate().passed
    with pytest.raises(PreconditionError, match="algebra"):
        multifunctor_to_morphism(lax)


def test_composite_through_a_non_group_can_leave_rel_class(trivial, diagonal, z2_groupoid):
    klein = groupoid_to_frob(product_groupoid(z2_groupoid, z2_groupoid))
    split = RelMorphism.from_pairs(trivial, diagonal, [("e", "a"), ("e", "b")])
    spread = RelMorphism.from_pairs(
        diagonal, klein, [("a", "(a,a)"), ("a", "(b,a)"), ("b", "(a,a)"), ("b", "(a,b)")]
    )
    assert classify(split) == {"rel", "algebra"}
    assert classify(spread) == {"rel", "algebra"}
    with pytest.raises(CompositionError, match="rel"):
        compose_morphisms(split, spread)


@functools.cache
def small_algebras(max_size: int) -> tuple[FrobAlgebra, ...]:
    return tuple(a for n in range(1, max_size + 1) for a in enumerate_frobenius(n))


def all_relmorphisms(source: FrobAlgebra, target: FrobAlgebra) -> T.Iterator[RelMorphism]:
    shape = (source.carrier.size, target.carrier.size)
    for bits in itertools.product((False, True), repeat=shape[0] * shape[1]):
        matrix = np.array(bits, dtype=bool).reshape(shape)
        yield RelMorphism(source, target, Rel(source.carrier, target.carrier, matrix))


@functools.cache
def closed_composable_pairs() -> tuple[tuple[RelMorphism, RelMorphism], ...]:
    """Pairs of rel-class morphisms through a group, or starting with a func-class one."""
    algebras = small_algebras(2)
    rel_class = [
        m for a in algebras for b in algebras for m in all_relmorphisms(a, b) if "rel" in classify(m)
    ]
    return tuple(
        (r, s)
        for r in rel_class
        for s in rel_class
        if r.target == s.source and (is_group(r.target) or "func" in classify(r))
    )


@st.composite
def relmorphisms(draw: st.DrawFn) -> RelMorphism:
    algebras = small_algebras(3)
    source, target = draw(st.sampled_from(algebras)), draw(st.sampled_from(algebras))
    cells = source.carrier.size * target.carrier.size
    bits = draw(st.lists(st.booleans(), min_size=cells, max_size=cells))
    matrix = np.array(bits, dtype=bool).reshape(source.carrier.size, target.carrier.size)
    return RelMorphism(source, target, Rel(source.carrier, target.carrier, matrix))


@settings(max_examples=1000, deadline=None)
@given(relmorphisms())
def test_morphism_classes_are_nested(m):
    classes = classify(m)
    if "func" in classes:
        assert "algebra" in classes
    if "algebra" in classes:
        assert "rel" in classes


@settings(max_examples=1000, deadline=None)
@given(st.data())
def test_composites_keep_the_shared_classes(data):
    r, s = data.draw(st.sampled_from(closed_composable_pairs()))
    composite = compose_morphisms(r, s)
    assert classify(r) & classify(s) <= classify(composite)
