"""Morphisms on both sides of the correspondence.

On the algebra side a morphism is a relation ``r : X ⇸ Y`` between carriers,
sorted into three nested classes:

- ``rel``: (R) and the involution condition, (I) for Frobenius algebras and
  (I') for H*-algebras;
- ``algebra``: ``r∘m_X = m_Y∘(r×r)`` on the pairs ``m_X`` composes, and the
  involution condition;
- ``func``: ``algebra``, ``r`` a function and, for Frobenius algebras,
  ``r∘u_X ⊆ u_Y``.

On the categorical side these are subgroupoids (subsemigroupoids) of the
product, multi-valued functors (semifunctors) and functors (semifunctors).
"""

import logging
import typing as T
from dataclasses import dataclass

from pupil_labs.rel_frobenius.algebra import (
    Algebra,
    FrobAlgebra,
    HStarAlgebra,
    MulCandidate,
    PartialProduct,
)
from pupil_labs.rel_frobenius.correspond import (
    frob_to_groupoid,
    groupoid_to_frob,
    hstar_to_semigroupoid,
    semigroupoid_to_hstar,
)
from pupil_labs.rel_frobenius.errors import (
    CarrierMismatchError,
    CompositionError,
    InvariantViolation,
    PreconditionError,
)
from pupil_labs.rel_frobenius.finrel import (
    FinSet,
    Rel,
    compose,
    compose_all,
    converse,
    eta,
    identity,
    intersection,
    is_function,
    is_subrelation,
    name,
    point,
    product,
    product_set,
    swap,
)
from pupil_labs.rel_frobenius.reports import ValidationReport
from pupil_labs.rel_frobenius.structures import (
    Groupoid,
    Semigroupoid,
    is_locally_cancellative,
    is_regular,
    is_subgroupoid,
    is_subsemigroupoid,
    product_groupoid,
    product_semigroupoid,
    pseudoinverse_table,
    require_lc_regular,
    restrict_groupoid,
    restrict_semigroupoid,
    validate_groupoid,
    validate_semigroupoid,
)
from pupil_labs.rel_frobenius.utilities import pair_atom, split_pair_atom

logger = logging.getLogger(__name__)

CLASSES = ("rel", "algebra", "func")


@dataclass(frozen=True)
class RelMorphism:
    source: Algebra
    target: Algebra
    r: Rel

    def __post_init__(self) -> None:
        if type(self.source) is not type(self.target):
            raise PreconditionError("source and target must be algebras of the same kind")
        if self.r.dom != self.source.carrier or self.r.cod != self.target.carrier:
            raise CarrierMismatchError(
                f"relation {self.r.dom.name} -> {self.r.cod.name} does not match carriers "
                f"{self.source.carrier.name} -> {self.target.carrier.name}"
            )

    @classmethod
    def from_pairs(
        cls, source: Algebra, target: Algebra, pairs: T.Iterable[tuple[str, str]]
    ) -> "RelMorphism":
        return cls(source, target, Rel.from_pairs(source.carrier, target.carrier, pairs))

    @property
    def between_frobenius(self) -> bool:
        return isinstance(self.source, FrobAlgebra)

    def pairs(self) -> list[tuple[str, str]]:
        return T.cast(list[tuple[str, str]], self.r.pairs())


def identity_morphism(a: Algebra) -> RelMorphism:
    return RelMorphism(a, a, identity(a.carrier))


# -- conditions -----------------------------------------------------------------


def check_R(m: RelMorphism) -> bool:
    """``(m_X × m_Y)∘(1 × σ × 1)∘(⌜r⌝ × ⌜r⌝) = ⌜r⌝``."""
    x, y = m.source.carrier, m.target.carrier
    shuffle = product(identity(x), swap(y, x), identity(y))
    lhs = compose_all(
        product(m.source.m, m.target.m), shuffle, product(name(m.r), name(m.r))
    )
    return lhs == name(m.r)


def _frobenius_pair(m: RelMorphism) -> tuple[FrobAlgebra, FrobAlgebra]:
    if not m.between_frobenius:
        raise PreconditionError("(I) is stated for morphisms between Frobenius algebras")
    return T.cast(FrobAlgebra, m.source), T.cast(FrobAlgebra, m.target)


def _hstar_pair(m: RelMorphism) -> tuple[HStarAlgebra, HStarAlgebra]:
    if not isinstance(m.source, HStarAlgebra):
        raise PreconditionError("(I') is stated for morphisms between H*-algebras")
    return m.source, T.cast(HStarAlgebra, m.target)


def check_I(m: RelMorphism) -> bool:
    """``(x, y) ∈ r`` iff ``(x⁻¹, y⁻¹) ∈ r``.

    The relational form compares ``r`` conjugated by the inverse relations
    ``(1 × η†)∘(m† × 1)∘(u × 1)`` on either side.
    """
    a, b = _frobenius_pair(m)
    x, y = a.carrier, b.carrier
    lhs = compose_all(
        product(m.r, converse(eta(x))),
        product(converse(a.m), identity(x)),
        product(a.u, identity(x)),
    )
    rhs = compose_all(
        product(converse(b.u), identity(y)),
        product(b.m, identity(y)),
        product(m.r, eta(y)),
    )
    categorical = lhs == rhs

    inv_x = frob_to_groupoid(a).inv
    inv_y = frob_to_groupoid(b).inv
    concrete = all(
        m.r.relates(p, q) == m.r.relates(inv_x[p], inv_y[q]) for p in x for q in y
    )
    if categorical != concrete:
        raise InvariantViolation(
            "(I) relational form versus the inverse-swap form",
            f"relational {categorical}, elementwise {concrete}",
        )
    return concrete


def check_I_prime(m: RelMorphism) -> bool:
    """``(x, y) ∈ r`` iff ``(x*, y*) ∈ r`` for every choice of pseudoinverses.

    Cross-checked against the point-level equation ``y†∘r∘x = y*†∘r∘x*`` on
    single-element points, and against the existential reading.
    """
    a, b = _hstar_pair(m)
    pa, pb = a.partial, b.partial
    x, y = a.carrier, b.carrier

    universal = all(
        m.r.relates(p, q) == m.r.relates(ps, qs)
        for p in x
        for q in y
        for ps in pa.pseudoinverses(p)
        for qs in pb.pseudoinverses(q)
    )
    existential = all(
        m.r.relates(p, q)
        == any(m.r.relates(ps, qs) for ps in pa.pseudoinverses(p) for qs in pb.pseudoinverses(q))
        for p in x
        for q in y
    )

    def pairing(p: T.Iterable[str], q: T.Iterable[str]) -> Rel:
        return compose_all(converse(point(y, q)), m.r, point(x, p))

    point_level = all(
        pairing({p}, {q}) == pairing(pa.pseudoinverses(p), pb.pseudoinverses(q))
        for p in x
        for q in y
    )
    if universal != point_level:
        raise InvariantViolation(
            "(I') pseudoinverse-swap form versus the point-level equation",
            f"elementwise {universal}, point-level {point_level}",
        )
    if universal != existential:
        logger.warning(
            f"(I') universal reading {universal} differs from existential reading {existential}"
        )
    return universal


def _check_involution(m: RelMorphism) -> bool:
    return check_I(m) if m.between_frobenius else check_I_prime(m)


def composable_part(a: Algebra) -> Rel:
    """The partial identity on ``X × X`` at the pairs ``m`` is defined on."""
    x = a.carrier
    return intersection(compose(converse(a.m), a.m), identity(product_set(x, x)))


def check_mul_preserving(m: RelMorphism) -> bool:
    """``r∘m_X = m_Y∘(r×r)`` restricted to composable pairs of the source.

    Pairs that do not compose in the source may be sent to pairs that do, as a
    functor merging objects does.
    """
    restricted = compose_all(m.target.m, product(m.r, m.r), composable_part(m.source))
    return compose(m.r, m.source.m) == restricted


def _unit_two_cell(m: RelMorphism) -> bool:
    if not m.between_frobenius:
        return True
    a, b = _frobenius_pair(m)
    return is_subrelation(compose(m.r, a.u), b.u)


def classify(m: RelMorphism) -> frozenset[str]:
    r_holds = check_R(m)
    involutive = _check_involution(m)
    mul = check_mul_preserving(m)

    classes = set()
    if r_holds and involutive:
        classes.add("rel")
    if mul and involutive:
        classes.add("algebra")
        if not r_holds:
            raise InvariantViolation("multiplication-preserving morphisms satisfy (R)")
    if "algebra" in classes and is_function(m.r) and _unit_two_cell(m):
        classes.add("func")
    return frozenset(classes)


def morphism_report(m: RelMorphism) -> ValidationReport:
    report = ValidationReport("relmorphism")
    report.add("R", check_R(m))
    if m.between_frobenius:
        report.add("I", check_I(m))
    else:
        report.add("I'", check_I_prime(m))
    report.add("multiplication", check_mul_preserving(m))
    report.add("function", is_function(m.r))
    if m.between_frobenius:
        report.add("unit", _unit_two_cell(m))
    classes = classify(m)
    for cls in CLASSES:
        report.add(f"class:{cls}", cls in classes)
    return report


def _require_class(m: RelMorphism, cls: str, operation: str) -> None:
    if cls not in classify(m):
        raise PreconditionError(f"{operation} needs a morphism of class {cls}")


# -- categorical-side morphisms ---------------------------------------------------


def _set_product(pp: PartialProduct, left: T.Iterable[str], right: T.Iterable[str]) -> frozenset[str]:
    right = tuple(right)
    return frozenset(
        T.cast(str, pp(b, a)) for b in left for a in right if pp.defined(b, a)
    )


@dataclass(frozen=True)
class Semifunctor:
    variant: T.ClassVar[str] = "semifunctor"

    source: Semigroupoid
    target: Semigroupoid
    on_objects: T.Mapping[str, str]
    on_morphisms: T.Mapping[str, str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "on_objects", dict(self.on_objects))
        object.__setattr__(self, "on_morphisms", dict(self.on_morphisms))
        _require_total(self.on_objects, self.source.objects, self.target.objects, "objects")
        _require_total(self.on_morphisms, self.source.morphisms, self.target.morphisms, "morphisms")

    def validate(self) -> ValidationReport:
        report = ValidationReport(self.variant)
        _semifunctor_checks(self.source, self.target, self.on_objects, self.on_morphisms, report)
        return report


@dataclass(frozen=True)
class Functor:
    variant: T.ClassVar[str] = "functor"

    source: Groupoid
    target: Groupoid
    on_objects: T.Mapping[str, str]
    on_morphisms: T.Mapping[str, str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "on_objects", dict(self.on_objects))
        object.__setattr__(self, "on_morphisms", dict(self.on_morphisms))
        _require_total(self.on_objects, self.source.objects, self.target.objects, "objects")
        _require_total(self.on_morphisms, self.source.morphisms, self.target.morphisms, "morphisms")

    def validate(self) -> ValidationReport:
        report = ValidationReport(self.variant)
        _semifunctor_checks(
            self.source.base, self.target.base, self.on_objects, self.on_morphisms, report
        )
        bad = next(
            (
                x
                for x in self.source.objects
                if self.on_morphisms[self.source.ident[x]]
                != self.target.ident[self.on_objects[x]]
            ),
            None,
        )
        report.add("identities", bad is None, bad)
        return report


def _require_total(
    mapping: T.Mapping[str, str], dom: FinSet, cod: FinSet, what: str
) -> None:
    if set(mapping) != set(dom):
        raise CarrierMismatchError(f"the map on {what} must be defined on every element")
    for k, v in mapping.items():
        if v not in cod:
            raise CarrierMismatchError(f"{k} is sent to {v}, which is not in the target")


def _semifunctor_checks(
    g: Semigroupoid,
    h: Semigroupoid,
    f0: T.Mapping[str, str],
    f1: T.Mapping[str, str],
    report: ValidationReport,
) -> None:
    bad_src = next((f for f in g.morphisms if f0[g.src[f]] != h.src[f1[f]]), None)
    report.add("source", bad_src is None, bad_src)
    bad_tgt = next((f for f in g.morphisms if f0[g.tgt[f]] != h.tgt[f1[f]]), None)
    report.add("target", bad_tgt is None, bad_tgt)
    bad_comp = next(
        (
            pair
            for pair, gf in sorted(g.comp.items())
            if h.comp.get((f1[pair[0]], f1[pair[1]])) != f1[gf]
        ),
        None,
    )
    report.add("composition", bad_comp is None, bad_comp)


@dataclass(frozen=True)
class Multifunctor:
    """A multi-valued functor ``F : G1 → P(H1)``."""

    variant: T.ClassVar[str] = "multifunctor"

    source: Groupoid
    target: Groupoid
    on_morphisms: T.Mapping[str, frozenset[str]]

    def __post_init__(self) -> None:
        _freeze_multimap(self, self.source.morphisms, self.target.morphisms)

    def validate(self) -> ValidationReport:
        report = ValidationReport(self.variant)
        _multi_composition_check(self.source.base, self.target.base, self.on_morphisms, report)

        f = self.on_morphisms
        identities = self.target.identities()
        bad_ident = next(
            (
                x
                for x in self.source.objects
                if f[self.source.ident[x]] and not f[self.source.ident[x]] & identities
            ),
            None,
        )
        report.add("identities", bad_ident is None, bad_ident)
        return report


@dataclass(frozen=True)
class MultiSemifunctor:
    variant: T.ClassVar[str] = "multisemifunctor"

    source: Semigroupoid
    target: Semigroupoid
    on_morphisms: T.Mapping[str, frozenset[str]]

    def __post_init__(self) -> None:
        _freeze_multimap(self, self.source.morphisms, self.target.morphisms)

    def validate(self) -> ValidationReport:
        report = ValidationReport(self.variant)
        _multi_composition_check(self.source, self.target, self.on_morphisms, report)
        return report


def _freeze_multimap(obj: T.Any, dom: FinSet, cod: FinSet) -> None:
    mapping = {k: frozenset(v) for k, v in obj.on_morphisms.items()}
    for a in dom:
        mapping.setdefault(a, frozenset())
    for k, vs in mapping.items():
        if k not in dom or not vs <= set(cod):
            raise CarrierMismatchError(f"{k} -> {sorted(vs)} does not fit the carriers")
    object.__setattr__(obj, "on_morphisms", mapping)


def _multi_composition_check(
    g: Semigroupoid,
    h: Semigroupoid,
    f: T.Mapping[str, frozenset[str]],
    report: ValidationReport,
) -> None:
    """``g∘f ∋ h`` implies ``F(g)∘F(f) ⊇ F(h)``, on composable pairs only."""
    pp = h.partial
    bad = next(
        (
            pair
            for pair, gf in sorted(g.comp.items())
            if not f[gf] <= _set_product(pp, f[pair[0]], f[pair[1]])
        ),
        None,
    )
    report.add("composition", bad is None, bad)


@dataclass(frozen=True)
class Subgroupoid:
    variant: T.ClassVar[str] = "subgroupoid"

    source: Groupoid
    target: Groupoid
    relation: Groupoid

    def validate(self) -> ValidationReport:
        report = ValidationReport(self.variant)
        report.extend(validate_groupoid(self.relation), prefix="relation:")
        inside = is_subgroupoid(self.relation, product_groupoid(self.source, self.target))
        report.add("subgroupoid", inside)
        return report


@dataclass(frozen=True)
class Subsemigroupoid:
    variant: T.ClassVar[str] = "subsemigroupoid"

    source: Semigroupoid
    target: Semigroupoid
    relation: Semigroupoid

    def validate(self) -> ValidationReport:
        report = ValidationReport(self.variant)
        validity = validate_semigroupoid(self.relation)
        report.extend(validity, prefix="relation:")
        if validity.passed:
            report.add("regular", bool(is_regular(self.relation)))
            report.add("locally-cancellative", bool(is_locally_cancellative(self.relation)))
        inside = is_subsemigroupoid(
            self.relation, product_semigroupoid(self.source, self.target)
        )
        report.add("subsemigroupoid", inside)
        return report


GroupoidMorphism = Functor | Multifunctor | Subgroupoid
SemigroupoidMorphism = Semifunctor | MultiSemifunctor | Subsemigroupoid


def _require_valid(morphism: T.Any) -> None:
    report = morphism.validate()
    if not report.passed:
        failure = report.first_failure()
        raise PreconditionError(
            f"invalid {morphism.variant}: {failure.id} fails", witness=failure.witness
        )


def _assert_valid(morphism: T.Any, statement: str) -> None:
    report = morphism.validate()
    if not report.passed:
        raise InvariantViolation(statement, str(report.first_failure()))


# -- graph relations and their algebras ---------------------------------------------


def _relation_pairs(relation: Semigroupoid) -> list[tuple[str, str]]:
    return [split_pair_atom(atom) for atom in relation.morphisms]


def _graph_candidate(m: RelMorphism) -> MulCandidate:
    """The multiplication ``(a,b)(c,d) = (ac, bd)`` on the pairs of ``r``."""
    pa, pb = m.source.partial, m.target.partial
    pairs = m.pairs()
    carrier = FinSet(tuple(pair_atom(x, y) for x, y in pairs))
    triples = []
    for a, b in pairs:
        for c, d in pairs:
            ac, bd = pa(a, c), pb(b, d)
            if ac is None or bd is None:
                continue
            if not m.r.relates(ac, bd):
                raise InvariantViolation(
                    "a relation satisfying (R) is closed under multiplication",
                    f"({a},{b})({c},{d}) = ({ac},{bd})",
                )
            triples.append((pair_atom(a, b), pair_atom(c, d), pair_atom(ac, bd)))
    return MulCandidate.from_triples(carrier, triples)


def morphism_to_subgroupoid(m: RelMorphism) -> Subgroupoid:
    a, b = _frobenius_pair(m)
    if not (check_R(m) and check_I(m)):
        raise PreconditionError("morphism_to_subgroupoid needs (R) and (I)")

    c = _graph_candidate(m)
    units = {pair_atom(x, y) for x, y in m.pairs() if x in a.unit_set and y in b.unit_set}
    try:
        on_graph = FrobAlgebra(c, frozenset(units))
    except PreconditionError as exc:
        raise InvariantViolation(
            "the graph of an (R)+(I) morphism is a Frobenius algebra", str(exc)
        ) from exc

    sub = Subgroupoid(frob_to_groupoid(a), frob_to_groupoid(b), frob_to_groupoid(on_graph))
    _assert_valid(sub, "the graph of an (R)+(I) morphism is a subgroupoid of the product")
    return sub


def subgroupoid_to_morphism(s: Subgroupoid) -> RelMorphism:
    _require_valid(s)
    m = RelMorphism.from_pairs(
        groupoid_to_frob(s.source), groupoid_to_frob(s.target), _relation_pairs(s.relation.base)
    )
    if not (check_R(m) and check_I(m)):
        raise InvariantViolation("a subgroupoid of the product satisfies (R) and (I)")
    return m


def hstar_morphism_to_subsemigroupoid(m: RelMorphism) -> Subsemigroupoid:
    a, b = _hstar_pair(m)
    if not (check_R(m) and check_I_prime(m)):
        raise PreconditionError("hstar_morphism_to_subsemigroupoid needs (R) and (I')")

    try:
        on_graph = HStarAlgebra(_graph_candidate(m))
    except PreconditionError as exc:
        raise InvariantViolation(
            "the graph of an (R)+(I') morphism is an H*-algebra", str(exc)
        ) from exc

    sub = Subsemigroupoid(
        hstar_to_semigroupoid(a), hstar_to_semigroupoid(b), hstar_to_semigroupoid(on_graph)
    )
    _assert_valid(sub, "the graph of an (R)+(I') morphism is a subsemigroupoid of the product")
    return sub


def subsemigroupoid_to_hstar_morphism(s: Subsemigroupoid) -> RelMorphism:
    _require_valid(s)
    m = RelMorphism.from_pairs(
        semigroupoid_to_hstar(s.source),
        semigroupoid_to_hstar(s.target),
        _relation_pairs(s.relation),
    )
    if not (check_R(m) and check_I_prime(m)):
        raise InvariantViolation("a subsemigroupoid of the product satisfies (R) and (I')")
    return m


def functor_to_morphism(f: Functor) -> RelMorphism:
    _require_valid(f)
    m = RelMorphism.from_pairs(
        groupoid_to_frob(f.source), groupoid_to_frob(f.target), f.on_morphisms.items()
    )
    if "func" not in classify(m):
        raise InvariantViolation("the graph of a functor is a func-class morphism")
    return m


def morphism_to_functor(m: RelMorphism) -> Functor:
    a, b = _frobenius_pair(m)
    _require_class(m, "func", "morphism_to_functor")
    g, h = frob_to_groupoid(a), frob_to_groupoid(b)
    on_morphisms = {x: y for x, y in m.pairs()}
    f = Functor(g, h, {u: on_morphisms[u] for u in g.objects}, on_morphisms)
    _assert_valid(f, "a func-class morphism is a functor")
    return f


def multifunctor_to_morphism(f: Multifunctor) -> RelMorphism:
    """The graph of ``f``, which must also be an algebra-class morphism.

    Preserving composition and identities lets ``F(g)F(f)`` be larger than
    ``F(gf)``, and such a graph is not an algebra morphism.
    """
    _require_valid(f)
    m = RelMorphism.from_pairs(
        groupoid_to_frob(f.source),
        groupoid_to_frob(f.target),
        ((x, y) for x, ys in f.on_morphisms.items() for y in ys),
    )
    _require_class(m, "algebra", "multifunctor_to_morphism")
    return m


def morphism_to_multifunctor(m: RelMorphism) -> Multifunctor:
    a, b = _frobenius_pair(m)
    _require_class(m, "algebra", "morphism_to_multifunctor")
    f = Multifunctor(
        frob_to_groupoid(a),
        frob_to_groupoid(b),
        {x: T.cast(frozenset[str], m.r.image(x)) for x in a.carrier},
    )
    _assert_valid(f, "an algebra-class morphism is a multi-valued functor")
    return f


def semifunctor_to_morphism(f: Semifunctor) -> RelMorphism:
    _require_valid(f)
    return RelMorphism.from_pairs(
        semigroupoid_to_hstar(f.source), semigroupoid_to_hstar(f.target), f.on_morphisms.items()
    )


def morphism_to_semifunctor(m: RelMorphism) -> Semifunctor:
    a, b = _hstar_pair(m)
    _require_class(m, "func", "morphism_to_semifunctor")
    g, h = hstar_to_semigroupoid(a), hstar_to_semigroupoid(b)
    on_morphisms = {x: y for x, y in m.pairs()}
    f = Semifunctor(g, h, {x: on_morphisms[x] for x in g.objects}, on_morphisms)
    _assert_valid(f, "a func-class H*-morphism is a semifunctor")
    return f


def multisemifunctor_to_morphism(f: MultiSemifunctor) -> RelMorphism:
    _require_valid(f)
    m = RelMorphism.from_pairs(
        semigroupoid_to_hstar(f.source),
        semigroupoid_to_hstar(f.target),
        ((x, y) for x, ys in f.on_morphisms.items() for y in ys),
    )
    _require_class(m, "algebra", "multisemifunctor_to_morphism")
    return m


def morphism_to_multisemifunctor(m: RelMorphism) -> MultiSemifunctor:
    a, b = _hstar_pair(m)
    _require_class(m, "algebra", "morphism_to_multisemifunctor")
    f = MultiSemifunctor(
        hstar_to_semigroupoid(a),
        hstar_to_semigroupoid(b),
        {x: T.cast(frozenset[str], m.r.image(x)) for x in a.carrier},
    )
    _assert_valid(f, "an algebra-class H*-morphism is a multi-valued semifunctor")
    return f


# -- composition ------------------------------------------------------------------


def _compose_pairs(
    first: T.Iterable[tuple[str, str]], second: T.Iterable[tuple[str, str]]
) -> set[tuple[str, str]]:
    after: dict[str, set[str]] = {}
    for y, z in second:
        after.setdefault(y, set()).add(z)
    return {(x, z) for x, y in first for z in after.get(y, ())}


def _object_pairs(relation: Semigroupoid) -> list[tuple[str, str]]:
    return [split_pair_atom(atom) for atom in relation.objects]


def compose_morphisms(a: T.Any, b: T.Any) -> T.Any:
    """``b ∘ a``: first ``a``, then ``b``; both of the same kind."""
    if type(a) is not type(b):
        raise PreconditionError(f"cannot compose a {type(a).__name__} with a {type(b).__name__}")
    if a.target != b.source:
        raise PreconditionError("the target of the first morphism is not the source of the second")

    if isinstance(a, RelMorphism):
        shared = classify(a) & classify(b)
        if not shared:
            raise PreconditionError("the morphisms share no class")
        result = RelMorphism(a.source, b.target, compose(b.r, a.r))
        lost = shared - classify(result)
        if lost:
            # closed only when the middle products exist, as in a group
            raise CompositionError(f"the composite leaves the classes {sorted(lost)}")
        return result

    if isinstance(a, (Functor, Semifunctor)):
        composite = type(a)(
            a.source,
            b.target,
            {x: b.on_objects[y] for x, y in a.on_objects.items()},
            {x: b.on_morphisms[y] for x, y in a.on_morphisms.items()},
        )
    elif isinstance(a, (Multifunctor, MultiSemifunctor)):
        composite = type(a)(
            a.source,
            b.target,
            {x: frozenset().union(*(b.on_morphisms[y] for y in ys)) for x, ys in a.on_morphisms.items()},
        )
    elif isinstance(a, Subgroupoid):
        objects = _compose_pairs(_object_pairs(a.relation.base), _object_pairs(b.relation.base))
        morphisms = _compose_pairs(_relation_pairs(a.relation.base), _relation_pairs(b.relation.base))
        composite = Subgroupoid(
            a.source,
            b.target,
            restrict_groupoid(
                product_groupoid(a.source, b.target),
                (pair_atom(*p) for p in objects),
                (pair_atom(*p) for p in morphisms),
            ),
        )
    elif isinstance(a, Subsemigroupoid):
        objects = _compose_pairs(_object_pairs(a.relation), _object_pairs(b.relation))
        morphisms = _compose_pairs(_relation_pairs(a.relation), _relation_pairs(b.relation))
        composite = Subsemigroupoid(
            a.source,
            b.target,
            restrict_semigroupoid(
                product_semigroupoid(a.source, b.target),
                (pair_atom(*p) for p in objects),
                (pair_atom(*p) for p in morphisms),
            ),
        )
    else:
        raise TypeError(f"cannot compose {type(a).__name__}")

    _assert_valid(composite, f"composites of {a.variant}s are {a.variant}s")
    return composite


# -- the H*-algebra / semigroupoid adjunction -------------------------------------------


def unit_iso_predicate(h: HStarAlgebra) -> bool:
    """``gf↓`` implies ``g*g = ff*``."""
    pp = h.partial
    return all(
        pp(gs, g) == pp(f, fs)
        for g, f in pp.table
        for gs in pp.pseudoinverses(g)
        for fs in pp.pseudoinverses(f)
    )


def counit_object_relation(s: Semigroupoid) -> Rel:
    """Objects of ``s`` to idempotents: ``{(s(f), f*f)} ∪ {(t(f), ff*)}``."""
    pp = s.partial
    stars = pseudoinverse_table(s)
    idempotents = FinSet(s.idempotents())
    pairs = set()
    for f in s.morphisms:
        for fs in stars[f]:
            pairs.add((s.src[f], pp(fs, f)))
            pairs.add((s.tgt[f], pp(f, fs)))
    return Rel.from_pairs(s.objects, idempotents, pairs)


def objects_coincide_with_idempotents(s: Semigroupoid) -> bool:
    """Each object carries exactly one idempotent, and every idempotent is an endomorphism."""
    idempotents = s.idempotents()
    if any(s.src[e] != s.tgt[e] for e in idempotents):
        return False
    at = sorted(s.src[e] for e in idempotents)
    return at == sorted(s.objects.elements)


def semigroupoid_counit(s: Semigroupoid) -> Subsemigroupoid:
    """The diagonal ``s → Ψ(Φ(s))``, with objects matched through ``f*f`` and ``ff*``."""
    require_lc_regular(s, "semigroupoid_counit")
    round_trip = hstar_to_semigroupoid(semigroupoid_to_hstar(s))
    objects = [pair_atom(str(x), str(e)) for x, e in counit_object_relation(s).pairs()]
    relation = restrict_semigroupoid(
        product_semigroupoid(s, round_trip), objects, (pair_atom(f, f) for f in s.morphisms)
    )
    return Subsemigroupoid(s, round_trip, relation)


def algebra_unit(h: HStarAlgebra) -> RelMorphism:
    """The inclusion ``Φ(Ψ(h)) → h`` as the identity relation on the carrier."""
    back = semigroupoid_to_hstar(hstar_to_semigroupoid(h))
    return RelMorphism(back, h, identity(h.carrier))


def _triangle_at_semigroupoid(s: Semigroupoid) -> bool:
    """``ε_{Φs} ∘ Φ(η_s) = 1`` on the carrier of ``Φ(s)``."""
    phi_eta = subsemigroupoid_to_hstar_morphism(semigroupoid_counit(s))
    epsilon = algebra_unit(T.cast(HStarAlgebra, phi_eta.source))
    composite = compose_morphisms(phi_eta, epsilon)
    return composite.r == identity(phi_eta.source.carrier)


def _triangle_at_algebra(h: HStarAlgebra) -> bool:
    """``Ψ(ε_h) ∘ η_{Ψh}`` is the diagonal subsemigroupoid of ``Ψ(h)``."""
    psi = hstar_to_semigroupoid(h)
    eta_psi = semigroupoid_counit(psi)
    psi_epsilon = hstar_morphism_to_subsemigroupoid(algebra_unit(h))
    composite = compose_morphisms(eta_psi, psi_epsilon)
    objects = _object_pairs(composite.relation)
    morphisms = _relation_pairs(composite.relation)
    return sorted(objects) == sorted((x, x) for x in psi.objects) and sorted(morphisms) == sorted(
        (f, f) for f in psi.morphisms
    )


def hstar_adjunction_report(h: HStarAlgebra) -> ValidationReport:
    report = ValidationReport("hstar-adjunction")
    unit = algebra_unit(h)
    report.add("unit-subrelation", is_subrelation(unit.source.m, h.m))
    report.add("unit-morphism", "rel" in classify(unit))

    iso = unit.source.m == h.m
    predicate = unit_iso_predicate(h)
    report.add(
        "unit-iso",
        iso == predicate,
        None if iso == predicate else (iso, predicate),
        note=f"unit is {'an' if iso else 'not an'} isomorphism",
    )
    report.add("triangle-algebra", _triangle_at_algebra(h))
    report.add("triangle-semigroupoid", _triangle_at_semigroupoid(hstar_to_semigroupoid(h)))
    return report


def lrs_adjunction_report(s: Semigroupoid) -> ValidationReport:
    report = ValidationReport("semigroupoid-adjunction")
    counit = semigroupoid_counit(s)
    report.add("counit-subsemigroupoid", counit.validate().passed)

    objects = counit_object_relation(s)
    iso = is_function(objects) and is_function(converse(objects))
    predicate = objects_coincide_with_idempotents(s)
    report.add(
        "counit-iso",
        iso == predicate,
        None if iso == predicate else (iso, predicate),
        note=f"counit is {'an' if iso else 'not an'} isomorphism",
    )
    report.add("triangle-semigroupoid", _triangle_at_semigroupoid(s))
    report.add("triangle-algebra", _triangle_at_algebra(semigroupoid_to_hstar(s)))
    return report
