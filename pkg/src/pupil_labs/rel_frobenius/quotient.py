"""Congruences, quotient semigroupoids and the groupoid ``F(G)``.

``F`` sends a locally cancellative regular semigroupoid to the groupoid
obtained by identifying idempotents with a common source. Quotient
morphisms are named ``[rep]`` after the least member of their class.
"""

import logging
import typing as T
from dataclasses import dataclass, field

from scipy.cluster.hierarchy import DisjointSet

from pupil_labs.rel_frobenius.algebra import FrobAlgebra, HStarAlgebra, MulCandidate
from pupil_labs.rel_frobenius.correspond import groupoid_to_frob, hstar_to_semigroupoid
from pupil_labs.rel_frobenius.errors import (
    AxiomError,
    InvariantViolation,
    PreconditionError,
)
from pupil_labs.rel_frobenius.finrel import FinSet
from pupil_labs.rel_frobenius.morphisms import (
    Functor,
    Semifunctor,
    Subgroupoid,
    Subsemigroupoid,
    compose_morphisms,
)
from pupil_labs.rel_frobenius.reports import ValidationReport
from pupil_labs.rel_frobenius.structures import (
    Groupoid,
    Semigroupoid,
    is_locally_cancellative,
    is_regular,
    product_groupoid,
    product_semigroupoid,
    pseudoinverse_table,
    require_lc_regular,
    restrict_groupoid,
    restrict_semigroupoid,
    validate_groupoid,
    validate_semigroupoid,
)
from pupil_labs.rel_frobenius.utilities import class_atom, pair_atom, split_pair_atom

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Congruence:
    over: Semigroupoid
    classes: tuple[frozenset[str], ...]

    def __post_init__(self) -> None:
        classes = tuple(sorted((frozenset(c) for c in self.classes), key=min))
        seen: set[str] = set()
        for c in classes:
            if not c or c & seen:
                raise ValueError("congruence classes must be non-empty and disjoint")
            seen |= c
        if seen != set(self.over.morphisms):
            raise ValueError("congruence classes must cover every morphism")
        object.__setattr__(self, "classes", classes)

    @classmethod
    def discrete(cls, s: Semigroupoid) -> "Congruence":
        return cls(s, tuple(frozenset({f}) for f in s.morphisms))

    def class_of(self, f: str) -> frozenset[str]:
        return next(c for c in self.classes if f in c)

    def atom(self, f: str) -> str:
        return class_atom(min(self.class_of(f)))

    def is_discrete(self) -> bool:
        return all(len(c) == 1 for c in self.classes)

    def check(self) -> ValidationReport:
        s = self.over
        report = ValidationReport("congruence")
        bad_ends = next(
            (
                tuple(sorted(c))
                for c in self.classes
                if len({s.src[f] for f in c}) > 1 or len({s.tgt[f] for f in c}) > 1
            ),
            None,
        )
        report.add("endpoints", bad_ends is None, bad_ends)
        bad_comp = next(
            (
                (p, q)
                for p, pq in sorted(s.comp.items())
                for q, qq in sorted(s.comp.items())
                if self.atom(p[0]) == self.atom(q[0])
                and self.atom(p[1]) == self.atom(q[1])
                and self.atom(pq) != self.atom(qq)
            ),
            None,
        )
        report.add("compatibility", bad_comp is None, bad_comp)
        return report


def _close(
    elements: T.Sequence[str],
    generators: T.Iterable[tuple[str, str]],
    table: T.Mapping[tuple[str, str], str],
) -> list[frozenset[str]]:
    """Smallest equivalence containing ``generators`` and compatible with ``table``."""
    ds = DisjointSet(elements)
    for a, b in generators:
        ds.merge(a, b)

    entries = sorted(table.items())
    changed = True
    while changed:
        changed = False
        for (g, f), gf in entries:
            for (g2, f2), gf2 in entries:
                if ds.connected(g, g2) and ds.connected(f, f2) and not ds.connected(gf, gf2):
                    ds.merge(gf, gf2)
                    changed = True
    return [frozenset(c) for c in ds.subsets()]


def generated_congruence(
    s: Semigroupoid, generators: T.Iterable[tuple[str, str]]
) -> Congruence:
    generators = sorted(generators)
    for f, g in generators:
        if s.src[f] != s.src[g] or s.tgt[f] != s.tgt[g]:
            raise PreconditionError(
                f"generator ({f}, {g}) relates morphisms with different endpoints",
                witness=(f, g),
            )
    c = Congruence(s, tuple(_close(s.morphisms.elements, generators, s.comp)))
    report = c.check()
    if not report.passed:
        raise InvariantViolation("the generated relation is a congruence", str(report.first_failure()))
    return c


def idempotent_generators(s: Semigroupoid) -> set[tuple[str, str]]:
    idempotents = s.idempotents()
    return {
        (f, g)
        for f in idempotents
        for g in idempotents
        if f < g and s.src[f] == s.src[g]
    }


def collapse(s: Semigroupoid, c: Congruence) -> Semigroupoid:
    if c.over != s:
        raise PreconditionError("the congruence is defined over another semigroupoid")

    comp: dict[tuple[str, str], str] = {}
    for (g, f), gf in s.comp.items():
        key = (c.atom(g), c.atom(f))
        value = c.atom(gf)
        if comp.setdefault(key, value) != value:
            raise InvariantViolation("quotient composition is well-defined", f"at {key}")

    reps = [min(cls) for cls in c.classes]
    q = Semigroupoid(
        s.objects,
        FinSet(tuple(class_atom(r) for r in reps)),
        {class_atom(r): s.src[r] for r in reps},
        {class_atom(r): s.tgt[r] for r in reps},
        comp,
    )
    if not validate_semigroupoid(q).passed:
        raise InvariantViolation("a quotient by a congruence is a semigroupoid")
    if is_regular(s) and is_locally_cancellative(s):
        if not (is_regular(q) and is_locally_cancellative(q)):
            raise InvariantViolation("quotients inherit regularity and local cancellativity")
    return q


def F_functor(s: Semigroupoid) -> Groupoid:
    stars = require_lc_regular(s, "F_functor")
    c = generated_congruence(s, idempotent_generators(s))
    if not c.is_discrete():
        logger.info(f"idempotent congruence merges {len(s.morphisms) - len(c.classes)} morphisms")
    q = collapse(s, c)
    pp = s.partial

    ident: dict[str, str] = {}
    for f in s.morphisms:
        for fs in stars[f]:
            for x, e in ((s.src[f], pp(fs, f)), (s.tgt[f], pp(f, fs))):
                atom = c.atom(T.cast(str, e))
                if ident.setdefault(x, atom) != atom:
                    raise InvariantViolation("the quotient identity at an object is well-defined", x)

    inv: dict[str, str] = {}
    for f in s.morphisms:
        for fs in stars[f]:
            atom = c.atom(fs)
            if inv.setdefault(c.atom(f), atom) != atom:
                raise InvariantViolation("the quotient inverse is single-valued", f)

    g = Groupoid(q, ident, inv)
    report = validate_groupoid(g)
    if not report.passed:
        raise InvariantViolation("F(G) is a groupoid", str(report.first_failure()))
    return g


def _class_map(s: Semigroupoid) -> dict[str, str]:
    """Morphism of ``s`` to its atom in ``F(s)``."""
    c = generated_congruence(s, idempotent_generators(s))
    return {f: c.atom(f) for f in s.morphisms}


def F_on_semifunctor(phi: Semifunctor) -> Functor:
    """``[f] ↦ [φ(f)]`` between ``F(G)`` and ``F(H)``."""
    fg, fh = F_functor(phi.source), F_functor(phi.target)
    in_g, in_h = _class_map(phi.source), _class_map(phi.target)

    on_morphisms: dict[str, str] = {}
    for f, image in phi.on_morphisms.items():
        atom = in_h[image]
        if on_morphisms.setdefault(in_g[f], atom) != atom:
            raise InvariantViolation("F is well-defined on semifunctors", f)

    functor = Functor(fg, fh, dict(phi.on_objects), on_morphisms)
    report = functor.validate()
    if not report.passed:
        raise InvariantViolation("F sends semifunctors to functors", str(report.first_failure()))
    return functor


def F_on_subsemigroupoid(r: Subsemigroupoid) -> Subgroupoid:
    fg, fh = F_functor(r.source), F_functor(r.target)
    in_g, in_h = _class_map(r.source), _class_map(r.target)

    pairs = [split_pair_atom(atom) for atom in r.relation.morphisms]
    morphisms = {pair_atom(in_g[a], in_h[b]) for a, b in pairs}
    relation = restrict_groupoid(product_groupoid(fg, fh), r.relation.objects, morphisms)
    sub = Subgroupoid(fg, fh, relation)
    report = sub.validate()
    if not report.passed:
        raise InvariantViolation(
            "F sends subsemigroupoids to subgroupoids", str(report.first_failure())
        )
    return sub


def _identity_functor(g: Groupoid) -> Functor:
    return Functor(g, g, {x: x for x in g.objects}, {f: f for f in g.morphisms})


def _identity_semifunctor(s: Semigroupoid) -> Semifunctor:
    return Semifunctor(s, s, {x: x for x in s.objects}, {f: f for f in s.morphisms})


def quotient_unit(s: Semigroupoid) -> Semifunctor:
    """The projection ``s → F(s)``, ``f ↦ [f]``."""
    fs = F_functor(s)
    unit = Semifunctor(s, fs.base, {x: x for x in s.objects}, _class_map(s))
    if not unit.validate().passed:
        raise InvariantViolation("the projection onto F(G) is a semifunctor")
    return unit


def quotient_unit_relation(s: Semigroupoid) -> Subsemigroupoid:
    """The projection packaged as the subsemigroupoid of ``s × F(s)`` on its graph."""
    unit = quotient_unit(s)
    relation = restrict_semigroupoid(
        product_semigroupoid(s, unit.target),
        (pair_atom(x, x) for x in s.objects),
        (pair_atom(f, image) for f, image in unit.on_morphisms.items()),
    )
    return Subsemigroupoid(s, unit.target, relation)


def quotient_counit(g: Groupoid) -> Functor:
    """``F(G) → G`` for a groupoid, inverse to the projection."""
    fg = F_functor(g.base)
    classes = _class_map(g.base)
    if len(set(classes.values())) != len(classes):
        raise InvariantViolation("the idempotent congruence on a groupoid is discrete")
    counit = Functor(fg, g, {x: x for x in g.objects}, {atom: f for f, atom in classes.items()})
    if not counit.validate().passed:
        raise InvariantViolation("the counit F(G) → G is a functor")
    return counit


@dataclass
class AdjunctionCheck:
    unit: Semifunctor
    unit_relation: Subsemigroupoid
    counit: Functor | None = None
    report: ValidationReport = field(default_factory=lambda: ValidationReport("quotient-adjunction"))


def unit_and_counit(
    structure: Semigroupoid | Groupoid,
    semifunctors: T.Iterable[Semifunctor] = (),
    functors: T.Iterable[Functor] = (),
) -> AdjunctionCheck:
    """Unit and counit of ``F`` with its inclusion of groupoids, and their laws.

    ``semifunctors`` and ``functors`` are sample morphisms on which the
    naturality squares of the unit and the counit are checked.
    """
    s = structure.base if isinstance(structure, Groupoid) else structure
    unit = quotient_unit(s)
    check = AdjunctionCheck(unit, quotient_unit_relation(s))
    report = check.report
    report.add("unit", unit.validate().passed)
    report.add("unit-relation", check.unit_relation.validate().passed)
    report.add("unit-relation-F", F_on_subsemigroupoid(check.unit_relation).validate().passed)

    # ε_{F s} ∘ F(η_s) = 1 on F(s)
    fs = F_functor(s)
    triangle = compose_morphisms(F_on_semifunctor(unit), quotient_counit(fs))
    report.add("triangle-F", triangle == _identity_functor(fs))

    if isinstance(structure, Groupoid):
        check.counit = quotient_counit(structure)
        report.add("counit", check.counit.validate().passed)
        # U(ε_g) ∘ η_{U g} = 1 on U(g)
        back = compose_morphisms(
            unit,
            Semifunctor(
                check.counit.source.base,
                structure.base,
                check.counit.on_objects,
                check.counit.on_morphisms,
            ),
        )
        report.add("triangle-inclusion", back == _identity_semifunctor(structure.base))

    for phi in semifunctors:
        left = compose_morphisms(phi, quotient_unit(phi.target))
        right = compose_morphisms(quotient_unit(phi.source), _as_semifunctor(F_on_semifunctor(phi)))
        report.add("naturality-unit", left == right, None if left == right else dict(phi.on_morphisms))

    for psi in functors:
        f_psi = F_on_semifunctor(
            Semifunctor(psi.source.base, psi.target.base, psi.on_objects, psi.on_morphisms)
        )
        left = compose_morphisms(quotient_counit(psi.source), psi)
        right = compose_morphisms(f_psi, quotient_counit(psi.target))
        report.add("naturality-counit", left == right, None if left == right else dict(psi.on_morphisms))
    return check


def _as_semifunctor(f: Functor) -> Semifunctor:
    return Semifunctor(f.source.base, f.target.base, f.on_objects, f.on_morphisms)


def corollary_generators(h: HStarAlgebra) -> set[tuple[str, str]]:
    """Pairs of distinct idempotents ``f, g`` with ``gf`` defined in the algebra."""
    pp = h.partial
    idempotents = pp.idempotents()
    return {(f, g) for f in idempotents for g in idempotents if f != g and pp.defined(g, f)}


def corollary_quotient(h: HStarAlgebra) -> FrobAlgebra:
    """The Frobenius algebra obtained by collapsing idempotents that compose.

    Computed directly on the algebra and compared with
    ``groupoid_to_frob(F_functor(hstar_to_semigroupoid(h)))``.
    """
    pp = h.partial
    classes = _close(h.carrier.elements, corollary_generators(h), pp.table)
    atom_of = {x: class_atom(min(c)) for c in classes for x in c}

    table: dict[tuple[str, str], str] = {}
    for (g, f), gf in pp.table.items():
        key = (atom_of[g], atom_of[f])
        if table.setdefault(key, atom_of[gf]) != atom_of[gf]:
            raise InvariantViolation("the quotient multiplication is single-valued", f"at {key}")

    carrier = FinSet(tuple(sorted(set(atom_of.values()))))
    try:
        direct = FrobAlgebra.from_candidate(MulCandidate.from_table(carrier, table))
    except AxiomError as exc:
        raise InvariantViolation("the collapsed H*-algebra is Frobenius", str(exc)) from exc

    composite = groupoid_to_frob(F_functor(hstar_to_semigroupoid(h)))
    if direct != composite:
        raise InvariantViolation(
            "collapsing the algebra agrees with passing through F",
            f"direct carrier {carrier.elements}, composite carrier {composite.carrier.elements}",
        )
    return direct
