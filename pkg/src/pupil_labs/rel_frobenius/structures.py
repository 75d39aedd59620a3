"""Finite semigroupoids and groupoids given by explicit tables.

Composition is keyed ``(g, f)`` and means "``g`` after ``f``"; it is meant to be
defined exactly when ``src(g) == tgt(f)``.
"""

import logging
import typing as T
from dataclasses import dataclass
from functools import cached_property

from pupil_labs.rel_frobenius.algebra import LCViolation, PartialProduct
from pupil_labs.rel_frobenius.errors import (
    CarrierMismatchError,
    InvariantViolation,
    PreconditionError,
)
from pupil_labs.rel_frobenius.finrel import (
    FinSet,
    Rel,
    compose_all,
    diagonal,
    identity,
    product,
    product_set,
)
from pupil_labs.rel_frobenius.reports import ValidationReport
from pupil_labs.rel_frobenius.utilities import pair_atom

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class Semigroupoid:
    objects: FinSet
    morphisms: FinSet
    src: T.Mapping[str, str]
    tgt: T.Mapping[str, str]
    comp: T.Mapping[tuple[str, str], str]

    def __post_init__(self) -> None:
        for field_name in ("src", "tgt", "comp"):
            object.__setattr__(self, field_name, dict(getattr(self, field_name)))

        for field_name, mapping in (("src", self.src), ("tgt", self.tgt)):
            if set(mapping) != set(self.morphisms):
                raise CarrierMismatchError(f"{field_name} must be defined on every morphism")
            for f, x in mapping.items():
                if x not in self.objects:
                    raise CarrierMismatchError(f"{field_name}({f}) = {x} is not an object")

        for (g, f), h in self.comp.items():
            for atom in (g, f, h):
                if atom not in self.morphisms:
                    raise CarrierMismatchError(f"comp({g}, {f}) = {h}: unknown morphism {atom}")

    def key(self) -> tuple:
        return (
            self.objects.elements,
            self.morphisms.elements,
            tuple(sorted(self.src.items())),
            tuple(sorted(self.tgt.items())),
            tuple(sorted(self.comp.items())),
        )

    def __hash__(self) -> int:
        return hash(self.key())

    @property
    def composable_pairs(self) -> frozenset[tuple[str, str]]:
        return frozenset(
            (g, f)
            for g in self.morphisms
            for f in self.morphisms
            if self.src[g] == self.tgt[f]
        )

    @cached_property
    def partial(self) -> PartialProduct:
        return PartialProduct(self.morphisms.elements, self.comp)

    def idempotents(self) -> tuple[str, ...]:
        return self.partial.idempotents()

    def hom(self, x: str, y: str) -> tuple[str, ...]:
        return tuple(f for f in self.morphisms if self.src[f] == x and self.tgt[f] == y)

    def source_relation(self) -> Rel:
        return Rel.from_function(self.morphisms, self.objects, self.src.__getitem__)

    def target_relation(self) -> Rel:
        return Rel.from_function(self.morphisms, self.objects, self.tgt.__getitem__)

    def composition_relation(self) -> Rel:
        """``m : G1 × G1 ⇸ G1``, the graph of the partial composition."""
        g1 = self.morphisms
        return Rel.from_pairs(product_set(g1, g1), g1, self.comp.items())


@dataclass(frozen=True)
class Groupoid:
    base: Semigroupoid
    ident: T.Mapping[str, str]
    inv: T.Mapping[str, str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "ident", dict(self.ident))
        object.__setattr__(self, "inv", dict(self.inv))
        if set(self.ident) != set(self.base.objects):
            raise CarrierMismatchError("identities must be given for every object")
        if set(self.inv) != set(self.base.morphisms):
            raise CarrierMismatchError("inverses must be given for every morphism")
        for atom in (*self.ident.values(), *self.inv.values()):
            if atom not in self.base.morphisms:
                raise CarrierMismatchError(f"{atom} is not a morphism")

    def key(self) -> tuple:
        return (
            self.base.key(),
            tuple(sorted(self.ident.items())),
            tuple(sorted(self.inv.items())),
        )

    def __hash__(self) -> int:
        return hash(self.key())

    @property
    def objects(self) -> FinSet:
        return self.base.objects

    @property
    def morphisms(self) -> FinSet:
        return self.base.morphisms

    @property
    def src(self) -> T.Mapping[str, str]:
        return self.base.src

    @property
    def tgt(self) -> T.Mapping[str, str]:
        return self.base.tgt

    @property
    def comp(self) -> T.Mapping[tuple[str, str], str]:
        return self.base.comp

    def identities(self) -> frozenset[str]:
        return frozenset(self.ident.values())


@dataclass(frozen=True)
class RegularityResult:
    regular: bool
    pseudoinverses: dict[str, frozenset[str]]

    def __bool__(self) -> bool:
        return self.regular


@dataclass(frozen=True)
class CancellativityResult:
    holds: bool
    witness: LCViolation | None = None

    def __bool__(self) -> bool:
        return self.holds


def validate_semigroupoid(s: Semigroupoid) -> ValidationReport:
    report = ValidationReport("semigroupoid")
    pp = s.partial
    morphisms = s.morphisms.elements

    composable = s.composable_pairs
    mismatch = next(
        (
            (g, f)
            for g in morphisms
            for f in morphisms
            if ((g, f) in composable) != pp.defined(g, f)
        ),
        None,
    )
    report.add("composability", mismatch is None, mismatch)

    endpoints = next(
        (
            (g, f)
            for (g, f), h in sorted(s.comp.items())
            if s.src[h] != s.src[f] or s.tgt[h] != s.tgt[g]
        ),
        None,
    )
    report.add("source-target", endpoints is None, endpoints)

    assoc = next(
        (
            (h, g, f)
            for h in morphisms
            for g in morphisms
            for f in morphisms
            if pp(h, g, f) != pp(h, pp(g, f))
        ),
        None,
    )
    report.add("associativity", assoc is None, assoc)

    touched = set(s.src.values()) | set(s.tgt.values())
    isolated = next((x for x in s.objects if x not in touched), None)
    report.add("jointly-epic", isolated is None, isolated)
    return report


def _require_valid(s: Semigroupoid, operation: str) -> None:
    report = validate_semigroupoid(s)
    if not report.passed:
        failure = T.cast(T.Any, report.first_failure())
        raise PreconditionError(
            f"{operation} needs a valid semigroupoid; {failure.id} fails",
            witness=failure.witness,
        )


def _inverse_diagram_holds(g: Groupoid) -> bool:
    """``m∘(i×1)∘Δ = e∘s`` and ``m∘(1×i)∘Δ = e∘t`` as relations on ``G1``."""
    g1 = g.morphisms
    m = g.base.composition_relation()
    i = Rel.from_function(g1, g1, g.inv.__getitem__)
    e = Rel.from_function(g.objects, g1, g.ident.__getitem__)
    one = identity(g1)
    delta = diagonal(g1)
    left = compose_all(m, product(i, one), delta) == compose_all(e, g.base.source_relation())
    right = compose_all(m, product(one, i), delta) == compose_all(e, g.base.target_relation())
    return left and right


def validate_groupoid(g: Groupoid) -> ValidationReport:
    report = ValidationReport("groupoid")
    report.extend(validate_semigroupoid(g.base))
    pp = g.base.partial

    bad_ident = next(
        (x for x, e in sorted(g.ident.items()) if g.src[e] != x or g.tgt[e] != x), None
    )
    report.add("identity-endpoints", bad_ident is None, bad_ident)

    bad_unit = next(
        (
            f
            for f in g.morphisms
            if pp(f, g.ident[g.src[f]]) != f or pp(g.ident[g.tgt[f]], f) != f
        ),
        None,
    )
    report.add("unit-law", bad_unit is None, bad_unit)

    bad_inverse = next(
        (
            f
            for f in g.morphisms
            if pp(g.inv[f], f) != g.ident[g.src[f]] or pp(f, g.inv[f]) != g.ident[g.tgt[f]]
        ),
        None,
    )
    diagram = _inverse_diagram_holds(g)
    if diagram != (bad_inverse is None):
        raise InvariantViolation(
            "inverse law versus m∘(i×1)∘Δ = e∘s",
            f"elementwise gives {bad_inverse is None}, relational gives {diagram}",
        )
    report.add("inverse-law", bad_inverse is None, bad_inverse)
    return report


def pseudoinverse_table(s: Semigroupoid) -> dict[str, frozenset[str]]:
    _require_valid(s, "pseudoinverse_table")
    return {
        f: frozenset(x for x in candidates if s.src[x] == s.tgt[f] and s.tgt[x] == s.src[f])
        for f, candidates in s.partial.pseudoinverse_table.items()
    }


def is_regular(s: Semigroupoid) -> RegularityResult:
    table = pseudoinverse_table(s)
    return RegularityResult(all(table.values()), table)


def is_locally_cancellative(s: Semigroupoid) -> CancellativityResult:
    _require_valid(s, "is_locally_cancellative")
    witness = s.partial.lc_violation()
    return CancellativityResult(witness is None, witness)


def check_lc_symmetric_equivalence(s: Semigroupoid) -> bool:
    """Whether the ``h``/``h*``-mirrored form of local cancellativity agrees with the original."""
    if not is_regular(s):
        raise PreconditionError("the mirrored form is only compared on regular semigroupoids")
    original = s.partial.lc_violation() is None
    mirrored = s.partial.mirrored_lc_violation() is None
    if original != mirrored:
        logger.warning(f"local cancellativity {original} but mirrored form {mirrored}")
    return original == mirrored


def is_monic_epic(s: Semigroupoid) -> bool:
    _require_valid(s, "is_monic_epic")
    pp = s.partial
    morphisms = s.morphisms.elements
    for f in morphisms:
        for g in morphisms:
            for h in morphisms:
                if g == h:
                    continue
                fg = pp(f, g)
                if fg is not None and fg == pp(f, h):
                    return False
                gf = pp(g, f)
                if gf is not None and gf == pp(h, f):
                    return False
    return True


def require_lc_regular(s: Semigroupoid, operation: str) -> dict[str, frozenset[str]]:
    regularity = is_regular(s)
    if not regularity:
        missing = next(f for f, xs in sorted(regularity.pseudoinverses.items()) if not xs)
        raise PreconditionError(f"{operation} needs a regular semigroupoid", witness=missing)
    cancellativity = is_locally_cancellative(s)
    if not cancellativity:
        witness = T.cast(LCViolation, cancellativity.witness)
        raise PreconditionError(
            f"{operation} needs a locally cancellative semigroupoid ({witness.clause})",
            witness=witness.as_tuple(),
        )
    return regularity.pseudoinverses


def find_identities(s: Semigroupoid) -> dict[str, str] | None:
    pp = s.partial
    ident: dict[str, str] = {}
    for x in s.objects:
        candidates = [
            e
            for e in s.hom(x, x)
            if all(pp(f, e) == f for f in s.morphisms if s.src[f] == x)
            and all(pp(e, f) == f for f in s.morphisms if s.tgt[f] == x)
        ]
        if not candidates:
            return None
        ident[x] = candidates[0]
    return ident


def promote_to_groupoid(s: Semigroupoid) -> Groupoid | None:
    table = require_lc_regular(s, "promote_to_groupoid")
    ident = find_identities(s)
    if ident is None:
        logger.debug("locally cancellative regular semigroupoid without identities")
        return None

    inv: dict[str, str] = {}
    for f, candidates in table.items():
        if len(candidates) != 1:
            raise InvariantViolation(
                "pseudoinverses are unique once identities exist",
                f"{f} has pseudoinverses {sorted(candidates)}",
            )
        inv[f] = next(iter(candidates))

    g = Groupoid(s, ident, inv)
    report = validate_groupoid(g)
    if not report.passed:
        raise InvariantViolation(
            "a locally cancellative regular semigroupoid with identities is a groupoid",
            str(report.first_failure()),
        )
    return g


def one_object_semigroupoid(
    table: T.Mapping[tuple[str, str], str], obj: str = "o"
) -> Semigroupoid:
    """A semigroup as a semigroupoid on a single object."""
    atoms = sorted({a for key, v in table.items() for a in (*key, v)})
    return Semigroupoid(
        FinSet((obj,)),
        FinSet(tuple(atoms)),
        {a: obj for a in atoms},
        {a: obj for a in atoms},
        table,
    )


def relabel_objects(s: Semigroupoid, mapping: T.Mapping[str, str]) -> Semigroupoid:
    return Semigroupoid(
        FinSet(tuple(mapping[x] for x in s.objects)),
        s.morphisms,
        {f: mapping[x] for f, x in s.src.items()},
        {f: mapping[x] for f, x in s.tgt.items()},
        s.comp,
    )


def product_semigroupoid(g: Semigroupoid, h: Semigroupoid) -> Semigroupoid:
    """Componentwise product with objects and morphisms named ``(x,y)``."""
    comp = {
        (pair_atom(g2, h2), pair_atom(g1, h1)): pair_atom(g.comp[(g2, g1)], h.comp[(h2, h1)])
        for (g2, g1) in g.comp
        for (h2, h1) in h.comp
    }
    morphisms = [(a, b) for a in g.morphisms for b in h.morphisms]
    return Semigroupoid(
        FinSet(tuple(pair_atom(x, y) for x in g.objects for y in h.objects)),
        FinSet(tuple(pair_atom(a, b) for a, b in morphisms)),
        {pair_atom(a, b): pair_atom(g.src[a], h.src[b]) for a, b in morphisms},
        {pair_atom(a, b): pair_atom(g.tgt[a], h.tgt[b]) for a, b in morphisms},
        comp,
    )


def product_groupoid(g: Groupoid, h: Groupoid) -> Groupoid:
    return Groupoid(
        product_semigroupoid(g.base, h.base),
        {pair_atom(x, y): pair_atom(g.ident[x], h.ident[y]) for x in g.objects for y in h.objects},
        {pair_atom(a, b): pair_atom(g.inv[a], h.inv[b]) for a in g.morphisms for b in h.morphisms},
    )


def is_subsemigroupoid(r: Semigroupoid, g: Semigroupoid) -> bool:
    """Objects, morphisms, endpoints and composition of ``r`` are restrictions of ``g``'s."""
    if not set(r.objects) <= set(g.objects) or not set(r.morphisms) <= set(g.morphisms):
        return False
    if any(r.src[f] != g.src[f] or r.tgt[f] != g.tgt[f] for f in r.morphisms):
        return False
    for pair in r.composable_pairs:
        if r.comp.get(pair) != g.comp.get(pair):
            return False
    return True


def is_subgroupoid(r: Groupoid, g: Groupoid) -> bool:
    return (
        is_subsemigroupoid(r.base, g.base)
        and all(g.ident[x] == e for x, e in r.ident.items())
        and all(g.inv[f] == f_inv for f, f_inv in r.inv.items())
    )


def empty_groupoid() -> Groupoid:
    return Groupoid(Semigroupoid(FinSet(()), FinSet(()), {}, {}, {}), {}, {})


def groupoid_is_isomorphic(
    g: Groupoid, h: Groupoid, objects: T.Mapping[str, str], morphisms: T.Mapping[str, str]
) -> bool:
    """Whether the given bijections carry every table of ``g`` onto ``h``."""
    if sorted(objects.values()) != list(h.objects.elements):
        return False
    if sorted(morphisms.values()) != list(h.morphisms.elements):
        return False
    return (
        all(objects[g.src[f]] == h.src[morphisms[f]] for f in g.morphisms)
        and all(objects[g.tgt[f]] == h.tgt[morphisms[f]] for f in g.morphisms)
        and all(
            h.comp.get((morphisms[b], morphisms[a])) == morphisms[c]
            for (b, a), c in g.comp.items()
        )
        and len(g.comp) == len(h.comp)
        and all(morphisms[e] == h.ident[objects[x]] for x, e in g.ident.items())
        and all(morphisms[g.inv[f]] == h.inv[morphisms[f]] for f in g.morphisms)
    )


def restrict_semigroupoid(
    s: Semigroupoid, objects: T.Iterable[str], morphisms: T.Iterable[str]
) -> Semigroupoid:
    """The part of ``s`` on the given atoms; composition must stay inside them."""
    kept = frozenset(morphisms)
    comp: dict[tuple[str, str], str] = {}
    for (g, f), h in s.comp.items():
        if g in kept and f in kept:
            if h not in kept:
                raise PreconditionError(
                    f"restriction is not closed under composition: {g} ∘ {f} = {h}",
                    witness=(g, f),
                )
            comp[(g, f)] = h
    return Semigroupoid(
        FinSet(tuple(objects)),
        FinSet(tuple(kept)),
        {f: s.src[f] for f in kept},
        {f: s.tgt[f] for f in kept},
        comp,
    )


def restrict_groupoid(
    g: Groupoid, objects: T.Iterable[str], morphisms: T.Iterable[str]
) -> Groupoid:
    base = restrict_semigroupoid(g.base, objects, morphisms)
    return Groupoid(
        base,
        {x: g.ident[x] for x in base.objects},
        {f: g.inv[f] for f in base.morphisms},
    )
