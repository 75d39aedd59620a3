"""Candidate multiplications ``m : X × X ⇸ X`` and their axioms.

Every axiom is decided twice: once as an equation between relations, using
the ``finrel`` engine, and once through its elementwise characterisation. The
two answers must agree; a disagreement raises ``InvariantViolation``.

Products are written ``hg`` for ``m(h, g)``. When ``m`` is single-valued it is
read as a partial operation; ``None`` stands for "undefined" and Kleene
equality of two possibly undefined products is plain ``==`` on optionals.
"""

import logging
import typing as T
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from pupil_labs.rel_frobenius.errors import (
    AxiomError,
    CarrierMismatchError,
    InvariantViolation,
    PreconditionError,
)
from pupil_labs.rel_frobenius.finrel import (
    UNIT,
    FinSet,
    Rel,
    compose,
    compose_all,
    converse,
    identity,
    point,
    product,
    product_set,
    swap,
)
from pupil_labs.rel_frobenius.reports import ValidationReport
from pupil_labs.rel_frobenius.utilities import powerset

logger = logging.getLogger(__name__)

# Carriers up to this size get (H) checked over every subset.
SUBSET_QUANTIFIED_LIMIT = 4

Triple = tuple[str, str, str]


def kleene_equal(x: str | None, y: str | None) -> bool:
    """Both undefined, or both defined and equal."""
    return x == y


@dataclass(frozen=True)
class MulCandidate:
    carrier: FinSet
    m: Rel

    def __post_init__(self) -> None:
        if self.m.dom != product_set(self.carrier, self.carrier) or self.m.cod != self.carrier:
            raise CarrierMismatchError(
                f"multiplication {self.m.dom.name} -> {self.m.cod.name} does not "
                f"match carrier {self.carrier.name}"
            )

    @classmethod
    def from_triples(cls, carrier: FinSet, triples: T.Iterable[Triple]) -> "MulCandidate":
        xx = product_set(carrier, carrier)
        return cls(carrier, Rel.from_pairs(xx, carrier, (((x, y), z) for x, y, z in triples)))

    @classmethod
    def from_table(
        cls, carrier: FinSet, table: T.Mapping[tuple[str, str], str]
    ) -> "MulCandidate":
        return cls.from_triples(carrier, ((x, y, z) for (x, y), z in table.items()))

    @property
    def elements(self) -> tuple[str, ...]:
        return self.carrier.elements

    @cached_property
    def products(self) -> dict[tuple[str, str], frozenset[str]]:
        els = self.carrier.elements
        n = len(els)
        return {
            (x, y): frozenset(els[k] for k in np.flatnonzero(self.m.matrix[i * n + j]))
            for i, x in enumerate(els)
            for j, y in enumerate(els)
        }

    def triples(self) -> list[Triple]:
        return sorted(
            (x, y, z) for (x, y), zs in self.products.items() for z in zs
        )

    def is_single_valued(self) -> bool:
        return all(len(zs) <= 1 for zs in self.products.values())

    @cached_property
    def partial(self) -> "PartialProduct | None":
        """The partial-operation view, available exactly when (M) holds."""
        if not check_M(self):
            return None
        return PartialProduct.from_candidate(self)


@dataclass(frozen=True)
class LCViolation:
    f: str
    g: str
    h: str
    h_star: str
    clause: str

    def as_tuple(self) -> tuple[str, str, str, str]:
        return (self.f, self.g, self.h, self.h_star)


@dataclass(frozen=True, eq=False)
class PartialProduct:
    elements: tuple[str, ...]
    table: T.Mapping[tuple[str, str], str]

    @classmethod
    def from_candidate(cls, c: MulCandidate) -> "PartialProduct":
        table: dict[tuple[str, str], str] = {}
        for key, zs in c.products.items():
            if len(zs) > 1:
                raise PreconditionError(
                    f"m is not single-valued at {key}", witness=key
                )
            if zs:
                table[key] = next(iter(zs))
        return cls(c.carrier.elements, table)

    def __call__(self, *factors: str | None) -> str | None:
        """Left-bracketed product of the factors, ``None`` when undefined."""
        result = factors[0]
        for f in factors[1:]:
            if result is None or f is None:
                return None
            result = self.table.get((result, f))
        return result

    def defined(self, g: str, f: str) -> bool:
        return (g, f) in self.table

    def idempotents(self) -> tuple[str, ...]:
        return tuple(x for x in self.elements if self.table.get((x, x)) == x)

    def is_pseudoinverse(self, a: str, x: str) -> bool:
        return self(a, x, a) == a and self(x, a, x) == x

    @cached_property
    def pseudoinverse_table(self) -> dict[str, frozenset[str]]:
        return {
            a: frozenset(x for x in self.elements if self.is_pseudoinverse(a, x))
            for a in self.elements
        }

    def pseudoinverses(self, a: str) -> frozenset[str]:
        return self.pseudoinverse_table[a]

    def is_regular(self) -> bool:
        return all(self.pseudoinverse_table.values())

    def _pseudo_pairs(self) -> T.Iterator[tuple[str, str]]:
        for h in self.elements:
            for h_star in sorted(self.pseudoinverse_table[h]):
                yield h, h_star

    def lc_violation(self) -> LCViolation | None:
        """First ``(f, g, h, h*)`` breaking local cancellativity.

        Premises are equalities of defined products; the conclusions
        ``fh = g`` and ``hf = g`` require the product to be defined.
        """
        pairs = list(self._pseudo_pairs())
        for f in self.elements:
            for g in self.elements:
                for h, hs in pairs:
                    right = self(f, h, hs)
                    if right is not None and right == self(g, hs) and self(f, h) != g:
                        return LCViolation(f, g, h, hs, "fhh* = gh* implies fh = g")
                    left = self(hs, h, f)
                    if left is not None and left == self(hs, g) and self(h, f) != g:
                        return LCViolation(f, g, h, hs, "h*hf = h*g implies hf = g")
        return None

    def mirrored_lc_violation(self) -> LCViolation | None:
        """The same scan for the form with the roles of ``h`` and ``h*`` exchanged."""
        pairs = list(self._pseudo_pairs())
        for f in self.elements:
            for g in self.elements:
                for h, hs in pairs:
                    right = self(f, hs, h)
                    if right is not None and right == self(g, h) and self(f, hs) != g:
                        return LCViolation(f, g, h, hs, "fh*h = gh implies fh* = g")
                    left = self(h, hs, f)
                    if left is not None and left == self(h, g) and self(hs, f) != g:
                        return LCViolation(f, g, h, hs, "hh*f = hg implies h*f = g")
        return None


@dataclass(frozen=True)
class FrobAlgebra:
    base: MulCandidate
    unit_set: frozenset[str]

    def __post_init__(self) -> None:
        object.__setattr__(self, "unit_set", frozenset(self.unit_set))
        _require_axioms(self.base, ("M", "A", "F"))
        forced = find_unit(self.base)
        if forced is None:
            raise AxiomError("U", "no unit subset exists", witness=_unit_witness(self.base))
        if forced != self.unit_set:
            raise AxiomError(
                "U",
                f"declared unit {sorted(self.unit_set)} differs from the forced unit "
                f"{sorted(forced)}",
            )

    @classmethod
    def from_candidate(cls, c: MulCandidate) -> "FrobAlgebra":
        unit = find_unit(c)
        if unit is None:
            _require_axioms(c, ("M", "A", "F"))
            raise AxiomError("U", "no unit subset exists", witness=_unit_witness(c))
        return cls(c, unit)

    @property
    def carrier(self) -> FinSet:
        return self.base.carrier

    @property
    def m(self) -> Rel:
        return self.base.m

    @property
    def partial(self) -> PartialProduct:
        return T.cast(PartialProduct, self.base.partial)

    @property
    def u(self) -> Rel:
        return point(self.carrier, self.unit_set)


@dataclass(frozen=True)
class HStarAlgebra:
    base: MulCandidate

    def __post_init__(self) -> None:
        _require_axioms(self.base, ("M", "A", "H"))

    @property
    def carrier(self) -> FinSet:
        return self.base.carrier

    @property
    def m(self) -> Rel:
        return self.base.m

    @property
    def partial(self) -> PartialProduct:
        return T.cast(PartialProduct, self.base.partial)


Algebra = FrobAlgebra | HStarAlgebra


def _agree(statement: str, categorical: bool, elementwise: bool) -> None:
    if categorical != elementwise:
        logger.error(f"{statement}: categorical={categorical} elementwise={elementwise}")
        raise InvariantViolation(
            statement,
            f"categorical form gives {categorical}, elementwise form gives {elementwise}",
        )


def _require_axioms(c: MulCandidate, axioms: T.Iterable[str]) -> None:
    checks: dict[str, T.Callable[[MulCandidate], bool]] = {
        "M": check_M,
        "A": check_A,
        "F": check_F,
        "H": check_H,
    }
    for axiom in axioms:
        if not checks[axiom](c):
            raise AxiomError(axiom, "axiom does not hold", witness=WITNESSES[axiom](c))


def _require_partial(c: MulCandidate, operation: str) -> PartialProduct:
    pp = c.partial
    if pp is None:
        raise PreconditionError(
            f"{operation} needs (M): m must be single-valued and every element a product",
            witness=_m_witness(c),
        )
    return pp


# -- (M) ---------------------------------------------------------------------


def _m_witness(c: MulCandidate) -> T.Any:
    for key, zs in c.products.items():
        if len(zs) > 1:
            return key
    produced = frozenset().union(*c.products.values())
    for x in c.elements:
        if x not in produced:
            return x
    return None


def check_M(c: MulCandidate) -> bool:
    categorical = compose(c.m, converse(c.m)) == identity(c.carrier)
    elementwise = _m_witness(c) is None
    _agree("(M) m∘m† = 1", categorical, elementwise)
    return categorical


# -- (A) ---------------------------------------------------------------------


def _a_witness(c: MulCandidate) -> Triple | None:
    p = c.products
    for f in c.elements:
        for g in c.elements:
            for h in c.elements:
                left = frozenset().union(*(p[(fg, h)] for fg in p[(f, g)]))
                right = frozenset().union(*(p[(f, gh)] for gh in p[(g, h)]))
                if left != right:
                    return (f, g, h)
    return None


def check_A(c: MulCandidate) -> bool:
    one = identity(c.carrier)
    categorical = compose(c.m, product(one, c.m)) == compose(c.m, product(c.m, one))
    elementwise = _a_witness(c) is None
    _agree("(A) m∘(1×m) = m∘(m×1)", categorical, elementwise)
    return categorical


# -- (F) ---------------------------------------------------------------------


def _frobenius_relations(c: MulCandidate) -> tuple[Rel, Rel, Rel]:
    one = identity(c.carrier)
    m_dag = converse(c.m)
    return (
        compose(product(one, c.m), product(m_dag, one)),
        compose(m_dag, c.m),
        compose(product(c.m, one), product(one, m_dag)),
    )


def _frobenius_elementwise(c: MulCandidate) -> tuple[set, set, set]:
    p = c.products
    els = c.elements
    left: set = set()
    middle: set = set()
    right: set = set()
    for a in els:
        for b in els:
            for cc in els:
                for d in els:
                    pair = ((a, b), (cc, d))
                    if p[(a, b)] & p[(cc, d)]:
                        middle.add(pair)
                    if any(a in p[(cc, e)] and d in p[(e, b)] for e in els):
                        left.add(pair)
                    if any(b in p[(e, d)] and cc in p[(a, e)] for e in els):
                        right.add(pair)
    return left, middle, right


def _f_witness(c: MulCandidate) -> T.Any:
    left, middle, right = _frobenius_elementwise(c)
    differing = sorted((left ^ middle) | (middle ^ right))
    return differing[0] if differing else None


def check_F(c: MulCandidate) -> bool:
    relations = _frobenius_relations(c)
    sets = _frobenius_elementwise(c)
    for rel, elementwise in zip(relations, sets, strict=True):
        if rel.graph != elementwise:
            raise InvariantViolation(
                "(F) elementwise characterisation",
                "a Frobenius composite differs from its elementwise description",
            )
    return relations[0] == relations[1] == relations[2]


# -- (U) ---------------------------------------------------------------------


def _saturated_units(c: MulCandidate) -> frozenset[str]:
    p = c.products
    return frozenset(
        u
        for u in c.elements
        if all(p[(u, f)] <= {f} and p[(f, u)] <= {f} for f in c.elements)
    )


def _unit_witness(c: MulCandidate) -> str | None:
    units = _saturated_units(c)
    p = c.products
    for f in c.elements:
        if not any(f in p[(u, f)] for u in units) or not any(f in p[(f, u)] for u in units):
            return f
    return None


def _unit_equations_hold(c: MulCandidate, units: T.Iterable[str]) -> bool:
    u = point(c.carrier, units)
    one = identity(c.carrier)
    return (
        compose(c.m, product(u, one)) == one
        and compose(c.m, product(one, u)) == one
    )


def find_unit(c: MulCandidate) -> frozenset[str] | None:
    """The unique unit subset, or ``None``.

    Any unit must consist of elements ``u`` with ``uf, fu ⊆ {f}`` for all
    ``f``; if some unit exists, the set of all such elements is one, and
    no smaller set is.
    """
    units = _saturated_units(c)
    elementwise = _unit_witness(c) is None
    categorical = _unit_equations_hold(c, units)
    _agree("(U) m∘(u×1) = 1 = m∘(1×u)", categorical, elementwise)
    return units if categorical else None


def check_U(c: MulCandidate) -> bool:
    return find_unit(c) is not None


def unit_subsets_exhaustive(c: MulCandidate) -> list[frozenset[str]]:
    """Every subset satisfying the unit equations, by trying them all."""
    if c.carrier.size > SUBSET_QUANTIFIED_LIMIT:
        raise PreconditionError(
            f"exhaustive unit search is limited to {SUBSET_QUANTIFIED_LIMIT} elements"
        )
    return [s for s in powerset(c.elements) if _unit_equations_hold(c, s)]


# -- pseudoinverses and (H) -----------------------------------------------------


def pseudoinverses(c: MulCandidate, a: str) -> frozenset[str]:
    pp = _require_partial(c, "pseudoinverses")
    c.carrier.index(a)
    return pp.pseudoinverses(a)


def star_set(c: MulCandidate, subset: T.Iterable[str]) -> frozenset[str]:
    pp = _require_partial(c, "star_set")
    subset = frozenset(subset)
    return frozenset(
        x for x in c.elements if all(pp.is_pseudoinverse(a, x) for a in subset)
    )


def star_hull(c: MulCandidate, subset: T.Iterable[str]) -> frozenset[str]:
    """Union of the pseudoinverse sets of the members of ``subset``.

    This is the star of a point ``1 ⇸ X``: stars of points are determined
    by their values on single elements because ``m∘(1×x)`` preserves unions.
    """
    pp = _require_partial(c, "star_hull")
    return frozenset().union(*(pp.pseudoinverses(a) for a in subset))


def _h_witness(
    pp: PartialProduct, subsets: T.Iterable[frozenset[str]]
) -> tuple[tuple[str, ...], str, str, str] | None:
    els = pp.elements
    for subset in subsets:
        starred = frozenset().union(*(pp.pseudoinverses(a) for a in subset))
        for x in els:
            for y in els:
                right_lhs = any(pp(x, a) == y for a in subset)
                right_rhs = any(pp(y, b) == x for b in starred)
                if right_lhs != right_rhs:
                    return (tuple(sorted(subset)), x, y, "xa = y iff ya* = x")
                left_lhs = any(pp(a, x) == y for a in subset)
                left_rhs = any(pp(b, y) == x for b in starred)
                if left_lhs != left_rhs:
                    return (tuple(sorted(subset)), x, y, "ax = y iff a*y = x")
    return None


def h_holds_on_subsets(c: MulCandidate) -> bool:
    pp = _require_partial(c, "(H)")
    if c.carrier.size > SUBSET_QUANTIFIED_LIMIT:
        raise PreconditionError(
            f"subset-quantified (H) is limited to {SUBSET_QUANTIFIED_LIMIT} elements"
        )
    return _h_witness(pp, powerset(c.elements)) is None


def h_holds_by_theorem(c: MulCandidate) -> bool:
    """(H) through its semigroupoid counterpart: regular and locally cancellative."""
    pp = _require_partial(c, "(H)")
    return pp.is_regular() and pp.lc_violation() is None


def check_H(c: MulCandidate) -> bool:
    pp = _require_partial(c, "(H)")
    if not check_A(c):
        raise PreconditionError("(H) needs (A)", witness=_a_witness(c))

    by_theorem = pp.is_regular() and pp.lc_violation() is None
    on_singletons = _h_witness(pp, (frozenset({a}) for a in pp.elements)) is None
    _agree("(H) on singletons versus regular and locally cancellative", on_singletons, by_theorem)
    if c.carrier.size <= SUBSET_QUANTIFIED_LIMIT:
        on_subsets = _h_witness(pp, powerset(pp.elements)) is None
        _agree("(H) over all subsets versus regular and locally cancellative", on_subsets, by_theorem)
    return by_theorem


def _h_report_witness(c: MulCandidate) -> T.Any:
    pp = c.partial
    if pp is None:
        return None
    witness = _h_witness(pp, (frozenset({a}) for a in pp.elements))
    if witness is not None:
        return witness
    violation = pp.lc_violation()
    return violation.as_tuple() if violation else None


WITNESSES: dict[str, T.Callable[[MulCandidate], T.Any]] = {
    "M": _m_witness,
    "A": _a_witness,
    "F": _f_witness,
    "U": _unit_witness,
    "H": _h_report_witness,
}


# -- Hopf compatibility ---------------------------------------------------------


def check_hopf_compatibility(f: FrobAlgebra) -> bool:
    """Whether ``m†`` and ``u†`` are homomorphisms for the monoid ``(m, u)``.

    Products with the unit are strict, so ``1 × 1`` is ``1`` and the four
    equations are compared directly.
    """
    x = f.carrier
    one = identity(x)
    m, u = f.m, f.u
    m_dag, u_dag = converse(m), converse(u)
    shuffle = product(one, swap(x, x), one)

    comultiplicative = compose(m_dag, m) == compose_all(
        product(m, m), shuffle, product(m_dag, m_dag)
    )
    unit_copied = compose(m_dag, u) == product(u, u)
    counit_multiplicative = compose(u_dag, m) == product(u_dag, u_dag)
    counit_unital = compose(u_dag, u) == identity(UNIT)
    return comultiplicative and unit_copied and counit_multiplicative and counit_unital


def axiom_report(c: MulCandidate, kind: str = "relation") -> ValidationReport:
    """Every axiom with a witness for the failing ones."""
    report = ValidationReport(kind)
    m_ok = check_M(c)
    a_ok = check_A(c)
    report.add("M", m_ok, None if m_ok else _m_witness(c))
    report.add("A", a_ok, None if a_ok else _a_witness(c))

    if kind in ("relation", "frobenius"):
        f_ok = check_F(c)
        report.add("F", f_ok, None if f_ok else _f_witness(c))
        unit = find_unit(c)
        report.add("U", unit is not None, None if unit is not None else _unit_witness(c))

    if kind in ("relation", "hstar"):
        if m_ok and a_ok:
            h_ok = check_H(c)
            report.add("H", h_ok, None if h_ok else _h_report_witness(c))
        else:
            report.add("H", False, note="(H) is only defined when (M) and (A) hold")
    return report
