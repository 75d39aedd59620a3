"""Conversions between the algebraic and the categorical presentations.

Frobenius algebras correspond to groupoids, and H*-algebras to locally
cancellative regular semigroupoids. The facts that make each conversion
well-defined are re-checked on every call; a failure raises
``InvariantViolation`` naming the fact.
"""

import logging
import typing as T

from pupil_labs.rel_frobenius.algebra import FrobAlgebra, HStarAlgebra, MulCandidate
from pupil_labs.rel_frobenius.errors import InvariantViolation, PreconditionError
from pupil_labs.rel_frobenius.finrel import FinSet, is_function
from pupil_labs.rel_frobenius.structures import (
    Groupoid,
    Semigroupoid,
    is_locally_cancellative,
    is_regular,
    require_lc_regular,
    validate_groupoid,
    validate_semigroupoid,
)

logger = logging.getLogger(__name__)


def _unique(values: T.Iterable[str], statement: str, at: str) -> str:
    found = sorted(set(values))
    if len(found) != 1:
        raise InvariantViolation(statement, f"at {at}: found {found}")
    return found[0]


def frob_to_groupoid(f: FrobAlgebra) -> Groupoid:
    pp = f.partial
    units = sorted(f.unit_set)
    carrier = f.carrier.elements

    src = {x: _unique((u for u in units if pp.defined(x, u)), "source is a function", x) for x in carrier}
    tgt = {x: _unique((u for u in units if pp.defined(u, x)), "target is a function", x) for x in carrier}
    inv = {
        x: _unique(
            (y for y in carrier if pp(y, x) in f.unit_set and pp(x, y) in f.unit_set),
            "inverse is a function",
            x,
        )
        for x in carrier
    }

    defined = frozenset(pp.table)
    composable = frozenset((g, h) for g in carrier for h in carrier if src[g] == tgt[h])
    if defined != composable:
        raise InvariantViolation(
            "composable pairs are the pullback of source and target",
            f"differing pairs {sorted(defined ^ composable)[:3]}",
        )

    base = Semigroupoid(FinSet(tuple(units)), f.carrier, src, tgt, pp.table)
    g = Groupoid(base, {u: u for u in units}, inv)
    report = validate_groupoid(g)
    if not report.passed:
        raise InvariantViolation("the induced structure is a groupoid", str(report.first_failure()))
    logger.debug(f"algebra on {len(carrier)} elements -> groupoid with {len(units)} objects")
    return g


def groupoid_to_frob(g: Groupoid) -> FrobAlgebra:
    report = validate_groupoid(g)
    if not report.passed:
        failure = T.cast(T.Any, report.first_failure())
        raise PreconditionError(f"not a groupoid: {failure.id} fails", witness=failure.witness)
    c = MulCandidate.from_table(g.morphisms, g.comp)
    return FrobAlgebra(c, g.identities())


def hstar_to_semigroupoid(h: HStarAlgebra) -> Semigroupoid:
    pp = h.partial
    carrier = h.carrier.elements
    idempotents = pp.idempotents()

    src: dict[str, str] = {}
    tgt: dict[str, str] = {}
    for f in carrier:
        stars = sorted(pp.pseudoinverses(f))
        if not stars:
            raise InvariantViolation("every element of an H*-algebra has a pseudoinverse", f)
        src[f] = _unique((T.cast(str, pp(fs, f)) for fs in stars), "f*f is independent of f*", f)
        tgt[f] = _unique((T.cast(str, pp(f, fs)) for fs in stars), "ff* is independent of f*", f)
        for endpoint in (src[f], tgt[f]):
            if endpoint not in idempotents:
                raise InvariantViolation("f*f and ff* are idempotent", f)

    comp: dict[tuple[str, str], str] = {}
    for g in carrier:
        for f in carrier:
            if src[g] != tgt[f]:
                continue
            gf = pp(g, f)
            if gf is None:
                raise InvariantViolation("gf is defined whenever g*g = ff*", f"({g}, {f})")
            comp[(g, f)] = gf

    s = Semigroupoid(FinSet(idempotents), h.carrier, src, tgt, comp)
    if not validate_semigroupoid(s).passed or not is_regular(s) or not is_locally_cancellative(s):
        raise InvariantViolation(
            "an H*-algebra induces a locally cancellative regular semigroupoid"
        )
    return s


def semigroupoid_to_hstar(s: Semigroupoid) -> HStarAlgebra:
    require_lc_regular(s, "semigroupoid_to_hstar")
    return HStarAlgebra(MulCandidate.from_table(s.morphisms, s.comp))


def is_group(f: FrobAlgebra) -> bool:
    """A single identity; equivalently the unit ``1 ⇸ X`` is a function."""
    single = len(f.unit_set) == 1
    if single != is_function(f.u):
        raise InvariantViolation("a unit relation is a function iff it picks one element")
    return single


def induced_unit(h: HStarAlgebra) -> frozenset[str]:
    """The elements ``u`` with ``u = u*u`` for some pseudoinverse ``u*``."""
    pp = h.partial
    return frozenset(
        u for u in h.carrier.elements if any(pp(us, u) == u for us in pp.pseudoinverses(u))
    )


def hstar_as_frobenius(h: HStarAlgebra) -> FrobAlgebra | None:
    """The same multiplication as a Frobenius algebra, when it has a unit."""
    try:
        return FrobAlgebra.from_candidate(h.base)
    except PreconditionError:
        return None
