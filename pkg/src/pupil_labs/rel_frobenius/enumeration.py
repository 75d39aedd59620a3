"""Exhaustive generation of small algebras and semigroupoids.

Algebra scans walk every single-valued multiplication table on ``n`` atoms.
A table is an index in base ``n + 1`` with one digit per cell ``(x, y)`` in
carrier order, least significant first; digit ``0`` leaves the product
undefined and digit ``k`` sets it to the ``k``-th atom. Only tables whose
products cover the carrier are tried, which is sound because every structure
enumerated here satisfies (M).

Semigroupoid scans fix the endpoints first: the ``2n`` source and target slots
are partitioned into objects, then compositions are chosen cell by cell with
associativity checked as soon as it can fail.

Results are always sorted, so they do not depend on the worker count.
"""

import itertools
import logging
import time
import typing as T
from dataclasses import dataclass, field

import pandas as pd

from pupil_labs.rel_frobenius.algebra import (
    Algebra,
    FrobAlgebra,
    HStarAlgebra,
    MulCandidate,
    PartialProduct,
    check_hopf_compatibility,
)
from pupil_labs.rel_frobenius.correspond import frob_to_groupoid, groupoid_to_frob
from pupil_labs.rel_frobenius.errors import (
    InvariantViolation,
    PreconditionError,
    SizeLimitError,
)
from pupil_labs.rel_frobenius.finrel import FinSet
from pupil_labs.rel_frobenius.job_manager import JobManager
from pupil_labs.rel_frobenius.morphisms import (
    hstar_adjunction_report,
    lrs_adjunction_report,
    objects_coincide_with_idempotents,
    unit_iso_predicate,
)
from pupil_labs.rel_frobenius.quotient import corollary_quotient, unit_and_counit
from pupil_labs.rel_frobenius.reports import ValidationReport
from pupil_labs.rel_frobenius.structures import (
    Groupoid,
    Semigroupoid,
    check_lc_symmetric_equivalence,
    is_locally_cancellative,
    is_monic_epic,
    is_regular,
    promote_to_groupoid,
    relabel_objects,
    validate_groupoid,
    validate_semigroupoid,
)
from pupil_labs.rel_frobenius.utilities import carrier_atoms

logger = logging.getLogger(__name__)

MAX_ALGEBRA_SIZE = 3
MAX_MORPHISMS = 4
DEFAULT_CHUNK_SIZE = 8192
CONFIGS_PER_TASK = 64

KINDS = ("frobenius", "hstar", "groupoid", "semigroupoid")

Table = dict[tuple[str, str], str]


@dataclass
class CensusReport:
    kind: str
    size: int
    scanned: int
    structures: list[T.Any]
    wall_time: float
    findings: list[str] = field(default_factory=list)

    @property
    def count(self) -> int:
        return len(self.structures)

    def to_frame(self) -> pd.DataFrame:
        rows = [_census_row(self.kind, self.size, i, s) for i, s in enumerate(self.structures)]
        return pd.DataFrame(rows, columns=["kind", "size", "index", "unit", "triples"])

    def to_dict(self) -> dict[str, T.Any]:
        return {
            "kind": self.kind,
            "size": self.size,
            "scanned": self.scanned,
            "count": self.count,
            "wall_time": self.wall_time,
            "findings": list(self.findings),
        }


def _census_row(kind: str, size: int, position: int, s: T.Any) -> dict[str, T.Any]:
    if isinstance(s, (FrobAlgebra, HStarAlgebra)):
        table = T.cast(PartialProduct, s.base.partial).table
        unit = sorted(s.unit_set) if isinstance(s, FrobAlgebra) else []
        return {
            "kind": kind,
            "size": size,
            "index": encode_table(table, s.carrier.elements),
            "unit": " ".join(unit),
            "triples": "; ".join(f"{x} {y} -> {z}" for (x, y), z in sorted(table.items())),
        }

    base = s.base if isinstance(s, Groupoid) else s
    unit = sorted(s.identities()) if isinstance(s, Groupoid) else []
    return {
        "kind": kind,
        "size": size,
        "index": position,
        "unit": " ".join(unit),
        "triples": "; ".join(f"{g} {f} -> {h}" for (g, f), h in sorted(base.comp.items())),
    }


# -- table codec ------------------------------------------------------------------


def _cells(atoms: T.Sequence[str]) -> list[tuple[str, str]]:
    return [(x, y) for x in atoms for y in atoms]


def decode_table(index: int, atoms: T.Sequence[str]) -> Table:
    base = len(atoms) + 1
    table: Table = {}
    for cell in _cells(atoms):
        index, digit = divmod(index, base)
        if digit:
            table[cell] = atoms[digit - 1]
    return table


def encode_table(table: T.Mapping[tuple[str, str], str], atoms: T.Sequence[str]) -> int:
    base = len(atoms) + 1
    position = {a: i + 1 for i, a in enumerate(atoms)}
    index = 0
    for cell in reversed(_cells(atoms)):
        index = index * base + (position[table[cell]] if cell in table else 0)
    return index


def table_count(n: int) -> int:
    return (n + 1) ** (n * n)


def _check_size(n: int, limit: int, what: str) -> None:
    if not 1 <= n <= limit:
        raise SizeLimitError(f"{what} must be between 1 and {limit}, got {n}")


# -- algebra scans -----------------------------------------------------------------------


def _is_associative(pp: PartialProduct) -> bool:
    els = pp.elements
    return all(pp(f, g, h) == pp(f, pp(g, h)) for f in els for g in els for h in els)


def _build_algebra(kind: str, atoms: tuple[str, ...], table: Table) -> Algebra:
    c = MulCandidate.from_table(FinSet(atoms), table)
    if kind == "frobenius":
        return FrobAlgebra.from_candidate(c)
    return HStarAlgebra(c)


def scan_algebra_range(task: tuple[str, int, int, int]) -> list[int]:
    """Indices in ``[start, stop)`` whose tables pass every axiom of ``kind``."""
    kind, n, start, stop = task
    atoms = carrier_atoms(n)
    everything = set(atoms)
    found = []
    for index in range(start, stop):
        table = decode_table(index, atoms)
        if set(table.values()) != everything:
            continue
        if not _is_associative(PartialProduct(atoms, table)):
            continue
        try:
            _build_algebra(kind, atoms, table)
        except PreconditionError:
            continue
        found.append(index)
    return found


def _algebra_tasks(kind: str, n: int, chunk_size: int) -> list[tuple[str, int, int, int]]:
    total = table_count(n)
    return [
        (kind, n, start, min(start + chunk_size, total))
        for start in range(0, total, chunk_size)
    ]


def _enumerate_algebras(
    kind: str, n: int, manager: JobManager | None, chunk_size: int
) -> list[Algebra]:
    _check_size(n, MAX_ALGEBRA_SIZE, "algebra carrier size")
    manager = manager or JobManager(show_progress=False)
    tasks = _algebra_tasks(kind, n, chunk_size)
    logger.info(f"Scanning {table_count(n)} {kind} tables on {n} atoms in {len(tasks)} chunks")

    chunks = manager.run(scan_algebra_range, tasks, description=f"{kind} n={n}")
    atoms = carrier_atoms(n)
    found = [_build_algebra(kind, atoms, decode_table(i, atoms)) for i in sorted(itertools.chain(*chunks))]
    logger.info(f"Found {len(found)} {kind} algebras on {n} atoms")
    return found


def enumerate_frobenius(
    n: int, manager: JobManager | None = None, chunk_size: int = DEFAULT_CHUNK_SIZE
) -> list[FrobAlgebra]:
    """Every Frobenius algebra on ``n`` atoms.

    Up to three atoms the tables are scanned directly. Four atoms go through
    the groupoids with four morphisms and the converters.
    """
    if n == MAX_MORPHISMS:
        logger.info(f"Reaching Frobenius algebras on {n} atoms through groupoids")
        return sorted(
            (groupoid_to_frob(g) for g in enumerate_groupoids(n, manager)),
            key=canonical_text,
        )
    return T.cast(list[FrobAlgebra], _enumerate_algebras("frobenius", n, manager, chunk_size))


def enumerate_hstar(
    n: int, manager: JobManager | None = None, chunk_size: int = DEFAULT_CHUNK_SIZE
) -> list[HStarAlgebra]:
    return T.cast(list[HStarAlgebra], _enumerate_algebras("hstar", n, manager, chunk_size))


def hopf_census(n: int, manager: JobManager | None = None) -> list[FrobAlgebra]:
    """Frobenius algebras on ``n`` atoms whose comultiplication is also a homomorphism."""
    return [f for f in enumerate_frobenius(n, manager) if check_hopf_compatibility(f)]


# -- semigroupoid scans ---------------------------------------------------------------


def object_configurations(n: int) -> list[tuple[int, ...]]:
    """Partitions of the ``2n`` endpoint slots, as restricted growth strings.

    Slot ``2i`` is the source of morphism ``i`` and slot ``2i + 1`` its
    target. Every object is the endpoint of some morphism.
    """
    configs: list[tuple[int, ...]] = []

    def grow(prefix: list[int], blocks: int) -> None:
        if len(prefix) == 2 * n:
            configs.append(tuple(prefix))
            return
        for label in range(blocks + 1):
            grow([*prefix, label], max(blocks, label + 1))

    grow([], 0)
    return configs


def _endpoints(
    config: tuple[int, ...], atoms: tuple[str, ...]
) -> tuple[dict[str, str], dict[str, str]]:
    src = {f: f"o{config[2 * i]}" for i, f in enumerate(atoms)}
    tgt = {f: f"o{config[2 * i + 1]}" for i, f in enumerate(atoms)}
    return src, tgt


def _consistent(table: Table, atoms: tuple[str, ...]) -> bool:
    """No associativity failure among the products assigned so far."""
    for x in atoms:
        for y in atoms:
            xy = table.get((x, y))
            if xy is None:
                continue
            for z in atoms:
                yz = table.get((y, z))
                if yz is None:
                    continue
                left = table.get((xy, z))
                right = table.get((x, yz))
                if left is not None and right is not None and left != right:
                    return False
    return True


def _semigroupoid_tables(
    atoms: tuple[str, ...], src: dict[str, str], tgt: dict[str, str]
) -> T.Iterator[Table]:
    cells = [(g, f) for g in atoms for f in atoms if src[g] == tgt[f]]
    choices = [
        [h for h in atoms if src[h] == src[f] and tgt[h] == tgt[g]] for g, f in cells
    ]
    if any(not options for options in choices):
        return

    table: Table = {}

    def assign(k: int) -> T.Iterator[Table]:
        if k == len(cells):
            yield dict(table)
            return
        for h in choices[k]:
            table[cells[k]] = h
            if _consistent(table, atoms):
                yield from assign(k + 1)
        table.pop(cells[k], None)

    yield from assign(0)


def _config_semigroupoid(config: tuple[int, ...], atoms: tuple[str, ...], table: Table) -> Semigroupoid:
    src, tgt = _endpoints(config, atoms)
    objects = FinSet(tuple(f"o{i}" for i in range(max(config) + 1)))
    return Semigroupoid(objects, FinSet(atoms), src, tgt, table)


def _is_lc_regular(s: Semigroupoid) -> bool:
    return validate_semigroupoid(s).passed and bool(is_regular(s)) and bool(is_locally_cancellative(s))


def scan_semigroupoid_configs(
    task: tuple[int, tuple[tuple[int, ...], ...]],
) -> list[tuple[tuple[int, ...], tuple[tuple[tuple[str, str], str], ...]]]:
    """Locally cancellative regular semigroupoids over the given endpoint configurations."""
    n, configs = task
    atoms = carrier_atoms(n)
    found = []
    for config in configs:
        src, tgt = _endpoints(config, atoms)
        for table in _semigroupoid_tables(atoms, src, tgt):
            if _is_lc_regular(_config_semigroupoid(config, atoms, table)):
                found.append((config, tuple(sorted(table.items()))))
    return found


def enumerate_lrsgpd(n_morphisms: int, manager: JobManager | None = None) -> list[Semigroupoid]:
    """Locally cancellative regular semigroupoids with ``n_morphisms`` morphisms."""
    _check_size(n_morphisms, MAX_MORPHISMS, "morphism count")
    manager = manager or JobManager(show_progress=False)
    configs = object_configurations(n_morphisms)
    tasks = [
        (n_morphisms, tuple(configs[i : i + CONFIGS_PER_TASK]))
        for i in range(0, len(configs), CONFIGS_PER_TASK)
    ]
    logger.info(f"Scanning {len(configs)} endpoint configurations for {n_morphisms} morphisms")

    chunks = manager.run(scan_semigroupoid_configs, tasks, description=f"semigroupoid n={n_morphisms}")
    atoms = carrier_atoms(n_morphisms)
    found = []
    for config, items in sorted(itertools.chain(*chunks)):
        s = _config_semigroupoid(config, atoms, dict(items))
        if not _is_lc_regular(s):
            raise InvariantViolation("a scanned semigroupoid passes its checks again", str(config))
        found.append(s)

    logger.info(f"Found {len(found)} locally cancellative regular semigroupoids")
    return found


def as_identity_labelled(g: Groupoid) -> Groupoid:
    """The same groupoid with each object named after its identity morphism."""
    base = relabel_objects(g.base, dict(g.ident))
    return Groupoid(base, {e: e for e in g.ident.values()}, g.inv)


def enumerate_groupoids(n_morphisms: int, manager: JobManager | None = None) -> list[Groupoid]:
    found = []
    for s in enumerate_lrsgpd(n_morphisms, manager):
        g = promote_to_groupoid(s)
        if g is not None:
            found.append(as_identity_labelled(g))
    return sorted(found, key=lambda g: g.key())


# -- canonical forms and renaming ------------------------------------------------------


def canonical_text(structure: T.Any) -> str:
    from pupil_labs.rel_frobenius.formats.structure_file import serialize

    return serialize(structure)


def rename_algebra(a: Algebra, mapping: T.Mapping[str, str]) -> Algebra:
    """Rename carrier atoms through the bijection ``mapping``."""
    if sorted(mapping) != list(a.carrier.elements) or len(set(mapping.values())) != len(mapping):
        raise PreconditionError("renaming must be a bijection on the carrier")

    table = {(mapping[x], mapping[y]): mapping[z] for (x, y), z in a.partial.table.items()}
    c = MulCandidate.from_table(FinSet(tuple(mapping.values())), table)
    if isinstance(a, FrobAlgebra):
        return FrobAlgebra(c, frozenset(mapping[u] for u in a.unit_set))
    return HStarAlgebra(c)


def rename_groupoid(g: Groupoid, mapping: T.Mapping[str, str]) -> Groupoid:
    """Rename morphisms through ``mapping``; objects follow their identities."""
    if sorted(mapping) != list(g.morphisms.elements) or len(set(mapping.values())) != len(mapping):
        raise PreconditionError("renaming must be a bijection on the morphisms")

    base = Semigroupoid(
        g.objects,
        FinSet(tuple(mapping.values())),
        {mapping[f]: x for f, x in g.src.items()},
        {mapping[f]: x for f, x in g.tgt.items()},
        {(mapping[b], mapping[a]): mapping[c] for (b, a), c in g.comp.items()},
    )
    renamed = Groupoid(
        base,
        {x: mapping[e] for x, e in g.ident.items()},
        {mapping[f]: mapping[v] for f, v in g.inv.items()},
    )
    report = validate_groupoid(renamed)
    if not report.passed:
        raise InvariantViolation("renaming preserves the groupoid laws", str(report.first_failure()))
    return as_identity_labelled(renamed)


# -- census -----------------------------------------------------------------------------


def census(
    kind: str,
    size: int,
    manager: JobManager | None = None,
    chunk_size: int = DEFAULT_CHUNK_SIZE,
) -> CensusReport:
    if kind not in KINDS:
        raise ValueError(f"unknown census kind {kind!r}, expected one of {KINDS}")

    start = time.perf_counter()
    findings: list[str] = []
    structures: list[T.Any]
    if kind == "frobenius":
        structures = enumerate_frobenius(size, manager, chunk_size)
        scanned = table_count(size) if size <= MAX_ALGEBRA_SIZE else len(object_configurations(size))
    elif kind == "hstar":
        structures = enumerate_hstar(size, manager, chunk_size)
        scanned = table_count(size)
    elif kind == "groupoid":
        structures = enumerate_groupoids(size, manager)
        scanned = len(object_configurations(size))
    else:
        structures = enumerate_lrsgpd(size, manager)
        scanned = len(object_configurations(size))
        without = sum(1 for s in structures if promote_to_groupoid(s) is None)
        findings.append(f"{without} of {len(structures)} have no identities")

    return CensusReport(kind, size, scanned, structures, time.perf_counter() - start, findings)


def cross_census(n: int, manager: JobManager | None = None) -> ValidationReport:
    """Check the correspondences and adjunctions across every family of size ``n``.

    The algebra side is only scanned while ``n`` is within the direct scan
    bound; the groupoid and semigroupoid side goes up to ``MAX_MORPHISMS``.
    """
    _check_size(n, MAX_MORPHISMS, "census size")
    report = ValidationReport("cross-census")

    frobenius = enumerate_frobenius(n, manager)
    groupoids = enumerate_groupoids(n, manager)
    from_algebras = [frob_to_groupoid(f) for f in frobenius]
    group_keys = {g.key() for g in groupoids}
    image_keys = [g.key() for g in from_algebras]
    injective = len(set(image_keys)) == len(image_keys)
    report.add(
        "frobenius-groupoid-bijection",
        injective and set(image_keys) == group_keys,
        None if set(image_keys) == group_keys else sorted(set(image_keys) ^ group_keys)[:1],
        note=f"{len(frobenius)} algebras, {len(groupoids)} groupoids",
    )
    round_trip = next(
        (canonical_text(f) for f, g in zip(frobenius, from_algebras, strict=True) if groupoid_to_frob(g) != f),
        None,
    )
    report.add("frobenius-round-trip", round_trip is None, round_trip)

    if n <= MAX_ALGEBRA_SIZE:
        hstar = enumerate_hstar(n, manager)
        hstar_bases = {h.base for h in hstar}
        missing = next((canonical_text(f) for f in frobenius if f.base not in hstar_bases), None)
        report.add("frobenius-within-hstar", missing is None, missing, note=f"{len(hstar)} H*-algebras")

        non_iso: list[str] = []
        failed = None
        for h in hstar:
            r = hstar_adjunction_report(h)
            try:
                corollary_quotient(h)
            except InvariantViolation as exc:
                r.add("quotient", False, note=str(exc))
            if not r.passed and failed is None:
                failed = (canonical_text(h), T.cast(T.Any, r.first_failure()).id)
            if not unit_iso_predicate(h):
                non_iso.append(canonical_text(h))
        report.add("hstar-adjunction", failed is None, failed)
        report.add("unit-not-iso", True, non_iso or None, note=f"{len(non_iso)} instances")

    lrs = enumerate_lrsgpd(n, manager)
    failed = None
    counit_non_iso = 0
    monic_epic_not_lc = None
    for s in lrs:
        r = lrs_adjunction_report(s)
        r.extend(unit_and_counit(s).report, prefix="quotient:")
        r.add("mirrored-lc", check_lc_symmetric_equivalence(s))
        if not r.passed and failed is None:
            failed = (canonical_text(s), T.cast(T.Any, r.first_failure()).id)
        if not objects_coincide_with_idempotents(s):
            counit_non_iso += 1
        if is_monic_epic(s) and not is_locally_cancellative(s):
            monic_epic_not_lc = canonical_text(s)
    report.add("semigroupoid-adjunction", failed is None, failed, note=f"{len(lrs)} semigroupoids")
    report.add("counit-not-iso", True, note=f"{counit_non_iso} instances")
    report.add("monic-epic-implies-lc", monic_epic_not_lc is None, monic_epic_not_lc)

    without_identities = [canonical_text(s) for s in lrs if promote_to_groupoid(s) is None]
    report.add(
        "lc-without-identities",
        True,
        without_identities or None,
        note=f"{len(without_identities)} instances",
    )
    return report
