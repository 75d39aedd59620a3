import argparse
import logging
import sys
import typing as T
from importlib.metadata import version
from pathlib import Path

from pupil_labs.rel_frobenius import enumeration
from pupil_labs.rel_frobenius.algebra import (
    FrobAlgebra,
    HStarAlgebra,
    MulCandidate,
    axiom_report,
    check_hopf_compatibility,
    find_unit,
)
from pupil_labs.rel_frobenius.correspond import (
    frob_to_groupoid,
    groupoid_to_frob,
    hstar_as_frobenius,
    hstar_to_semigroupoid,
    semigroupoid_to_hstar,
)
from pupil_labs.rel_frobenius.errors import (
    CarrierMismatchError,
    ParseError,
    PreconditionError,
    RelFrobeniusError,
)
from pupil_labs.rel_frobenius.formats import report as report_format
from pupil_labs.rel_frobenius.formats.dot import to_dot
from pupil_labs.rel_frobenius.formats.structure_file import (
    MorphismFile,
    RawAlgebra,
    RawStructure,
    derive_inverses,
    load,
    load_raw,
    save,
    serialize,
)
from pupil_labs.rel_frobenius.job_manager import JobManager
from pupil_labs.rel_frobenius.logger import setup_logging
from pupil_labs.rel_frobenius.morphisms import (
    CLASSES,
    classify,
    hstar_adjunction_report,
    lrs_adjunction_report,
    morphism_report,
)
from pupil_labs.rel_frobenius.quotient import F_functor, corollary_quotient, unit_and_counit
from pupil_labs.rel_frobenius.reports import ValidationReport
from pupil_labs.rel_frobenius.settings import (
    SETTINGS_PATH,
    load_settings,
    save_settings,
)
from pupil_labs.rel_frobenius.structures import (
    Groupoid,
    Semigroupoid,
    is_locally_cancellative,
    is_regular,
    promote_to_groupoid,
    validate_groupoid,
    validate_semigroupoid,
)

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_USAGE = 2

CONVERSION_TARGETS = ("frobenius", "groupoid", "hstar", "semigroupoid")


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be at least 1, got {value}")
    return value


def convert(structure: T.Any, to: str) -> T.Any:
    """Move a structure across the correspondences, refusing when a hypothesis fails."""
    if to not in CONVERSION_TARGETS:
        raise ValueError(f"unknown conversion target {to!r}")

    if isinstance(structure, MulCandidate):
        structure = FrobAlgebra.from_candidate(structure) if to in ("frobenius", "groupoid") else HStarAlgebra(structure)

    if isinstance(structure, FrobAlgebra):
        if to == "frobenius":
            return structure
        if to == "hstar":
            return HStarAlgebra(structure.base)
        g = frob_to_groupoid(structure)
        return g if to == "groupoid" else g.base

    if isinstance(structure, HStarAlgebra):
        if to == "hstar":
            return structure
        if to == "semigroupoid":
            return hstar_to_semigroupoid(structure)
        f = hstar_as_frobenius(structure)
        if f is None:
            raise PreconditionError("the H*-algebra has no unit, so it is not a Frobenius algebra")
        return convert(f, to)

    if isinstance(structure, Groupoid):
        if to == "groupoid":
            return structure
        if to == "frobenius":
            return groupoid_to_frob(structure)
        return structure.base if to == "semigroupoid" else semigroupoid_to_hstar(structure.base)

    if isinstance(structure, Semigroupoid):
        if to == "semigroupoid":
            return structure
        if to == "hstar":
            return semigroupoid_to_hstar(structure)
        g = promote_to_groupoid(structure)
        if g is None:
            raise PreconditionError("the semigroupoid has no identities, so it is not a groupoid")
        return g if to == "groupoid" else groupoid_to_frob(g)

    raise PreconditionError(f"cannot convert a {type(structure).__name__}")


def check_report(raw: RawStructure) -> ValidationReport:
    """Every validator for the kind declared in the file."""
    if isinstance(raw, MorphismFile):
        return morphism_report(raw.morphism)

    if isinstance(raw, RawAlgebra):
        report = axiom_report(raw.candidate, raw.kind)
        if raw.kind == "frobenius" and raw.unit is not None:
            forced = find_unit(raw.candidate)
            report.add(
                "declared-unit",
                forced == raw.unit,
                None if forced == raw.unit else sorted(raw.unit),
                note="" if forced is None else f"forced unit is {' '.join(sorted(forced))}",
            )
        return report

    if raw.kind == "semigroupoid":
        report = validate_semigroupoid(raw.base)
        if report.passed:
            regularity = is_regular(raw.base)
            missing = next((f for f, xs in sorted(regularity.pseudoinverses.items()) if not xs), None)
            report.add("regular", bool(regularity), missing)
            cancellativity = is_locally_cancellative(raw.base)
            witness = cancellativity.witness
            report.add(
                "locally-cancellative",
                bool(cancellativity),
                witness.as_tuple() if witness else None,
                note=witness.clause if witness else "",
            )
        return report

    inverses = {**derive_inverses(raw.base, raw.ident), **raw.inv}
    try:
        g = Groupoid(raw.base, raw.ident, inverses)
    except CarrierMismatchError as exc:
        report = ValidationReport("groupoid")
        report.extend(validate_semigroupoid(raw.base))
        report.add("identities-and-inverses", False, note=str(exc))
        return report
    return validate_groupoid(g)


def adjunction_report(structure: T.Any) -> ValidationReport:
    if isinstance(structure, FrobAlgebra):
        structure = HStarAlgebra(structure.base)
    if isinstance(structure, HStarAlgebra):
        return hstar_adjunction_report(structure)

    if isinstance(structure, Groupoid):
        report = lrs_adjunction_report(structure.base)
        report.extend(unit_and_counit(structure).report, prefix="quotient:")
        return report
    if isinstance(structure, Semigroupoid):
        report = lrs_adjunction_report(structure)
        report.extend(unit_and_counit(structure).report, prefix="quotient:")
        return report
    raise PreconditionError(f"no adjunction is checked for a {type(structure).__name__}")


def quotient(structure: T.Any) -> T.Any:
    if isinstance(structure, HStarAlgebra):
        return corollary_quotient(structure)
    if isinstance(structure, Groupoid):
        return F_functor(structure.base)
    if isinstance(structure, Semigroupoid):
        return F_functor(structure)
    raise PreconditionError(f"cannot take the quotient of a {type(structure).__name__}")


class RelFrobeniusApp:
    def __init__(self, argv: list[str]) -> None:
        try:
            self.version = version("pupil_labs.rel_frobenius")
        except Exception:
            self.version = "?"

        self.args = self.build_parser().parse_args(argv[1:])

        self.settings_path: Path = self.args.settings
        self.settings = load_settings(self.settings_path)
        if self.args.jobs is not None:
            self.settings.jobs = self.args.jobs
        if self.args.no_progress:
            self.settings.show_progress = False

        level = None
        if self.args.verbose:
            level = "DEBUG"
        elif self.args.quiet:
            level = "WARNING"
        setup_logging(self.settings, level)
        logging.debug(f"Rel Frobenius v{self.version} starting up")

        self.job_manager = JobManager(self.settings.jobs, self.settings.show_progress)

    def build_parser(self) -> argparse.ArgumentParser:
        parser = argparse.ArgumentParser(
            prog="rel-frobenius",
            description="Check, convert and enumerate relative Frobenius algebras and groupoids.",
        )
        parser.add_argument("--version", action="version", version=f"%(prog)s {self.version}")
        parser.add_argument("--settings", type=Path, default=SETTINGS_PATH)
        parser.add_argument("--jobs", type=_positive_int, default=None, help="worker processes for enumeration")
        parser.add_argument("--no-progress", action="store_true")
        verbosity = parser.add_mutually_exclusive_group()
        verbosity.add_argument("-v", "--verbose", action="store_true")
        verbosity.add_argument("-q", "--quiet", action="store_true")

        commands = parser.add_subparsers(dest="command", required=True)

        check = commands.add_parser("check", help="run every validator for the file's kind")
        check.add_argument("file", type=Path)
        check.add_argument("--format", choices=report_format.FORMATS, default="text")

        conv = commands.add_parser("convert", help="apply a correspondence")
        conv.add_argument("file", type=Path)
        conv.add_argument("--to", choices=CONVERSION_TARGETS, required=True)
        conv.add_argument("-o", "--output", type=Path, default=None)

        quot = commands.add_parser("quotient", help="collapse to a groupoid or Frobenius algebra")
        quot.add_argument("file", type=Path)
        quot.add_argument("-o", "--output", type=Path, default=None)

        enum = commands.add_parser("enumerate", help="census of all structures of a size")
        enum.add_argument("--kind", choices=enumeration.KINDS, required=True)
        enum.add_argument("--size", type=int, required=True)
        enum.add_argument("--count-only", action="store_true")
        enum.add_argument("--hopf", action="store_true", help="keep only Hopf-compatible algebras")
        enum.add_argument("-o", "--output", type=Path, default=None)
        enum.add_argument("--csv", type=Path, default=None)
        enum.add_argument("--format", choices=report_format.FORMATS, default="text")

        cross = commands.add_parser("cross-census", help="check correspondences over a census")
        cross.add_argument("--size", type=int, required=True)
        cross.add_argument("--format", choices=report_format.FORMATS, default="text")

        adj = commands.add_parser("verify-adjunction", help="unit, counit and triangle report")
        adj.add_argument("file", type=Path)
        adj.add_argument("--format", choices=report_format.FORMATS, default="text")

        morph = commands.add_parser("check-morphism", help="classify a relmorphism file")
        morph.add_argument("file", type=Path)
        morph.add_argument("--class", dest="morphism_class", choices=CLASSES, required=True)
        morph.add_argument("--format", choices=report_format.FORMATS, default="text")

        dot = commands.add_parser("dot", help="draw a groupoid or semigroupoid")
        dot.add_argument("file", type=Path)
        dot.add_argument("-o", "--output", type=Path, default=None)

        commands.add_parser("save-settings", help="persist the effective settings")
        return parser

    def run(self) -> int:
        handler = getattr(self, "cmd_" + self.args.command.replace("-", "_"))
        try:
            return T.cast(int, handler())
        except ParseError as exc:
            logging.error(f"{getattr(self.args, 'file', '')}: {exc}")
            return EXIT_USAGE
        except FileNotFoundError as exc:
            logging.error(f"File not found: {exc.filename}")
            return EXIT_USAGE
        except OSError as exc:
            logging.error(f"Cannot read {exc.filename}: {exc.strerror}")
            return EXIT_USAGE
        except RelFrobeniusError as exc:
            logging.error(str(exc))
            return EXIT_FAILED

    def emit(self, text: str, output: Path | None = None) -> None:
        if output is None:
            sys.stdout.write(text)
            return

        output.parent.mkdir(parents=True, exist_ok=True)
        output.write_text(text, encoding="utf-8")
        logging.info(f"Wrote {output}")

    def emit_report(self, report: ValidationReport, fmt: str = "text") -> int:
        self.emit(report_format.render(report, fmt))
        return EXIT_OK if report.passed else EXIT_FAILED

    def write_structure(self, structure: T.Any, output: Path | None) -> None:
        if output is None:
            self.emit(serialize(structure))
        else:
            save(structure, output)
            logging.info(f"Wrote {output}")

    def cmd_check(self) -> int:
        return self.emit_report(check_report(load_raw(self.args.file)), self.args.format)

    def cmd_convert(self) -> int:
        structure = load(self.args.file, kinds=("relation", *CONVERSION_TARGETS))
        self.write_structure(convert(structure, self.args.to), self.args.output)
        return EXIT_OK

    def cmd_quotient(self) -> int:
        structure = load(self.args.file, kinds=("hstar", "semigroupoid", "groupoid"))
        self.write_structure(quotient(structure), self.args.output)
        return EXIT_OK

    def cmd_enumerate(self) -> int:
        census = enumeration.census(
            self.args.kind, self.args.size, self.job_manager, self.settings.chunk_size
        )
        if self.args.hopf:
            if self.args.kind != "frobenius":
                raise PreconditionError("--hopf only applies to --kind frobenius")
            census.structures = [f for f in census.structures if check_hopf_compatibility(f)]
            census.findings.append("restricted to Hopf-compatible algebras")

        logging.info(
            f"Found {census.count} {census.kind} structures of size {census.size} "
            f"in {census.wall_time:.2f}s"
        )
        if self.args.csv is not None:
            report_format.export_census_csv(census, self.args.csv)

        if self.args.count_only:
            self.emit(f"{census.count}\n")
        elif self.args.format == "json":
            self.emit(report_format.render_census(census, "json"))
        else:
            listing = "\n".join(serialize(s) for s in census.structures)
            self.emit(listing, self.args.output)
            if self.args.output is not None:
                self.emit(report_format.render_census(census))
        return EXIT_OK

    def cmd_cross_census(self) -> int:
        return self.emit_report(
            enumeration.cross_census(self.args.size, self.job_manager), self.args.format
        )

    def cmd_verify_adjunction(self) -> int:
        structure = load(self.args.file, kinds=("frobenius", "hstar", "semigroupoid", "groupoid"))
        return self.emit_report(adjunction_report(structure), self.args.format)

    def cmd_check_morphism(self) -> int:
        loaded = load(self.args.file, kinds=("relmorphism",))
        report = morphism_report(loaded.morphism)
        classes = classify(loaded.morphism)
        wanted = self.args.morphism_class
        self.emit(report_format.render(report, self.args.format))
        if self.args.format == "text":
            verdict = "is" if wanted in classes else "is not"
            self.emit(f"morphism {verdict} of class {wanted}\n")
        return EXIT_OK if wanted in classes else EXIT_FAILED

    def cmd_dot(self) -> int:
        structure = load(self.args.file, kinds=("frobenius", "hstar", "semigroupoid", "groupoid"))
        self.emit(to_dot(structure, self.args.file.stem), self.args.output)
        return EXIT_OK

    def cmd_save_settings(self) -> int:
        save_settings(self.settings, self.settings_path)
        return EXIT_OK
