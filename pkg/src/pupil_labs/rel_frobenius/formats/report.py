import json
import logging
import typing as T
from pathlib import Path

from numpyencoder import NumpyEncoder

from pupil_labs.rel_frobenius.enumeration import CensusReport
from pupil_labs.rel_frobenius.reports import ValidationReport

FORMATS = ("text", "json")


def _witness_text(witness: T.Any) -> str:
    if isinstance(witness, (tuple, list)):
        return "(" + ", ".join(_witness_text(w) for w in witness) + ")"
    if isinstance(witness, (set, frozenset)):
        return "{" + ", ".join(sorted(_witness_text(w) for w in witness)) + "}"
    return str(witness)


def render_text(report: ValidationReport) -> str:
    lines = [f"{report.kind}: {'PASS' if report.passed else 'FAIL'}"]
    width = max((len(r.id) for r in report.results), default=0)
    for r in report.results:
        line = f"  {r.id.ljust(width)}  {'ok' if r.passed else 'FAILED'}"
        if r.witness is not None:
            line += f"  witness: {_witness_text(r.witness)}"
        if r.note:
            line += f"  ({r.note})"
        lines.append(line)
    return "\n".join(lines) + "\n"


def render_json(report: ValidationReport) -> str:
    return json.dumps(report.to_dict(), cls=NumpyEncoder, indent=2) + "\n"


def render(report: ValidationReport, fmt: str = "text") -> str:
    if fmt == "json":
        return render_json(report)
    if fmt == "text":
        return render_text(report)
    raise ValueError(f"unknown report format {fmt!r}, expected one of {FORMATS}")


def render_census(census: CensusReport, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(census.to_dict(), cls=NumpyEncoder, indent=2) + "\n"

    lines = [
        f"{census.kind} structures of size {census.size}: {census.count}",
        f"  scanned {census.scanned} candidates in {census.wall_time:.2f}s",
    ]
    lines += [f"  {finding}" for finding in census.findings]
    return "\n".join(lines) + "\n"


def export_census_csv(census: CensusReport, destination: Path) -> None:
    destination.parent.mkdir(parents=True, exist_ok=True)
    census.to_frame().to_csv(destination, index=False)
    logging.info(f"Exported {census.count} {census.kind} structures to '{destination}'")
