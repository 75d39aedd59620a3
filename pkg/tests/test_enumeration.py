import pytest

from pupil_labs.rel_frobenius.algebra import FrobAlgebra
from pupil_labs.rel_frobenius.enumeration import (
    CensusReport,
    canonical_text,
    census,
    cross_census,
    decode_table,
    encode_table,
    enumerate_frobenius,
    enumerate_groupoids,
    enumerate_hstar,
    enumerate_lrsgpd,
    hopf_census,
    object_configurations,
    rename_algebra,
    scan_algebra_range,
    table_count,
)
from pupil_labs.rel_frobenius.errors import PreconditionError, SizeLimitError
from pupil_labs.rel_frobenius.job_manager import JobManager
from tests import FIXTURES_DIR
from tests.conftest import z2_table


@pytest.mark.parametrize(("n", "expected"), [(1, 1), (2, 3), (3, 10)])
def test_frobenius_and_groupoid_counts(n, expected):
    assert len(enumerate_frobenius(n)) == expected
    assert len(enumerate_groupoids(n)) == expected


@pytest.mark.parametrize("n", [1, 2, 3])
def test_every_hstar_algebra_is_frobenius(n):
    hstar = enumerate_hstar(n)
    assert {h.base for h in hstar} == {f.base for f in enumerate_frobenius(n)}


@pytest.mark.parametrize(("n", "expected"), [(1, 1), (2, 0), (3, 0)])
def test_hopf_census(n, expected):
    assert len(hopf_census(n)) == expected


@pytest.mark.slow
def test_four_atom_frobenius_algebras():
    found = enumerate_frobenius(4)
    assert len(found) == 65
    assert all(isinstance(f, FrobAlgebra) for f in found)


def test_table_codec():
    atoms = ("a", "b")
    table = z2_table()
    index = encode_table(table, atoms)
    assert 0 <= index < table_count(2)
    assert decode_table(index, atoms) == table
    assert decode_table(0, atoms) == {}
    # least significant digit is the first cell
    assert decode_table(1, atoms) == {("a", "a"): "a"}


def test_scanning_a_range_matches_the_full_scan():
    indices = scan_algebra_range(("frobenius", 2, 0, table_count(2)))
    assert len(indices) == 3
    assert scan_algebra_range(("frobenius", 2, 0, 1)) == []


def test_chunking_and_workers_do_not_change_the_result():
    expected = enumerate_frobenius(2)
    assert enumerate_frobenius(2, chunk_size=5) == expected
    assert enumerate_frobenius(2, JobManager(jobs=2, show_progress=False), chunk_size=16) == expected


def test_object_configurations_are_set_partitions():
    assert object_configurations(1) == [(0, 0), (0, 1)]
    assert len(object_configurations(2)) == 15
    assert all(c[0] == 0 for c in object_configurations(3))


def test_every_scanned_semigroupoid_has_identities():
    for n in (1, 2, 3):
        assert len(enumerate_lrsgpd(n)) == len(enumerate_groupoids(n))


def test_renamed_algebras_are_still_enumerated(z2):
    renamed = rename_algebra(z2, {"a": "b", "b": "a"})
    assert renamed.unit_set == {"b"}
    assert renamed in enumerate_frobenius(2)
    with pytest.raises(PreconditionError):
        rename_algebra(z2, {"a": "b", "b": "b"})


def test_canonical_text_follows_the_renaming(z2):
    assert canonical_text(z2) == (FIXTURES_DIR / "z2.frob").read_text()
    swapped = rename_algebra(z2, {"a": "b", "b": "a"})
    assert canonical_text(swapped).splitlines()[2:] == [
        "m: a a -> b",
        "m: a b -> a",
        "m: b a -> a",
        "m: b b -> b",
        "unit: b",
    ]
    assert canonical_text(rename_algebra(swapped, {"a": "b", "b": "a"})) == canonical_text(z2)


def test_size_limits():
    with pytest.raises(SizeLimitError):
        enumerate_hstar(4)
    with pytest.raises(SizeLimitError):
        enumerate_frobenius(0)
    with pytest.raises(SizeLimitError):
        enumerate_lrsgpd(5)
    with pytest.raises(SizeLimitError):
        cross_census(5)


def test_census_report():
    report = census("frobenius", 2)
    assert isinstance(report, CensusReport)
    assert report.count == 3
    assert report.scanned == 81

    frame = report.to_frame()
    assert list(frame.columns) == ["kind", "size", "index", "unit", "triples"]
    assert sorted(frame["unit"]) == ["a", "a b", "b"]
    assert report.to_dict()["count"] == 3


def test_semigroupoid_census_reports_missing_identities():
    report = census("semigroupoid", 2)
    assert report.findings == ["0 of 3 have no identities"]
    assert report.to_frame()["index"].tolist() == [0, 1, 2]


def test_census_rejects_unknown_kinds():
    with pytest.raises(ValueError, match="unknown census kind"):
        census("monoid", 1)


@pytest.mark.parametrize("n", [1, 2])
def test_cross_census_passes(n):
    report = cross_census(n)
    assert report.passed, report.first_failure()
    assert report.get("lc-without-identities").note == "0 instances"
    assert report.get("unit-not-iso").note == "0 instances"


@pytest.mark.slow
def test_cross_census_on_three_atoms():
    assert cross_census(3).passed
