import pytest

from pupil_labs.rel_frobenius.algebra import FrobAlgebra, MulCandidate
from pupil_labs.rel_frobenius.errors import AxiomError, ParseError
from pupil_labs.rel_frobenius.formats.structure_file import (
    SUFFIXES,
    MorphismFile,
    RawAlgebra,
    kind_of,
    load,
    parse,
    parse_raw,
    save,
    serialize,
)
from pupil_labs.rel_frobenius.structures import Groupoid, Semigroupoid
from tests import FIXTURES_DIR

FIXTURES = sorted(FIXTURES_DIR.iterdir())


@pytest.mark.parametrize("path", FIXTURES, ids=lambda p: p.name)
def test_fixtures_are_in_canonical_form(path):
    structure = load(path)
    assert serialize(structure) == path.read_text()
    assert path.suffix == SUFFIXES[kind_of(structure)]


def test_kinds_build_their_types():
    assert isinstance(load(FIXTURES_DIR / "z2.frob"), FrobAlgebra)
    assert isinstance(load(FIXTURES_DIR / "not_special.rel"), MulCandidate)
    assert isinstance(load(FIXTURES_DIR / "band.sgd"), Semigroupoid)
    assert isinstance(load(FIXTURES_DIR / "pair.gpd"), Groupoid)
    assert isinstance(load(FIXTURES_DIR / "z2_identity.relmor"), MorphismFile)


def test_comments_and_blank_lines_are_ignored():
    text = "# a comment\n\nkind: frobenius  # trailing\nelements: e\nm: e e -> e\n\nunit: e\n"
    assert serialize(parse(text)) == (FIXTURES_DIR / "trivial.frob").read_text()


def test_unknown_atom_is_located():
    with pytest.raises(ParseError) as exc_info:
        parse("kind: frobenius\nelements: a b\nm: a c -> a\n")
    assert (exc_info.value.line, exc_info.value.column) == (3, 6)
    assert exc_info.value.expected == "one of a b"


def test_duplicate_atom_is_located():
    with pytest.raises(ParseError, match="duplicate atom") as exc_info:
        parse("kind: relation\nelements: a a\n")
    assert (exc_info.value.line, exc_info.value.column) == (2, 13)


def test_missing_arrow_is_located():
    with pytest.raises(ParseError) as exc_info:
        parse("kind: relation\nelements: a\nm: a a = a\n")
    assert (exc_info.value.line, exc_info.value.column) == (3, 8)


def test_directives_must_fit_the_kind():
    with pytest.raises(ParseError, match="not allowed"):
        parse("kind: relation\nelements: a\nunit: a\n")
    with pytest.raises(ParseError, match="unknown kind"):
        parse("kind: monoid\n")
    with pytest.raises(ParseError, match="empty file"):
        parse("# nothing here\n")


def test_kind_mismatch_points_at_the_kind():
    with pytest.raises(ParseError) as exc_info:
        load(FIXTURES_DIR / "z2.frob", kinds=("groupoid", "semigroupoid"))
    assert (exc_info.value.line, exc_info.value.column) == (1, 7)


def test_axioms_are_enforced_after_parsing():
    text = (FIXTURES_DIR / "z2.frob").read_text().replace("unit: a", "unit: b")
    raw = parse_raw(text)
    assert isinstance(raw, RawAlgebra)
    assert raw.unit == {"b"}
    with pytest.raises(AxiomError):
        parse(text)


def test_inverses_may_be_omitted(pair_groupoid):
    text = "".join(
        line + "\n"
        for line in (FIXTURES_DIR / "pair.gpd").read_text().splitlines()
        if not line.startswith("inv:")
    )
    assert parse(text) == pair_groupoid


def test_isolated_object_is_located():
    with pytest.raises(ParseError, match="not an endpoint") as exc_info:
        parse("kind: semigroupoid\nobjects: o p\nmor: e o o\ncomp: e e -> e\n")
    assert (exc_info.value.line, exc_info.value.column) == (2, 12)


def test_undecodable_bytes_are_located(tmp_path):
    path = tmp_path / "latin1.frob"
    path.write_bytes(b"kind: frobenius\nelements: \xff\xfe\n")
    with pytest.raises(ParseError, match="invalid UTF-8") as exc_info:
        load(path)
    assert (exc_info.value.line, exc_info.value.column) == (2, 11)


def test_morphism_files_resolve_relative_paths(tmp_path):
    (tmp_path / "algebras").mkdir()
    for name in ("z2.frob", "trivial.frob"):
        (tmp_path / "algebras" / name).write_text((FIXTURES_DIR / name).read_text())
    path = tmp_path / "collapse.relmor"
    path.write_text(
        "kind: relmorphism\nsource: algebras/z2.frob\ntarget: algebras/trivial.frob\n"
        "pair: a e\npair: b e\n"
    )
    loaded = load(path)
    assert loaded.morphism.pairs() == [("a", "e"), ("b", "e")]


def test_unreadable_morphism_endpoint_is_located(tmp_path):
    path = tmp_path / "broken.relmor"
    path.write_text("kind: relmorphism\nsource: missing.frob\ntarget: missing.frob\n")
    with pytest.raises(ParseError, match="cannot read") as exc_info:
        load(path)
    assert (exc_info.value.line, exc_info.value.column) == (2, 9)


def test_save_and_load(tmp_path, z2):
    path = tmp_path / "nested" / "z2.frob"
    save(z2, path)
    assert load(path) == z2
