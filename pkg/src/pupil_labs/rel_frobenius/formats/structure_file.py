"""Line-oriented structure files.

Each file starts with ``kind: <kind>`` followed by one directive per line.
``#`` starts a comment. Tokens are separated by whitespace.

Algebra kinds (``relation``, ``frobenius``, ``hstar``)::

    elements: a b
    m: a a -> a
    unit: a

Categorical kinds (``semigroupoid``, ``groupoid``)::

    objects: x y
    mor: f x y
    comp: g f -> h
    id: x -> ex
    inv: f -> g

Morphism files (``relmorphism``) name their source and target files relative
to their own location and list the pairs of the relation::

    source: z2.frob
    target: z2.frob
    pair: a a
"""

import logging
import re
import typing as T
from dataclasses import dataclass, field
from pathlib import Path

from pupil_labs.rel_frobenius.algebra import (
    Algebra,
    FrobAlgebra,
    HStarAlgebra,
    MulCandidate,
)
from pupil_labs.rel_frobenius.errors import ParseError
from pupil_labs.rel_frobenius.finrel import FinSet
from pupil_labs.rel_frobenius.morphisms import RelMorphism
from pupil_labs.rel_frobenius.structures import Groupoid, Semigroupoid

logger = logging.getLogger(__name__)

ALGEBRA_KINDS = ("relation", "frobenius", "hstar")
CATEGORY_KINDS = ("semigroupoid", "groupoid")
KINDS = (*ALGEBRA_KINDS, *CATEGORY_KINDS, "relmorphism")

DIRECTIVES: dict[str, tuple[str, ...]] = {
    "relation": ("elements", "m"),
    "frobenius": ("elements", "m", "unit"),
    "hstar": ("elements", "m"),
    "semigroupoid": ("objects", "mor", "comp"),
    "groupoid": ("objects", "mor", "comp", "id", "inv"),
    "relmorphism": ("source", "target", "pair"),
}

SUFFIXES = {
    "relation": ".rel",
    "frobenius": ".frob",
    "hstar": ".hstar",
    "semigroupoid": ".sgd",
    "groupoid": ".gpd",
    "relmorphism": ".relmor",
}

ARROW = "->"


@dataclass(frozen=True)
class Token:
    text: str
    line: int
    column: int


@dataclass
class RawAlgebra:
    kind: str
    candidate: MulCandidate
    unit: frozenset[str] | None = None


@dataclass
class RawCategory:
    kind: str
    base: Semigroupoid
    ident: dict[str, str] = field(default_factory=dict)
    inv: dict[str, str] = field(default_factory=dict)


@dataclass
class MorphismFile:
    source_path: str
    target_path: str
    morphism: RelMorphism


RawStructure = RawAlgebra | RawCategory | MorphismFile


def _error(token: Token, message: str, expected: str | None = None) -> ParseError:
    return ParseError(message, token.line, token.column, expected)


def _tokenize(text: str) -> list[list[Token]]:
    lines = []
    for number, line in enumerate(text.splitlines(), start=1):
        content = line.split("#", 1)[0]
        tokens = [Token(m.group(), number, m.start() + 1) for m in re.finditer(r"\S+", content)]
        if tokens:
            lines.append(tokens)
    return lines


def _directive(tokens: list[Token]) -> tuple[str, list[Token]]:
    head = tokens[0]
    if not head.text.endswith(":") or len(head.text) < 2:
        raise _error(head, f"unexpected {head.text!r}", expected="a directive such as 'm:'")
    return head.text[:-1], tokens[1:]


def _expect_count(head: Token, args: list[Token], count: int, shape: str) -> None:
    if len(args) != count:
        at = args[count] if len(args) > count else head
        raise _error(at, f"wrong number of fields for {head.text}", expected=shape)


def _arrow(head: Token, args: list[Token], before: int, after: int, shape: str) -> list[Token]:
    _expect_count(head, args, before + after + 1, shape)
    if args[before].text != ARROW:
        raise _error(args[before], f"expected {ARROW!r}", expected=shape)
    return args[:before] + args[before + 1 :]


class _Parser:
    def __init__(self, text: str, base_dir: Path) -> None:
        self.lines = _tokenize(text)
        self.base_dir = base_dir
        self.declared: dict[str, Token] = {}

    def kind(self) -> str:
        if not self.lines:
            raise ParseError("empty file", 1, 1, expected="'kind:'")
        name, args = _directive(self.lines[0])
        head = self.lines[0][0]
        if name != "kind":
            raise _error(head, f"unexpected {head.text!r}", expected="'kind:'")
        _expect_count(head, args, 1, "kind: <kind>")
        if args[0].text not in KINDS:
            raise _error(args[0], f"unknown kind {args[0].text!r}", expected=" | ".join(KINDS))
        return args[0].text

    def directives(self, kind: str) -> T.Iterator[tuple[str, Token, list[Token]]]:
        allowed = DIRECTIVES[kind]
        for tokens in self.lines[1:]:
            name, args = _directive(tokens)
            if name == "kind":
                raise _error(tokens[0], "kind declared twice")
            if name not in allowed:
                raise _error(
                    tokens[0],
                    f"{name!r} is not allowed in a {kind} file",
                    expected=" | ".join(f"{d}:" for d in allowed),
                )
            yield name, tokens[0], args

    def declare(self, head: Token, atoms: list[Token]) -> FinSet:
        if head.text in self.declared:
            raise _error(head, f"{head.text} declared twice")
        self.declared[head.text] = head
        seen: dict[str, Token] = {}
        for atom in atoms:
            if atom.text == ARROW or atom.text.endswith(":"):
                raise _error(atom, f"{atom.text!r} is not a valid atom", expected="an atom")
            if atom.text in seen:
                raise _error(atom, f"duplicate atom {atom.text!r}")
            seen[atom.text] = atom
        return FinSet(tuple(seen))

    @staticmethod
    def member(atom: Token, universe: FinSet | None, what: str) -> str:
        if universe is None:
            raise _error(atom, f"{what} referenced before being declared")
        if atom.text not in universe:
            raise _error(atom, f"unknown {what} {atom.text!r}", expected=f"one of {' '.join(universe.elements)}")
        return atom.text

    def algebra(self, kind: str) -> RawAlgebra:
        carrier: FinSet | None = None
        triples: list[tuple[str, str, str]] = []
        unit: frozenset[str] | None = None
        for name, head, args in self.directives(kind):
            if name == "elements":
                carrier = self.declare(head, args)
            elif name == "m":
                x, y, z = _arrow(head, args, 2, 1, "m: x y -> z")
                triples.append(tuple(self.member(t, carrier, "element") for t in (x, y, z)))  # type: ignore[misc]
            else:
                if unit is not None:
                    raise _error(head, "unit declared twice")
                unit = frozenset(self.member(t, carrier, "element") for t in args)

        if carrier is None:
            raise ParseError("missing 'elements:'", len(self.lines), 1, expected="'elements:'")
        return RawAlgebra(kind, MulCandidate.from_triples(carrier, triples), unit)

    def category(self, kind: str) -> RawCategory:
        objects: FinSet | None = None
        object_tokens: list[Token] = []
        mor_tokens: list[Token] = []
        src: dict[str, str] = {}
        tgt: dict[str, str] = {}
        comp_lines: list[tuple[Token, list[Token]]] = []
        id_lines: list[tuple[Token, list[Token]]] = []
        inv_lines: list[tuple[Token, list[Token]]] = []
        for name, head, args in self.directives(kind):
            if name == "objects":
                objects = self.declare(head, args)
                object_tokens = args
            elif name == "mor":
                _expect_count(head, args, 3, "mor: f x y")
                f, x, y = args
                if f.text in src:
                    raise _error(f, f"duplicate atom {f.text!r}")
                if f.text == ARROW or f.text.endswith(":"):
                    raise _error(f, f"{f.text!r} is not a valid atom", expected="an atom")
                mor_tokens.append(f)
                src[f.text] = self.member(x, objects, "object")
                tgt[f.text] = self.member(y, objects, "object")
            elif name == "comp":
                comp_lines.append((head, args))
            elif name == "id":
                id_lines.append((head, args))
            else:
                inv_lines.append((head, args))

        if objects is None:
            raise ParseError("missing 'objects:'", len(self.lines), 1, expected="'objects:'")
        morphisms = FinSet(tuple(src))
        endpoints = {*src.values(), *tgt.values()}
        isolated = next((t for t in object_tokens if t.text not in endpoints), None)
        if isolated is not None:
            raise _error(
                isolated,
                f"object {isolated.text!r} is not an endpoint of any morphism",
                expected=f"a 'mor:' line with {isolated.text} as source or target",
            )

        comp: dict[tuple[str, str], str] = {}
        for head, args in comp_lines:
            g, f, h = (self.member(t, morphisms, "morphism") for t in _arrow(head, args, 2, 1, "comp: g f -> h"))
            if (g, f) in comp:
                raise _error(head, f"composite of {g} and {f} given twice")
            comp[(g, f)] = h

        ident: dict[str, str] = {}
        for head, args in id_lines:
            x_tok, e_tok = _arrow(head, args, 1, 1, "id: x -> e")
            x = self.member(x_tok, objects, "object")
            if x in ident:
                raise _error(x_tok, f"identity of {x} given twice")
            ident[x] = self.member(e_tok, morphisms, "morphism")

        inv: dict[str, str] = {}
        for head, args in inv_lines:
            f_tok, g_tok = _arrow(head, args, 1, 1, "inv: f -> g")
            f = self.member(f_tok, morphisms, "morphism")
            if f in inv:
                raise _error(f_tok, f"inverse of {f} given twice")
            inv[f] = self.member(g_tok, morphisms, "morphism")

        base = Semigroupoid(objects, morphisms, src, tgt, comp)
        return RawCategory(kind, base, ident, inv)

    def morphism(self) -> MorphismFile:
        paths: dict[str, tuple[Token, str]] = {}
        pair_tokens: list[tuple[Token, Token]] = []
        for name, head, args in self.directives("relmorphism"):
            if name in ("source", "target"):
                _expect_count(head, args, 1, f"{name}: <path>")
                if name in paths:
                    raise _error(head, f"{name} declared twice")
                paths[name] = (args[0], args[0].text)
            else:
                _expect_count(head, args, 2, "pair: a b")
                pair_tokens.append((args[0], args[1]))

        for name in ("source", "target"):
            if name not in paths:
                raise ParseError(f"missing '{name}:'", len(self.lines), 1, expected=f"'{name}:'")

        source = self._load_algebra(*paths["source"])
        target = self._load_algebra(*paths["target"])
        if type(source) is not type(target):
            token = paths["target"][0]
            raise _error(token, "source and target must be of the same kind")

        pairs = [
            (self.member(a, source.carrier, "source element"), self.member(b, target.carrier, "target element"))
            for a, b in pair_tokens
        ]
        morphism = RelMorphism.from_pairs(source, target, pairs)
        return MorphismFile(paths["source"][1], paths["target"][1], morphism)

    def _load_algebra(self, token: Token, relative: str) -> Algebra:
        path = self.base_dir / relative
        try:
            structure = parse(read_structure_text(path), base_dir=path.parent, kinds=("frobenius", "hstar"))
        except OSError as exc:
            raise _error(token, f"cannot read {relative}: {exc.strerror}") from exc
        except ParseError as exc:
            raise _error(token, f"in {relative}: {exc}") from exc
        return T.cast(Algebra, structure)


def parse_raw(
    text: str, base_dir: Path = Path(), kinds: T.Iterable[str] | None = None
) -> RawStructure:
    """Parse without enforcing the axioms of the declared kind."""
    parser = _Parser(text, base_dir)
    kind = parser.kind()
    accepted = tuple(kinds) if kinds is not None else KINDS
    if kind not in accepted:
        raise _error(
            parser.lines[0][1], f"a {kind} file is not accepted here", expected=" | ".join(accepted)
        )
    if kind in ALGEBRA_KINDS:
        return parser.algebra(kind)
    if kind in CATEGORY_KINDS:
        return parser.category(kind)
    return parser.morphism()


def derive_inverses(base: Semigroupoid, ident: T.Mapping[str, str]) -> dict[str, str]:
    """Two-sided inverses with respect to ``ident``, where they exist."""
    inv = {}
    for f in base.morphisms:
        for g in base.morphisms:
            if (
                base.comp.get((g, f)) == ident.get(base.src[f])
                and base.comp.get((f, g)) == ident.get(base.tgt[f])
            ):
                inv[f] = g
                break
    return inv


def build(raw: RawStructure) -> T.Any:
    """The typed structure, raising ``AxiomError`` or ``PreconditionError`` when invalid."""
    if isinstance(raw, MorphismFile):
        return raw
    if isinstance(raw, RawAlgebra):
        if raw.kind == "relation":
            return raw.candidate
        if raw.kind == "hstar":
            return HStarAlgebra(raw.candidate)
        if raw.unit is None:
            return FrobAlgebra.from_candidate(raw.candidate)
        return FrobAlgebra(raw.candidate, raw.unit)
    if raw.kind == "semigroupoid":
        return raw.base
    return Groupoid(raw.base, raw.ident, {**derive_inverses(raw.base, raw.ident), **raw.inv})


def parse(text: str, base_dir: Path = Path(), kinds: T.Iterable[str] | None = None) -> T.Any:
    return build(parse_raw(text, base_dir, kinds))


def read_structure_text(path: Path) -> str:
    """UTF-8 text with ``\\n`` line ends; undecodable bytes are a ``ParseError``."""
    data = path.read_bytes()
    try:
        text = data.decode("utf-8")
    except UnicodeDecodeError as exc:
        line = data.count(b"\n", 0, exc.start) + 1
        column = exc.start - data.rfind(b"\n", 0, exc.start)
        raise ParseError("invalid UTF-8", line, column) from exc
    return text.replace("\r\n", "\n")


def load(path: Path, kinds: T.Iterable[str] | None = None) -> T.Any:
    logger.debug(f"Loading {path}")
    return parse(read_structure_text(path), base_dir=path.parent, kinds=kinds)


def load_raw(path: Path, kinds: T.Iterable[str] | None = None) -> RawStructure:
    return parse_raw(read_structure_text(path), base_dir=path.parent, kinds=kinds)


# -- serialization ----------------------------------------------------------------------


def _algebra_lines(kind: str, carrier: FinSet, triples: T.Iterable[tuple[str, str, str]]) -> list[str]:
    lines = [f"kind: {kind}", " ".join(["elements:", *carrier.elements])]
    lines += [f"m: {x} {y} {ARROW} {z}" for x, y, z in sorted(triples)]
    return lines


def _category_lines(kind: str, s: Semigroupoid) -> list[str]:
    lines = [f"kind: {kind}", " ".join(["objects:", *s.objects.elements])]
    lines += [f"mor: {f} {s.src[f]} {s.tgt[f]}" for f in s.morphisms]
    lines += [f"comp: {g} {f} {ARROW} {h}" for (g, f), h in sorted(s.comp.items())]
    return lines


def serialize(structure: T.Any) -> str:
    """Canonical text: sorted lines, single spaces and a trailing newline."""
    if isinstance(structure, MulCandidate):
        lines = _algebra_lines("relation", structure.carrier, structure.triples())
    elif isinstance(structure, FrobAlgebra):
        lines = _algebra_lines("frobenius", structure.carrier, structure.base.triples())
        lines.append(" ".join(["unit:", *sorted(structure.unit_set)]))
    elif isinstance(structure, HStarAlgebra):
        lines = _algebra_lines("hstar", structure.carrier, structure.base.triples())
    elif isinstance(structure, Groupoid):
        lines = _category_lines("groupoid", structure.base)
        lines += [f"id: {x} {ARROW} {e}" for x, e in sorted(structure.ident.items())]
        lines += [f"inv: {f} {ARROW} {g}" for f, g in sorted(structure.inv.items())]
    elif isinstance(structure, Semigroupoid):
        lines = _category_lines("semigroupoid", structure)
    elif isinstance(structure, MorphismFile):
        lines = [
            "kind: relmorphism",
            f"source: {structure.source_path}",
            f"target: {structure.target_path}",
        ]
        lines += [f"pair: {a} {b}" for a, b in sorted(structure.morphism.pairs())]
    else:
        raise TypeError(f"cannot serialize {type(structure).__name__}")
    return "\n".join(lines) + "\n"


def kind_of(structure: T.Any) -> str:
    if isinstance(structure, MorphismFile):
        return "relmorphism"
    for kind, cls in (
        ("relation", MulCandidate),
        ("frobenius", FrobAlgebra),
        ("hstar", HStarAlgebra),
        ("groupoid", Groupoid),
        ("semigroupoid", Semigroupoid),
    ):
        if isinstance(structure, cls):
            return kind
    raise TypeError(f"not a structure: {type(structure).__name__}")


def save(structure: T.Any, path: Path) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(serialize(structure), encoding="utf-8")
    logger.debug(f"Wrote {kind_of(structure)} to {path}")
