"""Finite sets and relations between them.

Relations are boolean incidence matrices indexed by the canonical (sorted)
element order of their domain and codomain. Cartesian products are strictly
associative and strictly unital: factors are flattened left to right and the
monoidal unit disappears from products, so ``X × (Y × Z)``, ``(X × Y) × Z`` and
``X × Y × Z`` are the same object and ``1 × X`` is ``X``. Under that
convention the product of relations is the Kronecker product of their
matrices.
"""

import functools
import itertools
import typing as T
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import numpy.typing as npt

from pupil_labs.rel_frobenius.errors import CarrierMismatchError, CompositionError

Atom = str
Element = T.Union[str, tuple[str, ...]]
BoolMatrix = npt.NDArray[np.bool_]

UNIT_ATOM = "*"


@dataclass(frozen=True)
class FinSet:
    elements: tuple[Atom, ...]
    label: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        elements = tuple(self.elements)
        for atom in elements:
            if not isinstance(atom, str) or not atom:
                raise ValueError(f"atoms must be non-empty strings, got {atom!r}")

        duplicates = sorted(a for a, n in Counter(elements).items() if n > 1)
        if duplicates:
            raise ValueError(f"duplicate atoms {duplicates} in {self.label or 'set'}")

        object.__setattr__(self, "elements", tuple(sorted(elements)))

    @property
    def size(self) -> int:
        return len(self.elements)

    @property
    def factors(self) -> tuple["FinSet", ...]:
        return (self,)

    @property
    def name(self) -> str:
        return self.label or "{" + ",".join(self.elements) + "}"

    @cached_property
    def _positions(self) -> dict[Atom, int]:
        return {atom: i for i, atom in enumerate(self.elements)}

    def index(self, element: Element) -> int:
        try:
            return self._positions[element]  # type: ignore[index]
        except (KeyError, TypeError):
            raise ValueError(f"{element!r} is not an element of {self.name}") from None

    def element(self, index: int) -> Element:
        return self.elements[index]

    def __contains__(self, element: object) -> bool:
        return element in self._positions

    def __iter__(self) -> T.Iterator[Atom]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)


@dataclass(frozen=True)
class UnitSet(FinSet):
    """The one-element monoidal unit ``1 = {*}``."""

    elements: tuple[Atom, ...] = (UNIT_ATOM,)
    label: str | None = field(default="1", compare=False)

    def __post_init__(self) -> None:
        if tuple(self.elements) != (UNIT_ATOM,):
            raise ValueError("the monoidal unit has exactly the element '*'")
        super().__post_init__()

    @property
    def factors(self) -> tuple[FinSet, ...]:
        return ()


UNIT = UnitSet()


@dataclass(frozen=True)
class ProductSet:
    factors: tuple[FinSet, ...]

    def __post_init__(self) -> None:
        factors = tuple(self.factors)
        if len(factors) < 2:
            raise ValueError("a product set needs at least two factors")
        for f in factors:
            if isinstance(f, UnitSet) or not isinstance(f, FinSet):
                raise ValueError(f"invalid product factor {f!r}")
        object.__setattr__(self, "factors", factors)

    @property
    def size(self) -> int:
        return int(np.prod([f.size for f in self.factors]))

    @property
    def name(self) -> str:
        return " × ".join(f.name for f in self.factors)

    @cached_property
    def elements(self) -> tuple[tuple[Atom, ...], ...]:
        return tuple(itertools.product(*(f.elements for f in self.factors)))

    def index(self, element: Element) -> int:
        if not isinstance(element, tuple) or len(element) != len(self.factors):
            raise ValueError(f"{element!r} is not an element of {self.name}")
        index = 0
        for factor, atom in zip(self.factors, element, strict=True):
            index = index * factor.size + factor.index(atom)
        return index

    def element(self, index: int) -> Element:
        return self.elements[index]

    def __contains__(self, element: object) -> bool:
        try:
            self.index(T.cast(Element, element))
        except ValueError:
            return False
        return True

    def __iter__(self) -> T.Iterator[tuple[Atom, ...]]:
        return iter(self.elements)

    def __len__(self) -> int:
        return self.size


Obj = FinSet | ProductSet


def product_set(*objects: Obj) -> Obj:
    factors = [f for obj in objects for f in obj.factors]
    if not factors:
        return UNIT
    if len(factors) == 1:
        return factors[0]
    return ProductSet(tuple(factors))


def render_element(element: Element) -> str:
    if isinstance(element, tuple):
        return "(" + ",".join(element) + ")"
    return element


@dataclass(frozen=True, eq=False)
class Rel:
    dom: Obj
    cod: Obj
    matrix: BoolMatrix

    def __post_init__(self) -> None:
        matrix = np.array(self.matrix, dtype=bool)
        if matrix.shape != (self.dom.size, self.cod.size):
            raise ValueError(
                f"incidence matrix of shape {matrix.shape} does not fit "
                f"{self.dom.name} -> {self.cod.name}"
            )
        matrix.setflags(write=False)
        object.__setattr__(self, "matrix", matrix)

    @classmethod
    def from_pairs(
        cls, dom: Obj, cod: Obj, pairs: T.Iterable[tuple[Element, Element]]
    ) -> "Rel":
        matrix = np.zeros((dom.size, cod.size), dtype=bool)
        for x, y in pairs:
            try:
                matrix[dom.index(x), cod.index(y)] = True
            except ValueError as exc:
                raise ValueError(
                    f"pair ({render_element(x)}, {render_element(y)}) does not lie in "
                    f"{dom.name} × {cod.name}"
                ) from exc
        return cls(dom, cod, matrix)

    @classmethod
    def from_function(
        cls, dom: Obj, cod: Obj, fn: T.Callable[[T.Any], Element]
    ) -> "Rel":
        return cls.from_pairs(dom, cod, ((x, fn(x)) for x in dom.elements))

    def pairs(self) -> list[tuple[Element, Element]]:
        rows, cols = np.nonzero(self.matrix)
        return [
            (self.dom.element(int(i)), self.cod.element(int(j)))
            for i, j in zip(rows, cols, strict=True)
        ]

    @property
    def graph(self) -> frozenset[tuple[Element, Element]]:
        return frozenset(self.pairs())

    def image(self, x: Element) -> frozenset[Element]:
        row = self.matrix[self.dom.index(x)]
        return frozenset(self.cod.element(int(j)) for j in np.flatnonzero(row))

    def relates(self, x: Element, y: Element) -> bool:
        return bool(self.matrix[self.dom.index(x), self.cod.index(y)])

    def __contains__(self, pair: object) -> bool:
        try:
            x, y = T.cast(tuple[Element, Element], pair)
            return self.relates(x, y)
        except (TypeError, ValueError):
            return False

    def __len__(self) -> int:
        return int(np.count_nonzero(self.matrix))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Rel):
            return NotImplemented
        return (
            self.dom == other.dom
            and self.cod == other.cod
            and np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self) -> int:
        return hash((self.dom, self.cod, self.matrix.tobytes()))

    def __repr__(self) -> str:
        shown = ", ".join(
            f"({render_element(x)},{render_element(y)})" for x, y in self.pairs()
        )
        return f"Rel({self.dom.name} -> {self.cod.name}: {{{shown}}})"


def identity(x: Obj) -> Rel:
    return Rel(x, x, np.eye(x.size, dtype=bool))


def empty(x: Obj, y: Obj) -> Rel:
    return Rel(x, y, np.zeros((x.size, y.size), dtype=bool))


def full(x: Obj, y: Obj) -> Rel:
    return Rel(x, y, np.ones((x.size, y.size), dtype=bool))


def compose(s: Rel, r: Rel) -> Rel:
    """``s ∘ r``: first ``r``, then ``s``."""
    if r.cod != s.dom:
        raise CompositionError(
            f"cannot compose: codomain {r.cod.name} of {r!r} differs from "
            f"domain {s.dom.name} of {s!r}"
        )
    counts = r.matrix.astype(np.int64) @ s.matrix.astype(np.int64)
    return Rel(r.dom, s.cod, counts > 0)


def compose_all(*rels: Rel) -> Rel:
    """Compose right to left, ``compose_all(c, b, a) = c ∘ b ∘ a``."""
    if not rels:
        raise ValueError("nothing to compose")
    return functools.reduce(compose, rels)


def converse(r: Rel) -> Rel:
    return Rel(r.cod, r.dom, r.matrix.T)


def product(*rels: Rel) -> Rel:
    if not rels:
        return identity(UNIT)
    matrix = functools.reduce(np.kron, (r.matrix for r in rels))
    return Rel(
        product_set(*(r.dom for r in rels)),
        product_set(*(r.cod for r in rels)),
        np.asarray(matrix, dtype=bool),
    )


def diagonal(x: Obj) -> Rel:
    n = x.size
    matrix = np.zeros((n, n * n), dtype=bool)
    for i in range(n):
        matrix[i, i * n + i] = True
    return Rel(x, product_set(x, x), matrix)


def swap(x: Obj, y: Obj) -> Rel:
    nx, ny = x.size, y.size
    matrix = np.zeros((nx * ny, ny * nx), dtype=bool)
    for i in range(nx):
        for j in range(ny):
            matrix[i * ny + j, j * nx + i] = True
    return Rel(product_set(x, y), product_set(y, x), matrix)


def name(r: Rel) -> Rel:
    """The transpose ``⌜r⌝ : 1 → dom × cod`` of a relation."""
    return Rel(UNIT, product_set(r.dom, r.cod), r.matrix.reshape(1, -1))


def eta(x: Obj) -> Rel:
    return name(identity(x))


def point(x: Obj, subset: T.Iterable[Element]) -> Rel:
    return Rel.from_pairs(UNIT, x, ((UNIT_ATOM, e) for e in subset))


def points_of(r: Rel) -> frozenset[Element]:
    if r.dom != UNIT:
        raise CarrierMismatchError(f"{r!r} is not a point 1 -> {r.cod.name}")
    return r.image(UNIT_ATOM)


def _check_parallel(r: Rel, s: Rel) -> None:
    if r.dom != s.dom or r.cod != s.cod:
        raise CarrierMismatchError(
            f"relations are not parallel: {r.dom.name} -> {r.cod.name} versus "
            f"{s.dom.name} -> {s.cod.name}"
        )


def is_subrelation(r: Rel, s: Rel) -> bool:
    _check_parallel(r, s)
    return not bool(np.any(r.matrix & ~s.matrix))


def union(r: Rel, s: Rel) -> Rel:
    _check_parallel(r, s)
    return Rel(r.dom, r.cod, r.matrix | s.matrix)


def intersection(r: Rel, s: Rel) -> Rel:
    _check_parallel(r, s)
    return Rel(r.dom, r.cod, r.matrix & s.matrix)


def is_function(r: Rel) -> bool:
    return bool(np.all(r.matrix.sum(axis=1) == 1))


def has_right_adjoint(r: Rel) -> bool:
    """The 2-cell characterisation of functions: ``1 ⊆ r†∘r`` and ``r∘r† ⊆ 1``."""
    total = is_subrelation(identity(r.dom), compose(converse(r), r))
    single_valued = is_subrelation(compose(r, converse(r)), identity(r.cod))
    return total and single_valued
