"""Graphviz DOT text for groupoids and semigroupoids.

Objects become nodes and morphisms labelled edges from source to target.
Identities are drawn dashed. Render with ``dot -Tpng out.dot > out.png``.
"""

import typing as T

from pupil_labs.rel_frobenius.algebra import FrobAlgebra, HStarAlgebra
from pupil_labs.rel_frobenius.correspond import frob_to_groupoid, hstar_to_semigroupoid
from pupil_labs.rel_frobenius.structures import Groupoid, Semigroupoid, find_identities


def _quote(atom: str) -> str:
    return '"' + atom.replace("\\", "\\\\").replace('"', '\\"') + '"'


def to_dot(structure: T.Any, name: str | None = None) -> str:
    if isinstance(structure, FrobAlgebra):
        structure = frob_to_groupoid(structure)
    elif isinstance(structure, HStarAlgebra):
        structure = hstar_to_semigroupoid(structure)

    if isinstance(structure, Groupoid):
        s, identities = structure.base, set(structure.ident.values())
        kind = "groupoid"
    elif isinstance(structure, Semigroupoid):
        s = structure
        identities = set((find_identities(s) or {}).values())
        kind = "semigroupoid"
    else:
        raise TypeError(f"cannot draw {type(structure).__name__}")

    lines = [f"digraph {_quote(name or kind)} {{", "  rankdir=LR;"]
    append = lines.append
    for x in s.objects:
        append(f"  {_quote(x)};")

    for f in s.morphisms:
        attributes = [f"label={_quote(f)}"]
        if f in identities:
            attributes.append("style=dashed")
        append(f"  {_quote(s.src[f])} -> {_quote(s.tgt[f])} [{', '.join(attributes)}];")

    append("}")
    return "\n".join(lines) + "\n"
