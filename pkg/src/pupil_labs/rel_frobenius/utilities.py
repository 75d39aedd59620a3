import itertools
import string
import typing as T

X = T.TypeVar("X")


def powerset(elements: T.Iterable[X]) -> T.Iterator[frozenset[X]]:
    items = list(elements)
    for size in range(len(items) + 1):
        for combo in itertools.combinations(items, size):
            yield frozenset(combo)


def carrier_atoms(n: int) -> tuple[str, ...]:
    if n <= len(string.ascii_lowercase):
        return tuple(string.ascii_lowercase[:n])
    return tuple(f"x{i}" for i in range(n))


def pair_atom(x: str, y: str) -> str:
    return f"({x},{y})"


def split_pair_atom(atom: str) -> tuple[str, str]:
    """Invert ``pair_atom``, honouring nested parentheses and brackets."""
    if not (atom.startswith("(") and atom.endswith(")")):
        raise ValueError(f"{atom!r} is not a pair atom")
    inner = atom[1:-1]
    depth = 0
    for i, char in enumerate(inner):
        if char in "([":
            depth += 1
        elif char in ")]":
            depth -= 1
        elif char == "," and depth == 0:
            return inner[:i], inner[i + 1 :]
    raise ValueError(f"{atom!r} is not a pair atom")


def class_atom(representative: str) -> str:
    return f"[{representative}]"
