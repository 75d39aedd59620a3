"""Reading and writing structures, reports and drawings."""

from pupil_labs.rel_frobenius.formats.dot import to_dot
from pupil_labs.rel_frobenius.formats.structure_file import (
    MorphismFile,
    load,
    parse,
    save,
    serialize,
)

__all__ = ["MorphismFile", "load", "parse", "save", "serialize", "to_dot"]
