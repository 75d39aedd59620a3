"""Relative Frobenius algebras, H*-algebras and their groupoid counterparts."""

from pupil_labs.rel_frobenius.algebra import FrobAlgebra, HStarAlgebra, MulCandidate
from pupil_labs.rel_frobenius.finrel import FinSet, Rel
from pupil_labs.rel_frobenius.job_manager import ProgressUpdate
from pupil_labs.rel_frobenius.structures import Groupoid, Semigroupoid

LOG_FORMAT_STRING = (
    "%(asctime)s - %(levelname)s - %(filename)s:%(lineno)d - %(message)s"
)

__all__ = [
    "FinSet",
    "FrobAlgebra",
    "Groupoid",
    "HStarAlgebra",
    "MulCandidate",
    "ProgressUpdate",
    "Rel",
    "Semigroupoid",
]
