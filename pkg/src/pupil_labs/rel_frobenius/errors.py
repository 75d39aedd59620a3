import typing as T


class RelFrobeniusError(ValueError):
    pass


class CompositionError(RelFrobeniusError):
    pass


class CarrierMismatchError(RelFrobeniusError):
    pass


class PreconditionError(RelFrobeniusError):
    def __init__(self, message: str, witness: T.Any = None) -> None:
        super().__init__(message)
        self.witness = witness


class AxiomError(PreconditionError):
    """A structure does not satisfy the axioms its type requires."""

    def __init__(self, axiom: str, message: str, witness: T.Any = None) -> None:
        super().__init__(f"{axiom}: {message}", witness)
        self.axiom = axiom


class InvariantViolation(RelFrobeniusError):
    """An internal cross-check failed.

    These are raised when two independent computations of the same fact
    disagree, or when a structural lemma does not hold on a value that
    satisfied its hypotheses. They indicate a bug, not bad input.
    """

    def __init__(self, statement: str, detail: str = "") -> None:
        message = f"invariant violated: {statement}"
        if detail:
            message += f" ({detail})"
        super().__init__(message)
        self.statement = statement


class ParseError(RelFrobeniusError):
    def __init__(
        self, message: str, line: int, column: int, expected: str | None = None
    ) -> None:
        text = f"line {line}, column {column}: {message}"
        if expected:
            text += f" (expected {expected})"
        super().__init__(text)
        self.line = line
        self.column = column
        self.expected = expected


class SizeLimitError(RelFrobeniusError):
    pass
