import typing as T
from dataclasses import dataclass, field


@dataclass(frozen=True)
class AxiomResult:
    id: str
    passed: bool
    witness: T.Any = None
    note: str = ""

    def to_dict(self) -> dict[str, T.Any]:
        data: dict[str, T.Any] = {"id": self.id, "passed": self.passed}
        if self.witness is not None:
            data["witness"] = _plain(self.witness)
        if self.note:
            data["note"] = self.note
        return data


@dataclass
class ValidationReport:
    """Ordered pass/fail entries, one per checked axiom."""

    kind: str
    results: list[AxiomResult] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.results)

    def add(
        self, axiom_id: str, passed: bool, witness: T.Any = None, note: str = ""
    ) -> None:
        self.results.append(AxiomResult(axiom_id, bool(passed), witness, note))

    def extend(self, other: "ValidationReport", prefix: str = "") -> None:
        for r in other.results:
            self.results.append(
                AxiomResult(prefix + r.id, r.passed, r.witness, r.note)
            )

    def get(self, axiom_id: str) -> AxiomResult:
        for r in self.results:
            if r.id == axiom_id:
                return r
        raise ValueError(f"{axiom_id} not found in report")

    def failures(self) -> list[AxiomResult]:
        return [r for r in self.results if not r.passed]

    def first_failure(self) -> AxiomResult | None:
        failures = self.failures()
        return failures[0] if failures else None

    def to_dict(self) -> dict[str, T.Any]:
        return {
            "kind": self.kind,
            "passed": self.passed,
            "axioms": [r.to_dict() for r in self.results],
        }


def _plain(value: T.Any) -> T.Any:
    if isinstance(value, (tuple, list)):
        return [_plain(v) for v in value]
    if isinstance(value, (set, frozenset)):
        return sorted(_plain(v) for v in value)
    if isinstance(value, dict):
        return {str(k): _plain(v) for k, v in value.items()}
    return value
