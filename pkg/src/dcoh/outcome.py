"""Three-valued decision results with witnesses and certificates."""

from __future__ import annotations

from dataclasses import dataclass, field

YES = "yes"
NO = "no"
UNDECIDED = "undecided"


@dataclass
class Outcome:
    status: str
    witness: object = None
    certificate: str | None = None
    detail: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.status == YES

    @property
    def decided(self) -> bool:
        return self.status != UNDECIDED


def yes(witness=None, **detail) -> Outcome:
    return Outcome(YES, witness=witness, detail=detail)


def no(certificate: str, **detail) -> Outcome:
    return Outcome(NO, certificate=certificate, detail=detail)


def undecided(certificate: str = "budget-exhausted", **detail) -> Outcome:
    return Outcome(UNDECIDED, certificate=certificate, detail=detail)
