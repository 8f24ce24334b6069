"""Exception types and the verdict record shared by every checker."""

from __future__ import annotations

from dataclasses import dataclass, field


class NotAUnitError(ArithmeticError):
    """Raised when an element that must be invertible is not."""


class BudgetExceeded(RuntimeError):
    """A computation hit its configured resource cap."""


class PreconditionError(ValueError):
    """An operation's documented precondition does not hold."""


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check.

    ``ok`` is the pass/fail bit; ``reason`` names the failed condition and
    ``details`` carries the first failing witness (indices, monomials, ...).
    Truthiness follows ``ok``.
    """

    ok: bool
    reason: str = ""
    details: dict = field(default_factory=dict, compare=False)

    def __bool__(self) -> bool:
        return self.ok

    @classmethod
    def passed(cls, **details) -> "Verdict":
        return cls(True, "", details)

    @classmethod
    def failed(cls, reason: str, **details) -> "Verdict":
        return cls(False, reason, details)
