"""
Error hierarchy shared by every module.

DomainError subclasses mean "the input does not satisfy a precondition";
InvariantViolation means the code itself broke a guarantee it promised.
The CLI maps them to exit codes 1 and 2.
"""

from typing import Any, Optional


class PmcError(Exception):
    """Root of all errors raised by this package."""

    kind = "error"

    def to_dict(self) -> dict[str, Any]:
        """JSON-ready description of the error."""
        return {"kind": self.kind, "message": str(self)}


class ContractViolation(PmcError, ValueError):
    """An argument does not fit the API contract (e.g. vertex set of the wrong width)."""

    kind = "contract_violation"


class DomainError(PmcError, ValueError):
    """The input graph does not satisfy a precondition of the operation."""

    kind = "domain_error"


class ParseError(DomainError):
    """Malformed graph file."""

    kind = "parse_error"

    def __init__(self, message: str, line_number: Optional[int] = None):
        self.line_number = line_number
        where = f"line {line_number}: " if line_number is not None else ""
        super().__init__(f"{where}{message}")

    def to_dict(self) -> dict[str, Any]:
        data = super().to_dict()
        data["line"] = self.line_number
        return data


class InducedPathFound(DomainError):
    """An induced path on t vertices was found where the graph was assumed P_t-free."""

    kind = "induced_path_found"

    def __init__(self, path: list[int], message: Optional[str] = None):
        self.path = list(path)
        super().__init__(message or f"graph contains induced P{len(self.path)}: {self.path}")

    def to_dict(self) -> dict[str, Any]:
        data = super().to_dict()
        data["witness"] = self.path
        return data


class CapabilityError(DomainError):
    """Input exceeds a size cap of an exact (exponential) routine."""

    kind = "capability_error"

    def __init__(self, cap: str, limit: int, actual: int):
        self.cap = cap
        self.limit = limit
        self.actual = actual
        super().__init__(f"{cap}: size {actual} exceeds cap {limit}")

    def to_dict(self) -> dict[str, Any]:
        data = super().to_dict()
        data.update({"cap": self.cap, "limit": self.limit, "actual": self.actual})
        return data


class InfeasibleFamilyError(DomainError):
    """The bag family cannot tile the graph."""

    kind = "infeasible_family"


class GenerationError(DomainError):
    """Random fixture generation ran out of its rejection budget."""

    kind = "generation_error"

    def __init__(self, message: str, stats: Optional[dict[str, Any]] = None):
        self.stats = dict(stats or {})
        super().__init__(message)

    def to_dict(self) -> dict[str, Any]:
        data = super().to_dict()
        data["stats"] = self.stats
        return data


class InvariantViolation(PmcError):
    """A guaranteed property failed; always an implementation bug."""

    kind = "invariant_violation"

    def __init__(self, invariant: str, details: Optional[dict[str, Any]] = None):
        self.invariant = invariant
        self.details = dict(details or {})
        super().__init__(f"invariant '{invariant}' violated: {self.details}")

    def to_dict(self) -> dict[str, Any]:
        data = super().to_dict()
        data.update({"invariant": self.invariant, "details": self.details})
        return data
