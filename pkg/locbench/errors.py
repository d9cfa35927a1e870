"""Error types raised by the localisation workbench."""

from typing import Any, Optional


class WorkbenchError(Exception):
    """Base class for all workbench errors."""


class BudgetExceeded(WorkbenchError, RuntimeError):
    """A construction or search ran past its configured budget."""

    def __init__(self, budget: str, limit: int, detail: str = ""):
        self.budget = budget
        self.limit = limit
        message = f"budget '{budget}' exceeded (limit {limit})"
        if detail:
            message = f"{message}: {detail}"
        super().__init__(message)


class PreconditionViolation(WorkbenchError, ValueError):
    """An operation was called on input that does not meet its precondition."""

    def __init__(self, check: str, detail: str = "", witness: Optional[Any] = None):
        self.check = check
        self.witness = witness
        super().__init__(f"precondition '{check}' violated" + (f": {detail}" if detail else ""))


class NotInverting(WorkbenchError, ValueError):
    """The functor FT does not invert some member of S."""

    def __init__(self, morphism: str, detail: str = ""):
        self.morphism = morphism
        super().__init__(f"FT does not invert {morphism}" + (f": {detail}" if detail else ""))


class DslError(WorkbenchError, ValueError):
    """Error in a DSL document, positioned when possible."""

    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {column}" if column is not None else "")
            where = f" ({where})"
        super().__init__(f"{message}{where}")


class DslSyntaxError(DslError):
    """The text does not match the grammar."""


class UnresolvedReference(DslError):
    """A declaration refers to a name that is not declared."""


class CompositionError(DslError):
    """A composition table entry is ill-typed or the table does not close."""
