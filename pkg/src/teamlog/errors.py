"""Exception types shared across the package."""


class TeamlogError(Exception):
    """Base class for all package errors."""


class ParseError(TeamlogError):
    def __init__(self, message, line=1, column=1):
        super().__init__(f"{message} (line {line}, column {column})")
        self.message = message
        self.line = line
        self.column = column


class ModelError(TeamlogError):
    """Malformed structure or team input."""


class BudgetExceeded(TeamlogError):
    """A brute-force search or expansion exceeded its configured budget."""


class CompileError(TeamlogError):
    """The formula or arity is not supported by the compiler."""


class ClassMismatch(TeamlogError):
    """Clauses do not belong to the class a solver requires."""


class UnsupportedFragment(TeamlogError):
    """A task was called on a formula outside its fragment."""
