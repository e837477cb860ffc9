"""Error hierarchy for the workbench.

Every failure the algebra, wave and job layers can signal is a
``WorkbenchError``.  Management commands translate these into
``CommandError`` with the exit status contract (1 = FAIL, 2 = usage).
"""


class WorkbenchError(Exception):
    """Base class for all workbench errors."""


class DivisionByZeroError(WorkbenchError, ZeroDivisionError):
    """Division by an exactly zero scalar (also zero theta or zero f)."""


class SubstitutionError(WorkbenchError):
    """A substitution made a denominator vanish identically."""


class RuleMismatchError(WorkbenchError):
    """Operands live in different Ore algebras."""

    def __init__(self, left, right):
        super().__init__(f"operators use different rules: {left} vs {right}")
        self.left = left
        self.right = right


class UnsupportedRuleError(WorkbenchError):
    """The operation is not defined for this Ore rule."""


class ParameterError(WorkbenchError):
    """Malformed family parameters (wrong vector length, symbolic exponent)."""


class UnknownGeneratorError(WorkbenchError):
    def __init__(self, name):
        super().__init__(f"unknown generator: {name}")
        self.name = name


class UnknownSymbolError(WorkbenchError):
    def __init__(self, name, position=None):
        where = "" if position is None else f" at position {position}"
        super().__init__(f"unknown symbol {name!r}{where}")
        self.name = name
        self.position = position


class NilpotencyExceeded(WorkbenchError):
    """No vanishing iterated commutator appeared within the bound."""

    def __init__(self, bound):
        super().__init__(f"ad L is not nilpotent on the operand within {bound} steps")
        self.bound = bound


class FactorizationError(WorkbenchError):
    """Q * theta^-1 * P does not expand to L."""


class SpectralMismatchError(WorkbenchError):
    """The supplied f is not b(L), or is not a function."""


class ChainStepError(WorkbenchError):
    def __init__(self, index, cause):
        super().__init__(f"chain step {index}: {cause}")
        self.index = index
        self.cause = cause


class RecursionPivotError(WorkbenchError):
    def __init__(self, index, detail=""):
        message = f"recursion pivot vanishes at index {index}"
        if detail:
            message = f"{message} ({detail})"
        super().__init__(message)
        self.index = index


class WindowError(WorkbenchError):
    """An action would read coefficients outside the reliable window."""


class ParseError(WorkbenchError):
    def __init__(self, message, position):
        super().__init__(f"{message} at position {position}")
        self.position = position


class DefinitionError(WorkbenchError):
    """Malformed triple or job definition."""
