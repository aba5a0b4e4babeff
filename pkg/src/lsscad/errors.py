"""Exception hierarchy.

Two families matter to callers: :class:`ValidationError` for bad inputs or
configuration (raised before any numerics run) and :class:`NumericalError`
for failures of the linear algebra on otherwise valid inputs.
"""


class ScadError(Exception):
    """Base class for every error raised by this package."""


class ValidationError(ScadError, ValueError):
    """Invalid input data or configuration."""


class ConfigurationError(ValidationError):
    pass


class DegenerateColumnError(ValidationError):
    def __init__(self, column):
        self.column = column
        super().__init__(f"column {column} is constant and cannot be standardized")


class ZeroSignalError(ValidationError):
    pass


class ParseError(ValidationError):
    pass


class SelectorError(ValidationError):
    pass


class NumericalError(ScadError, ArithmeticError):
    """The computation failed on valid inputs."""


class SingularSystemError(NumericalError):
    pass


class DegenerateDesignError(NumericalError):
    pass


class SaturatedModelError(NumericalError):
    pass


class EmptySupportError(ScadError):
    """No coefficient survived selection, so there is nothing to report."""
