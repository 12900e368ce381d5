"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of the operation."""


class SingularCurve(ValueError):
    """A Weierstrass model (or parameter choice) has vanishing discriminant."""


class BadReduction(ValueError):
    """A prime of bad reduction was passed where good reduction is required."""


class PreconditionError(ValueError):
    """A stated hypothesis of a bound or verdict does not hold for the input."""


class Undecided(RuntimeError):
    """The p-adic solubility search hit its depth cap without a certificate.

    This must not happen for nondegenerate quartic spaces; it indicates either
    a degenerate input that slipped through validation or a depth cap that is
    too small.
    """


class DatasetFormatError(ValueError):
    """A dataset CSV file does not match the expected schema."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
