"""Exception types shared across the package."""


class QwalkError(Exception):
    """Base class for every error raised by this package."""


class FormatError(QwalkError, ValueError):
    """Malformed input file or stream.

    Carries the source name and line number when they are known, so CLI
    diagnostics can point at the offending row.
    """

    def __init__(self, message: str, *, source: str | None = None,
                 line: int | None = None):
        self.source = source
        self.line = line
        prefix = ""
        if source is not None:
            prefix += f"{source}: "
        if line is not None:
            prefix += f"line {line}: "
        super().__init__(prefix + message)


class ParameterError(QwalkError, ValueError):
    """Argument outside its documented range."""


class ShapeError(QwalkError, ValueError):
    """Operands with incompatible dimensions."""


class DomainError(QwalkError, ValueError):
    """Value violating a documented invariant (not a mere shape problem)."""


class AttributeMismatchError(QwalkError, ValueError):
    """Node attribute vectors missing or of unequal dimension."""


class NumericalError(QwalkError, ArithmeticError):
    """A numerical routine failed to converge."""
