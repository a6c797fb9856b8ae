"""Exception hierarchy shared by the audit packages.

Every error carries the process exit code the CLI should return for it.
"""

EXIT_INPUT = 1
EXIT_NUMERICAL = 2


class AuditError(Exception):
    exit_code = EXIT_INPUT


class ParameterError(AuditError, ValueError):
    """A numeric argument is outside its domain (probability, counts, caps)."""


class InputError(AuditError, ValueError):
    """Records cannot be audited (empty, no members, non-finite scores)."""


class ConfigurationError(AuditError, ValueError):
    pass


class AlignmentError(AuditError, ValueError):
    """Baseline and MIA records do not describe the same game instance."""


class SizeError(AuditError, ValueError):
    pass


class InfiniteClosenessError(AuditError, ValueError):
    pass


class ScoreFileError(AuditError, ValueError):
    def __init__(self, message: str, line: int | None = None, column: str | None = None):
        self.line = line
        self.column = column
        location = []
        if line is not None:
            location.append(f"line {line}")
        if column is not None:
            location.append(f"column '{column}'")
        prefix = f"{', '.join(location)}: " if location else ""
        super().__init__(f"{prefix}{message}")


class NumericalError(AuditError, ArithmeticError):
    exit_code = EXIT_NUMERICAL
