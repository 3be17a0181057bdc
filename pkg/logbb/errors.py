"""Exception hierarchy shared by the library and the CLI.

Every error carries the process exit code the CLI reports for it:
2 for bad input, 3 for constructions outside the supported scope and
1 for failed verifications. The CLI reports unexpected failures with
EXIT_INTERNAL.
"""

from collections.abc import Iterable

EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_UNSUPPORTED = 3
EXIT_INTERNAL = 70


class LogbbError(Exception):
    """Base class for all logbb errors."""

    exit_code: int = EXIT_INPUT


# --- input errors -----------------------------------------------------------


class InputError(LogbbError, ValueError):
    exit_code = EXIT_INPUT


class ParseError(InputError):
    """Malformed polynomial text."""

    def __init__(self, message: str, offset: int, expected: Iterable[str] = ()):
        self.offset = offset
        self.expected = frozenset(expected)
        detail = f"{message} at offset {offset}"
        if self.expected:
            detail += f" (expected one of: {', '.join(sorted(self.expected))})"
        super().__init__(detail)


class UnknownVariable(InputError):
    def __init__(self, name: str, offset: int):
        self.name = name
        self.offset = offset
        super().__init__(f"unknown variable {name!r} at offset {offset}")


class AmbientMismatch(InputError):
    pass


class IndexOutOfRange(InputError, IndexError):
    pass


class SizeMismatch(InputError):
    pass


class DegreeMismatch(InputError):
    pass


class InconsistentPresentation(InputError):
    pass


class NotCoordinateNC(InputError):
    pass


class NotLogarithmic(InputError):
    def __init__(self, column: int, message: str | None = None):
        self.column = column
        super().__init__(message or f"column {column} is not logarithmic along f")


class DeterminantNotUnitTimesF(InputError):
    pass


class NotInLogSheaf(InputError):
    pass


class DegenerateChart(InputError):
    pass


class SceneValidationError(InputError):
    """Scene file rejected; ``path`` names the offending field."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}" if path else message)


# --- unsupported constructions ---------------------------------------------


class UnsupportedError(LogbbError):
    exit_code = EXIT_UNSUPPORTED


class NotAUnit(UnsupportedError, ZeroDivisionError):
    pass


class NotIsolated(UnsupportedError):
    pass


class BudgetExceeded(UnsupportedError):
    pass


class SeparatorRequired(UnsupportedError):
    def __init__(self, message: str, point: tuple | None = None):
        self.point = point
        super().__init__(message)


class UnsupportedBranch(UnsupportedError):
    pass


class BranchDegenerate(UnsupportedError):
    pass


# --- verification failures --------------------------------------------------


class AtlasInconsistency(LogbbError):
    exit_code = EXIT_MISMATCH
