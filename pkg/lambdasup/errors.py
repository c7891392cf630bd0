"""Exception hierarchy shared by the kernel, the frontend and the CLI."""

from __future__ import annotations

from typing import Optional


class LambdaSupError(Exception):
    """Base class for every error raised on purpose by this package."""


class TermTypeError(LambdaSupError):
    """Ill-typed term construction, application or replacement."""


class PositionError(LambdaSupError):
    """A green or orange position that does not exist in the term."""


class EncodingError(LambdaSupError):
    """Non-ground input to the F-encoding or an unknown lam tag on decode."""


class TptpSyntaxError(LambdaSupError):
    def __init__(self, message: str, line: Optional[int] = None, column: Optional[int] = None):
        self.line = line
        self.column = column
        where = f" (line {line}, col {column})" if line is not None else ""
        super().__init__(f"{message}{where}")


class UnsupportedInputError(LambdaSupError):
    """Input outside the supported TPTP fragment (arithmetic, tuples, ...)."""


class ClausifyError(LambdaSupError):
    pass


class ResourceLimit(LambdaSupError):
    """Raised inside the loop when a time, clause or memory limit is hit."""

    def __init__(self, reason: str):
        self.reason = reason
        super().__init__(reason)
