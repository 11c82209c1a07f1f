"""Exception hierarchy shared by the library and the command line."""

import numpy as np


class LtarError(Exception):
    """Base class for all errors raised by :mod:`ltar`."""


class ShapeError(LtarError, ValueError):
    """Operands have incompatible dimensions."""


class InsufficientDataError(LtarError, ValueError):
    """Not enough observations to build a determined regression."""


class SingularSystemError(LtarError, np.linalg.LinAlgError):
    """Normal equations are singular and the ridge fallback is disabled."""


class ImaginaryResidueError(LtarError, ArithmeticError):
    """An inverse transform left a non-negligible imaginary part."""


class FormatError(LtarError, ValueError):
    """A series or model file could not be parsed.

    ``line`` and ``column`` are 1-based; ``column`` may be ``None`` when the
    problem concerns a whole line.
    """

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f"line {line}"
            if column is not None:
                where += f", column {column}"
            where += ": "
        super().__init__(where + message)
