"""Exception types raised across the package."""


class PhaseIdError(Exception):
    """Base class for all errors raised by phaseid."""


class MalformedMatrix(PhaseIdError, ValueError):
    pass


class NumericalFailure(PhaseIdError, ArithmeticError):
    pass


class DegenerateGap(PhaseIdError):
    """The requested singular subspace is not uniquely determined."""


class NonPositiveVariance(PhaseIdError, ValueError):
    pass


class ZeroPhaseTotal(PhaseIdError, ValueError):
    pass


class ZeroMeanRow(PhaseIdError, ValueError):
    pass


class InsufficientSamples(PhaseIdError):
    """Fewer intervals than consumers: connectivity is not identifiable."""


class RankDeficientData(PhaseIdError):
    pass


class SingularDependentBlock(PhaseIdError):
    pass


class TooLarge(PhaseIdError, ValueError):
    pass


class ParseError(PhaseIdError, ValueError):
    def __init__(self, message: str, line: int, column: int | None = None):
        self.line = line
        self.column = column
        where = f"line {line}" if column is None else f"line {line}, column {column}"
        super().__init__(f"{where}: {message}")


class SchemaMismatch(PhaseIdError, ValueError):
    pass


class AmbiguousColumn(UserWarning):
    """Two phases are equally close to 1 in a regression column."""
