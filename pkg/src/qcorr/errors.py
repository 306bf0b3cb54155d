"""Exception types raised across the package."""


class QcorrError(ValueError):
    """Base class for every error raised by qcorr."""


class NotHermitian(QcorrError):
    pass


class DimensionMismatch(QcorrError):
    pass


class NotNormalized(QcorrError):
    pass


class NotADensityOperator(QcorrError):
    pass


class WeightSumInvalid(QcorrError):
    pass


class InvalidSubsystem(QcorrError):
    pass


class IncompleteProjectorSet(QcorrError):
    pass


class UnknownPreset(QcorrError, KeyError):
    pass


class UnknownName(QcorrError, KeyError):
    pass


class NotADistribution(QcorrError):
    pass


class DichotomyViolated(QcorrError):
    pass


class NotPositive(QcorrError):
    """Correlation data reconstructs to a matrix with a negative eigenvalue."""


class InvalidBipartition(QcorrError):
    pass


class ConfigParseError(QcorrError):
    def __init__(self, message: str, line: int | None = None, field: str | None = None):
        self.line = line
        self.field = field
        where = []
        if line is not None:
            where.append(f"line {line}")
        if field is not None:
            where.append(f"field {field!r}")
        super().__init__(f"{message} ({', '.join(where)})" if where else message)


class ConfigValidationError(QcorrError):
    def __init__(self, message: str, field: str | None = None):
        self.field = field
        super().__init__(f"{field}: {message}" if field else message)
