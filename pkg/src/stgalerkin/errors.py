"""Exception hierarchy shared by all modules."""


class StGalerkinError(Exception):
    """Base class for library errors."""


class DimensionMismatch(StGalerkinError, ValueError):
    pass


class SingularMatrix(StGalerkinError, ArithmeticError):
    pass


class OutOfSlab(StGalerkinError, ValueError):
    pass


class OutOfDomain(StGalerkinError, ValueError):
    pass


class IndexOutOfRange(StGalerkinError, IndexError):
    pass


class InvalidDegree(StGalerkinError, ValueError):
    pass


class InvalidCount(StGalerkinError, ValueError):
    pass


class QuadratureUnderresolved(StGalerkinError, ValueError):
    pass


class QuadratureNotConverged(StGalerkinError, ArithmeticError):
    pass


class SingularReconstruction(StGalerkinError, AssertionError):
    pass


class SingularSlabSystem(StGalerkinError, ArithmeticError):
    pass


class CflViolation(StGalerkinError, ValueError):
    pass


class IncompatibleDimensions(StGalerkinError, ValueError):
    pass


class NonPositiveError(StGalerkinError, ValueError):
    pass


class TooFewLevels(StGalerkinError, ValueError):
    pass


class ConfigInvalid(StGalerkinError, ValueError):
    pass


class UnknownSolutionId(ConfigInvalid, KeyError):
    pass


class IoFailure(StGalerkinError, OSError):
    pass
