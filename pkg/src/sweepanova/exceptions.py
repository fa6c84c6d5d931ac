"""Exception hierarchy.

Two roots: ``DesignValidationError`` for bad inputs (CLI exit code 2) and
``NumericalError`` for failures of the numerical machinery (exit code 3).
"""


class DesignValidationError(ValueError):
    """Input rejected before or during validation."""


class NumericalError(ArithmeticError):
    """A numerical routine failed or produced an inconsistent result."""


class NonSquareError(DesignValidationError):
    pass


class AsymmetricError(DesignValidationError):
    pass


class DimensionMismatchError(DesignValidationError):
    pass


class LevelOutOfRangeError(DesignValidationError):
    pass


class ZeroUnitsError(DesignValidationError):
    pass


class EmptyVectorError(DesignValidationError):
    pass


class NotOrthogonalComponentsError(DesignValidationError):
    pass


class NotBibError(DesignValidationError):
    pass


class EfficiencyOutOfRangeError(DesignValidationError):
    pass


class ZeroDfError(DesignValidationError):
    pass


class ZeroResidualVarianceError(DesignValidationError):
    pass


class InvalidDfError(DesignValidationError):
    pass


class DisconnectedDesignError(DesignValidationError):
    pass


class NotAContrastError(DesignValidationError):
    pass


class ZeroVectorError(DesignValidationError):
    pass


class InvalidParametersError(DesignValidationError):
    pass


class MissingColumnError(DesignValidationError):
    pass


class NonNumericResponseError(DesignValidationError):
    pass


class UnequalBlockSizesError(DesignValidationError):
    pass


class UnequalReplicationError(DesignValidationError):
    pass


class EmptyFileError(DesignValidationError):
    pass


class NoConvergenceError(NumericalError):
    pass


class NegativeSSError(NumericalError):
    pass
