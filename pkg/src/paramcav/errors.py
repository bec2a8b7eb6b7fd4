"""Exception hierarchy shared by all modules."""


class ParamcavError(Exception):
    """Base class for every error raised by the toolkit."""


# covariance representation
class DimensionMismatch(ParamcavError, ValueError):
    pass


class AsymmetryTooLarge(ParamcavError, ValueError):
    pass


class NotPositiveSemidefinite(ParamcavError, ValueError):
    pass


class PairingFailure(ParamcavError, ArithmeticError):
    pass


class UnknownMode(ParamcavError, KeyError):
    pass


class EmptyOrFullSet(ParamcavError, ValueError):
    pass


class UnphysicalState(ParamcavError, ValueError):
    pass


# entanglement
class InvalidBipartition(ParamcavError, ValueError):
    pass


class WrongModeCount(ParamcavError, ValueError):
    pass


class OptimizerDiverged(ParamcavError, RuntimeError):
    pass


# simulation
class DegenerateResonance(ParamcavError, ValueError):
    pass


class IndexOutOfRange(ParamcavError, IndexError):
    pass


class SymplecticityLost(ParamcavError, ArithmeticError):
    pass


class UnstableSystem(ParamcavError, ArithmeticError):
    def __init__(self, message, max_real_part):
        super().__init__(message)
        self.max_real_part = max_real_part


# calibration
class NonPositiveInput(ParamcavError, ValueError):
    pass


class SameMode(ParamcavError, ValueError):
    pass


class SegmentCountMismatch(ParamcavError, ValueError):
    pass


class FitNotConverged(ParamcavError, RuntimeError):
    pass


class InsufficientBiasRange(ParamcavError, ValueError):
    pass


class MissingEntry(ParamcavError, KeyError):
    def __init__(self, missing):
        self.missing = list(missing)
        super().__init__("missing raw moments for: " + ", ".join(
            f"({a}.{qa}, {b}.{qb})" for a, qa, b, qb in self.missing))

    def __str__(self):
        return self.args[0]


# file formats
class FormatError(ParamcavError, ValueError):
    pass
