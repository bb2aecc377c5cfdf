"""Exception types raised across the package."""


class ModbetaError(Exception):
    """Base class for all package errors."""


class RingMismatch(ModbetaError, TypeError):
    pass


class NonIntegralCoefficient(ModbetaError, ValueError):
    def __init__(self, index, value, p):
        super().__init__(f"coefficient {value} at q^{index} is not {p}-integral")
        self.index = index
        self.value = value
        self.p = p


class InsufficientPrecision(ModbetaError, ValueError):
    def __init__(self, have, need, what=""):
        msg = f"precision {have} < required {need}"
        super().__init__(f"{what}: {msg}" if what else msg)
        self.have = have
        self.need = need


class SpanDeficient(ModbetaError):
    def __init__(self, weight, ell, rank, dim):
        super().__init__(
            f"spanning set for M_{weight}(Gamma0({ell})) reaches rank {rank}, expected {dim}"
        )
        self.weight = weight
        self.ell = ell
        self.rank = rank
        self.dim = dim


class UnsupportedLevel(ModbetaError, ValueError):
    pass


class UnsaturatedSpace(ModbetaError):
    pass


class CrossCheckMismatch(ModbetaError, AssertionError):
    """Two independent computations of the same quantity disagree."""


class NonIntegralWeightRatio(ModbetaError):
    """A form passing the beta conditions has weight not divisible by p^2 - 1."""


class NotFound(ModbetaError):
    def __init__(self, message, failures=()):
        super().__init__(message)
        self.failures = list(failures)
