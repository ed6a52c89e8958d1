"""Exception types raised across the package."""


class CutoffError(ValueError):
    """A Fock index or field support exceeds what the cutoff admits."""


class InsufficientCutoffError(CutoffError):
    """The truncated state would lose more than the allowed tail mass."""

    def __init__(self, message, minimum_n_max):
        super().__init__(message)
        self.minimum_n_max = minimum_n_max


class DimensionError(ValueError):
    """Operands live on incompatible spaces."""


class NotHermitianError(ValueError):
    pass


class UnsupportedConfigurationError(ValueError):
    """Requested model is only defined at resonance (nu == omega)."""


class DegenerateBranchError(ArithmeticError):
    pass


class PropagationError(RuntimeError):
    pass
