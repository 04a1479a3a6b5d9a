"""Exception types shared across the toolkit."""


class RelayToolkitError(Exception):
    """Base class for all toolkit-specific failures."""


class ParameterInfeasibleError(RelayToolkitError):
    """Scheme parameters violate a structural constraint (power split, PSD gate)."""


class ConstraintInfeasibleError(RelayToolkitError):
    """The compression constraint cannot be met for any noise variance."""


class NumericalConditioningError(RelayToolkitError):
    """A covariance submatrix is too ill-conditioned to factor reliably."""


class MalformedKernelError(RelayToolkitError):
    """A probability kernel fails normalization or shape checks."""


class TableSizeError(RelayToolkitError):
    """A requested joint table would exceed the dense-storage cap."""


class ConfigError(RelayToolkitError):
    """Experiment configuration is invalid; message carries the field path."""
