"""Exception hierarchy shared by all modules."""


class DiscreteEPIError(Exception):
    """Base class for every error raised by this package."""


class ParameterError(DiscreteEPIError, ValueError):
    """A parameter is outside its valid range."""


class TruncationOverflowError(DiscreteEPIError):
    """Representing a pmf within the tail tolerance needs more support than allowed."""

    def __init__(self, required_cutoff, max_cutoff):
        self.required_cutoff = int(required_cutoff)
        self.max_cutoff = int(max_cutoff)
        super().__init__(
            f"required cutoff {self.required_cutoff} exceeds max_cutoff {self.max_cutoff}"
        )


class CapacityError(DiscreteEPIError):
    """A computation would exceed a configured resource ceiling."""


class InversionError(DiscreteEPIError):
    """Monotone inversion of an entropy function failed to bracket the target."""


class OracleResolutionError(DiscreteEPIError):
    """The Husimi grid is too coarse or too short for the requested input."""


class PmfFormatError(DiscreteEPIError):
    """A serialized pmf or config is malformed."""
