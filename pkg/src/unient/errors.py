"""Exception types shared across the package."""


class UnientError(ValueError):
    """Base class for all validation and usage errors raised by this package."""


class InvalidStateError(UnientError):
    """A state container violates its invariants (norm, Hermiticity, PSD, shape)."""


class InvalidPartitionError(UnientError):
    """A qubit partition is empty, overlapping, out of range, or incomplete."""


class UnknownStateError(UnientError):
    """An unsupported named-state kind, or a kind/qubit-count mismatch."""


class SingularParametersError(UnientError):
    """Entropy parameters requested at the jointly singular point q = s = 0."""


class RegionError(UnientError):
    """A (q, s) pair lies outside the validity region of the requested check."""


class MeasurementError(UnientError):
    """A pairwise entanglement value is negative beyond numerical tolerance."""


class MismatchedReportsError(UnientError):
    """Reports passed to a comparison were not computed on identical inputs."""


class UsageError(UnientError):
    """Malformed CLI arguments or sweep configuration."""
