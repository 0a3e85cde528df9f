"""Exception types shared across the toolkit."""


class InputError(ValueError):
    """Caller passed arguments that violate an operation's preconditions."""


class DegenerateGraphError(ValueError):
    """The graph lacks structure the operation needs (no edges, isolated nodes)."""


class DegeneratePartitionError(ValueError):
    """The partition is unusable for the metric (e.g. a zero-volume community)."""


class GenerationError(RuntimeError):
    """A synthetic-benchmark spec could not be realized within bounded retries."""


class TrainingDivergedError(RuntimeError):
    """A loss became non-finite during optimization."""


class NormalizationError(ValueError):
    """A trade-off score normalizer (max runtime / max cut value) is zero."""


class CapabilityError(RuntimeError):
    """The input exceeds what this desk-scale implementation supports."""
