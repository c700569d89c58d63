"""Exception types shared across modules."""


class HypothesisError(ValueError):
    """The input violates a hypothesis of the operation (reported, never silently ignored)."""


class SequenceError(HypothesisError):
    pass
