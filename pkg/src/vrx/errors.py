"""Exception types shared across the package."""


class VrxError(Exception):
    """Base class for all package errors."""


class DescriptorMismatch(VrxError):
    """Ring elements with different descriptors were combined."""


class InfiniteRing(VrxError):
    """An exhaustive operation was requested on an infinite ring."""


class NotAUnit(VrxError):
    """The element has no multiplicative inverse."""


class TruncationEscape(VrxError):
    """A result would leave the truncated part of an instance."""


class WindowRejected(VrxError):
    """An identity instance is outside the admissible window; counted as skipped."""


class NotIterative(VrxError):
    """An HS family lacks the iterative flag."""


class NonvanishingPositiveMode(VrxError):
    """A mode u(n) with n >= 0 acts nontrivially.

    The witness ``(u, n, v)`` is stored on ``self.witness``.
    """

    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class NotFound(VrxError):
    """A bounded search ended without a result."""


class HypothesisUnverified(VrxError):
    """A prerequisite of a construction failed to verify."""


class NotAVirasoroVector(VrxError):
    """The candidate state does not satisfy the Virasoro relations."""


class InfiniteSearchSpace(VrxError):
    """Exhaustive search is impossible or too large."""


class BaseMismatch(VrxError):
    """Instances over different base rings were combined."""


class NotIdempotent(VrxError):
    """The state is not an idempotent."""


class NotExhaustive(VrxError):
    """An idempotent search did not run exhaustively."""


class PreconditionFailed(VrxError):
    """A documented precondition does not hold."""


class ParseError(VrxError):
    """Malformed input string; ``self.position`` marks the offending offset."""

    def __init__(self, msg, position=0):
        super().__init__(f"{msg} (at position {position})")
        self.position = position


class BuildError(VrxError):
    """An instance could not be constructed."""
