"""Exception types shared across the toolkit.

Input problems raise :class:`InvalidInputError` (a ``ValueError``); failures of
a numerical procedure on otherwise valid input raise a subclass of
:class:`ComputationError`. The CLI maps these to exit codes 1 and 2.
"""


class InvalidInputError(ValueError):
    """Argument outside the operation's domain (non-finite, wrong sign, ...)."""


class ComputationError(RuntimeError):
    """A well-formed request that the numerics cannot satisfy."""


class NoRootError(ComputationError):
    """Target frequency is not reachable on the requested branch."""


class InconsistentDataError(ComputationError):
    """Reference data disagree with each other beyond the allowed residual."""


class DegenerateCircleError(ComputationError):
    """Reflection samples do not trace a circle (constant or collinear)."""


class OffResonanceError(ComputationError):
    """The trace does not bracket the resonance dip."""


class NoInversionError(ComputationError):
    """Fewer than two pump points show masing."""


class NegativeInterceptError(ComputationError):
    """Linear fit extrapolates to a non-physical threshold."""


class ZeroFieldError(ComputationError):
    """Field map carries no energy (max |H|^2 is zero)."""
