"""Exception hierarchy shared by every module."""


class TorsorLabError(Exception):
    """Base class for all library errors."""


class ValidationError(TorsorLabError, ValueError):
    """An input violates a structural invariant.

    ``invariant`` names the violated law so callers (and the CLI) can
    report it verbatim.
    """

    def __init__(self, invariant, message, **details):
        super().__init__(f"{invariant}: {message}")
        self.invariant = invariant
        self.details = details


class UnsupportedRepresentation(TorsorLabError):
    pass


class PreconditionError(TorsorLabError, ValueError):
    pass


class IdentityViolation(TorsorLabError, AssertionError):
    """A computed object failed an algebraic identity it must satisfy.

    Carries the identity name plus the concrete group elements / points
    involved, which the CLI turns into a failure record.
    """

    def __init__(self, identity, **details):
        detail = ", ".join(f"{k}={v!r}" for k, v in details.items())
        super().__init__(f"{identity} violated ({detail})")
        self.identity = identity
        self.details = details
