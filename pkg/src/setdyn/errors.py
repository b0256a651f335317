"""Exception types shared across the package."""


class SetDynError(Exception):
    """Base class for errors raised by setdyn."""


class NotStronglyConnectedError(SetDynError, ValueError):
    """Raised when an operation needs a strongly connected relation.

    ``components`` holds two strongly connected components ``(source, sink)``
    such that ``source`` cannot be reached from ``sink``.
    """

    def __init__(self, components):
        self.components = components
        source, sink = components
        super().__init__(
            "relation is not strongly connected: component %s is unreachable from %s"
            % (sorted(source), sorted(sink))
        )


class DomainError(SetDynError, ValueError):
    """An interval or point lies outside the domain it must belong to."""


class CapExceededError(SetDynError, RuntimeError):
    """A combinatorial size limit was hit (orbit prefixes, breakpoints)."""

    def __init__(self, what, size, cap):
        self.what = what
        self.size = size
        self.cap = cap
        super().__init__("%s: %d exceeds cap %d" % (what, size, cap))
