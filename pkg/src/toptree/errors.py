class TopTreeError(ValueError):
    """Base class for contract violations reported by the library."""


class StaleHandleError(TopTreeError):
    pass


class PreconditionError(TopTreeError):
    pass


class InvalidRotationError(TopTreeError):
    pass
