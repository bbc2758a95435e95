"""Exception types raised across the package."""


class PrevlabError(Exception):
    """Base class for all library errors."""


class DuplicateElement(PrevlabError):
    pass


class CycleDetected(PrevlabError):
    pass


class SizeLimitExceeded(PrevlabError):
    pass


class NotUpwardClosed(PrevlabError):
    pass


class NotMonotone(PrevlabError):
    pass


class PosetMismatch(PrevlabError):
    pass


class FlavorMismatch(PrevlabError):
    pass


class MassExceedsOne(PrevlabError):
    pass


class EmptyMatrix(PrevlabError):
    pass


class NotAFork(PrevlabError):
    pass


class ShapeMismatch(PrevlabError):
    pass


class EmptyGenerators(PrevlabError):
    pass


class EmptyLens(PrevlabError):
    """A lens presentation whose two halves do not intersect."""


class CertificateError(PrevlabError):
    """A solver answer failed its own arithmetic re-check."""


class ParseError(PrevlabError):
    def __init__(self, message, position=None):
        self.position = position
        where = f" at {position}" if position is not None else ""
        super().__init__(f"{message}{where}")


class SchemaError(PrevlabError):
    pass


class UnknownSuite(PrevlabError):
    pass


class UnboundName(PrevlabError, NameError):
    """A scenario task refers to a binding that does not exist."""
