"""Exception hierarchy shared by all torustab modules."""


class TorustabError(Exception):
    """Base class for all errors raised by this package."""


class StructureError(TorustabError, ValueError):
    """Malformed data: invalid permutation, size mismatch, bad record."""


class DomainError(TorustabError, ValueError):
    """Structurally valid input outside an operation's domain
    (e.g. a disconnected map, a link passed to a knot-only operation)."""


class ResourceError(TorustabError, RuntimeError):
    """A configured resource cap would be exceeded."""


class OrderingError(TorustabError, RuntimeError):
    """A pipeline stage was invoked before its prerequisites
    (e.g. diagram classification without the key libraries of all
    smaller crossing numbers)."""
