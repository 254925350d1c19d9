"""Exception types raised across the package.

Every error that the CLI maps to a distinct exit code lives here so the
mapping stays in one place (see ``pathenc.cli.EXIT_CODES``).
"""


class PathencError(Exception):
    """Base class for all package errors."""


class DimensionMismatch(PathencError):
    pass


class NonHermitianDipole(PathencError):
    pass


class NonzeroDiagonal(PathencError):
    pass


class ShapeMismatch(PathencError):
    pass


class DisconnectedGraph(PathencError):
    pass


class EdgeInTree(PathencError):
    pass


class EvenBase(PathencError):
    pass


class NoEncodedEdges(PathencError):
    """Raised when the graph is a tree and a reduced encoding has nothing to
    modulate; there is then a single pathway class per state pair."""


class SchemeSystemMismatch(PathencError):
    pass


class OutOfDomain(PathencError):
    """A frequency index has no digit expansion in the requested base."""


class DigitOutOfRange(PathencError):
    pass


class ModeMismatch(PathencError):
    pass


class InvalidTransition(PathencError):
    pass


class EnumerationOverflow(PathencError):
    """Pathway enumeration exceeded the configured count cap."""


class Nonconvergence(PathencError):
    """Pulse synthesis stopped before reaching the target infidelity."""

    def __init__(self, message, result=None):
        super().__init__(message)
        self.result = result


class ConfigParseError(PathencError):
    pass


class MissingResults(PathencError):
    pass
