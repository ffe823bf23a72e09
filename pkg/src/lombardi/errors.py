"""Exception hierarchy shared by every module in the package."""


class LombardiError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(LombardiError, ValueError):
    """An angle or length argument lies outside the range a formula accepts."""


class DegenerateGeometryError(LombardiError, ValueError):
    """Two points that must be distinct coincide (within the chord threshold)."""


class NearDegenerateArcError(DegenerateGeometryError):
    """The tangent points almost straight away from the chord, so the arc would be
    (nearly) a full circle."""


class GraphError(LombardiError, ValueError):
    """The graph violates a structural requirement (size, connectivity, simplicity)."""


class ParseError(LombardiError, ValueError):
    """Malformed graph input. ``line`` is 1-based when known."""

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
