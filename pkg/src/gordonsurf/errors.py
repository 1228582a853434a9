"""Exception hierarchy of the geometry kernel."""


class GeometryError(Exception):
    """Base class for every kernel-specific failure."""


class DomainError(GeometryError, ValueError):
    """A parameter lies outside the domain of a curve or surface."""


class NumericError(GeometryError, ArithmeticError):
    """A linear system is singular or an iteration failed to converge."""


class NetworkError(GeometryError):
    """A curve network violates closure or intersection requirements."""


class AmbiguousIntersectionError(NetworkError):
    """A profile/guide pair meets in more than one distinct location."""


class ReparametrizationError(GeometryError):
    """A reparametrization function is not strictly increasing."""


class DependencyCycleError(GeometryError):
    """Continuity conditions between guide parts form a cycle."""

    def __init__(self, cycle):
        self.cycle = list(cycle)
        names = " -> ".join(str(p) for p in self.cycle)
        super().__init__(f"cyclic continuity dependencies: {names}")


class DocumentError(GeometryError, ValueError):
    """A network or surface document is malformed; carries the JSON path."""

    def __init__(self, path: str, message: str):
        self.path = path
        super().__init__(f"{path}: {message}")
