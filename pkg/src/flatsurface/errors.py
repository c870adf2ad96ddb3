"""Exception hierarchy shared by every module of the package."""


class FlatSurfaceError(Exception):
    """Base class for all errors raised by flatsurface."""


# surface construction
class DegenerateTriangle(FlatSurfaceError):
    pass


class MismatchedEdgeLengths(FlatSurfaceError):
    pass


class DanglingGluing(FlatSurfaceError):
    pass


class UnlabeledBoundary(FlatSurfaceError):
    pass


class EmptyLabelSet(FlatSurfaceError):
    pass


class NonManifold(FlatSurfaceError):
    pass


class UnknownVertex(FlatSurfaceError, KeyError):
    pass


# geodesic search
class SearchBudgetExceeded(FlatSurfaceError):
    def __init__(self, budget, message=None):
        self.budget = budget
        super().__init__(message or f"search budget of {budget} developed triangles exceeded")


class NoArcExists(FlatSurfaceError):
    pass


class NoEssentialLoop(FlatSurfaceError):
    pass


class NotSimple(FlatSurfaceError):
    pass


# surgery
class DegenerateSplit(FlatSurfaceError):
    pass


class NearDegenerateCrossing(FlatSurfaceError):
    pass


class ChainNotGeodesic(FlatSurfaceError):
    pass


class SeamMismatch(FlatSurfaceError):
    pass


# shape preconditions
class NotAFlatDisk(FlatSurfaceError):
    pass


class NotADisk(FlatSurfaceError):
    pass


class NotASphere(FlatSurfaceError):
    pass


class NotAMobiusBand(FlatSurfaceError):
    pass


class NotRenderable(FlatSurfaceError):
    pass


class SurfaceSyntaxError(FlatSurfaceError):
    """Parse failure carrying a 1-based line and column."""

    def __init__(self, message, line=None, column=None):
        self.line = line
        self.column = column
        loc = ""
        if line is not None:
            loc = f"line {line}" + (f", column {column}" if column is not None else "") + ": "
        super().__init__(loc + message)
