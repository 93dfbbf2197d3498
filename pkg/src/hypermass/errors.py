"""Exception hierarchy shared by every hypermass module."""


class HypermassError(Exception):
    """Base class for all library errors."""


class OutOfDomain(HypermassError, ValueError):
    """Coordinates lie outside the domain of their model."""


class CoincidentPoints(HypermassError, ValueError):
    """Two points that must be distinct are closer than 1e-12."""


class DegenerateTriangle(HypermassError, ValueError):
    """A triangle with (numerically) zero area."""


class FootOffLine(HypermassError, ValueError):
    """A point claimed to lie on a side geodesic does not."""


class DegenerateConfiguration(HypermassError, ValueError):
    """A Ceva/Menelaus configuration with a foot at a vertex."""


class NoExternalCentroid(HypermassError, ValueError):
    """Two point-masses have no finite external balance point."""


class EqualWeights(NoExternalCentroid):
    """External centroid requested for equal weights."""


class InvalidWedge(HypermassError, ValueError):
    pass


class InvalidPolygon(HypermassError, ValueError):
    pass


class InvalidRegion(HypermassError, ValueError):
    pass


class InvalidDensity(HypermassError, ValueError):
    pass


class QuadratureNotConverged(HypermassError, ArithmeticError):
    """Adaptive refinement depth exhausted before reaching the tolerance."""


class BalanceCheckFailed(HypermassError, ArithmeticError):
    """A computed lamina centroid failed its balance verification."""


class MeshTooFine(HypermassError, ValueError):
    """A delta-decomposition would exceed the configured cell cap."""


class BadDecomposition(HypermassError, ValueError):
    """Parts do not tile the region."""


class SliceExtractionFailed(HypermassError, ArithmeticError):
    """Pencil slices of a region could not be resolved into intervals."""
