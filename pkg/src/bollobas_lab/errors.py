"""Exception hierarchy shared across the library."""


class BollobasLabError(Exception):
    """Base class for all library errors."""


class DimensionMismatchError(BollobasLabError):
    """Vector/operator dimensions are inconsistent."""


class GeometryError(BollobasLabError):
    """The requested geometry is unsupported for this operation
    (e.g. modulus of convexity on a space that is not uniformly convex)."""


class NotNormalizedError(BollobasLabError):
    """Operator/functional is not normalized the way the predicate requires."""


class NotMaterializableError(BollobasLabError):
    """A symbolic sequence tail has no explicit entry rule, so it cannot be
    realized as a finite vector."""


class HeuristicRefusalError(BollobasLabError):
    """A downstream consumer asked for a certified object (norming set,
    attaining states) but only a heuristic value is available."""


class UnknownGalleryError(BollobasLabError):
    """Gallery id not recognized, or parameters below the entry's minimum."""
