"""Exception hierarchy shared by all hexcab modules.

Each exception carries a machine ``code`` and an HTTP ``status`` so the API
layer can map module failures to structured error bodies without a lookup
table of its own.
"""


class HexcabError(Exception):
    """Base class for all hexcab failures."""

    code = "invalid_range"
    status = 400


class InvalidCoordinateError(HexcabError):
    """Non-finite or otherwise unusable coordinate."""

    code = "invalid_range"


class InvalidPolygonError(HexcabError):
    """Polygon with fewer than 3 vertices."""

    code = "invalid_polygon"


class UndefinedBearingError(HexcabError):
    """Bearing requested for a zero-length vector."""

    code = "invalid_range"


class InvalidRadiusError(HexcabError):
    """Radius must be strictly positive."""

    code = "invalid_radius"


class InvalidQueryError(HexcabError):
    """Malformed spatio-temporal query (bad window, bad kind, ...)."""

    code = "invalid_radius"


class InvalidRangeError(HexcabError):
    """Date or time range with from > to."""

    code = "invalid_range"


class InvalidCriterionError(HexcabError):
    """Unknown scoring criterion name."""

    code = "invalid_criterion"


class InvalidInputError(HexcabError):
    """Empty or degenerate input where at least one element is required."""

    code = "invalid_range"


class NoPoiError(HexcabError):
    """Nearest-POI query against an empty index."""

    code = "invalid_range"


class UnmappedCategoryError(HexcabError):
    """POI raw category missing from the category map."""

    code = "invalid_range"


class MalformedRowError(HexcabError):
    """Unparseable row in an input file; message carries the line number."""

    code = "invalid_range"


class OrderingError(HexcabError):
    """GPS stream not time-sorted within a taxi; message names the taxi."""

    code = "invalid_range"


class CorruptStoreError(HexcabError):
    """Store manifest, config hash, or shard counts do not line up."""

    code = "store_corrupt"
    status = 500
