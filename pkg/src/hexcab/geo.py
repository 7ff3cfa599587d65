"""Planar projection, bearings, and the hexagonal tessellation of the study area.

All functions are pure and operate on an immutable :class:`GridConfig`.
Scalar entry points are thin wrappers over the vectorized ``*_arrays``
functions so that bulk ingestion and single-point queries share one code
path (and therefore one rounding behavior).

Conventions:
- local equirectangular projection about the grid origin; x east, y north,
  meters;
- pointy-top hexagons in axial (q, r) coordinates; ``width_m`` is the
  distance across flats, which equals the center-to-neighbor distance;
- compass bearings in degrees, 0 = north, clockwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import InvalidCoordinateError, InvalidPolygonError, UndefinedBearingError

EARTH_RADIUS_M = 6371008.8  # IUGG mean radius
_DEG = math.pi / 180.0
SQRT3 = math.sqrt(3.0)


@dataclass(frozen=True)
class LonLat:
    lon: float
    lat: float


@dataclass(frozen=True)
class XY:
    x: float
    y: float


@dataclass(frozen=True)
class HexIndex:
    q: int
    r: int


@dataclass(frozen=True)
class GridConfig:
    """Grid geometry: projection origin, cell width, and study bounding box."""

    origin: LonLat
    width_m: float = 400.0
    # (min_lon, min_lat, max_lon, max_lat)
    bbox: tuple[float, float, float, float] = (-180.0, -90.0, 180.0, 90.0)

    def __post_init__(self):
        if not self.width_m > 0:
            raise ValueError(f"width_m must be > 0, got {self.width_m}")
        min_lon, min_lat, max_lon, max_lat = self.bbox
        if not (min_lon < max_lon and min_lat < max_lat):
            raise ValueError(f"bbox min must be < max per axis, got {self.bbox}")

    @property
    def meters_per_deg_lon(self) -> float:
        return math.cos(self.origin.lat * _DEG) * EARTH_RADIUS_M * _DEG

    @property
    def meters_per_deg_lat(self) -> float:
        return EARTH_RADIUS_M * _DEG

    @property
    def hex_size(self) -> float:
        """Circumradius of a cell (corner distance from center)."""
        return self.width_m / SQRT3


# ---------------------------------------------------------------------------
# projection
# ---------------------------------------------------------------------------

def project_arrays(lon, lat, cfg: GridConfig):
    """Vectorized lon/lat -> local x/y meters. Inputs are array-like."""
    lon = np.asarray(lon, dtype=np.float64)
    lat = np.asarray(lat, dtype=np.float64)
    x = (lon - cfg.origin.lon) * cfg.meters_per_deg_lon
    y = (lat - cfg.origin.lat) * cfg.meters_per_deg_lat
    return x, y


def unproject_arrays(x, y, cfg: GridConfig):
    """Vectorized local x/y meters -> lon/lat."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    lon = cfg.origin.lon + x / cfg.meters_per_deg_lon
    lat = cfg.origin.lat + y / cfg.meters_per_deg_lat
    return lon, lat


def project(p: LonLat, cfg: GridConfig) -> XY:
    if not (math.isfinite(p.lon) and math.isfinite(p.lat)):
        raise InvalidCoordinateError(f"non-finite coordinate {p}")
    x, y = project_arrays(p.lon, p.lat, cfg)
    return XY(float(x), float(y))


def unproject(p: XY, cfg: GridConfig) -> LonLat:
    lon, lat = unproject_arrays(p.x, p.y, cfg)
    return LonLat(float(lon), float(lat))


def planar_distance(a: LonLat, b: LonLat, cfg: GridConfig) -> float:
    """Projected Euclidean distance in meters (sqrt(dx*dx + dy*dy))."""
    pa, pb = project(a, cfg), project(b, cfg)
    dx, dy = pa.x - pb.x, pa.y - pb.y
    return math.sqrt(dx * dx + dy * dy)


# ---------------------------------------------------------------------------
# hex grid (pointy-top, axial coordinates)
# ---------------------------------------------------------------------------

def axial_to_xy_arrays(q, r, cfg: GridConfig):
    q = np.asarray(q, dtype=np.float64)
    r = np.asarray(r, dtype=np.float64)
    size = cfg.hex_size
    x = size * (SQRT3 * q + SQRT3 / 2.0 * r)
    y = size * 1.5 * r
    return x, y


def xy_to_hex_arrays(x, y, cfg: GridConfig):
    """Vectorized x/y -> axial (q, r) of the containing cell via cube rounding."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    size = cfg.hex_size
    qf = (SQRT3 / 3.0 * x - y / 3.0) / size
    rf = (2.0 / 3.0) * y / size
    sf = -qf - rf
    q = np.round(qf)
    r = np.round(rf)
    s = np.round(sf)
    dq = np.abs(q - qf)
    dr = np.abs(r - rf)
    ds = np.abs(s - sf)
    # recompute the axis with the largest rounding error from the other two
    fix_q = (dq > dr) & (dq > ds)
    fix_r = ~fix_q & (dr > ds)
    q = np.where(fix_q, -r - s, q)
    r = np.where(fix_r, -q - s, r)
    return q.astype(np.int64), r.astype(np.int64)


def to_hex(p: LonLat, cfg: GridConfig) -> HexIndex:
    """Cell whose center is nearest to the projected point."""
    pt = project(p, cfg)
    q, r = xy_to_hex_arrays(pt.x, pt.y, cfg)
    return HexIndex(int(q), int(r))


def hex_center(h: HexIndex, cfg: GridConfig) -> LonLat:
    x, y = axial_to_xy_arrays(h.q, h.r, cfg)
    return unproject(XY(float(x), float(y)), cfg)


_NEIGHBOR_STEPS = ((1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1))


def hex_neighbors(h: HexIndex) -> list[HexIndex]:
    return [HexIndex(h.q + dq, h.r + dr) for dq, dr in _NEIGHBOR_STEPS]


def pack_hex(q, r):
    """Pack axial coordinates into one int64 key (for fast set membership)."""
    q = np.asarray(q, dtype=np.int64)
    r = np.asarray(r, dtype=np.int64)
    return (q << 32) ^ (r & np.int64(0xFFFFFFFF))


def pack_region(cells: Iterable[HexIndex]) -> np.ndarray:
    cells = list(cells)
    if not cells:
        return np.empty(0, dtype=np.int64)
    q = np.array([c.q for c in cells], dtype=np.int64)
    r = np.array([c.r for c in cells], dtype=np.int64)
    return np.unique(pack_hex(q, r))


def hexes_in_polygon(poly: Sequence[LonLat], cfg: GridConfig) -> set[HexIndex]:
    """All cells whose center lies inside the polygon (even-odd rule)."""
    if len(poly) < 3:
        raise InvalidPolygonError(f"polygon needs >= 3 vertices, got {len(poly)}")
    px, py = project_arrays([p.lon for p in poly], [p.lat for p in poly], cfg)

    size = cfg.hex_size
    # candidate axial ranges from the polygon's xy bounding box, padded one cell
    r_lo = int(math.floor(py.min() / (1.5 * size))) - 1
    r_hi = int(math.ceil(py.max() / (1.5 * size))) + 1
    rs = np.arange(r_lo, r_hi + 1, dtype=np.int64)
    qs_lo = np.floor((px.min() / size - SQRT3 / 2.0 * rs) / SQRT3).astype(np.int64) - 1
    qs_hi = np.ceil((px.max() / size - SQRT3 / 2.0 * rs) / SQRT3).astype(np.int64) + 1
    counts = (qs_hi - qs_lo + 1).clip(min=0)
    r_cand = np.repeat(rs, counts)
    q_cand = np.concatenate(
        [np.arange(lo, hi + 1, dtype=np.int64) for lo, hi in zip(qs_lo, qs_hi)]
    ) if len(rs) else np.empty(0, dtype=np.int64)

    cx, cy = axial_to_xy_arrays(q_cand, r_cand, cfg)
    inside = points_in_polygon(cx, cy, px, py)
    return {HexIndex(int(q), int(r)) for q, r in zip(q_cand[inside], r_cand[inside])}


def points_in_polygon(x, y, poly_x, poly_y):
    """Vectorized even-odd (ray casting) point-in-polygon test."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    inside = np.zeros(x.shape, dtype=bool)
    n = len(poly_x)
    j = n - 1
    for i in range(n):
        x1, y1 = poly_x[j], poly_y[j]
        x2, y2 = poly_x[i], poly_y[i]
        crosses = (y1 > y) != (y2 > y)
        with np.errstate(divide="ignore", invalid="ignore"):
            xint = (x2 - x1) * (y - y1) / (y2 - y1) + x1
        inside ^= crosses & (x < xint)
        j = i
    return inside


# ---------------------------------------------------------------------------
# bearings
# ---------------------------------------------------------------------------

def bearing_arrays(dx, dy):
    """Compass bearing in degrees [0, 360) of projected displacement vectors."""
    return np.degrees(np.arctan2(dx, dy)) % 360.0


def bearing_sector_arrays(dx, dy, sectors: int):
    """Sector indexes for displacement vectors; sector 0 is centered on north.

    Callers must mask zero-length vectors beforehand.
    """
    width = 360.0 / sectors
    b = bearing_arrays(dx, dy)
    return np.minimum((((b + width / 2.0) % 360.0) / width).astype(np.int64), sectors - 1)


def bearing(frm: LonLat, to: LonLat, cfg: GridConfig) -> float:
    """Compass bearing from ``frm`` to ``to`` in degrees, 0 = north, clockwise."""
    a = project(frm, cfg)
    b = project(to, cfg)
    dx, dy = b.x - a.x, b.y - a.y
    if dx == 0.0 and dy == 0.0:
        raise UndefinedBearingError(f"zero-distance pair at {frm}")
    return float(bearing_arrays(dx, dy))


def bearing_sector(frm: LonLat, to: LonLat, sectors: int, cfg: GridConfig) -> int:
    """Bearing binned into ``sectors`` half-open arcs centered on north.

    Sector k covers [k*360/sectors - 180/sectors, k*360/sectors + 180/sectors).
    """
    a = project(frm, cfg)
    b = project(to, cfg)
    dx, dy = b.x - a.x, b.y - a.y
    if dx == 0.0 and dy == 0.0:
        raise UndefinedBearingError(f"zero-distance pair at {frm}")
    return int(bearing_sector_arrays(dx, dy, sectors))
