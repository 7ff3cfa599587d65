"""POI catalog: loading, category reclassification, and spatial queries.

The index prunes candidates with a scipy cKDTree, then re-evaluates exact
projected distances (sqrt(dx*dx + dy*dy) in float64) so that results are
bit-identical to a brute-force scan, including the (distance, id) tie rule.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from .errors import (
    InvalidRadiusError,
    MalformedRowError,
    NoPoiError,
    UnmappedCategoryError,
)
from .geo import GridConfig, LonLat, pack_hex, project_arrays, xy_to_hex_arrays

CATEGORIES = ("company", "education", "entertainment", "living", "public_service", "traffic")
CATEGORY_CODE = {name: i for i, name in enumerate(CATEGORIES)}


@dataclass(frozen=True)
class Poi:
    id: int
    location: LonLat
    name: str
    address: str
    category: str
    raw_category: str


class PoiIndex:
    """Immutable spatial index over the loaded POI catalog."""

    def __init__(self, pois: list[Poi], cfg: GridConfig):
        self.cfg = cfg
        self.pois = list(pois)
        n = len(self.pois)
        self.ids = np.array([p.id for p in self.pois], dtype=np.int64)
        self.lons = np.array([p.location.lon for p in self.pois], dtype=np.float64)
        self.lats = np.array([p.location.lat for p in self.pois], dtype=np.float64)
        self.cat_codes = np.array([CATEGORY_CODE[p.category] for p in self.pois], dtype=np.int8)
        self.xs, self.ys = project_arrays(self.lons, self.lats, cfg)
        self._tree = cKDTree(np.column_stack([self.xs, self.ys])) if n else None
        self._hex_keys = None

    def __len__(self) -> int:
        return len(self.pois)

    @property
    def hex_keys(self) -> np.ndarray:
        """Packed hex key of each POI's containing cell (computed lazily)."""
        if self._hex_keys is None:
            q, r = xy_to_hex_arrays(self.xs, self.ys, self.cfg)
            self._hex_keys = pack_hex(q, r)
        return self._hex_keys

    def _exact_dist(self, x: float, y: float, idxs: np.ndarray) -> np.ndarray:
        dx = x - self.xs[idxs]
        dy = y - self.ys[idxs]
        return np.sqrt(dx * dx + dy * dy)

    def nearest_idx_arrays(self, xs, ys) -> np.ndarray:
        """Vectorized nearest-POI row indexes with (distance, id) tie-breaking."""
        if self._tree is None:
            raise NoPoiError("POI index is empty")
        xs = np.atleast_1d(np.asarray(xs, dtype=np.float64))
        ys = np.atleast_1d(np.asarray(ys, dtype=np.float64))
        pts = np.column_stack([xs, ys])
        k = min(8, len(self.pois))
        _, cand = self._tree.query(pts, k=k, workers=-1)
        cand = cand.reshape(len(pts), k)
        dx = xs[:, None] - self.xs[cand]
        dy = ys[:, None] - self.ys[cand]
        d = np.sqrt(dx * dx + dy * dy)
        best = np.empty(len(pts), dtype=np.int64)
        dmin = d.min(axis=1)
        # among exact-minimum candidates, smallest id wins
        ids = np.where(d == dmin[:, None], self.ids[cand], np.iinfo(np.int64).max)
        argbest = ids.argmin(axis=1)
        best = cand[np.arange(len(pts)), argbest]
        if k < len(self.pois):
            # if the tie at the minimum extends to the k-th candidate, the
            # candidate set may be incomplete: fall back to a ball query
            suspect = np.nonzero(d[:, -1] == dmin)[0]
            for i in suspect:
                ball = self._tree.query_ball_point([xs[i], ys[i]], dmin[i] * (1 + 1e-9) + 1e-9)
                bd = self._exact_dist(xs[i], ys[i], np.asarray(ball, dtype=np.int64))
                m = bd.min()
                tied = [ball[j] for j in range(len(ball)) if bd[j] == m]
                best[i] = min(tied, key=lambda j: self.ids[j])
        return best

    def within_idx(self, x: float, y: float, radius_m: float) -> np.ndarray:
        """Row indexes with exact distance <= radius, sorted by (distance, id)."""
        if radius_m <= 0:
            raise InvalidRadiusError(f"radius must be > 0, got {radius_m}")
        if self._tree is None:
            return np.empty(0, dtype=np.int64)
        ball = np.asarray(
            self._tree.query_ball_point([x, y], radius_m * (1 + 1e-9) + 1e-9), dtype=np.int64
        )
        if len(ball) == 0:
            return ball
        d = self._exact_dist(x, y, ball)
        keep = d <= radius_m
        ball, d = ball[keep], d[keep]
        order = np.lexsort((self.ids[ball], d))
        return ball[order]


def nearest_poi(p: LonLat, idx: PoiIndex) -> Poi:
    """The POI minimizing projected distance to ``p``; ties go to the smaller id."""
    if len(idx) == 0:
        raise NoPoiError("POI index is empty")
    x, y = project_arrays(p.lon, p.lat, idx.cfg)
    row = idx.nearest_idx_arrays(float(x), float(y))[0]
    return idx.pois[int(row)]


def pois_within(p: LonLat, radius_m: float, idx: PoiIndex) -> list[Poi]:
    """All POIs within the closed ball of ``radius_m``, sorted by (distance, id)."""
    x, y = project_arrays(p.lon, p.lat, idx.cfg)
    rows = idx.within_idx(float(x), float(y), radius_m)
    return [idx.pois[int(i)] for i in rows]


def load_category_map(path) -> dict[str, str]:
    """Parse ``raw_category,canonical_category`` lines into a mapping."""
    mapping: dict[str, str] = {}
    with open(path, encoding="utf-8") as f:
        for lineno, line in enumerate(f, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            parts = line.split(",")
            if len(parts) != 2:
                raise MalformedRowError(f"{path}:{lineno}: expected 'raw,canonical', got {line!r}")
            raw, canon = parts[0].strip(), parts[1].strip()
            if canon not in CATEGORY_CODE:
                raise UnmappedCategoryError(
                    f"{path}:{lineno}: {canon!r} is not one of {CATEGORIES}"
                )
            mapping[raw] = canon
    return mapping


def load_pois(catalog_path, mapping_path, cfg: GridConfig) -> tuple[PoiIndex, dict]:
    """Load the POI catalog, reclassify categories, and index the in-bbox rows.

    Returns the index plus a small report with the out-of-bbox drop counter.
    Raises on the first unmapped raw category or malformed row.
    """
    mapping = load_category_map(mapping_path)
    min_lon, min_lat, max_lon, max_lat = cfg.bbox
    pois: list[Poi] = []
    dropped_bbox = 0
    with open(catalog_path, encoding="utf-8", newline="") as f:
        reader = csv.reader(f)
        header = next(reader, None)
        if header is None or [h.strip() for h in header] != ["lon", "lat", "name", "address", "raw_category"]:
            raise MalformedRowError(f"{catalog_path}:1: bad header {header!r}")
        for lineno, row in enumerate(reader, start=2):
            if len(row) != 5:
                raise MalformedRowError(f"{catalog_path}:{lineno}: expected 5 fields, got {len(row)}")
            try:
                lon, lat = float(row[0]), float(row[1])
            except ValueError as e:
                raise MalformedRowError(f"{catalog_path}:{lineno}: {e}") from None
            raw = row[4].strip()
            if raw not in mapping:
                raise UnmappedCategoryError(f"{catalog_path}:{lineno}: unmapped raw category {raw!r}")
            if not (min_lon <= lon <= max_lon and min_lat <= lat <= max_lat):
                dropped_bbox += 1
                continue
            pois.append(
                Poi(
                    id=len(pois),
                    location=LonLat(lon, lat),
                    name=row[2],
                    address=row[3],
                    category=mapping[raw],
                    raw_category=raw,
                )
            )
    report = {"pois_loaded": len(pois), "pois_out_of_bbox": dropped_bbox}
    return PoiIndex(pois, cfg), report
