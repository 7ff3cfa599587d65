"""View-facing aggregates: calendar totals, day summaries with peak hours,
heatmap densities, per-cell direction glyphs, POI donuts, region glyphs, and
the hour x category beeswarm / stacked-bar matrices.

Everything here is a pure function of (Store, parameters); no rendering or
layout happens server-side.
"""

from __future__ import annotations

from dataclasses import dataclass
from datetime import date

import numpy as np

from .errors import InvalidInputError, InvalidRadiusError, InvalidRangeError
from .geo import (
    HexIndex,
    axial_to_xy_arrays,
    bearing_sector_arrays,
    pack_hex,
    pack_region,
    project_arrays,
)
from .poi import CATEGORIES, Poi
from .store import Store

# trip duration class boundaries, seconds; buckets are [0,600), [600,1200),
# [1200,1800), [1800, inf)
DURATION_BOUNDS_S = (600, 1200, 1800)


@dataclass(frozen=True)
class CalendarCell:
    date: date
    total_trips: int


@dataclass(frozen=True)
class DaySummary:
    date: date
    total: int
    hourly: tuple[int, ...]
    peak_hours: frozenset[int]


@dataclass(frozen=True)
class CellGlyph:
    hex: HexIndex
    pickups: int
    dropoffs: int
    pickup_sectors: tuple[int, ...]
    dropoff_sectors: tuple[int, ...]


@dataclass(frozen=True)
class PoiDonut:
    poi: Poi
    pickups: int
    dropoffs: int


@dataclass(frozen=True)
class RegionGlyph:
    pickups: int
    dropoffs: int
    poi_counts: dict


@dataclass(frozen=True)
class BeeswarmCircle:
    hour: int
    category: str
    side: str  # pickup | dropoff
    count: int
    duration_buckets: tuple[int, ...] | None


@dataclass(frozen=True)
class BeeswarmMatrix:
    pickup_hourly: tuple[int, ...]
    dropoff_hourly: tuple[int, ...]
    circles: tuple[BeeswarmCircle, ...]


def _region_subset(store: Store, region, d: date, role: str):
    arr = store.day_array(d, "pickup" if role == "pickup" else "dropoff")
    keys = pack_region(region)
    if len(keys) == 0:
        raise InvalidInputError("region must be non-empty")
    if len(arr) == 0:
        return arr
    if role == "pickup":
        cell_keys = pack_hex(arr["o_q"], arr["o_r"])
    else:
        cell_keys = pack_hex(arr["d_q"], arr["d_r"])
    return arr[np.isin(cell_keys, keys)]


def calendar(store: Store, d_from: date, d_to: date) -> list[CalendarCell]:
    """Daily pick-up totals for every date in [d_from, d_to]; missing dates are 0."""
    if d_from > d_to:
        raise InvalidRangeError(f"from {d_from} is after to {d_to}")
    return [
        CalendarCell(date=d, total_trips=store.trip_count(d, "pickup"))
        for d in store.config.date_range(d_from, d_to)
    ]


def day_summary(store: Store, region, d: date) -> DaySummary:
    """Hourly pick-up counts (local hour of stime) and strict-mean peak hours.

    ``region=None`` means the whole city.
    """
    if region is None:
        arr = store.day_array(d, "pickup")
    else:
        arr = _region_subset(store, region, d, "pickup")
    hours = store.config.local_hour(arr["stime"]) if len(arr) else np.empty(0, np.int64)
    hourly = np.bincount(hours, minlength=24).astype(np.int64)
    total = int(hourly.sum())
    # strict inequality against the day mean, kept in integers for exactness
    peaks = frozenset(int(h) for h in range(24) if hourly[h] * 24 > total)
    return DaySummary(date=d, total=total, hourly=tuple(int(v) for v in hourly), peak_hours=peaks)


def heatmap(store: Store, d: date) -> list[tuple[HexIndex, int]]:
    """Per-cell pick-up counts; one entry per cell with at least one pick-up."""
    arr = store.day_array(d, "pickup")
    if len(arr) == 0:
        return []
    keys = pack_hex(arr["o_q"], arr["o_r"])
    uniq, counts = np.unique(keys, return_counts=True)
    out = []
    q = (uniq >> 32).astype(np.int64)
    r = (uniq ^ (q << 32)).astype(np.int64)
    r = np.where(r >= 2**31, r - 2**32, r)
    order = np.lexsort((r, q))
    for i in order:
        out.append((HexIndex(int(q[i]), int(r[i])), int(counts[i])))
    return out


def _sector_hist(store: Store, arr, cells_q, cells_r, cell_idx, toward_lon, toward_lat, sectors):
    """Per-cell sector histogram of bearings cell-center -> target point."""
    n_cells = len(cells_q)
    hist = np.zeros((n_cells, sectors), dtype=np.int64)
    undirected = np.zeros(n_cells, dtype=np.int64)
    if len(arr) == 0:
        return hist, undirected
    cx, cy = axial_to_xy_arrays(cells_q[cell_idx], cells_r[cell_idx], store.config.grid)
    tx, ty = project_arrays(toward_lon, toward_lat, store.config.grid)
    dx, dy = tx - cx, ty - cy
    # zero-distance trips carry no direction; so do targets exactly at center
    zero_trip = (arr["slon"] == arr["elon"]) & (arr["slat"] == arr["elat"])
    zero_vec = (dx == 0.0) & (dy == 0.0)
    undir_mask = zero_trip | zero_vec
    np.add.at(undirected, cell_idx[undir_mask], 1)
    ok = ~undir_mask
    if ok.any():
        sec = bearing_sector_arrays(dx[ok], dy[ok], sectors)
        np.add.at(hist, (cell_idx[ok], sec), 1)
    return hist, undirected


def cell_glyphs(store: Store, d: date, cells) -> list[CellGlyph]:
    """Pick-up/drop-off counts and 8-sector direction rings for each cell."""
    cell_list = sorted(cells, key=lambda h: (h.q, h.r))
    if not cell_list:
        raise InvalidInputError("cells must be non-empty")
    sectors = store.config.glyph_sectors
    cq = np.array([c.q for c in cell_list], dtype=np.int64)
    cr = np.array([c.r for c in cell_list], dtype=np.int64)
    cell_keys = pack_hex(cq, cr)
    sort_order = np.argsort(cell_keys)
    cell_keys_sorted = cell_keys[sort_order]

    def _per_role(role):
        """Trips whose endpoint cell is in the request, plus their cell index."""
        arr = store.day_array(d, role)
        if len(arr) == 0:
            return arr, np.empty(0, np.int64)
        k = pack_hex(arr["o_q"], arr["o_r"]) if role == "pickup" else pack_hex(arr["d_q"], arr["d_r"])
        pos = np.searchsorted(cell_keys_sorted, k)
        pos = np.clip(pos, 0, len(cell_keys_sorted) - 1)
        hit = cell_keys_sorted[pos] == k
        return arr[hit], sort_order[pos[hit]]

    p_arr, p_idx = _per_role("pickup")
    d_arr, d_idx = _per_role("dropoff")

    p_hist, p_undir = _sector_hist(store, p_arr, cq, cr, p_idx, p_arr["elon"], p_arr["elat"], sectors)
    d_hist, d_undir = _sector_hist(store, d_arr, cq, cr, d_idx, d_arr["slon"], d_arr["slat"], sectors)
    p_counts = np.bincount(p_idx, minlength=len(cell_list))
    d_counts = np.bincount(d_idx, minlength=len(cell_list))

    return [
        CellGlyph(
            hex=cell_list[i],
            pickups=int(p_counts[i]),
            dropoffs=int(d_counts[i]),
            pickup_sectors=tuple(int(v) for v in p_hist[i]),
            dropoff_sectors=tuple(int(v) for v in d_hist[i]),
        )
        for i in range(len(cell_list))
    ]


def poi_donuts(store: Store, bbox, d: date, radius_m: float) -> list[PoiDonut]:
    """Nearby pick-up/drop-off counts around every POI inside the lon/lat bbox."""
    if radius_m <= 0:
        raise InvalidRadiusError(f"radius must be > 0, got {radius_m}")
    idx = store.poi_index
    min_lon, min_lat, max_lon, max_lat = bbox
    sel = np.nonzero(
        (idx.lons >= min_lon) & (idx.lons <= max_lon)
        & (idx.lats >= min_lat) & (idx.lats <= max_lat)
    )[0]
    if len(sel) == 0:
        return []
    window = store.day_window(d)

    def _counts(kind):
        tree, ts, taxi, x, y, speed = store.window_tree(window, kind)
        out = np.zeros(len(sel), dtype=np.int64)
        if tree is None:
            return out
        pts = np.column_stack([idx.xs[sel], idx.ys[sel]])
        balls = tree.query_ball_point(pts, radius_m * (1 + 1e-9) + 1e-9)
        for i, ball in enumerate(balls):
            if not ball:
                continue
            b = np.asarray(ball, dtype=np.int64)
            dx, dy = pts[i, 0] - x[b], pts[i, 1] - y[b]
            out[i] = int((np.sqrt(dx * dx + dy * dy) <= radius_m).sum())
        return out

    pu = _counts("pickup")
    do = _counts("dropoff")
    return [PoiDonut(poi=idx.pois[int(s)], pickups=int(pu[i]), dropoffs=int(do[i]))
            for i, s in enumerate(sel)]


def region_glyph(store: Store, region, d: date) -> RegionGlyph:
    """All-day pick-up/drop-off totals plus the region's POI census by category."""
    pickups = len(_region_subset(store, region, d, "pickup"))
    dropoffs = len(_region_subset(store, region, d, "dropoff"))
    keys = pack_region(region)
    in_region = np.isin(store.poi_index.hex_keys, keys)
    cat_counts = np.bincount(store.poi_index.cat_codes[in_region], minlength=len(CATEGORIES))
    return RegionGlyph(
        pickups=pickups,
        dropoffs=dropoffs,
        poi_counts={cat: int(cat_counts[i]) for i, cat in enumerate(CATEGORIES)},
    )


def _swarm_side(store: Store, arr, side: str, with_buckets: bool, categories):
    if side == "pickup":
        hours = store.config.local_hour(arr["stime"])
        cats = arr["c_o"].astype(np.int64)
    else:
        hours = store.config.local_hour(arr["etime"])
        cats = arr["c_d"].astype(np.int64)
    hourly = np.bincount(hours, minlength=24).astype(np.int64) if len(arr) else np.zeros(24, np.int64)
    ncat = len(CATEGORIES)
    counts = np.bincount(hours * ncat + cats, minlength=24 * ncat) if len(arr) else np.zeros(24 * ncat, np.int64)
    buckets = None
    if with_buckets:
        b = np.searchsorted(np.asarray(DURATION_BOUNDS_S), arr["duration_s"], side="right")
        buckets = np.bincount((hours * ncat + cats) * 4 + b, minlength=24 * ncat * 4)
    circles = []
    for hour in range(24):
        for ci, cat in enumerate(CATEGORIES):
            if cat not in categories:
                continue
            c = int(counts[hour * ncat + ci])
            if c == 0:
                continue
            dur = None
            if with_buckets:
                base = (hour * ncat + ci) * 4
                dur = tuple(int(buckets[base + k]) for k in range(4))
            circles.append(BeeswarmCircle(hour=hour, category=cat, side=side, count=c,
                                          duration_buckets=dur))
    return tuple(int(v) for v in hourly), circles


def _swarm(store: Store, region, d: date, category_filter, with_buckets: bool) -> BeeswarmMatrix:
    if category_filter is None:
        categories = set(CATEGORIES)
    else:
        categories = set(category_filter)
        if not categories:
            raise InvalidInputError("category filter must be non-empty")
        unknown = categories - set(CATEGORIES)
        if unknown:
            raise InvalidInputError(f"unknown categories: {sorted(unknown)}")
    p_arr = _region_subset(store, region, d, "pickup")
    d_arr = _region_subset(store, region, d, "dropoff")
    p_hourly, p_circles = _swarm_side(store, p_arr, "pickup", with_buckets, categories)
    d_hourly, d_circles = _swarm_side(store, d_arr, "dropoff", with_buckets, categories)
    return BeeswarmMatrix(
        pickup_hourly=p_hourly,
        dropoff_hourly=d_hourly,
        circles=tuple(p_circles + d_circles),
    )


def beeswarm(store: Store, region, d: date, category_filter=None) -> BeeswarmMatrix:
    """Hour x POI-category circles with per-circle duration histograms.

    The category filter removes circles only; hourly background totals always
    cover every category.
    """
    return _swarm(store, region, d, category_filter, with_buckets=True)


def stacked_bars(store: Store, region, d: date) -> BeeswarmMatrix:
    """Same counts as the beeswarm, without duration histograms."""
    return _swarm(store, region, d, None, with_buckets=False)
