"""Shared fixtures: a small study area, a toy POI catalog, array builders."""

import numpy as np
import pytest

from hexcab.config import EngineConfig
from hexcab.geo import LonLat, project_arrays, xy_to_hex_arrays
from hexcab.ingest import TRIP_DTYPE, VACANT_DTYPE
from hexcab.poi import CATEGORIES, Poi, PoiIndex

ENGINE = EngineConfig(
    origin_lon=114.0,
    origin_lat=22.5,
    hex_width_m=400.0,
    bbox=(113.8, 22.3, 114.2, 22.7),
    tz_offset_hours=8.0,
)

# 2019-09-02 (a Monday) at local midnight, as epoch seconds
DAY0_TS = ENGINE.day_start_ts(__import__("datetime").date(2019, 9, 2))


@pytest.fixture(scope="session")
def engine() -> EngineConfig:
    return ENGINE


@pytest.fixture(scope="session")
def poi_index() -> PoiIndex:
    """Six POIs, one per category, spread across the center of the bbox."""
    locs = [
        (114.000, 22.500),
        (114.010, 22.505),
        (113.990, 22.495),
        (114.005, 22.490),
        (113.995, 22.510),
        (114.015, 22.498),
    ]
    pois = [
        Poi(i, LonLat(*locs[i]), f"poi{i}", f"addr{i}", cat, cat)
        for i, cat in enumerate(CATEGORIES)
    ]
    return PoiIndex(pois, ENGINE.grid)


def build_trips(rows, poi_index: PoiIndex, engine: EngineConfig) -> np.ndarray:
    """TRIP_DTYPE array from (taxi, stime, slon, slat, etime, elon, elat) tuples."""
    arr = np.empty(len(rows), dtype=TRIP_DTYPE)
    for i, (taxi, stime, slon, slat, etime, elon, elat) in enumerate(rows):
        arr[i]["taxi_id"] = taxi
        arr[i]["stime"] = stime
        arr[i]["slon"], arr[i]["slat"] = slon, slat
        arr[i]["etime"] = etime
        arr[i]["elon"], arr[i]["elat"] = elon, elat
        arr[i]["duration_s"] = etime - stime
    if len(rows):
        sx, sy = project_arrays(arr["slon"], arr["slat"], engine.grid)
        ex, ey = project_arrays(arr["elon"], arr["elat"], engine.grid)
        arr["c_o"] = poi_index.cat_codes[poi_index.nearest_idx_arrays(sx, sy)]
        arr["c_d"] = poi_index.cat_codes[poi_index.nearest_idx_arrays(ex, ey)]
        oq, orr = xy_to_hex_arrays(sx, sy, engine.grid)
        dq, drr = xy_to_hex_arrays(ex, ey, engine.grid)
        arr["o_q"], arr["o_r"] = oq.astype(np.int32), orr.astype(np.int32)
        arr["d_q"], arr["d_r"] = dq.astype(np.int32), drr.astype(np.int32)
    return arr


def make_store(path, trip_rows, vacant_rows, poi_index, engine=ENGINE):
    """Write a store straight from (taxi, stime, slon, slat, etime, elon, elat)
    trip tuples and (ts, taxi, lon, lat, speed) vacant tuples."""
    from hexcab.store import write_store

    return write_store(
        path,
        build_trips(trip_rows, poi_index, engine),
        build_vacant(vacant_rows, engine),
        poi_index,
        engine,
    )


def build_vacant(rows, engine: EngineConfig) -> np.ndarray:
    """VACANT_DTYPE array from (ts, taxi, lon, lat, speed) tuples."""
    arr = np.empty(len(rows), dtype=VACANT_DTYPE)
    for i, (ts, taxi, lon, lat, speed) in enumerate(rows):
        arr[i]["ts"] = ts
        arr[i]["taxi_id"] = taxi
        arr[i]["lon"], arr[i]["lat"] = lon, lat
        arr[i]["speed"] = speed
    if len(rows):
        x, y = project_arrays(arr["lon"], arr["lat"], engine.grid)
        q, r = xy_to_hex_arrays(x, y, engine.grid)
        arr["q"], arr["r"] = q.astype(np.int32), r.astype(np.int32)
    return arr
