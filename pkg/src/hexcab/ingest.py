"""GPS parsing, cleaning, OD-trip extraction, and vacant-sample retention.

The pipeline is array-based throughout: CSVs parse into column arrays,
occupancy runs are located with vectorized transition masks, and POI/hex
attribution happens in bulk. The record-level ``clean`` / ``extract_trips``
functions wrap the same array core so unit fixtures and bulk ingestion share
one behavior.

Trip boundary rule: a trip requires an observed 0->1 transition (pick-up)
and an observed 1->0 transition (drop-off). Occupied runs that begin at the
start of a taxi's stream or end at the end of it lack one of the two events
and are discarded (counted separately).
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np
import pandas as pd

from .config import CleaningRules, EngineConfig
from .errors import InvalidInputError, MalformedRowError, OrderingError
from .geo import GridConfig, HexIndex, LonLat, project_arrays, xy_to_hex_arrays
from .poi import CATEGORIES, PoiIndex

GPS_COLUMNS = ["ts", "taxi_id", "lon", "lat", "speed", "heading", "occupied"]

TRIP_DTYPE = np.dtype(
    [
        ("taxi_id", "i8"),
        ("stime", "i8"),
        ("slon", "f8"),
        ("slat", "f8"),
        ("etime", "i8"),
        ("elon", "f8"),
        ("elat", "f8"),
        ("c_o", "i1"),
        ("c_d", "i1"),
        ("duration_s", "i8"),
        ("o_q", "i4"),
        ("o_r", "i4"),
        ("d_q", "i4"),
        ("d_r", "i4"),
    ]
)

VACANT_DTYPE = np.dtype(
    [
        ("ts", "i8"),
        ("taxi_id", "i8"),
        ("lon", "f8"),
        ("lat", "f8"),
        ("speed", "f8"),
        ("q", "i4"),
        ("r", "i4"),
    ]
)


@dataclass(frozen=True)
class GpsRecord:
    ts: int
    taxi_id: int
    location: LonLat
    speed: float
    heading: float
    occupied: bool


@dataclass(frozen=True)
class Trip:
    taxi_id: int
    stime: int
    slocation: LonLat
    etime: int
    elocation: LonLat
    cO: str
    cD: str
    duration_s: int
    o_hex: HexIndex
    d_hex: HexIndex


@dataclass(frozen=True)
class VacantSample:
    ts: int
    taxi_id: int
    location: LonLat
    speed: float


def _empty_counters() -> dict:
    return {
        "records_read": 0,
        "malformed": 0,
        "out_of_bbox": 0,
        "over_speed": 0,
        "duplicate": 0,
        "runs_observed": 0,
        "leading_runs": 0,
        "open_runs_at_end": 0,
        "short_trip": 0,
        "long_trip": 0,
        "short_distance": 0,
        "trips_extracted": 0,
        "vacant_samples": 0,
    }


# ---------------------------------------------------------------------------
# CSV parsing
# ---------------------------------------------------------------------------

_FAST_DTYPES = {
    "ts": np.int64,
    "taxi_id": np.int64,
    "lon": np.float64,
    "lat": np.float64,
    "speed": np.float64,
    "heading": np.float64,
    "occupied": np.int8,
}


def read_gps_csv(path) -> tuple[dict, int]:
    """Parse one GPS CSV into column arrays; returns (columns, malformed_count).

    Tries a strict-dtype fast path first; any anomaly falls back to a
    tolerant pass that drops and counts malformed rows instead of failing.
    """
    path = Path(path)
    try:
        with open(path, encoding="utf-8") as f:
            header = f.readline().strip()
        if header.split(",") != GPS_COLUMNS:
            raise MalformedRowError(f"{path}:1: bad GPS header {header!r}")
    except OSError as e:
        raise InvalidInputError(f"unreadable GPS file {path}: {e}") from None

    try:
        df = pd.read_csv(path, dtype=_FAST_DTYPES, engine="c")
        malformed = 0
        bad_occ = ~np.isin(df["occupied"].to_numpy(), (0, 1))
        if bad_occ.any():
            malformed = int(bad_occ.sum())
            df = df[~bad_occ]
    except (ValueError, pd.errors.ParserError):
        df, malformed = _read_gps_tolerant(path)

    cols = {c: df[c].to_numpy() for c in GPS_COLUMNS}
    cols["occupied"] = cols["occupied"].astype(np.int8)
    return cols, malformed


def _read_gps_tolerant(path) -> tuple[pd.DataFrame, int]:
    bad_lines = []
    df = pd.read_csv(
        path,
        dtype=str,
        engine="python",
        on_bad_lines=lambda row: bad_lines.append(row) or None,
    )
    malformed = len(bad_lines)
    for c in GPS_COLUMNS:
        df[c] = pd.to_numeric(df[c], errors="coerce")
    ok = df[GPS_COLUMNS].notna().all(axis=1)
    ok &= df["occupied"].isin((0, 1))
    ok &= np.isfinite(df["lon"]) & np.isfinite(df["lat"]) & np.isfinite(df["speed"])
    malformed += int((~ok).sum())
    df = df[ok]
    out = pd.DataFrame(
        {
            "ts": df["ts"].astype(np.int64),
            "taxi_id": df["taxi_id"].astype(np.int64),
            "lon": df["lon"].astype(np.float64),
            "lat": df["lat"].astype(np.float64),
            "speed": df["speed"].astype(np.float64),
            "heading": df["heading"].astype(np.float64),
            "occupied": df["occupied"].astype(np.int8),
        }
    )
    return out, malformed


# ---------------------------------------------------------------------------
# cleaning (expects (taxi_id, ts)-sorted arrays)
# ---------------------------------------------------------------------------

def clean_sorted_arrays(cols: dict, rules: CleaningRules) -> tuple[dict, dict]:
    """Drop out-of-bbox, over-speed, and duplicate (taxi_id, ts) rows."""
    counters = _empty_counters()
    n = len(cols["ts"])
    counters["records_read"] = n
    if n == 0:
        return cols, counters
    min_lon, min_lat, max_lon, max_lat = rules.bbox
    lon, lat = cols["lon"], cols["lat"]
    in_bbox = (lon >= min_lon) & (lon <= max_lon) & (lat >= min_lat) & (lat <= max_lat)
    ok_speed = cols["speed"] <= rules.max_speed_kmh
    dup = np.zeros(n, dtype=bool)
    dup[1:] = (cols["taxi_id"][1:] == cols["taxi_id"][:-1]) & (cols["ts"][1:] == cols["ts"][:-1])
    counters["out_of_bbox"] = int((~in_bbox).sum())
    counters["over_speed"] = int((in_bbox & ~ok_speed).sum())
    counters["duplicate"] = int((in_bbox & ok_speed & dup).sum())
    keep = in_bbox & ok_speed & ~dup
    return {c: v[keep] for c, v in cols.items()}, counters


# ---------------------------------------------------------------------------
# run location and trip extraction
# ---------------------------------------------------------------------------

def _locate_runs(taxi: np.ndarray, ts: np.ndarray, occ: np.ndarray):
    n = len(taxi)
    new_taxi = np.empty(n, dtype=bool)
    new_taxi[0] = True
    np.not_equal(taxi[1:], taxi[:-1], out=new_taxi[1:])

    unsorted = (~new_taxi[1:]) & (ts[1:] < ts[:-1])
    if unsorted.any():
        i = int(np.nonzero(unsorted)[0][0]) + 1
        raise OrderingError(f"GPS stream not time-sorted for taxi {int(taxi[i])} at ts {int(ts[i])}")

    occ_b = occ.astype(bool)
    prev_occ = np.empty(n, dtype=bool)
    prev_occ[0] = False
    prev_occ[1:] = occ_b[:-1]
    next_occ = np.empty(n, dtype=bool)
    next_occ[-1] = False
    next_occ[:-1] = occ_b[1:]
    next_new = np.empty(n, dtype=bool)
    next_new[-1] = True
    next_new[:-1] = new_taxi[1:]

    start = occ_b & (new_taxi | ~prev_occ)
    end = occ_b & (next_new | ~next_occ)
    starts = np.nonzero(start)[0]
    ends = np.nonzero(end)[0]
    open_start = new_taxi[starts]
    open_end = next_new[ends]
    return starts, ends, open_start, open_end, occ_b


def _downsample_vacant(taxi: np.ndarray, ts: np.ndarray, min_gap_s: int = 60) -> np.ndarray:
    """Greedy per-taxi thinning: consecutive retained samples >= min_gap_s apart."""
    n = len(ts)
    keep = np.zeros(n, dtype=bool)
    t_list = ts.tolist()
    x_list = taxi.tolist()
    last_taxi = None
    last_ts = 0
    for i in range(n):
        tx = x_list[i]
        t = t_list[i]
        if tx != last_taxi or t - last_ts >= min_gap_s:
            keep[i] = True
            last_taxi = tx
            last_ts = t
    return keep


def extract_trips_arrays(
    cols: dict, poi_index: PoiIndex, rules: CleaningRules, cfg: GridConfig
) -> tuple[np.ndarray, np.ndarray, dict]:
    """Extract trips and vacant samples from cleaned, (taxi, ts)-sorted arrays."""
    counters = _empty_counters()
    n = len(cols["ts"])
    if n == 0:
        return np.empty(0, TRIP_DTYPE), np.empty(0, VACANT_DTYPE), counters

    taxi, ts = cols["taxi_id"], cols["ts"]
    starts, ends, open_start, open_end, occ_b = _locate_runs(taxi, ts, cols["occupied"])
    counters["runs_observed"] = len(starts)
    counters["leading_runs"] = int(open_start.sum())
    counters["open_runs_at_end"] = int((~open_start & open_end).sum())

    closed = ~open_start & ~open_end
    s_idx, e_idx = starts[closed], ends[closed]
    dur = ts[e_idx] - ts[s_idx]
    sx, sy = project_arrays(cols["lon"][s_idx], cols["lat"][s_idx], cfg)
    ex, ey = project_arrays(cols["lon"][e_idx], cols["lat"][e_idx], cfg)
    dx, dy = ex - sx, ey - sy
    dist = np.sqrt(dx * dx + dy * dy)

    short = dur < rules.min_trip_s
    long_ = ~short & (dur > rules.max_trip_s)
    near = ~short & ~long_ & (dist < rules.min_trip_m)
    counters["short_trip"] = int(short.sum())
    counters["long_trip"] = int(long_.sum())
    counters["short_distance"] = int(near.sum())
    keep = ~(short | long_ | near)
    s_idx, e_idx = s_idx[keep], e_idx[keep]
    sx, sy, ex, ey, dur = sx[keep], sy[keep], ex[keep], ey[keep], dur[keep]

    trips = np.empty(len(s_idx), dtype=TRIP_DTYPE)
    trips["taxi_id"] = taxi[s_idx]
    trips["stime"] = ts[s_idx]
    trips["slon"] = cols["lon"][s_idx]
    trips["slat"] = cols["lat"][s_idx]
    trips["etime"] = ts[e_idx]
    trips["elon"] = cols["lon"][e_idx]
    trips["elat"] = cols["lat"][e_idx]
    trips["duration_s"] = dur
    if len(s_idx):
        trips["c_o"] = poi_index.cat_codes[poi_index.nearest_idx_arrays(sx, sy)]
        trips["c_d"] = poi_index.cat_codes[poi_index.nearest_idx_arrays(ex, ey)]
        oq, orr = xy_to_hex_arrays(sx, sy, cfg)
        dq, drr = xy_to_hex_arrays(ex, ey, cfg)
        trips["o_q"], trips["o_r"] = oq.astype(np.int32), orr.astype(np.int32)
        trips["d_q"], trips["d_r"] = dq.astype(np.int32), drr.astype(np.int32)
    counters["trips_extracted"] = len(trips)

    v_rows = np.nonzero(~occ_b)[0]
    v_keep = _downsample_vacant(taxi[v_rows], ts[v_rows]) if len(v_rows) else np.empty(0, bool)
    v_rows = v_rows[v_keep]
    vacant = np.empty(len(v_rows), dtype=VACANT_DTYPE)
    vacant["ts"] = ts[v_rows]
    vacant["taxi_id"] = taxi[v_rows]
    vacant["lon"] = cols["lon"][v_rows]
    vacant["lat"] = cols["lat"][v_rows]
    vacant["speed"] = cols["speed"][v_rows]
    if len(v_rows):
        vx, vy = project_arrays(vacant["lon"], vacant["lat"], cfg)
        vq, vr = xy_to_hex_arrays(vx, vy, cfg)
        vacant["q"], vacant["r"] = vq.astype(np.int32), vr.astype(np.int32)
    counters["vacant_samples"] = len(vacant)
    return trips, vacant, counters


# ---------------------------------------------------------------------------
# record-level wrappers (spec-facing convenience surface)
# ---------------------------------------------------------------------------

def _records_to_cols(records) -> dict:
    recs = list(records)
    return {
        "ts": np.array([r.ts for r in recs], dtype=np.int64),
        "taxi_id": np.array([r.taxi_id for r in recs], dtype=np.int64),
        "lon": np.array([r.location.lon for r in recs], dtype=np.float64),
        "lat": np.array([r.location.lat for r in recs], dtype=np.float64),
        "speed": np.array([r.speed for r in recs], dtype=np.float64),
        "heading": np.array([r.heading for r in recs], dtype=np.float64),
        "occupied": np.array([1 if r.occupied else 0 for r in recs], dtype=np.int8),
    }


def clean(records, rules: CleaningRules) -> tuple[list[GpsRecord], dict]:
    """Record-level cleaning; input must be grouped by taxi and time-sorted."""
    cols = _records_to_cols(records)
    out, counters = clean_sorted_arrays(cols, rules)
    cleaned = [
        GpsRecord(
            ts=int(out["ts"][i]),
            taxi_id=int(out["taxi_id"][i]),
            location=LonLat(float(out["lon"][i]), float(out["lat"][i])),
            speed=float(out["speed"][i]),
            heading=float(out["heading"][i]),
            occupied=bool(out["occupied"][i]),
        )
        for i in range(len(out["ts"]))
    ]
    return cleaned, counters


def trips_from_array(arr: np.ndarray) -> list[Trip]:
    return [
        Trip(
            taxi_id=int(t["taxi_id"]),
            stime=int(t["stime"]),
            slocation=LonLat(float(t["slon"]), float(t["slat"])),
            etime=int(t["etime"]),
            elocation=LonLat(float(t["elon"]), float(t["elat"])),
            cO=CATEGORIES[int(t["c_o"])],
            cD=CATEGORIES[int(t["c_d"])],
            duration_s=int(t["duration_s"]),
            o_hex=HexIndex(int(t["o_q"]), int(t["o_r"])),
            d_hex=HexIndex(int(t["d_q"]), int(t["d_r"])),
        )
        for t in arr
    ]


def vacant_from_array(arr: np.ndarray) -> list[VacantSample]:
    return [
        VacantSample(
            ts=int(v["ts"]),
            taxi_id=int(v["taxi_id"]),
            location=LonLat(float(v["lon"]), float(v["lat"])),
            speed=float(v["speed"]),
        )
        for v in arr
    ]


def extract_trips(
    records, poi_index: PoiIndex, rules: CleaningRules, cfg: GridConfig
) -> tuple[list[Trip], list[VacantSample]]:
    """Record-level trip extraction over an already-cleaned, per-taxi sorted stream."""
    cols = _records_to_cols(records)
    if len(cols["ts"]) == 0:
        return [], []
    trips, vacant, _ = extract_trips_arrays(cols, poi_index, rules, cfg)
    return trips_from_array(trips), vacant_from_array(vacant)


# ---------------------------------------------------------------------------
# directory pipeline
# ---------------------------------------------------------------------------

def ingest_dir(gps_dir, poi_index: PoiIndex, config: EngineConfig, store_path, rules: CleaningRules | None = None):
    """Full pipeline: read every GPS CSV, sort, clean, extract, write a Store.

    Returns the opened Store; the run report is written inside it and also
    available as ``store.report``.
    """
    from .store import write_store  # local import to avoid a cycle

    gps_dir = Path(gps_dir)
    files = sorted(gps_dir.glob("*.csv"))
    if not files:
        raise InvalidInputError(f"no GPS CSV files in {gps_dir}")
    rules = rules or config.cleaning

    parts = []
    malformed = 0
    for f in files:
        cols, bad = read_gps_csv(f)
        malformed += bad
        parts.append(cols)
    cols = {c: np.concatenate([p[c] for p in parts]) for c in GPS_COLUMNS}
    del parts

    order = np.lexsort((cols["ts"], cols["taxi_id"]))
    cols = {c: v[order] for c, v in cols.items()}

    cols, counters = clean_sorted_arrays(cols, rules)
    counters["malformed"] = malformed
    counters["records_read"] += malformed

    trips, vacant, extract_counters = extract_trips_arrays(cols, poi_index, rules, config.grid)
    for k, v in extract_counters.items():
        if k not in ("records_read",):
            counters[k] += v

    report = {"files": [f.name for f in files], "counters": counters}
    if counters["trips_extracted"] == 0:
        report["warning"] = "zero trips extracted"
    return write_store(store_path, trips, vacant, poi_index, config, report)
