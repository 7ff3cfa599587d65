"""Immutable on-disk dataset of trips, vacant samples, and POIs.

Layout::

    <store>/
      manifest.json            version, config + hash, per-date row counts
      report.json              ingest run report (optional)
      pois.csv                 id,lon,lat,name,address,category,raw_category
      trips_pickup/<date>.npy  trips whose pick-up falls on <date> (local time)
      trips_dropoff/<date>.npy trips whose drop-off falls on <date>
      vacant/<date>.npy        vacant samples on <date>

Each .npy holds one structured array (TRIP_DTYPE / VACANT_DTYPE), sorted by
(hex, time, taxi) so per-cell scans are contiguous. Writing is fully
deterministic: identical inputs produce byte-identical files.
"""

from __future__ import annotations

import csv
import json
from datetime import date
from pathlib import Path

import numpy as np
from scipy.spatial import cKDTree

from .config import EngineConfig
from .errors import CorruptStoreError, InvalidQueryError, InvalidRadiusError
from .geo import HexIndex, LonLat, pack_hex, pack_region, project_arrays
from .ingest import TRIP_DTYPE, VACANT_DTYPE, Trip, trips_from_array
from .poi import Poi, PoiIndex

FORMAT_VERSION = 1
ROLES = ("pickup", "dropoff")
POINT_KINDS = ("pickup", "dropoff", "vacant")


def _date_str(d: date) -> str:
    return d.isoformat()


def _write_pois_csv(path: Path, idx: PoiIndex) -> None:
    with open(path, "w", encoding="utf-8", newline="") as f:
        w = csv.writer(f)
        w.writerow(["id", "lon", "lat", "name", "address", "category", "raw_category"])
        for p in idx.pois:
            w.writerow([p.id, repr(p.location.lon), repr(p.location.lat), p.name, p.address, p.category, p.raw_category])


def _read_pois_csv(path: Path, cfg) -> PoiIndex:
    pois = []
    with open(path, encoding="utf-8", newline="") as f:
        r = csv.reader(f)
        next(r)
        for row in r:
            pois.append(
                Poi(
                    id=int(row[0]),
                    location=LonLat(float(row[1]), float(row[2])),
                    name=row[3],
                    address=row[4],
                    category=row[5],
                    raw_category=row[6],
                )
            )
    return PoiIndex(pois, cfg)


def write_store(path, trips: np.ndarray, vacant: np.ndarray, poi_index: PoiIndex, config: EngineConfig, report: dict | None = None) -> "Store":
    """Persist a dataset and return the opened read-only handle."""
    path = Path(path)
    if path.exists() and any(path.iterdir()):
        raise InvalidQueryError(f"store path {path} exists and is not empty")
    for sub in ("trips_pickup", "trips_dropoff", "vacant"):
        (path / sub).mkdir(parents=True, exist_ok=True)

    dates: dict[str, dict[str, int]] = {}

    def _split_days(arr, day_idx, subdir, sort_keys, count_key):
        if len(arr) == 0:
            return
        order = np.argsort(day_idx, kind="stable")
        arr_s, day_s = arr[order], day_idx[order]
        bounds = np.nonzero(np.diff(day_s))[0] + 1
        chunks = np.split(arr_s, bounds)
        days = day_s[np.concatenate(([0], bounds))] if len(arr_s) else []
        for day, chunk in zip(days, chunks):
            d = _date_str(date.fromordinal(date(1970, 1, 1).toordinal() + int(day)))
            chunk = chunk[np.lexsort(tuple(chunk[k] for k in reversed(sort_keys)))]
            np.save(path / subdir / f"{d}.npy", chunk)
            dates.setdefault(d, {"trips_pickup": 0, "trips_dropoff": 0, "vacant": 0})[count_key] = len(chunk)

    _split_days(trips, config.day_index(trips["stime"]), "trips_pickup",
                ("o_q", "o_r", "stime", "taxi_id"), "trips_pickup")
    _split_days(trips, config.day_index(trips["etime"]), "trips_dropoff",
                ("d_q", "d_r", "etime", "taxi_id"), "trips_dropoff")
    _split_days(vacant, config.day_index(vacant["ts"]), "vacant",
                ("q", "r", "ts", "taxi_id"), "vacant")

    _write_pois_csv(path / "pois.csv", poi_index)

    manifest = {
        "format_version": FORMAT_VERSION,
        "config": config.to_dict(),
        "config_hash": config.config_hash(),
        "dates": {d: dates[d] for d in sorted(dates)},
        "totals": {
            "trips": int(len(trips)),
            "vacant": int(len(vacant)),
            "pois": len(poi_index),
        },
    }
    (path / "manifest.json").write_text(json.dumps(manifest, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    if report is not None:
        (path / "report.json").write_text(json.dumps(report, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    return Store.open(path)


class Store:
    """Read-only handle over a written store; all queries are pure."""

    def __init__(self, path: Path, manifest: dict, config: EngineConfig, poi_index: PoiIndex, report: dict | None):
        self.path = path
        self.manifest = manifest
        self.config = config
        self.poi_index = poi_index
        self.report = report
        self._day_cache: dict[tuple[str, str], np.ndarray] = {}
        self._kd_cache: dict = {}

    # -- lifecycle --

    @classmethod
    def open(cls, path) -> "Store":
        path = Path(path)
        mpath = path / "manifest.json"
        if not mpath.exists():
            raise CorruptStoreError(f"missing manifest at {mpath}")
        try:
            manifest = json.loads(mpath.read_text(encoding="utf-8"))
        except json.JSONDecodeError as e:
            raise CorruptStoreError(f"unparseable manifest at {mpath}: {e}") from None
        if manifest.get("format_version") != FORMAT_VERSION:
            raise CorruptStoreError(f"unsupported store format {manifest.get('format_version')}")
        config = EngineConfig.from_dict(manifest["config"])
        if config.config_hash() != manifest.get("config_hash"):
            raise CorruptStoreError("config hash mismatch: store written under a different configuration")

        totals = {"trips_pickup": 0, "trips_dropoff": 0, "vacant": 0}
        for d, counts in manifest["dates"].items():
            for sub in ("trips_pickup", "trips_dropoff", "vacant"):
                expected = counts.get(sub, 0)
                totals[sub] += expected
                f = path / sub / f"{d}.npy"
                if expected == 0:
                    continue
                if not f.exists():
                    raise CorruptStoreError(f"missing shard {f}")
                rows = len(np.load(f, mmap_mode="r"))
                if rows != expected:
                    raise CorruptStoreError(f"shard {f} has {rows} rows, manifest says {expected}")
        if totals["trips_pickup"] != manifest["totals"]["trips"] or totals["trips_dropoff"] != manifest["totals"]["trips"]:
            raise CorruptStoreError("per-date trip counts do not sum to the manifest total")
        if totals["vacant"] != manifest["totals"]["vacant"]:
            raise CorruptStoreError("per-date vacant counts do not sum to the manifest total")

        poi_index = _read_pois_csv(path / "pois.csv", config.grid)
        if len(poi_index) != manifest["totals"]["pois"]:
            raise CorruptStoreError("POI catalog count does not match the manifest")
        report = None
        rpath = path / "report.json"
        if rpath.exists():
            report = json.loads(rpath.read_text(encoding="utf-8"))
        return cls(path, manifest, config, poi_index, report)

    # -- basics --

    @property
    def dates(self) -> list[date]:
        return [date.fromisoformat(d) for d in self.manifest["dates"]]

    def trip_count(self, d: date, role: str = "pickup") -> int:
        key = "trips_pickup" if role == "pickup" else "trips_dropoff"
        return self.manifest["dates"].get(_date_str(d), {}).get(key, 0)

    def day_array(self, d: date, kind: str) -> np.ndarray:
        """Load (and cache) one day shard; empty array when the date has no data."""
        sub = {"pickup": "trips_pickup", "dropoff": "trips_dropoff", "vacant": "vacant"}[kind]
        key = (sub, _date_str(d))
        if key not in self._day_cache:
            f = self.path / sub / f"{_date_str(d)}.npy"
            counts = self.manifest["dates"].get(_date_str(d), {})
            if counts.get(sub, 0) == 0:
                arr = np.empty(0, TRIP_DTYPE if kind != "vacant" else VACANT_DTYPE)
            else:
                if not f.exists():
                    raise CorruptStoreError(f"missing shard {f}")
                arr = np.load(f)
            self._day_cache[key] = arr
        return self._day_cache[key]

    # -- queries --

    def trips_by(self, region, d: date, role: str) -> list[Trip]:
        """Trips whose o_hex (pickup) / d_hex (dropoff) is in the region on date d."""
        if role not in ROLES:
            raise InvalidQueryError(f"role must be one of {ROLES}, got {role!r}")
        keys = pack_region(region)
        if len(keys) == 0:
            raise InvalidQueryError("region must be non-empty")
        arr = self.day_array(d, role)
        if len(arr) == 0:
            return []
        if role == "pickup":
            cell_keys = pack_hex(arr["o_q"], arr["o_r"])
            tcol = "stime"
        else:
            cell_keys = pack_hex(arr["d_q"], arr["d_r"])
            tcol = "etime"
        sub = arr[np.isin(cell_keys, keys)]
        sub = sub[np.lexsort((sub["taxi_id"], sub[tcol]))]
        return trips_from_array(sub)

    def _point_columns(self, d: date, kind: str):
        """(ts, taxi_id, lon, lat, speed) arrays for one day and kind."""
        if kind == "pickup":
            a = self.day_array(d, "pickup")
            return a["stime"], a["taxi_id"], a["slon"], a["slat"], np.zeros(len(a))
        if kind == "dropoff":
            a = self.day_array(d, "dropoff")
            return a["etime"], a["taxi_id"], a["elon"], a["elat"], np.zeros(len(a))
        if kind == "vacant":
            a = self.day_array(d, "vacant")
            return a["ts"], a["taxi_id"], a["lon"], a["lat"], a["speed"]
        raise InvalidQueryError(f"kind must be one of {POINT_KINDS}, got {kind!r}")

    def window_points(self, window: tuple[int, int], kind: str):
        """Concatenated point columns for every stored date overlapping the window."""
        t0, t1 = int(window[0]), int(window[1])
        if t0 > t1:
            raise InvalidQueryError(f"window start {t0} is after end {t1}")
        cols = [np.empty(0, np.int64), np.empty(0, np.int64), np.empty(0, np.float64), np.empty(0, np.float64), np.empty(0, np.float64)]
        if t0 == t1:
            return tuple(cols)
        d0 = int(self.config.day_index(t0))
        d1 = int(self.config.day_index(t1 - 1))
        parts = []
        for d in self.dates:
            di = d.toordinal() - date(1970, 1, 1).toordinal()
            if d0 <= di <= d1:
                parts.append(self._point_columns(d, kind))
        if not parts:
            return tuple(cols)
        ts, taxi, lon, lat, speed = (np.concatenate([p[i] for p in parts]) for i in range(5))
        m = (ts >= t0) & (ts < t1)
        return ts[m], taxi[m], lon[m], lat[m], speed[m]

    def points_near(self, p: LonLat, radius_m: float, window: tuple[int, int], kind: str):
        """Events of ``kind`` within the closed ball and half-open time window."""
        if radius_m <= 0:
            raise InvalidRadiusError(f"radius must be > 0, got {radius_m}")
        ts, taxi, lon, lat, speed = self.window_points(window, kind)
        if len(ts) == 0:
            return []
        px, py = project_arrays(p.lon, p.lat, self.config.grid)
        x, y = project_arrays(lon, lat, self.config.grid)
        dx, dy = float(px) - x, float(py) - y
        d = np.sqrt(dx * dx + dy * dy)
        m = d <= radius_m
        idx = np.nonzero(m)[0]
        idx = idx[np.lexsort((taxi[idx], ts[idx]))]
        return [
            (int(ts[i]), int(taxi[i]), LonLat(float(lon[i]), float(lat[i])), float(speed[i]))
            for i in idx
        ]

    def window_tree(self, window: tuple[int, int], kind: str):
        """cKDTree plus columns for the window's events (cached per call args)."""
        key = (int(window[0]), int(window[1]), kind)
        if key not in self._kd_cache:
            ts, taxi, lon, lat, speed = self.window_points(window, kind)
            x, y = project_arrays(lon, lat, self.config.grid)
            tree = cKDTree(np.column_stack([x, y])) if len(ts) else None
            self._kd_cache[key] = (tree, ts, taxi, x, y, speed)
        return self._kd_cache[key]

    def day_window(self, d: date) -> tuple[int, int]:
        t0 = self.config.day_start_ts(d)
        return (t0, t0 + 86400)
