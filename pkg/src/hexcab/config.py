"""Global engine configuration: grid geometry, cleaning rules, study timezone.

One JSON file configures every pipeline stage. The config is hashed into the
store manifest so a store can refuse to open under a different configuration.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path

from .geo import GridConfig, LonLat

_EPOCH_ORDINAL = date(1970, 1, 1).toordinal()


@dataclass(frozen=True)
class CleaningRules:
    """Thresholds that define abnormal records and abnormal occupancy runs."""

    bbox: tuple[float, float, float, float]
    min_trip_s: int = 60
    max_trip_s: int = 10800
    min_trip_m: float = 200.0
    max_speed_kmh: float = 200.0

    def __post_init__(self):
        if not self.min_trip_s < self.max_trip_s:
            raise ValueError("min_trip_s must be < max_trip_s")
        if self.min_trip_m < 0 or self.max_speed_kmh <= 0:
            raise ValueError("min_trip_m must be >= 0 and max_speed_kmh > 0")


@dataclass(frozen=True)
class EngineConfig:
    origin_lon: float
    origin_lat: float
    hex_width_m: float = 400.0
    bbox: tuple[float, float, float, float] = (-180.0, -90.0, 180.0, 90.0)
    tz_offset_hours: float = 8.0
    min_trip_s: int = 60
    max_trip_s: int = 10800
    min_trip_m: float = 200.0
    max_speed_kmh: float = 200.0
    poi_donut_radius_m: float = 200.0
    score_coverage_m: float = 500.0
    glyph_sectors: int = 8

    @property
    def grid(self) -> GridConfig:
        return GridConfig(
            origin=LonLat(self.origin_lon, self.origin_lat),
            width_m=self.hex_width_m,
            bbox=self.bbox,
        )

    @property
    def cleaning(self) -> CleaningRules:
        return CleaningRules(
            bbox=self.bbox,
            min_trip_s=self.min_trip_s,
            max_trip_s=self.max_trip_s,
            min_trip_m=self.min_trip_m,
            max_speed_kmh=self.max_speed_kmh,
        )

    @property
    def tz_offset_s(self) -> int:
        return int(round(self.tz_offset_hours * 3600))

    # -- local-time helpers (fixed-offset study timezone) --

    def day_index(self, ts) -> "int | object":
        """Days since epoch of the local calendar date containing ``ts``."""
        return (ts + self.tz_offset_s) // 86400

    def local_hour(self, ts):
        return ((ts + self.tz_offset_s) % 86400) // 3600

    def date_of_ts(self, ts: int) -> date:
        return date.fromordinal(_EPOCH_ORDINAL + int(self.day_index(ts)))

    def day_start_ts(self, d: date) -> int:
        """UTC epoch second at local midnight of date ``d``."""
        return (d.toordinal() - _EPOCH_ORDINAL) * 86400 - self.tz_offset_s

    def date_range(self, d0: date, d1: date) -> list[date]:
        return [d0 + timedelta(days=i) for i in range((d1 - d0).days + 1)]

    # -- serialization --

    def to_dict(self) -> dict:
        return {
            "origin_lon": self.origin_lon,
            "origin_lat": self.origin_lat,
            "hex_width_m": self.hex_width_m,
            "bbox": list(self.bbox),
            "tz_offset_hours": self.tz_offset_hours,
            "min_trip_s": self.min_trip_s,
            "max_trip_s": self.max_trip_s,
            "min_trip_m": self.min_trip_m,
            "max_speed_kmh": self.max_speed_kmh,
            "poi_donut_radius_m": self.poi_donut_radius_m,
            "score_coverage_m": self.score_coverage_m,
            "glyph_sectors": self.glyph_sectors,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "EngineConfig":
        d = dict(d)
        if "bbox" in d:
            d["bbox"] = tuple(d["bbox"])
        return cls(**d)

    @classmethod
    def load(cls, path) -> "EngineConfig":
        with open(path, encoding="utf-8") as f:
            return cls.from_dict(json.load(f))

    def save(self, path) -> None:
        Path(path).write_text(
            json.dumps(self.to_dict(), indent=2, sort_keys=True) + "\n", encoding="utf-8"
        )

    def config_hash(self) -> str:
        canon = json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))
        return hashlib.sha256(canon.encode("utf-8")).hexdigest()
