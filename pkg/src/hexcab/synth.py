"""Seeded synthetic fleet generator: GPS traces with planted ground truth.

Produces everything the pipeline consumes: a POI catalog with raw categories,
the category map, the engine config, per-day GPS CSVs with interleaved vacant
cruising and occupied runs, and a truth file listing every planted trip along
with the cleaning-rule exclusions the extractor is expected to apply.

Taxis follow straight waypoint paths between POI-anchored demand points with
Gaussian positional noise on intermediate samples; trip endpoints are written
exactly, so extraction can recover the planted OD records bit-for-bit.
All coordinates are rounded to 6 decimals before anything (CSV, truth,
exclusion decisions) sees them, which keeps the two sides consistent.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass, field
from datetime import date, timedelta
from pathlib import Path

import numpy as np
import pandas as pd

from .config import EngineConfig
from .geo import project_arrays
from .poi import CATEGORIES

RAW_SUBTYPES = {
    "company": ("office_park", "corporate_hq", "industrial_estate"),
    "education": ("primary_school", "university", "kindergarten"),
    "entertainment": ("restaurant", "shopping_mall", "cinema", "tourist_park"),
    "living": ("residential_estate", "apartment_block", "dormitory"),
    "public_service": ("government_office", "civic_center", "hospital"),
    "traffic": ("bus_stop", "subway_station", "parking_lot", "coach_terminal"),
}

POI_CATEGORY_SHARES = {
    "company": 0.20,
    "education": 0.10,
    "entertainment": 0.20,
    "living": 0.30,
    "public_service": 0.08,
    "traffic": 0.12,
}

ORIGIN_CATEGORY_WEIGHTS = {
    "company": 2.0, "education": 1.0, "entertainment": 1.5,
    "living": 3.0, "public_service": 0.5, "traffic": 2.0,
}

DEST_CATEGORY_WEIGHTS = {
    "company": 1.5, "education": 1.0, "entertainment": 2.5,
    "living": 2.5, "public_service": 0.7, "traffic": 1.5,
}

# relative trip demand per local hour: morning and evening rush
DEFAULT_HOUR_WEIGHTS = (
    1.5, 1.0, 0.7, 0.5, 0.5, 0.8,
    1.5, 2.5, 3.0, 2.2, 1.8, 1.8,
    2.0, 1.8, 1.7, 1.8, 2.0, 2.6,
    3.0, 2.6, 2.2, 2.0, 1.9, 1.7,
)


@dataclass(frozen=True)
class SynthSpec:
    start: date
    days: int
    taxis: int
    trips_per_day: int
    seed: int = 0
    weekend_uplift: float = 1.3
    hour_weights: tuple = DEFAULT_HOUR_WEIGHTS
    n_pois: int = 2000
    demand_clusters: int = 8
    occupied_sample_s: int | None = 30
    cruise_sample_s: int | None = 300
    gap_min_s: int = 90
    duration_median_s: float = 420.0
    duration_sigma: float = 0.55
    exclusions_per_day: int = 3

    def __post_init__(self):
        if min(self.days, self.taxis, self.trips_per_day, self.n_pois) <= 0:
            raise ValueError("days, taxis, trips_per_day, n_pois must all be > 0")


def default_engine_config() -> EngineConfig:
    return EngineConfig(
        origin_lon=114.0,
        origin_lat=22.5,
        hex_width_m=400.0,
        bbox=(113.85, 22.35, 114.15, 22.65),
        tz_offset_hours=8.0,
    )


def _round6(a):
    return np.round(a, 6)


def _generate_pois(rng, spec: SynthSpec, engine: EngineConfig):
    min_lon, min_lat, max_lon, max_lat = engine.bbox
    margin_lon = 1000.0 / engine.grid.meters_per_deg_lon
    margin_lat = 1000.0 / engine.grid.meters_per_deg_lat
    lo_lon, hi_lon = min_lon + margin_lon, max_lon - margin_lon
    lo_lat, hi_lat = min_lat + margin_lat, max_lat - margin_lat

    k = spec.demand_clusters
    c_lon = rng.uniform(lo_lon + 0.02, hi_lon - 0.02, size=k)
    c_lat = rng.uniform(lo_lat + 0.02, hi_lat - 0.02, size=k)
    n = spec.n_pois
    cluster = rng.integers(0, k, size=n)
    sigma_lon = 1500.0 / engine.grid.meters_per_deg_lon
    sigma_lat = 1500.0 / engine.grid.meters_per_deg_lat
    lon = c_lon[cluster] + rng.normal(0, sigma_lon, size=n)
    lat = c_lat[cluster] + rng.normal(0, sigma_lat, size=n)
    uniform = rng.random(n) < 0.2
    lon[uniform] = rng.uniform(lo_lon, hi_lon, size=int(uniform.sum()))
    lat[uniform] = rng.uniform(lo_lat, hi_lat, size=int(uniform.sum()))
    lon = _round6(np.clip(lon, lo_lon, hi_lon))
    lat = _round6(np.clip(lat, lo_lat, hi_lat))

    cats = list(POI_CATEGORY_SHARES)
    shares = np.array([POI_CATEGORY_SHARES[c] for c in cats])
    cat_idx = rng.choice(len(cats), size=n, p=shares / shares.sum())
    cat_names = np.array(cats, dtype=object)[cat_idx]
    raw_names = np.array(
        [RAW_SUBTYPES[c][int(rng.integers(0, len(RAW_SUBTYPES[c])))] for c in cat_names],
        dtype=object,
    )
    return lon, lat, cat_names, raw_names


def _write_poi_files(out_dir: Path, lon, lat, cat_names, raw_names):
    rows = pd.DataFrame(
        {
            "lon": lon,
            "lat": lat,
            "name": [f"{raw} {i}" for i, raw in enumerate(raw_names)],
            "address": [f"{i} synth ave" for i in range(len(lon))],
            "raw_category": raw_names,
        }
    )
    rows.to_csv(out_dir / "poi.csv", index=False, float_format="%.6f")
    lines = [f"{raw},{canon}" for canon in CATEGORIES for raw in RAW_SUBTYPES[canon]]
    (out_dir / "category_map.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")


def _draw_day_trips(rng, spec: SynthSpec, engine: EngineConfig, d: date,
                    poi_lon, poi_lat, origin_p, dest_p):
    """Drawn (not yet taxi-assigned) trips for one day, including planted exclusions."""
    target = spec.trips_per_day
    if d.weekday() >= 5:
        target = int(round(spec.trips_per_day * spec.weekend_uplift))
    w = np.asarray(spec.hour_weights, dtype=np.float64)
    hours = rng.choice(24, size=target, p=w / w.sum())
    secs = rng.integers(0, 3600, size=target)
    day_ts = engine.day_start_ts(d)
    stimes = day_ts + hours * 3600 + secs

    dur = rng.lognormal(math.log(spec.duration_median_s), spec.duration_sigma, size=target)
    dur = np.clip(dur, 75, 3500).astype(np.int64)

    o_idx = rng.choice(len(poi_lon), size=target, p=origin_p)
    d_idx = rng.choice(len(poi_lon), size=target, p=dest_p)
    sigma_lon = 80.0 / engine.grid.meters_per_deg_lon
    sigma_lat = 80.0 / engine.grid.meters_per_deg_lat
    olon = poi_lon[o_idx] + rng.normal(0, sigma_lon, target)
    olat = poi_lat[o_idx] + rng.normal(0, sigma_lat, target)
    dlon = poi_lon[d_idx] + rng.normal(0, sigma_lon, target)
    dlat = poi_lat[d_idx] + rng.normal(0, sigma_lat, target)

    # redraw destinations that land closer than a safe 280 m to the origin
    for _ in range(40):
        ox, oy = project_arrays(olon, olat, engine.grid)
        dx, dy = project_arrays(dlon, dlat, engine.grid)
        too_close = np.hypot(dx - ox, dy - oy) < 280.0
        if not too_close.any():
            break
        m = int(too_close.sum())
        redraw = rng.choice(len(poi_lon), size=m, p=dest_p)
        dlon[too_close] = poi_lon[redraw] + rng.normal(0, sigma_lon, m)
        dlat[too_close] = poi_lat[redraw] + rng.normal(0, sigma_lat, m)

    olon, olat, dlon, dlat = map(_round6, (olon, olat, dlon, dlat))

    # planted rule violations: one short run, one long run, one zero-distance run
    n_exc = spec.exclusions_per_day
    if n_exc:
        exc_kinds = ["short_trip", "long_trip", "short_distance"] * ((n_exc + 2) // 3)
        exc_kinds = exc_kinds[:n_exc]
        e_st = day_ts + rng.integers(8 * 3600, 20 * 3600, size=n_exc)
        e_o = rng.choice(len(poi_lon), size=n_exc, p=origin_p)
        e_olon = _round6(poi_lon[e_o] + rng.normal(0, sigma_lon, n_exc))
        e_olat = _round6(poi_lat[e_o] + rng.normal(0, sigma_lat, n_exc))
        e_dur = np.empty(n_exc, dtype=np.int64)
        e_dlon, e_dlat = np.empty(n_exc), np.empty(n_exc)
        for i, kind in enumerate(exc_kinds):
            if kind == "short_trip":
                e_dur[i] = 30
                far = rng.choice(len(poi_lon), p=dest_p)
                e_dlon[i], e_dlat[i] = poi_lon[far], poi_lat[far]
            elif kind == "long_trip":
                e_dur[i] = engine.max_trip_s + 3600
                far = rng.choice(len(poi_lon), p=dest_p)
                e_dlon[i], e_dlat[i] = poi_lon[far], poi_lat[far]
            else:  # zero distance
                e_dur[i] = 300
                e_dlon[i], e_dlat[i] = e_olon[i], e_olat[i]
        stimes = np.concatenate([stimes, e_st])
        dur = np.concatenate([dur, e_dur])
        olon = np.concatenate([olon, e_olon])
        olat = np.concatenate([olat, e_olat])
        dlon = np.concatenate([dlon, _round6(e_dlon)])
        dlat = np.concatenate([dlat, _round6(e_dlat)])

    return stimes, dur, olon, olat, dlon, dlat


def _assign_taxis(spec: SynthSpec, stimes, durations):
    """Greedy earliest-free assignment; returns (taxi_id, actual_stime) per trip."""
    order = np.argsort(stimes, kind="stable")
    heap = [(0, taxi) for taxi in range(1, spec.taxis + 1)]
    heapq.heapify(heap)
    taxi_of = np.empty(len(stimes), dtype=np.int64)
    actual = np.empty(len(stimes), dtype=np.int64)
    gap = spec.gap_min_s
    for i in order.tolist():
        free_at, taxi = heapq.heappop(heap)
        st = stimes[i] if stimes[i] >= free_at else free_at
        taxi_of[i] = taxi
        actual[i] = st
        heapq.heappush(heap, (int(st + durations[i] + gap), taxi))
    return taxi_of, actual


def _classify_exclusions(engine: EngineConfig, dur, dist):
    """Reason codes matching the extractor's precedence: 0 keep, 1 short, 2 long, 3 near."""
    reason = np.zeros(len(dur), dtype=np.int8)
    reason[dur < engine.min_trip_s] = 1
    reason[(reason == 0) & (dur > engine.max_trip_s)] = 2
    reason[(reason == 0) & (dist < engine.min_trip_m)] = 3
    return reason


REASON_NAMES = {0: "", 1: "short_trip", 2: "long_trip", 3: "short_distance"}


def _occupied_records(rng, spec, engine, taxi, st, et, olon, olat, dlon, dlat):
    n = len(st)
    dur = et - st
    if spec.occupied_sample_s:
        k_per = np.maximum(1, np.ceil(dur / spec.occupied_sample_s).astype(np.int64))
    else:
        k_per = np.ones(n, dtype=np.int64)
    base = np.repeat(np.arange(n), k_per)
    k = np.arange(k_per.sum()) - np.repeat(np.cumsum(k_per) - k_per, k_per)
    step = spec.occupied_sample_s or 0
    ts = st[base] + k * step
    frac = (ts - st[base]) / dur[base]
    lon = olon[base] + (dlon - olon)[base] * frac
    lat = olat[base] + (dlat - olat)[base] * frac
    mid = k > 0
    sigma_lon = 10.0 / engine.grid.meters_per_deg_lon
    sigma_lat = 10.0 / engine.grid.meters_per_deg_lat
    lon[mid] += rng.normal(0, sigma_lon, int(mid.sum()))
    lat[mid] += rng.normal(0, sigma_lat, int(mid.sum()))
    # final sample exactly at the drop-off
    ts = np.concatenate([ts, et])
    lon = np.concatenate([_round6(lon), dlon])
    lat = np.concatenate([_round6(lat), dlat])
    taxis = np.concatenate([taxi[base], taxi])
    # endpoint samples carry the exact planted coordinates
    lon[: len(base)][~mid] = olon[base][~mid]
    lat[: len(base)][~mid] = olat[base][~mid]
    speed = _round1(rng.uniform(20, 70, len(ts)))
    heading = _round1(rng.uniform(0, 360, len(ts)))
    occupied = np.ones(len(ts), dtype=np.int8)
    return ts, taxis, lon, lat, speed, heading, occupied


def _round1(a):
    return np.round(a, 1)


def _gap_records(rng, spec, engine, g_taxi, g_start, g_end, s_lon, s_lat, e_lon, e_lat):
    """Vacant cruising samples strictly inside each gap, at least one per gap."""
    length = g_end - g_start
    if spec.cruise_sample_s:
        count = np.maximum(1, (length - 1) // spec.cruise_sample_s)
    else:
        count = np.ones(len(g_start), dtype=np.int64)
    base = np.repeat(np.arange(len(g_start)), count)
    j = np.arange(count.sum()) - np.repeat(np.cumsum(count) - count, count) + 1
    if spec.cruise_sample_s:
        offs = j * spec.cruise_sample_s
        single = count[base] == 1
        offs = np.where(single, length[base] // 2, offs)
    else:
        offs = length[base] // 2
    ts = g_start[base] + offs
    frac = offs / length[base]
    sigma_lon = 15.0 / engine.grid.meters_per_deg_lon
    sigma_lat = 15.0 / engine.grid.meters_per_deg_lat
    lon = s_lon[base] + (e_lon - s_lon)[base] * frac + rng.normal(0, sigma_lon, len(ts))
    lat = s_lat[base] + (e_lat - s_lat)[base] * frac + rng.normal(0, sigma_lat, len(ts))
    min_lon, min_lat, max_lon, max_lat = engine.bbox
    lon = _round6(np.clip(lon, min_lon + 1e-4, max_lon - 1e-4))
    lat = _round6(np.clip(lat, min_lat + 1e-4, max_lat - 1e-4))
    speed = _round1(rng.uniform(0, 60, len(ts)))
    heading = _round1(rng.uniform(0, 360, len(ts)))
    occupied = np.zeros(len(ts), dtype=np.int8)
    return ts, g_taxi[base], lon, lat, speed, heading, occupied


def generate(spec: SynthSpec, out_dir, engine: EngineConfig | None = None) -> dict:
    """Generate the full synthetic dataset under ``out_dir``; returns a summary."""
    engine = engine or default_engine_config()
    out_dir = Path(out_dir)
    gps_dir = out_dir / "gps"
    gps_dir.mkdir(parents=True, exist_ok=True)
    rng = np.random.default_rng(spec.seed)

    poi_lon, poi_lat, cat_names, raw_names = _generate_pois(rng, spec, engine)
    _write_poi_files(out_dir, poi_lon, poi_lat, cat_names, raw_names)
    engine.save(out_dir / "config.json")

    origin_w = np.array([ORIGIN_CATEGORY_WEIGHTS[c] for c in cat_names])
    dest_w = np.array([DEST_CATEGORY_WEIGHTS[c] for c in cat_names])
    origin_p = origin_w / origin_w.sum()
    dest_p = dest_w / dest_w.sum()

    all_st, all_dur, all_olon, all_olat, all_dlon, all_dlat = [], [], [], [], [], []
    for i in range(spec.days):
        d = spec.start + timedelta(days=i)
        st, dur, olon, olat, dlon, dlat = _draw_day_trips(
            rng, spec, engine, d, poi_lon, poi_lat, origin_p, dest_p
        )
        all_st.append(st)
        all_dur.append(dur)
        all_olon.append(olon)
        all_olat.append(olat)
        all_dlon.append(dlon)
        all_dlat.append(dlat)
    st = np.concatenate(all_st)
    dur = np.concatenate(all_dur)
    olon, olat = np.concatenate(all_olon), np.concatenate(all_olat)
    dlon, dlat = np.concatenate(all_dlon), np.concatenate(all_dlat)

    taxi, st = _assign_taxis(spec, st, dur)
    et = st + dur

    ox, oy = project_arrays(olon, olat, engine.grid)
    dx, dy = project_arrays(dlon, dlat, engine.grid)
    dist = np.sqrt((dx - ox) ** 2 + (dy - oy) ** 2)
    reason = _classify_exclusions(engine, dur, dist)

    occ = _occupied_records(rng, spec, engine, taxi, st, et, olon, olat, dlon, dlat)

    order = np.lexsort((st, taxi))
    t_s, st_s, et_s = taxi[order], st[order], et[order]
    olon_s, olat_s = olon[order], olat[order]
    dlon_s, dlat_s = dlon[order], dlat[order]
    same = t_s[1:] == t_s[:-1]
    first = np.concatenate(([True], ~same))
    last = np.concatenate((~same, [True]))

    inner = (
        t_s[:-1][same], et_s[:-1][same], st_s[1:][same],
        dlon_s[:-1][same], dlat_s[:-1][same], olon_s[1:][same], olat_s[1:][same],
    )
    lead_len = rng.integers(240, 600, size=int(first.sum()))
    leading = (
        t_s[first], st_s[first] - lead_len, st_s[first],
        _round6(olon_s[first] + rng.normal(0, 0.002, int(first.sum()))),
        _round6(olat_s[first] + rng.normal(0, 0.002, int(first.sum()))),
        olon_s[first], olat_s[first],
    )
    trail_len = rng.integers(150, 400, size=int(last.sum()))
    trailing = (
        t_s[last], et_s[last], et_s[last] + trail_len,
        dlon_s[last], dlat_s[last],
        _round6(dlon_s[last] + rng.normal(0, 0.002, int(last.sum()))),
        _round6(dlat_s[last] + rng.normal(0, 0.002, int(last.sum()))),
    )
    g_taxi = np.concatenate([x[0] for x in (inner, leading, trailing)])
    g_start = np.concatenate([x[1] for x in (inner, leading, trailing)]).astype(np.int64)
    g_end = np.concatenate([x[2] for x in (inner, leading, trailing)]).astype(np.int64)
    g_slon = np.concatenate([x[3] for x in (inner, leading, trailing)])
    g_slat = np.concatenate([x[4] for x in (inner, leading, trailing)])
    g_elon = np.concatenate([x[5] for x in (inner, leading, trailing)])
    g_elat = np.concatenate([x[6] for x in (inner, leading, trailing)])
    vac = _gap_records(rng, spec, engine, g_taxi, g_start, g_end, g_slon, g_slat, g_elon, g_elat)

    ts = np.concatenate([occ[0], vac[0]])
    taxis = np.concatenate([occ[1], vac[1]])
    lon = np.concatenate([occ[2], vac[2]])
    lat = np.concatenate([occ[3], vac[3]])
    speed = np.concatenate([occ[4], vac[4]])
    heading = np.concatenate([occ[5], vac[5]])
    occupied = np.concatenate([occ[6], vac[6]])

    # generator self-check: (taxi, ts) must be unique across all records
    o2 = np.lexsort((ts, taxis))
    dup = (taxis[o2][1:] == taxis[o2][:-1]) & (ts[o2][1:] == ts[o2][:-1])
    if dup.any():
        raise AssertionError("generator produced duplicate (taxi, ts) records")

    day_idx = np.asarray(engine.day_index(ts))
    for day in np.unique(day_idx):
        sel = np.nonzero(day_idx == day)[0]
        sel = sel[np.lexsort((taxis[sel], ts[sel]))]
        d = date.fromordinal(date(1970, 1, 1).toordinal() + int(day))
        frame = pd.DataFrame(
            {
                "ts": ts[sel],
                "taxi_id": taxis[sel],
                "lon": lon[sel],
                "lat": lat[sel],
                "speed": speed[sel],
                "heading": heading[sel],
                "occupied": occupied[sel],
            }
        )
        frame.to_csv(gps_dir / f"{d.isoformat()}.csv", index=False, float_format="%.6f")

    t_order = np.lexsort((taxi, st))
    truth = pd.DataFrame(
        {
            "taxi_id": taxi[t_order],
            "stime": st[t_order],
            "slon": olon[t_order],
            "slat": olat[t_order],
            "etime": et[t_order],
            "elon": dlon[t_order],
            "elat": dlat[t_order],
            "excluded": (reason[t_order] > 0).astype(np.int8),
            "reason": [REASON_NAMES[int(r)] for r in reason[t_order]],
        }
    )
    truth.to_csv(out_dir / "truth.csv", index=False, float_format="%.6f")

    planted_days = {}
    tday = np.asarray(engine.day_index(st))
    for day in np.unique(tday):
        d = date.fromordinal(date(1970, 1, 1).toordinal() + int(day))
        planted_days[d.isoformat()] = int((tday == day).sum())
    return {
        "trips_planted": int(len(st)),
        "excluded": int((reason > 0).sum()),
        "per_day": planted_days,
        "records": int(len(ts)),
    }
