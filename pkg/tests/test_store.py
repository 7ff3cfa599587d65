"""Store round-trip, tamper detection, and query/oracle equivalence tests."""

import json
import math
import shutil
from datetime import date

import numpy as np
import pytest

from hexcab.errors import CorruptStoreError, InvalidQueryError, InvalidRadiusError
from hexcab.geo import HexIndex, LonLat, project
from hexcab.store import Store, write_store

from conftest import DAY0_TS, ENGINE, build_trips, build_vacant

DAY0 = date(2019, 9, 2)
DAY1 = date(2019, 9, 3)


def _trip_rows(rng, n, day_ts):
    rows = []
    for i in range(n):
        stime = day_ts + int(rng.integers(0, 80000))
        dur = int(rng.integers(120, 2400))
        slon, slat = rng.uniform(113.9, 114.1), rng.uniform(22.4, 22.6)
        elon, elat = rng.uniform(113.9, 114.1), rng.uniform(22.4, 22.6)
        rows.append((int(rng.integers(1, 40)), stime, slon, slat, stime + dur, elon, elat))
    return rows


@pytest.fixture(scope="module")
def sample_store(tmp_path_factory, poi_index):
    rng = np.random.default_rng(21)
    trips = build_trips(_trip_rows(rng, 400, DAY0_TS), poi_index, ENGINE)
    vac_rows = [
        (DAY0_TS + int(rng.integers(0, 86400)), int(rng.integers(1, 40)),
         float(rng.uniform(113.9, 114.1)), float(rng.uniform(22.4, 22.6)),
         float(rng.uniform(0, 80)))
        for _ in range(300)
    ]
    vacant = build_vacant(vac_rows, ENGINE)
    path = tmp_path_factory.mktemp("stores") / "sample"
    return write_store(path, trips, vacant, poi_index, ENGINE), trips, vacant


def all_cells_of(store, d, role="pickup"):
    arr = store.day_array(d, role)
    qcol, rcol = ("o_q", "o_r") if role == "pickup" else ("d_q", "d_r")
    return {HexIndex(int(q), int(r)) for q, r in zip(arr[qcol], arr[rcol])}


class TestOpenRoundTrip:
    def test_open_serves_identical_queries(self, sample_store, tmp_path):
        store, trips, vacant = sample_store
        reopened = Store.open(store.path)
        region = all_cells_of(store, DAY0)
        a = store.trips_by(region, DAY0, "pickup")
        b = reopened.trips_by(region, DAY0, "pickup")
        assert a == b
        assert len(a) == len(trips)

    def test_concurrent_opens_identical(self, sample_store):
        store, _, _ = sample_store
        h1, h2 = Store.open(store.path), Store.open(store.path)
        region = all_cells_of(store, DAY0)
        assert h1.trips_by(region, DAY0, "pickup") == h2.trips_by(region, DAY0, "pickup")

    def test_tampered_count_detected(self, sample_store, tmp_path):
        store, _, _ = sample_store
        bad = tmp_path / "tampered"
        shutil.copytree(store.path, bad)
        m = json.loads((bad / "manifest.json").read_text())
        d = next(iter(m["dates"]))
        m["dates"][d]["trips_pickup"] += 1
        m["totals"]["trips"] += 1
        (bad / "manifest.json").write_text(json.dumps(m))
        with pytest.raises(CorruptStoreError):
            Store.open(bad)

    def test_tampered_config_detected(self, sample_store, tmp_path):
        store, _, _ = sample_store
        bad = tmp_path / "tampered_cfg"
        shutil.copytree(store.path, bad)
        m = json.loads((bad / "manifest.json").read_text())
        m["config"]["hex_width_m"] = 500.0
        (bad / "manifest.json").write_text(json.dumps(m))
        with pytest.raises(CorruptStoreError, match="config"):
            Store.open(bad)

    def test_missing_manifest_detected(self, tmp_path):
        with pytest.raises(CorruptStoreError):
            Store.open(tmp_path)


class TestTripsBy:
    def test_all_cells_returns_full_day(self, sample_store):
        store, trips, _ = sample_store
        region = all_cells_of(store, DAY0)
        assert len(store.trips_by(region, DAY0, "pickup")) == len(trips)

    def test_single_cell_planted_trip(self, tmp_path, poi_index):
        rows = [(1, DAY0_TS + 3600, 114.0, 22.5, DAY0_TS + 4200, 114.05, 22.55)]
        trips = build_trips(rows, poi_index, ENGINE)
        store = write_store(tmp_path / "s", trips, build_vacant([], ENGINE), poi_index, ENGINE)
        cell = HexIndex(int(trips[0]["o_q"]), int(trips[0]["o_r"]))
        got = store.trips_by({cell}, DAY0, "pickup")
        assert len(got) == 1
        assert got[0].stime == DAY0_TS + 3600

    def test_midnight_crossing_trip_split_by_role(self, tmp_path, poi_index):
        stime = DAY0_TS + 86400 - 600  # 23:50 local
        rows = [(1, stime, 114.0, 22.5, stime + 1200, 114.05, 22.55)]
        trips = build_trips(rows, poi_index, ENGINE)
        store = write_store(tmp_path / "s", trips, build_vacant([], ENGINE), poi_index, ENGINE)
        o_cell = HexIndex(int(trips[0]["o_q"]), int(trips[0]["o_r"]))
        d_cell = HexIndex(int(trips[0]["d_q"]), int(trips[0]["d_r"]))
        assert len(store.trips_by({o_cell}, DAY0, "pickup")) == 1
        assert store.trips_by({o_cell}, DAY1, "pickup") == []
        assert len(store.trips_by({d_cell}, DAY1, "dropoff")) == 1
        assert store.trips_by({d_cell}, DAY0, "dropoff") == []

    def test_date_outside_manifest_returns_empty(self, sample_store):
        store, _, _ = sample_store
        assert store.trips_by({HexIndex(0, 0)}, date(2030, 1, 1), "pickup") == []

    def test_empty_region_rejected(self, sample_store):
        store, _, _ = sample_store
        with pytest.raises(InvalidQueryError):
            store.trips_by(set(), DAY0, "pickup")

    def test_conservation_sum_of_single_cells(self, sample_store):
        store, trips, _ = sample_store
        total = 0
        for cell in all_cells_of(store, DAY0):
            total += len(store.trips_by({cell}, DAY0, "pickup"))
        assert total == len(trips)

    def test_sorted_by_time_then_taxi(self, sample_store):
        store, _, _ = sample_store
        out = store.trips_by(all_cells_of(store, DAY0), DAY0, "pickup")
        keys = [(t.stime, t.taxi_id) for t in out]
        assert keys == sorted(keys)


def brute_points_near(store, trips, vacant, p, radius, window, kind):
    events = []
    if kind == "pickup":
        events = [(int(t["stime"]), int(t["taxi_id"]), float(t["slon"]), float(t["slat"]), 0.0) for t in trips]
    elif kind == "dropoff":
        events = [(int(t["etime"]), int(t["taxi_id"]), float(t["elon"]), float(t["elat"]), 0.0) for t in trips]
    else:
        events = [(int(v["ts"]), int(v["taxi_id"]), float(v["lon"]), float(v["lat"]), float(v["speed"])) for v in vacant]
    pp = project(p, ENGINE.grid)
    hits = []
    for ts, taxi, lon, lat, speed in events:
        if not (window[0] <= ts < window[1]):
            continue
        q = project(LonLat(lon, lat), ENGINE.grid)
        dx, dy = pp.x - q.x, pp.y - q.y
        if math.sqrt(dx * dx + dy * dy) <= radius:
            hits.append((ts, taxi, lon, lat, speed))
    hits.sort(key=lambda h: (h[0], h[1]))
    return hits


class TestPointsNear:
    def test_zero_length_window_empty(self, sample_store):
        store, _, _ = sample_store
        assert store.points_near(LonLat(114.0, 22.5), 5000, (DAY0_TS, DAY0_TS), "pickup") == []

    def test_invalid_window_rejected(self, sample_store):
        store, _, _ = sample_store
        with pytest.raises(InvalidQueryError):
            store.points_near(LonLat(114.0, 22.5), 5000, (DAY0_TS + 10, DAY0_TS), "pickup")

    def test_invalid_radius_rejected(self, sample_store):
        store, _, _ = sample_store
        with pytest.raises(InvalidRadiusError):
            store.points_near(LonLat(114.0, 22.5), -1.0, (DAY0_TS, DAY0_TS + 3600), "pickup")

    def test_boundary_event_included(self, sample_store):
        store, trips, _ = sample_store
        p = LonLat(114.0, 22.5)
        pp = project(p, ENGINE.grid)
        t0 = trips[0]
        q = project(LonLat(float(t0["slon"]), float(t0["slat"])), ENGINE.grid)
        dx, dy = pp.x - q.x, pp.y - q.y
        d = math.sqrt(dx * dx + dy * dy)
        got = store.points_near(p, d, (DAY0_TS, DAY0_TS + 86400), "pickup")
        assert any(g[0] == int(t0["stime"]) and g[1] == int(t0["taxi_id"]) for g in got)

    @pytest.mark.parametrize("kind", ["pickup", "dropoff", "vacant"])
    def test_matches_brute_force(self, sample_store, kind):
        store, trips, vacant = sample_store
        rng = np.random.default_rng(33)
        for _ in range(200):
            p = LonLat(float(rng.uniform(113.9, 114.1)), float(rng.uniform(22.4, 22.6)))
            radius = float(rng.uniform(100, 5000))
            w0 = DAY0_TS + int(rng.integers(0, 80000))
            window = (w0, w0 + int(rng.integers(600, 30000)))
            got = [(ts, taxi, loc.lon, loc.lat, speed) for ts, taxi, loc, speed in
                   store.points_near(p, radius, window, kind)]
            assert got == brute_points_near(store, trips, vacant, p, radius, window, kind)

    def test_repeated_queries_bit_identical(self, sample_store):
        store, _, _ = sample_store
        w = (DAY0_TS, DAY0_TS + 86400)
        a = store.points_near(LonLat(114.0, 22.5), 2000, w, "vacant")
        b = store.points_near(LonLat(114.0, 22.5), 2000, w, "vacant")
        assert a == b
