"""Scoring tests: exact hand-computed criterion fixtures, formula properties,
normalization/rank/violin behavior, and an end-to-end region evaluation oracle."""

import math
from datetime import date

import numpy as np
import pytest

from hexcab.config import EngineConfig
from hexcab.errors import InvalidCriterionError, InvalidInputError
from hexcab.geo import LonLat, project
from hexcab.poi import CATEGORIES, Poi, PoiIndex
from hexcab.scoring import (
    Candidate,
    CRITERIA,
    ScoreParams,
    candidates_in_region,
    evaluate_region,
    normalize,
    rank,
    score_AD,
    score_AS,
    score_PL,
    score_PR_DR,
    score_TF,
    violin,
    CandidateScore,
)
from hexcab.store import write_store

from conftest import DAY0_TS, ENGINE, build_trips, build_vacant, make_store

DAY0 = date(2019, 9, 2)

# a grid whose projection origin is (0, 0): longitude offsets survive the
# projection subtraction exactly, enabling bit-exact distance fixtures
ENGINE0 = EngineConfig(
    origin_lon=0.0, origin_lat=0.0, bbox=(-0.5, -0.5, 0.5, 0.5), tz_offset_hours=0.0
)
DAY0_TS0 = ENGINE0.day_start_ts(DAY0)


def poi_index0(locs_cats) -> PoiIndex:
    pois = [
        Poi(i, LonLat(lon, lat), f"p{i}", "", cat, cat)
        for i, (lon, lat, cat) in enumerate(locs_cats)
    ]
    return PoiIndex(pois, ENGINE0.grid)


def cand(lon=0.0, lat=0.0, cid=0) -> Candidate:
    return Candidate(id=cid, location=LonLat(lon, lat), source="user_added", label="c")


def store0(path, trip_rows, vacant_rows, pois=None):
    idx = poi_index0(pois or [(0.3, 0.3, "living")])
    return write_store(
        path,
        build_trips(trip_rows, idx, ENGINE0),
        build_vacant(vacant_rows, ENGINE0),
        idx,
        ENGINE0,
    )


def pickup_row(lon, lat, ts=None, taxi=1):
    ts = DAY0_TS0 + 3600 if ts is None else ts
    # drop-off far away so the pick-up geometry is unaffected
    return (taxi, ts, lon, lat, ts + 900, 0.3, 0.3)


WINDOW0 = (DAY0_TS0, DAY0_TS0 + 86400)


class TestAccessibility:
    def test_all_points_at_candidate_score_one(self, tmp_path):
        rows = [pickup_row(0.0, 0.0, taxi=i) for i in range(1, 4)]
        store = store0(tmp_path / "s", rows, [])
        params = ScoreParams(coverage_m=500.0, window=WINDOW0)
        assert score_AD(cand(), store, params) == 1.0

    def test_quarter_half_boundary_points_score_exactly_half(self, tmp_path):
        # construct distances 0, D/2, D bit-exactly (origin-0 grid, lat=0)
        k1 = ENGINE0.grid.meters_per_deg_lon
        delta = 500.0 / k1
        d_exact = delta * k1
        assert abs(d_exact - 500.0) < 1e-9
        # halving a float is exact, and rounding commutes with /2
        assert (delta / 2) * k1 == d_exact / 2

        rows = [
            pickup_row(0.0, 0.0, taxi=1),
            pickup_row(delta / 2, 0.0, taxi=2),
            pickup_row(delta, 0.0, taxi=3),
        ]
        store = store0(tmp_path / "s", rows, [])
        params = ScoreParams(coverage_m=d_exact, window=WINDOW0)
        # sanity: the recomputed boundary distance equals the radius exactly
        x = project(LonLat(delta, 0.0), ENGINE0.grid).x
        assert math.sqrt(x * x) == d_exact
        assert score_AD(cand(), store, params) == 0.5

    def test_empty_coverage_scores_zero(self, tmp_path):
        store = store0(tmp_path / "s", [pickup_row(0.3, 0.3)], [])
        params = ScoreParams(coverage_m=500.0, window=WINDOW0)
        assert score_AD(cand(), store, params) == 0.0

    def test_bounded_in_unit_interval_on_random_instances(self, tmp_path):
        rng = np.random.default_rng(60)
        rows = [
            pickup_row(float(rng.uniform(-0.02, 0.02)), float(rng.uniform(-0.02, 0.02)),
                       ts=DAY0_TS0 + int(rng.integers(0, 80000)), taxi=int(rng.integers(1, 99)))
            for _ in range(400)
        ]
        store = store0(tmp_path / "s", rows, [])
        params = ScoreParams(coverage_m=500.0, window=WINDOW0)
        for i in range(1000):
            c = cand(float(rng.uniform(-0.02, 0.02)), float(rng.uniform(-0.02, 0.02)), cid=i)
            v = score_AD(c, store, params)
            assert 0.0 <= v <= 1.0

    def test_moving_a_point_closer_never_decreases_score(self, tmp_path_factory):
        rng = np.random.default_rng(61)
        params = ScoreParams(coverage_m=500.0, window=WINDOW0)
        for trial in range(100):
            k = int(rng.integers(1, 8))
            angles = rng.uniform(0, 2 * math.pi, size=k)
            dists = rng.uniform(10, 490, size=k)
            deg = 1.0 / ENGINE0.grid.meters_per_deg_lat

            def rows_for(dist_scale):
                ds = dists.copy()
                ds[0] *= dist_scale
                return [
                    pickup_row(float(math.sin(a) * d * deg), float(math.cos(a) * d * deg), taxi=j + 1)
                    for j, (a, d) in enumerate(zip(angles, ds))
                ]

            base = tmp_path_factory.mktemp("mono")
            s1 = store0(base / "far", rows_for(1.0), [])
            s2 = store0(base / "near", rows_for(float(rng.uniform(0.1, 0.99))), [])
            assert score_AD(cand(), s2, params) >= score_AD(cand(), s1, params)


class TestSpeedScore:
    def test_single_sample(self, tmp_path):
        store = store0(tmp_path / "s", [], [(DAY0_TS0 + 100, 1, 0.0, 0.0, 40.0)])
        assert score_AS(cand(), store, ScoreParams(window=WINDOW0)) == 40.0

    def test_mean_of_two(self, tmp_path):
        vac = [(DAY0_TS0 + 100, 1, 0.0, 0.0, 20.0), (DAY0_TS0 + 200, 2, 0.001, 0.0, 60.0)]
        store = store0(tmp_path / "s", [], vac)
        assert score_AS(cand(), store, ScoreParams(window=WINDOW0)) == 40.0

    def test_no_samples_scores_zero(self, tmp_path):
        store = store0(tmp_path / "s", [], [(DAY0_TS0 + 100, 1, 0.3, 0.3, 50.0)])
        assert score_AS(cand(), store, ScoreParams(window=WINDOW0)) == 0.0


class TestPoiScores:
    def test_pl_no_pois(self):
        idx = poi_index0([(0.3, 0.3, "living")])
        assert score_PL(cand(), idx, ScoreParams(window=WINDOW0)) == 0.0

    def test_pl_three_of_six_categories(self):
        idx = poi_index0([(0.0, 0.0, "living"), (0.0005, 0.0, "traffic"),
                          (0.0, 0.0005, "entertainment")])
        assert score_PL(cand(), idx, ScoreParams(window=WINDOW0)) == 0.5

    def test_pl_all_six(self):
        idx = poi_index0([(0.0001 * i, 0.0, cat) for i, cat in enumerate(CATEGORIES)])
        assert score_PL(cand(), idx, ScoreParams(window=WINDOW0)) == 1.0

    def test_tf_ratio(self):
        idx = poi_index0([(0.0, 0.0, "traffic"), (0.0001, 0.0, "traffic"),
                          (0.0002, 0.0, "living"), (0.0003, 0.0, "company")])
        assert score_TF(cand(), idx, ScoreParams(window=WINDOW0)) == 0.5

    def test_tf_zero_pois(self):
        idx = poi_index0([(0.3, 0.3, "traffic")])
        assert score_TF(cand(), idx, ScoreParams(window=WINDOW0)) == 0.0

    def test_tf_all_traffic(self):
        idx = poi_index0([(0.0, 0.0, "traffic"), (0.0001, 0.0, "traffic")])
        assert score_TF(cand(), idx, ScoreParams(window=WINDOW0)) == 1.0


class TestRates:
    def test_pr_twelve_pickups_half_km_two_hours(self, tmp_path):
        w = (DAY0_TS0 + 7 * 3600, DAY0_TS0 + 9 * 3600)
        rows = [pickup_row(0.0001 * i, 0.0, ts=w[0] + 60 * i, taxi=i + 1) for i in range(12)]
        store = store0(tmp_path / "s", rows, [])
        pr, dr = score_PR_DR(cand(), store, ScoreParams(coverage_m=500.0, window=w))
        assert pr == 12.0
        assert dr == 0.0

    def test_same_taxi_observed_five_times_counts_once(self, tmp_path):
        vac = [(DAY0_TS0 + 100 + 70 * i, 9, 0.0, 0.0, 30.0) for i in range(5)]
        store = store0(tmp_path / "s", [], vac)
        w = (DAY0_TS0, DAY0_TS0 + 3600)
        _, dr = score_PR_DR(cand(), store, ScoreParams(coverage_m=500.0, window=w))
        # ND = 1, L = 0.5, T = 1 -> DR = 2
        assert dr == 2.0

    def test_empty_neighborhood(self, tmp_path):
        store = store0(tmp_path / "s", [pickup_row(0.3, 0.3)], [])
        pr, dr = score_PR_DR(cand(), store, ScoreParams(window=WINDOW0))
        assert (pr, dr) == (0.0, 0.0)

    def test_time_duplication_leaves_pr_unchanged(self, tmp_path):
        w1 = (DAY0_TS0, DAY0_TS0 + 86400)
        w2 = (DAY0_TS0, DAY0_TS0 + 2 * 86400)
        rows = [pickup_row(0.0001 * i, 0.0, ts=DAY0_TS0 + 1000 + i, taxi=i + 1) for i in range(7)]
        dup = [(taxi + 100, st + 86400, slon, slat, et + 86400, elon, elat)
               for taxi, st, slon, slat, et, elon, elat in rows]
        s1 = store0(tmp_path / "one", rows, [])
        s2 = store0(tmp_path / "two", rows + dup, [])
        pr1, _ = score_PR_DR(cand(), s1, ScoreParams(coverage_m=500.0, window=w1))
        pr2, _ = score_PR_DR(cand(), s2, ScoreParams(coverage_m=500.0, window=w2))
        assert pr1 == pr2

    def test_halving_radius_doubles_pr(self, tmp_path):
        rows = [pickup_row(0.0001 * i, 0.0, ts=DAY0_TS0 + 500 + i, taxi=i + 1) for i in range(9)]
        store = store0(tmp_path / "s", rows, [])
        pr_full, _ = score_PR_DR(cand(), store, ScoreParams(coverage_m=500.0, window=WINDOW0))
        pr_half, _ = score_PR_DR(cand(), store, ScoreParams(coverage_m=250.0, window=WINDOW0))
        # all events are within 100 m, so NP is unchanged while L halves
        assert pr_half == 2 * pr_full


def fake_scores(raws):
    out = []
    for i, r in enumerate(raws):
        raw = {c: r for c in CRITERIA} if isinstance(r, float) else dict(r)
        out.append(CandidateScore(candidate=cand(cid=i), raw=raw, n_coverage=0))
    return out


class TestNormalize:
    def test_minmax_arithmetic(self):
        scored = normalize(fake_scores([0.2, 0.5, 0.8]))
        assert [s.normalized["AD"] for s in scored] == [0.0, pytest.approx(0.5), 1.0]

    def test_single_candidate_gets_half(self):
        scored = normalize(fake_scores([0.7]))
        assert all(v == 0.5 for v in scored[0].normalized.values())

    def test_all_equal_raws_collapse_to_half(self):
        scored = normalize(fake_scores([0.3, 0.3, 0.3]))
        assert all(s.normalized["PR"] == 0.5 for s in scored)

    def test_argmax_preserved(self):
        rng = np.random.default_rng(70)
        for _ in range(100):
            raws = [
                {c: float(rng.uniform(0, 10)) for c in CRITERIA} for _ in range(6)
            ]
            scored = normalize(fake_scores(raws))
            for c in CRITERIA:
                raw_argmax = max(range(6), key=lambda i: (raws[i][c], -i))
                norm_argmax = max(range(6), key=lambda i: (scored[i].normalized[c], -i))
                assert raw_argmax == norm_argmax

    def test_empty_rejected(self):
        with pytest.raises(InvalidInputError):
            normalize([])


class TestRank:
    def test_ties_fall_back_to_id_order(self):
        scored = normalize(fake_scores([0.4, 0.4, 0.4]))
        out = rank(scored, by="AD")
        assert [s.candidate.id for s in out] == [0, 1, 2]

    def test_rank_matches_raw_order_after_scaling(self):
        scored = normalize(fake_scores([0.1, 0.9, 0.5]))
        out = rank(scored, by="AD", descending=True)
        assert [s.candidate.id for s in out] == [1, 2, 0]

    def test_rank_is_permutation(self):
        scored = normalize(fake_scores([0.1, 0.9, 0.5, 0.3]))
        for crit in CRITERIA:
            out = rank(scored, by=crit)
            assert sorted(s.candidate.id for s in out) == [0, 1, 2, 3]

    def test_unknown_criterion_rejected(self):
        scored = normalize(fake_scores([0.1]))
        with pytest.raises(InvalidCriterionError):
            rank(scored, by="XX")


class TestViolin:
    def test_identical_scores_collapse(self):
        stats = violin(normalize(fake_scores([0.4, 0.4])))
        s = stats["AD"]
        assert s.minimum == s.q1 == s.median == s.q3 == s.maximum == 0.5

    def test_median_of_three(self):
        stats = violin(normalize(fake_scores([0.0, 0.5, 1.0])))
        assert stats["AD"].median == 0.5

    def test_histogram_totals(self):
        scored = normalize(fake_scores(list(np.linspace(0.0, 1.0, 17))))
        stats = violin(scored)
        for c in CRITERIA:
            assert sum(stats[c].histogram) == 17

    def test_empty_rejected(self):
        with pytest.raises(InvalidInputError):
            violin([])


class TestEvaluateRegion:
    def _store_with_region(self, tmp_path, poi_index):
        rng = np.random.default_rng(80)
        rows = [
            (int(rng.integers(1, 30)), DAY0_TS + int(rng.integers(0, 80000)),
             float(rng.uniform(113.99, 114.02)), float(rng.uniform(22.49, 22.52)),
             DAY0_TS + int(rng.integers(80001, 86100)),
             float(rng.uniform(113.99, 114.02)), float(rng.uniform(22.49, 22.52)))
            for _ in range(300)
        ]
        vac = [
            (DAY0_TS + int(rng.integers(0, 86400)), int(rng.integers(1, 30)),
             float(rng.uniform(113.99, 114.02)), float(rng.uniform(22.49, 22.52)),
             float(rng.uniform(5, 75)))
            for _ in range(200)
        ]
        return make_store(tmp_path / "er", rows, vac, poi_index)

    def test_single_poi_region_all_half(self, tmp_path, poi_index):
        store = make_store(tmp_path / "single", [
            (1, DAY0_TS + 100, 113.9, 22.4, DAY0_TS + 1000, 113.91, 22.41)
        ], [], poi_index)
        from hexcab.geo import to_hex

        region = {to_hex(poi_index.pois[0].location, ENGINE.grid)}
        scored, stats = evaluate_region(store, region, DAY0)
        assert len(scored) == 1
        assert all(v == 0.5 for v in scored[0].normalized.values())
        assert stats["AD"].median == 0.5

    def test_user_candidate_extends_list(self, tmp_path, poi_index):
        store = self._store_with_region(tmp_path, poi_index)
        from hexcab.geo import hexes_in_polygon

        poly = [LonLat(113.98, 22.48), LonLat(114.03, 22.48), LonLat(114.03, 22.53),
                LonLat(113.98, 22.53)]
        region = hexes_in_polygon(poly, ENGINE.grid)
        base, _ = evaluate_region(store, region, DAY0)
        plus, _ = evaluate_region(store, region, DAY0,
                                  extra_candidates=[LonLat(114.0, 22.5)])
        assert len(plus) == len(base) + 1
        added = [s for s in plus if s.candidate.source == "user_added"]
        assert len(added) == 1

    def test_full_pipeline_matches_hand_oracle(self, tmp_path, poi_index):
        store = self._store_with_region(tmp_path, poi_index)
        params = ScoreParams(coverage_m=500.0, window=(DAY0_TS + 6 * 3600, DAY0_TS + 22 * 3600))
        locs = [LonLat(114.0, 22.5), LonLat(114.01, 22.505), LonLat(113.995, 22.51),
                LonLat(114.005, 22.49), LonLat(114.015, 22.498)]
        from hexcab.geo import to_hex

        region = {to_hex(l, ENGINE.grid) for l in locs}
        scored, _ = evaluate_region(store, region, DAY0, params=params)

        trips = store.day_array(DAY0, "pickup")
        vac = store.day_array(DAY0, "vacant")

        def dist(a: LonLat, lon, lat):
            pa, pb = project(a, ENGINE.grid), project(LonLat(lon, lat), ENGINE.grid)
            dx, dy = pa.x - pb.x, pa.y - pb.y
            return math.sqrt(dx * dx + dy * dy)

        for s in scored:
            c = s.candidate.location
            ds = [dist(c, float(t["slon"]), float(t["slat"])) for t in trips
                  if params.window[0] <= t["stime"] < params.window[1]]
            in_cov = [d for d in ds if d <= params.coverage_m]
            ad = sum(1 - d / params.coverage_m for d in in_cov) / len(in_cov) if in_cov else 0.0
            assert s.raw["AD"] == pytest.approx(ad, abs=1e-12)

            vsel = [v for v in vac if params.window[0] <= v["ts"] < params.window[1]
                    and dist(c, float(v["lon"]), float(v["lat"])) <= params.coverage_m]
            as_ = sum(float(v["speed"]) for v in vsel) / len(vsel) if vsel else 0.0
            assert s.raw["AS"] == pytest.approx(as_, abs=1e-9)

            np_ = len(in_cov)
            assert s.raw["PR"] == pytest.approx(np_ / 0.5 / 16.0, abs=1e-12)
            nd = len({int(v["taxi_id"]) for v in vsel})
            assert s.raw["DR"] == pytest.approx(nd / 0.5 / 16.0, abs=1e-12)

            from hexcab.poi import pois_within

            near = pois_within(c, params.coverage_m, poi_index)
            pl = len({p.category for p in near}) / 6.0
            tf = (sum(1 for p in near if p.category == "traffic") / len(near)) if near else 0.0
            assert s.raw["PL"] == pytest.approx(pl, abs=1e-12)
            assert s.raw["TF"] == pytest.approx(tf, abs=1e-12)

    def test_recomputation_is_bit_identical(self, tmp_path, poi_index):
        store = self._store_with_region(tmp_path, poi_index)
        from hexcab.geo import to_hex

        region = {to_hex(LonLat(114.0, 22.5), ENGINE.grid)}
        a, _ = evaluate_region(store, region, DAY0)
        b, _ = evaluate_region(store, region, DAY0)
        assert [s.raw for s in a] == [s.raw for s in b]
        assert [s.normalized for s in a] == [s.normalized for s in b]

    def test_empty_candidate_set_yields_placeholder(self, tmp_path, poi_index):
        store = self._store_with_region(tmp_path, poi_index)
        from hexcab.geo import to_hex

        region = {to_hex(LonLat(114.15, 22.65), ENGINE.grid)}  # no POIs out here
        scored, stats = evaluate_region(store, region, DAY0)
        assert scored == [] and stats is None
