"""Candidate pick-up point evaluation on six criteria, with normalization,
ranking, and distribution summaries.

Criteria (raw forms):

- AD: mean closeness of in-coverage historical pick-ups, sum(1 - d/D)/n,
  0 when the coverage circle is empty; already in [0, 1].
- AS: mean speed of vacant-taxi observations in coverage during the window.
- PL: distinct POI categories present in coverage, divided by 6.
- TF: traffic-category POIs in coverage divided by all POIs in coverage.
- PR: pick-up events per coverage-kilometer per window-hour, NP/L/T.
- DR: distinct vacant taxis per coverage-kilometer per window-hour, ND/L/T.

Coverage is the closed ball of radius D (meters). Normalization is min-max
across the candidate set; degenerate criteria collapse to 0.5.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from datetime import date

import numpy as np

from .errors import InvalidCriterionError, InvalidInputError
from .geo import LonLat, pack_region, project_arrays
from .poi import CATEGORIES, CATEGORY_CODE, PoiIndex
from .store import Store

CRITERIA = ("AD", "AS", "PL", "TF", "PR", "DR")
HISTOGRAM_BINS = 20


@dataclass(frozen=True)
class Candidate:
    id: int
    location: LonLat
    source: str  # poi | user_added
    label: str


@dataclass(frozen=True)
class ScoreParams:
    """Coverage radius and evaluation window.

    ``window`` is a half-open [start, end) epoch-second interval; ``None``
    resolves to the full local day under evaluation.
    """

    coverage_m: float = 500.0
    window: tuple[int, int] | None = None

    def __post_init__(self):
        if self.coverage_m <= 0:
            raise InvalidInputError(f"coverage_m must be > 0, got {self.coverage_m}")
        if self.window is not None and not self.window[1] > self.window[0]:
            raise InvalidInputError(f"window must be non-empty, got {self.window}")

    def resolved(self, store: Store, d: date) -> "ScoreParams":
        if self.window is not None:
            return self
        return replace(self, window=store.day_window(d))

    @property
    def length_km(self) -> float:
        return self.coverage_m / 1000.0

    @property
    def window_hours(self) -> float:
        return (self.window[1] - self.window[0]) / 3600.0


@dataclass(frozen=True)
class CandidateScore:
    candidate: Candidate
    raw: dict
    n_coverage: int
    normalized: dict | None = None


@dataclass(frozen=True)
class CriterionStats:
    minimum: float
    q1: float
    median: float
    q3: float
    maximum: float
    histogram: tuple[int, ...]


def _ball(tree, xs, ys, idx_x, idx_y, radius):
    """Exact closed-ball member lists for candidate points against a KD-tree."""
    pts = np.column_stack([xs, ys])
    balls = tree.query_ball_point(pts, radius * (1 + 1e-9) + 1e-9)
    out = []
    for i, ball in enumerate(balls):
        b = np.asarray(ball, dtype=np.int64)
        if len(b):
            dx = xs[i] - idx_x[b]
            dy = ys[i] - idx_y[b]
            d = np.sqrt(dx * dx + dy * dy)
            keep = d <= radius
            out.append((b[keep], d[keep]))
        else:
            out.append((b, np.empty(0)))
    return out


def _score_arrays(candidates, store: Store, poi_index: PoiIndex, params: ScoreParams):
    """Raw criterion values for every candidate, vectorized over shared trees."""
    xs, ys = project_arrays(
        [c.location.lon for c in candidates], [c.location.lat for c in candidates], store.config.grid
    )
    xs, ys = np.atleast_1d(xs), np.atleast_1d(ys)
    n = len(candidates)
    D = params.coverage_m
    L, T = params.length_km, params.window_hours

    ad = np.zeros(n)
    np_count = np.zeros(n, dtype=np.int64)
    p_tree, _, _, px, py, _ = store.window_tree(params.window, "pickup")
    if p_tree is not None:
        for i, (b, d) in enumerate(_ball(p_tree, xs, ys, px, py, D)):
            np_count[i] = len(b)
            if len(b):
                ad[i] = float(np.sum(1.0 - d / D) / len(b))

    asp = np.zeros(n)
    nd_count = np.zeros(n, dtype=np.int64)
    v_tree, _, v_taxi, vx, vy, v_speed = store.window_tree(params.window, "vacant")
    if v_tree is not None:
        for i, (b, _) in enumerate(_ball(v_tree, xs, ys, vx, vy, D)):
            if len(b):
                asp[i] = float(np.mean(v_speed[b]))
                nd_count[i] = len(np.unique(v_taxi[b]))

    pl = np.zeros(n)
    tf = np.zeros(n)
    if len(poi_index):
        for i, (b, _) in enumerate(_ball(poi_index._tree, xs, ys, poi_index.xs, poi_index.ys, D)):
            if len(b):
                cats = poi_index.cat_codes[b]
                pl[i] = len(np.unique(cats)) / len(CATEGORIES)
                tf[i] = float((cats == CATEGORY_CODE["traffic"]).sum() / len(b))

    pr = np_count / L / T
    dr = nd_count / L / T
    return [
        CandidateScore(
            candidate=c,
            raw={
                "AD": float(ad[i]),
                "AS": float(asp[i]),
                "PL": float(pl[i]),
                "TF": float(tf[i]),
                "PR": float(pr[i]),
                "DR": float(dr[i]),
            },
            n_coverage=int(np_count[i]),
        )
        for i, c in enumerate(candidates)
    ]


def _score_one(c: Candidate, store: Store, poi_index: PoiIndex, params: ScoreParams) -> dict:
    return _score_arrays([c], store, poi_index, params)[0].raw


def score_AD(c: Candidate, store: Store, params: ScoreParams) -> float:
    """Accessibility: mean closeness of historical pick-ups in coverage."""
    return _score_one(c, store, store.poi_index, params)["AD"]


def score_AS(c: Candidate, store: Store, params: ScoreParams) -> float:
    """Traffic smoothness: mean vacant-taxi speed in coverage."""
    return _score_one(c, store, store.poi_index, params)["AS"]


def score_PL(c: Candidate, poi_index: PoiIndex, params: ScoreParams) -> float:
    """POI level: share of the six categories present in coverage."""
    store_free = _poi_only_scores(c, poi_index, params)
    return store_free["PL"]


def score_TF(c: Candidate, poi_index: PoiIndex, params: ScoreParams) -> float:
    """Transfer convenience: traffic POIs as a share of all POIs in coverage."""
    store_free = _poi_only_scores(c, poi_index, params)
    return store_free["TF"]


def _poi_only_scores(c: Candidate, poi_index: PoiIndex, params: ScoreParams) -> dict:
    x, y = project_arrays(c.location.lon, c.location.lat, poi_index.cfg)
    rows = poi_index.within_idx(float(x), float(y), params.coverage_m)
    if len(rows) == 0:
        return {"PL": 0.0, "TF": 0.0}
    cats = poi_index.cat_codes[rows]
    return {
        "PL": len(np.unique(cats)) / len(CATEGORIES),
        "TF": float((cats == CATEGORY_CODE["traffic"]).sum() / len(rows)),
    }


def score_PR_DR(c: Candidate, store: Store, params: ScoreParams) -> tuple[float, float]:
    """Arrival and discovery rates: events per coverage-km per window-hour."""
    raw = _score_one(c, store, store.poi_index, params)
    return raw["PR"], raw["DR"]


def normalize(scores: list[CandidateScore]) -> list[CandidateScore]:
    """Min-max scale each criterion across candidates; flat criteria become 0.5."""
    if not scores:
        raise InvalidInputError("cannot normalize an empty candidate list")
    out = []
    bounds = {}
    for crit in CRITERIA:
        vals = [s.raw[crit] for s in scores]
        bounds[crit] = (min(vals), max(vals))
    for s in scores:
        norm = {}
        for crit in CRITERIA:
            lo, hi = bounds[crit]
            norm[crit] = (s.raw[crit] - lo) / (hi - lo) if hi > lo else 0.5
        out.append(replace(s, normalized=norm))
    return out


def rank(scores: list[CandidateScore], by: str, descending: bool = True) -> list[CandidateScore]:
    """Sort by one normalized criterion; ties fall back to ascending candidate id."""
    if by not in CRITERIA:
        raise InvalidCriterionError(f"unknown criterion {by!r}; expected one of {CRITERIA}")
    def key(s: CandidateScore):
        v = s.normalized[by] if s.normalized is not None else s.raw[by]
        return (-v if descending else v, s.candidate.id)
    return sorted(scores, key=key)


def violin(scores: list[CandidateScore]) -> dict:
    """Per-criterion quantiles and 20-bin histograms of normalized scores."""
    if not scores:
        raise InvalidInputError("cannot summarize an empty candidate list")
    stats = {}
    for crit in CRITERIA:
        vals = np.array([
            s.normalized[crit] if s.normalized is not None else s.raw[crit] for s in scores
        ])
        qs = np.percentile(vals, [0, 25, 50, 75, 100])
        hist, _ = np.histogram(vals, bins=HISTOGRAM_BINS, range=(0.0, 1.0))
        stats[crit] = CriterionStats(
            minimum=float(qs[0]),
            q1=float(qs[1]),
            median=float(qs[2]),
            q3=float(qs[3]),
            maximum=float(qs[4]),
            histogram=tuple(int(v) for v in hist),
        )
    return stats


def candidates_in_region(store: Store, region) -> list[Candidate]:
    keys = pack_region(region)
    if len(keys) == 0:
        raise InvalidInputError("region must be non-empty")
    idx = store.poi_index
    rows = np.nonzero(np.isin(idx.hex_keys, keys))[0]
    return [
        Candidate(id=int(idx.ids[i]), location=idx.pois[int(i)].location, source="poi",
                  label=idx.pois[int(i)].name)
        for i in rows
    ]


def evaluate_region(
    store: Store,
    region,
    d: date,
    params: ScoreParams | None = None,
    extra_candidates: list[LonLat] | tuple = (),
    extra_labels: list[str] | None = None,
) -> tuple[list[CandidateScore], dict | None]:
    """Score every POI inside the region plus any user-added points.

    Returns the normalized score list and violin stats; an empty candidate
    set yields ([], None) so callers can render a placeholder.
    """
    params = (params or ScoreParams(coverage_m=store.config.score_coverage_m)).resolved(store, d)
    cands = candidates_in_region(store, region)
    min_lon, min_lat, max_lon, max_lat = store.config.bbox
    next_id = (int(store.poi_index.ids.max()) + 1) if len(store.poi_index) else 0
    for i, loc in enumerate(extra_candidates):
        if not (min_lon <= loc.lon <= max_lon and min_lat <= loc.lat <= max_lat):
            raise InvalidInputError(f"user candidate {loc} outside the study bbox")
        label = extra_labels[i] if extra_labels else f"user point {i + 1}"
        cands.append(Candidate(id=next_id + i, location=loc, source="user_added", label=label))
    if not cands:
        return [], None
    scored = _score_arrays(cands, store, store.poi_index, params)
    scored = normalize(scored)
    return scored, violin(scored)
