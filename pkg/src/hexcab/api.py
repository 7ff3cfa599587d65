"""HTTP query service over an opened Store.

Every endpoint is a thin shell: parse parameters, call the corresponding
aggregate/scoring function, serialize with the shared serializers. The only
mutable state is the per-session list of user-added candidate points, keyed
by the X-Session-Token header.
"""

from __future__ import annotations

from datetime import date
from typing import Optional

from fastapi import Body, FastAPI, Header, Query, Request
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse

from . import aggregate as agg
from . import scoring
from . import serialize as ser
from .errors import HexcabError, InvalidPolygonError, InvalidRangeError
from .geo import HexIndex, LonLat, hexes_in_polygon
from .poi import CATEGORIES
from .store import Store


def parse_date(s: str) -> date:
    try:
        return date.fromisoformat(s)
    except (TypeError, ValueError):
        raise InvalidRangeError(f"bad date {s!r}, expected YYYY-MM-DD") from None


def parse_region(s: str) -> set[HexIndex]:
    """Comma-separated q:r cell ids, e.g. '3:-2,4:-2'."""
    cells = set()
    try:
        for part in s.split(","):
            q, r = part.split(":")
            cells.add(HexIndex(int(q), int(r)))
    except (TypeError, ValueError, AttributeError):
        raise InvalidRangeError(f"bad region {s!r}, expected q:r,q:r,...") from None
    return cells


def parse_bbox(s: str) -> tuple[float, float, float, float]:
    try:
        vals = tuple(float(v) for v in s.split(","))
        if len(vals) != 4:
            raise ValueError
        return vals
    except (TypeError, ValueError):
        raise InvalidRangeError(f"bad bbox {s!r}, expected min_lon,min_lat,max_lon,max_lat") from None


def parse_window(s: Optional[str], store: Store, d: date) -> tuple[int, int]:
    """'HH:MM-HH:MM' on the given local date; None means the whole day."""
    if not s:
        return store.day_window(d)
    try:
        a, b = s.split("-")
        h0, m0 = (int(v) for v in a.split(":"))
        h1, m1 = (int(v) for v in b.split(":"))
    except (TypeError, ValueError):
        raise InvalidRangeError(f"bad window {s!r}, expected HH:MM-HH:MM") from None
    t0 = store.config.day_start_ts(d)
    start = t0 + h0 * 3600 + m0 * 60
    end = t0 + h1 * 3600 + m1 * 60
    if end <= start:
        raise InvalidRangeError(f"window {s!r} must end after it starts")
    return (start, end)


def create_app(store: Store, ui_dir=None, cors_origins: tuple[str, ...] = ("*",)) -> FastAPI:
    app = FastAPI(title="hexcab", docs_url=None, redoc_url=None)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=list(cors_origins),
        allow_methods=["*"],
        allow_headers=["*"],
    )
    # session token -> list of (LonLat, label)
    sessions: dict[str, list] = {}

    @app.exception_handler(HexcabError)
    async def _hexcab_error(request: Request, exc: HexcabError):
        return JSONResponse(status_code=exc.status, content={"code": exc.code, "message": str(exc)})

    @app.get("/api/meta")
    def api_meta():
        """Grid/config context the UI needs for lasso projection and date pickers."""
        return {
            "config": store.config.to_dict(),
            "dates": [d.isoformat() for d in store.dates],
            "categories": list(CATEGORIES),
            "criteria": list(scoring.CRITERIA),
        }

    @app.get("/api/calendar")
    def api_calendar(from_: str = Query(alias="from"), to: str = Query()):
        cells = agg.calendar(store, parse_date(from_), parse_date(to))
        return ser.calendar_payload(cells)

    @app.post("/api/region/resolve")
    def api_resolve(body: dict = Body()):
        poly = body.get("polygon")
        if not isinstance(poly, list):
            raise InvalidPolygonError("body must carry a 'polygon' list")
        try:
            points = [LonLat(float(p["lon"]), float(p["lat"])) for p in poly]
        except (TypeError, KeyError, ValueError):
            raise InvalidPolygonError("polygon points must be {lon, lat} objects") from None
        cells = hexes_in_polygon(points, store.config.grid)
        ordered = sorted(cells, key=lambda h: (h.q, h.r))
        return {"cells": [ser.hex_dict(h) for h in ordered]}

    @app.get("/api/temporal")
    def api_temporal(
        date_: Optional[str] = Query(default=None, alias="date"),
        from_: Optional[str] = Query(default=None, alias="from"),
        to: Optional[str] = Query(default=None),
        region: Optional[str] = Query(default=None),
    ):
        reg = parse_region(region) if region else None
        if date_ is not None:
            return ser.day_summary_payload(agg.day_summary(store, reg, parse_date(date_)))
        if from_ is None or to is None:
            raise InvalidRangeError("temporal needs either date= or from=&to=")
        d0, d1 = parse_date(from_), parse_date(to)
        if d0 > d1:
            raise InvalidRangeError(f"from {d0} is after to {d1}")
        return [
            ser.day_summary_payload(agg.day_summary(store, reg, d))
            for d in store.config.date_range(d0, d1)
        ]

    @app.get("/api/heatmap")
    def api_heatmap(date_: str = Query(alias="date")):
        return ser.heatmap_payload(agg.heatmap(store, parse_date(date_)))

    @app.get("/api/glyphs")
    def api_glyphs(date_: str = Query(alias="date"), cells: str = Query()):
        return ser.glyphs_payload(agg.cell_glyphs(store, parse_date(date_), parse_region(cells)))

    @app.get("/api/pois")
    def api_pois(
        date_: str = Query(alias="date"),
        bbox: Optional[str] = Query(default=None),
        radius: Optional[float] = Query(default=None),
    ):
        box = parse_bbox(bbox) if bbox else store.config.bbox
        r = radius if radius is not None else store.config.poi_donut_radius_m
        return ser.donuts_payload(agg.poi_donuts(store, box, parse_date(date_), r))

    @app.get("/api/compare")
    def api_compare(
        regionA: str = Query(),
        regionB: str = Query(),
        date_: str = Query(alias="date"),
        filter_: Optional[str] = Query(default=None, alias="filter"),
    ):
        d = parse_date(date_)
        cat_filter = set(filter_.split(",")) if filter_ else None

        def side(region_str):
            region = parse_region(region_str)
            return {
                "glyph": ser.region_glyph_payload(agg.region_glyph(store, region, d)),
                "beeswarm": ser.swarm_payload(agg.beeswarm(store, region, d, cat_filter)),
                "stacked": ser.swarm_payload(agg.stacked_bars(store, region, d)),
            }

        return {"a": side(regionA), "b": side(regionB)}

    def _rank_response(region_str, date_str, coverage, window, by, descending, extras):
        if by not in scoring.CRITERIA:
            raise scoring.InvalidCriterionError(
                f"unknown criterion {by!r}; expected one of {scoring.CRITERIA}"
            )
        d = parse_date(date_str)
        region = parse_region(region_str)
        params = scoring.ScoreParams(
            coverage_m=coverage if coverage is not None else store.config.score_coverage_m,
            window=parse_window(window, store, d),
        )
        locs = [loc for loc, _ in extras]
        labels = [label for _, label in extras]
        scores, stats = scoring.evaluate_region(
            store, region, d, params=params, extra_candidates=locs, extra_labels=labels
        )
        ranked = scoring.rank(scores, by=by, descending=descending) if scores else []
        return ser.rank_payload(ranked, stats, by, descending)

    @app.get("/api/rank")
    def api_rank(
        region: str = Query(),
        date_: str = Query(alias="date"),
        D: Optional[float] = Query(default=None),
        window: Optional[str] = Query(default=None),
        by: str = Query(default="AD"),
        descending: bool = Query(default=True),
        x_session_token: str = Header(default=""),
    ):
        extras = sessions.get(x_session_token, [])
        return _rank_response(region, date_, D, window, by, descending, extras)

    @app.post("/api/candidates")
    def api_candidates(
        region: str = Query(),
        date_: str = Query(alias="date"),
        D: Optional[float] = Query(default=None),
        window: Optional[str] = Query(default=None),
        by: str = Query(default="AD"),
        descending: bool = Query(default=True),
        body: dict = Body(),
        x_session_token: str = Header(default=""),
    ):
        try:
            loc = LonLat(float(body["lon"]), float(body["lat"]))
        except (TypeError, KeyError, ValueError):
            raise InvalidRangeError("candidate body must carry numeric lon and lat") from None
        min_lon, min_lat, max_lon, max_lat = store.config.bbox
        if not (min_lon <= loc.lon <= max_lon and min_lat <= loc.lat <= max_lat):
            raise InvalidRangeError(f"candidate {loc} outside the study bbox")
        label = str(body.get("label", "added point"))
        bucket = sessions.setdefault(x_session_token, [])
        bucket.append((loc, label))
        return _rank_response(region, date_, D, window, by, descending, bucket)

    if ui_dir is not None:
        from fastapi.staticfiles import StaticFiles

        app.mount("/", StaticFiles(directory=str(ui_dir), html=True), name="ui")

    return app


def serve(store: Store, host: str = "127.0.0.1", port: int = 8080, ui_dir=None) -> None:
    import uvicorn

    uvicorn.run(create_app(store, ui_dir=ui_dir), host=host, port=port)
