"""Command-line entry points: synth, ingest, aggregate, score, serve.

Exit codes: 0 success, 1 usage error, 2 data error. Diagnostics go to stderr;
machine-readable output (JSON/CSV) goes to --out or stdout.
"""

from __future__ import annotations

import argparse
import csv
import json
import sys
from datetime import date
from pathlib import Path

from . import aggregate as agg
from . import scoring
from . import serialize as ser
from .api import parse_region, parse_window
from .config import EngineConfig
from .errors import HexcabError
from .ingest import ingest_dir
from .poi import load_pois
from .scoring import CRITERIA, ScoreParams
from .store import Store
from .synth import SynthSpec, default_engine_config, generate


class _Parser(argparse.ArgumentParser):
    # argparse exits with 2 on usage problems; the contract here is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    p = _Parser(prog="hexcab", description="Taxi OD analytics over a hexagonal city grid")
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("synth", parents=[], help="generate a seeded synthetic dataset")
    sp.add_argument("--out", required=True, help="output directory")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--start", default="2019-09-02", help="first day, YYYY-MM-DD")
    sp.add_argument("--days", type=int, default=7)
    sp.add_argument("--taxis", type=int, default=500)
    sp.add_argument("--trips-per-day", type=int, default=3000)
    sp.add_argument("--pois", type=int, default=2000)
    sp.add_argument("--uplift", type=float, default=1.3, help="weekend demand factor")
    sp.add_argument("--sparse", action="store_true",
                    help="emit endpoint-only runs and one vacant sample per gap")
    sp.add_argument("--duration-median", type=float, default=420.0)

    ip = sub.add_parser("ingest", help="extract trips from GPS CSVs into a store")
    ip.add_argument("--gps-dir", required=True)
    ip.add_argument("--poi", required=True, help="POI catalog CSV")
    ip.add_argument("--category-map", required=True)
    ip.add_argument("--config", required=True, help="engine config JSON")
    ip.add_argument("--store", required=True, help="output store directory")
    ip.add_argument("--out", help="write the run report JSON here (default stdout)")

    ap = sub.add_parser("aggregate", help="offline aggregate reports as JSON")
    ap.add_argument("kind", choices=[
        "calendar", "day-summary", "heatmap", "glyphs", "donuts", "region-glyph",
        "beeswarm", "stacked",
    ])
    ap.add_argument("--store", required=True)
    ap.add_argument("--date")
    ap.add_argument("--from", dest="date_from")
    ap.add_argument("--to", dest="date_to")
    ap.add_argument("--region", help="comma-separated q:r cell ids")
    ap.add_argument("--radius", type=float)
    ap.add_argument("--filter", dest="category_filter", help="comma-separated categories")
    ap.add_argument("--out")

    scp = sub.add_parser("score", help="score candidate pick-up points to CSV")
    scp.add_argument("--store", required=True)
    scp.add_argument("--region", required=True,
                     help="comma-separated q:r cells; use --region=... when q is negative")
    scp.add_argument("--date", required=True)
    scp.add_argument("--radius", type=float, help="coverage radius D in meters")
    scp.add_argument("--window", help="HH:MM-HH:MM local window (default whole day)")
    scp.add_argument("--by", default="AD", choices=list(CRITERIA))
    scp.add_argument("--ascending", action="store_true")
    scp.add_argument("--out")

    sv = sub.add_parser("serve", help="run the HTTP API")
    sv.add_argument("--store", required=True)
    sv.add_argument("--port", type=int, default=8080)
    sv.add_argument("--host", default="127.0.0.1")
    sv.add_argument("--ui-dir", help="static UI bundle to serve at /")
    return p


def _emit(payload, out: str | None) -> None:
    text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    if out:
        Path(out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _parse_date(s: str) -> date:
    return date.fromisoformat(s)


def cmd_synth(args) -> int:
    spec = SynthSpec(
        start=_parse_date(args.start),
        days=args.days,
        taxis=args.taxis,
        trips_per_day=args.trips_per_day,
        seed=args.seed,
        weekend_uplift=args.uplift,
        n_pois=args.pois,
        occupied_sample_s=None if args.sparse else 30,
        cruise_sample_s=None if args.sparse else 300,
        duration_median_s=args.duration_median,
    )
    summary = generate(spec, args.out, default_engine_config())
    _emit(summary, None)
    return 0


def cmd_ingest(args) -> int:
    config = EngineConfig.load(args.config)
    poi_index, poi_report = load_pois(args.poi, args.category_map, config.grid)
    store = ingest_dir(args.gps_dir, poi_index, config, args.store)
    report = dict(store.report)
    report["poi"] = poi_report
    _emit(report, args.out)
    return 0


def cmd_aggregate(args) -> int:
    store = Store.open(args.store)
    need_date = args.kind != "calendar"
    if need_date and not args.date:
        raise HexcabError(f"aggregate {args.kind} needs --date")
    d = _parse_date(args.date) if args.date else None
    region = parse_region(args.region) if args.region else None

    if args.kind == "calendar":
        if not (args.date_from and args.date_to):
            raise HexcabError("aggregate calendar needs --from and --to")
        payload = ser.calendar_payload(
            agg.calendar(store, _parse_date(args.date_from), _parse_date(args.date_to))
        )
    elif args.kind == "day-summary":
        payload = ser.day_summary_payload(agg.day_summary(store, region, d))
    elif args.kind == "heatmap":
        payload = ser.heatmap_payload(agg.heatmap(store, d))
    elif args.kind == "glyphs":
        if region is None:
            raise HexcabError("aggregate glyphs needs --region")
        payload = ser.glyphs_payload(agg.cell_glyphs(store, d, region))
    elif args.kind == "donuts":
        radius = args.radius if args.radius else store.config.poi_donut_radius_m
        payload = ser.donuts_payload(agg.poi_donuts(store, store.config.bbox, d, radius))
    elif args.kind == "region-glyph":
        if region is None:
            raise HexcabError("aggregate region-glyph needs --region")
        payload = ser.region_glyph_payload(agg.region_glyph(store, region, d))
    elif args.kind == "beeswarm":
        if region is None:
            raise HexcabError("aggregate beeswarm needs --region")
        cat = set(args.category_filter.split(",")) if args.category_filter else None
        payload = ser.swarm_payload(agg.beeswarm(store, region, d, cat))
    else:  # stacked
        if region is None:
            raise HexcabError("aggregate stacked needs --region")
        payload = ser.swarm_payload(agg.stacked_bars(store, region, d))
    _emit(payload, args.out)
    return 0


SCORE_CSV_HEADER = (
    ["id", "label", "source", "lon", "lat", "n_coverage"]
    + [f"raw_{c}" for c in CRITERIA]
    + [f"norm_{c}" for c in CRITERIA]
)


def cmd_score(args) -> int:
    store = Store.open(args.store)
    d = _parse_date(args.date)
    region = parse_region(args.region)
    params = ScoreParams(
        coverage_m=args.radius if args.radius else store.config.score_coverage_m,
        window=parse_window(args.window, store, d),
    )
    scores, _ = scoring.evaluate_region(store, region, d, params=params)
    ranked = scoring.rank(scores, by=args.by, descending=not args.ascending) if scores else []
    rows = [
        [s.candidate.id, s.candidate.label, s.candidate.source,
         repr(s.candidate.location.lon), repr(s.candidate.location.lat), s.n_coverage]
        + [repr(s.raw[c]) for c in CRITERIA]
        + [repr(s.normalized[c]) for c in CRITERIA]
        for s in ranked
    ]
    out = sys.stdout if not args.out else open(args.out, "w", encoding="utf-8", newline="")
    try:
        w = csv.writer(out)
        w.writerow(SCORE_CSV_HEADER)
        w.writerows(rows)
    finally:
        if args.out:
            out.close()
    return 0


def cmd_serve(args) -> int:
    from .api import serve

    store = Store.open(args.store)
    serve(store, host=args.host, port=args.port, ui_dir=args.ui_dir)
    return 0


_COMMANDS = {
    "synth": cmd_synth,
    "ingest": cmd_ingest,
    "aggregate": cmd_aggregate,
    "score": cmd_score,
    "serve": cmd_serve,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0)
    try:
        return _COMMANDS[args.command](args)
    except HexcabError as e:
        print(f"hexcab {args.command}: {e}", file=sys.stderr)
        return 2
    except (OSError, ValueError) as e:
        print(f"hexcab {args.command}: {e}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
