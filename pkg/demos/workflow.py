#!/usr/bin/env python3
"""End-to-end analyst walkthrough on a small synthetic week.

Mirrors a typical session: check the calendar for busy days, find the
hottest cells, inspect a region's hourly pattern and POI mix, then rank
candidate pick-up points inside it.
"""

import tempfile
from datetime import date
from pathlib import Path

from hexcab import aggregate as agg
from hexcab import scoring
from hexcab.config import EngineConfig
from hexcab.geo import HexIndex
from hexcab.ingest import ingest_dir
from hexcab.poi import load_pois
from hexcab.synth import SynthSpec, generate

work = Path(tempfile.mkdtemp(prefix="hexcab-demo-"))
print(f"working under {work}\n")

print("1) synthesizing one week for 200 taxis ...")
spec = SynthSpec(start=date(2019, 9, 2), days=7, taxis=200, trips_per_day=1200,
                 seed=5, n_pois=800, occupied_sample_s=60, cruise_sample_s=600)
summary = generate(spec, work)
print(f"   planted {summary['trips_planted']} trips "
      f"({summary['excluded']} deliberately rule-violating)\n")

print("2) ingesting ...")
engine = EngineConfig.load(work / "config.json")
poi_index, _ = load_pois(work / "poi.csv", work / "category_map.txt", engine.grid)
store = ingest_dir(work / "gps", poi_index, engine, work / "store")
c = store.report["counters"]
print(f"   extracted {c['trips_extracted']} trips, kept {c['vacant_samples']} vacant samples\n")

print("3) calendar (weekends should be darker):")
for cell in agg.calendar(store, date(2019, 9, 2), date(2019, 9, 8)):
    tag = "weekend" if cell.date.weekday() >= 5 else "weekday"
    print(f"   {cell.date}  {cell.total_trips:5d} trips  ({tag})")
print()

day = date(2019, 9, 2)
heat = agg.heatmap(store, day)
heat.sort(key=lambda hc: -hc[1])
region = {h for h, _ in heat[:12]}
print(f"4) hottest cells on {day}: "
      + ", ".join(f"{h.q}:{h.r} ({n})" for h, n in heat[:5]))

s = agg.day_summary(store, region, day)
peak = ",".join(str(h) for h in sorted(s.peak_hours))
print(f"   region of top-12 cells: {s.total} pick-ups, peak hours {{{peak}}}")
g = agg.region_glyph(store, region, day)
mix = ", ".join(f"{k}={v}" for k, v in g.poi_counts.items() if v)
print(f"   pick-ups {g.pickups} vs drop-offs {g.dropoffs}; POI mix: {mix}\n")

print("5) ranking candidate pick-up points (coverage 500 m, 07:00-10:00):")
day_start = engine.day_start_ts(day)
params = scoring.ScoreParams(coverage_m=500.0,
                             window=(day_start + 7 * 3600, day_start + 10 * 3600))
scores, stats = scoring.evaluate_region(store, region, day, params=params)
ranked = scoring.rank(scores, by="PR", descending=True)
print(f"   {'label':<28} {'PR':>6} {'AD':>6} {'PL':>6} {'TF':>6} {'DR':>6}")
for sc in ranked[:8]:
    n = sc.normalized
    print(f"   {sc.candidate.label[:28]:<28} "
          f"{n['PR']:6.2f} {n['AD']:6.2f} {n['PL']:6.2f} {n['TF']:6.2f} {n['DR']:6.2f}")
if stats:
    m = stats["PR"]
    print(f"\n   PR distribution across {len(ranked)} candidates: "
          f"min {m.minimum:.2f}, median {m.median:.2f}, max {m.maximum:.2f}")
print("\ndone — serve this store with:  hexcab serve --store", work / "store")
