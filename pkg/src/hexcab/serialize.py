"""JSON-ready dict builders shared by the HTTP API and the CLI reports.

Keeping one serializer per aggregate guarantees that endpoint payloads and
offline reports are value-identical for the same inputs.
"""

from __future__ import annotations

from .aggregate import BeeswarmMatrix, CellGlyph, DaySummary, PoiDonut, RegionGlyph
from .geo import HexIndex
from .scoring import CRITERIA, CandidateScore


def hex_dict(h: HexIndex) -> dict:
    return {"q": h.q, "r": h.r}


def calendar_payload(cells) -> list[dict]:
    return [{"date": c.date.isoformat(), "total_trips": c.total_trips} for c in cells]


def day_summary_payload(s: DaySummary) -> dict:
    return {
        "date": s.date.isoformat(),
        "total": s.total,
        "hourly": list(s.hourly),
        "peak_hours": sorted(s.peak_hours),
    }


def heatmap_payload(hm) -> list[dict]:
    return [{"q": h.q, "r": h.r, "pickups": c} for h, c in hm]


def glyph_payload(g: CellGlyph) -> dict:
    return {
        "q": g.hex.q,
        "r": g.hex.r,
        "pickups": g.pickups,
        "dropoffs": g.dropoffs,
        "pickup_sectors": list(g.pickup_sectors),
        "dropoff_sectors": list(g.dropoff_sectors),
    }


def glyphs_payload(glyphs) -> list[dict]:
    return [glyph_payload(g) for g in glyphs]


def donut_payload(d: PoiDonut) -> dict:
    return {
        "poi": {
            "id": d.poi.id,
            "lon": d.poi.location.lon,
            "lat": d.poi.location.lat,
            "name": d.poi.name,
            "category": d.poi.category,
        },
        "pickups": d.pickups,
        "dropoffs": d.dropoffs,
    }


def donuts_payload(donuts) -> list[dict]:
    return [donut_payload(d) for d in donuts]


def region_glyph_payload(g: RegionGlyph) -> dict:
    return {"pickups": g.pickups, "dropoffs": g.dropoffs, "poi_counts": dict(g.poi_counts)}


def swarm_payload(m: BeeswarmMatrix) -> dict:
    return {
        "pickup_hourly": list(m.pickup_hourly),
        "dropoff_hourly": list(m.dropoff_hourly),
        "circles": [
            {
                "hour": c.hour,
                "category": c.category,
                "side": c.side,
                "count": c.count,
                **(
                    {"duration_buckets": list(c.duration_buckets)}
                    if c.duration_buckets is not None
                    else {}
                ),
            }
            for c in m.circles
        ],
    }


def score_payload(s: CandidateScore) -> dict:
    return {
        "id": s.candidate.id,
        "label": s.candidate.label,
        "source": s.candidate.source,
        "lon": s.candidate.location.lon,
        "lat": s.candidate.location.lat,
        "n_coverage": s.n_coverage,
        "raw": {c: s.raw[c] for c in CRITERIA},
        "normalized": {c: s.normalized[c] for c in CRITERIA} if s.normalized else None,
    }


def violin_payload(stats) -> dict | None:
    if stats is None:
        return None
    return {
        crit: {
            "min": st.minimum,
            "q1": st.q1,
            "median": st.median,
            "q3": st.q3,
            "max": st.maximum,
            "histogram": list(st.histogram),
        }
        for crit, st in stats.items()
    }


def rank_payload(ranked, stats, by: str, descending: bool) -> dict:
    return {
        "by": by,
        "descending": descending,
        "candidates": [score_payload(s) for s in ranked],
        "violin": violin_payload(stats),
    }
