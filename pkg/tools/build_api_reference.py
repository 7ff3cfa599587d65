#!/usr/bin/env python3
"""Generate docs/api_reference.md from live fixture responses.

Usage: python3 tools/build_api_reference.py <store_dir> [out_md]

Spins an in-process test client against the given store, hits every
endpoint (success and error paths), and writes the verbatim payloads so the
reference can never drift from the implementation.
"""

import json
import sys
from datetime import date
from pathlib import Path

from fastapi.testclient import TestClient

from hexcab.api import create_app
from hexcab.store import Store

SECTIONS = [
    ("GET /api/calendar?from&to", "get", "/api/calendar?from={d0}&to={d1}", None),
    ("POST /api/region/resolve", "post", "/api/region/resolve",
     {"polygon": [{"lon": 113.99, "lat": 22.49}, {"lon": 114.01, "lat": 22.49},
                  {"lon": 114.01, "lat": 22.51}, {"lon": 113.99, "lat": 22.51}]}),
    ("GET /api/temporal?date&region", "get", "/api/temporal?date={d0}&region={region}", None),
    ("GET /api/heatmap?date", "get", "/api/heatmap?date={d0}", None),
    ("GET /api/glyphs?date&cells", "get", "/api/glyphs?date={d0}&cells={region}", None),
    ("GET /api/pois?date&bbox&radius", "get",
     "/api/pois?date={d0}&bbox=113.98,22.48,114.02,22.52&radius=300", None),
    ("GET /api/compare?regionA&regionB&date&filter", "get",
     "/api/compare?regionA={region}&regionB={region}&date={d0}&filter=living,traffic", None),
    ("GET /api/rank?region&date&D&window&by", "get",
     "/api/rank?region={region}&date={d0}&D=500&window=07:00-10:00&by=PR", None),
    ("POST /api/candidates?region&date&D", "post",
     "/api/candidates?region={region}&date={d0}&D=500",
     {"lon": 114.0, "lat": 22.5, "label": "example point"}),
]

ERRORS = [
    ("invalid_range", "get", "/api/calendar?from={d1}&to={d0}", None),
    ("invalid_polygon", "post", "/api/region/resolve",
     {"polygon": [{"lon": 114.0, "lat": 22.5}]}),
    ("invalid_radius", "get", "/api/pois?date={d0}&radius=-5", None),
    ("invalid_criterion", "get", "/api/rank?region={region}&date={d0}&by=NOPE", None),
]


def clip(payload, limit=3):
    """Shorten long lists so examples stay readable."""
    if isinstance(payload, list) and len(payload) > limit:
        return payload[:limit] + [f"... {len(payload) - limit} more entries"]
    if isinstance(payload, dict):
        return {k: clip(v, limit) for k, v in payload.items()}
    return payload


def main() -> int:
    if len(sys.argv) < 2:
        print(__doc__, file=sys.stderr)
        return 1
    store = Store.open(sys.argv[1])
    out = Path(sys.argv[2]) if len(sys.argv) > 2 else Path("docs/api_reference.md")
    client = TestClient(create_app(store))

    d0 = store.dates[1] if len(store.dates) > 1 else store.dates[0]
    d1 = store.dates[-1]
    arr = store.day_array(d0, "pickup")
    cells = sorted({(int(q), int(r)) for q, r in zip(arr["o_q"], arr["o_r"])})[:8]
    ctx = {
        "d0": d0.isoformat(),
        "d1": d1.isoformat(),
        "region": ",".join(f"{q}:{r}" for q, r in cells),
    }

    lines = [
        "# hexcab API reference",
        "",
        "Generated from live fixture responses by `tools/build_api_reference.py`;",
        "long lists are clipped for readability.",
        "",
    ]
    for title, method, url, body in SECTIONS:
        url = url.format(**ctx)
        resp = client.post(url, json=body) if method == "post" else client.get(url)
        lines += [f"## {title}", "", f"`{method.upper()} {url}`", ""]
        if body is not None:
            lines += ["Request body:", "```json", json.dumps(body, indent=2), "```", ""]
        lines += [f"Status {resp.status_code}:", "```json",
                  json.dumps(clip(resp.json()), indent=2), "```", ""]

    lines += ["## Error payloads", "",
              "Every error returns `{code, message}`; 4xx for client faults,",
              "5xx (`store_corrupt`) for store faults.", ""]
    for code, method, url, body in ERRORS:
        url = url.format(**ctx)
        resp = client.post(url, json=body) if method == "post" else client.get(url)
        lines += [f"### {code}", "", f"`{method.upper()} {url}` -> {resp.status_code}",
                  "```json", json.dumps(resp.json(), indent=2), "```", ""]

    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text("\n".join(lines) + "\n", encoding="utf-8")
    print(f"wrote {out}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
