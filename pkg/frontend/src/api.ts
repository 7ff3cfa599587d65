/** Fetch client with per-key latest-wins cancellation and a session token
 * for user-added candidates. The base URL is the single configuration knob. */

import type {
  CalendarCell,
  ComparePayload,
  DaySummary,
  HeatCell,
  CellGlyph,
  LonLat,
  Meta,
  PoiDonut,
  RankPayload,
  ResolvePayload,
} from "./types.js";

export interface FetchLike {
  (url: string, init?: RequestInit): Promise<Response>;
}

export class ApiClient {
  private controllers = new Map<string, AbortController>();
  readonly sessionToken: string;

  constructor(
    readonly baseUrl: string = "",
    private fetchImpl: FetchLike = (...args) => fetch(...args),
  ) {
    this.sessionToken = `ui-${Math.random().toString(36).slice(2)}`;
  }

  /** GET with latest-wins per channel: a newer call aborts the older one. */
  private async get<T>(channel: string, path: string): Promise<T> {
    this.controllers.get(channel)?.abort();
    const ctl = new AbortController();
    this.controllers.set(channel, ctl);
    const resp = await this.fetchImpl(this.baseUrl + path, {
      signal: ctl.signal,
      headers: { "X-Session-Token": this.sessionToken },
    });
    if (!resp.ok) {
      const body = await resp.json().catch(() => ({ message: resp.statusText }));
      throw new Error(`${path}: ${body.code ?? resp.status} ${body.message ?? ""}`);
    }
    return resp.json() as Promise<T>;
  }

  private async post<T>(path: string, body: unknown): Promise<T> {
    const resp = await this.fetchImpl(this.baseUrl + path, {
      method: "POST",
      headers: { "Content-Type": "application/json", "X-Session-Token": this.sessionToken },
      body: JSON.stringify(body),
    });
    if (!resp.ok) {
      const err = await resp.json().catch(() => ({ message: resp.statusText }));
      throw new Error(`${path}: ${err.code ?? resp.status} ${err.message ?? ""}`);
    }
    return resp.json() as Promise<T>;
  }

  meta(): Promise<Meta> {
    return this.get("meta", "/api/meta");
  }

  calendar(from: string, to: string): Promise<CalendarCell[]> {
    return this.get("calendar", `/api/calendar?from=${from}&to=${to}`);
  }

  temporalRange(from: string, to: string, region?: string): Promise<DaySummary[]> {
    const r = region ? `&region=${region}` : "";
    return this.get("temporal", `/api/temporal?from=${from}&to=${to}${r}`);
  }

  temporalDay(date: string, region?: string): Promise<DaySummary> {
    const r = region ? `&region=${region}` : "";
    return this.get("temporal-day", `/api/temporal?date=${date}${r}`);
  }

  heatmap(date: string): Promise<HeatCell[]> {
    return this.get("heatmap", `/api/heatmap?date=${date}`);
  }

  glyphs(date: string, cells: string): Promise<CellGlyph[]> {
    return this.get("glyphs", `/api/glyphs?date=${date}&cells=${cells}`);
  }

  pois(date: string, bbox?: string, radius?: number): Promise<PoiDonut[]> {
    const b = bbox ? `&bbox=${bbox}` : "";
    const r = radius !== undefined ? `&radius=${radius}` : "";
    return this.get("pois", `/api/pois?date=${date}${b}${r}`);
  }

  resolve(polygon: LonLat[]): Promise<ResolvePayload> {
    return this.post("/api/region/resolve", { polygon });
  }

  compare(regionA: string, regionB: string, date: string, filter?: string[]): Promise<ComparePayload> {
    const f = filter && filter.length ? `&filter=${filter.join(",")}` : "";
    return this.get("compare", `/api/compare?regionA=${regionA}&regionB=${regionB}&date=${date}${f}`);
  }

  rank(region: string, date: string, by: string, coverage?: number, window?: string): Promise<RankPayload> {
    const d = coverage !== undefined ? `&D=${coverage}` : "";
    const w = window ? `&window=${window}` : "";
    return this.get("rank", `/api/rank?region=${region}&date=${date}&by=${by}${d}${w}`);
  }

  addCandidate(
    region: string,
    date: string,
    by: string,
    point: { lon: number; lat: number; label: string },
    coverage?: number,
  ): Promise<RankPayload> {
    const d = coverage !== undefined ? `&D=${coverage}` : "";
    return this.post(`/api/candidates?region=${region}&date=${date}&by=${by}${d}`, point);
  }
}
