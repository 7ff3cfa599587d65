/** Payload types mirroring the hexcab API JSON schemas. */

export interface HexId {
  q: number;
  r: number;
}

export interface EngineConfig {
  origin_lon: number;
  origin_lat: number;
  hex_width_m: number;
  bbox: [number, number, number, number];
  tz_offset_hours: number;
  poi_donut_radius_m: number;
  score_coverage_m: number;
  glyph_sectors: number;
}

export interface Meta {
  config: EngineConfig;
  dates: string[];
  categories: string[];
  criteria: string[];
}

export interface CalendarCell {
  date: string;
  total_trips: number;
}

export interface DaySummary {
  date: string;
  total: number;
  hourly: number[];
  peak_hours: number[];
}

export interface HeatCell {
  q: number;
  r: number;
  pickups: number;
}

export interface CellGlyph {
  q: number;
  r: number;
  pickups: number;
  dropoffs: number;
  pickup_sectors: number[];
  dropoff_sectors: number[];
}

export interface PoiDonut {
  poi: { id: number; lon: number; lat: number; name: string; category: string };
  pickups: number;
  dropoffs: number;
}

export interface RegionGlyph {
  pickups: number;
  dropoffs: number;
  poi_counts: Record<string, number>;
}

export interface SwarmCircle {
  hour: number;
  category: string;
  side: "pickup" | "dropoff";
  count: number;
  duration_buckets?: number[];
}

export interface SwarmMatrix {
  pickup_hourly: number[];
  dropoff_hourly: number[];
  circles: SwarmCircle[];
}

export interface ComparePayload {
  a: CompareSide;
  b: CompareSide;
}

export interface CompareSide {
  glyph: RegionGlyph;
  beeswarm: SwarmMatrix;
  stacked: SwarmMatrix;
}

export interface CandidateScore {
  id: number;
  label: string;
  source: "poi" | "user_added";
  lon: number;
  lat: number;
  n_coverage: number;
  raw: Record<string, number>;
  normalized: Record<string, number> | null;
}

export interface ViolinStats {
  min: number;
  q1: number;
  median: number;
  q3: number;
  max: number;
  histogram: number[];
}

export interface RankPayload {
  by: string;
  descending: boolean;
  candidates: CandidateScore[];
  violin: Record<string, ViolinStats> | null;
}

export interface ResolvePayload {
  cells: HexId[];
}

export interface LonLat {
  lon: number;
  lat: number;
}

export const cellKey = (c: HexId): string => `${c.q}:${c.r}`;

export const regionParam = (cells: HexId[]): string => cells.map(cellKey).join(",");
