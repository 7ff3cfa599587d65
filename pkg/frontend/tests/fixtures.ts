/** Hand-written payload fixtures mirroring the API schemas. */

import type {
  CalendarCell,
  CellGlyph,
  DaySummary,
  EngineConfig,
  HeatCell,
  PoiDonut,
  RankPayload,
  RegionGlyph,
  SwarmMatrix,
} from "../src/types.js";

export const CONFIG: EngineConfig = {
  origin_lon: 114.0,
  origin_lat: 22.5,
  hex_width_m: 400,
  bbox: [113.85, 22.35, 114.15, 22.65],
  tz_offset_hours: 8,
  poi_donut_radius_m: 200,
  score_coverage_m: 500,
  glyph_sectors: 8,
};

export const CALENDAR: CalendarCell[] = [
  { date: "2019-09-02", total_trips: 3000 },
  { date: "2019-09-03", total_trips: 3000 },
  { date: "2019-09-04", total_trips: 2800 },
  { date: "2019-09-05", total_trips: 3100 },
  { date: "2019-09-06", total_trips: 3000 },
  { date: "2019-09-07", total_trips: 3900 },
  { date: "2019-09-08", total_trips: 3905 },
];

const uniformHourly = Array(24).fill(10) as number[];

export const UNIFORM_DAYS: DaySummary[] = [
  { date: "2019-09-02", total: 240, hourly: [...uniformHourly], peak_hours: [] },
  { date: "2019-09-03", total: 240, hourly: [...uniformHourly], peak_hours: [] },
  { date: "2019-09-04", total: 240, hourly: [...uniformHourly], peak_hours: [] },
];

export const PEAKED_DAY: DaySummary = {
  date: "2019-09-05",
  total: 300,
  hourly: [
    2, 2, 2, 2, 2, 2, 30, 60, 40, 10, 10, 10,
    10, 10, 10, 10, 10, 20, 40, 10, 2, 2, 2, 2,
  ],
  peak_hours: [6, 7, 8, 17, 18],
};

export const HEAT: HeatCell[] = [
  { q: 0, r: 0, pickups: 120 },
  { q: 1, r: 0, pickups: 60 },
  { q: 0, r: 1, pickups: 30 },
  { q: -2, r: 3, pickups: 7 },
];

export const GLYPHS: CellGlyph[] = [
  {
    q: 0, r: 0, pickups: 24, dropoffs: 12,
    pickup_sectors: [4, 0, 8, 0, 6, 0, 6, 0],
    dropoff_sectors: [0, 3, 0, 3, 0, 3, 0, 3],
  },
  {
    q: 1, r: 0, pickups: 5, dropoffs: 9,
    pickup_sectors: [0, 0, 5, 0, 0, 0, 0, 0],
    dropoff_sectors: [9, 0, 0, 0, 0, 0, 0, 0],
  },
];

export const DONUTS: PoiDonut[] = [
  { poi: { id: 3, lon: 114.001, lat: 22.501, name: "subway_station 3", category: "traffic" }, pickups: 17, dropoffs: 5 },
  { poi: { id: 9, lon: 113.999, lat: 22.499, name: "apartment_block 9", category: "living" }, pickups: 2, dropoffs: 11 },
];

export const REGION_GLYPH: RegionGlyph = {
  pickups: 420,
  dropoffs: 380,
  poi_counts: { company: 4, education: 1, entertainment: 7, living: 12, public_service: 0, traffic: 3 },
};

export const SWARM: SwarmMatrix = {
  pickup_hourly: [
    0, 0, 0, 0, 0, 0, 0, 12, 20, 6, 0, 0,
    0, 0, 0, 0, 0, 0, 9, 0, 0, 0, 0, 0,
  ],
  dropoff_hourly: [
    0, 0, 0, 0, 0, 0, 0, 4, 16, 8, 0, 0,
    0, 0, 0, 0, 0, 0, 14, 0, 0, 0, 0, 0,
  ],
  circles: [
    { hour: 7, category: "living", side: "pickup", count: 8, duration_buckets: [2, 4, 1, 1] },
    { hour: 7, category: "company", side: "pickup", count: 4, duration_buckets: [0, 1, 2, 1] },
    { hour: 8, category: "living", side: "pickup", count: 14, duration_buckets: [3, 6, 3, 2] },
    { hour: 8, category: "traffic", side: "pickup", count: 6, duration_buckets: [1, 2, 2, 1] },
    { hour: 9, category: "entertainment", side: "pickup", count: 6, duration_buckets: [2, 2, 1, 1] },
    { hour: 18, category: "company", side: "pickup", count: 9, duration_buckets: [1, 3, 3, 2] },
    { hour: 7, category: "company", side: "dropoff", count: 4, duration_buckets: [1, 1, 1, 1] },
    { hour: 8, category: "company", side: "dropoff", count: 10, duration_buckets: [2, 4, 2, 2] },
    { hour: 8, category: "living", side: "dropoff", count: 6, duration_buckets: [2, 2, 1, 1] },
    { hour: 9, category: "entertainment", side: "dropoff", count: 8, duration_buckets: [3, 3, 1, 1] },
    { hour: 18, category: "living", side: "dropoff", count: 14, duration_buckets: [4, 5, 3, 2] },
  ],
};

export const STACKED: SwarmMatrix = {
  pickup_hourly: SWARM.pickup_hourly,
  dropoff_hourly: SWARM.dropoff_hourly,
  circles: SWARM.circles.map(({ duration_buckets, ...rest }) => rest),
};

export const RANK: RankPayload = {
  by: "AD",
  descending: true,
  candidates: [
    {
      id: 2, label: "subway_station 3", source: "poi", lon: 114.001, lat: 22.501, n_coverage: 40,
      raw: { AD: 0.61, AS: 38.0, PL: 0.667, TF: 0.4, PR: 24.0, DR: 11.0 },
      normalized: { AD: 1.0, AS: 0.5, PL: 1.0, TF: 0.8, PR: 1.0, DR: 0.7 },
    },
    {
      id: 5, label: "apartment_block 9", source: "poi", lon: 113.999, lat: 22.499, n_coverage: 22,
      raw: { AD: 0.44, AS: 44.0, PL: 0.5, TF: 0.5, PR: 12.0, DR: 14.0 },
      normalized: { AD: 0.5, AS: 1.0, PL: 0.5, TF: 1.0, PR: 0.4, DR: 1.0 },
    },
    {
      id: 7, label: "added point", source: "user_added", lon: 114.002, lat: 22.502, n_coverage: 8,
      raw: { AD: 0.27, AS: 30.0, PL: 0.333, TF: 0.1, PR: 4.0, DR: 3.0 },
      normalized: { AD: 0.0, AS: 0.0, PL: 0.0, TF: 0.0, PR: 0.0, DR: 0.0 },
    },
    {
      id: 9, label: "tie partner", source: "poi", lon: 114.003, lat: 22.503, n_coverage: 8,
      raw: { AD: 0.27, AS: 31.0, PL: 0.333, TF: 0.1, PR: 4.0, DR: 3.0 },
      normalized: { AD: 0.0, AS: 0.1, PL: 0.0, TF: 0.0, PR: 0.0, DR: 0.0 },
    },
  ],
  violin: {
    AD: { min: 0, q1: 0.125, median: 0.25, q3: 0.625, max: 1, histogram: mkHist([0, 0, 10, 19]) },
    AS: { min: 0, q1: 0.075, median: 0.3, q3: 0.625, max: 1, histogram: mkHist([0, 2, 10, 19]) },
    PL: { min: 0, q1: 0, median: 0.25, q3: 0.625, max: 1, histogram: mkHist([0, 0, 10, 19]) },
    TF: { min: 0, q1: 0, median: 0.65, q3: 0.85, max: 1, histogram: mkHist([0, 0, 16, 19]) },
    PR: { min: 0, q1: 0, median: 0.2, q3: 0.55, max: 1, histogram: mkHist([0, 0, 8, 19]) },
    DR: { min: 0, q1: 0, median: 0.85, q3: 1, max: 1, histogram: mkHist([0, 0, 14, 19]) },
  },
};

function mkHist(ones: number[]): number[] {
  const h = Array(20).fill(0) as number[];
  for (const i of ones) h[i] += 1;
  return h;
}

export const CRITERIA = ["AD", "AS", "PL", "TF", "PR", "DR"];
