/** Comparison view render models: region glyph, 2-D beeswarm, duration
 * circle pack, and the stacked-bar alternative.
 *
 * Beeswarm placement is deterministic: within each (hour, side) lane the
 * circles stack outward from the axis in canonical category order, greedily
 * and without overlap. Circle area encodes the count.
 */

import { CATEGORY_ORDER } from "../theme.js";
import type { RegionGlyph, SwarmCircle, SwarmMatrix } from "../types.js";

export interface RegionGlyphModel {
  pickups: number;
  dropoffs: number;
  pickupDeg: number; // pick-up share of the middle pie
  bars: { category: string; count: number; height: number }[]; // outer arc bars
}

export function regionGlyphLayout(g: RegionGlyph): RegionGlyphModel {
  const total = g.pickups + g.dropoffs;
  const maxPoi = Math.max(1, ...Object.values(g.poi_counts));
  return {
    pickups: g.pickups,
    dropoffs: g.dropoffs,
    pickupDeg: total > 0 ? (g.pickups / total) * 360 : 0,
    bars: CATEGORY_ORDER.map((category) => ({
      category,
      count: g.poi_counts[category] ?? 0,
      height: (g.poi_counts[category] ?? 0) / maxPoi,
    })),
  };
}

export interface SwarmCircleMark {
  hour: number;
  category: string;
  side: "pickup" | "dropoff";
  count: number;
  r: number;
  /** offset from the hour axis in lane units; positive = away from axis */
  offset: number;
  durationBuckets: number[] | null;
}

export interface BackgroundBar {
  hour: number;
  side: "pickup" | "dropoff";
  count: number;
  height: number; // 0..1 of the busiest hour on either side
}

export interface SwarmModel {
  mode: "beeswarm";
  circles: SwarmCircleMark[];
  background: BackgroundBar[];
  maxCount: number;
}

function backgroundBars(m: SwarmMatrix): BackgroundBar[] {
  const max = Math.max(1, ...m.pickup_hourly, ...m.dropoff_hourly);
  const bars: BackgroundBar[] = [];
  for (let hour = 0; hour < 24; hour++) {
    bars.push({ hour, side: "pickup", count: m.pickup_hourly[hour], height: m.pickup_hourly[hour] / max });
    bars.push({ hour, side: "dropoff", count: m.dropoff_hourly[hour], height: m.dropoff_hourly[hour] / max });
  }
  return bars;
}

function laneOrder(a: SwarmCircle, b: SwarmCircle): number {
  return CATEGORY_ORDER.indexOf(a.category) - CATEGORY_ORDER.indexOf(b.category);
}

export function beeswarmLayout(m: SwarmMatrix, maxRadius = 0.45): SwarmModel {
  const maxCount = Math.max(1, ...m.circles.map((c) => c.count));
  const circles: SwarmCircleMark[] = [];
  for (let hour = 0; hour < 24; hour++) {
    for (const side of ["pickup", "dropoff"] as const) {
      const lane = m.circles.filter((c) => c.hour === hour && c.side === side).sort(laneOrder);
      let cursor = 0;
      for (const c of lane) {
        const r = maxRadius * Math.sqrt(c.count / maxCount);
        circles.push({
          hour,
          category: c.category,
          side,
          count: c.count,
          r,
          offset: cursor + r,
          durationBuckets: c.duration_buckets ? [...c.duration_buckets] : null,
        });
        cursor += 2 * r; // next circle stacks beyond this one, tangent
      }
    }
  }
  return { mode: "beeswarm", circles, background: backgroundBars(m), maxCount };
}

export interface PackedCircle {
  bucket: number; // duration class index, darkens with length
  count: number;
  r: number;
  x: number;
  y: number;
}

/** Deterministic enclosure pack for the four duration-bucket circles:
 * largest at the origin, the rest placed tangent in fixed directions. */
export function circlePackLayout(buckets: number[], scale = 1): PackedCircle[] {
  const total = buckets.reduce((a, b) => a + b, 0);
  if (total === 0) return [];
  const order = buckets
    .map((count, bucket) => ({ bucket, count }))
    .filter((b) => b.count > 0)
    .sort((a, b) => b.count - a.count || a.bucket - b.bucket);
  const packed: PackedCircle[] = [];
  const dirs = [0, Math.PI, Math.PI / 2, -Math.PI / 2]; // right, left, up, down
  for (let i = 0; i < order.length; i++) {
    const r = scale * Math.sqrt(order[i].count / total);
    if (i === 0) {
      packed.push({ ...order[i], r, x: 0, y: 0 });
      continue;
    }
    const dir = dirs[(i - 1) % dirs.length];
    // tangent to the first circle; fixed directions keep circles disjoint
    const d = packed[0].r + r;
    packed.push({ ...order[i], r, x: d * Math.cos(dir), y: d * Math.sin(dir) });
  }
  return packed;
}

export interface StackedSegment {
  hour: number;
  side: "pickup" | "dropoff";
  category: string;
  count: number;
  y0: number; // stacked extent away from the axis, in max-hour units
  y1: number;
}

export interface StackedModel {
  mode: "stacked";
  segments: StackedSegment[];
  background: BackgroundBar[]; // pushed to the top and bottom edges
  maxHour: number;
}

/** Oversized regions overflow the beeswarm; beyond this many circles the
 * view falls back to stacked bars with a notice. */
export const BEESWARM_CIRCLE_LIMIT = 400;

export function shouldFallBackToStacked(m: SwarmMatrix, limit = BEESWARM_CIRCLE_LIMIT): boolean {
  return m.circles.length > limit;
}

export function stackedLayout(m: SwarmMatrix): StackedModel {
  const maxHour = Math.max(1, ...m.pickup_hourly, ...m.dropoff_hourly);
  const segments: StackedSegment[] = [];
  for (let hour = 0; hour < 24; hour++) {
    for (const side of ["pickup", "dropoff"] as const) {
      const lane = m.circles.filter((c) => c.hour === hour && c.side === side).sort(laneOrder);
      let cursor = 0;
      for (const c of lane) {
        const h = c.count / maxHour;
        segments.push({ hour, side, category: c.category, count: c.count, y0: cursor, y1: cursor + h });
        cursor += h;
      }
    }
  }
  return { mode: "stacked", segments, background: backgroundBars(m), maxHour };
}
