/** Rank view render models: the six-column score table, the radar polygons,
 * and the per-axis violin silhouettes. */

import type { CandidateScore, RankPayload, ViolinStats } from "../types.js";

export interface RankRow {
  id: number;
  label: string;
  source: string;
  bars: { criterion: string; value: number; raw: number }[];
}

export function tableModel(payload: RankPayload, criteria: string[]): RankRow[] {
  return payload.candidates.map((c) => ({
    id: c.id,
    label: c.label,
    source: c.source,
    bars: criteria.map((criterion) => ({
      criterion,
      value: c.normalized ? c.normalized[criterion] : 0,
      raw: c.raw[criterion],
    })),
  }));
}

/** Client-side re-sort identical to the server `by` ordering:
 * descending value, ties by ascending candidate id. */
export function sortRows(rows: RankRow[], by: string, descending = true): RankRow[] {
  const value = (r: RankRow) => r.bars.find((b) => b.criterion === by)?.value ?? 0;
  return [...rows].sort((a, b) => {
    const d = descending ? value(b) - value(a) : value(a) - value(b);
    return d !== 0 ? d : a.id - b.id;
  });
}

export interface RadarPolygon {
  id: number;
  label: string;
  highlighted: boolean;
  /** one vertex per axis: value in [0,1] at angle 360*k/axes from north */
  vertices: { axisIndex: number; value: number; x: number; y: number }[];
}

export function radarLayout(
  candidates: CandidateScore[],
  criteria: string[],
  selectedIds: number[],
): RadarPolygon[] {
  const n = criteria.length;
  return candidates.map((c) => ({
    id: c.id,
    label: c.label,
    highlighted: selectedIds.includes(c.id),
    vertices: criteria.map((criterion, axisIndex) => {
      const value = c.normalized ? c.normalized[criterion] : 0;
      const ang = (2 * Math.PI * axisIndex) / n - Math.PI / 2;
      return { axisIndex, value, x: value * Math.cos(ang), y: value * Math.sin(ang) };
    }),
  }));
}

export interface ViolinShape {
  criterion: string;
  /** symmetric half-width profile along the axis, one entry per bin */
  profile: { t0: number; t1: number; width: number; count: number }[];
  median: number;
  q1: number;
  q3: number;
}

export function violinShapes(
  violin: Record<string, ViolinStats> | null,
  criteria: string[],
): ViolinShape[] {
  if (!violin) return [];
  return criteria.map((criterion) => {
    const st = violin[criterion];
    const max = Math.max(1, ...st.histogram);
    const bins = st.histogram.length;
    return {
      criterion,
      profile: st.histogram.map((count, i) => ({
        t0: i / bins,
        t1: (i + 1) / bins,
        width: count / max,
        count,
      })),
      median: st.median,
      q1: st.q1,
      q3: st.q3,
    };
  });
}
