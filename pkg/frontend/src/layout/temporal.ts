/** Multiscale temporal chart render model.
 *
 * Rows are weeks, columns are weekdays. Each day is a horizontal bar whose
 * length encodes the daily total; the bar is split into 24 equal slots and
 * peak hours get a tick at their slot. Bars in a column share a center line,
 * with a dashed guide at the 12:00 slot of the full-length bar. The known
 * design flaw is kept as designed: bar length encodes volume while tick
 * position encodes the hour, so ticks of the same hour do not align across
 * bars of different lengths.
 */

import type { DaySummary } from "../types.js";

export interface DayBar {
  date: string;
  col: number;
  row: number;
  total: number;
  x0: number; // bar start within the column cell, 0..1
  x1: number; // bar end
  ticks: { hour: number; x: number }[];
}

export interface TemporalModel {
  bars: DayBar[];
  rows: number;
  noonGuideX: number; // dashed line position within the column cell
  maxTotal: number;
}

function weekday(dateIso: string): number {
  return (new Date(dateIso + "T00:00:00Z").getUTCDay() + 6) % 7;
}

const dayMs = 86400_000;

export function temporalLayout(days: DaySummary[]): TemporalModel {
  if (days.length === 0) return { bars: [], rows: 0, noonGuideX: 0.5, maxTotal: 0 };
  const maxTotal = Math.max(1, ...days.map((d) => d.total));
  const start = new Date(days[0].date + "T00:00:00Z").getTime();
  const startCol = weekday(days[0].date);
  const bars = days.map((d) => {
    const offset = Math.round((new Date(d.date + "T00:00:00Z").getTime() - start) / dayMs);
    const slot = startCol + offset;
    const len = d.total / maxTotal;
    const x0 = 0.5 - len / 2; // centered within the column
    const x1 = 0.5 + len / 2;
    const ticks = [...d.peak_hours]
      .sort((a, b) => a - b)
      .map((hour) => ({ hour, x: x0 + ((hour + 0.5) / 24) * len }));
    return { date: d.date, col: slot % 7, row: Math.floor(slot / 7), total: d.total, x0, x1, ticks };
  });
  return { bars, rows: Math.max(...bars.map((b) => b.row)) + 1, noonGuideX: 0.5, maxTotal };
}

export interface HourlyPoint {
  hour: number;
  count: number;
  y: number; // 0..1 share of the peak hour
}

export function hourlyLineLayout(summary: DaySummary): HourlyPoint[] {
  const max = Math.max(1, ...summary.hourly);
  return summary.hourly.map((count, hour) => ({ hour, count, y: count / max }));
}
