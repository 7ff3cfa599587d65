/** Calendar heatmap render model: one shaded rectangle per day, rows = weeks,
 * columns = same weekday. Every mark carries the payload count verbatim. */

import type { CalendarCell } from "../types.js";

export interface CalendarMark {
  date: string;
  col: number; // weekday, 0 = Monday
  row: number; // week index from the first week in range
  total: number;
  intensity: number; // 0..1 share of the range maximum
}

export interface CalendarModel {
  marks: CalendarMark[];
  rows: number;
  maxTotal: number;
}

const dayMs = 86400_000;

function weekday(dateIso: string): number {
  const d = new Date(dateIso + "T00:00:00Z").getUTCDay();
  return (d + 6) % 7; // Monday-first
}

export function calendarLayout(cells: CalendarCell[]): CalendarModel {
  if (cells.length === 0) return { marks: [], rows: 0, maxTotal: 0 };
  const maxTotal = Math.max(...cells.map((c) => c.total_trips));
  const start = new Date(cells[0].date + "T00:00:00Z").getTime();
  const startCol = weekday(cells[0].date);
  const marks = cells.map((c) => {
    const offset = Math.round((new Date(c.date + "T00:00:00Z").getTime() - start) / dayMs);
    const slot = startCol + offset;
    return {
      date: c.date,
      col: slot % 7,
      row: Math.floor(slot / 7),
      total: c.total_trips,
      intensity: maxTotal > 0 ? c.total_trips / maxTotal : 0,
    };
  });
  return { marks, rows: Math.max(...marks.map((m) => m.row)) + 1, maxTotal };
}
