/** Temporal view: calendar heatmap, multiscale week/day/hour chart, and the
 * hourly line chart for a clicked day (city-wide until a region is chosen). */

import type { ApiClient } from "../api.js";
import { banner, clear, el, mixColor, svg } from "../dom.js";
import { calendarLayout } from "../layout/calendar.js";
import { hourlyLineLayout, temporalLayout } from "../layout/temporal.js";
import type { Workbench } from "../state.js";
import { theme } from "../theme.js";
import { regionParam, type DaySummary } from "../types.js";

const CELL = 26;
const GAP = 3;
const BAR_W = 96;
const BAR_H = 16;

export class TemporalView {
  private calendarBox: HTMLElement;
  private chartBox: HTMLElement;
  private hourlyBox: HTMLElement;

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private bench: Workbench,
    private dates: string[],
  ) {
    root.append(el("h3", {}, "Temporal"));
    this.calendarBox = el("div", { class: "calendar-box" });
    this.chartBox = el("div", { class: "chart-box" });
    this.hourlyBox = el("div", { class: "hourly-box" });
    root.append(this.calendarBox, this.chartBox, this.hourlyBox);
    bench.subscribe((_, changed) => {
      if (changed.has("regionA") || changed.has("date")) void this.renderChart();
      if (changed.has("date")) void this.renderHourly();
    });
    void this.renderCalendar();
    void this.renderChart();
  }

  private get range(): [string, string] {
    return [this.dates[0], this.dates[this.dates.length - 1]];
  }

  private async renderCalendar(): Promise<void> {
    try {
      const [from, to] = this.range;
      const cells = await this.api.calendar(from, to);
      const model = calendarLayout(cells);
      clear(this.calendarBox);
      const s = svg("svg", {
        width: 7 * (CELL + GAP),
        height: model.rows * (CELL + GAP),
        class: "calendar",
      });
      for (const m of model.marks) {
        const rect = svg("rect", {
          x: m.col * (CELL + GAP),
          y: m.row * (CELL + GAP),
          width: CELL,
          height: CELL,
          rx: 3,
          fill: mixColor(theme.calendarLow, theme.calendarHigh, m.intensity),
          class: "calendar-day" + (this.bench.get().date === m.date ? " selected" : ""),
          "data-date": m.date,
          "data-total": m.total,
        });
        rect.append(svg("title"));
        rect.querySelector("title")!.textContent = `${m.date}: ${m.total} trips`;
        rect.addEventListener("click", () => this.bench.set({ date: m.date }));
        s.append(rect);
      }
      this.calendarBox.append(s);
    } catch (e) {
      banner(this.root, `calendar failed: ${(e as Error).message}`);
    }
  }

  private async renderChart(): Promise<void> {
    try {
      const [from, to] = this.range;
      const region = this.bench.get().regionA;
      const days = await this.api.temporalRange(
        from,
        to,
        region ? regionParam(region.cells) : undefined,
      );
      const model = temporalLayout(days);
      clear(this.chartBox);
      this.chartBox.append(
        el("div", { class: "hint" }, region ? "region scope" : "city scope"),
      );
      const s = svg("svg", {
        width: 7 * (BAR_W + GAP),
        height: model.rows * (BAR_H + GAP) + 4,
        class: "multiscale",
      });
      for (let col = 0; col < 7; col++) {
        const gx = col * (BAR_W + GAP) + model.noonGuideX * BAR_W;
        s.append(svg("line", {
          x1: gx, x2: gx, y1: 0, y2: model.rows * (BAR_H + GAP),
          stroke: theme.noonGuide, "stroke-dasharray": "3,3", class: "noon-guide",
        }));
      }
      for (const b of model.bars) {
        const x = b.col * (BAR_W + GAP);
        const y = b.row * (BAR_H + GAP) + 2;
        const bar = svg("rect", {
          x: x + b.x0 * BAR_W,
          y,
          width: Math.max(1, (b.x1 - b.x0) * BAR_W),
          height: BAR_H - 4,
          fill: theme.mapPickup,
          class: "day-bar",
          "data-date": b.date,
          "data-total": b.total,
        });
        bar.addEventListener("click", () => this.bench.set({ date: b.date }));
        s.append(bar);
        for (const t of b.ticks) {
          s.append(svg("line", {
            x1: x + t.x * BAR_W, x2: x + t.x * BAR_W,
            y1: y - 2, y2: y + BAR_H - 2,
            stroke: theme.highlight, "stroke-width": 1.5, class: "peak-tick",
            "data-hour": t.hour,
          }));
        }
      }
      this.chartBox.append(s);
    } catch (e) {
      banner(this.root, `temporal chart failed: ${(e as Error).message}`);
    }
  }

  private async renderHourly(): Promise<void> {
    const date = this.bench.get().date;
    if (!date) return;
    try {
      const region = this.bench.get().regionA;
      const summary: DaySummary = await this.api.temporalDay(
        date,
        region ? regionParam(region.cells) : undefined,
      );
      const pts = hourlyLineLayout(summary);
      clear(this.hourlyBox);
      this.hourlyBox.append(el("div", { class: "hint" }, `hourly traffic on ${date}`));
      const W = 7 * (BAR_W + GAP);
      const H = 80;
      const s = svg("svg", { width: W, height: H, class: "hourly-line" });
      const path = pts
        .map((p, i) => `${i === 0 ? "M" : "L"} ${(p.hour + 0.5) * (W / 24)} ${H - 8 - p.y * (H - 16)}`)
        .join(" ");
      s.append(svg("path", { d: path, fill: "none", stroke: theme.mapPickup, "stroke-width": 2 }));
      for (const p of pts) {
        const dot = svg("circle", {
          cx: (p.hour + 0.5) * (W / 24), cy: H - 8 - p.y * (H - 16), r: 2.5,
          fill: theme.mapPickup, "data-count": p.count, class: "hour-dot",
        });
        dot.append(svg("title"));
        dot.querySelector("title")!.textContent = `${p.hour}:00 — ${p.count} trips`;
        s.append(dot);
      }
      this.hourlyBox.append(s);
    } catch (e) {
      banner(this.root, `hourly chart failed: ${(e as Error).message}`);
    }
  }
}
