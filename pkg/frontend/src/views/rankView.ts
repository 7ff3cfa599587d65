/** Rank view: sortable six-column score table, radar chart with per-axis
 * violins, and row-click highlighting linked to the radar and the map. */

import type { ApiClient } from "../api.js";
import { banner, clear, el, svg } from "../dom.js";
import { radarLayout, sortRows, tableModel, violinShapes } from "../layout/rank.js";
import type { Workbench } from "../state.js";
import { theme } from "../theme.js";
import { regionParam, type RankPayload } from "../types.js";

const RADAR_R = 110;

export class RankView {
  private tableBox: HTMLElement;
  private radarBox: HTMLElement;
  private payload: RankPayload | null = null;

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private bench: Workbench,
    private criteria: string[],
  ) {
    root.append(el("h3", {}, "Rank"));
    this.tableBox = el("div", { class: "rank-table" });
    this.radarBox = el("div", { class: "rank-radar" });
    root.append(this.tableBox, this.radarBox);
    bench.subscribe((_, changed) => {
      if (changed.has("date") || changed.has("regionA") || changed.has("rankBy") ||
          changed.has("candidatesVersion")) {
        void this.fetchAndRender();
      } else if (changed.has("selectedCandidateIds")) {
        this.renderRadar();
      }
    });
  }

  private async fetchAndRender(): Promise<void> {
    const st = this.bench.get();
    if (!st.date || !st.regionA) {
      clear(this.tableBox);
      clear(this.radarBox);
      this.tableBox.append(el("div", { class: "placeholder" },
        "candidate ranking appears once a date and region are selected"));
      this.payload = null;
      return;
    }
    try {
      this.payload = await this.api.rank(regionParam(st.regionA.cells), st.date, st.rankBy);
      this.renderTable();
      this.renderRadar();
    } catch (e) {
      banner(this.root, `rank failed: ${(e as Error).message}`);
    }
  }

  private renderTable(): void {
    clear(this.tableBox);
    if (!this.payload) return;
    if (this.payload.candidates.length === 0) {
      this.tableBox.append(el("div", { class: "placeholder" },
        "no candidate points in this region"));
      return;
    }
    const rows = sortRows(tableModel(this.payload, this.criteria), this.bench.get().rankBy);
    const table = el("table", { class: "scores" });
    const head = el("tr", {});
    head.append(el("th", {}, "candidate"));
    for (const c of this.criteria) {
      const th = el("th", { class: "sortable" }, c + (this.bench.get().rankBy === c ? " ▾" : ""));
      th.addEventListener("click", () => this.bench.set({ rankBy: c }));
      head.append(th);
    }
    table.append(head);
    const selected = this.bench.get().selectedCandidateIds;
    for (const row of rows) {
      const tr = el("tr", {
        class: "score-row" + (selected.includes(row.id) ? " selected" : ""),
        "data-id": String(row.id),
      });
      tr.append(el("td", { class: "label" }, row.label));
      for (const bar of row.bars) {
        const td = el("td", {});
        const wrap = el("div", { class: "bar-wrap", title: `raw ${bar.raw.toPrecision(4)}` });
        const fill = el("div", { class: "bar-fill" });
        fill.style.width = `${Math.round(bar.value * 100)}%`;
        fill.setAttribute("data-value", String(bar.value));
        wrap.append(fill);
        td.append(wrap);
        tr.append(td);
      }
      tr.addEventListener("click", () => this.bench.toggleCandidate(row.id));
      table.append(tr);
    }
    this.tableBox.append(table);
  }

  private renderRadar(): void {
    clear(this.radarBox);
    if (!this.payload || this.payload.candidates.length === 0) return;
    const selected = this.bench.get().selectedCandidateIds;
    const polys = radarLayout(this.payload.candidates, this.criteria, selected);
    const violins = violinShapes(this.payload.violin, this.criteria);
    const W = 2 * RADAR_R + 120;
    const H = 2 * RADAR_R + 80;
    const cx = W / 2;
    const cy = H / 2;
    const s = svg("svg", { width: W, height: H, class: "radar" });

    const n = this.criteria.length;
    for (let i = 0; i < n; i++) {
      const ang = (2 * Math.PI * i) / n - Math.PI / 2;
      const x = cx + RADAR_R * Math.cos(ang);
      const y = cy + RADAR_R * Math.sin(ang);
      s.append(svg("line", { x1: cx, y1: cy, x2: x, y2: y, stroke: "#cbd5e0" }));
      const label = svg("text", {
        x: cx + (RADAR_R + 16) * Math.cos(ang),
        y: cy + (RADAR_R + 16) * Math.sin(ang),
        "text-anchor": "middle",
        class: "axis-label",
      });
      label.textContent = this.criteria[i];
      s.append(label);

      // violin silhouette along the axis, widths from the histogram
      const shape = violins[i];
      if (shape) {
        const maxW = 10;
        for (const seg of shape.profile) {
          if (seg.count === 0) continue;
          const r0 = seg.t0 * RADAR_R;
          const r1 = seg.t1 * RADAR_R;
          const w = seg.width * maxW;
          const px = Math.cos(ang);
          const py = Math.sin(ang);
          const nx = -py; // axis normal
          const ny = px;
          const pts = [
            [cx + r0 * px + w * nx, cy + r0 * py + w * ny],
            [cx + r1 * px + w * nx, cy + r1 * py + w * ny],
            [cx + r1 * px - w * nx, cy + r1 * py - w * ny],
            [cx + r0 * px - w * nx, cy + r0 * py - w * ny],
          ];
          s.append(svg("polygon", {
            points: pts.map((p) => p.join(",")).join(" "),
            fill: theme.violin,
            opacity: 0.45,
            class: "violin-bin",
            "data-count": seg.count,
          }));
        }
      }
    }

    for (const poly of polys) {
      const pts = poly.vertices
        .map((v) => `${cx + v.x * RADAR_R},${cy + v.y * RADAR_R}`)
        .join(" ");
      s.append(svg("polygon", {
        points: pts,
        fill: "none",
        stroke: poly.highlighted ? theme.radarHighlight : theme.radarLine,
        "stroke-width": poly.highlighted ? 3 : 1,
        opacity: poly.highlighted ? 1 : 0.5,
        class: "radar-poly" + (poly.highlighted ? " highlighted" : ""),
        "data-id": String(poly.id),
      }));
    }
    this.radarBox.append(s);
  }
}
