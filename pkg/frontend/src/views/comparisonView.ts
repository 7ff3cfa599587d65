/** Comparison view: two region panels, each with a region glyph, the 2-D
 * beeswarm (pick-ups above the axis, drop-offs below), the duration circle
 * pack on click, and the stacked-bar alternative. Mode toggles and category
 * filters re-render from the cached payload without refetching. */

import type { ApiClient } from "../api.js";
import { banner, clear, el, svg } from "../dom.js";
import {
  beeswarmLayout,
  circlePackLayout,
  regionGlyphLayout,
  shouldFallBackToStacked,
  stackedLayout,
} from "../layout/swarm.js";
import type { Workbench } from "../state.js";
import { CATEGORY_ORDER, DURATION_LABELS, theme } from "../theme.js";
import { regionParam, type ComparePayload, type SwarmMatrix } from "../types.js";

const LANE_W = 26;
const HALF_H = 120;
const GLYPH_R = 46;

export class ComparisonView {
  private panels: HTMLElement;
  private controls: HTMLElement;
  private cached: ComparePayload | null = null;

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private bench: Workbench,
    private categories: string[],
  ) {
    const head = el("div", { class: "cmp-head" });
    head.append(el("h3", {}, "Comparison"));
    const toggle = el("button", { class: "tool" }, "switch to stacked bars");
    toggle.addEventListener("click", () => {
      this.bench.toggleChartMode();
      toggle.textContent =
        this.bench.get().chartMode === "beeswarm"
          ? "switch to stacked bars"
          : "switch to beeswarm";
    });
    head.append(toggle);
    this.controls = el("div", { class: "cat-filter" });
    for (const cat of categories) {
      const label = el("label", {});
      const box = el("input", { type: "checkbox", checked: "" }) as HTMLInputElement;
      box.addEventListener("change", () => {
        const picked = [...this.controls.querySelectorAll("input")]
          .map((node, i) => ((node as HTMLInputElement).checked ? categories[i] : null))
          .filter((c): c is string => c !== null);
        this.bench.set({ categoryFilter: picked.length === categories.length ? [] : picked });
      });
      label.append(box, document.createTextNode(cat));
      this.controls.append(label);
    }
    head.append(this.controls);
    root.append(head);
    this.panels = el("div", { class: "cmp-panels" });
    root.append(this.panels);

    bench.subscribe((_, changed) => {
      if (changed.has("date") || changed.has("regionA") || changed.has("regionB") ||
          changed.has("categoryFilter")) {
        void this.fetchAndRender();
      } else if (changed.has("chartMode")) {
        this.renderFromCache(); // lossless: cached payload, no refetch
      }
    });
  }

  private async fetchAndRender(): Promise<void> {
    const st = this.bench.get();
    if (!st.date || !st.regionA) {
      clear(this.panels);
      this.panels.append(el("div", { class: "placeholder" },
        "lasso one or two regions on the map to compare"));
      this.cached = null;
      return;
    }
    const a = regionParam(st.regionA.cells);
    const b = st.regionB ? regionParam(st.regionB.cells) : a;
    try {
      this.cached = await this.api.compare(a, b, st.date,
        st.categoryFilter.length ? st.categoryFilter : undefined);
      this.renderFromCache();
    } catch (e) {
      banner(this.root, `compare failed: ${(e as Error).message}`);
    }
  }

  private renderFromCache(): void {
    clear(this.panels);
    if (!this.cached) return;
    const names: ["a", "b"] = ["a", "b"];
    for (const key of names) {
      const side = this.cached[key];
      const panel = el("div", { class: "cmp-panel" });
      panel.append(el("h4", {}, `region ${key.toUpperCase()}`));
      panel.append(this.renderRegionGlyph(side.glyph));
      const wantBeeswarm = this.bench.get().chartMode === "beeswarm";
      if (wantBeeswarm && shouldFallBackToStacked(side.beeswarm)) {
        panel.append(el("div", { class: "hint overflow-notice" },
          "region too large for the beeswarm; showing stacked bars"));
        panel.append(this.renderStacked(side.stacked));
      } else {
        panel.append(wantBeeswarm ? this.renderBeeswarm(side.beeswarm)
                                  : this.renderStacked(side.stacked));
      }
      this.panels.append(panel);
    }
  }

  private renderRegionGlyph(glyph: ComparePayload["a"]["glyph"]): HTMLElement {
    const model = regionGlyphLayout(glyph);
    const box = el("div", { class: "region-glyph" });
    const s = svg("svg", { width: 2.6 * GLYPH_R + 150, height: 2.6 * GLYPH_R });
    const cx = 1.3 * GLYPH_R;
    const cy = 1.3 * GLYPH_R;
    const slice = (startDeg: number, endDeg: number, color: string, count: number) => {
      const rad = (d: number) => ((d - 90) * Math.PI) / 180;
      const large = endDeg - startDeg > 180 ? 1 : 0;
      const p = svg("path", {
        d: `M ${cx} ${cy} L ${cx + GLYPH_R * Math.cos(rad(startDeg))} ${cy + GLYPH_R * Math.sin(rad(startDeg))} ` +
          `A ${GLYPH_R} ${GLYPH_R} 0 ${large} 1 ${cx + GLYPH_R * Math.cos(rad(endDeg))} ${cy + GLYPH_R * Math.sin(rad(endDeg))} Z`,
        fill: color,
        "data-count": count,
      });
      return p;
    };
    if (model.pickupDeg > 0) s.append(slice(0, model.pickupDeg, theme.regionPickup, model.pickups));
    if (model.pickupDeg < 360) s.append(slice(model.pickupDeg, 360, theme.regionDropoff, model.dropoffs));
    // outer arc bars: one per category, height encodes the POI count
    model.bars.forEach((bar, i) => {
      const span = 360 / model.bars.length;
      const mid = (i + 0.5) * span - 90;
      const h = 4 + bar.height * (GLYPH_R * 0.5);
      const r0 = GLYPH_R + 4;
      const rad = (mid * Math.PI) / 180;
      const wrad = ((span * 0.7) / 2 / 180) * Math.PI;
      const p0 = [cx + r0 * Math.cos(rad - wrad), cy + r0 * Math.sin(rad - wrad)];
      const p1 = [cx + r0 * Math.cos(rad + wrad), cy + r0 * Math.sin(rad + wrad)];
      const p2 = [cx + (r0 + h) * Math.cos(rad + wrad), cy + (r0 + h) * Math.sin(rad + wrad)];
      const p3 = [cx + (r0 + h) * Math.cos(rad - wrad), cy + (r0 + h) * Math.sin(rad - wrad)];
      const arc = svg("path", {
        d: `M ${p0} L ${p1} L ${p2} L ${p3} Z`,
        fill: theme.category[bar.category],
        class: "poi-arc-bar",
        "data-count": bar.count,
      });
      const t = svg("title");
      t.textContent = `${bar.category}: ${bar.count} POIs`;
      arc.append(t);
      s.append(arc);
    });
    const legend = svg("text", { x: 2.6 * GLYPH_R + 6, y: cy - 6, class: "glyph-label" });
    legend.textContent = `pick-ups ${model.pickups}`;
    const legend2 = svg("text", { x: 2.6 * GLYPH_R + 6, y: cy + 12, class: "glyph-label" });
    legend2.textContent = `drop-offs ${model.dropoffs}`;
    s.append(legend, legend2);
    box.append(s);
    return box;
  }

  private renderBeeswarm(matrix: SwarmMatrix): HTMLElement {
    const model = beeswarmLayout(matrix);
    const box = el("div", { class: "swarm-box" });
    const W = 24 * LANE_W;
    const H = 2 * HALF_H + 20;
    const axisY = HALF_H + 10;
    const s = svg("svg", { width: W, height: H, class: "beeswarm" });
    for (const b of model.background) {
      const h = b.height * (HALF_H * 0.95);
      s.append(svg("rect", {
        x: b.hour * LANE_W + 2,
        y: b.side === "pickup" ? axisY - h : axisY,
        width: LANE_W - 4,
        height: h,
        fill: b.side === "pickup" ? theme.mapPickup : theme.mapDropoff,
        opacity: 0.15,
        class: "swarm-bg",
        "data-count": b.count,
      }));
    }
    s.append(svg("line", { x1: 0, x2: W, y1: axisY, y2: axisY, stroke: "#4a5568" }));
    const rUnit = LANE_W * 0.48;
    for (const c of model.circles) {
      const cy = c.side === "pickup" ? axisY - c.offset * rUnit * 2 : axisY + c.offset * rUnit * 2;
      const circle = svg("circle", {
        cx: c.hour * LANE_W + LANE_W / 2,
        cy,
        r: Math.max(1.5, c.r * rUnit * 2),
        fill: theme.category[c.category],
        class: "swarm-circle",
        "data-count": c.count,
        "data-hour": c.hour,
        "data-category": c.category,
      });
      const t = svg("title");
      t.textContent = `${c.category} ${c.side} at ${c.hour}:00 — ${c.count} trips`;
      circle.append(t);
      if (c.durationBuckets) {
        circle.addEventListener("click", () =>
          this.showCirclePack(box, c.category, c.hour, c.count, c.durationBuckets!));
      }
      s.append(circle);
    }
    box.append(s);
    return box;
  }

  private showCirclePack(
    host: HTMLElement, category: string, hour: number, count: number, buckets: number[],
  ): void {
    host.querySelector(".circle-pack")?.remove();
    const packed = circlePackLayout(buckets, 40);
    const wrap = el("div", { class: "circle-pack" });
    wrap.append(el("div", { class: "hint" },
      `${category} at ${hour}:00 — ${count} trips by duration`));
    const s = svg("svg", { width: 220, height: 180, viewBox: "-110 -90 220 180" });
    for (const p of packed) {
      const c = svg("circle", {
        cx: p.x, cy: p.y, r: p.r,
        fill: theme.durationBuckets[p.bucket],
        stroke: "#2d3748",
        class: "pack-circle",
        "data-count": p.count,
        "data-bucket": p.bucket,
      });
      const t = svg("title");
      t.textContent = `${DURATION_LABELS[p.bucket]}: ${p.count} trips`;
      c.append(t);
      s.append(c);
    }
    wrap.append(s);
    host.append(wrap);
  }

  private renderStacked(matrix: SwarmMatrix): HTMLElement {
    const model = stackedLayout(matrix);
    const box = el("div", { class: "swarm-box" });
    const W = 24 * LANE_W;
    const H = 2 * HALF_H + 20;
    const axisY = HALF_H + 10;
    const s = svg("svg", { width: W, height: H, class: "stacked" });
    // background pushed to the outer edges per the stacked variant
    for (const b of model.background) {
      const h = b.height * 8;
      s.append(svg("rect", {
        x: b.hour * LANE_W + 2,
        y: b.side === "pickup" ? 0 : H - h,
        width: LANE_W - 4,
        height: h,
        fill: b.side === "pickup" ? theme.mapPickup : theme.mapDropoff,
        opacity: 0.35,
        class: "stacked-bg",
        "data-count": b.count,
      }));
    }
    s.append(svg("line", { x1: 0, x2: W, y1: axisY, y2: axisY, stroke: "#4a5568" }));
    const unit = HALF_H * 0.85;
    for (const seg of model.segments) {
      const h = (seg.y1 - seg.y0) * unit;
      const y = seg.side === "pickup" ? axisY - seg.y1 * unit : axisY + seg.y0 * unit;
      const rect = svg("rect", {
        x: seg.hour * LANE_W + 3,
        y,
        width: LANE_W - 6,
        height: Math.max(0.5, h),
        fill: theme.category[seg.category],
        class: "stacked-seg",
        "data-count": seg.count,
        "data-hour": seg.hour,
        "data-category": seg.category,
      });
      const t = svg("title");
      t.textContent = `${seg.category} ${seg.side} at ${seg.hour}:00 — ${seg.count} trips`;
      rect.append(t);
      s.append(rect);
    }
    box.append(s);
    return box;
  }
}
