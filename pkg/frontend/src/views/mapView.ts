/** Map view: hex heatmap, per-cell direction glyphs, POI donuts, lasso
 * region selection, and click-to-add candidate points.
 *
 * The SVG draws in map meters with the y axis flipped (north up); zoom in
 * to the glyph/POI level happens by narrowing the viewBox around the
 * current selection.
 */

import type { ApiClient } from "../api.js";
import { banner, clear, el, mixColor, svg } from "../dom.js";
import {
  arcPath,
  donutLayout,
  glyphLayout,
  gridMath,
  heatLayout,
  lassoToPolygon,
  type GridMath,
} from "../layout/hexmap.js";
import type { Workbench } from "../state.js";
import { theme } from "../theme.js";
import { cellKey, regionParam, type HexId, type Meta } from "../types.js";

const VIEW_W = 760;
const VIEW_H = 560;

export class MapView {
  private grid: GridMath;
  private stage: SVGElement;
  private lassoPts: { x: number; y: number }[] = [];
  private lassoPath: SVGElement | null = null;
  private selectedKeys = new Set<string>();

  constructor(
    private root: HTMLElement,
    private api: ApiClient,
    private bench: Workbench,
    private meta: Meta,
  ) {
    this.grid = gridMath(meta.config);
    const head = el("div", { class: "map-head" });
    head.append(el("h3", {}, "Map"));
    const pointBtn = el("button", { class: "tool" }, "add point: off");
    pointBtn.addEventListener("click", () => {
      this.bench.set({ pointMode: !this.bench.get().pointMode });
      pointBtn.textContent = `add point: ${this.bench.get().pointMode ? "on" : "off"}`;
    });
    const clearBtn = el("button", { class: "tool" }, "clear selection");
    clearBtn.addEventListener("click", () => this.bench.clearRegions());
    head.append(pointBtn, clearBtn);
    root.append(head);

    this.stage = svg("svg", {
      class: "map-stage",
      width: VIEW_W,
      height: VIEW_H,
      viewBox: this.viewBox(),
    });
    root.append(this.stage as unknown as HTMLElement);
    this.wireLasso();
    bench.subscribe((_, changed) => {
      if (changed.has("date")) void this.render();
      if (changed.has("regionA") || changed.has("regionB")) {
        this.selectedKeys = new Set(
          [
            ...(bench.get().regionA?.cells ?? []),
            ...(bench.get().regionB?.cells ?? []),
          ].map(cellKey),
        );
        void this.render();
      }
    });
  }

  private viewBox(): string {
    const [minLon, minLat, maxLon, maxLat] = this.meta.config.bbox;
    const lo = this.grid.toXy({ lon: minLon, lat: minLat });
    const hi = this.grid.toXy({ lon: maxLon, lat: maxLat });
    // y flipped: viewBox top is max northing
    return `${lo.x} ${-hi.y} ${hi.x - lo.x} ${hi.y - lo.y}`;
  }

  private toMapCoords(ev: MouseEvent): { x: number; y: number } {
    const rect = (this.stage as unknown as SVGGraphicsElement).getBoundingClientRect();
    const [vx, vy, vw, vh] = (this.stage.getAttribute("viewBox") ?? "0 0 1 1")
      .split(" ")
      .map(Number);
    const x = vx + ((ev.clientX - rect.left) / rect.width) * vw;
    const yScreen = vy + ((ev.clientY - rect.top) / rect.height) * vh;
    return { x, y: -yScreen }; // back to y-up map meters
  }

  private wireLasso(): void {
    let drawing = false;
    this.stage.addEventListener("mousedown", (ev) => {
      if (this.bench.get().pointMode) return;
      drawing = true;
      this.lassoPts = [this.toMapCoords(ev as MouseEvent)];
    });
    this.stage.addEventListener("mousemove", (ev) => {
      if (!drawing) return;
      this.lassoPts.push(this.toMapCoords(ev as MouseEvent));
      this.drawLasso();
    });
    this.stage.addEventListener("mouseup", () => {
      if (drawing) {
        drawing = false;
        void this.finishLasso();
      }
    });
    this.stage.addEventListener("click", (ev) => {
      if (!this.bench.get().pointMode) return;
      void this.addCandidate(this.toMapCoords(ev as MouseEvent));
    });
  }

  private drawLasso(): void {
    this.lassoPath?.remove();
    const d = this.lassoPts.map((p, i) => `${i === 0 ? "M" : "L"} ${p.x} ${-p.y}`).join(" ");
    this.lassoPath = svg("path", {
      d: `${d} Z`,
      class: "lasso",
      fill: "rgba(237,137,54,0.15)",
      stroke: theme.highlight,
      "stroke-dasharray": "6,4",
    });
    this.stage.append(this.lassoPath);
  }

  private async finishLasso(): Promise<void> {
    const pts = this.lassoPts;
    this.lassoPts = [];
    if (pts.length < 3) {
      this.lassoPath?.remove();
      return;
    }
    const polygon = lassoToPolygon(pts, this.grid);
    try {
      const resolved = await this.api.resolve(polygon);
      this.bench.applyResolvedRegion(resolved.cells, polygon);
    } catch (e) {
      this.lassoPath?.remove();
      banner(this.root, `region resolve failed: ${(e as Error).message}`);
    }
  }

  private async addCandidate(p: { x: number; y: number }): Promise<void> {
    const st = this.bench.get();
    const region = st.regionA;
    if (!st.date || !region) {
      banner(this.root, "pick a date and lasso a region before adding points");
      return;
    }
    const lonlat = this.grid.toLonLat(p.x, p.y);
    try {
      await this.api.addCandidate(regionParam(region.cells), st.date, st.rankBy, {
        lon: lonlat.lon,
        lat: lonlat.lat,
        label: `added ${lonlat.lon.toFixed(4)},${lonlat.lat.toFixed(4)}`,
      });
      this.bench.bumpCandidates();
    } catch (e) {
      banner(this.root, `add candidate failed: ${(e as Error).message}`);
    }
  }

  async render(): Promise<void> {
    const date = this.bench.get().date;
    if (!date) return;
    try {
      clear(this.stage as unknown as Element);
      const heat = heatLayout(await this.api.heatmap(date), this.grid);
      for (const h of heat) {
        const poly = svg("polygon", {
          points: h.corners.map(([x, y]) => `${x},${-y}`).join(" "),
          fill: mixColor(theme.heatLow, theme.heatHigh, h.intensity),
          class:
            "heat-cell" + (this.selectedKeys.has(cellKey(h.cell)) ? " selected" : ""),
          "data-cell": cellKey(h.cell),
          "data-count": h.count,
        });
        poly.append(svg("title"));
        poly.querySelector("title")!.textContent = `${cellKey(h.cell)}: ${h.count} pick-ups`;
        this.stage.append(poly);
      }

      const selected = [...this.selectedKeys];
      if (selected.length > 0 && selected.length <= 150) {
        const glyphs = glyphLayout(await this.api.glyphs(date, selected.join(",")), this.grid);
        for (const g of glyphs) {
          const group = svg("g", { class: "cell-glyph", "data-cell": cellKey(g.cell) });
          for (const slice of g.pie) {
            if (slice.endDeg - slice.startDeg <= 0) continue;
            group.append(svg("path", {
              d: arcPath(g.cx, -g.cy, {
                side: slice.side, sector: -1, count: slice.count,
                startDeg: slice.startDeg, endDeg: slice.endDeg,
                innerR: 0, outerR: slice.r,
              }),
              fill: slice.side === "pickup" ? theme.mapPickup : theme.mapDropoff,
              "data-count": slice.count,
            }));
          }
          for (const ring of g.rings) {
            group.append(svg("path", {
              d: arcPath(g.cx, -g.cy, ring),
              fill: ring.side === "pickup" ? theme.mapPickup : theme.mapDropoff,
              opacity: 0.85,
              "data-count": ring.count,
              class: `ring-${ring.side}`,
            }));
          }
          this.stage.append(group);
        }

        const donuts = donutLayout(
          await this.api.pois(date, undefined, this.meta.config.poi_donut_radius_m),
          this.grid,
        );
        const keep = new Set(selected);
        for (const d of donuts) {
          const cell = this.nearestCellKey(d.cx, d.cy);
          if (!keep.has(cell)) continue;
          const r = this.grid.width * 0.1;
          const group = svg("g", { class: "poi-donut", "data-poi": d.poiId });
          group.append(svg("circle", {
            cx: d.cx, cy: -d.cy, r: r * 0.55,
            fill: theme.category[d.category] ?? "#888",
          }));
          if (d.pickupDeg > 0) {
            group.append(svg("path", {
              d: arcPath(d.cx, -d.cy, {
                side: "pickup", sector: -1, count: d.pickups,
                startDeg: 0, endDeg: d.pickupDeg, innerR: r * 0.7, outerR: r,
              }),
              fill: theme.mapPickup, "data-count": d.pickups,
            }));
          }
          if (d.pickupDeg < 360) {
            group.append(svg("path", {
              d: arcPath(d.cx, -d.cy, {
                side: "dropoff", sector: -1, count: d.dropoffs,
                startDeg: d.pickupDeg, endDeg: 360, innerR: r * 0.7, outerR: r,
              }),
              fill: theme.mapDropoff, "data-count": d.dropoffs,
            }));
          }
          const title = svg("title");
          title.textContent = `${d.name} (${d.category}): ${d.pickups} pick-ups / ${d.dropoffs} drop-offs nearby`;
          group.append(title);
          this.stage.append(group);
        }
      }
    } catch (e) {
      banner(this.root, `map layers failed: ${(e as Error).message}`);
    }
  }

  private nearestCellKey(x: number, y: number): string {
    // axial rounding identical to the server's cube rounding
    const size = this.meta.config.hex_width_m / Math.sqrt(3);
    const qf = ((Math.sqrt(3) / 3) * x - y / 3) / size;
    const rf = ((2 / 3) * y) / size;
    let q = Math.round(qf);
    let r = Math.round(rf);
    const s = Math.round(-qf - rf);
    const dq = Math.abs(q - qf);
    const dr = Math.abs(r - rf);
    const ds = Math.abs(s - (-qf - rf));
    if (dq > dr && dq > ds) q = -r - s;
    else if (dr > ds) r = -q - s;
    return `${q}:${r}`;
  }
}
