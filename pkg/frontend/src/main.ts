/** Workbench entry point: fetch /api/meta, wire the header controls, and
 * mount the four coordinated views. */

import { ApiClient } from "./api.js";
import { banner, el } from "./dom.js";
import { Workbench } from "./state.js";
import { ComparisonView } from "./views/comparisonView.js";
import { MapView } from "./views/mapView.js";
import { RankView } from "./views/rankView.js";
import { TemporalView } from "./views/temporalView.js";

declare global {
  interface Window {
    HEXCAB_API_BASE?: string;
  }
}

async function boot(): Promise<void> {
  const rootEl = document.getElementById("app");
  if (!rootEl) throw new Error("missing #app container");
  const api = new ApiClient(window.HEXCAB_API_BASE ?? "");
  const bench = new Workbench();

  let meta;
  try {
    meta = await api.meta();
  } catch (e) {
    banner(rootEl, `cannot reach the hexcab API: ${(e as Error).message}`);
    return;
  }

  const header = el("div", { class: "topbar" });
  header.append(el("span", { class: "brand" }, "hexcab workbench"));

  const dateSel = el("select", { class: "date-select" }) as HTMLSelectElement;
  for (const d of meta.dates) dateSel.append(el("option", { value: d }, d));
  dateSel.addEventListener("change", () => bench.set({ date: dateSel.value }));
  header.append(el("label", {}, "date "), dateSel);

  const viewNames = ["temporal", "map", "comparison", "rank"] as const;
  for (const name of viewNames) {
    const label = el("label", { class: "view-toggle" });
    const box = el("input", { type: "checkbox", checked: "" }) as HTMLInputElement;
    box.addEventListener("change", () => {
      const section = document.getElementById(`view-${name}`);
      if (section) section.style.display = box.checked ? "" : "none";
      bench.set({
        visibleViews: { ...bench.get().visibleViews, [name]: box.checked },
      });
    });
    label.append(box, document.createTextNode(name));
    header.append(label);
  }
  rootEl.append(header);

  const grid = el("div", { class: "view-grid" });
  const sections: Record<string, HTMLElement> = {};
  for (const name of viewNames) {
    const section = el("section", { id: `view-${name}`, class: `view ${name}` });
    sections[name] = section;
    grid.append(section);
  }
  rootEl.append(grid);

  new TemporalView(sections.temporal, api, bench, meta.dates);
  const map = new MapView(sections.map, api, bench, meta);
  new ComparisonView(sections.comparison, api, bench, meta.categories);
  new RankView(sections.rank, api, bench, meta.criteria);

  // initial date: first date that has trips, else the first date
  const initial = meta.dates.length > 1 ? meta.dates[1] : meta.dates[0];
  dateSel.value = initial;
  bench.set({ date: initial });
  void map.render();
}

void boot();
