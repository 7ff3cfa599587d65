/** Central view state with subscription-based linking between the four views.
 *
 * Selections flow one way: interactions mutate the state through the setters
 * here, and every subscribed view re-renders from the new state. Comparison
 * holds at most two regions (A, then B; further lassos replace B).
 */

import type { HexId, LonLat } from "./types.js";

export type ChartMode = "beeswarm" | "stacked";

export interface RegionSelection {
  cells: HexId[];
  polygon: LonLat[];
}

export interface ViewState {
  date: string | null;
  visibleViews: { temporal: boolean; map: boolean; comparison: boolean; rank: boolean };
  regionA: RegionSelection | null;
  regionB: RegionSelection | null;
  selectedCandidateIds: number[];
  categoryFilter: string[];
  chartMode: ChartMode;
  rankBy: string;
  pointMode: boolean;
  /** bumped whenever a session candidate is added so the rank view refetches */
  candidatesVersion: number;
}

export type Listener = (state: ViewState, changed: Set<keyof ViewState>) => void;

export function initialState(): ViewState {
  return {
    date: null,
    visibleViews: { temporal: true, map: true, comparison: true, rank: true },
    regionA: null,
    regionB: null,
    selectedCandidateIds: [],
    categoryFilter: [],
    chartMode: "beeswarm",
    rankBy: "AD",
    pointMode: false,
    candidatesVersion: 0,
  };
}

export class Workbench {
  private state: ViewState = initialState();
  private listeners: Listener[] = [];

  get(): ViewState {
    return this.state;
  }

  subscribe(fn: Listener): () => void {
    this.listeners.push(fn);
    return () => {
      this.listeners = this.listeners.filter((l) => l !== fn);
    };
  }

  set(patch: Partial<ViewState>): void {
    const changed = new Set<keyof ViewState>();
    for (const k of Object.keys(patch) as (keyof ViewState)[]) {
      if (this.state[k] !== patch[k]) changed.add(k);
    }
    if (changed.size === 0) return;
    this.state = { ...this.state, ...patch };
    for (const fn of [...this.listeners]) fn(this.state, changed);
  }

  /** Lasso landed: first selection fills A, later ones replace B. */
  applyResolvedRegion(cells: HexId[], polygon: LonLat[]): void {
    const sel = { cells, polygon };
    if (!this.state.regionA) this.set({ regionA: sel });
    else this.set({ regionB: sel });
  }

  clearRegions(): void {
    this.set({ regionA: null, regionB: null, selectedCandidateIds: [] });
  }

  toggleCandidate(id: number): void {
    const cur = this.state.selectedCandidateIds;
    const next = cur.includes(id) ? cur.filter((x) => x !== id) : [...cur, id];
    this.set({ selectedCandidateIds: next });
  }

  toggleChartMode(): void {
    this.set({ chartMode: this.state.chartMode === "beeswarm" ? "stacked" : "beeswarm" });
  }

  bumpCandidates(): void {
    this.set({ candidatesVersion: this.state.candidatesVersion + 1 });
  }
}
