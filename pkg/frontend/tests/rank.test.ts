/** Rank view models: client-side sorting identical to the server ordering,
 * single-polygon radar highlighting, and violin pass-through. */

import { describe, expect, it } from "vitest";

import { radarLayout, sortRows, tableModel } from "../src/layout/rank.js";
import { CRITERIA, RANK } from "./fixtures.js";

describe("table sorting", () => {
  it("sort by AD matches the server ordering (value desc, ties by id)", () => {
    const rows = sortRows(tableModel(RANK, CRITERIA), "AD");
    // candidates 7 and 9 tie on AD = 0.0; ascending id breaks the tie
    expect(rows.map((r) => r.id)).toEqual([2, 5, 7, 9]);
  });

  it("re-sorting by another criterion permutes without loss", () => {
    const rows = tableModel(RANK, CRITERIA);
    const byDr = sortRows(rows, "DR");
    expect(byDr.map((r) => r.id)).toEqual([5, 2, 7, 9]);
    expect([...byDr].sort((a, b) => a.id - b.id).map((r) => r.id)).toEqual([2, 5, 7, 9]);
  });

  it("ascending order flips the comparison but keeps id ties", () => {
    const rows = sortRows(tableModel(RANK, CRITERIA), "AD", false);
    expect(rows.map((r) => r.id)).toEqual([7, 9, 5, 2]);
  });
});

describe("radar highlighting", () => {
  it("selecting one row highlights exactly one polygon", () => {
    const polys = radarLayout(RANK.candidates, CRITERIA, [5]);
    const highlighted = polys.filter((p) => p.highlighted);
    expect(highlighted.length).toBe(1);
    expect(highlighted[0].id).toBe(5);
  });

  it("deselection restores no-highlight state", () => {
    const polys = radarLayout(RANK.candidates, CRITERIA, []);
    expect(polys.every((p) => !p.highlighted)).toBe(true);
  });

  it("every candidate renders one polygon with one vertex per axis", () => {
    const polys = radarLayout(RANK.candidates, CRITERIA, []);
    expect(polys.length).toBe(RANK.candidates.length);
    for (const p of polys) expect(p.vertices.length).toBe(CRITERIA.length);
  });
});
