/** Map view render model: hex tessellation math mirroring the server grid,
 * heat shading, per-cell glyph arcs, and POI donut arcs.
 *
 * All positions are in map meters with y pointing north; views flip the y
 * axis when drawing. Every mark keeps its payload counts verbatim.
 */

import type { CellGlyph, EngineConfig, HeatCell, HexId, LonLat, PoiDonut } from "../types.js";

export const EARTH_RADIUS_M = 6371008.8;
const DEG = Math.PI / 180;
const SQRT3 = Math.sqrt(3);

export interface GridMath {
  toXy(p: LonLat): { x: number; y: number };
  toLonLat(x: number, y: number): LonLat;
  center(cell: HexId): { x: number; y: number };
  corners(cell: HexId): [number, number][];
  width: number;
}

/** Local equirectangular projection + pointy-top axial grid, matching the API. */
export function gridMath(cfg: EngineConfig): GridMath {
  const kLon = Math.cos(cfg.origin_lat * DEG) * EARTH_RADIUS_M * DEG;
  const kLat = EARTH_RADIUS_M * DEG;
  const size = cfg.hex_width_m / SQRT3;
  const center = (cell: HexId) => ({
    x: size * (SQRT3 * cell.q + (SQRT3 / 2) * cell.r),
    y: size * 1.5 * cell.r,
  });
  return {
    width: cfg.hex_width_m,
    toXy: (p) => ({ x: (p.lon - cfg.origin_lon) * kLon, y: (p.lat - cfg.origin_lat) * kLat }),
    toLonLat: (x, y) => ({ lon: cfg.origin_lon + x / kLon, lat: cfg.origin_lat + y / kLat }),
    center,
    corners: (cell) => {
      const c = center(cell);
      const pts: [number, number][] = [];
      for (let i = 0; i < 6; i++) {
        const ang = ((60 * i - 30) * Math.PI) / 180; // pointy-top
        pts.push([c.x + size * Math.cos(ang), c.y + size * Math.sin(ang)]);
      }
      return pts;
    },
  };
}

export interface HeatMark {
  cell: HexId;
  count: number;
  intensity: number; // 0..1 of the day maximum
  corners: [number, number][];
}

export function heatLayout(cells: HeatCell[], grid: GridMath): HeatMark[] {
  const max = Math.max(1, ...cells.map((c) => c.pickups));
  return cells.map((c) => ({
    cell: { q: c.q, r: c.r },
    count: c.pickups,
    intensity: c.pickups / max,
    corners: grid.corners({ q: c.q, r: c.r }),
  }));
}

export interface ArcMark {
  side: "pickup" | "dropoff";
  sector: number;
  count: number;
  startDeg: number; // compass degrees, 0 = north, clockwise
  endDeg: number;
  innerR: number;
  outerR: number; // thickness encodes the flow size
}

export interface PieMark {
  side: "pickup" | "dropoff";
  count: number;
  startDeg: number;
  endDeg: number;
  r: number;
}

export interface GlyphMark {
  cell: HexId;
  cx: number;
  cy: number;
  pickups: number;
  dropoffs: number;
  pie: PieMark[];
  rings: ArcMark[];
}

/** Inner pie compares pick-ups vs drop-offs; two outer 8-sector rings encode
 * the flow direction, thickness proportional to the sector count. */
export function glyphLayout(glyphs: CellGlyph[], grid: GridMath): GlyphMark[] {
  const maxSector = Math.max(
    1,
    ...glyphs.flatMap((g) => [...g.pickup_sectors, ...g.dropoff_sectors]),
  );
  const pieR = grid.width * 0.22;
  const ringGap = grid.width * 0.04;
  const ringMax = grid.width * 0.12;
  return glyphs.map((g) => {
    const c = grid.center({ q: g.q, r: g.r });
    const total = g.pickups + g.dropoffs;
    const pickupDeg = total > 0 ? (g.pickups / total) * 360 : 0;
    const pie: PieMark[] = [
      { side: "pickup", count: g.pickups, startDeg: 0, endDeg: pickupDeg, r: pieR },
      { side: "dropoff", count: g.dropoffs, startDeg: pickupDeg, endDeg: 360, r: pieR },
    ];
    const rings: ArcMark[] = [];
    const sectors = g.pickup_sectors.length;
    const width = 360 / sectors;
    const bands: ["pickup" | "dropoff", number[], number][] = [
      ["pickup", g.pickup_sectors, pieR + ringGap],
      ["dropoff", g.dropoff_sectors, pieR + ringGap + ringMax + ringGap],
    ];
    for (const [side, counts, base] of bands) {
      counts.forEach((count, sector) => {
        if (count === 0) return;
        rings.push({
          side,
          sector,
          count,
          startDeg: sector * width - width / 2,
          endDeg: sector * width + width / 2,
          innerR: base,
          outerR: base + (count / maxSector) * ringMax,
        });
      });
    }
    return { cell: { q: g.q, r: g.r }, cx: c.x, cy: c.y, pickups: g.pickups, dropoffs: g.dropoffs, pie, rings };
  });
}

export interface DonutMark {
  poiId: number;
  name: string;
  category: string;
  cx: number;
  cy: number;
  pickups: number;
  dropoffs: number;
  pickupDeg: number; // pick-up share of the donut sweep
}

export function donutLayout(donuts: PoiDonut[], grid: GridMath): DonutMark[] {
  return donuts.map((d) => {
    const c = grid.toXy({ lon: d.poi.lon, lat: d.poi.lat });
    const total = d.pickups + d.dropoffs;
    return {
      poiId: d.poi.id,
      name: d.poi.name,
      category: d.poi.category,
      cx: c.x,
      cy: c.y,
      pickups: d.pickups,
      dropoffs: d.dropoffs,
      pickupDeg: total > 0 ? (d.pickups / total) * 360 : 0,
    };
  });
}

/** Screen-space lasso vertices (map meters) -> lon/lat polygon for resolve. */
export function lassoToPolygon(points: { x: number; y: number }[], grid: GridMath): LonLat[] {
  return points.map((p) => grid.toLonLat(p.x, p.y));
}

/** SVG path for a compass-bearing annular arc (y-up coordinates). */
export function arcPath(cx: number, cy: number, a: ArcMark): string {
  const toXy = (deg: number, r: number) => {
    const rad = deg * DEG;
    return [cx + r * Math.sin(rad), cy + r * Math.cos(rad)];
  };
  const [x0, y0] = toXy(a.startDeg, a.innerR);
  const [x1, y1] = toXy(a.endDeg, a.innerR);
  const [x2, y2] = toXy(a.endDeg, a.outerR);
  const [x3, y3] = toXy(a.startDeg, a.outerR);
  const large = a.endDeg - a.startDeg > 180 ? 1 : 0;
  return (
    `M ${x0} ${y0} A ${a.innerR} ${a.innerR} 0 ${large} 0 ${x1} ${y1} ` +
    `L ${x2} ${y2} A ${a.outerR} ${a.outerR} 0 ${large} 1 ${x3} ${y3} Z`
  );
}
