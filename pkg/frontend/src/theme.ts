/** One color table for the whole workbench.
 *
 * Semantics by view: map layers use pick-up blue / drop-off green; the
 * comparison region pie uses pick-up pink / drop-off purple; duration
 * buckets darken with trip length.
 */

export const theme = {
  mapPickup: "#2b6cb0",
  mapDropoff: "#2f855a",
  regionPickup: "#e85d9c",
  regionDropoff: "#7c4dbc",
  calendarLow: "#edf2f7",
  calendarHigh: "#1a365d",
  heatLow: "#fff5f0",
  heatHigh: "#99000d",
  highlight: "#ed8936",
  radarLine: "#f6ad55",
  radarHighlight: "#dd6b20",
  violin: "#63b3ed",
  noonGuide: "#a0aec0",
  category: {
    company: "#4e79a7",
    education: "#f28e2b",
    entertainment: "#e15759",
    living: "#76b7b2",
    public_service: "#59a14f",
    traffic: "#edc948",
  } as Record<string, string>,
  durationBuckets: ["#fee0d2", "#fc9272", "#de2d26", "#a50f15"],
};

export const CATEGORY_ORDER = [
  "company",
  "education",
  "entertainment",
  "living",
  "public_service",
  "traffic",
];

export const DURATION_LABELS = ["0-10 min", "10-20 min", "20-30 min", ">30 min"];
