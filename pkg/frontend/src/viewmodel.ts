/** View models: API responses plus display rounding, nothing else.
 *
 * The UI performs no model math; these helpers only format numbers and
 * attach the viral flags reported by /api/clusters.
 */

import type { ClusterSummary, CompareResponse, ScoreResponse } from "./api.js";

export interface Bar {
  cluster: number;
  label: string;
  probability: number;
  pct: string;
  viral: boolean;
}

export interface ScoreViewModel {
  bars: Bar[];
  expectedActivity: string;
  viralProbability: string;
  modelVersion: string;
}

export interface DeltaRow {
  cluster: number;
  label: string;
  pctA: string;
  pctB: string;
  delta: string;
  direction: "up" | "down" | "flat";
}

export interface CompareViewModel {
  rows: DeltaRow[];
  deltaActivity: string;
  deltaViral: string;
  activityDirection: "up" | "down" | "flat";
  viralDirection: "up" | "down" | "flat";
}

/** probability 0.1234 -> "12.3" (percent, one decimal, no unit). */
export function formatPct(p: number): string {
  return (p * 100).toFixed(1);
}

/** share counts shown with one decimal, e.g. "2303.1". */
export function formatShares(x: number): string {
  return x.toFixed(1);
}

/** signed fixed-point with explicit plus, "+0.0" only for exact zero. */
export function formatSigned(x: number, decimals: number): string {
  const s = x.toFixed(decimals);
  return x > 0 ? `+${s}` : s;
}

function direction(x: number): "up" | "down" | "flat" {
  if (x > 0) return "up";
  if (x < 0) return "down";
  return "flat";
}

export function toScoreViewModel(
  score: ScoreResponse,
  clusters: ClusterSummary[],
): ScoreViewModel {
  const viral = new Set(clusters.filter((c) => c.viral).map((c) => c.cluster));
  const bars: Bar[] = score.theta.map((t) => ({
    cluster: t.cluster,
    label: t.label,
    probability: t.probability,
    pct: formatPct(t.probability),
    viral: viral.has(t.cluster),
  }));
  const total = bars.reduce((sum, b) => sum + Number(b.pct), 0);
  if (Math.abs(total - 100) > 0.5) {
    throw new Error(`displayed percentages sum to ${total.toFixed(2)}, not 100`);
  }
  return {
    bars,
    expectedActivity: formatShares(score.expected_activity),
    viralProbability: formatPct(score.viral_probability),
    modelVersion: score.model_version,
  };
}

export function toCompareViewModel(cmp: CompareResponse): CompareViewModel {
  const rows: DeltaRow[] = cmp.a.theta.map((t, k) => {
    const d = cmp.delta_theta[k] ?? 0;
    return {
      cluster: t.cluster,
      label: t.label,
      pctA: formatPct(t.probability),
      pctB: formatPct(cmp.b.theta[k]?.probability ?? 0),
      delta: formatSigned(d * 100, 1),
      direction: direction(d),
    };
  });
  return {
    rows,
    deltaActivity: formatSigned(cmp.delta_expected_activity, 1),
    deltaViral: formatSigned(cmp.delta_viral_probability * 100, 1),
    activityDirection: direction(cmp.delta_expected_activity),
    viralDirection: direction(cmp.delta_viral_probability),
  };
}

export type ClusterSortKey = "cluster" | "frequency" | "average" | "variance";

/** Stable sort of the gallery rows; never mutates the input. */
export function sortClusters(
  rows: ClusterSummary[],
  key: ClusterSortKey,
  descending: boolean,
): ClusterSummary[] {
  return [...rows].sort((a, b) => (descending ? b[key] - a[key] : a[key] - b[key]));
}
