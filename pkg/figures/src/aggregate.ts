/**
 * Typed access to sweep aggregate tables (aggregate.csv).
 *
 * One row per (behavior, g, n_new, t) cell-step, carrying cross-seed means
 * and standard deviations. Std columns are empty when fewer than two seeds
 * contributed a defined value; mean columns are empty when no seed did.
 */

import { readCsv, requireColumns, numberOrNull } from "./csv.js";

export const AGGREGATE_COLUMNS = [
  "behavior",
  "g",
  "n_new",
  "t",
  "threshold_mean",
  "threshold_std",
  "rr_mean",
  "rr_std",
  "rr_null_count",
  "stationarity_mean",
] as const;

export interface AggregateRow {
  behavior: string;
  g: number;
  nNew: number;
  t: number;
  thresholdMean: number | null;
  thresholdStd: number | null;
  rrMean: number | null;
  rrStd: number | null;
  rrNullCount: number;
  stationarityMean: number | null;
}

export function readAggregate(path: string): AggregateRow[] {
  const table = readCsv(path);
  const col = requireColumns(table, AGGREGATE_COLUMNS, path);
  const at = (name: string) => col.get(name)!;
  return table.rows.map((row) => ({
    behavior: row[at("behavior")],
    g: Number(row[at("g")]),
    nNew: Number(row[at("n_new")]),
    t: Number(row[at("t")]),
    thresholdMean: numberOrNull(row[at("threshold_mean")]),
    thresholdStd: numberOrNull(row[at("threshold_std")]),
    rrMean: numberOrNull(row[at("rr_mean")]),
    rrStd: numberOrNull(row[at("rr_std")]),
    rrNullCount: Number(row[at("rr_null_count")]),
    stationarityMean: numberOrNull(row[at("stationarity_mean")]),
  }));
}

export function behaviorsIn(rows: AggregateRow[]): string[] {
  return [...new Set(rows.map((r) => r.behavior))];
}

/** Distinct g and n_new values present for one behavior, ascending. */
export function gridAxes(
  rows: AggregateRow[],
  behavior: string,
): { gValues: number[]; nValues: number[] } {
  const subset = rows.filter((r) => r.behavior === behavior);
  const gValues = [...new Set(subset.map((r) => r.g))].sort((a, b) => a - b);
  const nValues = [...new Set(subset.map((r) => r.nNew))].sort((a, b) => a - b);
  return { gValues, nValues };
}

/** Time series for one grid cell, sorted by step. */
export function cellSeries(
  rows: AggregateRow[],
  behavior: string,
  g: number,
  nNew: number,
): AggregateRow[] {
  return rows
    .filter((r) => r.behavior === behavior && r.g === g && r.nNew === nNew)
    .sort((a, b) => a.t - b.t);
}
