/**
 * Overlay of recourse-reliability curves from several sweep cells of one
 * behavior regime on a single pair of axes, legend-keyed by (g, n_new).
 */

import type { EChartsOption } from "echarts";
import { AggregateRow, behaviorsIn, cellSeries } from "./aggregate.js";
import { renderSvg } from "./render.js";

export type Cell = { g: number; nNew: number };

export const MAX_COMPARISON_CELLS = 9;

/** Default selection: the corners and center of the sweep's default grid. */
export const DEFAULT_CELLS: readonly Cell[] = [
  { g: 0.1, nNew: 8 },
  { g: 0.1, nNew: 10 },
  { g: 0.1, nNew: 12 },
  { g: 0.5, nNew: 8 },
  { g: 0.5, nNew: 10 },
  { g: 0.5, nNew: 12 },
  { g: 0.9, nNew: 8 },
  { g: 0.9, nNew: 10 },
  { g: 0.9, nNew: 12 },
];

function dedupe(cells: readonly Cell[]): Cell[] {
  const seen = new Set<string>();
  const unique: Cell[] = [];
  for (const cell of cells) {
    const key = `${cell.g}:${cell.nNew}`;
    if (seen.has(key)) {
      console.warn(`duplicate cell g=${cell.g}, n_new=${cell.nNew} ignored`);
      continue;
    }
    seen.add(key);
    unique.push(cell);
  }
  return unique;
}

export function comparisonOption(
  rows: AggregateRow[],
  behavior: string,
  cells: readonly Cell[],
): EChartsOption {
  const known = behaviorsIn(rows);
  if (!known.includes(behavior)) {
    throw new Error(
      `unknown behavior "${behavior}" (input has: ${known.join(", ")})`,
    );
  }
  const unique = dedupe(cells);
  if (unique.length === 0) {
    throw new Error("no cells to compare");
  }
  if (unique.length > MAX_COMPARISON_CELLS) {
    throw new Error(
      `too many cells: ${unique.length} requested, limit is ${MAX_COMPARISON_CELLS}`,
    );
  }

  const resolved = unique.map((cell) => {
    const data = cellSeries(rows, behavior, cell.g, cell.nNew);
    if (data.length === 0) {
      throw new Error(
        `cell g=${cell.g}, n_new=${cell.nNew} not present for behavior "${behavior}"`,
      );
    }
    return { cell, data };
  });

  const steps = [
    ...new Set(resolved.flatMap(({ data }) => data.map((r) => r.t))),
  ].sort((a, b) => a - b);

  const series = resolved.map(({ cell, data }) => {
    const byStep = new Map(data.map((r) => [r.t, r.rrMean]));
    return {
      type: "line",
      name: `g=${cell.g}, n=${cell.nNew}`,
      showSymbol: false,
      lineStyle: { width: 1.8 },
      data: steps.map((t) => byStep.get(t) ?? null),
    };
  });

  return {
    title: {
      text: `${behavior}: recourse reliability by cell`,
      left: "center",
      top: 10,
      textStyle: { fontSize: 15 },
    },
    legend: { top: 38, selectedMode: false },
    grid: { left: 64, top: 92, right: 30, bottom: 52 },
    xAxis: {
      type: "category",
      data: steps.map(String),
      name: "t",
      nameLocation: "middle",
      nameGap: 26,
    },
    yAxis: {
      type: "value",
      min: 0,
      max: 1,
      name: "recourse reliability",
    },
    series,
  } as EChartsOption;
}

export function renderComparison(
  rows: AggregateRow[],
  behavior: string,
  cells: readonly Cell[] = DEFAULT_CELLS,
  width = 900,
  height = 600,
): string {
  return renderSvg(comparisonOption(rows, behavior, cells), width, height);
}
