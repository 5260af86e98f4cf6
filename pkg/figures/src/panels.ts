/**
 * Small-multiple grid for one behavior regime: one panel per (g, n_new)
 * cell, each showing the acceptance threshold and recourse reliability
 * over time as mean lines with +/- std envelopes. Rows are g values
 * (ascending top to bottom), columns are n_new values (ascending left
 * to right), matching the sweep grid found in the input.
 */

import type { EChartsOption } from "echarts";
import {
  AggregateRow,
  behaviorsIn,
  cellSeries,
  gridAxes,
} from "./aggregate.js";
import { lineWithBand, renderSvg, RR_COLOR, THRESHOLD_COLOR } from "./render.js";

const CELL_GAP_X = 26;
const CELL_GAP_Y = 34;
const MARGIN_LEFT = 92;
const MARGIN_TOP = 86;
const MARGIN_RIGHT = 26;
const MARGIN_BOTTOM = 54;

export function panelsOption(
  rows: AggregateRow[],
  behavior: string,
  width: number,
  height: number,
): EChartsOption {
  const known = behaviorsIn(rows);
  if (!known.includes(behavior)) {
    throw new Error(
      `unknown behavior "${behavior}" (input has: ${known.join(", ")})`,
    );
  }
  const { gValues, nValues } = gridAxes(rows, behavior);
  const subset = rows.filter((r) => r.behavior === behavior);
  const steps = [...new Set(subset.map((r) => r.t))].sort((a, b) => a - b);

  const nRows = gValues.length;
  const nCols = nValues.length;
  const cellW =
    (width - MARGIN_LEFT - MARGIN_RIGHT - (nCols - 1) * CELL_GAP_X) / nCols;
  const cellH =
    (height - MARGIN_TOP - MARGIN_BOTTOM - (nRows - 1) * CELL_GAP_Y) / nRows;

  const grids: object[] = [];
  const xAxes: object[] = [];
  const yAxes: object[] = [];
  const series: object[] = [];
  const titles: object[] = [
    {
      text: `${behavior}: threshold and recourse reliability`,
      left: "center",
      top: 10,
      textStyle: { fontSize: 16 },
    },
  ];

  nValues.forEach((n, col) => {
    titles.push({
      text: `n_new=${n}`,
      left: MARGIN_LEFT + col * (cellW + CELL_GAP_X) + cellW / 2,
      top: MARGIN_TOP - 26,
      textAlign: "center",
      textStyle: { fontSize: 12 },
    });
  });
  gValues.forEach((g, row) => {
    titles.push({
      text: `g=${g}`,
      left: 14,
      top: MARGIN_TOP + row * (cellH + CELL_GAP_Y) + cellH / 2 - 8,
      textStyle: { fontSize: 12 },
    });
  });

  gValues.forEach((g, row) => {
    nValues.forEach((n, col) => {
      const index = grids.length;
      const left = MARGIN_LEFT + col * (cellW + CELL_GAP_X);
      const top = MARGIN_TOP + row * (cellH + CELL_GAP_Y);
      grids.push({ left, top, width: cellW, height: cellH });
      xAxes.push({
        type: "category",
        gridIndex: index,
        data: steps.map(String),
        axisLabel: { show: row === nRows - 1, interval: "auto", fontSize: 9 },
        axisTick: { show: false },
        name: row === nRows - 1 && col === Math.floor(nCols / 2) ? "t" : "",
        nameLocation: "middle",
        nameGap: 22,
      });
      yAxes.push({
        type: "value",
        gridIndex: index,
        min: 0,
        max: 1,
        axisLabel: { show: col === 0, fontSize: 9 },
        splitLine: { lineStyle: { opacity: 0.3 } },
      });

      const cell = cellSeries(rows, behavior, g, n);
      if (cell.length === 0) {
        titles.push({
          text: "no data",
          left: left + cellW / 2,
          top: top + cellH / 2 - 8,
          textAlign: "center",
          textStyle: { fontSize: 11, fontStyle: "italic", color: "#999" },
        });
        return;
      }
      const byStep = new Map(cell.map((r) => [r.t, r]));
      const pick = <K extends keyof AggregateRow>(key: K) =>
        steps.map((t) => {
          const r = byStep.get(t);
          return r === undefined ? null : (r[key] as number | null);
        });
      const axes = { xAxisIndex: index, yAxisIndex: index };
      series.push(
        ...lineWithBand(
          "threshold",
          pick("thresholdMean"),
          pick("thresholdStd"),
          THRESHOLD_COLOR,
          `thr-${index}`,
          axes,
        ),
        ...lineWithBand(
          "RR",
          pick("rrMean"),
          pick("rrStd"),
          RR_COLOR,
          `rr-${index}`,
          axes,
        ),
      );
    });
  });

  return {
    title: titles,
    legend: {
      top: 36,
      data: ["threshold", "RR"],
      selectedMode: false,
    },
    grid: grids,
    xAxis: xAxes,
    yAxis: yAxes,
    series,
  } as EChartsOption;
}

export function renderPanels(
  rows: AggregateRow[],
  behavior: string,
  width = 1320,
  height = 1040,
): string {
  return renderSvg(panelsOption(rows, behavior, width, height), width, height);
}
