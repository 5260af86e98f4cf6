/**
 * Panels built from a single run's metric files rather than a sweep
 * aggregate: per-group positive-outcome rates (groups.csv), score
 * histograms at snapshot steps (hist_t*.csv), and per-agent score
 * trails (agents.csv).
 */

import { basename } from "node:path";
import type { EChartsOption } from "echarts";
import { readCsv, requireColumns } from "./csv.js";
import { renderSvg, THRESHOLD_COLOR, TRAIL_COLOR } from "./render.js";

export function renderGroupRates(path: string, width = 900, height = 560): string {
  const table = readCsv(path);
  const col = requireColumns(table, ["group", "t", "rate"], path);
  const groups: string[] = [];
  const byGroup = new Map<string, Array<[number, number]>>();
  for (const row of table.rows) {
    const group = row[col.get("group")!];
    if (!byGroup.has(group)) {
      groups.push(group);
      byGroup.set(group, []);
    }
    byGroup
      .get(group)!
      .push([Number(row[col.get("t")!]), Number(row[col.get("rate")!])]);
  }
  const steps = [
    ...new Set([...byGroup.values()].flatMap((pts) => pts.map(([t]) => t))),
  ].sort((a, b) => a - b);

  const series = groups.map((group) => {
    const byStep = new Map(byGroup.get(group)!);
    return {
      type: "line",
      name: group,
      showSymbol: false,
      lineStyle: { width: 1.8 },
      data: steps.map((t) => byStep.get(t) ?? null),
    };
  });

  const option = {
    title: {
      text: "positive-outcome rate by initial score quartile",
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
    yAxis: { type: "value", min: 0, max: 1, name: "rate" },
    series,
  } as EChartsOption;
  return renderSvg(option, width, height);
}

/** One histogram panel per input file, side by side, shared y scale. */
export function renderHistograms(paths: string[], width = 1100, height = 480): string {
  if (paths.length === 0) {
    throw new Error("no histogram files given");
  }
  const panels = paths.map((path) => {
    const table = readCsv(path);
    const col = requireColumns(table, ["bin_lo", "bin_hi", "count"], path);
    const labels = table.rows.map((row) => row[col.get("bin_lo")!]);
    const counts = table.rows.map((row) => Number(row[col.get("count")!]));
    const stem = basename(path).replace(/\.csv$/, "");
    const match = /_t(\d+)$/.exec(stem);
    return { label: match ? `t=${match[1]}` : stem, labels, counts };
  });
  const maxCount = Math.max(...panels.flatMap((p) => p.counts));

  const marginLeft = 56;
  const marginRight = 20;
  const gap = 26;
  const top = 68;
  const panelW =
    (width - marginLeft - marginRight - (panels.length - 1) * gap) /
    panels.length;

  const option = {
    title: [
      {
        text: "score distribution at snapshot steps",
        left: "center",
        top: 10,
        textStyle: { fontSize: 15 },
      },
      ...panels.map((panel, i) => ({
        text: panel.label,
        left: marginLeft + i * (panelW + gap) + panelW / 2,
        top: top - 22,
        textAlign: "center",
        textStyle: { fontSize: 12 },
      })),
    ],
    grid: panels.map((_, i) => ({
      left: marginLeft + i * (panelW + gap),
      top,
      width: panelW,
      height: height - top - 58,
    })),
    xAxis: panels.map((panel, i) => ({
      type: "category",
      gridIndex: i,
      data: panel.labels,
      axisLabel: { fontSize: 8, interval: 4 },
      name: "score bin",
      nameLocation: "middle",
      nameGap: 24,
    })),
    yAxis: panels.map((_, i) => ({
      type: "value",
      gridIndex: i,
      max: maxCount,
      axisLabel: { show: i === 0, fontSize: 9 },
    })),
    series: panels.map((panel, i) => ({
      type: "bar",
      xAxisIndex: i,
      yAxisIndex: i,
      data: panel.counts,
      barCategoryGap: "10%",
      itemStyle: { color: THRESHOLD_COLOR, opacity: 0.85 },
    })),
  } as EChartsOption;
  return renderSvg(option, width, height);
}

export function renderScoreTrails(path: string, width = 900, height = 560): string {
  const table = readCsv(path);
  const col = requireColumns(table, ["t", "agent_id", "score"], path);
  const byAgent = new Map<string, Array<[number, number]>>();
  for (const row of table.rows) {
    const id = row[col.get("agent_id")!];
    if (!byAgent.has(id)) {
      byAgent.set(id, []);
    }
    byAgent
      .get(id)!
      .push([Number(row[col.get("t")!]), Number(row[col.get("score")!])]);
  }
  const steps = [
    ...new Set([...byAgent.values()].flatMap((pts) => pts.map(([t]) => t))),
  ].sort((a, b) => a - b);

  const series = [...byAgent.values()].map((points) => {
    const byStep = new Map(points);
    return {
      type: "line",
      showSymbol: false,
      silent: true,
      lineStyle: { width: 0.6, color: TRAIL_COLOR, opacity: 0.3 },
      data: steps.map((t) => byStep.get(t) ?? null),
    };
  });

  const option = {
    title: {
      text: `per-agent score trails (${byAgent.size} agents)`,
      left: "center",
      top: 10,
      textStyle: { fontSize: 15 },
    },
    grid: { left: 64, top: 56, right: 30, bottom: 52 },
    xAxis: {
      type: "category",
      data: steps.map(String),
      name: "t",
      nameLocation: "middle",
      nameGap: 26,
    },
    yAxis: { type: "value", min: 0, max: 1, name: "score" },
    series,
  } as EChartsOption;
  return renderSvg(option, width, height);
}
