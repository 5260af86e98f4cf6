/**
 * Server-side SVG rendering on top of echarts.
 *
 * Palette (kept in sync with the simulator's plotting conventions):
 *   THRESHOLD_COLOR = #1f77b4  (blue: acceptance threshold)
 *   RR_COLOR        = #d62728  (red: recourse reliability)
 *   TRAIL_COLOR     = #1f77b4  (blue, low opacity: per-agent score trails)
 *   BAND_OPACITY    = 0.18     (mean +/- std envelopes)
 *
 * Rendering is headless (`ssr: true`) and animation-free, so a given
 * option object always produces the same geometry. The only varying
 * content zrender emits is its global element/class counters, which
 * differ between renders in the same process; canonicalize() renumbers
 * them by first appearance so that identical inputs give identical bytes.
 */

import * as echarts from "echarts";

export const THRESHOLD_COLOR = "#1f77b4";
export const RR_COLOR = "#d62728";
export const TRAIL_COLOR = "#1f77b4";
export const BAND_OPACITY = 0.18;

export function canonicalize(svg: string): string {
  const tables = new Map<string, Map<string, number>>();
  return svg.replace(/\bzr\d+-(cls-|c)(\d+)\b/g, (_match, kind: string, num: string) => {
    let table = tables.get(kind);
    if (table === undefined) {
      table = new Map();
      tables.set(kind, table);
    }
    let renumbered = table.get(num);
    if (renumbered === undefined) {
      renumbered = table.size;
      table.set(num, renumbered);
    }
    return `zr0-${kind}${renumbered}`;
  });
}

export function renderSvg(
  option: echarts.EChartsOption,
  width: number,
  height: number,
): string {
  const chart = echarts.init(null, null, { renderer: "svg", ssr: true, width, height });
  try {
    chart.setOption({ animation: false, ...option });
    return canonicalize(chart.renderToSVGString());
  } finally {
    // zrender keeps timers alive otherwise and the process never exits
    chart.dispose();
  }
}

type LineSeries = Record<string, unknown>;

/**
 * Mean line plus mean +/- std envelope as echarts series.
 *
 * The envelope is the usual stacked-area trick: an invisible line at
 * (mean - std) anchors the stack and a filled segment of height 2*std
 * sits on top of it. Points where the std is undefined leave a gap.
 */
export function lineWithBand(
  name: string,
  means: (number | null)[],
  stds: (number | null)[],
  color: string,
  stackId: string,
  axes?: { xAxisIndex: number; yAxisIndex: number },
): LineSeries[] {
  const base = means.map((m, i) => {
    const s = stds[i];
    return m === null || s === null ? null : m - s;
  });
  const span = means.map((m, i) => {
    const s = stds[i];
    return m === null || s === null ? null : 2 * s;
  });
  const shared = { type: "line", showSymbol: false, silent: true, ...(axes ?? {}) };
  return [
    {
      ...shared,
      name: `${name} band`,
      data: base,
      stack: stackId,
      lineStyle: { opacity: 0 },
      emphasis: { disabled: true },
      tooltip: { show: false },
    },
    {
      ...shared,
      name: `${name} band`,
      data: span,
      stack: stackId,
      lineStyle: { opacity: 0 },
      areaStyle: { color, opacity: BAND_OPACITY },
      emphasis: { disabled: true },
      tooltip: { show: false },
    },
    {
      ...shared,
      name,
      data: means,
      color,
      lineStyle: { width: 1.6, color },
      itemStyle: { color },
    },
  ];
}
