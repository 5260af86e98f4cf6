/**
 * Figure rendering entry point.
 *
 * Usage:
 *   node dist/cli.js --kind panels     --input aggregate.csv --behavior binary_constant --out panels.svg
 *   node dist/cli.js --kind comparison --input aggregate.csv --behavior continuous_constant \
 *       [--cells "0.1:8,0.5:10,0.9:12"] --out comparison.svg
 *   node dist/cli.js --kind groups     --input groups.csv --out groups.svg
 *   node dist/cli.js --kind hist       --input hist_t0.csv,hist_t25.csv --out hist.svg
 *   node dist/cli.js --kind trails     --input agents.csv --out trails.svg
 *
 * Exit codes: 0 success, 1 bad arguments or malformed/mismatched input,
 * 2 filesystem failure while reading or writing.
 */

import { writeFileSync } from "node:fs";
import { pathToFileURL } from "node:url";
import { parseArgs } from "node:util";
import { readAggregate } from "./aggregate.js";
import { Cell, DEFAULT_CELLS, renderComparison } from "./comparison.js";
import { renderPanels } from "./panels.js";
import {
  renderGroupRates,
  renderHistograms,
  renderScoreTrails,
} from "./runpanels.js";

const KINDS = ["panels", "comparison", "groups", "hist", "trails"] as const;
type Kind = (typeof KINDS)[number];

class UsageError extends Error {}

function parseCells(spec: string): Cell[] {
  return spec.split(",").map((part) => {
    const pieces = part.split(":");
    if (pieces.length !== 2) {
      throw new UsageError(
        `bad --cells entry "${part}" (expected g:n_new, e.g. 0.5:10)`,
      );
    }
    const g = Number(pieces[0]);
    const nNew = Number(pieces[1]);
    if (!Number.isFinite(g) || !Number.isFinite(nNew)) {
      throw new UsageError(`bad --cells entry "${part}" (non-numeric value)`);
    }
    return { g, nNew };
  });
}

function required(value: string | undefined, flag: string): string {
  if (value === undefined || value === "") {
    throw new UsageError(`missing required flag ${flag}`);
  }
  return value;
}

function render(args: {
  kind: Kind;
  input: string;
  behavior?: string;
  cells?: string;
}): string {
  switch (args.kind) {
    case "panels": {
      const rows = readAggregate(args.input);
      return renderPanels(rows, required(args.behavior, "--behavior"));
    }
    case "comparison": {
      const rows = readAggregate(args.input);
      const cells =
        args.cells === undefined ? DEFAULT_CELLS : parseCells(args.cells);
      return renderComparison(
        rows,
        required(args.behavior, "--behavior"),
        cells,
      );
    }
    case "groups":
      return renderGroupRates(args.input);
    case "hist":
      return renderHistograms(args.input.split(","));
    case "trails":
      return renderScoreTrails(args.input);
  }
}

export function main(argv: string[]): number {
  let kind: Kind;
  let input: string;
  let out: string;
  let behavior: string | undefined;
  let cells: string | undefined;
  try {
    const { values } = parseArgs({
      args: argv,
      options: {
        input: { type: "string" },
        behavior: { type: "string" },
        kind: { type: "string" },
        out: { type: "string" },
        cells: { type: "string" },
      },
    });
    const rawKind = required(values.kind, "--kind");
    if (!(KINDS as readonly string[]).includes(rawKind)) {
      throw new UsageError(
        `unknown --kind "${rawKind}" (expected one of: ${KINDS.join(", ")})`,
      );
    }
    kind = rawKind as Kind;
    input = required(values.input, "--input");
    out = required(values.out, "--out");
    behavior = values.behavior;
    cells = values.cells;
  } catch (err) {
    console.error(err instanceof Error ? err.message : String(err));
    return 1;
  }

  let svg: string;
  try {
    svg = render({ kind, input, behavior, cells });
  } catch (err) {
    const code =
      err instanceof Error && "code" in err && typeof err.code === "string"
        ? 2 // fs errors (ENOENT and friends) carry a string code
        : 1;
    console.error(err instanceof Error ? err.message : String(err));
    return code;
  }

  try {
    writeFileSync(out, svg, "utf8");
  } catch (err) {
    console.error(
      `cannot write ${out}: ${err instanceof Error ? err.message : String(err)}`,
    );
    return 2;
  }
  console.log(`wrote ${out}`);
  return 0;
}

const invokedDirectly =
  process.argv[1] !== undefined &&
  import.meta.url === pathToFileURL(process.argv[1]).href;
if (invokedDirectly) {
  process.exitCode = main(process.argv.slice(2));
}
