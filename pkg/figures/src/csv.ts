/**
 * Minimal reader for the simulator's CSV outputs.
 *
 * Every file the simulator writes uses plain comma separation with no
 * quoting, so a split-based parser is sufficient. The point of this module
 * is the header contract: callers declare the columns they need and get an
 * error naming the first missing one instead of NaNs downstream.
 */

import { readFileSync } from "node:fs";

export interface CsvTable {
  header: string[];
  rows: string[][];
}

export function parseCsv(text: string): CsvTable {
  const lines = text.split("\n").filter((line) => line.length > 0);
  if (lines.length === 0) {
    throw new Error("empty CSV: no header line");
  }
  const header = lines[0].split(",");
  const rows = lines.slice(1).map((line) => line.split(","));
  return { header, rows };
}

export function readCsv(path: string): CsvTable {
  return parseCsv(readFileSync(path, "utf8"));
}

/**
 * Map required column names to their indices, failing loudly on a
 * missing column. `source` appears in the error so the user can tell
 * which input file was malformed.
 */
export function requireColumns(
  table: CsvTable,
  required: readonly string[],
  source: string,
): Map<string, number> {
  const index = new Map<string, number>();
  for (const name of required) {
    const at = table.header.indexOf(name);
    if (at < 0) {
      throw new Error(
        `${source}: missing column "${name}" (header: ${table.header.join(",")})`,
      );
    }
    index.set(name, at);
  }
  return index;
}

/** Empty cells encode nulls (metrics that were undefined at that step). */
export function numberOrNull(cell: string): number | null {
  return cell === "" ? null : Number(cell);
}
