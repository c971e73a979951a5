import { readFileSync } from "node:fs";
import { parseCsv } from "./csv";

export const DEFAULT_TOLERANCE = 1e-9;

export interface DiffReport {
  equal: boolean;
  problems: string[];
}

const NUMBER_RE = /^[+-]?(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?$/;

export function parseNumeric(cell: string): number | null {
  const text = cell.trim();
  if (!NUMBER_RE.test(text)) return null;
  const value = Number(text);
  return Number.isFinite(value) ? value : null;
}

/** Cells equal when both parse as finite numbers within the tolerance
 *  (strictly), or when their text matches exactly. */
export function cellsEqual(a: string, b: string, tolerance: number): boolean {
  if (a === b) return true;
  const va = parseNumeric(a);
  const vb = parseNumeric(b);
  if (va === null || vb === null) return false;
  return Math.abs(va - vb) < tolerance;
}

export function diffCsv(
  pathA: string,
  pathB: string,
  tolerance: number = DEFAULT_TOLERANCE,
): DiffReport {
  const rowsA = parseCsv(readFileSync(pathA, "utf-8"));
  const rowsB = parseCsv(readFileSync(pathB, "utf-8"));
  const problems: string[] = [];
  if (rowsA.length === 0 || rowsB.length === 0) {
    return { equal: false, problems: ["a file has no header row"] };
  }
  const [headerA, headerB] = [rowsA[0], rowsB[0]];
  if (headerA.join(",") !== headerB.join(",")) {
    return { equal: false, problems: [`headers differ: ${headerA} vs ${headerB}`] };
  }
  if (rowsA.length !== rowsB.length) {
    return {
      equal: false,
      problems: [`row counts differ: ${rowsA.length - 1} vs ${rowsB.length - 1}`],
    };
  }
  for (let r = 1; r < rowsA.length; r++) {
    const a = rowsA[r];
    const b = rowsB[r];
    if (a.length !== b.length) {
      problems.push(`row ${r}: field counts differ (${a.length} vs ${b.length})`);
      continue;
    }
    for (let c = 0; c < a.length; c++) {
      if (!cellsEqual(a[c], b[c], tolerance)) {
        problems.push(`row ${r} column ${headerA[c]}: '${a[c]}' vs '${b[c]}'`);
        if (problems.length >= 20) {
          problems.push("... further differences suppressed");
          return { equal: false, problems };
        }
      }
    }
  }
  return { equal: problems.length === 0, problems };
}
