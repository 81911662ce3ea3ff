import { readFileSync } from "node:fs";

export interface CdfPoint {
  value: number;
  cdf: number;
}

/** Read a two-column value,cdf file and validate its shape. */
export function readCdf(path: string): CdfPoint[] {
  let text: string;
  try {
    text = readFileSync(path, "utf8");
  } catch {
    throw new Error(`missing input file: ${path}`);
  }
  const lines = text.trim().split(/\r?\n/);
  const header = lines[0]?.split(",").map((s) => s.trim());
  if (!header || header[0] !== "value" || header[1] !== "cdf") {
    const missing =
      header?.[0] !== "value" ? "value" : "cdf";
    throw new Error(`${path}: expected columns value,cdf (missing "${missing}")`);
  }
  const points: CdfPoint[] = [];
  for (let i = 1; i < lines.length; i++) {
    if (lines[i].trim() === "") continue;
    const parts = lines[i].split(",");
    const value = Number(parts[0]);
    const cdf = Number(parts[1]);
    if (!Number.isFinite(value) || !Number.isFinite(cdf)) {
      throw new Error(`${path}:${i + 1}: non-numeric row "${lines[i]}"`);
    }
    points.push({ value, cdf });
  }
  if (points.length === 0) {
    throw new Error(`${path}: no data rows`);
  }
  for (let i = 1; i < points.length; i++) {
    if (points[i].value < points[i - 1].value || points[i].cdf < points[i - 1].cdf) {
      throw new Error(`${path}: rows not sorted at line ${i + 2}`);
    }
  }
  const last = points[points.length - 1];
  if (Math.abs(last.cdf - 1) > 1e-9) {
    throw new Error(`${path}: cdf does not reach 1 (got ${last.cdf})`);
  }
  return points;
}
