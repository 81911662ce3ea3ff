#!/usr/bin/env node
import { parseArgs } from "node:util";
import { readdirSync, writeFileSync } from "node:fs";
import { join } from "node:path";
import { readCdf } from "./csv.js";
import { FIGURES, FIGURE_KINDS, type FigureKind, type LoadedSeries } from "./figures.js";
import { renderFigure } from "./svg.js";

// fallback palette for series not named by the figure spec
const EXTRA_COLORS = ["#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf"];

export function buildFigure(inDir: string, fig: FigureKind): string {
  const spec = FIGURES[fig];
  const series: LoadedSeries[] = spec.series.map((s) => ({
    ...s,
    points: readCdf(join(inDir, `cdf_${s.file}.csv`)),
  }));
  // unknown scheme files are plotted under their verbatim label, not dropped
  const known = new Set(spec.series.map((s) => s.file));
  const extra = readdirSync(inDir)
    .filter((f) => /^cdf_.+\.csv$/.test(f))
    .map((f) => f.slice(4, -4))
    .filter((name) => !known.has(name))
    .sort();
  extra.forEach((name, i) => {
    series.push({
      file: name,
      label: name,
      color: EXTRA_COLORS[i % EXTRA_COLORS.length],
      points: readCdf(join(inDir, `cdf_${name}.csv`)),
    });
  });
  return renderFigure(spec.title, series);
}

export function run(argv: string[]): number {
  let values: { in?: string; fig?: string; out?: string };
  let positionals: string[];
  try {
    ({ values, positionals } = parseArgs({
      args: argv,
      allowPositionals: true,
      options: {
        in: { type: "string" },
        fig: { type: "string" },
        out: { type: "string" },
      },
    }));
  } catch (err) {
    process.stderr.write(`${err instanceof Error ? err.message : String(err)}\n`);
    process.stderr.write("usage: plotcli plot --in <dir> --fig <kind> --out <file>\n");
    return 1;
  }

  if (positionals.length !== 1 || positionals[0] !== "plot") {
    process.stderr.write("usage: plotcli plot --in <dir> --fig <kind> --out <file>\n");
    return 1;
  }
  const { in: inDir, fig, out } = values;
  if (!inDir || !fig || !out) {
    process.stderr.write("usage: plotcli plot --in <dir> --fig <kind> --out <file>\n");
    return 1;
  }
  if (!(FIGURE_KINDS as readonly string[]).includes(fig)) {
    process.stderr.write(
      `unknown figure kind: ${fig} (expected one of ${FIGURE_KINDS.join(", ")})\n`,
    );
    return 1;
  }

  let svg: string;
  try {
    svg = buildFigure(inDir, fig as FigureKind);
  } catch (err) {
    process.stderr.write(`${err instanceof Error ? err.message : String(err)}\n`);
    return 1;
  }
  writeFileSync(out, svg);
  return 0;
}

const invoked = process.argv[1] ?? "";
if (invoked.endsWith("main.js") || invoked.endsWith("plotcli")) {
  process.exit(run(process.argv.slice(2)));
}
