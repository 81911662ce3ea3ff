import { afterEach, describe, expect, it, vi } from "vitest";
import { cpSync, existsSync, mkdtempSync, readFileSync, writeFileSync } from "node:fs";
import { tmpdir } from "node:os";
import { join } from "node:path";
import { fileURLToPath } from "node:url";
import { buildFigure, run } from "../src/main.js";
import { FIGURES, FIGURE_KINDS } from "../src/figures.js";

const FIXTURES = fileURLToPath(new URL("./fixtures", import.meta.url));

function captureStderr(): { text: () => string; restore: () => void } {
  let buf = "";
  const spy = vi
    .spyOn(process.stderr, "write")
    .mockImplementation((chunk: string | Uint8Array) => {
      buf += chunk.toString();
      return true;
    });
  return { text: () => buf, restore: () => spy.mockRestore() };
}

afterEach(() => {
  vi.restoreAllMocks();
});

describe("buildFigure", () => {
  it.each(FIGURE_KINDS)("renders the %s figure with every series present", (kind) => {
    const svg = buildFigure(join(FIXTURES, kind), kind);
    for (const s of FIGURES[kind].series) {
      expect(svg).toContain(`data-series="${s.label}"`);
      expect(svg).toContain(s.color);
    }
    expect(svg).toContain(FIGURES[kind].title);
    // dashed benchmark series rendered exactly once as a curve
    expect(svg.match(/stroke-dasharray="6 4"/g)?.length).toBe(2); // curve + legend swatch
  });

  it("keeps an unknown scheme file under its verbatim label", () => {
    const dir = mkdtempSync(join(tmpdir(), "plotcli-"));
    cpSync(join(FIXTURES, "ptp"), dir, { recursive: true });
    writeFileSync(join(dir, "cdf_experimental-v2.csv"), "value,cdf\n1.5,0.5\n3.5,1.0\n");
    const svg = buildFigure(dir, "ptp");
    expect(svg).toContain('data-series="experimental-v2"');
    expect(svg).toContain("experimental-v2</text>");
  });
});

describe("run", () => {
  it.each(FIGURE_KINDS)("exits 0 and writes an svg for --fig %s", (kind) => {
    const out = join(mkdtempSync(join(tmpdir(), "plotcli-")), "fig.svg");
    const code = run(["plot", "--in", join(FIXTURES, kind), "--fig", kind, "--out", out]);
    expect(code).toBe(0);
    expect(existsSync(out)).toBe(true);
    const svg = readFileSync(out, "utf8");
    expect(svg).toContain("<svg ");
    expect(svg).toContain("Rate (bps/Hz)");
  });

  it("exits 1 on an unknown figure kind and says which kinds exist", () => {
    const err = captureStderr();
    const code = run(["plot", "--in", FIXTURES, "--fig", "nope", "--out", "/dev/null"]);
    err.restore();
    expect(code).toBe(1);
    expect(err.text()).toContain("unknown figure kind: nope");
    expect(err.text()).toContain("ptp, ptp-est, dl");
  });

  it("exits 1 and names the missing file when an input is absent", () => {
    const dir = mkdtempSync(join(tmpdir(), "plotcli-"));
    const err = captureStderr();
    const code = run(["plot", "--in", dir, "--fig", "ptp", "--out", "/dev/null"]);
    err.restore();
    expect(code).toBe(1);
    expect(err.text()).toContain(`missing input file: ${join(dir, "cdf_wp-ua.csv")}`);
  });

  it("exits 1 with usage when arguments are missing", () => {
    const err = captureStderr();
    const code = run(["plot", "--in", FIXTURES]);
    err.restore();
    expect(code).toBe(1);
    expect(err.text()).toContain("usage:");
  });

  it("exits 1 with usage on a missing subcommand", () => {
    const err = captureStderr();
    const code = run(["--in", FIXTURES, "--fig", "ptp", "--out", "/dev/null"]);
    err.restore();
    expect(code).toBe(1);
    expect(err.text()).toContain("usage:");
  });
});
