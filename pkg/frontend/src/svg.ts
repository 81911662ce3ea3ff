import type { CdfPoint } from "./csv.js";
import type { LoadedSeries } from "./figures.js";

// geometry shared by renderer and tests
export const WIDTH = 620;
export const HEIGHT = 400;
export const MARGIN = { left: 62, right: 16, top: 34, bottom: 48 };
export const X_MAX = 8; // bps/Hz axis limit

const plotW = WIDTH - MARGIN.left - MARGIN.right;
const plotH = HEIGHT - MARGIN.top - MARGIN.bottom;

export function xPix(v: number): number {
  const clamped = Math.min(Math.max(v, 0), X_MAX);
  return MARGIN.left + (clamped / X_MAX) * plotW;
}

export function yPix(p: number): number {
  return MARGIN.top + (1 - p) * plotH;
}

const fmt = (v: number) => String(Math.round(v * 100) / 100);

/**
 * Right-continuous step path for an empirical CDF: horizontal runs at each
 * level, vertical jumps at the sample values, extended to both axis ends.
 */
export function stepPath(points: CdfPoint[]): string {
  const parts: string[] = [`M ${fmt(xPix(0))} ${fmt(yPix(0))}`];
  let level = 0;
  for (const p of points) {
    parts.push(`H ${fmt(xPix(p.value))}`);
    if (p.cdf !== level) {
      parts.push(`V ${fmt(yPix(p.cdf))}`);
      level = p.cdf;
    }
  }
  parts.push(`H ${fmt(xPix(X_MAX))}`);
  return parts.join(" ");
}

function esc(s: string): string {
  return s.replace(/&/g, "&amp;").replace(/</g, "&lt;").replace(/>/g, "&gt;");
}

export function renderFigure(title: string, series: LoadedSeries[]): string {
  const out: string[] = [];
  out.push(
    `<svg xmlns="http://www.w3.org/2000/svg" width="${WIDTH}" height="${HEIGHT}" ` +
      `viewBox="0 0 ${WIDTH} ${HEIGHT}" font-family="Helvetica, Arial, sans-serif">`,
  );
  out.push(`<rect width="${WIDTH}" height="${HEIGHT}" fill="white"/>`);
  out.push(
    `<text x="${WIDTH / 2}" y="20" text-anchor="middle" font-size="14">${esc(title)}</text>`,
  );

  // frame and grid
  out.push(
    `<rect x="${MARGIN.left}" y="${MARGIN.top}" width="${plotW}" height="${plotH}" ` +
      `fill="none" stroke="#222" stroke-width="1"/>`,
  );
  for (let x = 0; x <= X_MAX; x++) {
    const px = xPix(x);
    out.push(
      `<line x1="${fmt(px)}" y1="${MARGIN.top}" x2="${fmt(px)}" ` +
        `y2="${MARGIN.top + plotH}" stroke="#ddd" stroke-width="0.6"/>`,
    );
    out.push(
      `<text x="${fmt(px)}" y="${MARGIN.top + plotH + 18}" text-anchor="middle" ` +
        `font-size="11">${x}</text>`,
    );
  }
  for (let i = 0; i <= 5; i++) {
    const p = i / 5;
    const py = yPix(p);
    out.push(
      `<line x1="${MARGIN.left}" y1="${fmt(py)}" x2="${MARGIN.left + plotW}" ` +
        `y2="${fmt(py)}" stroke="#ddd" stroke-width="0.6"/>`,
    );
    out.push(
      `<text x="${MARGIN.left - 8}" y="${fmt(py + 4)}" text-anchor="end" ` +
        `font-size="11">${p.toFixed(1)}</text>`,
    );
  }
  out.push(
    `<text x="${MARGIN.left + plotW / 2}" y="${HEIGHT - 12}" text-anchor="middle" ` +
      `font-size="12">Rate (bps/Hz)</text>`,
  );
  out.push(
    `<text x="16" y="${MARGIN.top + plotH / 2}" text-anchor="middle" font-size="12" ` +
      `transform="rotate(-90 16 ${MARGIN.top + plotH / 2})">Empirical CDF</text>`,
  );

  for (const s of series) {
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    out.push(
      `<path d="${stepPath(s.points)}" fill="none" stroke="${s.color}" ` +
        `stroke-width="1.8"${dash} data-series="${esc(s.label)}"/>`,
    );
  }

  // legend, top-left inside the frame
  const lx = MARGIN.left + 12;
  let ly = MARGIN.top + 16;
  const legendH = series.length * 18 + 10;
  out.push(
    `<rect x="${lx - 6}" y="${ly - 12}" width="218" height="${legendH}" ` +
      `fill="white" fill-opacity="0.85" stroke="#999" stroke-width="0.6"/>`,
  );
  for (const s of series) {
    const dash = s.dash ? ` stroke-dasharray="${s.dash}"` : "";
    out.push(
      `<line x1="${lx}" y1="${ly}" x2="${lx + 26}" y2="${ly}" ` +
        `stroke="${s.color}" stroke-width="1.8"${dash}/>`,
    );
    out.push(
      `<text x="${lx + 32}" y="${ly + 4}" font-size="11">${esc(s.label)}</text>`,
    );
    ly += 18;
  }

  out.push("</svg>");
  return out.join("\n") + "\n";
}
