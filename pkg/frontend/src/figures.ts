import type { CdfPoint } from "./csv.js";

export type FigureKind = "ptp" | "ptp-est" | "dl";

export const FIGURE_KINDS: FigureKind[] = ["ptp", "ptp-est", "dl"];

export interface SeriesSpec {
  /** basename without the cdf_ prefix / .csv suffix */
  file: string;
  label: string;
  color: string;
  dash?: string;
}

export interface LoadedSeries extends SeriesSpec {
  points: CdfPoint[];
}

export interface FigureSpec {
  title: string;
  series: SeriesSpec[];
}

const BENCH: SeriesSpec = {
  file: "benchmark",
  label: "truncated capacity bound",
  color: "#555555",
  dash: "6 4",
};

export const FIGURES: Record<FigureKind, FigureSpec> = {
  ptp: {
    title: "Point-to-point rate CDF, perfect CSI",
    series: [
      { file: "wp-ua", label: "WP-UA", color: "#1f77b4" },
      { file: "up-ua", label: "UP-UA", color: "#ff7f0e" },
      { file: "sp-sa", label: "SP-SA", color: "#2ca02c" },
      BENCH,
    ],
  },
  "ptp-est": {
    title: "Point-to-point rate CDF, estimated CSI",
    series: [
      { file: "wp-ua", label: "WP-UA, estimated CSI", color: "#1f77b4" },
      { file: "wp-ua-perfect", label: "WP-UA, perfect CSI", color: "#9467bd" },
      BENCH,
    ],
  },
  dl: {
    title: "Downlink per-user rate CDF",
    series: [
      { file: "tdma-pooled", label: "pooled-ADC TDMA", color: "#1f77b4" },
      { file: "tdma-naive", label: "naive TDMA", color: "#d62728" },
      BENCH,
    ],
  },
};
