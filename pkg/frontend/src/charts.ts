/** Dependency-free SVG chart rendering. Each renderer returns an SVG
 * string; the caller injects it into the page. Null values are gaps. */

import type { ChartResponse, ColumnSpec, JsonCell } from "./types.js";
import type { OverlayData } from "./workbench.js";

export interface ChartGeometry {
  width: number;
  height: number;
  margin: number;
}

const DEFAULT_GEOMETRY: ChartGeometry = { width: 640, height: 320, margin: 42 };

const SERIES_COLORS = ["#2563eb", "#dc2626", "#059669", "#d97706", "#7c3aed"];

const NUMERIC_KINDS = new Set(["INT", "FLOAT"]);

/** Column names a chart series picker may offer. */
export function numericColumns(schema: ColumnSpec[]): string[] {
  return schema.filter((column) => NUMERIC_KINDS.has(column.type)).map((column) => column.name);
}

function escapeXml(text: string): string {
  return text
    .replace(/&/g, "&amp;")
    .replace(/</g, "&lt;")
    .replace(/>/g, "&gt;")
    .replace(/"/g, "&quot;");
}

interface Scale {
  lo: number;
  hi: number;
  toY: (value: number) => number;
}

function valueScale(series: { values: (number | null)[] }[], geometry: ChartGeometry): Scale {
  const values = series.flatMap((s) => s.values).filter((v): v is number => v !== null);
  let lo = Math.min(0, ...values);
  let hi = Math.max(0, ...values);
  if (lo === hi) {
    // A flat (or single-point) series still needs a nonzero span.
    lo -= 1;
    hi += 1;
  }
  const { height, margin } = geometry;
  const usable = height - 2 * margin;
  return { lo, hi, toY: (value) => height - margin - ((value - lo) / (hi - lo)) * usable };
}

function xPosition(index: number, count: number, geometry: ChartGeometry): number {
  const { width, margin } = geometry;
  const usable = width - 2 * margin;
  if (count <= 1) {
    return margin + usable / 2;
  }
  return margin + (index / (count - 1)) * usable;
}

function frame(geometry: ChartGeometry, xLabels: JsonCell[], scale: Scale): string {
  const { width, height, margin } = geometry;
  const axis =
    `<line x1="${margin}" y1="${height - margin}" x2="${width - margin}" y2="${height - margin}" stroke="#444"/>` +
    `<line x1="${margin}" y1="${margin}" x2="${margin}" y2="${height - margin}" stroke="#444"/>`;
  const first = xLabels[0];
  const last = xLabels[xLabels.length - 1];
  const labels =
    `<text x="${margin}" y="${height - margin + 16}" font-size="10" text-anchor="start">${escapeXml(String(first ?? ""))}</text>` +
    (xLabels.length > 1
      ? `<text x="${width - margin}" y="${height - margin + 16}" font-size="10" text-anchor="end">${escapeXml(String(last ?? ""))}</text>`
      : "") +
    `<text x="${margin - 6}" y="${height - margin}" font-size="10" text-anchor="end">${scale.lo.toPrecision(3)}</text>` +
    `<text x="${margin - 6}" y="${margin + 4}" font-size="10" text-anchor="end">${scale.hi.toPrecision(3)}</text>`;
  return axis + labels;
}

function legend(names: string[], geometry: ChartGeometry): string {
  return names
    .map((name, i) => {
      const x = geometry.margin + i * 110;
      const color = SERIES_COLORS[i % SERIES_COLORS.length];
      return (
        `<rect x="${x}" y="8" width="10" height="10" fill="${color}"/>` +
        `<text x="${x + 14}" y="17" font-size="11">${escapeXml(name)}</text>`
      );
    })
    .join("");
}

function svgOpen(geometry: ChartGeometry): string {
  return `<svg xmlns="http://www.w3.org/2000/svg" viewBox="0 0 ${geometry.width} ${geometry.height}" role="img">`;
}

/** Polyline per series; isolated points (or single-point series) get dots. */
export function renderLineChart(
  data: { x: JsonCell[]; series: { name: string; values: (number | null)[] }[] },
  geometry: ChartGeometry = DEFAULT_GEOMETRY,
): string {
  const scale = valueScale(data.series, geometry);
  const count = data.x.length;
  const body = data.series
    .map((series, seriesIndex) => {
      const color = SERIES_COLORS[seriesIndex % SERIES_COLORS.length];
      const points = series.values
        .map((value, i) => (value === null ? null : `${xPosition(i, count, geometry)},${scale.toY(value)}`))
        .filter((p): p is string => p !== null);
      const line =
        points.length > 1
          ? `<polyline points="${points.join(" ")}" fill="none" stroke="${color}" stroke-width="1.5"/>`
          : "";
      const marks = series.values
        .map((value, i) =>
          value === null
            ? ""
            : `<circle cx="${xPosition(i, count, geometry)}" cy="${scale.toY(value)}" r="2.5" fill="${color}"/>`,
        )
        .join("");
      return line + marks;
    })
    .join("");
  return (
    svgOpen(geometry) + frame(geometry, data.x, scale) + legend(data.series.map((s) => s.name), geometry) + body + "</svg>"
  );
}

/** Vertical bars; multiple series side by side within each x slot. */
export function renderGroupedBarChart(
  data: { x: JsonCell[]; series: { name: string; values: (number | null)[] }[] },
  geometry: ChartGeometry = DEFAULT_GEOMETRY,
): string {
  const scale = valueScale(data.series, geometry);
  const { width, height, margin } = geometry;
  const usable = width - 2 * margin;
  const groups = Math.max(1, data.x.length);
  const groupWidth = usable / groups;
  const barWidth = (groupWidth * 0.8) / Math.max(1, data.series.length);
  const baseline = scale.toY(Math.max(scale.lo, 0));
  const body = data.series
    .map((series, seriesIndex) => {
      const color = SERIES_COLORS[seriesIndex % SERIES_COLORS.length];
      return series.values
        .map((value, i) => {
          if (value === null) return "";
          const x = margin + i * groupWidth + groupWidth * 0.1 + seriesIndex * barWidth;
          const y = scale.toY(value);
          const top = Math.min(y, baseline);
          const barHeight = Math.abs(baseline - y);
          return `<rect x="${x}" y="${top}" width="${barWidth}" height="${barHeight}" fill="${color}"/>`;
        })
        .join("");
    })
    .join("");
  return (
    svgOpen(geometry) + frame(geometry, data.x, scale) + legend(data.series.map((s) => s.name), geometry) + body + "</svg>"
  );
}

export function renderBarChart(
  data: { x: JsonCell[]; series: { name: string; values: (number | null)[] }[] },
  geometry: ChartGeometry = DEFAULT_GEOMETRY,
): string {
  return renderGroupedBarChart(data, geometry);
}

export function renderChart(data: ChartResponse, geometry: ChartGeometry = DEFAULT_GEOMETRY): string {
  if (data.kind === "line") return renderLineChart(data, geometry);
  if (data.kind === "grouped_bar") return renderGroupedBarChart(data, geometry);
  return renderBarChart(data, geometry);
}

/** Actual vs. forecast comparison: one line chart, three aligned series. */
export function renderOverlayChart(overlay: OverlayData, geometry: ChartGeometry = DEFAULT_GEOMETRY): string {
  return renderLineChart(overlay, geometry);
}
