/** The prediction workbench: pick a product, a target date, a technique and
 * a history selector; compare mean-based and regression-based forecasts
 * against what actually happened. */

import type { JsonCell, StructuredFilter, StructuredRequest } from "./types.js";

export type Technique = "ep" | "rp";
export type SelectorKind = "days" | "weeks";

export interface WorkbenchState {
  table: string;
  product: string;
  targetDate: string; // YYYY-MM-DD
  technique: Technique;
  selectorKind: SelectorKind;
  selectorN: number;
  dateColumn: string;
  scoreColumn: string;
  productColumn: string;
}

export const DEFAULT_WORKBENCH: WorkbenchState = {
  table: "",
  product: "",
  targetDate: "",
  technique: "ep",
  selectorKind: "days",
  selectorN: 14,
  dateColumn: "date",
  scoreColumn: "buzz_score",
  productColumn: "product",
};

export function validateWorkbench(state: WorkbenchState): Record<string, string> {
  const problems: Record<string, string> = {};
  if (!state.table) problems.table = "Choose a table first.";
  if (!/^\d{4}-\d{2}-\d{2}$/.test(state.targetDate)) {
    problems.targetDate = "Target date must be YYYY-MM-DD.";
  }
  if (!Number.isInteger(state.selectorN) || state.selectorN < 1) {
    problems.selectorN = "The history length must be a positive whole number.";
  }
  return problems;
}

function workbenchFilters(state: WorkbenchState): StructuredFilter[] | undefined {
  if (!state.product) return undefined;
  return [{ column: state.productColumn, op: "=", value: state.product }];
}

function predictionParams(state: WorkbenchState, technique: Technique): Record<string, string> {
  return {
    technique,
    selector: `${state.selectorKind}:${state.selectorN}`,
    target: state.targetDate,
  };
}

/** One-day forecast with the state's own technique. */
export function buildPredictionRequest(state: WorkbenchState): StructuredRequest {
  const request: StructuredRequest = {
    table: state.table,
    columns: [state.dateColumn, state.scoreColumn],
    module: "daily_prediction",
    module_params: predictionParams(state, state.technique),
  };
  const filters = workbenchFilters(state);
  if (filters) request.filters = filters;
  return request;
}

/** Seven-day forecast used by the overlay, with an explicit technique. */
export function buildWeeklyRequest(state: WorkbenchState, technique: Technique): StructuredRequest {
  const request: StructuredRequest = {
    table: state.table,
    columns: [state.dateColumn, state.scoreColumn],
    module: "weekly_prediction",
    module_params: predictionParams(state, technique),
  };
  const filters = workbenchFilters(state);
  if (filters) request.filters = filters;
  return request;
}

/** Daily actuals over the overlay window, for the same product. */
export function buildActualsRequest(state: WorkbenchState, firstDate: string, lastDate: string): StructuredRequest {
  const filters: StructuredFilter[] = workbenchFilters(state) ?? [];
  filters.push({ column: state.dateColumn, op: ">=", value: firstDate });
  filters.push({ column: state.dateColumn, op: "<=", value: lastDate });
  return {
    table: state.table,
    columns: [state.dateColumn, state.scoreColumn],
    module: "daily_analysis",
    filters,
  };
}

export interface OverlayData {
  x: string[];
  series: { name: string; values: (number | null)[] }[];
}

type DateValueRows = JsonCell[][];

function toDateMap(rows: DateValueRows): Map<string, number | null> {
  const byDate = new Map<string, number | null>();
  for (const row of rows) {
    const [day, value] = row;
    if (typeof day === "string") {
      byDate.set(day, typeof value === "number" ? value : null);
    }
  }
  return byDate;
}

/** Align actual, mean-forecast, and regression-forecast rows (each shaped
 * [date, value]) onto one shared, sorted x axis. Gaps become nulls. */
export function buildOverlay(
  actual: DateValueRows,
  ep: DateValueRows,
  rp: DateValueRows,
): OverlayData {
  const maps = [
    { name: "actual", byDate: toDateMap(actual) },
    { name: "ep", byDate: toDateMap(ep) },
    { name: "rp", byDate: toDateMap(rp) },
  ];
  const x = [...new Set(maps.flatMap(({ byDate }) => [...byDate.keys()]))].sort();
  return {
    x,
    series: maps.map(({ name, byDate }) => ({
      name,
      values: x.map((day) => byDate.get(day) ?? null),
    })),
  };
}
