/** The hourly-analysis query builder: form state in, structured request out.
 * The server echoes back the canonical query text, which the UI shows as a
 * preview so the user sees exactly what will run. */

import type { StructuredFilter, StructuredRequest } from "./types.js";

export interface HourlyFormState {
  table: string;
  dateColumn: string;
  timeColumn: string;
  scoreColumn: string;
  productColumn: string;
  product: string;
  startDate: string; // YYYY-MM-DD
  endDate: string; // YYYY-MM-DD
}

export const DEFAULT_HOURLY_FORM: HourlyFormState = {
  table: "",
  dateColumn: "date",
  timeColumn: "time",
  scoreColumn: "buzz_score",
  productColumn: "product",
  product: "",
  startDate: "",
  endDate: "",
};

const DATE_RE = /^\d{4}-\d{2}-\d{2}$/;

/** Field-level validation messages; an empty map means submittable. */
export function validateHourlyForm(state: HourlyFormState): Record<string, string> {
  const problems: Record<string, string> = {};
  if (!state.table) problems.table = "Choose a table first.";
  if (!state.dateColumn) problems.dateColumn = "A date column is required.";
  if (!state.timeColumn) problems.timeColumn = "A time column is required.";
  if (!state.scoreColumn) problems.scoreColumn = "A score column is required.";
  if (state.startDate && !DATE_RE.test(state.startDate)) {
    problems.startDate = "Start date must be YYYY-MM-DD.";
  }
  if (state.endDate && !DATE_RE.test(state.endDate)) {
    problems.endDate = "End date must be YYYY-MM-DD.";
  }
  return problems;
}

export function buildHourlyRequest(state: HourlyFormState): StructuredRequest {
  const filters: StructuredFilter[] = [];
  if (state.product) {
    filters.push({ column: state.productColumn, op: "=", value: state.product });
  }
  if (state.startDate) {
    filters.push({ column: state.dateColumn, op: ">=", value: state.startDate });
  }
  if (state.endDate) {
    filters.push({ column: state.dateColumn, op: "<=", value: state.endDate });
  }
  const request: StructuredRequest = {
    table: state.table,
    columns: [state.dateColumn, state.timeColumn, state.scoreColumn],
    module: "hourly_analysis",
  };
  if (filters.length > 0) {
    request.filters = filters;
  }
  return request;
}
