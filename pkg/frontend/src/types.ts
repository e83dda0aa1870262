/** JSON shapes of the bx HTTP API. */

export type JsonCell = string | number | null;

export interface TableInfo {
  name: string;
  rows: number;
  columns: number;
}

export interface ColumnSpec {
  name: string;
  type: string; // INT | FLOAT | TEXT | DATE | TIME
}

export interface SchemaResponse {
  table: string;
  columns: ColumnSpec[];
}

export interface ModuleInfo {
  name: string;
  input_arity: number | "any";
  params: { key: string; required: boolean; description: string }[];
  output: ColumnSpec[] | "dynamic";
  description: string;
}

export interface StructuredFilter {
  column: string;
  op: "=" | ">=" | "<=" | "in";
  value?: JsonCell;
  values?: JsonCell[];
}

export interface StructuredRequest {
  table: string;
  columns: string[];
  module?: string;
  module_params?: Record<string, string>;
  filters?: StructuredFilter[];
}

export type QuerySubmission = { text: string } | { request: StructuredRequest };

export interface SubmitResponse {
  job_id: string;
  query: string; // canonical text the engine will run
}

export type JobStatus = "queued" | "running" | "succeeded" | "failed";

export interface JobView {
  job_id: string;
  query: string;
  status: JobStatus;
  row_count?: number;
  error?: string;
  error_code?: string;
}

export interface RowsPage {
  schema: ColumnSpec[];
  rows: JsonCell[][];
  next_cursor?: string;
}

export type ChartKind = "line" | "bar" | "grouped_bar";

export interface ChartSeries {
  name: string;
  values: (number | null)[];
}

export interface ChartResponse {
  kind: ChartKind;
  x: JsonCell[];
  series: ChartSeries[];
}

export interface ErrorBody {
  error: {
    code: string;
    message: string;
    offset?: number;
    expected?: string[];
  };
}
