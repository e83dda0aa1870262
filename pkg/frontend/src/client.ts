/** Typed client for the bx HTTP API. Every method maps to a documented
 * endpoint; nothing else is ever requested. */

import type {
  ChartKind,
  ChartResponse,
  ErrorBody,
  JobView,
  ModuleInfo,
  QuerySubmission,
  RowsPage,
  SchemaResponse,
  SubmitResponse,
  TableInfo,
} from "./types.js";

/** One human-readable message per server error code. */
export const ERROR_MESSAGES: Record<string, string> = {
  parse_error: "The query text could not be parsed.",
  unknown_table: "No table with that name exists.",
  unknown_column: "The query names a column the table does not have.",
  unknown_module: "No transform module with that name is registered.",
  type_mismatch: "A filter compares a column with a value of the wrong kind.",
  duplicate_table: "A table with that name already exists.",
  duplicate_module: "A module with that name already exists.",
  table_in_use: "The table is being read by a running query; try again.",
  job_not_found: "That query job no longer exists (results expire).",
  job_not_ready: "The query has not produced rows (still running, or failed).",
  stale_cursor: "This result page reference is no longer valid; reload the result.",
  queue_full: "The server's query queue is full; retry in a moment.",
  invalid_argument: "The request carries an invalid value.",
  csv_format: "The uploaded data is not well-formed CSV for the given schema.",
  missing_history: "The history window has gaps: some dates have no scores.",
  module_error: "The transform module rejected its input.",
  engine_error: "The server hit an unexpected internal error.",
};

export class ApiError extends Error {
  readonly code: string;
  readonly status: number;
  readonly offset?: number;
  readonly expected?: string[];

  constructor(status: number, body: ErrorBody["error"]) {
    super(body.message);
    this.name = "ApiError";
    this.status = status;
    this.code = body.code;
    this.offset = body.offset;
    this.expected = body.expected;
  }
}

/** The banner text for any failure, specific when the code is known. */
export function describeError(error: unknown): string {
  if (error instanceof ApiError) {
    return ERROR_MESSAGES[error.code] ?? error.message;
  }
  return error instanceof Error ? error.message : String(error);
}

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class Client {
  constructor(
    private readonly baseUrl: string = "",
    private readonly fetchFn: FetchLike = (input, init) => fetch(input, init),
  ) {}

  private async request<T>(method: string, path: string, body?: unknown): Promise<T> {
    const init: RequestInit = { method, headers: {} };
    if (body !== undefined) {
      init.headers = { "Content-Type": "application/json" };
      init.body = JSON.stringify(body);
    }
    const response = await this.fetchFn(this.baseUrl + path, init);
    if (response.status === 204) {
      return undefined as T;
    }
    const parsed = (await response.json()) as T | ErrorBody;
    if (!response.ok) {
      const { error } = parsed as ErrorBody;
      throw new ApiError(response.status, error ?? { code: "engine_error", message: "unexpected failure" });
    }
    return parsed as T;
  }

  listTables(): Promise<TableInfo[]> {
    return this.request("GET", "/api/tables");
  }

  tableSchema(name: string): Promise<SchemaResponse> {
    return this.request("GET", `/api/tables/${encodeURIComponent(name)}/schema`);
  }

  dropTable(name: string): Promise<void> {
    return this.request("DELETE", `/api/tables/${encodeURIComponent(name)}`);
  }

  listModules(): Promise<ModuleInfo[]> {
    return this.request("GET", "/api/modules");
  }

  submitQuery(submission: QuerySubmission): Promise<SubmitResponse> {
    return this.request("POST", "/api/queries", submission);
  }

  jobStatus(jobId: string): Promise<JobView> {
    return this.request("GET", `/api/queries/${encodeURIComponent(jobId)}`);
  }

  jobRows(jobId: string, cursor?: string, limit?: number): Promise<RowsPage> {
    const params = new URLSearchParams();
    if (cursor !== undefined) params.set("cursor", cursor);
    if (limit !== undefined) params.set("limit", String(limit));
    const suffix = params.size > 0 ? `?${params.toString()}` : "";
    return this.request("GET", `/api/queries/${encodeURIComponent(jobId)}/rows${suffix}`);
  }

  jobChart(jobId: string, kind: ChartKind, x: string, series: string[]): Promise<ChartResponse> {
    const params = new URLSearchParams({ kind, x, series: series.join(",") });
    return this.request("GET", `/api/queries/${encodeURIComponent(jobId)}/chart?${params.toString()}`);
  }
}
