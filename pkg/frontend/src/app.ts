/** DOM shell of the data browser. All protocol logic lives in the tested
 * modules (client, jobs, grid, query-form, workbench, charts); this file
 * only moves values between form controls and those modules. */

import { renderChart, renderOverlayChart, numericColumns } from "./charts.js";
import { Client, describeError } from "./client.js";
import { LazyGrid } from "./grid.js";
import { pollJob } from "./jobs.js";
import { buildHourlyRequest, DEFAULT_HOURLY_FORM, validateHourlyForm } from "./query-form.js";
import type { HourlyFormState } from "./query-form.js";
import {
  buildActualsRequest,
  buildOverlay,
  buildWeeklyRequest,
  DEFAULT_WORKBENCH,
  validateWorkbench,
} from "./workbench.js";
import type { WorkbenchState } from "./workbench.js";
import type { ChartKind, JobView, JsonCell, QuerySubmission, StructuredRequest } from "./types.js";

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function fmtCell(cell: JsonCell): string {
  return cell === null ? "∅" : String(cell);
}

export class App {
  private readonly client: Client;
  private grid: LazyGrid | null = null;
  private activeJob: JobView | null = null;

  constructor(client: Client = new Client()) {
    this.client = client;
  }

  async start(): Promise<void> {
    el<HTMLButtonElement>("refresh-tables").addEventListener("click", () => void this.refreshTables());
    el<HTMLButtonElement>("run-text").addEventListener("click", () => void this.submitText());
    el<HTMLButtonElement>("run-hourly").addEventListener("click", () => void this.submitHourly());
    el<HTMLButtonElement>("load-more").addEventListener("click", () => void this.loadMore());
    el<HTMLButtonElement>("draw-chart").addEventListener("click", () => void this.drawChart());
    el<HTMLButtonElement>("run-workbench").addEventListener("click", () => void this.runWorkbench());
    for (const input of ["hourly-table", "hourly-product", "hourly-start", "hourly-end"]) {
      el<HTMLInputElement>(input).addEventListener("input", () => this.previewHourly());
    }
    await this.refreshTables();
    this.previewHourly();
  }

  private banner(message: string | null): void {
    const banner = el<HTMLDivElement>("error-banner");
    banner.textContent = message ?? "";
    banner.hidden = message === null;
  }

  // -- tables ---------------------------------------------------------------

  private async refreshTables(): Promise<void> {
    try {
      const tables = await this.client.listTables();
      const list = el<HTMLUListElement>("table-list");
      list.innerHTML = "";
      for (const table of tables) {
        const item = document.createElement("li");
        item.textContent = `${table.name} — ${table.rows} rows, ${table.columns} columns`;
        item.addEventListener("click", () => void this.showSchema(table.name));
        list.appendChild(item);
      }
      this.banner(null);
    } catch (error) {
      this.banner(describeError(error));
    }
  }

  private async showSchema(name: string): Promise<void> {
    try {
      const schema = await this.client.tableSchema(name);
      el<HTMLPreElement>("schema-view").textContent = schema.columns
        .map((column) => `${column.name}\t${column.type}`)
        .join("\n");
      el<HTMLInputElement>("hourly-table").value = name;
      el<HTMLInputElement>("workbench-table").value = name;
      this.previewHourly();
    } catch (error) {
      this.banner(describeError(error));
    }
  }

  // -- query submission -----------------------------------------------------

  private hourlyForm(): HourlyFormState {
    return {
      ...DEFAULT_HOURLY_FORM,
      table: el<HTMLInputElement>("hourly-table").value.trim(),
      product: el<HTMLInputElement>("hourly-product").value.trim(),
      startDate: el<HTMLInputElement>("hourly-start").value.trim(),
      endDate: el<HTMLInputElement>("hourly-end").value.trim(),
    };
  }

  private previewHourly(): void {
    const state = this.hourlyForm();
    const problems = validateHourlyForm(state);
    const button = el<HTMLButtonElement>("run-hourly");
    button.disabled = Object.keys(problems).length > 0;
    el<HTMLDivElement>("hourly-problems").textContent = Object.values(problems).join(" ");
  }

  private async submitText(): Promise<void> {
    const text = el<HTMLTextAreaElement>("query-text").value;
    await this.submit({ text });
  }

  private async submitHourly(): Promise<void> {
    const state = this.hourlyForm();
    if (Object.keys(validateHourlyForm(state)).length > 0) return;
    await this.submit({ request: buildHourlyRequest(state) });
  }

  private async submit(submission: QuerySubmission): Promise<JobView | null> {
    try {
      this.banner(null);
      const submitted = await this.client.submitQuery(submission);
      el<HTMLPreElement>("canonical-query").textContent = submitted.query;
      // A new submission invalidates everything loaded for the old one.
      this.grid = null;
      this.activeJob = null;
      this.renderGrid();
      el<HTMLDivElement>("job-status").textContent = `job ${submitted.job_id}: submitted`;
      const view = await pollJob(this.client, submitted.job_id, {
        onUpdate: (update) => {
          el<HTMLDivElement>("job-status").textContent = `job ${update.job_id}: ${update.status}`;
        },
      });
      this.activeJob = view;
      if (view.status === "failed") {
        this.banner(view.error ?? "query failed");
        return view;
      }
      el<HTMLDivElement>("job-status").textContent =
        `job ${view.job_id}: ${view.status} (${view.row_count ?? 0} rows)`;
      this.grid = new LazyGrid(this.client, view.job_id, 50);
      await this.loadMore();
      this.populateChartPickers();
      return view;
    } catch (error) {
      this.banner(describeError(error));
      return null;
    }
  }

  // -- result grid ----------------------------------------------------------

  private async loadMore(): Promise<void> {
    if (!this.grid) return;
    try {
      await this.grid.loadMore();
    } catch (error) {
      this.banner(`${describeError(error)} (loaded rows kept; retry to continue)`);
    }
    this.renderGrid();
  }

  private renderGrid(): void {
    const table = el<HTMLTableElement>("result-grid");
    const status = el<HTMLDivElement>("grid-status");
    const more = el<HTMLButtonElement>("load-more");
    if (!this.grid) {
      table.innerHTML = "";
      status.textContent = "";
      more.hidden = true;
      return;
    }
    const head = this.grid.schema
      ? `<tr>${this.grid.schema.map((c) => `<th>${c.name}</th>`).join("")}</tr>`
      : "";
    const body = this.grid.rows
      .map((row) => `<tr>${row.map((cell) => `<td>${fmtCell(cell)}</td>`).join("")}</tr>`)
      .join("");
    table.innerHTML = head + body;
    if (this.grid.rows.length === 0 && this.grid.done) {
      status.textContent = "no rows";
    } else {
      status.textContent = `${this.grid.rows.length} rows loaded${this.grid.done ? " (all)" : ""}`;
    }
    more.hidden = this.grid.done;
    more.textContent = this.grid.error ? "Retry" : "Load more";
  }

  // -- charts ---------------------------------------------------------------

  private populateChartPickers(): void {
    if (!this.grid?.schema && this.activeJob) return;
    const schema = this.grid?.schema ?? [];
    const xPick = el<HTMLSelectElement>("chart-x");
    const seriesPick = el<HTMLSelectElement>("chart-series");
    xPick.innerHTML = schema.map((c) => `<option>${c.name}</option>`).join("");
    // Only numeric columns can be drawn as values.
    seriesPick.innerHTML = numericColumns(schema)
      .map((name) => `<option>${name}</option>`)
      .join("");
  }

  private async drawChart(): Promise<void> {
    if (!this.activeJob) return;
    const kind = el<HTMLSelectElement>("chart-kind").value as ChartKind;
    const x = el<HTMLSelectElement>("chart-x").value;
    const series = [...el<HTMLSelectElement>("chart-series").selectedOptions].map((o) => o.value);
    if (!x || series.length === 0) return;
    try {
      const data = await this.client.jobChart(this.activeJob.job_id, kind, x, series);
      el<HTMLDivElement>("chart-host").innerHTML = renderChart(data);
      this.banner(null);
    } catch (error) {
      this.banner(describeError(error));
    }
  }

  // -- prediction workbench ---------------------------------------------------

  private workbenchState(): WorkbenchState {
    return {
      ...DEFAULT_WORKBENCH,
      table: el<HTMLInputElement>("workbench-table").value.trim(),
      product: el<HTMLInputElement>("workbench-product").value.trim(),
      targetDate: el<HTMLInputElement>("workbench-target").value.trim(),
      technique: el<HTMLSelectElement>("workbench-technique").value as WorkbenchState["technique"],
      selectorKind: el<HTMLSelectElement>("workbench-selector-kind").value as WorkbenchState["selectorKind"],
      selectorN: Number(el<HTMLInputElement>("workbench-selector-n").value),
    };
  }

  private async runToRows(request: StructuredRequest): Promise<JsonCell[][]> {
    const submitted = await this.client.submitQuery({ request });
    const view = await pollJob(this.client, submitted.job_id);
    if (view.status === "failed") {
      throw new Error(view.error ?? "query failed");
    }
    const grid = new LazyGrid(this.client, view.job_id, 200);
    while (!grid.done) {
      await grid.loadMore();
    }
    return grid.rows;
  }

  private async runWorkbench(): Promise<void> {
    const state = this.workbenchState();
    const problems = validateWorkbench(state);
    el<HTMLDivElement>("workbench-problems").textContent = Object.values(problems).join(" ");
    if (Object.keys(problems).length > 0) return;
    try {
      this.banner(null);
      const ep = await this.runToRows(buildWeeklyRequest(state, "ep"));
      const rp = await this.runToRows(buildWeeklyRequest(state, "rp"));
      const dates = ep.map((row) => row[0]).filter((d): d is string => typeof d === "string");
      const actual = await this.runToRows(
        buildActualsRequest(state, dates[0] ?? state.targetDate, dates[dates.length - 1] ?? state.targetDate),
      );
      const overlay = buildOverlay(actual, ep, rp);
      el<HTMLDivElement>("workbench-chart").innerHTML = renderOverlayChart(overlay);
    } catch (error) {
      this.banner(describeError(error));
    }
  }
}
