/** Lazily loaded result grid state.
 *
 * Pages are addressed by opaque cursors. The controller guarantees the
 * pagination contract end to end: at most one in-flight fetch, each cursor
 * requested exactly once (duplicate scroll events coalesce onto the
 * in-flight request), and a failed fetch leaves the cursor unconsumed so a
 * retry resumes exactly where the grid stopped — rows are never skipped,
 * never repeated, never lost. */

import type { Client } from "./client.js";
import type { ColumnSpec, JsonCell } from "./types.js";

export class LazyGrid {
  readonly rows: JsonCell[][] = [];
  schema: ColumnSpec[] | null = null;
  /** True once the server omitted next_cursor: all rows are loaded. */
  done = false;
  /** Message of the last failed fetch; cleared by a successful retry. */
  error: string | null = null;

  private started = false;
  private nextCursor: string | undefined;
  private inflight: Promise<void> | null = null;

  constructor(
    private readonly client: Client,
    private readonly jobId: string,
    private readonly pageSize?: number,
  ) {}

  /** How many pages have been applied (i.e. successful fetches). */
  pagesLoaded = 0;

  /** Request the next page. Safe to call repeatedly: concurrent calls share
   * one fetch, and calls after the end are no-ops. */
  loadMore(): Promise<void> {
    if (this.done) {
      return Promise.resolve();
    }
    if (this.inflight) {
      return this.inflight;
    }
    const cursor = this.started ? this.nextCursor : undefined;
    this.inflight = this.client
      .jobRows(this.jobId, cursor, this.pageSize)
      .then((page) => {
        this.rows.push(...page.rows);
        this.schema ??= page.schema;
        this.nextCursor = page.next_cursor;
        this.started = true;
        this.pagesLoaded += 1;
        this.error = null;
        if (page.next_cursor === undefined) {
          this.done = true;
        }
      })
      .catch((error: unknown) => {
        // The cursor was not consumed; loadMore() retries the same page.
        this.error = error instanceof Error ? error.message : String(error);
        throw error;
      })
      .finally(() => {
        this.inflight = null;
      });
    return this.inflight;
  }

  /** Clear the failure state and re-request the page that failed. */
  retry(): Promise<void> {
    this.error = null;
    return this.loadMore();
  }
}
