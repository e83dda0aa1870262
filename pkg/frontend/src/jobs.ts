/** Job polling: 500 ms initial interval, doubling to a 5 s ceiling. */

import type { Client } from "./client.js";
import type { JobView } from "./types.js";

export interface PollOptions {
  initialMs?: number;
  maxMs?: number;
  factor?: number;
  /** Injectable for tests; defaults to setTimeout. */
  sleep?: (ms: number) => Promise<void>;
  onUpdate?: (view: JobView) => void;
}

const defaultSleep = (ms: number) => new Promise<void>((resolve) => setTimeout(resolve, ms));

/** Poll until the job reaches a terminal state; returns the terminal view
 * (callers branch on `status` — a failed job is an outcome, not a throw). */
export async function pollJob(
  client: Client,
  jobId: string,
  options: PollOptions = {},
): Promise<JobView> {
  const { initialMs = 500, maxMs = 5000, factor = 2, sleep = defaultSleep, onUpdate } = options;
  let delay = initialMs;
  for (;;) {
    const view = await client.jobStatus(jobId);
    onUpdate?.(view);
    if (view.status === "succeeded" || view.status === "failed") {
      return view;
    }
    await sleep(delay);
    delay = Math.min(delay * factor, maxMs);
  }
}
