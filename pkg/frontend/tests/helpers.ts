/** Shared test plumbing: fixture loading and a recording fake fetch. */

import { readFileSync } from "node:fs";
import path from "node:path";
import { fileURLToPath } from "node:url";

import type { FetchLike } from "../src/client.js";

const FIXTURES = path.join(path.dirname(fileURLToPath(import.meta.url)), "fixtures");

export function loadFixture<T>(name: string): T {
  return JSON.parse(readFileSync(path.join(FIXTURES, name), "utf-8")) as T;
}

/** A Response stand-in with just the surface the client touches. */
export function jsonResponse(status: number, body: unknown): Response {
  return {
    status,
    ok: status >= 200 && status < 300,
    json: async () => body,
  } as unknown as Response;
}

export interface RecordedCall {
  url: string;
  method: string;
  body?: unknown;
}

export interface FakeFetch {
  fetchFn: FetchLike;
  calls: RecordedCall[];
}

/** Wrap a handler so every request is recorded before it is answered. */
export function recordingFetch(
  handler: (url: string, init?: RequestInit) => Response | Promise<Response>,
): FakeFetch {
  const calls: RecordedCall[] = [];
  const fetchFn: FetchLike = async (url, init) => {
    calls.push({
      url,
      method: init?.method ?? "GET",
      body: typeof init?.body === "string" ? JSON.parse(init.body) : undefined,
    });
    return handler(url, init);
  };
  return { fetchFn, calls };
}

/** Extract the `cursor` query parameter (or null) from a request URL. */
export function cursorOf(url: string): string | null {
  return new URL(url, "http://test").searchParams.get("cursor");
}
