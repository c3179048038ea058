import { readFileSync } from "node:fs";
import { dirname, join } from "node:path";
import { fileURLToPath } from "node:url";

import type { FetchLike } from "../src/api.js";

const here = dirname(fileURLToPath(import.meta.url));

export function fixture(name: string): unknown {
  return JSON.parse(readFileSync(join(here, "fixtures", name), "utf-8"));
}

/** A fetch stub mapping exact URLs to canned fixture responses. */
export function stubFetch(routes: Record<string, unknown>): FetchLike & { calls: string[] } {
  const calls: string[] = [];
  const fn = (async (url: string) => {
    calls.push(url);
    if (!(url in routes)) {
      return {
        ok: false,
        status: 404,
        json: async () => ({ code: "E_NOT_FOUND", message: `no stub for ${url}` }),
      };
    }
    return { ok: true, status: 200, json: async () => routes[url] };
  }) as FetchLike & { calls: string[] };
  fn.calls = calls;
  return fn;
}

export const BASE = "http://stub";

export function enc(uri: string): string {
  return encodeURIComponent(uri);
}
