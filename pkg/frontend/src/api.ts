// Typed client for the layout service. All geometry and alignment logic
// stays server-side; this module only decodes the documents.

import type { AlignResult, Box, Layout, SequenceDoc, Selection } from "./types.js";

export class ServiceError extends Error {
  constructor(
    public status: number,
    public code: string,
    message: string,
  ) {
    super(message);
  }
}

interface ScxDocument {
  resources: Record<string, unknown>[];
}

/** Unwrap a layout endpoint response (an SCX document holding one
 * FlattenedLayout node) into a plain Layout. */
export function layoutFromScx(doc: unknown): Layout {
  const resources = (doc as ScxDocument).resources;
  const node = resources?.find((r) => r["type"] === "FlattenedLayout");
  if (!node) {
    throw new Error("response contains no FlattenedLayout node");
  }
  return {
    canvas: node["canvas"] as string,
    width: node["width"] as number,
    height: node["height"] as number,
    label: (node["label"] as string | undefined) ?? null,
    paintings: node["paintings"] as Layout["paintings"],
    layers: node["layers"] as Layout["layers"],
    choices: node["choices"] as Layout["choices"],
  };
}

function selectParams(selection: Selection): string {
  return Object.entries(selection)
    .map(([choice, option]) => `select=${encodeURIComponent(`${choice}=${option}`)}`)
    .join("&");
}

export type FetchLike = (url: string, init?: { signal?: AbortSignal }) => Promise<{
  ok: boolean;
  status: number;
  json(): Promise<unknown>;
}>;

export class ServiceClient {
  constructor(
    private base: string,
    private fetchFn: FetchLike = (url, init) => fetch(url, init),
  ) {}

  private async get(path: string, signal?: AbortSignal): Promise<unknown> {
    const response = await this.fetchFn(this.base + path, { signal });
    const body = await response.json();
    if (!response.ok) {
      const err = body as { code?: string; message?: string };
      throw new ServiceError(response.status, err.code ?? "E_UNKNOWN", err.message ?? "request failed");
    }
    return body;
  }

  manifest(signal?: AbortSignal): Promise<unknown> {
    return this.get("/manifest", signal);
  }

  async sequence(id: string, signal?: AbortSignal): Promise<SequenceDoc> {
    return (await this.get(`/sequence/${encodeURIComponent(id)}`, signal)) as SequenceDoc;
  }

  async layout(canvasId: string, selection: Selection, signal?: AbortSignal): Promise<Layout> {
    const params = selectParams(selection);
    const query = params ? `?${params}` : "";
    const doc = await this.get(`/canvas/${encodeURIComponent(canvasId)}/layout${query}`, signal);
    return layoutFromScx(doc);
  }

  async align(canvasId: string, region: Box, minFraction = 0, signal?: AbortSignal): Promise<AlignResult> {
    const query = `x=${region.x}&y=${region.y}&w=${region.w}&h=${region.h}&minFraction=${minFraction}`;
    return (await this.get(`/canvas/${encodeURIComponent(canvasId)}/align?${query}`, signal)) as AlignResult;
  }
}
