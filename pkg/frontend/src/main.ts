// Bootstrap and event wiring. At most one layout fetch is in flight;
// newer requests abort older ones.

import { ServiceClient, ServiceError } from "./api.js";
import { renderBanner, renderChoices, renderImagePane, renderTextPanes, type ClickTarget } from "./render.js";
import {
  currentCanvas,
  hitSet,
  initialState,
  pruneSelection,
  regionBox,
  stepCanvas,
  toggleChoice,
  type ViewState,
} from "./state.js";
import type { Layout } from "./types.js";

const params = new URLSearchParams(window.location.search);
const endpoint = params.get("service") ?? "http://127.0.0.1:8077";
const client = new ServiceClient(endpoint);

let state: ViewState = initialState();
let layout: Layout | null = null;
let inflight: AbortController | null = null;

const el = {
  banner: document.getElementById("banner")!,
  image: document.getElementById("image-pane")!,
  middle: document.getElementById("middle-pane")!,
  right: document.getElementById("right-pane")!,
  choices: document.getElementById("choices")!,
  position: document.getElementById("position")!,
  prev: document.getElementById("prev")! as HTMLButtonElement,
  next: document.getElementById("next")! as HTMLButtonElement,
};

function draw(): void {
  el.position.textContent = state.canvases.length
    ? `${state.canvasIndex + 1} / ${state.canvases.length}`
    : "-";
  el.prev.disabled = state.canvasIndex <= 0;
  el.next.disabled = state.canvasIndex >= state.canvases.length - 1;
  if (!layout) {
    return;
  }
  renderImagePane(el.image, layout, state.highlight, onSegmentClick);
  renderTextPanes(el.middle, el.right, layout, state.highlight, onSegmentClick);
  renderChoices(el.choices, layout.choices, onChoicePick);
}

async function refreshLayout(): Promise<void> {
  const canvas = currentCanvas(state);
  if (!canvas) {
    return;
  }
  inflight?.abort();
  const controller = new AbortController();
  inflight = controller;
  try {
    const fresh = await client.layout(canvas, state.selection, controller.signal);
    if (controller.signal.aborted) {
      return;
    }
    layout = fresh;
    state = { ...state, selection: pruneSelection(state.selection, fresh) };
    renderBanner(el.banner, null, null);
    draw();
  } catch (err) {
    if (controller.signal.aborted) {
      return;
    }
    if (err instanceof ServiceError) {
      renderBanner(el.banner, `${err.status}: ${err.message}`, null);
    } else {
      renderBanner(el.banner, `cannot reach ${endpoint}`, () => void refreshLayout());
    }
  }
}

async function onSegmentClick(target: ClickTarget | null): Promise<void> {
  if (!layout) {
    return;
  }
  if (target === null) {
    state = { ...state, highlight: null };
    draw();
    return;
  }
  const box = regionBox(target.region);
  try {
    const result = await client.align(layout.canvas, box);
    state = {
      ...state,
      highlight: { sourcePane: "image", annotation: target.annotation, region: box, hits: hitSet(result) },
    };
    draw();
  } catch (err) {
    state = { ...state, highlight: null };
    draw();
    renderBanner(el.banner, `alignment failed: ${err instanceof Error ? err.message : err}`, null);
  }
}

function onChoicePick(choiceId: string, option: string): void {
  if (!layout) {
    return;
  }
  const next = toggleChoice(state.selection, layout.choices, choiceId, option);
  if (next === null) {
    console.warn(`ignoring invalid option ${option} for ${choiceId}`);
    return;
  }
  state = { ...state, selection: next, highlight: null };
  void refreshLayout();
}

async function start(): Promise<void> {
  try {
    const manifest = (await client.manifest()) as { resources: Record<string, unknown>[] };
    const manifestNode = manifest.resources.find((r) => r["type"] === "Manifest");
    const sequences = (manifestNode?.["sequences"] as string[]) ?? [];
    if (!sequences.length) {
      renderBanner(el.banner, "manifest lists no sequences", null);
      return;
    }
    const sequence = await client.sequence(sequences[0]);
    state = {
      ...state,
      sequence: sequence.sequence,
      canvases: sequence.canvases.map((c) => c.id),
      canvasIndex: 0,
    };
    await refreshLayout();
  } catch (err) {
    renderBanner(el.banner, `cannot reach ${endpoint}`, () => void start());
  }
}

el.prev.addEventListener("click", () => {
  state = stepCanvas(state, -1);
  void refreshLayout();
  draw();
});
el.next.addEventListener("click", () => {
  state = stepCanvas(state, 1);
  void refreshLayout();
  draw();
});

void start();
