// Pure view-state logic, kept DOM-free so it is directly testable.

import type { AlignResult, Box, ChoiceInfo, Layout, Painting, Selection } from "./types.js";

export type Pane = "image" | "middle" | "right";

export interface Highlight {
  sourcePane: Pane;
  annotation: string;
  region: Box;
  /** Every annotation the service aligned with the clicked region. */
  hits: Set<string>;
}

export interface ViewState {
  sequence: string | null;
  canvases: string[];
  canvasIndex: number;
  selection: Selection;
  highlight: Highlight | null;
}

export function initialState(): ViewState {
  return { sequence: null, canvases: [], canvasIndex: 0, selection: {}, highlight: null };
}

export function currentCanvas(state: ViewState): string | null {
  return state.canvases[state.canvasIndex] ?? null;
}

export function stepCanvas(state: ViewState, delta: number): ViewState {
  if (state.canvases.length === 0) {
    return state;
  }
  const index = Math.min(Math.max(state.canvasIndex + delta, 0), state.canvases.length - 1);
  if (index === state.canvasIndex) {
    return state;
  }
  return { ...state, canvasIndex: index, highlight: null };
}

/** Bounding box of a painting region; the alignment endpoint takes boxes. */
export function regionBox(region: [number, number][]): Box {
  const xs = region.map(([x]) => x);
  const ys = region.map(([, y]) => y);
  const x = Math.min(...xs);
  const y = Math.min(...ys);
  return { x, y, w: Math.max(...xs) - x, h: Math.max(...ys) - y };
}

/** Drop selections for choices the current layout does not offer. */
export function pruneSelection(selection: Selection, layout: Layout): Selection {
  const live = new Set(layout.choices.map((c) => c.id));
  return Object.fromEntries(Object.entries(selection).filter(([choice]) => live.has(choice)));
}

/** New selection after picking an option, or null when the pick is invalid. */
export function toggleChoice(
  selection: Selection,
  choices: ChoiceInfo[],
  choiceId: string,
  option: string,
): Selection | null {
  const choice = choices.find((c) => c.id === choiceId);
  if (!choice || !choice.options.includes(option)) {
    return null;
  }
  return { ...selection, [choiceId]: option };
}

/** The annotations to light up, exactly as the service returned them. */
export function hitSet(result: AlignResult): Set<string> {
  const ids = new Set<string>();
  for (const group of result.groups) {
    for (const hit of group.hits) {
      ids.add(hit.annotation);
    }
  }
  return ids;
}

export interface TextLayerGroup {
  layer: string | null;
  label: string | null;
  paintings: Painting[];
}

/** Text paintings grouped by layer, each group in z-order. */
export function textLayerGroups(layout: Layout): TextLayerGroup[] {
  const labels = new Map(layout.layers.map((l) => [l.id, l.label]));
  const groups = new Map<string | null, Painting[]>();
  for (const painting of layout.paintings) {
    if (painting.kind === "image" || painting.kind === "zone") {
      continue;
    }
    const key = painting.layer;
    if (!groups.has(key)) {
      groups.set(key, []);
    }
    groups.get(key)!.push(painting);
  }
  const keys = [...groups.keys()].sort((a, b) => {
    if (a === null) return 1;
    if (b === null) return -1;
    return a < b ? -1 : a > b ? 1 : 0;
  });
  return keys.map((key) => ({
    layer: key,
    label: key === null ? null : (labels.get(key) ?? null),
    paintings: groups.get(key)!.slice().sort((a, b) => a.zOrder - b.zOrder),
  }));
}

/** Alternate text layers across the two text panes. */
export function paneOf(groupIndex: number): Pane {
  return groupIndex % 2 === 0 ? "middle" : "right";
}

export function imagePaintings(layout: Layout): Painting[] {
  return layout.paintings.filter((p) => p.kind === "image");
}
