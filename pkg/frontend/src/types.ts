// Shapes of the service documents the viewer consumes.

export interface Painting {
  annotation: string;
  kind: string;
  layer: string | null;
  body: string;
  bodyText?: string;
  bodySegment?: Record<string, unknown>;
  /** Absolute canvas-frame vertices, [x, y] pairs. */
  region: [number, number][];
  /** Residual clockwise rotation the content needs for display. */
  rotation: number;
  zOrder: number;
}

export interface LayerInfo {
  id: string;
  label: string | null;
}

export interface ChoiceInfo {
  id: string;
  options: string[];
  selected: string;
}

export interface Layout {
  canvas: string;
  width: number;
  height: number;
  label: string | null;
  paintings: Painting[];
  layers: LayerInfo[];
  choices: ChoiceInfo[];
}

export interface SequenceCanvas {
  id: string;
  label: string | null;
  width: number | null;
  height: number | null;
}

export interface SequenceDoc {
  sequence: string;
  label: string | null;
  canvases: SequenceCanvas[];
}

export interface AlignHit {
  annotation: string;
  overlapArea: number;
  overlapFraction: number;
}

export interface AlignGroup {
  layer: string | null;
  hits: AlignHit[];
}

export interface AlignResult {
  canvas: string;
  region: { x: number; y: number; w: number; h: number };
  groups: AlignGroup[];
}

export interface Box {
  x: number;
  y: number;
  w: number;
  h: number;
}

export type Selection = Record<string, string>;
