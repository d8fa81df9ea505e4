/** Pure view logic: snapshots, transport, and the rendered grid model.
 *
 * Everything here is a function of its inputs so the UI can be tested
 * without a DOM; main.ts only moves these results into elements.
 */

import type { CellIndex, ColorsDoc, FrameDoc, Snapshot, TraceDoc } from "./types";

export type Mode = "VIEW" | "TEST";

export interface TraceMeta {
  name: string;
  shape: number[];
  colors: ColorsDoc;
  labels?: { rows?: string[]; cols?: string[] };
  frameCount: number;
  traceback: CellIndex[] | null;
}

export function metaOf(trace: TraceDoc): TraceMeta {
  return {
    name: trace.name,
    shape: trace.shape,
    colors: trace.colors,
    labels: trace.labels,
    frameCount: trace.frames.length,
    traceback: trace.traceback ?? null,
  };
}

export interface ViewState {
  mode: Mode;
  t: number; // current frame, 1-based; 0 only for an empty trace
  playing: boolean;
  speed: number; // frames per second
  selection: string[]; // selected cell keys while answering (sorted, unique)
  sessionId: string | null;
}

export function initialView(frameCount: number): ViewState {
  return {
    mode: "VIEW",
    t: Math.min(1, frameCount),
    playing: false,
    speed: 1,
    selection: [],
    sessionId: null,
  };
}

export type TransportAction =
  | { kind: "play" }
  | { kind: "pause" }
  | { kind: "step_fwd" }
  | { kind: "step_back" }
  | { kind: "seek"; t: number }
  | { kind: "tick" };

function clampFrame(t: number, frameCount: number): number {
  if (frameCount === 0) return 0;
  return Math.max(1, Math.min(frameCount, Math.round(t)));
}

/** Playback/stepping; only meaningful in VIEW mode, out-of-range seeks clamp. */
export function transport(view: ViewState, action: TransportAction, frameCount: number): ViewState {
  if (view.mode !== "VIEW") return view;
  switch (action.kind) {
    case "play":
      return { ...view, playing: true };
    case "pause":
      return { ...view, playing: false };
    case "step_fwd":
      return { ...view, playing: false, t: clampFrame(view.t + 1, frameCount) };
    case "step_back":
      return { ...view, playing: false, t: clampFrame(view.t - 1, frameCount) };
    case "seek":
      return { ...view, playing: false, t: clampFrame(action.t, frameCount) };
    case "tick": {
      if (!view.playing) return view;
      if (view.t >= frameCount) return { ...view, playing: false };
      return { ...view, t: view.t + 1 };
    }
  }
}

export function cellKey(index: CellIndex, shape: number[]): string {
  return (shape.length === 1 ? [0, index[0] ?? 0] : index).join(",");
}

export function keyToIndex(key: string, shape: number[]): CellIndex {
  const [row, col] = key.split(",").map(Number);
  return shape.length === 1 ? [col ?? 0] : [row ?? 0, col ?? 0];
}

export function gridExtents(shape: number[]): { rows: number; cols: number } {
  if (shape.length === 1) return { rows: 1, cols: shape[0] ?? 0 };
  return { rows: shape[0] ?? 0, cols: shape[1] ?? 0 };
}

export function emptySnapshot(shape: number[]): Snapshot {
  const { rows, cols } = gridExtents(shape);
  return Array.from({ length: rows }, () => Array<number | null>(cols).fill(null));
}

/** Server snapshots come flat for 1D traces; normalize to rows x cols. */
export function normalizeSnapshot(
  shape: number[],
  raw: (number | null)[] | (number | null)[][],
): Snapshot {
  if (shape.length === 1) return [raw as (number | null)[]];
  return raw as Snapshot;
}

/** Client-side replay of deltas: the state after frames 1..t. */
export function snapshotUpTo(shape: number[], frames: FrameDoc[], t: number): Snapshot {
  const grid = emptySnapshot(shape);
  for (const frame of frames.slice(0, t)) {
    for (const [index, value] of frame.deltas) {
      const row = shape.length === 1 ? 0 : (index[0] ?? 0);
      const col = shape.length === 1 ? (index[0] ?? 0) : (index[1] ?? 0);
      (grid[row] as (number | null)[])[col] = value;
    }
  }
  return grid;
}

export interface CellView {
  key: string;
  text: string;
  /** background hex (no '#') or null for untinted */
  color: string | null;
  selected: boolean;
  onPath: boolean;
}

export interface GridModelArgs {
  shape: number[];
  colors: ColorsDoc;
  snapshot: Snapshot;
  /** highlights source; pass null for a bare grid (e.g. predicting in TEST) */
  frame: FrameDoc | null;
  /** drawn when showPath is set (the final frame of a finished trace) */
  traceback: CellIndex[] | null;
  showPath: boolean;
  selection: ReadonlySet<string>;
}

/** The rendered grid as data; a pure function of its arguments. */
export function gridModel(args: GridModelArgs): CellView[][] {
  const { rows, cols } = gridExtents(args.shape);
  const tint = new Map<string, string>();
  if (args.frame && !args.frame.redacted) {
    // precedence: a write outranks the argmax marker outranks a read
    for (const index of args.frame.read) tint.set(cellKey(index, args.shape), args.colors.READ);
    for (const index of args.frame.maxmin) tint.set(cellKey(index, args.shape), args.colors.MAXMIN);
    for (const index of args.frame.written) tint.set(cellKey(index, args.shape), args.colors.WRITE);
  }
  const path = new Set<string>();
  if (args.showPath && args.traceback) {
    for (const index of args.traceback) path.add(cellKey(index, args.shape));
  }
  const grid: CellView[][] = [];
  for (let row = 0; row < rows; row++) {
    const line: CellView[] = [];
    for (let col = 0; col < cols; col++) {
      const key = `${row},${col}`;
      const value = args.snapshot[row]?.[col] ?? null;
      line.push({
        key,
        text: value === null ? "" : String(value),
        color: tint.get(key) ?? null,
        selected: args.selection.has(key),
        onPath: path.has(key),
      });
    }
    grid.push(line);
  }
  return grid;
}

/** Cell contents only; what scrub coherence compares. */
export function gridText(grid: CellView[][]): string[][] {
  return grid.map((row) => row.map((cell) => cell.text));
}
