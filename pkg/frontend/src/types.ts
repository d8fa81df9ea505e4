/** Wire types for the dpkit trace/session API. */

export type CellIndex = number[];
export type OpKind = "READ" | "WRITE" | "MAXMIN";
export type QuestionKind = "WRITE_CELLS" | "READ_CELLS" | "CELL_VALUE";

export interface OpDoc {
  seq: number;
  kind: OpKind;
  index: CellIndex;
  value?: number;
}

export interface FrameDoc {
  t: number;
  ops: OpDoc[];
  written: CellIndex[];
  read: CellIndex[];
  maxmin: CellIndex[];
  deltas: [CellIndex, number][];
  terminal: boolean;
  annotation?: string;
  /** set by the server while a quiz session hides this frame */
  redacted?: boolean;
}

export interface ColorsDoc {
  READ: string;
  WRITE: string;
  MAXMIN: string;
}

export interface TraceDoc {
  schema: number;
  name: string;
  shape: number[];
  colors: ColorsDoc;
  labels?: { rows?: string[]; cols?: string[] };
  frames: FrameDoc[];
  traceback?: CellIndex[];
}

export interface QuestionDoc {
  id: string;
  kind: QuestionKind;
  t: number;
  /** CELL_VALUE only; null while the frame's write question is still open */
  index?: CellIndex | null;
}

export interface SessionDoc {
  session: string;
  t: number;
  complete: boolean;
  mistakes: number;
  questions: QuestionDoc[];
  correct?: boolean;
  advanced?: boolean;
  missing?: number;
  extra?: CellIndex[];
  message?: string;
}

export interface FrameReply {
  frame: FrameDoc;
  snapshot: (number | null)[] | (number | null)[][];
}

/** Normalized array state: always rows x cols (1D traces become one row). */
export type Snapshot = (number | null)[][];

export type AnswerPayload =
  | { question_id: string; cells: CellIndex[] }
  | { question_id: string; value: number };
