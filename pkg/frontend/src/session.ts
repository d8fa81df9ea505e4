/** Testing-mode state machine.
 *
 * The client never sees ground truths: it only holds the server's question
 * list, the snapshot of everything already revealed, and the verdict of the
 * last submission. Grading happens on the server; these reducers just track
 * the conversation.
 */

import type { ApiClient } from "./api";
import { cellKey, keyToIndex, normalizeSnapshot, emptySnapshot } from "./model";
import type { Snapshot } from "./types";
import type { AnswerPayload, CellIndex, FrameDoc, QuestionDoc, QuestionKind, SessionDoc } from "./types";

export interface TestState {
  sessionId: string;
  doc: SessionDoc;
  /** array state after the last revealed frame (t - 1) */
  snapshot: Snapshot;
  /** the frame just revealed by an advance, for its highlight flash */
  revealed: FrameDoc | null;
  selection: string[];
  valueInput: string;
  feedback: string | null;
}

export function currentQuestion(state: TestState): QuestionDoc | null {
  return state.doc.questions[0] ?? null;
}

export function questionPrompt(question: QuestionDoc): string {
  switch (question.kind) {
    case "WRITE_CELLS":
      return `Which cells are written in frame ${question.t}? (click them, then submit)`;
    case "READ_CELLS":
      return `Which cells are read for frame ${question.t}? (click them, then submit)`;
    case "CELL_VALUE": {
      const where = question.index ? `cell (${question.index.join(", ")})` : "the written cell";
      return `What value lands in ${where}?`;
    }
  }
}

export function toggleCell(selection: string[], key: string): string[] {
  const next = selection.includes(key) ? selection.filter((k) => k !== key) : [...selection, key];
  return next.sort();
}

/** Build the wire answer for the active question from the UI inputs. */
export function answerPayload(
  question: QuestionDoc,
  selection: string[],
  valueInput: string,
  shape: number[],
): AnswerPayload | { error: string } {
  if (question.kind === "CELL_VALUE") {
    const value = Number(valueInput);
    if (valueInput.trim() === "" || Number.isNaN(value)) {
      return { error: "enter a number first" };
    }
    return { question_id: question.id, value };
  }
  const cells: CellIndex[] = selection.map((key) => keyToIndex(key, shape));
  return { question_id: question.id, cells };
}

export function feedbackText(reply: SessionDoc): string {
  if (reply.correct) return "correct!";
  const parts: string[] = [];
  if (reply.missing) parts.push(`${reply.missing} cell${reply.missing === 1 ? "" : "s"} missing`);
  if (reply.extra && reply.extra.length > 0) {
    parts.push(`wrong: ${reply.extra.map((index) => `(${index.join(", ")})`).join(" ")}`);
  }
  if (parts.length === 0) parts.push(reply.message || "incorrect, try again");
  return `incorrect: ${parts.join("; ")}`;
}

/** Fold a grading reply into the test state.
 *
 * Correct answers clear the inputs; a wrong one keeps the selection so it
 * can be edited. Advancing swaps in the snapshot/revealed frame fetched by
 * the caller.
 */
export function applyReply(
  state: TestState,
  reply: SessionDoc,
  advanceData: { snapshot: Snapshot; revealed: FrameDoc | null } | null,
): TestState {
  const next: TestState = {
    ...state,
    doc: reply,
    feedback: feedbackText(reply),
  };
  if (!reply.correct) {
    return next; // selection and value stay put for editing
  }
  next.selection = [];
  next.valueInput = "";
  if (reply.advanced && advanceData) {
    next.snapshot = advanceData.snapshot;
    next.revealed = advanceData.revealed;
  }
  return next;
}

/** Start a session at the given frame and fetch the revealed prefix state. */
export async function startTest(
  api: ApiClient,
  shape: number[],
  enabled: QuestionKind[],
  startT: number,
): Promise<TestState> {
  const doc = await api.startSession(enabled, startT);
  const snapshot =
    doc.t > 1 ? normalizeSnapshot(shape, (await api.frame(doc.t - 1)).snapshot) : emptySnapshot(shape);
  return {
    sessionId: doc.session,
    doc,
    snapshot,
    revealed: null,
    selection: [],
    valueInput: "",
    feedback: null,
  };
}

/** Submit the active question's answer; fetches the newly revealed frame on
 * an advance so the grid can show it. */
export async function submitAnswer(api: ApiClient, shape: number[], state: TestState): Promise<TestState> {
  const question = currentQuestion(state);
  if (!question) return state;
  const payload = answerPayload(question, state.selection, state.valueInput, shape);
  if ("error" in payload) {
    return { ...state, feedback: payload.error };
  }
  const reply = await api.postAnswer(state.sessionId, payload);
  let advanceData: { snapshot: Snapshot; revealed: FrameDoc | null } | null = null;
  if (reply.correct && reply.advanced) {
    const revealedT = reply.t - 1; // the frame everyone just predicted
    const frameReply = revealedT >= 1 ? await api.frame(revealedT) : null;
    advanceData = {
      snapshot: frameReply ? normalizeSnapshot(shape, frameReply.snapshot) : emptySnapshot(shape),
      revealed: frameReply ? frameReply.frame : null,
    };
  }
  return applyReply(state, reply, advanceData);
}

export function selectionFromCells(cells: CellIndex[], shape: number[]): string[] {
  return cells.map((index) => cellKey(index, shape)).sort();
}
