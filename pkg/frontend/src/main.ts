/** DOM wiring: renders the grid model into a table and forwards events. */

import { ApiClient, ApiError } from "./api";
import type { AppState } from "./app";
import { enterTest, holdsNoTruthData, leaveTest, loadApp } from "./app";
import type { CellView, TransportAction } from "./model";
import { gridModel, snapshotUpTo, transport } from "./model";
import type { TestState } from "./session";
import { currentQuestion, questionPrompt, startTest, submitAnswer, toggleCell } from "./session";
import type { QuestionKind } from "./types";

const api = new ApiClient("");

let app: AppState | null = null;
let test: TestState | null = null;
let playTimer: number | null = null;
let submitting = false; // at most one in-flight answer per session

function el<T extends HTMLElement>(id: string): T {
  const node = document.getElementById(id);
  if (!node) throw new Error(`missing element #${id}`);
  return node as T;
}

function banner(message: string | null): void {
  const box = el<HTMLDivElement>("banner");
  box.textContent = message ?? "";
  box.style.display = message ? "block" : "none";
}

function renderGrid(cells: CellView[][], clickable: boolean): void {
  const labels = app?.meta.labels;
  const table = document.createElement("table");
  if (labels?.cols) {
    const head = document.createElement("tr");
    if (labels.rows) head.appendChild(document.createElement("th"));
    for (const text of labels.cols) {
      const th = document.createElement("th");
      th.textContent = text;
      head.appendChild(th);
    }
    table.appendChild(head);
  }
  cells.forEach((row, r) => {
    const line = document.createElement("tr");
    if (labels?.rows) {
      const th = document.createElement("th");
      th.textContent = labels.rows[r] ?? "";
      line.appendChild(th);
    }
    for (const cell of row) {
      const td = document.createElement("td");
      td.textContent = cell.text;
      if (cell.color) {
        td.style.background = `#${cell.color}`;
        td.style.color = "#fff";
      }
      if (cell.onPath) td.classList.add("path");
      if (cell.selected) td.classList.add("selected");
      if (clickable) {
        td.classList.add("clickable");
        td.addEventListener("click", () => onCellClick(cell.key));
      }
      line.appendChild(td);
    }
    table.appendChild(line);
  });
  const grid = el<HTMLDivElement>("grid");
  grid.replaceChildren(table);
}

function render(): void {
  if (!app) return;
  const { meta, view } = app;
  el<HTMLSpanElement>("title").textContent = `${meta.name} - ${meta.frameCount} frames`;
  const scrub = el<HTMLInputElement>("scrub");
  scrub.max = String(Math.max(meta.frameCount, 1));
  scrub.value = String(Math.max(view.t, 1));
  el<HTMLSpanElement>("counter").textContent = meta.frameCount
    ? `frame ${view.t} / ${meta.frameCount}`
    : "empty trace";
  const testing = view.mode === "TEST";
  el<HTMLDivElement>("transport").classList.toggle("disabled", testing);
  el<HTMLDivElement>("quiz").style.display = testing ? "block" : "none";
  el<HTMLButtonElement>("test-toggle").textContent = testing ? "leave testing mode" : "start testing mode";

  if (!testing && app.frames) {
    const frame = view.t >= 1 ? (app.frames[view.t - 1] ?? null) : null;
    const snapshot = snapshotUpTo(meta.shape, app.frames, view.t);
    renderGrid(
      gridModel({
        shape: meta.shape,
        colors: meta.colors,
        snapshot,
        frame,
        traceback: meta.traceback,
        showPath: view.t === meta.frameCount,
        selection: new Set<string>(),
      }),
      false,
    );
    el<HTMLDivElement>("annotation").textContent = frame?.annotation ?? "";
  } else if (test) {
    renderGrid(
      gridModel({
        shape: meta.shape,
        colors: meta.colors,
        snapshot: test.snapshot,
        frame: test.revealed,
        traceback: null,
        showPath: false,
        selection: new Set(test.selection),
      }),
      true,
    );
    const question = currentQuestion(test);
    el<HTMLDivElement>("question").textContent = test.doc.complete
      ? "session complete: every frame predicted"
      : question
        ? questionPrompt(question)
        : "";
    el<HTMLDivElement>("feedback").textContent = test.feedback ?? "";
    el<HTMLInputElement>("value-input").style.display =
      question?.kind === "CELL_VALUE" ? "inline-block" : "none";
    el<HTMLSpanElement>("mistakes").textContent = `mistakes: ${test.doc.mistakes}`;
  }
}

function dispatch(action: TransportAction): void {
  if (!app) return;
  app = { ...app, view: transport(app.view, action, app.meta.frameCount) };
  if (action.kind === "play") startTicking();
  if (!app.view.playing) stopTicking();
  render();
}

function startTicking(): void {
  stopTicking();
  if (!app) return;
  playTimer = window.setInterval(() => {
    if (!app) return;
    app = { ...app, view: transport(app.view, { kind: "tick" }, app.meta.frameCount) };
    if (!app.view.playing) stopTicking();
    render();
  }, 1000 / app.view.speed);
}

function stopTicking(): void {
  if (playTimer !== null) {
    window.clearInterval(playTimer);
    playTimer = null;
  }
}

function onCellClick(key: string): void {
  if (!test || !app) return;
  const question = currentQuestion(test);
  if (!question || question.kind === "CELL_VALUE") return;
  test = { ...test, selection: toggleCell(test.selection, key) };
  render();
}

function enabledKinds(): QuestionKind[] {
  const kinds: QuestionKind[] = [];
  if (el<HTMLInputElement>("kind-write").checked) kinds.push("WRITE_CELLS");
  if (el<HTMLInputElement>("kind-read").checked) kinds.push("READ_CELLS");
  if (el<HTMLInputElement>("kind-value").checked) kinds.push("CELL_VALUE");
  return kinds;
}

async function toggleTestMode(): Promise<void> {
  if (!app) return;
  banner(null);
  if (app.view.mode === "TEST") {
    try {
      const trace = await api.trace();
      app = leaveTest(app, trace);
      test = null;
      render();
    } catch (err) {
      banner(`could not reload the trace: ${String(err)}`);
    }
    return;
  }
  const kinds = enabledKinds();
  if (kinds.length === 0) {
    banner("pick at least one question kind first");
    return;
  }
  try {
    const startT = Math.max(app.view.t, 1);
    test = await startTest(api, app.meta.shape, kinds, startT);
    app = enterTest(app, test.sessionId, test.doc.t);
    console.assert(holdsNoTruthData(app), "client must not hold frame data while testing");
    render();
  } catch (err) {
    const reason = err instanceof ApiError ? err.message : String(err);
    banner(`could not start testing mode: ${reason}`);
  }
}

async function onSubmit(): Promise<void> {
  if (!test || !app || submitting) return;
  submitting = true;
  try {
    test = await submitAnswer(api, app.meta.shape, test);
    if (test.doc.t !== app.view.t) {
      app = { ...app, view: { ...app.view, t: test.doc.t } };
    }
    render();
  } catch (err) {
    const reason = err instanceof ApiError ? err.message : String(err);
    banner(`submission failed: ${reason}`);
  } finally {
    submitting = false;
  }
}

/** Changing the question selector while testing re-requests questions with
 * the new kinds (a fresh session at the current frame). */
async function onKindsChanged(): Promise<void> {
  if (!app || app.view.mode !== "TEST" || test?.doc.complete) return;
  const kinds = enabledKinds();
  if (kinds.length === 0) {
    banner("pick at least one question kind");
    return;
  }
  try {
    test = await startTest(api, app.meta.shape, kinds, Math.max(app.view.t, 1));
    app = enterTest(app, test.sessionId, test.doc.t);
    render();
  } catch (err) {
    const reason = err instanceof ApiError ? err.message : String(err);
    banner(`could not update the question selection: ${reason}`);
  }
}

async function boot(): Promise<void> {
  try {
    const trace = await api.trace();
    app = loadApp(trace);
    render();
  } catch (err) {
    banner(`could not load the trace: ${String(err)}`);
    return;
  }
  el<HTMLButtonElement>("first").addEventListener("click", () => dispatch({ kind: "seek", t: 1 }));
  el<HTMLButtonElement>("prev").addEventListener("click", () => dispatch({ kind: "step_back" }));
  el<HTMLButtonElement>("next").addEventListener("click", () => dispatch({ kind: "step_fwd" }));
  el<HTMLButtonElement>("play").addEventListener("click", () => {
    dispatch(app!.view.playing ? { kind: "pause" } : { kind: "play" });
  });
  el<HTMLInputElement>("scrub").addEventListener("input", (event) => {
    dispatch({ kind: "seek", t: Number((event.target as HTMLInputElement).value) });
  });
  el<HTMLSelectElement>("speed").addEventListener("change", (event) => {
    if (!app) return;
    app = { ...app, view: { ...app.view, speed: Number((event.target as HTMLSelectElement).value) } };
    if (app.view.playing) startTicking();
  });
  el<HTMLButtonElement>("test-toggle").addEventListener("click", () => void toggleTestMode());
  el<HTMLButtonElement>("submit").addEventListener("click", () => void onSubmit());
  for (const id of ["kind-write", "kind-read", "kind-value"]) {
    el<HTMLInputElement>(id).addEventListener("change", () => void onKindsChanged());
  }
  el<HTMLInputElement>("value-input").addEventListener("input", (event) => {
    if (!test) return;
    test = { ...test, valueInput: (event.target as HTMLInputElement).value };
  });
  el<HTMLInputElement>("value-input").addEventListener("keydown", (event) => {
    if (event.key === "Enter") void onSubmit();
  });
}

void boot();
