/** Application state: what the client holds in each mode.
 *
 * VIEW mode keeps the full frame list for local scrubbing. Entering TEST
 * mode throws the frames away (only shape/labels/colors stay) so the only
 * source of array contents is what the server chooses to reveal.
 */

import type { TraceMeta, ViewState } from "./model";
import { initialView, metaOf } from "./model";
import type { FrameDoc, TraceDoc } from "./types";

export interface AppState {
  meta: TraceMeta;
  frames: FrameDoc[] | null; // null while testing: no local truth data
  view: ViewState;
}

export function loadApp(trace: TraceDoc): AppState {
  return { meta: metaOf(trace), frames: trace.frames, view: initialView(trace.frames.length) };
}

export function enterTest(state: AppState, sessionId: string, t: number): AppState {
  return {
    ...state,
    frames: null,
    view: { ...state.view, mode: "TEST", playing: false, t, selection: [], sessionId },
  };
}

export function leaveTest(state: AppState, trace: TraceDoc): AppState {
  return {
    ...state,
    frames: trace.frames,
    meta: metaOf(trace),
    view: { ...state.view, mode: "VIEW", selection: [], sessionId: null },
  };
}

/** True when nothing in the client state could grade an answer locally. */
export function holdsNoTruthData(state: AppState): boolean {
  return state.frames === null;
}
