// Session state with a lossless undo/redo stack. Every mutation goes through
// a recorded action, so replaying history always reproduces the current view.

import { CurveName, FeatureFile } from "./schema.js";

export interface CurveEditPayload {
  target: CurveName;
  op: "set_point" | "scale" | "offset" | "set_range" | "smooth";
  segment: [number, number];
  value?: number;
  low?: number;
  high?: number;
  window?: number;
}

export interface RecoveryView {
  chords: string[][];
  spellings: number[][];
  total_cost: number;
  per_step_rd: number[];
}

export interface SessionState {
  features: FeatureFile | null;
  recovery: RecoveryView | null;
  undoStack: FeatureFile[];
  redoStack: FeatureFile[];
}

export function initialState(): SessionState {
  return { features: null, recovery: null, undoStack: [], redoStack: [] };
}

export function loadFeatures(state: SessionState, features: FeatureFile): SessionState {
  return { features, recovery: null, undoStack: [], redoStack: [] };
}

/** Record the server's edited document; the previous one becomes undoable. */
export function applyEdited(state: SessionState, edited: FeatureFile): SessionState {
  if (state.features === null) {
    throw new Error("no features loaded");
  }
  return {
    features: edited,
    recovery: state.recovery,
    undoStack: [...state.undoStack, state.features],
    redoStack: [],
  };
}

export function undo(state: SessionState): SessionState {
  const previous = state.undoStack[state.undoStack.length - 1];
  if (previous === undefined || state.features === null) {
    return state;
  }
  return {
    features: previous,
    recovery: state.recovery,
    undoStack: state.undoStack.slice(0, -1),
    redoStack: [...state.redoStack, state.features],
  };
}

export function redo(state: SessionState): SessionState {
  const next = state.redoStack[state.redoStack.length - 1];
  if (next === undefined || state.features === null) {
    return state;
  }
  return {
    features: next,
    recovery: state.recovery,
    undoStack: [...state.undoStack, state.features],
    redoStack: state.redoStack.slice(0, -1),
  };
}

export function setRecovery(state: SessionState, recovery: RecoveryView): SessionState {
  return { ...state, recovery };
}

/** Payload for dragging one curve point; negative drags clamp at 0 on raw curves. */
export function buildSetPointEdit(
  features: FeatureFile,
  curve: CurveName,
  index: number,
  value: number,
): CurveEditPayload {
  if (index < 0 || index >= features.length) {
    throw new Error(`point index ${index} out of range`);
  }
  const clamped = features.normalized ? value : Math.max(0, value);
  return { target: curve, op: "set_point", segment: [index, index], value: clamped };
}
