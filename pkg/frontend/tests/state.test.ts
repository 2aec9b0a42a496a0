import { describe, expect, it } from "vitest";

import { validateFeatureFile } from "../src/schema.js";
import {
  applyEdited,
  buildSetPointEdit,
  initialState,
  loadFeatures,
  redo,
  setRecovery,
  undo,
} from "../src/state.js";

function features(tension = [1, 2, 3]) {
  return validateFeatureFile({
    version: 1,
    tonality: 0,
    tension,
    distance: [0, 1, 1],
    strain: [0.5, 0.5, 0.5],
    normalized: false,
  });
}

describe("undo/redo", () => {
  it("undo restores the pre-edit state exactly", () => {
    let state = loadFeatures(initialState(), features());
    const before = state.features;
    state = applyEdited(state, features([9, 2, 3]));
    expect(state.features?.tension[0]).toBe(9);
    state = undo(state);
    expect(state.features).toEqual(before);
  });

  it("is lossless over arbitrary edit sequences", () => {
    let state = loadFeatures(initialState(), features([0, 0, 0]));
    const snapshots = [state.features];
    for (let i = 1; i <= 5; i += 1) {
      state = applyEdited(state, features([i, i, i]));
      snapshots.push(state.features);
    }
    for (let i = 4; i >= 0; i -= 1) {
      state = undo(state);
      expect(state.features).toEqual(snapshots[i]);
    }
    for (let i = 1; i <= 5; i += 1) {
      state = redo(state);
      expect(state.features).toEqual(snapshots[i]);
    }
  });

  it("a new edit clears the redo branch", () => {
    let state = loadFeatures(initialState(), features());
    state = applyEdited(state, features([5, 2, 3]));
    state = undo(state);
    state = applyEdited(state, features([7, 2, 3]));
    expect(state.redoStack).toHaveLength(0);
    expect(redo(state)).toBe(state);
  });

  it("undo on an empty stack is a no-op", () => {
    const state = loadFeatures(initialState(), features());
    expect(undo(state)).toBe(state);
  });
});

describe("drag edit payloads", () => {
  it("maps a drag to a single-point set_point edit", () => {
    const edit = buildSetPointEdit(features(), "tension", 1, 4.25);
    expect(edit).toEqual({ target: "tension", op: "set_point", segment: [1, 1], value: 4.25 });
  });

  it("clamps negative drags on raw curves", () => {
    const edit = buildSetPointEdit(features(), "strain", 0, -2.5);
    expect(edit.value).toBe(0);
  });

  it("keeps negative values on normalized curves", () => {
    const normalized = validateFeatureFile({
      version: 1,
      tonality: 0,
      tension: [0.1, -0.2],
      distance: [0.3, 0.4],
      strain: [0, 0.1],
      normalized: true,
      norm_stats: { tension: { mean: 2, std: 1 }, distance: { mean: 1, std: 1 }, strain: { mean: 1, std: 1 } },
    });
    expect(buildSetPointEdit(normalized, "tension", 0, -1.5).value).toBe(-1.5);
  });

  it("rejects out-of-range indices", () => {
    expect(() => buildSetPointEdit(features(), "tension", 3, 1)).toThrow();
  });
});

describe("recovery view", () => {
  it("stores the latest recovery without touching curves", () => {
    let state = loadFeatures(initialState(), features());
    const recovery = { chords: [["C", "E", "G"]], spellings: [[0, 4, 1]], total_cost: 0, per_step_rd: [0] };
    state = setRecovery(state, recovery);
    expect(state.recovery).toEqual(recovery);
    expect(state.features).toEqual(features());
  });
});
