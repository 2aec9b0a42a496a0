// DOM wiring: load or analyze, drag points, recover, audition.

import { ServiceClient, ApiError } from "./api.js";
import { CURVE_NAMES, CurveName, displayValues, renormalizeWeights, tonalityLabel, validateFeatureFile } from "./schema.js";
import { drawCurve, heatColor, makeLayout, nearestStep, yToValue } from "./plot.js";
import {
  SessionState,
  applyEdited,
  buildSetPointEdit,
  initialState,
  loadFeatures,
  redo,
  setRecovery,
  undo,
} from "./state.js";
import { playChords } from "./audio.js";

const client = new ServiceClient();
let state: SessionState = initialState();
let audioContext: AudioContext | null = null;

const el = <T extends HTMLElement>(id: string): T => document.getElementById(id) as T;

function banner(message: string, kind: "error" | "info" = "error"): void {
  const box = el<HTMLDivElement>("banner");
  box.textContent = message;
  box.className = message ? kind : "";
}

function render(): void {
  const badge = el<HTMLSpanElement>("tonality");
  badge.textContent = state.features ? tonalityLabel(state.features.tonality) : "-";
  for (const curve of CURVE_NAMES) {
    const canvas = el<HTMLCanvasElement>(`plot-${curve}`);
    const ctx = canvas.getContext("2d");
    if (!ctx) continue;
    if (!state.features) {
      ctx.clearRect(0, 0, canvas.width, canvas.height);
      continue;
    }
    const layout = makeLayout(displayValues(state.features, curve), canvas.width, canvas.height);
    drawCurve(ctx, state.features, curve, layout);
  }
  renderChordRow();
  el<HTMLButtonElement>("undo").disabled = state.undoStack.length === 0;
  el<HTMLButtonElement>("redo").disabled = state.redoStack.length === 0;
}

function renderChordRow(): void {
  const row = el<HTMLDivElement>("chords");
  row.innerHTML = "";
  if (!state.recovery) return;
  const maxRd = Math.max(...state.recovery.per_step_rd, 0);
  state.recovery.chords.forEach((chord, i) => {
    const cell = document.createElement("div");
    cell.className = "chord-cell";
    cell.style.background = heatColor(state.recovery!.per_step_rd[i], maxRd);
    cell.textContent = chord.join(" ");
    cell.title = `step ${i + 1}: deviation ${state.recovery!.per_step_rd[i].toFixed(3)}`;
    row.appendChild(cell);
  });
}

function attachDrag(curve: CurveName): void {
  const canvas = el<HTMLCanvasElement>(`plot-${curve}`);
  canvas.addEventListener("pointerdown", (down) => {
    if (!state.features) return;
    const layout = makeLayout(displayValues(state.features, curve), canvas.width, canvas.height);
    const rect = canvas.getBoundingClientRect();
    const index = nearestStep(layout, down.clientX - rect.left);

    const finish = async (up: PointerEvent) => {
      canvas.removeEventListener("pointerup", finish);
      if (!state.features) return;
      const value = yToValue(layout, up.clientY - rect.top);
      try {
        const edit = buildSetPointEdit(state.features, curve, index, value);
        const edited = await client.edit(state.features, [edit]);
        state = applyEdited(state, edited);
        banner("");
        render();
      } catch (err) {
        banner(err instanceof Error ? err.message : String(err));
      }
    };
    canvas.addEventListener("pointerup", finish);
  });
}

function currentWeights(): [number, number, number] {
  const read = (id: string) => Number(el<HTMLInputElement>(id).value);
  const [a, b, g] = renormalizeWeights(read("alpha"), read("beta"), read("gamma"));
  el<HTMLSpanElement>("weights-display").textContent =
    `α ${a.toFixed(2)} · β ${b.toFixed(2)} · γ ${g.toFixed(2)} (sum 1)`;
  return [a, b, g];
}

async function recoverNow(): Promise<void> {
  if (!state.features) {
    banner("load feature curves first");
    return;
  }
  const [alpha, beta, gamma] = currentWeights();
  const tonality = Number(el<HTMLSelectElement>("key-select").value);
  banner("recovering…", "info");
  try {
    const recovery = await client.recover(state.features, {
      tonality,
      alpha,
      beta,
      gamma,
      beam_width: Number(el<HTMLInputElement>("beam").value) || 8,
    });
    state = setRecovery(state, recovery);
    banner("");
    render();
  } catch (err) {
    if (err instanceof DOMException && err.name === "AbortError") return;
    const detail = err instanceof ApiError && err.status === null ? "service unreachable — is `spiraltension serve` running? retry when up." : String(err);
    banner(detail);
  }
}

function wire(): void {
  el<HTMLInputElement>("file-input").addEventListener("change", async (event) => {
    const input = event.target as HTMLInputElement;
    const file = input.files?.[0];
    if (!file) return;
    try {
      const doc: unknown = JSON.parse(await file.text());
      const maybeScore = doc as { slices?: unknown };
      const features = maybeScore.slices ? await client.analyze(doc) : validateFeatureFile(doc);
      state = loadFeatures(state, features);
      banner("");
      render();
    } catch (err) {
      banner(err instanceof Error ? err.message : String(err));
    }
  });

  el<HTMLButtonElement>("undo").addEventListener("click", () => {
    state = undo(state);
    render();
  });
  el<HTMLButtonElement>("redo").addEventListener("click", () => {
    state = redo(state);
    render();
  });
  el<HTMLButtonElement>("recover").addEventListener("click", () => void recoverNow());
  el<HTMLButtonElement>("play").addEventListener("click", () => {
    if (!state.recovery) return;
    audioContext = audioContext ?? new AudioContext();
    playChords(state.recovery.chords, audioContext);
  });
  for (const id of ["alpha", "beta", "gamma"]) {
    el<HTMLInputElement>(id).addEventListener("input", () => currentWeights());
  }

  const keySelect = el<HTMLSelectElement>("key-select");
  for (let tonality = 0; tonality < 24; tonality += 1) {
    const option = document.createElement("option");
    option.value = String(tonality);
    option.textContent = tonalityLabel(tonality);
    keySelect.appendChild(option);
  }

  for (const curve of CURVE_NAMES) {
    attachDrag(curve);
  }
  currentWeights();
  render();
}

document.addEventListener("DOMContentLoaded", wire);
