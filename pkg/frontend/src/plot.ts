// Canvas step plots with draggable points. Curves render as steps, not
// interpolated lines; per-step recovery deviation shows as a heat row.

import { CurveName, FeatureFile, displayValues } from "./schema.js";

export interface PlotLayout {
  width: number;
  height: number;
  paddingX: number;
  paddingY: number;
  min: number;
  max: number;
  steps: number;
}

export function makeLayout(values: number[], width: number, height: number): PlotLayout {
  const lo = Math.min(0, ...values);
  const hi = Math.max(...values, lo + 1e-6);
  const span = hi - lo;
  return {
    width,
    height,
    paddingX: 8,
    paddingY: 10,
    min: lo - 0.05 * span,
    max: hi + 0.05 * span,
    steps: values.length,
  };
}

export function stepToX(layout: PlotLayout, index: number): number {
  const inner = layout.width - 2 * layout.paddingX;
  return layout.paddingX + (inner * (index + 0.5)) / layout.steps;
}

export function valueToY(layout: PlotLayout, value: number): number {
  const inner = layout.height - 2 * layout.paddingY;
  const fraction = (value - layout.min) / (layout.max - layout.min);
  return layout.height - layout.paddingY - fraction * inner;
}

export function yToValue(layout: PlotLayout, y: number): number {
  const inner = layout.height - 2 * layout.paddingY;
  const fraction = (layout.height - layout.paddingY - y) / inner;
  return layout.min + fraction * (layout.max - layout.min);
}

export function nearestStep(layout: PlotLayout, x: number): number {
  const inner = layout.width - 2 * layout.paddingX;
  const raw = Math.floor(((x - layout.paddingX) / inner) * layout.steps);
  return Math.min(layout.steps - 1, Math.max(0, raw));
}

/** 0 -> neutral, larger deviations -> warmer heat cell color. */
export function heatColor(rd: number, maxRd: number): string {
  if (maxRd <= 0) {
    return "hsl(0, 0%, 92%)";
  }
  const intensity = Math.min(1, rd / maxRd);
  const lightness = 92 - 42 * intensity;
  return `hsl(${18 - 10 * intensity}, ${Math.round(80 * intensity)}%, ${Math.round(lightness)}%)`;
}

const CURVE_COLORS: Record<CurveName, string> = {
  tension: "#b3452c",
  distance: "#2c6cb3",
  strain: "#3f8f4a",
};

export function drawCurve(
  ctx: CanvasRenderingContext2D,
  file: FeatureFile,
  curve: CurveName,
  layout: PlotLayout,
): void {
  const values = displayValues(file, curve);
  ctx.clearRect(0, 0, layout.width, layout.height);
  ctx.strokeStyle = "#ccc";
  ctx.strokeRect(0.5, 0.5, layout.width - 1, layout.height - 1);
  ctx.strokeStyle = CURVE_COLORS[curve];
  ctx.lineWidth = 2;
  ctx.beginPath();
  const inner = layout.width - 2 * layout.paddingX;
  const cell = inner / layout.steps;
  values.forEach((value, i) => {
    const y = valueToY(layout, value);
    const x0 = layout.paddingX + cell * i;
    if (i === 0) {
      ctx.moveTo(x0, y);
    } else {
      ctx.lineTo(x0, y);
    }
    ctx.lineTo(x0 + cell, y);
  });
  ctx.stroke();
  ctx.fillStyle = CURVE_COLORS[curve];
  values.forEach((value, i) => {
    ctx.beginPath();
    ctx.arc(stepToX(layout, i), valueToY(layout, value), 3, 0, Math.PI * 2);
    ctx.fill();
  });
}
