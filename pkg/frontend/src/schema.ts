// Feature-file schema guard and display helpers. The editor never recomputes
// feature math; the only client-side numeric work is denormalization for
// display and the weight-slider renormalization shown to the user.

export const CURVE_NAMES = ["tension", "distance", "strain"] as const;
export type CurveName = (typeof CURVE_NAMES)[number];

export interface MelodyToken {
  midi: number | null;
  duration_beats: number;
  weight: number;
}

export interface NormStat {
  mean: number;
  std: number;
}

export interface FeatureFile {
  version: 1;
  tonality: number;
  length: number;
  tension: number[];
  distance: number[];
  strain: number[];
  normalized: boolean;
  norm_stats?: Partial<Record<CurveName, NormStat>>;
  melody?: MelodyToken[];
}

export class SchemaError extends Error {}

function isNumberArray(value: unknown): value is number[] {
  return Array.isArray(value) && value.every((v) => typeof v === "number" && Number.isFinite(v));
}

export function validateFeatureFile(doc: unknown): FeatureFile {
  if (typeof doc !== "object" || doc === null) {
    throw new SchemaError("feature document must be an object");
  }
  const d = doc as Record<string, unknown>;
  if (d.version !== 1) {
    throw new SchemaError(`unsupported version: ${String(d.version)}`);
  }
  if (typeof d.tonality !== "number" || d.tonality < 0 || d.tonality > 23) {
    throw new SchemaError("tonality must be an integer in 0..23");
  }
  for (const name of CURVE_NAMES) {
    if (!isNumberArray(d[name])) {
      throw new SchemaError(`${name} must be an array of finite numbers`);
    }
  }
  const t = (d.tension as number[]).length;
  if (t < 1) {
    throw new SchemaError("curves must have length >= 1");
  }
  for (const name of CURVE_NAMES) {
    if ((d[name] as number[]).length !== t) {
      throw new SchemaError("curves must share one length");
    }
  }
  if (d.length !== undefined && d.length !== t) {
    throw new SchemaError("declared length does not match arrays");
  }
  if (d.melody !== undefined) {
    if (!Array.isArray(d.melody) || d.melody.length !== t) {
      throw new SchemaError("melody must align with the curves");
    }
  }
  return {
    version: 1,
    tonality: d.tonality as number,
    length: t,
    tension: [...(d.tension as number[])],
    distance: [...(d.distance as number[])],
    strain: [...(d.strain as number[])],
    normalized: Boolean(d.normalized),
    norm_stats: d.norm_stats as FeatureFile["norm_stats"],
    melody: d.melody as MelodyToken[] | undefined,
  };
}

/** Values as shown to the user: denormalized when the file is z-scored. */
export function displayValues(file: FeatureFile, curve: CurveName): number[] {
  const values = file[curve];
  if (!file.normalized) {
    return [...values];
  }
  const stat = file.norm_stats?.[curve];
  if (!stat) {
    throw new SchemaError(`normalized file lacks norm_stats for ${curve}`);
  }
  return values.map((v) => v * stat.std + stat.mean);
}

const TONIC_NAMES = ["C", "D♭", "D", "E♭", "E", "F", "G♭", "G", "A♭", "A", "B♭", "B"];

export function tonalityLabel(tonality: number): string {
  const mode = tonality < 12 ? "major" : "minor";
  return `${TONIC_NAMES[tonality % 12]} ${mode}`;
}

/** Slider weights as displayed: non-negative and summing to one. */
export function renormalizeWeights(alpha: number, beta: number, gamma: number): [number, number, number] {
  const a = Math.max(0, alpha);
  const b = Math.max(0, beta);
  const g = Math.max(0, gamma);
  const total = a + b + g;
  if (total <= 0) {
    return [1 / 3, 1 / 3, 1 / 3];
  }
  return [a / total, b / total, g / total];
}
