// Block-chord audition with plain oscillators; relative judgment only.

const PITCH_CLASS: Record<string, number> = {
  "C": 0, "D♭": 1, "D": 2, "E♭": 3, "E": 4, "F": 5,
  "G♭": 6, "G": 7, "A♭": 8, "A": 9, "B♭": 10, "B": 11,
};

function frequency(label: string): number {
  const midi = 60 + (PITCH_CLASS[label] ?? 0);
  return 440 * Math.pow(2, (midi - 69) / 12);
}

export function playChords(
  chords: string[][],
  context: AudioContext,
  beatSeconds = 0.6,
): void {
  const start = context.currentTime + 0.05;
  chords.forEach((chord, step) => {
    const t0 = start + step * beatSeconds;
    const gain = context.createGain();
    gain.gain.setValueAtTime(0.0001, t0);
    gain.gain.linearRampToValueAtTime(0.18 / Math.max(1, chord.length), t0 + 0.02);
    gain.gain.exponentialRampToValueAtTime(0.0001, t0 + beatSeconds * 0.95);
    gain.connect(context.destination);
    for (const label of chord) {
      const osc = context.createOscillator();
      osc.type = "triangle";
      osc.frequency.value = frequency(label);
      osc.connect(gain);
      osc.start(t0);
      osc.stop(t0 + beatSeconds);
    }
  });
}
