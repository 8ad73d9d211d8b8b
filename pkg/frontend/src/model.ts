/** View-state for one block under review: editable rows with dirty flags.
 *
 * Morpheme sequences display and edit as text joined with " + " (spaced, so
 * the negation particle "ما+ش" — no spaces — survives the round trip).
 * A submit payload contains only dirty rows, keyed by token key.
 */

import type { BlockPayload, BlockRow, BlockSummary, Metrics } from "./api.js";

export const MORPHEME_JOINER = " + ";

export function morphemesToText(morphemes: string[]): string {
  return morphemes.join(MORPHEME_JOINER);
}

export function textToMorphemes(text: string): string[] {
  return text
    .split(/\s+\+\s+/)
    .map((part) => part.trim())
    .filter((part) => part.length > 0);
}

export interface RowState {
  key: string;
  arabish: string;
  auto: string[] | null;
  final: string[] | null;
  /** server-side value the edit field starts from */
  baseline: string[];
  value: string;
  dirty: boolean;
  row: BlockRow;
}

function baselineOf(row: BlockRow): string[] {
  if (row.final) return row.final;
  if (row.auto) return row.auto;
  return row.tra === "-" ? [] : [row.tra];
}

function sameMorphemes(a: string[], b: string[]): boolean {
  return a.length === b.length && a.every((m, i) => m === b[i]);
}

export class BlockView {
  summary: BlockSummary;
  rows: RowState[];

  constructor(payload: BlockPayload) {
    this.summary = payload.summary;
    this.rows = payload.rows.map((row) => {
      const baseline = baselineOf(row);
      return {
        key: row.key,
        arabish: row.arabish,
        auto: row.auto,
        final: row.final,
        baseline,
        value: morphemesToText(baseline),
        dirty: false,
        row,
      };
    });
  }

  edit(key: string, text: string): void {
    const row = this.rows.find((r) => r.key === key);
    if (!row) throw new Error(`no row with key ${key}`);
    row.value = text;
    row.dirty = !sameMorphemes(textToMorphemes(text), row.baseline);
  }

  dirtyRows(): RowState[] {
    return this.rows.filter((r) => r.dirty);
  }

  /** Submit payload: only the edited rows. */
  corrections(): Record<string, string[]> {
    const out: Record<string, string[]> = {};
    for (const row of this.dirtyRows()) {
      out[row.key] = textToMorphemes(row.value);
    }
    return out;
  }

  get hasEdits(): boolean {
    return this.rows.some((r) => r.dirty);
  }

  /** Fold a successful submit back in: edits become the new server baseline. */
  applySubmitted(summary: BlockSummary): void {
    this.summary = summary;
    for (const row of this.rows) {
      if (row.dirty) {
        row.final = textToMorphemes(row.value);
        row.baseline = row.final;
        row.value = morphemesToText(row.final);
        row.dirty = false;
      } else if (row.baseline.length > 0 && !row.final) {
        row.final = row.baseline; // confirmed as-is by the submit
      }
    }
  }

  /** Auto prediction differing from the current value, for diff display. */
  diffAgainstAuto(row: RowState): string | null {
    if (!row.auto) return null;
    const current = row.dirty ? textToMorphemes(row.value) : row.baseline;
    return sameMorphemes(row.auto, current) ? null : morphemesToText(row.auto);
  }
}

export interface CurvePoint {
  id: number;
  accuracy: number;
}

/** Accuracy-per-block curve: corrected blocks in id order. */
export function accuracyCurve(metrics: Metrics): CurvePoint[] {
  return metrics.blocks
    .filter((b): b is { id: number; status: string; accuracy: number } => b.accuracy !== null)
    .map((b) => ({ id: b.id, accuracy: b.accuracy }))
    .sort((a, b) => a.id - b.id);
}

export function formatAccuracy(accuracy: number | null): string {
  return accuracy === null ? "—" : `${(accuracy * 100).toFixed(1)}%`;
}
