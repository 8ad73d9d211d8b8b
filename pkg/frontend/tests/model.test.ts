import { describe, expect, it } from "vitest";

import type { BlockPayload, Metrics } from "../src/api.js";
import {
  BlockView,
  accuracyCurve,
  formatAccuracy,
  morphemesToText,
  textToMorphemes,
} from "../src/model.js";

function payload(): BlockPayload {
  const meta = { ita: "-", lem: "-", pos: "-", var: "Bnz", age: "25-35", gen: "M" };
  return {
    summary: { id: 0, status: "auto", size: 3, accuracy: null },
    rows: [
      { key: "ui:150902:2:1", arabish: "kifech", tra: "كيفاش", auto: ["كيفاش"], final: null, ...meta },
      { key: "ui:150902:2:2", arabish: "l3icha", tra: "العيشة", auto: ["الـ", "عيشة"], final: null, ...meta },
      { key: "ui:150902:2:3", arabish: "manajemnech", tra: "ما نجمناش", auto: ["ما+ش", "نجمنا"], final: null, ...meta },
    ],
  };
}

describe("morpheme text round-trip", () => {
  it("joins with spaced plus and splits back", () => {
    expect(morphemesToText(["الـ", "عيشة"])).toBe("الـ + عيشة");
    expect(textToMorphemes("الـ + عيشة")).toEqual(["الـ", "عيشة"]);
  });

  it("keeps the negation particle intact", () => {
    const morphemes = ["ما+ش", "نجمنا"];
    expect(textToMorphemes(morphemesToText(morphemes))).toEqual(morphemes);
  });

  it("drops empty fragments and trims", () => {
    expect(textToMorphemes("  كيفاش  ")).toEqual(["كيفاش"]);
    expect(textToMorphemes("")).toEqual([]);
  });
});

describe("BlockView dirty tracking", () => {
  it("starts clean with baselines from auto predictions", () => {
    const view = new BlockView(payload());
    expect(view.hasEdits).toBe(false);
    expect(view.rows[1].value).toBe("الـ + عيشة");
    expect(view.corrections()).toEqual({});
  });

  it("flags only edited rows and builds a minimal payload", () => {
    const view = new BlockView(payload());
    view.edit("ui:150902:2:1", "تصحيح");
    expect(view.dirtyRows().map((r) => r.key)).toEqual(["ui:150902:2:1"]);
    expect(view.corrections()).toEqual({ "ui:150902:2:1": ["تصحيح"] });
  });

  it("reverting an edit clears the dirty flag", () => {
    const view = new BlockView(payload());
    view.edit("ui:150902:2:2", "بديل");
    expect(view.hasEdits).toBe(true);
    view.edit("ui:150902:2:2", "الـ + عيشة");
    expect(view.hasEdits).toBe(false);
  });

  it("whitespace-only differences are not edits", () => {
    const view = new BlockView(payload());
    view.edit("ui:150902:2:2", "  الـ  +  عيشة ");
    expect(view.hasEdits).toBe(false);
  });

  it("applySubmitted folds edits into the baseline", () => {
    const view = new BlockView(payload());
    view.edit("ui:150902:2:1", "تصحيح");
    view.applySubmitted({ id: 0, status: "corrected", size: 3, accuracy: 2 / 3 });
    expect(view.summary.status).toBe("corrected");
    expect(view.hasEdits).toBe(false);
    expect(view.rows[0].final).toEqual(["تصحيح"]);
    expect(view.rows[1].final).toEqual(["الـ", "عيشة"]); // confirmed as-is
  });

  it("diffAgainstAuto surfaces superseded predictions", () => {
    const view = new BlockView(payload());
    expect(view.diffAgainstAuto(view.rows[0])).toBeNull();
    view.edit("ui:150902:2:1", "تصحيح");
    expect(view.diffAgainstAuto(view.rows[0])).toBe("كيفاش");
  });

  it("rejects unknown keys", () => {
    const view = new BlockView(payload());
    expect(() => view.edit("nope", "x")).toThrow();
  });
});

describe("metrics helpers", () => {
  const metrics: Metrics = {
    blocks: [
      { id: 1, status: "corrected", accuracy: 0.8 },
      { id: 0, status: "corrected", accuracy: 0.7 },
      { id: 2, status: "auto", accuracy: null },
    ],
    training_growth: [
      { version: 1, pairs: 14 },
      { version: 2, pairs: 22 },
    ],
    cv: null,
  };

  it("accuracyCurve keeps corrected blocks in id order", () => {
    expect(accuracyCurve(metrics)).toEqual([
      { id: 0, accuracy: 0.7 },
      { id: 1, accuracy: 0.8 },
    ]);
  });

  it("formatAccuracy renders percentages and missing values", () => {
    expect(formatAccuracy(0.7)).toBe("70.0%");
    expect(formatAccuracy(null)).toBe("—");
  });
});
