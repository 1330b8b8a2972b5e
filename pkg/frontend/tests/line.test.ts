import { describe, expect, it } from "vitest";

import { annotateOffset, ConstraintLine } from "../src/line.js";
import { chipSummary, defaultPrimitive, PALETTE } from "../src/primitives.js";

describe("palette defaults", () => {
  it("covers all six primitives", () => {
    expect(PALETTE.map((p) => p.kind).sort()).toEqual([
      "exact_text",
      "json_object",
      "list",
      "multiple_choice",
      "ordered_list",
      "some_text",
    ]);
  });

  it("list defaults to the dash bullet and 1..10 items", () => {
    expect(defaultPrimitive("list")).toEqual({
      type: "list",
      bullet: "- ",
      min_items: 1,
      max_items: 10,
    });
  });

  it("every default has a printable chip summary", () => {
    for (const { kind } of PALETTE) {
      expect(chipSummary(defaultPrimitive(kind)).length).toBeGreaterThan(0);
    }
  });
});

describe("constraint line", () => {
  it("keeps chip order equal to spec order", () => {
    const line = new ConstraintLine();
    line.add("exact_text");
    line.add("multiple_choice");
    line.add("some_text");
    expect(line.toWire().map((c) => c.type)).toEqual([
      "exact_text",
      "multiple_choice",
      "some_text",
    ]);
    line.reorder(2, 0);
    expect(line.toWire().map((c) => c.type)).toEqual([
      "some_text",
      "exact_text",
      "multiple_choice",
    ]);
  });

  it("edit replaces params but never the primitive kind", () => {
    const line = new ConstraintLine();
    line.add("exact_text");
    line.edit(0, { type: "exact_text", text: "Sentiment : " });
    expect(line.toWire()[0]).toEqual({ type: "exact_text", text: "Sentiment : " });
    expect(() => line.edit(0, { type: "some_text", min_chars: 1 })).toThrow(TypeError);
  });

  it("allows one open editor at a time", () => {
    const line = new ConstraintLine();
    line.add("list");
    line.add("some_text");
    line.openEditor(0);
    line.openEditor(1);
    expect(line.editing).toBe(1);
    line.remove(1);
    expect(line.editing).toBeNull();
  });

  it("tracks dirtiness against the last compile", () => {
    const line = new ConstraintLine();
    line.add("exact_text");
    expect(line.dirty).toBe(true);
    line.compiled("text");
    expect(line.dirty).toBe(false);
    line.remove(0);
    expect(line.dirty).toBe(true);
  });

  it("round-trips a stored document back onto the line", () => {
    const line = new ConstraintLine();
    line.add("exact_text");
    line.edit(0, { type: "exact_text", text: "x" });
    const doc = line.toDocument("demo");
    const loaded = new ConstraintLine();
    loaded.loadDocument(doc);
    expect(loaded.toWire()).toEqual(line.toWire());
  });

  it("rejects manual-pattern documents in loadDocument", () => {
    const line = new ConstraintLine();
    expect(() => line.loadDocument('{"pattern": "a+"}')).toThrow(TypeError);
  });

  it("toggling panel visibility is pure view state", () => {
    const line = new ConstraintLine();
    line.add("exact_text");
    line.compiled("text");
    line.panel.visible = false;
    expect(line.panel.pattern).toBe("text");
    expect(line.dirty).toBe(false);
  });
});

describe("annotateOffset", () => {
  it("splits the pattern at the error character", () => {
    expect(annotateOffset("(a)\\1", 3)).toEqual({ before: "(a)", at: "\\", after: "1" });
  });

  it("handles end-of-input offsets", () => {
    expect(annotateOffset("ab", 2)).toEqual({ before: "ab", at: "", after: "" });
  });

  it("clamps out-of-range offsets", () => {
    expect(annotateOffset("ab", 99).before).toBe("ab");
  });
});
