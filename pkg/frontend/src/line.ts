// Constraint line state: an ordered row of primitive chips plus the
// regex panel's view state. Pure data + transitions, no DOM — app.ts
// renders it, tests drive it directly.

import { defaultPrimitive, type PrimitiveKind, type PrimitiveSpec } from "./primitives.js";

export interface RegexPanelState {
  pattern: string; // always a server compile response, never built locally
  visible: boolean; // the "< >" toggle; flipping it never recompiles
  manualEdit: boolean;
  error: { offset: number; message: string } | null;
}

export class ConstraintLine {
  chips: PrimitiveSpec[] = [];
  /** Index of the chip whose edit modal is open; at most one at a time. */
  editing: number | null = null;
  /** True when chips changed since the last compile response. */
  dirty = false;

  panel: RegexPanelState = { pattern: "", visible: true, manualEdit: false, error: null };

  add(kind: PrimitiveKind): number {
    this.chips.push(defaultPrimitive(kind));
    this.dirty = true;
    return this.chips.length - 1;
  }

  openEditor(index: number): void {
    if (index < 0 || index >= this.chips.length) throw new RangeError(`no chip ${index}`);
    this.editing = index; // replaces any open modal
  }

  closeEditor(): void {
    this.editing = null;
  }

  edit(index: number, params: PrimitiveSpec): void {
    if (index < 0 || index >= this.chips.length) throw new RangeError(`no chip ${index}`);
    if (params.type !== this.chips[index].type) {
      throw new TypeError(`chip ${index} is ${this.chips[index].type}, got ${params.type}`);
    }
    this.chips[index] = params;
    this.dirty = true;
  }

  remove(index: number): void {
    if (index < 0 || index >= this.chips.length) throw new RangeError(`no chip ${index}`);
    this.chips.splice(index, 1);
    if (this.editing === index) this.editing = null;
    this.dirty = true;
  }

  reorder(from: number, to: number): void {
    const n = this.chips.length;
    if (from < 0 || from >= n || to < 0 || to >= n) throw new RangeError("reorder out of range");
    const [chip] = this.chips.splice(from, 1);
    this.chips.splice(to, 0, chip);
    this.dirty = true;
  }

  /** Wire form for the API's `constraints` field (chip order == spec order). */
  toWire(): PrimitiveSpec[] {
    return this.chips.map((c) => structuredClone(c));
  }

  /** Canonical document for the store. */
  toDocument(name?: string): string {
    const doc: Record<string, unknown> = {};
    if (name) doc.name = name;
    doc.primitives = this.toWire();
    return JSON.stringify(doc, null, 2) + "\n";
  }

  /** Repopulate the line from a stored document (spec form only). */
  loadDocument(document: string): void {
    const doc = JSON.parse(document) as { primitives?: PrimitiveSpec[]; pattern?: string };
    if (!Array.isArray(doc.primitives)) {
      throw new TypeError("document is a manual pattern, not a primitive line");
    }
    this.chips = doc.primitives.map((c) => structuredClone(c));
    this.editing = null;
    this.dirty = true;
  }

  /** Record a successful compile of the current chips. */
  compiled(pattern: string): void {
    this.panel.pattern = pattern;
    this.panel.error = null;
    this.dirty = false;
  }
}

export interface AnnotatedPattern {
  before: string;
  at: string;
  after: string;
}

/** Split a pattern at an error offset for inline highlighting. */
export function annotateOffset(pattern: string, offset: number): AnnotatedPattern {
  const clamped = Math.max(0, Math.min(offset, pattern.length));
  return {
    before: pattern.slice(0, clamped),
    at: clamped < pattern.length ? pattern[clamped] : "",
    after: clamped < pattern.length ? pattern.slice(clamped + 1) : "",
  };
}
