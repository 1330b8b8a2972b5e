// DOM wiring for the constraint prototyping UI.
//
// Panels: prompt editor, constraint line (palette + chips + edit modal),
// regex display (read-only, hideable, manual-edit mode), output panel
// with a server-validated match badge, and the saved-constraint picker.
// The server's compile response is the single source of truth for the
// pattern; the badge reflects /v1/validate, never client logic.

import { ApiError, ConstraintsApi, describeError } from "./api.js";
import { annotateOffset, ConstraintLine } from "./line.js";
import {
  chipSummary,
  FIELD_TYPES,
  PALETTE,
  type FieldType,
  type JsonFieldSpec,
  type PrimitiveSpec,
} from "./primitives.js";

const API_BASE =
  new URLSearchParams(location.search).get("api") ?? "http://127.0.0.1:8000";

const api = new ConstraintsApi(API_BASE);
const line = new ConstraintLine();

const $ = <T extends HTMLElement>(id: string): T => {
  const el = document.getElementById(id);
  if (!el) throw new Error(`missing #${id}`);
  return el as T;
};

const promptBox = $<HTMLTextAreaElement>("prompt");
const paletteBox = $("palette");
const chipRow = $("chip-row");
const modalHost = $("modal-host");
const regexText = $("regex-text");
const regexError = $("regex-error");
const regexToggle = $<HTMLButtonElement>("regex-toggle");
const manualToggle = $<HTMLButtonElement>("manual-toggle");
const manualBox = $<HTMLTextAreaElement>("manual-box");
const manualApply = $<HTMLButtonElement>("manual-apply");
const seedInput = $<HTMLInputElement>("seed");
const runButton = $<HTMLButtonElement>("run");
const outputPre = $("output");
const badge = $("badge");
const savedSelect = $<HTMLSelectElement>("saved-select");
const savedName = $<HTMLInputElement>("saved-name");
const stateLine = $("state-line");

// Manual-edit mode replaces the chip-derived pattern as the active
// constraint until the line changes again.
let manualPattern: string | null = null;
let inFlight: AbortController | null = null;
let recompileTimer: number | undefined;

function activeConstraint(): { primitives?: PrimitiveSpec[]; pattern?: string } | null {
  if (manualPattern != null) return { pattern: manualPattern };
  if (line.chips.length === 0) return null;
  return { primitives: line.toWire() };
}

// --- constraint line rendering ---

function renderPalette(): void {
  paletteBox.replaceChildren(
    ...PALETTE.map(({ kind, label }) => {
      const button = document.createElement("button");
      button.className = "palette-btn";
      button.textContent = label;
      button.addEventListener("click", () => {
        const index = line.add(kind);
        manualPattern = null;
        renderChips();
        openModal(index);
        scheduleRecompile();
      });
      return button;
    }),
  );
}

function renderChips(): void {
  if (line.chips.length === 0) {
    const hint = document.createElement("span");
    hint.className = "hint";
    hint.textContent = "Add a primitive from the palette to start a constraint.";
    chipRow.replaceChildren(hint);
    return;
  }
  chipRow.replaceChildren(
    ...line.chips.map((chip, i) => {
      const el = document.createElement("span");
      el.className = "chip";
      const label = document.createElement("b");
      label.textContent = chip.type.replace("_", " ");
      const summary = document.createElement("small");
      summary.textContent = chipSummary(chip);
      el.append(label, summary);
      el.append(
        chipButton("edit", () => openModal(i)),
        chipButton("left", () => moveChip(i, i - 1)),
        chipButton("right", () => moveChip(i, i + 1)),
        chipButton("x", () => {
          line.remove(i);
          manualPattern = null;
          renderChips();
          scheduleRecompile();
        }),
      );
      return el;
    }),
  );
}

function chipButton(kind: string, onClick: () => void): HTMLButtonElement {
  const b = document.createElement("button");
  b.className = `chip-btn chip-${kind}`;
  b.textContent = { edit: "✎", left: "←", right: "→", x: "×" }[kind] ?? kind;
  b.title = kind;
  b.addEventListener("click", onClick);
  return b;
}

function moveChip(from: number, to: number): void {
  if (to < 0 || to >= line.chips.length) return;
  line.reorder(from, to);
  manualPattern = null;
  renderChips();
  scheduleRecompile();
}

// --- edit modal (one at a time) ---

function openModal(index: number): void {
  line.openEditor(index);
  renderModal();
}

function closeModal(): void {
  line.closeEditor();
  modalHost.replaceChildren();
  modalHost.classList.remove("open");
}

function renderModal(): void {
  const index = line.editing;
  if (index == null) return;
  const chip = structuredClone(line.chips[index]);
  const form = document.createElement("div");
  form.className = "modal";
  const title = document.createElement("h3");
  title.textContent = `Edit ${chip.type.replace("_", " ")}`;
  form.append(title);
  form.append(buildEditor(chip));

  const bar = document.createElement("div");
  bar.className = "modal-bar";
  const save = document.createElement("button");
  save.textContent = "Apply";
  save.addEventListener("click", () => {
    line.edit(index, chip);
    manualPattern = null;
    closeModal();
    renderChips();
    scheduleRecompile();
  });
  const cancel = document.createElement("button");
  cancel.textContent = "Cancel";
  cancel.addEventListener("click", closeModal);
  bar.append(save, cancel);
  form.append(bar);
  modalHost.replaceChildren(form);
  modalHost.classList.add("open");
}

function labeled(text: string, input: HTMLElement): HTMLElement {
  const row = document.createElement("label");
  row.className = "field-row";
  const span = document.createElement("span");
  span.textContent = text;
  row.append(span, input);
  return row;
}

function textInput(value: string, onInput: (v: string) => void): HTMLInputElement {
  const input = document.createElement("input");
  input.value = value;
  input.addEventListener("input", () => onInput(input.value));
  return input;
}

function numberInput(value: number | "", onInput: (v: number | null) => void): HTMLInputElement {
  const input = document.createElement("input");
  input.type = "number";
  input.value = String(value);
  input.addEventListener("input", () => {
    input.value === "" ? onInput(null) : onInput(Number(input.value));
  });
  return input;
}

function buildEditor(chip: PrimitiveSpec): HTMLElement {
  const box = document.createElement("div");
  switch (chip.type) {
    case "exact_text":
      box.append(labeled("Text", textInput(chip.text, (v) => (chip.text = v))));
      break;
    case "some_text":
      box.append(
        labeled("Min chars", numberInput(chip.min_chars, (v) => (chip.min_chars = v ?? 1))),
        labeled(
          "Max chars (blank = unbounded)",
          numberInput(chip.max_chars ?? "", (v) => {
            if (v == null) delete chip.max_chars;
            else chip.max_chars = v;
          }),
        ),
      );
      break;
    case "list":
      box.append(
        labeled("Bullet", textInput(chip.bullet, (v) => (chip.bullet = v))),
        labeled("Min items", numberInput(chip.min_items, (v) => (chip.min_items = v ?? 1))),
        labeled("Max items", numberInput(chip.max_items, (v) => (chip.max_items = v ?? 10))),
      );
      break;
    case "ordered_list":
      box.append(
        labeled("Min items", numberInput(chip.min_items, (v) => (chip.min_items = v ?? 1))),
        labeled("Max items", numberInput(chip.max_items, (v) => (chip.max_items = v ?? 10))),
      );
      break;
    case "multiple_choice": {
      const area = document.createElement("textarea");
      area.rows = 4;
      area.value = chip.choices.join("\n");
      area.addEventListener("input", () => {
        chip.choices = area.value.split("\n").filter((c) => c.length > 0);
      });
      box.append(labeled("Choices (one per line)", area));
      break;
    }
    case "json_object":
      box.append(jsonSchemaEditor(chip.fields));
      break;
  }
  return box;
}

// Key entry plus a type selector per field, with add/remove rows.
function jsonSchemaEditor(fields: JsonFieldSpec[]): HTMLElement {
  const box = document.createElement("div");
  box.className = "schema-editor";

  const render = () => {
    box.replaceChildren(
      ...fields.map((field, i) => {
        const row = document.createElement("div");
        row.className = "schema-row";
        const key = textInput(field.key, (v) => (field.key = v));
        key.placeholder = "key";
        const select = document.createElement("select");
        for (const t of FIELD_TYPES) {
          const opt = document.createElement("option");
          opt.value = t;
          opt.textContent = t;
          opt.selected = t === field.type;
          select.append(opt);
        }
        select.addEventListener("change", () => (field.type = select.value as FieldType));
        const del = document.createElement("button");
        del.textContent = "×";
        del.addEventListener("click", () => {
          fields.splice(i, 1);
          render();
        });
        row.append(key, select, del);
        return row;
      }),
      (() => {
        const add = document.createElement("button");
        add.textContent = "+ field";
        add.addEventListener("click", () => {
          fields.push({ key: "", type: "string" });
          render();
        });
        return add;
      })(),
    );
  };
  render();
  return box;
}

// --- regex panel ---

function renderPanel(): void {
  regexText.parentElement!.classList.toggle("hidden-pattern", !line.panel.visible);
  regexToggle.textContent = line.panel.visible ? "< > hide" : "< > show";
  manualBox.classList.toggle("visible", line.panel.manualEdit);
  manualApply.classList.toggle("visible", line.panel.manualEdit);
  const err = line.panel.error;
  if (err) {
    const { before, at, after } = annotateOffset(
      line.panel.manualEdit ? manualBox.value : line.panel.pattern,
      err.offset,
    );
    regexError.replaceChildren();
    const mark = document.createElement("mark");
    mark.textContent = at || "∅";
    regexError.append(`${err.message}: ${before}`, mark, after);
    regexError.classList.add("visible");
  } else {
    regexError.replaceChildren();
    regexError.classList.remove("visible");
  }
  regexText.textContent = line.panel.pattern || "(no constraint)";
}

function scheduleRecompile(): void {
  window.clearTimeout(recompileTimer);
  recompileTimer = window.setTimeout(recompile, 300);
}

async function recompile(): Promise<void> {
  const constraint = activeConstraint();
  if (!constraint) {
    line.panel.pattern = "";
    line.panel.error = null;
    stateLine.textContent = "";
    runButton.disabled = true;
    renderPanel();
    return;
  }
  runButton.disabled = false;
  try {
    const resp = constraint.pattern != null
      ? await api.compilePattern(constraint.pattern)
      : await api.compileSpec(constraint.primitives!);
    line.compiled(resp.pattern);
    if (!line.panel.manualEdit) manualBox.value = resp.pattern;
    stateLine.textContent =
      `${resp.state_count} states` + (resp.token_index_cached ? " (index cached)" : "");
  } catch (e) {
    if (e instanceof ApiError) {
      const offset = e.body.offset ?? 0;
      line.panel.error = { offset, message: describeError(e.body) };
    } else {
      line.panel.error = { offset: 0, message: String(e) };
    }
  }
  renderPanel();
}

regexToggle.addEventListener("click", () => {
  line.panel.visible = !line.panel.visible; // pure view state: no recompile
  renderPanel();
});

manualToggle.addEventListener("click", () => {
  line.panel.manualEdit = !line.panel.manualEdit;
  manualToggle.textContent = line.panel.manualEdit
    ? "Stop editing manually"
    : "Edit constraints manually";
  if (line.panel.manualEdit) manualBox.value = line.panel.pattern;
  renderPanel();
});

manualApply.addEventListener("click", () => {
  manualPattern = manualBox.value;
  scheduleRecompile();
});

// --- generation (one in-flight request, cancel on new run) ---

runButton.addEventListener("click", async () => {
  const constraint = activeConstraint();
  if (!constraint) return;
  inFlight?.abort();
  inFlight = new AbortController();
  badge.className = "badge pending";
  badge.textContent = "running";
  outputPre.textContent = "";
  try {
    const result = await api.generate(
      promptBox.value,
      constraint.pattern != null
        ? { pattern: constraint.pattern }
        : { primitives: constraint.primitives },
      { seed: Number(seedInput.value) || 0, max_tokens: 2048, eos_bias: 4.0 },
      inFlight.signal,
    );
    outputPre.textContent = result.text;
    const verdict = await api.validate(result.text, result.pattern);
    badge.className = verdict.valid ? "badge ok" : "badge bad";
    badge.textContent = verdict.valid ? "matches constraint" : "DOES NOT MATCH";
  } catch (e) {
    if (e instanceof DOMException && e.name === "AbortError") return;
    badge.className = "badge bad";
    badge.textContent = "failed";
    outputPre.textContent = e instanceof ApiError ? `${e.message}\n${e.body.text ?? ""}` : String(e);
  }
});

// --- saved constraints ---

async function refreshSaved(): Promise<void> {
  try {
    const entries = await api.listConstraints();
    savedSelect.replaceChildren(
      new Option("— saved constraints —", ""),
      ...entries.map((e) => new Option(e.name, e.name)),
    );
  } catch {
    // Store browsing is best-effort; the line still works without it.
  }
}

$<HTMLButtonElement>("saved-save").addEventListener("click", async () => {
  const name = savedName.value.trim();
  if (!name || line.chips.length === 0) return;
  try {
    await api.putConstraint(name, line.toDocument(name));
    await refreshSaved();
    savedSelect.value = name;
  } catch (e) {
    alert(e instanceof Error ? e.message : String(e));
  }
});

savedSelect.addEventListener("change", async () => {
  if (!savedSelect.value) return;
  const doc = await api.getConstraint(savedSelect.value);
  try {
    line.loadDocument(doc);
    manualPattern = null;
    renderChips();
    scheduleRecompile();
  } catch {
    // Manual-pattern documents open in manual mode instead.
    const pattern = (JSON.parse(doc) as { pattern: string }).pattern;
    manualPattern = pattern;
    manualBox.value = pattern;
    scheduleRecompile();
  }
});

renderPalette();
renderChips();
renderPanel();
runButton.disabled = true;
void refreshSaved();
