// Primitive palette: wire-format shapes and the defaults a fresh chip
// gets when dropped onto the constraint line. Mirrors the server's
// constraint document format (docs/constraint-format.md).

export type FieldType = "string" | "number" | "array_of_string" | "boolean";

export interface JsonFieldSpec {
  key: string;
  type: FieldType;
}

export type PrimitiveSpec =
  | { type: "json_object"; fields: JsonFieldSpec[] }
  | { type: "multiple_choice"; choices: string[] }
  | { type: "list"; bullet: string; min_items: number; max_items: number }
  | { type: "ordered_list"; min_items: number; max_items: number }
  | { type: "some_text"; min_chars: number; max_chars?: number }
  | { type: "exact_text"; text: string };

export type PrimitiveKind = PrimitiveSpec["type"];

export const PALETTE: { kind: PrimitiveKind; label: string }[] = [
  { kind: "json_object", label: "JSON object" },
  { kind: "multiple_choice", label: "Multiple choice" },
  { kind: "list", label: "List" },
  { kind: "ordered_list", label: "Ordered list" },
  { kind: "some_text", label: "Some text" },
  { kind: "exact_text", label: "Exact text" },
];

export const FIELD_TYPES: FieldType[] = ["string", "number", "array_of_string", "boolean"];

export function defaultPrimitive(kind: PrimitiveKind): PrimitiveSpec {
  switch (kind) {
    case "json_object":
      return { type: "json_object", fields: [{ key: "key", type: "string" }] };
    case "multiple_choice":
      return { type: "multiple_choice", choices: ["option A", "option B"] };
    case "list":
      return { type: "list", bullet: "- ", min_items: 1, max_items: 10 };
    case "ordered_list":
      return { type: "ordered_list", min_items: 1, max_items: 10 };
    case "some_text":
      return { type: "some_text", min_chars: 1 };
    case "exact_text":
      return { type: "exact_text", text: "text" };
  }
}

export function chipSummary(p: PrimitiveSpec): string {
  switch (p.type) {
    case "json_object":
      return `{ ${p.fields.map((f) => f.key).join(", ")} }`;
    case "multiple_choice":
      return p.choices.join(" | ");
    case "list":
      return `"${p.bullet}" x ${p.min_items}..${p.max_items}`;
    case "ordered_list":
      return `1..${p.max_items} (min ${p.min_items})`;
    case "some_text":
      return p.max_chars == null ? `>= ${p.min_chars} chars` : `${p.min_chars}..${p.max_chars} chars`;
    case "exact_text":
      return JSON.stringify(p.text);
  }
}
