// Typed client for the /v1 HTTP API. The UI never builds regexes
// itself: every pattern string on screen originated in a compile
// response from this client.

import type { PrimitiveSpec } from "./primitives.js";

export interface CompileResponse {
  pattern: string;
  state_count: number;
  token_index_cached: boolean;
}

export interface GenerateParams {
  mode?: "sample" | "greedy";
  seed?: number;
  max_tokens?: number;
  eos_bias?: number;
}

export interface GenerateResponse {
  text: string;
  finish: "eos" | "forced_eos";
  steps: number;
  pattern: string;
}

export interface ValidateResponse {
  valid: boolean;
  first_reject_offset?: number;
}

export interface StoreEntry {
  name: string;
  pattern_hash: string;
  created: number;
  modified: number;
}

export interface ApiErrorBody {
  error: string;
  message?: string;
  feature?: string;
  offset?: number;
  path?: string;
  text?: string;
  violations?: { path: string; message: string }[];
}

export class ApiError extends Error {
  constructor(
    public status: number,
    public body: ApiErrorBody,
  ) {
    super(describeError(body));
  }
}

export function describeError(body: ApiErrorBody): string {
  if (body.error === "unsupported_feature") {
    return `unsupported feature: ${body.feature} (offset ${body.offset})`;
  }
  if (body.error === "syntax") {
    return `syntax error: ${body.message} (offset ${body.offset})`;
  }
  if (body.violations?.length) {
    return body.violations.map((v) => `${v.path}: ${v.message}`).join("; ");
  }
  return body.message ?? body.error;
}

async function throwApiError(resp: Response): Promise<never> {
  let body: ApiErrorBody;
  try {
    body = (await resp.json()) as ApiErrorBody;
  } catch {
    body = { error: "http", message: `${resp.status} ${resp.statusText}` };
  }
  throw new ApiError(resp.status, body);
}

export class ConstraintsApi {
  constructor(public baseUrl: string) {}

  private async post<T>(path: string, payload: unknown, signal?: AbortSignal): Promise<T> {
    const resp = await fetch(`${this.baseUrl}${path}`, {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(payload),
      signal,
    });
    if (!resp.ok) await throwApiError(resp);
    return (await resp.json()) as T;
  }

  compileSpec(primitives: PrimitiveSpec[]): Promise<CompileResponse> {
    return this.post("/v1/compile", { constraints: primitives });
  }

  compilePattern(pattern: string): Promise<CompileResponse> {
    return this.post("/v1/compile", { pattern });
  }

  generate(
    prompt: string,
    constraint: { primitives?: PrimitiveSpec[]; pattern?: string; storedName?: string },
    params?: GenerateParams,
    signal?: AbortSignal,
  ): Promise<GenerateResponse> {
    const body: Record<string, unknown> = { prompt };
    if (constraint.primitives) body.constraints = constraint.primitives;
    if (constraint.pattern != null) body.pattern = constraint.pattern;
    if (constraint.storedName != null) body.stored_name = constraint.storedName;
    if (params) body.params = params;
    return this.post("/v1/generate", body, signal);
  }

  validate(text: string, pattern: string): Promise<ValidateResponse> {
    return this.post("/v1/validate", { text, pattern });
  }

  async listConstraints(): Promise<StoreEntry[]> {
    const resp = await fetch(`${this.baseUrl}/v1/constraints`);
    if (!resp.ok) await throwApiError(resp);
    return ((await resp.json()) as { constraints: StoreEntry[] }).constraints;
  }

  async getConstraint(name: string): Promise<string> {
    const resp = await fetch(`${this.baseUrl}/v1/constraints/${encodeURIComponent(name)}`);
    if (!resp.ok) await throwApiError(resp);
    return resp.text();
  }

  async putConstraint(name: string, document: string): Promise<void> {
    const resp = await fetch(`${this.baseUrl}/v1/constraints/${encodeURIComponent(name)}`, {
      method: "PUT",
      headers: { "Content-Type": "application/json" },
      body: document,
    });
    if (!resp.ok) await throwApiError(resp);
  }

  async deleteConstraint(name: string): Promise<void> {
    const resp = await fetch(`${this.baseUrl}/v1/constraints/${encodeURIComponent(name)}`, {
      method: "DELETE",
    });
    if (!resp.ok && resp.status !== 404) await throwApiError(resp);
  }
}
