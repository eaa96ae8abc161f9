/** Thin client for the mutation server's JSON API.
 *
 * Every method posts a self-contained request (the server is stateless) and
 * resolves to the parsed response body, or rejects with an ApiError carrying
 * the HTTP status and body.  Responses that do not parse, or /mutate
 * responses without a well-formed document, reject as malformed so the UI
 * can show an error banner instead of rendering garbage.
 */

import { IQPDocument, documentProblem } from "./documents.js";

export interface MutabilityStatus {
  kind: string; // UnfrozenMutable | FrozenSource | FrozenSink | NotMutable
  reason: string;
  mutable: boolean;
}

export interface SeriesTermJson {
  coeff: string;
  path?: string[];
  at?: string;
}

export interface TraceJson {
  removed_2cycles: string[][];
  frozen_replacements: string[][];
  substitutions: { arrow: string; value: SeriesTermJson[] }[];
}

export interface MutateResponse {
  iqp: IQPDocument;
  mutability: MutabilityStatus;
  trace: TraceJson;
}

export interface InvariantsResponse {
  jacobian_dims: number[];
  boundary_dims: number[];
  d2_ok: boolean;
}

export interface IsoResponse {
  isomorphic: boolean;
  vertex_map?: Record<string, string>;
  arrow_map?: Record<string, string>;
}

export interface ValidateResponse {
  ok: boolean;
  violations: string[];
  loops: Record<string, string[]>;
  two_cycles: Record<string, string[][]>;
  mutability: Record<string, MutabilityStatus>;
}

export class ApiError extends Error {
  /** HTTP status, or 0 when the server was unreachable. */
  status: number;
  /** Parsed response body when there was one. */
  body: Record<string, unknown>;

  constructor(status: number, body: Record<string, unknown>) {
    super(typeof body.error === "string" ? body.error : `HTTP ${status}`);
    this.name = "ApiError";
    this.status = status;
    this.body = body;
  }

  /** The server's mutability verdict on a 422 refusal, if it sent one. */
  get mutability(): MutabilityStatus | null {
    const status = this.body.mutability as MutabilityStatus | undefined;
    return status && typeof status.kind === "string" ? status : null;
  }
}

type Fetcher = (url: string, init?: RequestInit) => Promise<Response>;

export class ApiClient {
  private base: string;
  private fetcher: Fetcher;

  constructor(base = "", fetcher?: Fetcher) {
    this.base = base.replace(/\/$/, "");
    this.fetcher = fetcher ?? ((url, init) => fetch(url, init));
  }

  private async post(
    path: string,
    payload: unknown,
  ): Promise<Record<string, unknown>> {
    let response: Response;
    try {
      response = await this.fetcher(this.base + path, {
        method: "POST",
        headers: { "Content-Type": "application/json" },
        body: JSON.stringify(payload),
      });
    } catch (e) {
      throw new ApiError(0, { error: `server unreachable: ${(e as Error).message}` });
    }
    let body: unknown;
    try {
      body = await response.json();
    } catch {
      throw new ApiError(response.status, {
        error: `malformed response from ${path}: not JSON`,
      });
    }
    if (typeof body !== "object" || body === null || Array.isArray(body)) {
      throw new ApiError(response.status, {
        error: `malformed response from ${path}: not a JSON object`,
      });
    }
    if (!response.ok) {
      throw new ApiError(response.status, body as Record<string, unknown>);
    }
    return body as Record<string, unknown>;
  }

  async health(): Promise<boolean> {
    try {
      const response = await this.fetcher(this.base + "/health");
      return response.ok;
    } catch {
      return false;
    }
  }

  async mutate(iqp: IQPDocument, vertex: string): Promise<MutateResponse> {
    const body = await this.post("/mutate", { iqp, vertex });
    const problem = documentProblem(body.iqp);
    if (problem !== null) {
      throw new ApiError(200, {
        error: `malformed response from /mutate: ${problem}`,
      });
    }
    return body as unknown as MutateResponse;
  }

  async invariants(iqp: IQPDocument, n?: number): Promise<InvariantsResponse> {
    const payload: Record<string, unknown> = { iqp };
    if (n !== undefined) payload.N = n;
    return (await this.post("/invariants", payload)) as unknown as InvariantsResponse;
  }

  async iso(a: IQPDocument, b: IQPDocument): Promise<IsoResponse> {
    return (await this.post("/iso", { a, b })) as unknown as IsoResponse;
  }

  async validate(iqp: IQPDocument): Promise<ValidateResponse> {
    return (await this.post("/validate", { iqp })) as unknown as ValidateResponse;
  }
}
