/** Exploration state: histories of server-produced documents.
 *
 * The session never transforms a document itself.  Every entry after the
 * first in a history is literally the document the server returned from
 * /mutate on its predecessor, together with the invariant snapshot and the
 * per-vertex mutability report fetched for it.  Undo moves the cursor,
 * branch() forks the history up to the cursor into a new line, and compare()
 * asks the /iso endpoint about two branch tips.  replay() re-runs the whole
 * mutation sequence and checks the stored documents byte for byte.
 */

import {
  ApiClient,
  InvariantsResponse,
  IsoResponse,
  TraceJson,
  ValidateResponse,
} from "./api.js";
import { IQPDocument, dumpsDocument } from "./documents.js";

export interface HistoryEntry {
  /** The document at this point of the exploration. */
  doc: IQPDocument;
  /** Vertex whose mutation produced it; null for the loaded root. */
  appliedVertex: string | null;
  /** Invariant snapshot the server computed for this document. */
  invariants: InvariantsResponse;
  /** Validation report, including per-vertex mutability for rendering. */
  validation: ValidateResponse;
  /** Reduction trace of the producing mutation, when there was one. */
  trace: TraceJson | null;
}

export interface SessionState {
  history: HistoryEntry[];
  cursor: number;
}

export type MutateOutcome = "applied" | "dropped";

export interface ReplayReport {
  ok: boolean;
  steps: number;
  /** History indices whose stored document differed from the re-run. */
  mismatches: number[];
}

export class Session {
  api: ApiClient;
  branches: SessionState[] = [];
  active = -1;
  /** True while a mutation round-trip is outstanding: further clicks are
   * dropped (single in-flight request, no queueing). */
  busy = false;

  constructor(api: ApiClient) {
    this.api = api;
  }

  get state(): SessionState | null {
    return this.active >= 0 ? this.branches[this.active] : null;
  }

  get current(): HistoryEntry | null {
    const state = this.state;
    return state === null ? null : state.history[state.cursor];
  }

  /** Replace the whole session with a freshly loaded document. */
  async load(doc: IQPDocument): Promise<void> {
    const entry = await this.snapshot(doc, null, null);
    this.branches = [{ history: [entry], cursor: 0 }];
    this.active = 0;
  }

  private async snapshot(
    doc: IQPDocument,
    appliedVertex: string | null,
    trace: TraceJson | null,
  ): Promise<HistoryEntry> {
    const invariants = await this.api.invariants(doc);
    const validation = await this.api.validate(doc);
    return { doc, appliedVertex, invariants, validation, trace };
  }

  /** Ask the server to mutate the current document at v and append the
   * response.  Forward history past the cursor is discarded (use branch()
   * first to keep it).  Returns "dropped" without sending anything when a
   * request is already in flight. */
  async mutateAt(v: string): Promise<MutateOutcome> {
    const state = this.state;
    if (state === null) throw new Error("no document loaded");
    if (this.busy) return "dropped";
    this.busy = true;
    try {
      const response = await this.api.mutate(state.history[state.cursor].doc, v);
      const entry = await this.snapshot(response.iqp, v, response.trace);
      state.history = state.history.slice(0, state.cursor + 1);
      state.history.push(entry);
      state.cursor = state.history.length - 1;
      return "applied";
    } finally {
      this.busy = false;
    }
  }

  undo(): boolean {
    const state = this.state;
    if (state === null || state.cursor === 0) return false;
    state.cursor -= 1;
    return true;
  }

  redo(): boolean {
    const state = this.state;
    if (state === null || state.cursor === state.history.length - 1) return false;
    state.cursor += 1;
    return true;
  }

  jumpTo(index: number): boolean {
    const state = this.state;
    if (state === null || index < 0 || index >= state.history.length) return false;
    state.cursor = index;
    return true;
  }

  /** Fork the active history up to the cursor into a new branch and switch
   * to it.  Returns the new branch index. */
  branch(): number {
    const state = this.state;
    if (state === null) throw new Error("no document loaded");
    const fork: SessionState = {
      history: state.history.slice(0, state.cursor + 1),
      cursor: state.cursor,
    };
    this.branches.push(fork);
    this.active = this.branches.length - 1;
    return this.active;
  }

  switchTo(index: number): boolean {
    if (index < 0 || index >= this.branches.length) return false;
    this.active = index;
    return true;
  }

  /** The /iso verdict between the cursor documents of two branches. */
  async compare(other: number, mine = this.active): Promise<IsoResponse> {
    const a = this.branches[mine];
    const b = this.branches[other];
    if (!a || !b) throw new Error("no such branch");
    return this.api.iso(
      a.history[a.cursor].doc,
      b.history[b.cursor].doc,
    );
  }

  /** Re-post every mutation of the active history from entry 0 and compare
   * each stored document byte for byte with the fresh server response. */
  async replay(): Promise<ReplayReport> {
    const state = this.state;
    if (state === null) throw new Error("no document loaded");
    const mismatches: number[] = [];
    let doc = state.history[0].doc;
    for (let i = 1; i < state.history.length; i++) {
      const entry = state.history[i];
      const response = await this.api.mutate(doc, entry.appliedVertex as string);
      if (dumpsDocument(response.iqp) !== dumpsDocument(entry.doc)) {
        mismatches.push(i);
      }
      doc = response.iqp;
    }
    return {
      ok: mismatches.length === 0,
      steps: state.history.length - 1,
      mismatches,
    };
  }
}
