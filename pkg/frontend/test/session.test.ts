import { beforeEach, describe, expect, it } from "vitest";

import { ApiClient, ApiError } from "../src/api.js";
import { FIVE_DOC, IQPDocument, dumpsDocument } from "../src/documents.js";
import { Session } from "../src/session.js";

/** Deterministic stand-in for the mutation server: "mutating" appends a
 * marker term, so repeated requests on equal documents give equal results
 * (which is all replay needs) while every step stays distinguishable. */
class FakeServer {
  calls: { path: string; payload: Record<string, unknown> }[] = [];
  mutateResponses: { request: IQPDocument; vertex: string; iqp: IQPDocument }[] = [];
  /** When set, /mutate waits on it before answering. */
  hold: Promise<void> | null = null;
  isoVerdict = { isomorphic: true, vertex_map: { "1": "1" }, arrow_map: {} };
  failNextMutate: { status: number; body: Record<string, unknown> } | null = null;

  client(): ApiClient {
    return new ApiClient("", async (url, init) => {
      const payload = JSON.parse((init?.body as string) ?? "null");
      this.calls.push({ path: url, payload });
      if (url === "/mutate") {
        if (this.hold) await this.hold;
        if (this.failNextMutate) {
          const { status, body } = this.failNextMutate;
          this.failNextMutate = null;
          return respond(status, body);
        }
        const iqp = mutated(payload.iqp, payload.vertex);
        this.mutateResponses.push({ request: payload.iqp, vertex: payload.vertex, iqp });
        return respond(200, {
          iqp,
          mutability: { kind: "UnfrozenMutable", reason: "", mutable: true },
          trace: { removed_2cycles: [], frozen_replacements: [], substitutions: [] },
        });
      }
      if (url === "/invariants") {
        return respond(200, {
          jacobian_dims: [payload.iqp.vertices.length, payload.iqp.potential.length],
          boundary_dims: [0, 1],
          d2_ok: true,
        });
      }
      if (url === "/validate") {
        const mutability: Record<string, unknown> = {};
        for (const v of payload.iqp.vertices) {
          mutability[v.id] = { kind: "UnfrozenMutable", reason: "", mutable: true };
        }
        return respond(200, {
          ok: true,
          violations: [],
          loops: {},
          two_cycles: {},
          mutability,
        });
      }
      if (url === "/iso") {
        return respond(200, this.isoVerdict);
      }
      return respond(404, { error: "not found" });
    });
  }

  mutateCalls(): number {
    return this.calls.filter((c) => c.path === "/mutate").length;
  }
}

function respond(status: number, body: unknown): Response {
  return new Response(JSON.stringify(body), {
    status,
    headers: { "Content-Type": "application/json" },
  });
}

function mutated(doc: IQPDocument, vertex: string): IQPDocument {
  const copy: IQPDocument = JSON.parse(JSON.stringify(doc));
  copy.potential = [...copy.potential, { coeff: "1", cycle: ["mutated-at", vertex] }];
  return copy;
}

describe("Session", () => {
  let fake: FakeServer;
  let session: Session;

  beforeEach(() => {
    fake = new FakeServer();
    session = new Session(fake.client());
  });

  it("load creates a single root entry with server snapshots", async () => {
    await session.load(FIVE_DOC);
    expect(session.branches).toHaveLength(1);
    const state = session.state!;
    expect(state.cursor).toBe(0);
    expect(state.history).toHaveLength(1);
    expect(state.history[0].appliedVertex).toBeNull();
    expect(state.history[0].invariants.jacobian_dims).toEqual([5, 4]);
    expect(state.history[0].validation.mutability["5"].mutable).toBe(true);
  });

  it("every entry after the first is the server's /mutate response to its predecessor", async () => {
    await session.load(FIVE_DOC);
    await session.mutateAt("3");
    await session.mutateAt("2");
    const history = session.state!.history;
    expect(history).toHaveLength(3);
    for (let i = 1; i < history.length; i++) {
      const exchange = fake.mutateResponses[i - 1];
      expect(exchange.request).toEqual(history[i - 1].doc);
      expect(exchange.vertex).toBe(history[i].appliedVertex);
      expect(history[i].doc).toEqual(exchange.iqp);
    }
  });

  it("replay reproduces the history byte for byte", async () => {
    await session.load(FIVE_DOC);
    await session.mutateAt("3");
    await session.mutateAt("2");
    const report = await session.replay();
    expect(report).toEqual({ ok: true, steps: 2, mismatches: [] });
  });

  it("replay flags entries that no longer match the server", async () => {
    await session.load(FIVE_DOC);
    await session.mutateAt("3");
    session.state!.history[1].doc.potential.push({ coeff: "1", cycle: ["x"] });
    const report = await session.replay();
    expect(report.ok).toBe(false);
    expect(report.mismatches).toEqual([1]);
  });

  it("undo and redo move the cursor without touching history", async () => {
    await session.load(FIVE_DOC);
    await session.mutateAt("3");
    expect(session.undo()).toBe(true);
    expect(session.state!.cursor).toBe(0);
    expect(dumpsDocument(session.current!.doc)).toBe(dumpsDocument(FIVE_DOC));
    expect(session.undo()).toBe(false);
    expect(session.redo()).toBe(true);
    expect(session.state!.cursor).toBe(1);
    expect(session.state!.history).toHaveLength(2);
  });

  it("mutating from a rewound cursor discards the forward entries", async () => {
    await session.load(FIVE_DOC);
    await session.mutateAt("3");
    session.undo();
    await session.mutateAt("5");
    const history = session.state!.history;
    expect(history).toHaveLength(2);
    expect(history[1].appliedVertex).toBe("5");
  });

  it("branch forks the history up to the cursor", async () => {
    await session.load(FIVE_DOC);
    await session.mutateAt("3");
    await session.mutateAt("2");
    session.jumpTo(0);
    const index = session.branch();
    expect(index).toBe(1);
    expect(session.state!.history).toHaveLength(1);
    await session.mutateAt("5");
    expect(session.state!.history).toHaveLength(2);
    // the original line is untouched by work on the fork
    expect(session.branches[0].history).toHaveLength(3);
    expect(session.branches[0].history[2].appliedVertex).toBe("2");
  });

  it("compare posts the two branch cursor documents to /iso", async () => {
    await session.load(FIVE_DOC);
    await session.mutateAt("3");
    await session.mutateAt("2");
    session.jumpTo(0);
    session.branch();
    await session.mutateAt("5");
    session.branches[0].cursor = 2;
    const verdict = await session.compare(0);
    expect(verdict.isomorphic).toBe(true);
    const isoCall = fake.calls.find((c) => c.path === "/iso")!;
    expect(isoCall.payload.a).toEqual(session.branches[1].history[1].doc);
    expect(isoCall.payload.b).toEqual(session.branches[0].history[2].doc);
  });

  it("drops clicks while a mutation is in flight", async () => {
    await session.load(FIVE_DOC);
    let release!: () => void;
    fake.hold = new Promise((resolve) => (release = resolve));
    const first = session.mutateAt("3");
    const second = await session.mutateAt("2");
    expect(second).toBe("dropped");
    release();
    expect(await first).toBe("applied");
    expect(fake.mutateCalls()).toBe(1);
    expect(session.state!.history).toHaveLength(2);
    expect(session.state!.history[1].appliedVertex).toBe("3");
  });

  it("a refusal leaves the history unchanged and clears the busy flag", async () => {
    await session.load(FIVE_DOC);
    fake.failNextMutate = {
      status: 422,
      body: {
        error: "vertex '1' is not mutable",
        vertex: "1",
        mutability: { kind: "NotMutable", reason: "2-cycle incident", mutable: false },
      },
    };
    const failure = await session.mutateAt("1").catch((e) => e);
    expect(failure).toBeInstanceOf(ApiError);
    expect(failure.status).toBe(422);
    expect(session.state!.history).toHaveLength(1);
    expect(session.busy).toBe(false);
    await session.mutateAt("3");
    expect(session.state!.history).toHaveLength(2);
  });
});
