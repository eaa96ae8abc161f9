import { describe, expect, it } from "vitest";

import { MutabilityStatus } from "../src/api.js";
import { FIVE_DOC, TRIANGLE_DOC } from "../src/documents.js";
import { buildScene } from "../src/render.js";

function status(kind: string): MutabilityStatus {
  return { kind, reason: "", mutable: kind !== "NotMutable" };
}

describe("buildScene", () => {
  it("is empty for a missing document", () => {
    expect(buildScene(null, null)).toEqual({ nodes: [], links: [] });
  });

  it("boxes the frozen triangle vertices", () => {
    const scene = buildScene(TRIANGLE_DOC, null);
    expect(scene.nodes).toHaveLength(3);
    expect(scene.nodes.filter((n) => n.frozen).map((n) => n.id)).toEqual(["1", "3"]);
    expect(scene.links.filter((l) => l.frozen).map((l) => l.id)).toEqual(["c"]);
  });

  it("boxes four of the five vertices of the five-vertex example", () => {
    const scene = buildScene(FIVE_DOC, null);
    expect(scene.nodes).toHaveLength(5);
    expect(scene.nodes.filter((n) => n.frozen)).toHaveLength(4);
  });

  it("disables exactly the vertices the server marked NotMutable", () => {
    const scene = buildScene(FIVE_DOC, {
      "1": status("FrozenSink"),
      "2": status("NotMutable"),
      "3": status("FrozenSource"),
      "4": status("NotMutable"),
      "5": status("UnfrozenMutable"),
    });
    const disabled = scene.nodes.filter((n) => n.disabled).map((n) => n.id);
    expect(disabled).toEqual(["2", "4"]);
    expect(scene.nodes.find((n) => n.id === "3")!.kind).toBe("FrozenSource");
  });

  it("leaves every vertex enabled when no report is available yet", () => {
    const scene = buildScene(TRIANGLE_DOC, null);
    expect(scene.nodes.every((n) => !n.disabled)).toBe(true);
    expect(scene.nodes.every((n) => n.kind === null)).toBe(true);
  });

  it("separates parallel arrows with distinct curvatures", () => {
    const doc = {
      version: 1,
      truncation: 8,
      vertices: [
        { id: "u", frozen: false },
        { id: "v", frozen: false },
      ],
      arrows: [
        { id: "a", source: "u", target: "v", frozen: false },
        { id: "b", source: "u", target: "v", frozen: false },
        { id: "c", source: "v", target: "u", frozen: false },
      ],
      potential: [],
    };
    const curves = new Map(buildScene(doc, null).links.map((l) => [l.id, l.curve]));
    // all three share the endpoint pair, so all three get distinct offsets
    expect(new Set(curves.values()).size).toBe(3);
    expect([...curves.values()].sort((x, y) => x - y)).toEqual([-1, 0, 1]);
  });

  it("draws a lone arrow straight", () => {
    const scene = buildScene(TRIANGLE_DOC, null);
    expect(scene.links.every((l) => l.curve === 0)).toBe(true);
  });

  it("fans out loops at the same vertex", () => {
    const doc = {
      version: 1,
      truncation: 8,
      vertices: [{ id: "u", frozen: false }],
      arrows: [
        { id: "l1", source: "u", target: "u", frozen: false },
        { id: "l2", source: "u", target: "u", frozen: false },
      ],
      potential: [],
    };
    const loops = buildScene(doc, null).links;
    expect(loops.every((l) => l.loop)).toBe(true);
    expect(loops.map((l) => l.loopIndex)).toEqual([0, 1]);
  });
});
