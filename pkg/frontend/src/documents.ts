/** Document schema shared with the server, plus display formatting.
 *
 * The browser never interprets documents algebraically: they are opaque
 * payloads round-tripped through the HTTP endpoint.  The only local
 * operations are shape checks (so a malformed response is reported instead
 * of rendered), byte-exact serialization for replay comparison, and
 * formatting of the potential for display.
 */

export interface VertexDoc {
  id: string;
  frozen: boolean;
}

export interface ArrowDoc {
  id: string;
  source: string;
  target: string;
  frozen: boolean;
}

export interface TermDoc {
  /** Exact rational coefficient, e.g. "1", "-1", "3/2". */
  coeff: string;
  /** Arrow ids in written order: the cycle composes right to left. */
  cycle: string[];
}

export interface IQPDocument {
  version: number;
  truncation: number;
  vertices: VertexDoc[];
  arrows: ArrowDoc[];
  potential: TermDoc[];
}

/** Why a value is not a document, or null if the shape is fine.  Shape only:
 * semantic validation (dangling endpoints, frozen-arrow rules, ...) is the
 * server's job. */
export function documentProblem(value: unknown): string | null {
  if (typeof value !== "object" || value === null || Array.isArray(value)) {
    return "document is not a JSON object";
  }
  const doc = value as Record<string, unknown>;
  if (typeof doc.version !== "number") return "missing numeric 'version'";
  if (typeof doc.truncation !== "number") return "missing numeric 'truncation'";
  for (const key of ["vertices", "arrows", "potential"] as const) {
    if (!Array.isArray(doc[key])) return `missing '${key}' array`;
  }
  for (const v of doc.vertices as unknown[]) {
    const rec = v as Record<string, unknown>;
    if (typeof rec?.id !== "string" || typeof rec?.frozen !== "boolean") {
      return "vertex entries need a string 'id' and boolean 'frozen'";
    }
  }
  for (const a of doc.arrows as unknown[]) {
    const rec = a as Record<string, unknown>;
    if (
      typeof rec?.id !== "string" ||
      typeof rec?.source !== "string" ||
      typeof rec?.target !== "string" ||
      typeof rec?.frozen !== "boolean"
    ) {
      return "arrow entries need string 'id'/'source'/'target' and boolean 'frozen'";
    }
  }
  for (const t of doc.potential as unknown[]) {
    const rec = t as Record<string, unknown>;
    if (typeof rec?.coeff !== "string" || !Array.isArray(rec?.cycle)) {
      return "potential entries need a string 'coeff' and a 'cycle' array";
    }
    if ((rec.cycle as unknown[]).some((x) => typeof x !== "string")) {
      return "potential cycles must be arrays of arrow ids";
    }
  }
  return null;
}

/** Parse text into a document or throw with the problem description. */
export function parseDocument(text: string): IQPDocument {
  let value: unknown;
  try {
    value = JSON.parse(text);
  } catch (e) {
    throw new Error(`not valid JSON: ${(e as Error).message}`);
  }
  const problem = documentProblem(value);
  if (problem !== null) throw new Error(problem);
  return value as IQPDocument;
}

/** Serialize exactly like the server and CLI do, so histories can be
 * compared byte for byte.  Key order is rebuilt explicitly rather than
 * trusting the input object's insertion order. */
export function dumpsDocument(doc: IQPDocument): string {
  const ordered = {
    version: doc.version,
    truncation: doc.truncation,
    vertices: doc.vertices.map((v) => ({ id: v.id, frozen: v.frozen })),
    arrows: doc.arrows.map((a) => ({
      id: a.id,
      source: a.source,
      target: a.target,
      frozen: a.frozen,
    })),
    potential: doc.potential.map((t) => ({
      coeff: t.coeff,
      cycle: [...t.cycle],
    })),
  };
  return JSON.stringify(ordered, null, 2) + "\n";
}

/** One potential term as a signed word, e.g. "− 3/2 c b a". */
export function formatTerm(term: TermDoc): string {
  let coeff = term.coeff;
  let sign = "+";
  if (coeff.startsWith("-")) {
    sign = "−";
    coeff = coeff.slice(1);
  }
  const word = term.cycle.join(" ");
  return coeff === "1" ? `${sign} ${word}` : `${sign} ${coeff} ${word}`;
}

export interface PotentialDisplay {
  /** Formatted terms up to the limit (all of them when expanded). */
  lines: string[];
  /** How many further terms the collapsed view hides. */
  hidden: number;
}

/** The collapsed/expanded display split for a long potential. */
export function potentialDisplay(
  doc: IQPDocument,
  limit: number,
  expanded: boolean,
): PotentialDisplay {
  const terms = doc.potential.map(formatTerm);
  if (expanded || terms.length <= limit) {
    return { lines: terms, hidden: 0 };
  }
  return { lines: terms.slice(0, limit), hidden: terms.length - limit };
}

/** The bundled three-vertex example: one triangle with a frozen side. */
export const TRIANGLE_DOC: IQPDocument = {
  version: 1,
  truncation: 12,
  vertices: [
    { id: "1", frozen: true },
    { id: "2", frozen: false },
    { id: "3", frozen: true },
  ],
  arrows: [
    { id: "a", source: "1", target: "2", frozen: false },
    { id: "b", source: "2", target: "3", frozen: false },
    { id: "c", source: "3", target: "1", frozen: true },
  ],
  potential: [{ coeff: "1", cycle: ["c", "b", "a"] }],
};

/** The bundled five-vertex example: four frozen vertices around one
 * unfrozen vertex, with mutable frozen sources and sinks. */
export const FIVE_DOC: IQPDocument = {
  version: 1,
  truncation: 12,
  vertices: [
    { id: "1", frozen: true },
    { id: "2", frozen: true },
    { id: "3", frozen: true },
    { id: "4", frozen: true },
    { id: "5", frozen: false },
  ],
  arrows: [
    { id: "a", source: "1", target: "5", frozen: false },
    { id: "b", source: "5", target: "2", frozen: false },
    { id: "c", source: "2", target: "1", frozen: true },
    { id: "e", source: "5", target: "3", frozen: false },
    { id: "f", source: "2", target: "4", frozen: true },
    { id: "g", source: "3", target: "1", frozen: true },
    { id: "h", source: "4", target: "5", frozen: false },
    { id: "i", source: "3", target: "4", frozen: true },
  ],
  potential: [
    { coeff: "1", cycle: ["c", "b", "a"] },
    { coeff: "-1", cycle: ["g", "e", "a"] },
    { coeff: "1", cycle: ["h", "i", "e"] },
    { coeff: "-1", cycle: ["f", "b", "h"] },
  ],
};
