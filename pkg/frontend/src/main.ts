/** Wires the session, the quiver view, and the side panels together.
 *
 * All state lives in the Session; this module only reads it and re-renders.
 * Clicks on mutable vertices round-trip through the server; refusals (422)
 * show up as a tooltip at the vertex, transport or shape problems as the
 * error banner.
 */

import { ApiClient, ApiError } from "./api.js";
import {
  FIVE_DOC,
  IQPDocument,
  TRIANGLE_DOC,
  parseDocument,
  potentialDisplay,
} from "./documents.js";
import { buildScene, QuiverView } from "./render.js";
import { HistoryEntry, Session } from "./session.js";

const POTENTIAL_COLLAPSE_LIMIT = 8;

const FIXTURES: Record<string, IQPDocument> = {
  triangle: TRIANGLE_DOC,
  five: FIVE_DOC,
};

function el<T extends HTMLElement>(id: string): T {
  const found = document.getElementById(id);
  if (!found) throw new Error(`missing element #${id}`);
  return found as T;
}

const api = new ApiClient("");
const session = new Session(api);
let potentialExpanded = false;

const banner = el<HTMLDivElement>("banner");
const bannerText = el<HTMLSpanElement>("banner-text");
const tooltip = el<HTMLDivElement>("tooltip");
const verdict = el<HTMLDivElement>("verdict");
const historyList = el<HTMLOListElement>("history-list");
const branchSelect = el<HTMLSelectElement>("branch-select");
const compareSelect = el<HTMLSelectElement>("compare-select");
const potentialBox = el<HTMLDivElement>("potential");
const potentialMore = el<HTMLButtonElement>("potential-more");
const invariantsBox = el<HTMLElement>("invariants");
const traceBox = el<HTMLDivElement>("trace");
const serverStatus = el<HTMLSpanElement>("server-status");

function showBanner(message: string): void {
  bannerText.textContent = message;
  banner.classList.remove("hidden");
}

function hideBanner(): void {
  banner.classList.add("hidden");
}

let tooltipTimer: ReturnType<typeof setTimeout> | null = null;

function showTooltip(message: string, at: { x: number; y: number }): void {
  tooltip.textContent = message;
  tooltip.style.left = `${at.x + 12}px`;
  tooltip.style.top = `${at.y - 10}px`;
  tooltip.classList.remove("hidden");
  if (tooltipTimer) clearTimeout(tooltipTimer);
  tooltipTimer = setTimeout(() => tooltip.classList.add("hidden"), 1800);
}

function reportError(e: unknown, at?: { x: number; y: number }): void {
  if (e instanceof ApiError && e.status === 422 && e.mutability && at) {
    showTooltip("vertex not mutable here", at);
    return;
  }
  if (e instanceof ApiError) {
    showBanner(e.message);
    return;
  }
  showBanner((e as Error).message ?? String(e));
}

async function onVertexClick(id: string, at: { x: number; y: number }): Promise<void> {
  try {
    const outcome = await session.mutateAt(id);
    if (outcome === "applied") {
      hideBanner();
      verdict.textContent = "";
      refresh();
    }
  } catch (e) {
    reportError(e, at);
  }
}

const view = new QuiverView(
  el<HTMLElement>("canvas") as unknown as SVGSVGElement,
  (id, at) => void onVertexClick(id, at),
);

function describeEntry(entry: HistoryEntry, index: number): string {
  return entry.appliedVertex === null
    ? "loaded document"
    : `${index}: mutated at ${entry.appliedVertex}`;
}

function renderHistory(): void {
  historyList.textContent = "";
  const state = session.state;
  if (state === null) return;
  state.history.forEach((entry, index) => {
    const item = document.createElement("li");
    item.textContent = describeEntry(entry, index);
    if (index === state.cursor) item.classList.add("current");
    item.addEventListener("click", () => {
      if (session.jumpTo(index)) refresh();
    });
    historyList.appendChild(item);
  });
}

function renderBranches(): void {
  for (const select of [branchSelect, compareSelect]) {
    select.textContent = "";
    session.branches.forEach((_, index) => {
      const option = document.createElement("option");
      option.value = String(index);
      option.textContent = `branch ${index}`;
      select.appendChild(option);
    });
  }
  branchSelect.value = String(session.active);
}

function renderPotential(entry: HistoryEntry): void {
  potentialBox.textContent = "";
  const display = potentialDisplay(
    entry.doc,
    POTENTIAL_COLLAPSE_LIMIT,
    potentialExpanded,
  );
  if (display.lines.length === 0) {
    potentialBox.textContent = "0";
  }
  for (const line of display.lines) {
    const div = document.createElement("div");
    div.className = "term";
    div.textContent = line;
    potentialBox.appendChild(div);
  }
  const total = entry.doc.potential.length;
  if (display.hidden > 0) {
    potentialMore.textContent = `show ${display.hidden} more terms`;
    potentialMore.classList.remove("hidden");
  } else if (potentialExpanded && total > POTENTIAL_COLLAPSE_LIMIT) {
    potentialMore.textContent = "collapse";
    potentialMore.classList.remove("hidden");
  } else {
    potentialMore.classList.add("hidden");
  }
}

function renderInvariants(entry: HistoryEntry): void {
  invariantsBox.textContent = "";
  const inv = entry.invariants;
  const boundaryTotal = inv.boundary_dims.reduce((a, b) => a + b, 0);
  const rows: [string, string][] = [
    ["truncation N", String(entry.doc.truncation)],
    ["Jacobian dims", inv.jacobian_dims.join(" ")],
    ["boundary dims", inv.boundary_dims.join(" ")],
    ["boundary total", String(boundaryTotal)],
    ["d² = 0", inv.d2_ok ? "holds" : "FAILS"],
    ["document valid", entry.validation.ok ? "yes" : entry.validation.violations.join("; ")],
  ];
  for (const [label, value] of rows) {
    const dt = document.createElement("dt");
    dt.textContent = label;
    const dd = document.createElement("dd");
    dd.textContent = value;
    invariantsBox.append(dt, dd);
  }
}

function renderTrace(entry: HistoryEntry): void {
  traceBox.textContent = "";
  if (entry.trace === null) {
    traceBox.textContent = "—";
    return;
  }
  const lines: string[] = [];
  for (const [a, b] of entry.trace.removed_2cycles) {
    lines.push(`removed 2-cycle ${a} ${b}`);
  }
  for (const [frozen, partner] of entry.trace.frozen_replacements) {
    lines.push(`froze ${partner}, deleted frozen ${frozen}`);
  }
  if (entry.trace.substitutions.length > 0) {
    lines.push(`${entry.trace.substitutions.length} arrow substitution(s)`);
  }
  if (lines.length === 0) lines.push("nothing to reduce");
  for (const line of lines) {
    const div = document.createElement("div");
    div.textContent = line;
    traceBox.appendChild(div);
  }
}

function refresh(): void {
  const entry = session.current;
  view.render(
    buildScene(entry?.doc ?? null, entry?.validation.mutability ?? null),
  );
  renderHistory();
  renderBranches();
  if (entry) {
    renderPotential(entry);
    renderInvariants(entry);
    renderTrace(entry);
  } else {
    potentialBox.textContent = "";
    invariantsBox.textContent = "";
    traceBox.textContent = "";
  }
}

async function loadDocument(doc: IQPDocument): Promise<void> {
  try {
    await session.load(doc);
    potentialExpanded = false;
    verdict.textContent = "";
    hideBanner();
    refresh();
  } catch (e) {
    reportError(e);
  }
}

el<HTMLButtonElement>("load-fixture").addEventListener("click", () => {
  const name = el<HTMLSelectElement>("fixture-select").value;
  void loadDocument(FIXTURES[name]);
});

el<HTMLInputElement>("file-input").addEventListener("change", (event) => {
  const input = event.target as HTMLInputElement;
  const file = input.files?.[0];
  if (!file) return;
  file.text().then(
    (text) => {
      try {
        void loadDocument(parseDocument(text));
      } catch (e) {
        reportError(e);
      }
    },
    (e) => reportError(e),
  );
  input.value = "";
});

el<HTMLButtonElement>("undo").addEventListener("click", () => {
  if (session.undo()) refresh();
});

el<HTMLButtonElement>("redo").addEventListener("click", () => {
  if (session.redo()) refresh();
});

el<HTMLButtonElement>("branch").addEventListener("click", () => {
  if (session.state === null) return;
  session.branch();
  verdict.textContent = "";
  refresh();
});

branchSelect.addEventListener("change", () => {
  if (session.switchTo(Number(branchSelect.value))) refresh();
});

el<HTMLButtonElement>("compare").addEventListener("click", () => {
  if (session.state === null) return;
  const other = Number(compareSelect.value);
  session.compare(other).then(
    (iso) => {
      if (iso.isomorphic) {
        const pairs = Object.entries(iso.vertex_map ?? {})
          .map(([from, to]) => `${from}→${to}`)
          .join(", ");
        verdict.textContent =
          `isomorphic to branch ${other}` + (pairs ? ` (${pairs})` : "");
      } else {
        verdict.textContent = `not isomorphic to branch ${other}`;
      }
    },
    (e) => reportError(e),
  );
});

el<HTMLButtonElement>("replay").addEventListener("click", () => {
  if (session.state === null) return;
  session.replay().then(
    (report) => {
      verdict.textContent = report.ok
        ? `replay: ${report.steps} step(s), byte-identical`
        : `replay mismatch at entries ${report.mismatches.join(", ")}`;
    },
    (e) => reportError(e),
  );
});

potentialMore.addEventListener("click", () => {
  potentialExpanded = !potentialExpanded;
  const entry = session.current;
  if (entry) renderPotential(entry);
});

el<HTMLButtonElement>("banner-dismiss").addEventListener("click", hideBanner);

void api.health().then((ok) => {
  serverStatus.textContent = ok ? "server: ok" : "server: unreachable";
  serverStatus.className = ok ? "status-ok" : "status-bad";
  if (!ok) {
    showBanner(
      "mutation server unreachable — start it with: iqp-cli serve --static frontend",
    );
  }
});

refresh();
