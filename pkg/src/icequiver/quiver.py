"""Quiver and ice-quiver data model: validation, mutability, isomorphism, DOT export.

Vertex and arrow ids are opaque strings.  Every deterministic choice made here
and downstream (pairing 2-cycles, naming composites, canonical relabeling)
orders ids lexicographically, so equal inputs always produce equal outputs.
"""

from dataclasses import dataclass, field

from .errors import IQPError


@dataclass(frozen=True)
class Arrow:
    id: str
    source: str
    target: str


class Quiver:
    """A finite quiver.  Vertices and arrows are kept sorted by id."""

    def __init__(self, vertices, arrows):
        self.vertices = tuple(sorted(vertices))
        if len(set(self.vertices)) != len(self.vertices):
            raise IQPError("duplicate vertex ids")
        arrs = [a if isinstance(a, Arrow) else Arrow(*a) for a in arrows]
        arrs.sort(key=lambda a: a.id)
        self.arrows = tuple(arrs)
        self._by_id = {}
        vset = set(self.vertices)
        for a in self.arrows:
            if a.id in self._by_id:
                raise IQPError(f"duplicate arrow id {a.id!r}")
            if a.source not in vset or a.target not in vset:
                raise IQPError(f"arrow {a.id!r} has an endpoint outside the vertex set")
            self._by_id[a.id] = a
        self._out = {v: [] for v in self.vertices}
        self._in = {v: [] for v in self.vertices}
        for a in self.arrows:
            self._out[a.source].append(a)
            self._in[a.target].append(a)

    def arrow(self, arrow_id):
        return self._by_id[arrow_id]

    def has_arrow(self, arrow_id):
        return arrow_id in self._by_id

    def has_vertex(self, v):
        return v in self._out

    def arrows_from(self, v):
        return list(self._out[v])

    def arrows_into(self, v):
        return list(self._in[v])

    def loops_at(self, v):
        return [a for a in self._out[v] if a.target == v]

    def two_cycles(self):
        """All unordered pairs {a, b} with a: u -> v and b: v -> u, u != v.

        Pairs are returned sorted as (min id, max id), list sorted likewise.
        Frozen status is ignored here; callers filter as needed.
        """
        pairs = []
        for a in self.arrows:
            if a.source == a.target:
                continue
            for b in self._out[a.target]:
                if b.target == a.source and a.id < b.id:
                    pairs.append((a.id, b.id))
        return sorted(pairs)

    def __eq__(self, other):
        return (isinstance(other, Quiver) and self.vertices == other.vertices
                and self.arrows == other.arrows)

    def __hash__(self):
        return hash((self.vertices, self.arrows))

    def __repr__(self):
        return f"Quiver({len(self.vertices)} vertices, {len(self.arrows)} arrows)"


class IceQuiver:
    """A quiver with a distinguished (not necessarily full) frozen subquiver.

    The frozen subquiver is given by a set of frozen vertices and a set of
    frozen arrows.  Well-formedness (every frozen arrow has frozen endpoints)
    is checked by validate_ice_quiver, which reports violations instead of
    raising, so that malformed inputs can be diagnosed.
    """

    def __init__(self, quiver, frozen_vertices=(), frozen_arrows=()):
        self.quiver = quiver
        self.frozen_vertices = frozenset(frozen_vertices)
        self.frozen_arrows = frozenset(frozen_arrows)

    def is_frozen_vertex(self, v):
        return v in self.frozen_vertices

    def is_frozen_arrow(self, arrow_id):
        return arrow_id in self.frozen_arrows

    def unfrozen_vertices(self):
        return [v for v in self.quiver.vertices if v not in self.frozen_vertices]

    def unfrozen_arrows(self):
        return [a for a in self.quiver.arrows if a.id not in self.frozen_arrows]

    def __eq__(self, other):
        return (isinstance(other, IceQuiver) and self.quiver == other.quiver
                and self.frozen_vertices == other.frozen_vertices
                and self.frozen_arrows == other.frozen_arrows)

    def __hash__(self):
        return hash((self.quiver, self.frozen_vertices, self.frozen_arrows))

    def __repr__(self):
        q = self.quiver
        return (f"IceQuiver({len(q.vertices)} vertices, {len(q.arrows)} arrows, "
                f"{len(self.frozen_vertices)} frozen)")


@dataclass
class ValidationReport:
    violations: list = field(default_factory=list)
    loops: dict = field(default_factory=dict)        # vertex -> [arrow ids]
    two_cycles: dict = field(default_factory=dict)   # vertex -> [(id, id)]

    @property
    def ok(self):
        return not self.violations


def validate_ice_quiver(iq):
    """Report violations of the ice-quiver invariants, plus loops and 2-cycles
    per vertex (loops and 2-cycles are not violations, but mutation is not
    defined at the vertices they touch)."""
    report = ValidationReport()
    q = iq.quiver
    vset = set(q.vertices)
    for v in sorted(iq.frozen_vertices - vset):
        report.violations.append(f"frozen vertex {v!r} is not a vertex of the quiver")
    for aid in sorted(iq.frozen_arrows):
        if not q.has_arrow(aid):
            report.violations.append(f"frozen arrow {aid!r} is not an arrow of the quiver")
            continue
        a = q.arrow(aid)
        for endpoint in (a.source, a.target):
            if endpoint not in iq.frozen_vertices:
                report.violations.append(
                    f"frozen arrow endpoint: arrow {aid!r} has unfrozen endpoint {endpoint!r}")
    for v in q.vertices:
        loops = [a.id for a in q.loops_at(v)]
        if loops:
            report.loops[v] = loops
    for a_id, b_id in q.two_cycles():
        a = q.arrow(a_id)
        for v in (a.source, a.target):
            report.two_cycles.setdefault(v, []).append((a_id, b_id))
    return report


@dataclass(frozen=True)
class MutabilityStatus:
    kind: str      # UnfrozenMutable | FrozenSource | FrozenSink | NotMutable
    reason: str = ""

    @property
    def mutable(self):
        return self.kind != "NotMutable"


def check_mutable(iq, v):
    """Classify the vertex v for mutation.

    Mutation is defined at unfrozen vertices with no incident loops or
    2-cycles, and at frozen sources/sinks of the frozen subquiver: a frozen
    source has no frozen arrows in and no unfrozen arrows out (the frozen sink
    condition is dual).  2-cycles count regardless of frozen status.
    """
    q = iq.quiver
    if not q.has_vertex(v):
        raise IQPError(f"unknown vertex {v!r}")
    if q.loops_at(v):
        return MutabilityStatus("NotMutable", "loop incident")
    for a_id, b_id in q.two_cycles():
        a = q.arrow(a_id)
        if v in (a.source, a.target):
            return MutabilityStatus("NotMutable", "2-cycle incident")
    if v not in iq.frozen_vertices:
        return MutabilityStatus("UnfrozenMutable")
    frozen_in = [a for a in q.arrows_into(v) if iq.is_frozen_arrow(a.id)]
    frozen_out = [a for a in q.arrows_from(v) if iq.is_frozen_arrow(a.id)]
    unfrozen_in = [a for a in q.arrows_into(v) if not iq.is_frozen_arrow(a.id)]
    unfrozen_out = [a for a in q.arrows_from(v) if not iq.is_frozen_arrow(a.id)]
    if not frozen_in and not unfrozen_out:
        return MutabilityStatus("FrozenSource")
    if not frozen_out and not unfrozen_in:
        return MutabilityStatus("FrozenSink")
    return MutabilityStatus("NotMutable", "frozen vertex is not a frozen source or sink")


@dataclass
class Isomorphism:
    vertex_map: dict
    arrow_map: dict


def _vertex_signature(iq, v):
    q = iq.quiver
    sig = [v in iq.frozen_vertices]
    for arrows in (q.arrows_from(v), q.arrows_into(v)):
        sig.append(sum(1 for a in arrows if not iq.is_frozen_arrow(a.id)))
        sig.append(sum(1 for a in arrows if iq.is_frozen_arrow(a.id)))
    sig.append(len(q.loops_at(v)))
    return tuple(sig)


def _edge_counts(iq):
    counts = {}
    for a in iq.quiver.arrows:
        key = (a.source, a.target, iq.is_frozen_arrow(a.id))
        counts[key] = counts.get(key, 0) + 1
    return counts


def ice_quiver_isomorphic(a, b):
    """Search for an isomorphism of ice quivers (vertex and arrow bijections
    preserving incidence and frozen status).  Returns an Isomorphism or None.

    Exact backtracking over vertex assignments with frozen/degree-signature
    pruning; intended for quivers with at most ~20 vertices.
    """
    qa, qb = a.quiver, b.quiver
    if len(qa.vertices) != len(qb.vertices) or len(qa.arrows) != len(qb.arrows):
        return None
    if len(a.frozen_vertices) != len(b.frozen_vertices):
        return None
    if len(a.frozen_arrows) != len(b.frozen_arrows):
        return None
    sig_a = {v: _vertex_signature(a, v) for v in qa.vertices}
    sig_b = {v: _vertex_signature(b, v) for v in qb.vertices}
    if sorted(sig_a.values()) != sorted(sig_b.values()):
        return None
    counts_a = _edge_counts(a)
    counts_b = _edge_counts(b)

    # Most-constrained-first: rare signatures early shrink the search tree.
    freq = {}
    for s in sig_b.values():
        freq[s] = freq.get(s, 0) + 1
    order = sorted(qa.vertices, key=lambda v: (freq[sig_a[v]], v))

    assignment = {}
    used = set()

    def consistent(v, w):
        for u, x in assignment.items():
            for frozen in (False, True):
                if counts_a.get((v, u, frozen), 0) != counts_b.get((w, x, frozen), 0):
                    return False
                if counts_a.get((u, v, frozen), 0) != counts_b.get((x, w, frozen), 0):
                    return False
        for frozen in (False, True):
            if counts_a.get((v, v, frozen), 0) != counts_b.get((w, w, frozen), 0):
                return False
        return True

    def extend(i):
        if i == len(order):
            return True
        v = order[i]
        for w in qb.vertices:
            if w in used or sig_b[w] != sig_a[v]:
                continue
            if not consistent(v, w):
                continue
            assignment[v] = w
            used.add(w)
            if extend(i + 1):
                return True
            del assignment[v]
            used.remove(w)
        return False

    if not extend(0):
        return None

    # Parallel arrows of the same frozen state are interchangeable: pair them
    # off in id order on both sides.
    buckets_b = {}
    for arr in qb.arrows:
        key = (arr.source, arr.target, b.is_frozen_arrow(arr.id))
        buckets_b.setdefault(key, []).append(arr.id)
    for ids in buckets_b.values():
        ids.sort()
    arrow_map = {}
    taken = {key: 0 for key in buckets_b}
    for arr in qa.arrows:
        key = (assignment[arr.source], assignment[arr.target], a.is_frozen_arrow(arr.id))
        ids = buckets_b[key]
        arrow_map[arr.id] = ids[taken[key]]
        taken[key] += 1
    return Isomorphism(vertex_map=dict(assignment), arrow_map=arrow_map)


def to_dot(iq):
    """Graphviz DOT text: frozen vertices boxed, frozen arrows dashed and blue.

    Output is deterministic (nodes, then edges, each sorted by id)."""
    lines = ["digraph {"]
    for v in iq.quiver.vertices:
        style = " [shape=box]" if v in iq.frozen_vertices else ""
        lines.append(f'  "{v}"{style};')
    for a in iq.quiver.arrows:
        attrs = f'label="{a.id}"'
        if iq.is_frozen_arrow(a.id):
            attrs += ", style=dashed, color=blue"
        lines.append(f'  "{a.source}" -> "{a.target}" [{attrs}];')
    lines.append("}")
    return "\n".join(lines) + "\n"
