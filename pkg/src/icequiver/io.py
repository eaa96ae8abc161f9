"""Reading, writing, and canonicalizing ice-quiver-with-potential documents.

The JSON schema (version 1):

    {
      "version": 1,
      "truncation": 12,                      // optional
      "vertices": [{"id": "1", "frozen": false}, ...],
      "arrows":   [{"id": "a", "source": "1", "target": "2",
                    "frozen": false}, ...],
      "potential": [{"coeff": "1", "cycle": ["c", "b", "a"]}, ...]
    }

A cycle lists arrow ids in written order, composing right to left (the last
id is applied first).  Coefficients are exact rationals as strings "p/q".
"""

import json
from fractions import Fraction

from .errors import DocumentError, IQPError
from .mutation import IQP
from .quiver import IceQuiver, Quiver, check_mutable, validate_ice_quiver
from .quotient import DEFAULT_TRUNCATION, check_truncation
from .series import potential

SCHEMA_VERSION = 1


def _fail(msg):
    raise DocumentError(msg)


def _field(obj, key, kind, what):
    if not isinstance(obj, dict):
        _fail(f"{what} must be an object")
    if key not in obj:
        _fail(f"{what} is missing the {key!r} field")
    value = obj[key]
    if kind is bool:
        if not isinstance(value, bool):
            _fail(f"{what}.{key} must be a boolean")
    elif not isinstance(value, kind) or isinstance(value, bool):
        _fail(f"{what}.{key} must be a {kind.__name__}")
    return value


def _coefficient(raw, what):
    if isinstance(raw, str) or (isinstance(raw, int) and not isinstance(raw, bool)):
        try:
            return Fraction(raw)
        except (ValueError, ZeroDivisionError):
            _fail(f"{what} has an unreadable coefficient {raw!r}")
    _fail(f"{what} coefficient must be a rational string like \"1\" or \"-2/3\"")


def decode_document(doc):
    """An IQP from a schema-version-1 dict; malformed input raises
    DocumentError with a one-line reason."""
    if not isinstance(doc, dict):
        _fail("document must be a JSON object")
    if doc.get("version") != SCHEMA_VERSION:
        _fail(f"unsupported document version {doc.get('version')!r}")
    truncation = doc.get("truncation", DEFAULT_TRUNCATION)
    if not isinstance(truncation, int) or isinstance(truncation, bool):
        _fail("truncation must be an integer")
    vertices_raw = doc.get("vertices")
    arrows_raw = doc.get("arrows")
    terms_raw = doc.get("potential", [])
    if not isinstance(vertices_raw, list):
        _fail("vertices must be a list")
    if not isinstance(arrows_raw, list):
        _fail("arrows must be a list")
    if not isinstance(terms_raw, list):
        _fail("potential must be a list")
    vertex_ids = []
    frozen_vertices = []
    for i, v in enumerate(vertices_raw):
        vid = _field(v, "id", str, f"vertices[{i}]")
        vertex_ids.append(vid)
        if _field(v, "frozen", bool, f"vertices[{i}]"):
            frozen_vertices.append(vid)
    arrows = []
    frozen_arrows = []
    for i, a in enumerate(arrows_raw):
        aid = _field(a, "id", str, f"arrows[{i}]")
        arrows.append((aid,
                       _field(a, "source", str, f"arrows[{i}]"),
                       _field(a, "target", str, f"arrows[{i}]")))
        if _field(a, "frozen", bool, f"arrows[{i}]"):
            frozen_arrows.append(aid)
    terms = []
    for i, t in enumerate(terms_raw):
        what = f"potential[{i}]"
        cycle = _field(t, "cycle", list, what)
        if not cycle or not all(isinstance(x, str) for x in cycle):
            _fail(f"{what}.cycle must be a non-empty list of arrow ids")
        if len(cycle) > truncation:
            _fail(f"{what}.cycle has length {len(cycle)}, beyond the "
                  f"truncation degree {truncation}")
        if not isinstance(t, dict) or "coeff" not in t:
            _fail(f"{what} is missing the 'coeff' field")
        terms.append((_coefficient(t["coeff"], what), tuple(cycle)))
    try:
        check_truncation(truncation)
        quiver = Quiver(vertex_ids, arrows)
        iq = IceQuiver(quiver, frozen_vertices, frozen_arrows)
        report = validate_ice_quiver(iq)
        if not report.ok:
            _fail(report.violations[0])
        w = potential(quiver, terms, truncation)
        return IQP(iq, w)
    except IQPError as e:
        _fail(str(e))


def loads_document(text):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        _fail(f"not valid JSON: {e}")
    return decode_document(doc)


def read_document(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            text = fh.read()
    except OSError as e:
        _fail(f"cannot read {path}: {e.strerror}")
    return loads_document(text)


def encode_document(iqp):
    """The schema-version-1 dict of an IQP: vertices and arrows sorted by id,
    potential terms canonically rotated and sorted by (length, word)."""
    iq = iqp.ice_quiver
    q = iq.quiver
    doc = {
        "version": SCHEMA_VERSION,
        "truncation": iqp.potential.truncation,
        "vertices": [{"id": v, "frozen": iq.is_frozen_vertex(v)}
                     for v in q.vertices],
        "arrows": [{"id": a.id, "source": a.source, "target": a.target,
                    "frozen": iq.is_frozen_arrow(a.id)}
                   for a in q.arrows],
        "potential": [{"coeff": str(c), "cycle": list(word)}
                      for word, c in iqp.potential.items()],
    }
    return doc


def dumps_document(doc):
    """The one serialization both the CLI and the HTTP endpoint emit, so
    outputs can be compared byte for byte."""
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def status_payload(status):
    """The JSON form of a MutabilityStatus, shared by every endpoint."""
    return {"kind": status.kind, "reason": status.reason,
            "mutable": status.mutable}


def validation_payload(iq):
    """The validate report dict the CLI prints and the endpoint returns."""
    report = validate_ice_quiver(iq)
    return {
        "ok": report.ok,
        "violations": report.violations,
        "loops": {v: ids for v, ids in sorted(report.loops.items())},
        "two_cycles": {v: [list(pair) for pair in pairs]
                       for v, pairs in sorted(report.two_cycles.items())},
        "mutability": {v: status_payload(check_mutable(iq, v))
                       for v in iq.quiver.vertices},
    }


def canonical_relabel(iqp):
    """Deterministically relabel vertices (v1, v2, ...) in breadth-first
    discovery order and arrows (a1, a2, ...) by their relabeled endpoints.
    Purely cosmetic: the result is isomorphic to the input.  Starting points
    are the lexicographically smallest vertex of each component, so equal
    inputs give equal outputs (this is not an isomorphism-invariant form)."""
    iq = iqp.ice_quiver
    q = iq.quiver
    order = []
    seen = set()
    neighbours = {v: set() for v in q.vertices}
    for a in q.arrows:
        neighbours[a.source].add(a.target)
        neighbours[a.target].add(a.source)
    for start in q.vertices:
        if start in seen:
            continue
        queue = [start]
        seen.add(start)
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in sorted(neighbours[v]):
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
    vmap = {v: f"v{i + 1}" for i, v in enumerate(order)}
    index = {v: i for i, v in enumerate(order)}
    arrow_order = sorted(q.arrows,
                         key=lambda a: (index[a.source], index[a.target], a.id))
    amap = {a.id: f"a{i + 1}" for i, a in enumerate(arrow_order)}
    quiver = Quiver([vmap[v] for v in q.vertices],
                    [(amap[a.id], vmap[a.source], vmap[a.target])
                     for a in q.arrows])
    ice = IceQuiver(quiver,
                    [vmap[v] for v in iq.frozen_vertices],
                    [amap[a] for a in iq.frozen_arrows])
    w = potential(quiver,
                  [(c, tuple(amap[x] for x in word))
                   for word, c in iqp.potential.items()],
                  iqp.potential.truncation)
    return IQP(ice, w)
