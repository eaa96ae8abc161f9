"""Brute-force reference implementations used to pin expected values.

Everything here recomputes from first principles with sympy matrices and
plain tuple manipulation, deliberately avoiding the package's linear algebra
(echelon closure) and series machinery.  Paths are tuples of arrow ids in
written order (composition right to left); the length-0 path at a vertex v is
the 1-tuple ("@", v).
"""

from fractions import Fraction

import sympy


def _maps(arrows):
    src = {a: s for a, s, _ in arrows}
    tgt = {a: t for a, _, t in arrows}
    return src, tgt


def word_endpoints(word, arrows):
    src, tgt = _maps(arrows)
    if word[0] == "@":
        return word[1], word[1]
    return src[word[-1]], tgt[word[0]]


def all_words(vertices, arrows, n):
    """Composable words of length <= n, as a list of per-degree sorted lists."""
    src, tgt = _maps(arrows)
    by_degree = [sorted(("@", v) for v in vertices)]
    for _ in range(n):
        nxt = []
        for w in by_degree[-1]:
            head_target = w[1] if w[0] == "@" else tgt[w[0]]
            for a, s, _t in arrows:
                if s == head_target:
                    nxt.append((a,) + (() if w[0] == "@" else w))
        by_degree.append(sorted(nxt))
    return by_degree


def glue(left, right, arrows):
    """left . right (right applied first) or None when not composable."""
    ls, _ = word_endpoints(left, arrows)
    _, rt = word_endpoints(right, arrows)
    if ls != rt:
        return None
    if left[0] == "@":
        return right
    if right[0] == "@":
        return left
    return left + right


def quotient_dims(vertices, arrows, relations, n):
    """Per-degree dims of the truncated path algebra modulo the two-sided
    ideal of the relations, by one big sympy row reduction over all triples
    x . r . y. Returns (dims, basis words)."""
    by_degree = all_words(vertices, arrows, n)
    columns = [w for group in by_degree for w in group]
    col_of = {w: i for i, w in enumerate(columns)}
    rows = []
    flat = [w for group in by_degree for w in group]
    for relation in relations:
        if not relation:
            continue
        rel_len = max((len(w) for w in relation if w[0] != "@"), default=0)
        for x in flat:
            xdeg = 0 if x[0] == "@" else len(x)
            for y in flat:
                ydeg = 0 if y[0] == "@" else len(y)
                if xdeg + rel_len + ydeg > n:
                    continue
                row = {}
                for w, c in relation.items():
                    xw = glue(x, w, arrows)
                    if xw is None:
                        continue
                    xwy = glue(xw, y, arrows)
                    if xwy is None:
                        continue
                    if len(xwy) <= n or xwy[0] == "@":
                        j = col_of[xwy]
                        row[j] = row.get(j, 0) + c
                if any(row.values()):
                    rows.append(row)
    if rows:
        m = sympy.zeros(len(rows), len(columns))
        for i, row in enumerate(rows):
            for j, c in row.items():
                m[i, j] = sympy.Rational(c.numerator, c.denominator)
        pivots = set(m.rref()[1])
    else:
        pivots = set()
    basis = [w for i, w in enumerate(columns) if i not in pivots]
    basis_set = set(basis)
    dims = [sum(1 for w in group if w in basis_set) for group in by_degree]
    return dims, basis


def corner_count(basis, arrows, vertex_set):
    """Basis words with both endpoints inside the vertex set, per degree."""
    out = {}
    for w in basis:
        s, t = word_endpoints(w, arrows)
        if s in vertex_set and t in vertex_set:
            d = 0 if w[0] == "@" else len(w)
            out[d] = out.get(d, 0) + 1
    return out


def cyclic_derivative(terms, arrow):
    """Rotate each occurrence of the arrow to the front and delete it."""
    out = {}
    for word, c in terms.items():
        for j, x in enumerate(word):
            if x == arrow:
                rest = word[j + 1:] + word[:j]
                out[rest] = out.get(rest, 0) + c
    return {w: c for w, c in out.items() if c != 0}


def derivative_relations(terms, arrows, unfrozen_arrow_ids, source_of):
    """The relations {cyclic derivative at a : a unfrozen} in oracle form
    (empty rest-words become lazy words at the arrow's source)."""
    relations = []
    for a in unfrozen_arrow_ids:
        derivative = cyclic_derivative(terms, a)
        rel = {}
        for w, c in derivative.items():
            rel[w if w else ("@", source_of[a])] = Fraction(c)
        if rel:
            relations.append(rel)
    return relations


def rank(columns):
    """Exact rank of a matrix given as a list of {row: coefficient} dicts."""
    live = [col for col in columns if col]
    if not live:
        return 0
    rows = sorted({r for col in live for r in col})
    row_of = {r: i for i, r in enumerate(rows)}
    m = sympy.zeros(len(rows), len(live))
    for j, col in enumerate(live):
        for r, c in col.items():
            frac = Fraction(c)
            m[row_of[r], j] = sympy.Rational(frac.numerator, frac.denominator)
    return m.rank()


def homology_profile(slices):
    """(at T3, at T2, at T1) per degree, from sympy ranks only."""
    out = []
    for s in slices:
        r3, r2, r1 = rank(s.m3), rank(s.m2), rank(s.m1)
        out.append((len(s.m3) - r3,
                    (len(s.m2) - r2) - r3,
                    (len(s.m1) - r1) - r2))
    return out


def delta_positions(word):
    """All splittings (left, middle, right) of a word, one per position."""
    return [(word[:j], word[j], word[j + 1:]) for j in range(len(word))]
