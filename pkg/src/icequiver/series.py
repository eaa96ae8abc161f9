"""Truncated completed path algebra: series arithmetic, cyclic words, cyclic
derivatives, and substitution morphisms.

Paths compose right-to-left (function style): a path p = (a_m, ..., a_1) is
stored as a tuple of arrow ids in written order, so arrows[0] is the leftmost
(last applied) arrow, the source is s(a_1) = s(arrows[-1]) and the target is
t(a_m) = t(arrows[0]).  Length-0 paths are the lazy paths e_i, one per vertex.

All coefficients are exact rationals.  Every series carries a truncation
degree N: products and substitutions silently discard words longer than N,
which models working modulo the (N+1)-st power of the arrow ideal.
"""

from fractions import Fraction
from typing import NamedTuple

from .errors import IQPError, TruncationError


class Path(NamedTuple):
    arrows: tuple       # arrow ids in written order; empty for lazy paths
    at: str = None      # vertex id, set only when arrows is empty


def lazy_path(v):
    return Path((), v)


def word_path(arrows):
    arrows = tuple(arrows)
    if not arrows:
        raise IQPError("a length-0 path needs a vertex; use lazy_path")
    return Path(arrows, None)


def path_source(quiver, p):
    return p.at if not p.arrows else quiver.arrow(p.arrows[-1]).source


def path_target(quiver, p):
    return p.at if not p.arrows else quiver.arrow(p.arrows[0]).target


def compose_paths(quiver, p, q):
    """p after q.  Requires s(p) = t(q)."""
    if path_source(quiver, p) != path_target(quiver, q):
        raise IQPError(f"paths do not compose: {p} after {q}")
    if not p.arrows and not q.arrows:
        return p
    return Path(p.arrows + q.arrows, None)


def path_sort_key(p):
    return (len(p.arrows), p.arrows, p.at or "")


def format_word(arrows):
    """Readable form of a word: ids concatenated, spaced when any id is long."""
    if all(len(a) == 1 for a in arrows):
        return "".join(arrows)
    return " ".join(arrows)


def _check_same_ambient(x, y):
    if x.quiver != y.quiver:
        raise IQPError("operands live on different quivers")
    if x.truncation != y.truncation:
        raise TruncationError(
            f"mixed truncation degrees {x.truncation} and {y.truncation}")


class PathSeries:
    """A finite rational combination of paths of length <= truncation."""

    __slots__ = ("quiver", "truncation", "coefficients")

    def __init__(self, quiver, coefficients=None, truncation=None):
        if truncation is None:
            raise TruncationError("a PathSeries needs a truncation degree")
        self.quiver = quiver
        self.truncation = truncation
        coeffs = {}
        for p, c in (coefficients or {}).items():
            c = Fraction(c)
            if c == 0 or len(p.arrows) > truncation:
                continue
            coeffs[p] = c
        self.coefficients = coeffs

    def is_zero(self):
        return not self.coefficients

    def items(self):
        return sorted(self.coefficients.items(), key=lambda pc: path_sort_key(pc[0]))

    def add(self, other):
        _check_same_ambient(self, other)
        coeffs = dict(self.coefficients)
        for p, c in other.coefficients.items():
            c2 = coeffs.get(p, 0) + c
            if c2 == 0:
                coeffs.pop(p, None)
            else:
                coeffs[p] = c2
        return PathSeries(self.quiver, coeffs, self.truncation)

    def subtract(self, other):
        return self.add(other.scale(-1))

    def scale(self, c):
        c = Fraction(c)
        return PathSeries(self.quiver,
                          {p: c * v for p, v in self.coefficients.items()},
                          self.truncation)

    def min_degree(self):
        return min((len(p.arrows) for p in self.coefficients), default=None)

    def __eq__(self, other):
        return (isinstance(other, PathSeries) and self.quiver == other.quiver
                and self.truncation == other.truncation
                and self.coefficients == other.coefficients)

    def __repr__(self):
        if self.is_zero():
            return "PathSeries(0)"
        parts = []
        for p, c in self.items():
            word = format_word(p.arrows) if p.arrows else f"e_{p.at}"
            parts.append(f"{c}*{word}" if c != 1 else word)
        return "PathSeries(" + " + ".join(parts) + ")"


def series_zero(quiver, n):
    return PathSeries(quiver, {}, n)


def vertex_series(quiver, v, n):
    if not quiver.has_vertex(v):
        raise IQPError(f"unknown vertex {v!r}")
    return PathSeries(quiver, {lazy_path(v): Fraction(1)}, n)


def arrow_series(quiver, arrow_id, n):
    if not quiver.has_arrow(arrow_id):
        raise IQPError(f"unknown arrow {arrow_id!r}")
    return PathSeries(quiver, {word_path((arrow_id,)): Fraction(1)}, n)


def unit_series(quiver, n):
    return PathSeries(quiver, {lazy_path(v): Fraction(1) for v in quiver.vertices}, n)


def series_multiply(x, y):
    """Concatenation product x*y (y applied first); words longer than the
    truncation degree are discarded."""
    _check_same_ambient(x, y)
    n = x.truncation
    quiver = x.quiver
    by_target = {}
    for q, d in y.coefficients.items():
        by_target.setdefault(path_target(quiver, q), []).append((q, d))
    coeffs = {}
    for p, c in x.coefficients.items():
        src = path_source(quiver, p)
        for q, d in by_target.get(src, ()):
            if len(p.arrows) + len(q.arrows) > n:
                continue
            pq = compose_paths(quiver, p, q)
            v = coeffs.get(pq, 0) + c * d
            if v == 0:
                coeffs.pop(pq, None)
            else:
                coeffs[pq] = v
    return PathSeries(quiver, coeffs, n)


def canonical_rotation(word):
    """Lexicographically minimal rotation of a cyclic word of arrow ids."""
    word = tuple(word)
    return min(word[k:] + word[:k] for k in range(len(word)))


def _check_potential_word(quiver, word):
    if len(word) < 2:
        raise IQPError(f"potential term {format_word(word)!r} has degree < 2")
    for left, right in zip(word, word[1:]):
        if quiver.arrow(left).source != quiver.arrow(right).target:
            raise IQPError(f"potential term {format_word(word)!r} is not composable")
    if quiver.arrow(word[-1]).source != quiver.arrow(word[0]).target:
        raise IQPError(f"potential term {format_word(word)!r} is not a cycle")
    if len(word) == 2 and any(quiver.arrow(a).source == quiver.arrow(a).target
                              for a in word):
        raise IQPError(
            f"potential term {format_word(word)!r} contains a loop but has degree < 3")


class Potential:
    """A rational combination of cyclic words, each stored as its canonical
    (lexicographically minimal) rotation.  Words have length >= 2, and >= 3
    when they contain a loop."""

    __slots__ = ("quiver", "truncation", "terms")

    def __init__(self, quiver, terms=None, truncation=None):
        if truncation is None:
            raise TruncationError("a Potential needs a truncation degree")
        self.quiver = quiver
        self.truncation = truncation
        out = {}
        for word, c in (terms or {}).items():
            c = Fraction(c)
            if c == 0 or len(word) > truncation:
                continue
            word = tuple(word)
            if word != canonical_rotation(word):
                raise IQPError(f"term {format_word(word)!r} is not canonically rotated")
            _check_potential_word(quiver, word)
            out[word] = c
        self.terms = out

    def is_zero(self):
        return not self.terms

    def items(self):
        return sorted(self.terms.items(), key=lambda wc: (len(wc[0]), wc[0]))

    def add(self, other):
        _check_same_ambient(self, other)
        terms = dict(self.terms)
        for w, c in other.terms.items():
            c2 = terms.get(w, 0) + c
            if c2 == 0:
                terms.pop(w, None)
            else:
                terms[w] = c2
        return Potential(self.quiver, terms, self.truncation)

    def subtract(self, other):
        return self.add(other.scale(-1))

    def scale(self, c):
        c = Fraction(c)
        return Potential(self.quiver, {w: c * v for w, v in self.terms.items()},
                         self.truncation)

    def as_series(self):
        """Each canonical word, read as an honest path from its source vertex."""
        return PathSeries(self.quiver,
                          {word_path(w): c for w, c in self.terms.items()},
                          self.truncation)

    def arrows_used(self):
        used = set()
        for w in self.terms:
            used.update(w)
        return used

    def __eq__(self, other):
        return (isinstance(other, Potential) and self.quiver == other.quiver
                and self.truncation == other.truncation and self.terms == other.terms)

    def __repr__(self):
        if self.is_zero():
            return "Potential(0)"
        parts = []
        for w, c in self.items():
            parts.append(f"{c}*{format_word(w)}" if c != 1 else format_word(w))
        return "Potential(" + " + ".join(parts) + ")"


def potential(quiver, terms, n):
    """Build a Potential from (coefficient, word) pairs in any rotation."""
    out = {}
    for c, word in terms:
        word = tuple(word)
        if not word:
            raise IQPError("empty word in potential term")
        for a in word:
            if not quiver.has_arrow(a):
                raise IQPError(f"unknown arrow {a!r} in potential term")
        canon = canonical_rotation(word)
        out[canon] = out.get(canon, 0) + Fraction(c)
    return Potential(quiver, out, n)


def cyclic_normal_form(x):
    """Collapse a series of cycles into a Potential (canonical rotations,
    merged coefficients).  Raises on non-cyclic paths and on words violating
    the degree constraints (degree < 2, or a loop in a word of degree < 3)."""
    terms = {}
    for p, c in x.coefficients.items():
        if path_source(x.quiver, p) != path_target(x.quiver, p):
            raise IQPError(f"non-cyclic path {p} in cyclic normal form")
        if len(p.arrows) < 2:
            raise IQPError("cycle of degree < 2 in cyclic normal form")
        canon = canonical_rotation(p.arrows)
        c2 = terms.get(canon, 0) + c
        if c2 == 0:
            terms.pop(canon, None)
        else:
            terms[canon] = c2
    return Potential(x.quiver, terms, x.truncation)


def cyclic_derivative(w, arrow_id):
    """For each occurrence of the arrow in each cyclic word, rotate that
    occurrence to the front and delete it; extend linearly."""
    if not w.quiver.has_arrow(arrow_id):
        raise IQPError(f"unknown arrow {arrow_id!r}")
    coeffs = {}
    for word, c in w.terms.items():
        for j, a in enumerate(word):
            if a != arrow_id:
                continue
            rest = word[j + 1:] + word[:j]
            p = word_path(rest) if rest else lazy_path(w.quiver.arrow(arrow_id).source)
            v = coeffs.get(p, 0) + c
            if v == 0:
                coeffs.pop(p, None)
            else:
                coeffs[p] = v
    return PathSeries(w.quiver, coeffs, w.truncation)


class ArrowSubstitution:
    """A continuous algebra endomorphism fixing the vertices: each arrow is
    sent to a series with the same endpoints; unassigned arrows are fixed."""

    __slots__ = ("quiver", "truncation", "assignment")

    def __init__(self, quiver, assignment, truncation):
        self.quiver = quiver
        self.truncation = truncation
        self.assignment = {}
        for arrow_id, series in assignment.items():
            if not quiver.has_arrow(arrow_id):
                raise IQPError(f"substitution of unknown arrow {arrow_id!r}")
            if series.truncation != truncation:
                raise TruncationError("substitution value at a different truncation")
            a = quiver.arrow(arrow_id)
            for p in series.coefficients:
                if (path_source(quiver, p) != a.source
                        or path_target(quiver, p) != a.target):
                    raise IQPError(
                        f"substitution value for {arrow_id!r} has mismatched endpoints")
            self.assignment[arrow_id] = series

    def value(self, arrow_id):
        got = self.assignment.get(arrow_id)
        if got is None:
            return arrow_series(self.quiver, arrow_id, self.truncation)
        return got


def apply_substitution(phi, x):
    """Apply an ArrowSubstitution to a PathSeries or a Potential (the result
    is of the same kind; Potential output is re-normalized cyclically)."""
    if isinstance(x, Potential):
        return cyclic_normal_form(apply_substitution(phi, x.as_series()))
    if x.quiver != phi.quiver:
        raise IQPError("substitution and series live on different quivers")
    if x.truncation != phi.truncation:
        raise TruncationError("substitution and series at different truncations")
    out = series_zero(x.quiver, x.truncation)
    for p, c in x.coefficients.items():
        if not p.arrows:
            term = PathSeries(x.quiver, {p: c}, x.truncation)
        else:
            term = phi.value(p.arrows[0]).scale(c)
            for a in p.arrows[1:]:
                term = series_multiply(term, phi.value(a))
        out = out.add(term)
    return out


def commutator_sum_with_derivatives(w):
    """The series sum over all arrows a of [a, d_a(w)] = a*d_a(w) - d_a(w)*a.

    This vanishes identically for any potential (each cyclic word's rotations
    telescope); downstream differential identities lean on that fact, and a
    property test pins it down.
    """
    total = series_zero(w.quiver, w.truncation)
    for a in w.quiver.arrows:
        d = cyclic_derivative(w, a.id)
        if d.is_zero():
            continue
        a_series = arrow_series(w.quiver, a.id, w.truncation)
        total = total.add(series_multiply(a_series, d))
        total = total.subtract(series_multiply(d, a_series))
    return total
