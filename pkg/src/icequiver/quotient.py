"""Truncated quotients of the completed path algebra by two-sided ideals.

The quotient k^Q / (ideal + paths beyond degree N) is modeled degreewise: all
paths of length <= N are enumerated and the ideal's slice is the row space of
the generators' endpoint pieces closed under left/right multiplication by
arrows.  With columns ordered by (degree, path), the per-degree dimensions of
the associated graded quotient are the counts of non-pivot paths per degree.
"""

import os

from .errors import IQPError, TruncationError
from .linalg import Echelon
from .series import Path, lazy_path, path_sort_key, path_source, path_target

DEFAULT_TRUNCATION = 12


def max_truncation():
    return int(os.environ.get("IQP_MAX_TRUNCATION", "24"))


def check_truncation(n):
    if not isinstance(n, int) or n < 0:
        raise TruncationError(f"truncation degree must be a non-negative integer, got {n!r}")
    cap = max_truncation()
    if n > cap:
        raise TruncationError(
            f"truncation degree {n} exceeds the configured maximum {cap} "
            f"(set IQP_MAX_TRUNCATION to raise it)")


def enumerate_paths(quiver, n, max_paths=200_000):
    """All paths of length <= n, as a list of per-degree sorted lists."""
    by_degree = [sorted((lazy_path(v) for v in quiver.vertices), key=path_sort_key)]
    total = len(by_degree[0])
    for _ in range(n):
        cur = []
        for p in by_degree[-1]:
            for a in quiver.arrows_from(path_target(quiver, p)):
                cur.append(Path((a.id,) + p.arrows, None))
        cur.sort(key=path_sort_key)
        total += len(cur)
        if total > max_paths:
            raise TruncationError(
                f"more than {max_paths} paths below degree {n}; "
                f"the quiver is too big for this truncation")
        by_degree.append(cur)
    return by_degree


def stabilized_tail(dims, n):
    """True when the last ceil(n/4) degrees contribute nothing."""
    k = -(-n // 4)
    return all(dims[d] == 0 for d in range(n - k + 1, n + 1))


class TruncatedQuotient:
    """Per-degree linear-algebra model of a truncated quotient; produced by
    truncated_quotient."""

    def __init__(self, ice_quiver, truncation, paths_by_degree, col_index, echelon):
        self.ice_quiver = ice_quiver
        self.quiver = ice_quiver.quiver
        self.truncation = truncation
        self._paths_by_degree = paths_by_degree
        self._col_index = col_index
        self._path_of_col = {i: p for p, i in col_index.items()}
        self._echelon = echelon
        pivots = echelon.pivots()
        self.basis_by_degree = [
            [p for p in paths_by_degree[d] if col_index[p] not in pivots]
            for d in range(truncation + 1)
        ]
        self.dims = [len(b) for b in self.basis_by_degree]
        self.total = sum(self.dims)
        self.stabilized = stabilized_tail(self.dims, truncation)

    def basis(self, degree):
        return list(self.basis_by_degree[degree])

    def normal_form(self, coefficients):
        """Coordinates of a path vector on the surviving basis paths."""
        vec = {}
        for p, c in coefficients.items():
            if c == 0:
                continue
            col = self._col_index.get(p)
            if col is None:
                raise IQPError(f"path {p} outside the enumerated truncation")
            vec[col] = vec.get(col, 0) + c
        residue = self._echelon.reduce(vec)
        return {self._path_of_col[col]: c for col, c in residue.items()}


def _vector_of(series_coeffs, col_index):
    vec = {}
    for p, c in series_coeffs.items():
        col = col_index.get(p)
        if col is None:
            continue  # beyond truncation
        vec[col] = vec.get(col, 0) + c
    return {c: v for c, v in vec.items() if v != 0}


def closure_echelon(quiver, seed_vectors, n, paths_by_degree, col_index):
    """Echelon basis of the two-sided span of the seeds: close the row space
    under left and right multiplication by arrows, truncating beyond degree n.

    Each seed must be endpoint-homogeneous: all its paths share one (source,
    target) pair, so every derived row does too.
    """
    path_of_col = {i: p for p, i in col_index.items()}
    ech = Echelon()
    work = list(seed_vectors)
    while work:
        vec = work.pop()
        row = ech.insert(vec)
        if row is None:
            continue
        some_path = path_of_col[next(iter(row))]
        src = path_source(quiver, some_path)
        tgt = path_target(quiver, some_path)
        for a in quiver.arrows_from(tgt):      # left extension a . row
            ext = {}
            for col, c in row.items():
                p = path_of_col[col]
                if len(p.arrows) + 1 > n:
                    continue
                ext[col_index[Path((a.id,) + p.arrows, None)]] = c
            if ext:
                work.append(ext)
        for a in quiver.arrows_into(src):      # right extension row . a
            ext = {}
            for col, c in row.items():
                p = path_of_col[col]
                if len(p.arrows) + 1 > n:
                    continue
                ext[col_index[Path(p.arrows + (a.id,), None)]] = c
            if ext:
                work.append(ext)
    return ech


def split_by_endpoints(quiver, series):
    """The endpoint-homogeneous pieces e_i . x . e_j of a series (each piece
    lies in any two-sided ideal containing x)."""
    pieces = {}
    for p, c in series.coefficients.items():
        key = (path_source(quiver, p), path_target(quiver, p))
        pieces.setdefault(key, {})[p] = c
    return [pieces[k] for k in sorted(pieces)]


def truncated_quotient(iq, generators, n):
    """Per-degree dimensions (and basis) of the completed path algebra modulo
    the closed two-sided ideal spanned by the generators, truncated at n."""
    check_truncation(n)
    quiver = iq.quiver
    for g in generators:
        if g.quiver != quiver:
            raise IQPError("generator lives on a different quiver")
        if g.truncation != n:
            raise TruncationError(
                f"generator truncated at {g.truncation}, quotient requested at {n}")
    paths_by_degree = enumerate_paths(quiver, n)
    col_index = {}
    for group in paths_by_degree:
        for p in group:
            col_index[p] = len(col_index)
    seeds = []
    for g in generators:
        for piece in split_by_endpoints(quiver, g):
            vec = _vector_of(piece, col_index)
            if vec:
                seeds.append(vec)
    ech = closure_echelon(quiver, seeds, n, paths_by_degree, col_index)
    return TruncatedQuotient(iq, n, paths_by_degree, col_index, ech)


def corner_dims(q, idempotents):
    """Per-degree counts of surviving basis paths supported on the given
    vertex set (both source and target inside it)."""
    for v in idempotents:
        if not q.quiver.has_vertex(v):
            raise IQPError(f"unknown vertex {v!r}")
    idem = set(idempotents)
    dims = []
    for d in range(q.truncation + 1):
        dims.append(sum(
            1 for p in q.basis_by_degree[d]
            if path_source(q.quiver, p) in idem and path_target(q.quiver, p) in idem))
    return dims
