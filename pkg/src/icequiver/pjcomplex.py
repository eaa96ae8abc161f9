"""The bimodule complex over the truncated Jacobian algebra J:

    0 -> J (x) R^m (x) J -> J (x) V* (x) J -> J (x) V (x) J -> J (x) J -> 0
              (m3)              (m2)              (m1)

with V spanned by all arrows, V* by dual symbols a* for unfrozen arrows, and
R^m by symbols t_i for unfrozen vertices.  Everything is sliced by a total
degree: J-factors contribute their path length, the middle slot contributes a
fixed weight.  For a potential homogeneous of degree k the weights are
(1, k-1, k) and the maps preserve degree on the nose; otherwise the weights
are (1, 2, 3) and each map is the associated graded of the filtered map --
products are normal forms projected onto the expected degree, and m2 keeps
only the quadratic part of each cyclic derivative.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import IQPError, TruncationError
from .dg import jacobian_quotient, _retruncated_potential
from .linalg import rank_of
from .series import Path, cyclic_derivative, path_source, path_target


def _weights(w):
    """Middle-slot weights (arrow, dual, relation) for the potential."""
    lengths = {len(word) for word in w.terms}
    if any(length == 2 for length in lengths):
        raise IQPError("potential has quadratic terms; reduce before "
                       "building the bimodule complex")
    if len(lengths) == 1:
        k = lengths.pop()
        return 1, k - 1, k
    return 1, 2, 3


@dataclass
class BimoduleComplexSlice:
    """One total degree of the complex: explicit bases for the four terms and
    the three matrices between them, stored column-by-column."""

    degree: int
    bases: dict                      # name -> list of basis tuples
    m1: list = field(default_factory=list)   # column dicts T1 -> T0
    m2: list = field(default_factory=list)   # column dicts T2 -> T1
    m3: list = field(default_factory=list)   # column dicts T3 -> T2
    quotient: object = None          # the Jacobian quotient the bases live in

    def dims(self):
        return {name: len(basis) for name, basis in self.bases.items()}


class _Builder:
    def __init__(self, iqp, n):
        self.iqp = iqp
        self.n = n
        self.quotient = jacobian_quotient(iqp, n)
        w = _retruncated_potential(iqp, n)
        self.w1, self.w2, self.w3 = _weights(w)
        iq = iqp.ice_quiver
        self.quiver = iq.quiver
        self.arrows = list(self.quiver.arrows)
        self.unfrozen_arrows = sorted(iq.unfrozen_arrows(), key=lambda a: a.id)
        self.unfrozen_vertices = list(iq.unfrozen_vertices())
        self.derivatives = {a.id: cyclic_derivative(w, a.id)
                            for a in self.unfrozen_arrows}

    def _product(self, word, degree):
        """Normal form of a composable word in J, projected onto the degree
        where its leading term lives (a no-op for homogeneous potentials)."""
        nf = self.quotient.normal_form({word: Fraction(1)})
        return {p: c for p, c in nf.items() if len(p.arrows) == degree}

    def _pairs(self, d_inner, middle_source, middle_target):
        """Basis pairs (x, y) with deg x + deg y = d_inner, x continuing from
        the middle slot's target and y feeding its source."""
        if d_inner < 0:
            return
        q = self.quotient
        for d1 in range(0, d_inner + 1):
            for x in q.basis_by_degree[d1]:
                if path_source(self.quiver, x) != middle_target:
                    continue
                for y in q.basis_by_degree[d_inner - d1]:
                    if path_target(self.quiver, y) == middle_source:
                        yield x, y

    def bases(self, d):
        q = self.quotient
        t0 = []
        for d1 in range(0, d + 1):
            for x in q.basis_by_degree[d1]:
                sx = path_source(self.quiver, x)
                for y in q.basis_by_degree[d - d1]:
                    if path_target(self.quiver, y) == sx:
                        t0.append((x, y))
        t1 = [(x, a.id, y)
              for a in self.arrows
              for x, y in self._pairs(d - self.w1, a.source, a.target)]
        # the dual slot points backwards: it runs t(a) -> s(a)
        t2 = [(x, a.id + "*", y)
              for a in self.unfrozen_arrows
              for x, y in self._pairs(d - self.w2, a.target, a.source)]
        t3 = [(x, "t_" + v, y)
              for v in self.unfrozen_vertices
              for x, y in self._pairs(d - self.w3, v, v)]
        return {"T0": t0, "T1": t1, "T2": t2, "T3": t3}

    def _emit(self, column, index_of, x_nf, middle, y_nf, coeff):
        for x, cx in x_nf.items():
            for y, cy in y_nf.items():
                key = (x, y) if middle is None else (x, middle, y)
                row = index_of.get(key)
                assert row is not None, f"image element {key} missing from basis"
                c = column.get(row, 0) + coeff * cx * cy
                if c == 0:
                    column.pop(row, None)
                else:
                    column[row] = c

    def _times_arrow(self, x, aid):
        """x . a in J, projected to its leading degree."""
        return self._product(Path(x.arrows + (aid,), None), len(x.arrows) + 1)

    def _arrow_times(self, aid, y):
        """a . y in J, projected to its leading degree."""
        return self._product(Path((aid,) + y.arrows, None), len(y.arrows) + 1)

    def build_slice(self, d, bases):
        index = {name: {elem: i for i, elem in enumerate(basis)}
                 for name, basis in bases.items()}
        quiver = self.quiver
        m1 = []
        for x, aid, y in bases["T1"]:
            column = {}
            self._emit(column, index["T0"], self._times_arrow(x, aid), None,
                       {y: Fraction(1)}, 1)
            self._emit(column, index["T0"], {x: Fraction(1)}, None,
                       self._arrow_times(aid, y), -1)
            m1.append(column)
        m2 = []
        for x, star, y in bases["T2"]:
            aid = star[:-1]
            column = {}
            for word, c in self.derivatives[aid].coefficients.items():
                if len(word.arrows) != self.w2:
                    continue  # associated graded drops the longer corrections
                for j, mid in enumerate(word.arrows):
                    left = Path(x.arrows + word.arrows[:j], None)
                    if not left.arrows:
                        left = Path((), path_source(quiver, x))
                    right = Path(word.arrows[j + 1:] + y.arrows, None)
                    if not right.arrows:
                        right = Path((), path_target(quiver, y))
                    x_nf = self._product(left, len(x.arrows) + j)
                    y_nf = self._product(right, self.w2 - 1 - j + len(y.arrows))
                    self._emit(column, index["T1"], x_nf, mid, y_nf, c)
            m2.append(column)
        m3 = []
        for x, loop, y in bases["T3"]:
            v = loop[len("t_"):]
            column = {}
            for a in self.unfrozen_arrows:
                if a.target == v:
                    self._emit(column, index["T2"], self._times_arrow(x, a.id),
                               a.id + "*", {y: Fraction(1)}, 1)
                if a.source == v:
                    self._emit(column, index["T2"], {x: Fraction(1)},
                               a.id + "*", self._arrow_times(a.id, y), -1)
            m3.append(column)
        return BimoduleComplexSlice(degree=d, bases=bases, m1=m1, m2=m2, m3=m3,
                                    quotient=self.quotient)


def build_pj_complex(iqp, n):
    """All slices of total degree 0..n of the bimodule complex over the
    truncated Jacobian algebra of the ice quiver with potential."""
    builder = _Builder(iqp, n)
    if n < builder.w3:
        raise TruncationError(
            f"truncation {n} cannot house the relation term (weight {builder.w3})")
    return [builder.build_slice(d, builder.bases(d)) for d in range(n + 1)]


def _compose_columns(outer, inner):
    """Columns of outer . inner, given both as lists of column dicts."""
    out = []
    for column in inner:
        acc = {}
        for mid, c in column.items():
            for row, v in outer[mid].items():
                w = acc.get(row, 0) + c * v
                if w == 0:
                    acc.pop(row, None)
                else:
                    acc[row] = w
        out.append(acc)
    return out


def _augment(quotient, pair, degree):
    """Multiply a T0 basis pair out in J, projected to the slice degree."""
    x, y = pair
    arrows = x.arrows + y.arrows
    word = Path(arrows, None) if arrows else Path((), x.at)
    nf = quotient.normal_form({word: Fraction(1)})
    return {p: c for p, c in nf.items() if len(p.arrows) == degree}


@dataclass
class ComplexReport:
    ok: bool
    failures: list = field(default_factory=list)  # (degree, position, column, residue)

    @property
    def first_failure(self):
        return self.failures[0] if self.failures else None


def check_complex(slices):
    """Verify m1 . m2 = 0 and m2 . m3 = 0 in every degree, and that the
    augmentation (multiplication J (x) J -> J) kills the image of m1."""
    failures = []
    for s in slices:
        for position, outer, inner in (("m1.m2", s.m1, s.m2),
                                       ("m2.m3", s.m2, s.m3)):
            for col, residue in enumerate(_compose_columns(outer, inner)):
                if residue:
                    failures.append((s.degree, position, col, residue))
        if s.quotient is not None:
            for col, column in enumerate(s.m1):
                residue = {}
                for row, c in column.items():
                    for p, v in _augment(s.quotient, s.bases["T0"][row],
                                         s.degree).items():
                        w = residue.get(p, 0) + c * v
                        if w == 0:
                            residue.pop(p, None)
                        else:
                            residue[p] = w
                if residue:
                    failures.append((s.degree, "augmentation.m1", col, residue))
    return ComplexReport(ok=not failures, failures=failures)


@dataclass
class ExactnessProfile:
    truncation: int
    homology: list          # per degree: (at T3, at T2, at T1)
    exact_at_truncation: bool

    def as_dict(self):
        return {"truncation": self.truncation,
                "homology": [list(h) for h in self.homology],
                "exact_at_truncation": self.exact_at_truncation}


def exactness_profile(slices):
    """Per-degree homology dimensions at the three inner terms; all zero
    through degree n-2 counts as exact at the truncation (the top two degrees
    carry truncation artifacts)."""
    homology = []
    for s in slices:
        r3 = rank_of(s.m3)
        r2 = rank_of(s.m2)
        r1 = rank_of(s.m1)
        h3 = len(s.m3) - r3
        h2 = (len(s.m2) - r2) - r3
        h1 = (len(s.m1) - r1) - r2
        homology.append((h3, h2, h1))
    n = len(slices) - 1
    exact = all(h == (0, 0, 0) for h in homology[: max(n - 1, 0)])
    return ExactnessProfile(truncation=n, homology=homology,
                            exact_at_truncation=exact)
