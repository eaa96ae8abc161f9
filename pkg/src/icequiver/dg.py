"""Complete relative Ginzburg dg algebras, complete derived preprojective
algebras, the functor from the latter to the former, and truncated H^0
computations (Jacobian and boundary dimensions).

Generators are concentrated in degrees 0, -1, -2; the differential is stored
on generators and extended to words by the signed Leibniz rule, with the sign
given by the parity of the total degree of the prefix to the left of the slot
being differentiated.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import IQPError
from .quiver import Quiver
from .series import (Path, PathSeries, Potential, arrow_series,
                     cyclic_derivative, lazy_path, path_source, path_target,
                     series_multiply, series_zero, word_path)
from .quotient import (check_truncation, closure_echelon, corner_dims,
                       enumerate_paths, split_by_endpoints, truncated_quotient)


@dataclass(frozen=True)
class GradedArrow:
    id: str
    source: str
    target: str
    degree: int


class GradedQuiver:
    """A quiver whose arrows carry non-positive degrees.  The ungraded shadow
    (self.quiver) is what path series live on."""

    def __init__(self, vertices, arrows):
        for a in arrows:
            if a.degree > 0:
                raise IQPError(f"graded arrow {a.id!r} has positive degree")
        self.arrows = tuple(sorted(arrows, key=lambda a: a.id))
        self.quiver = Quiver(vertices, [(a.id, a.source, a.target) for a in self.arrows])
        self.vertices = self.quiver.vertices
        self._degree = {a.id: a.degree for a in self.arrows}

    def degree(self, arrow_id):
        return self._degree[arrow_id]

    def path_degree(self, p):
        return sum(self._degree[a] for a in p.arrows)


class DgQuiverAlgebra:
    """A graded quiver with a degree +1 differential given on generators.

    The differential of each generator must respect endpoints and raise the
    degree by exactly 1; d^2 = 0 is *checked* (check_d_squared), not assumed.
    `roles` records how special generators were named (duals, loops) so that
    later constructions can find them.
    """

    def __init__(self, graded_quiver, differential, truncation, roles=None):
        self.graded_quiver = graded_quiver
        self.quiver = graded_quiver.quiver
        self.truncation = truncation
        self.differential = dict(differential)
        self.roles = roles or {}
        for a in graded_quiver.arrows:
            if a.id not in self.differential:
                raise IQPError(f"no differential assigned to generator {a.id!r}")
        for gen_id, series in self.differential.items():
            gen = self.quiver.arrow(gen_id)
            want_degree = graded_quiver.degree(gen_id) + 1
            for p in series.coefficients:
                if (path_source(self.quiver, p) != gen.source
                        or path_target(self.quiver, p) != gen.target):
                    raise IQPError(f"d({gen_id}) does not respect endpoints")
                if graded_quiver.path_degree(p) != want_degree:
                    raise IQPError(f"d({gen_id}) does not raise degree by 1")

    def generators(self):
        return [a.id for a in self.graded_quiver.arrows]

    def d_series(self, x):
        """Extend d to a series by the signed Leibniz rule."""
        gq = self.graded_quiver
        out = series_zero(self.quiver, self.truncation)
        for p, c in x.coefficients.items():
            prefix_degree = 0
            for idx, aid in enumerate(p.arrows):
                da = self.differential[aid]
                if not da.is_zero():
                    arrow = self.quiver.arrow(aid)
                    if idx > 0:
                        left = PathSeries(self.quiver,
                                          {word_path(p.arrows[:idx]): Fraction(1)},
                                          self.truncation)
                    else:
                        left = PathSeries(self.quiver,
                                          {lazy_path(arrow.target): Fraction(1)},
                                          self.truncation)
                    if idx + 1 < len(p.arrows):
                        right = PathSeries(self.quiver,
                                           {word_path(p.arrows[idx + 1:]): Fraction(1)},
                                           self.truncation)
                    else:
                        right = PathSeries(self.quiver,
                                           {lazy_path(arrow.source): Fraction(1)},
                                           self.truncation)
                    sign = -1 if prefix_degree % 2 else 1
                    term = series_multiply(series_multiply(left, da), right)
                    out = out.add(term.scale(sign * c))
                prefix_degree += gq.degree(aid)
        return out


@dataclass
class DSquaredReport:
    ok: bool
    failures: list = field(default_factory=list)  # (generator id, residue series)

    @property
    def first_counterexample(self):
        return self.failures[0] if self.failures else None


def check_d_squared(dga):
    """Apply d twice to every generator's differential and report residues."""
    failures = []
    for gen in dga.generators():
        residue = dga.d_series(dga.differential[gen])
        if not residue.is_zero():
            failures.append((gen, residue))
    return DSquaredReport(ok=not failures, failures=failures)


def _fresh(base, taken):
    name = base
    k = 1
    while name in taken:
        k += 1
        name = f"{base}#{k}"
    taken.add(name)
    return name


def _retruncated_potential(iqp, n):
    return Potential(iqp.ice_quiver.quiver, iqp.potential.terms, n)


def build_relative_ginzburg(iqp, n):
    """The complete relative Ginzburg dg algebra of an ice quiver with
    potential: arrows a in degree 0, a dual a∨: t(a) -> s(a) in degree -1 for
    each unfrozen a, a loop t_i in degree -2 for each unfrozen vertex i, with
    d(a) = 0, d(a∨) the cyclic derivative of the potential, and d(t_i) the
    unfrozen commutator sum at i."""
    check_truncation(n)
    iq = iqp.ice_quiver
    q = iq.quiver
    w = _retruncated_potential(iqp, n)
    taken = {a.id for a in q.arrows}
    arrows = [GradedArrow(a.id, a.source, a.target, 0) for a in q.arrows]
    dual_of = {}
    for a in sorted(iq.unfrozen_arrows(), key=lambda x: x.id):
        dual_of[a.id] = _fresh(a.id + "∨", taken)
        arrows.append(GradedArrow(dual_of[a.id], a.target, a.source, -1))
    loop_of = {}
    for v in iq.unfrozen_vertices():
        loop_of[v] = _fresh("t_" + v, taken)
        arrows.append(GradedArrow(loop_of[v], v, v, -2))
    gq = GradedQuiver(q.vertices, arrows)
    differential = {a.id: series_zero(gq.quiver, n) for a in q.arrows}
    for a in iq.unfrozen_arrows():
        derivative = cyclic_derivative(w, a.id)
        differential[dual_of[a.id]] = PathSeries(
            gq.quiver, dict(derivative.coefficients), n)
    for v in iq.unfrozen_vertices():
        coeffs = {}
        for a in iq.unfrozen_arrows():
            if a.target == v:
                coeffs[word_path((a.id, dual_of[a.id]))] = Fraction(1)
            if a.source == v:
                p = word_path((dual_of[a.id], a.id))
                coeffs[p] = coeffs.get(p, 0) - 1
        differential[loop_of[v]] = PathSeries(gq.quiver, coeffs, n)
    return DgQuiverAlgebra(gq, differential, n,
                           roles={"dual_of": dual_of, "loop_of": loop_of})


def build_pi2(iq, n):
    """The complete derived preprojective algebra of the frozen subquiver:
    arrows a and reversed arrows ã in degree 0, a loop r_i in degree -1 at
    each vertex, with d(r_i) the commutator sum at i."""
    check_truncation(n)
    q = iq.quiver
    f_vertices = sorted(iq.frozen_vertices)
    f_arrows = [q.arrow(a) for a in sorted(iq.frozen_arrows)]
    taken = {a.id for a in f_arrows}
    arrows = [GradedArrow(a.id, a.source, a.target, 0) for a in f_arrows]
    tilde_of = {}
    for a in f_arrows:
        tilde_of[a.id] = _fresh(a.id + "~", taken)
        arrows.append(GradedArrow(tilde_of[a.id], a.target, a.source, 0))
    loop_of = {}
    for v in f_vertices:
        loop_of[v] = _fresh("r_" + v, taken)
        arrows.append(GradedArrow(loop_of[v], v, v, -1))
    gq = GradedQuiver(f_vertices, arrows)
    differential = {}
    for a in f_arrows:
        differential[a.id] = series_zero(gq.quiver, n)
        differential[tilde_of[a.id]] = series_zero(gq.quiver, n)
    for v in f_vertices:
        coeffs = {}
        for a in f_arrows:
            if a.target == v:
                coeffs[word_path((a.id, tilde_of[a.id]))] = Fraction(1)
            if a.source == v:
                p = word_path((tilde_of[a.id], a.id))
                coeffs[p] = coeffs.get(p, 0) - 1
        differential[loop_of[v]] = PathSeries(gq.quiver, coeffs, n)
    return DgQuiverAlgebra(gq, differential, n,
                           roles={"tilde_of": tilde_of, "loop_of": loop_of})


class DgMorphism:
    """A morphism of dg quiver algebras: a vertex map plus a series image for
    each source generator, extended multiplicatively."""

    def __init__(self, source, target, vertex_map, arrow_assignment):
        self.source = source
        self.target = target
        self.vertex_map = dict(vertex_map)
        self.arrow_assignment = dict(arrow_assignment)
        for gen_id, image in self.arrow_assignment.items():
            gen = source.quiver.arrow(gen_id)
            want = source.graded_quiver.degree(gen_id)
            for p in image.coefficients:
                if (path_source(target.quiver, p) != self.vertex_map[gen.source]
                        or path_target(target.quiver, p) != self.vertex_map[gen.target]):
                    raise IQPError(f"image of {gen_id!r} has incompatible endpoints")
                if target.graded_quiver.path_degree(p) != want:
                    raise IQPError(f"image of {gen_id!r} does not preserve degree")

    def apply(self, x):
        out = series_zero(self.target.quiver, self.target.truncation)
        for p, c in x.coefficients.items():
            if not p.arrows:
                image = PathSeries(self.target.quiver,
                                   {lazy_path(self.vertex_map[p.at]): Fraction(1)},
                                   self.target.truncation)
            else:
                image = self.arrow_assignment[p.arrows[0]]
                for aid in p.arrows[1:]:
                    image = series_multiply(image, self.arrow_assignment[aid])
            out = out.add(image.scale(c))
        return out

    def chain_map_failures(self):
        failures = []
        for gen in self.source.generators():
            lhs = self.target.d_series(self.arrow_assignment[gen])
            rhs = self.apply(self.source.differential[gen])
            if lhs != rhs:
                failures.append((gen, lhs.subtract(rhs)))
        return failures


def build_ginzburg_functor(iqp, n):
    """The dg morphism from the derived preprojective algebra of the frozen
    subquiver to the relative Ginzburg algebra: a -> a, ã -> -(cyclic
    derivative at a), r_i -> the unfrozen commutator sum at i.  The chain-map
    property is verified before returning."""
    iq = iqp.ice_quiver
    pi2 = build_pi2(iq, n)
    gamma = build_relative_ginzburg(iqp, n)
    w = _retruncated_potential(iqp, n)
    dual_of = gamma.roles["dual_of"]
    assignment = {}
    for aid in sorted(iq.frozen_arrows):
        assignment[aid] = arrow_series(gamma.quiver, aid, n)
        derivative = cyclic_derivative(w, aid)
        assignment[pi2.roles["tilde_of"][aid]] = PathSeries(
            gamma.quiver, dict(derivative.coefficients), n).scale(-1)
    for v in sorted(iq.frozen_vertices):
        coeffs = {}
        for a in iq.unfrozen_arrows():
            if a.target == v:
                coeffs[word_path((a.id, dual_of[a.id]))] = Fraction(1)
            if a.source == v:
                p = word_path((dual_of[a.id], a.id))
                coeffs[p] = coeffs.get(p, 0) - 1
        assignment[pi2.roles["loop_of"][v]] = PathSeries(gamma.quiver, coeffs, n)
    morphism = DgMorphism(pi2, gamma, {v: v for v in iq.frozen_vertices}, assignment)
    failures = morphism.chain_map_failures()
    if failures:
        gen, residue = failures[0]
        raise IQPError(f"chain-map check failed at generator {gen!r}: {residue!r}")
    return morphism


def _degree_zero_quotient_dims(dga, n):
    """Dimensions of H^0: paths of degree-0 generators modulo the image of the
    degree -1 part under d (computed through the dg differential, then closed
    under multiplication by degree-0 arrows)."""
    gq = dga.graded_quiver
    zero_arrows = [a for a in gq.arrows if a.degree == 0]
    q0 = Quiver(gq.vertices, [(a.id, a.source, a.target) for a in zero_arrows])
    paths_by_degree = enumerate_paths(q0, n)
    col_index = {}
    for group in paths_by_degree:
        for p in group:
            col_index[p] = len(col_index)
    seeds = []
    for a in gq.arrows:
        if a.degree != -1:
            continue
        image = dga.d_series(arrow_series(dga.quiver, a.id, n))
        for piece in split_by_endpoints(dga.quiver, image):
            vec = {}
            for p, c in piece.items():
                col = col_index.get(p)
                if col is None:
                    raise IQPError(
                        f"d({a.id}) leaves the degree-0 part of the algebra")
                vec[col] = vec.get(col, 0) + c
            vec = {c: v for c, v in vec.items() if v != 0}
            if vec:
                seeds.append(vec)
    ech = closure_echelon(q0, seeds, n, paths_by_degree, col_index)
    pivots = ech.pivots()
    return [sum(1 for p in group if col_index[p] not in pivots)
            for group in paths_by_degree]


def h0_dims(dga, n):
    """Per-degree dimensions of the 0-th homology of a dg quiver algebra whose
    generators live in degrees <= 0."""
    return _degree_zero_quotient_dims(dga, n)


def jacobian_quotient(iqp, n):
    """The truncated relative Jacobian algebra: the path algebra modulo cyclic
    derivatives of the potential at the unfrozen arrows."""
    iq = iqp.ice_quiver
    w = _retruncated_potential(iqp, n)
    generators = [cyclic_derivative(w, a.id) for a in iq.unfrozen_arrows()]
    return truncated_quotient(iq, generators, n)


def boundary_h0_dims(iqp, n):
    """Per-degree dimensions of the boundary algebra at H^0: the corner of the
    truncated Jacobian algebra at the frozen vertices."""
    tq = jacobian_quotient(iqp, n)
    return corner_dims(tq, iqp.ice_quiver.frozen_vertices)


def presentation(dga):
    """Generators, degrees, and differentials as a JSON-friendly dict."""
    gens = []
    for a in dga.graded_quiver.arrows:
        d = dga.differential[a.id]
        terms = []
        for p, c in d.items():
            terms.append({"coeff": str(c), "path": list(p.arrows)})
        gens.append({"id": a.id, "source": a.source, "target": a.target,
                     "degree": a.degree, "differential": terms})
    return {"vertices": list(dga.graded_quiver.vertices),
            "truncation": dga.truncation,
            "generators": gens}


def presentation_text(dga):
    """Human-readable presentation, one generator per line."""
    from .series import format_word
    lines = []
    for a in dga.graded_quiver.arrows:
        d = dga.differential[a.id]
        if d.is_zero():
            rhs = "0"
        else:
            parts = []
            for p, c in d.items():
                text = format_word(p.arrows) if p.arrows else f"e_{p.at}"
                parts.append(text if c == 1 else f"({c})*{text}")
            rhs = " + ".join(parts)
        lines.append(f"{a.id}: {a.source} -> {a.target}  degree {a.degree}  "
                     f"d = {rhs}")
    return "\n".join(lines) + "\n"
