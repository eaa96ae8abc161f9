"""Mutation of ice quivers with potential.

Mutation at a vertex v (unfrozen, or a frozen source/sink) is the composite of
pre-mutation -- add composite arrows [ba] for every path a, b through v,
reverse the arrows at v, rewrite the potential and add the terms [ba]a*b* --
and reduction, which splits off the trivial 2-cycle part of the potential.
Reduction deletes unfrozen 2-cycles outright; for half-frozen 2-cycles it
deletes the frozen arrow and freezes its unfrozen partner.
"""

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import IQPError, NotMutableError, ReductionError
from .quiver import Arrow, IceQuiver, Quiver, check_mutable
from .series import (ArrowSubstitution, PathSeries, Potential,
                     apply_substitution, arrow_series, format_word, potential,
                     word_path)


@dataclass(frozen=True)
class IQP:
    """An ice quiver together with a potential on it."""

    ice_quiver: IceQuiver
    potential: Potential

    def __post_init__(self):
        q = self.ice_quiver.quiver
        if self.potential.quiver != q:
            raise IQPError("potential lives on a different quiver")
        for word in self.potential.terms:
            for a in word:
                if not q.has_arrow(a):
                    raise IQPError(f"potential uses unknown arrow {a!r}")
            for j in range(len(word)):
                nxt = word[(j + 1) % len(word)]
                if q.arrow(word[j]).source != q.arrow(nxt).target:
                    raise IQPError(
                        f"potential term {format_word(word)!r} is not a cycle")

    @property
    def truncation(self):
        return self.potential.truncation


@dataclass
class ReductionTrace:
    """What reduce did: enough to replay it.

    Applying the substitutions to the (irredundant part of the) input
    potential, then dropping one copy of each removed 2-cycle word, reproduces
    the output potential.
    """

    removed_2cycles: list = field(default_factory=list)       # (unfrozen, unfrozen)
    frozen_replacements: list = field(default_factory=list)   # (deleted frozen b, newly frozen a)
    substitutions: list = field(default_factory=list)         # ArrowSubstitution, in order


def split_irredundant(w, iq):
    """Split a potential as (irredundant part, all-frozen part)."""
    irr, froz = {}, {}
    for word, c in w.terms.items():
        if all(iq.is_frozen_arrow(a) for a in word):
            froz[word] = c
        else:
            irr[word] = c
    return (Potential(w.quiver, irr, w.truncation),
            Potential(w.quiver, froz, w.truncation))


def _fresh_id(base, taken):
    name = base
    k = 1
    while name in taken:
        k += 1
        name = f"{base}#{k}"
    taken.add(name)
    return name


def _require_mutable(iq, v):
    status = check_mutable(iq, v)
    if not status.mutable:
        raise NotMutableError(v, status)
    return status


def _premutation_shape(iq, v):
    """Steps (1) and (2) of mutation at v: composites and reversals, no
    cancellation.  Returns (ice quiver, composite ids, star ids) where
    composite ids maps (incoming id, outgoing id) -> composite arrow id and
    star ids maps old id -> reversed id."""
    q = iq.quiver
    incoming = [a for a in q.arrows_into(v)]
    outgoing = [a for a in q.arrows_from(v)]
    taken = {a.id for a in q.arrows}
    arrows = []
    frozen = set()
    for a in q.arrows:
        if v in (a.source, a.target):
            continue
        arrows.append(a)
        if iq.is_frozen_arrow(a.id):
            frozen.add(a.id)
    composite = {}
    for a in sorted(incoming, key=lambda x: x.id):
        for b in sorted(outgoing, key=lambda x: x.id):
            cid = _fresh_id(f"[{b.id}{a.id}]", taken)
            composite[(a.id, b.id)] = cid
            arrows.append(Arrow(cid, a.source, b.target))
    star = {}
    for a in sorted(incoming + outgoing, key=lambda x: x.id):
        sid = _fresh_id(a.id + "*", taken)
        star[a.id] = sid
        arrows.append(Arrow(sid, a.target, a.source))
        if iq.is_frozen_arrow(a.id):
            frozen.add(sid)
    quiver = Quiver(q.vertices, arrows)
    return IceQuiver(quiver, iq.frozen_vertices, frozen), composite, star


def _cancel_two_cycles(iq):
    """Steps (3) and (4): delete a maximal disjoint set of unfrozen 2-cycles,
    then replace a maximal disjoint set of half-frozen 2-cycles by freezing
    the unfrozen arrow and deleting the frozen one.  Pairs are scanned in
    lexicographic (min id, max id) order.  Returns (ice quiver, removed pairs,
    frozen replacements)."""
    q = iq.quiver
    pairs = q.two_cycles()
    gone = set()
    removed = []
    replaced = []
    for a_id, b_id in pairs:
        if a_id in gone or b_id in gone:
            continue
        if not iq.is_frozen_arrow(a_id) and not iq.is_frozen_arrow(b_id):
            gone.update((a_id, b_id))
            removed.append((a_id, b_id))
    newly_frozen = set()
    for a_id, b_id in pairs:
        if a_id in gone or b_id in gone:
            continue
        fa, fb = iq.is_frozen_arrow(a_id), iq.is_frozen_arrow(b_id)
        if fa == fb:
            continue
        frozen_arrow, unfrozen_arrow = (a_id, b_id) if fa else (b_id, a_id)
        gone.add(frozen_arrow)
        newly_frozen.add(unfrozen_arrow)
        replaced.append((frozen_arrow, unfrozen_arrow))
    arrows = [a for a in q.arrows if a.id not in gone]
    frozen = (set(iq.frozen_arrows) - gone) | newly_frozen
    quiver = Quiver(q.vertices, arrows)
    return IceQuiver(quiver, iq.frozen_vertices, frozen), removed, replaced


def combinatorial_mutate(iq, v):
    """Mutation of the ice quiver alone: composites, reversal, cancellation."""
    _require_mutable(iq, v)
    shape, _, _ = _premutation_shape(iq, v)
    out, _, _ = _cancel_two_cycles(shape)
    return out


def _rotate_off_vertex(quiver, word, v):
    """A rotation of the cyclic word whose underlying path does not start at v
    (possible because no term has a loop at v)."""
    for k in range(len(word)):
        rot = word[k:] + word[:k]
        if quiver.arrow(rot[-1]).source != v:
            return rot
    raise IQPError(f"cannot rotate {format_word(word)!r} off vertex {v!r}")


def premutate(iqp, v):
    """Pre-mutation at v: the mutated quiver shape (no cancellation) with the
    rewritten potential plus the terms [ba]a*b*."""
    iq = iqp.ice_quiver
    _require_mutable(iq, v)
    n = iqp.truncation
    q = iq.quiver
    w_irr, w_frozen = split_irredundant(iqp.potential, iq)
    shape, composite, star = _premutation_shape(iq, v)
    terms = []
    for word, c in w_irr.items():
        rot = _rotate_off_vertex(q, word, v)
        out = []
        j = 0
        while j < len(rot):
            if j + 1 < len(rot) and q.arrow(rot[j]).source == v:
                out.append(composite[(rot[j + 1], rot[j])])
                j += 2
            else:
                assert v not in (q.arrow(rot[j]).source, q.arrow(rot[j]).target), \
                    f"unpaired arrow at {v!r} in {format_word(rot)!r}"
                out.append(rot[j])
                j += 1
        terms.append((c, tuple(out)))
    for a in sorted(a.id for a in q.arrows_into(v)):
        for b in sorted(b.id for b in q.arrows_from(v)):
            terms.append((Fraction(1), (composite[(a, b)], star[a], star[b])))
    for word, c in w_frozen.items():
        terms.append((c, word))
    return IQP(shape, potential(shape.quiver, terms, n))


def _remove_term(w, word):
    terms = dict(w.terms)
    del terms[word]
    return Potential(w.quiver, terms, w.truncation)


def _clean_occurrences(w, word, alpha, beta, clean_alpha, trace):
    """Substitute away every occurrence of beta (and, when clean_alpha, of
    alpha) outside the 2-cycle term itself.

    For each offending cyclic term, one rotation putting an occurrence of beta
    last (resp. alpha first) yields a single correction summand; the induced
    substitution on the unfrozen arrow cancels the offender exactly.  Each
    pass pushes the smallest offending degree strictly up, so within the
    truncation degree this terminates.
    """
    q = w.quiver
    n = w.truncation

    def offenders(arrow):
        return [(t, c) for t, c in w.terms.items() if t != word and arrow in t]

    def correction_sub(keep, kill):
        # One rotation per offending cyclic term (not the cyclic derivative:
        # terms containing `kill` several times would make that oscillate).
        # t ~ rest.kill ~ kill.rest cyclically, so substituting
        # keep -> keep - c.rest into the term keep.kill cancels c.t exactly.
        correction = {}
        for t, c in offenders(kill):
            j = t.index(kill)
            rest = t[j + 1:] + t[:j]
            p = word_path(rest)
            correction[p] = correction.get(p, 0) - c
        value = arrow_series(q, keep, n).add(PathSeries(q, correction, n))
        return ArrowSubstitution(q, {keep: value}, n)

    for _ in range(n + 2):
        dirty = bool(offenders(beta)) or (clean_alpha and bool(offenders(alpha)))
        if not dirty:
            return w
        if offenders(beta):
            sub = correction_sub(alpha, beta)
            w = apply_substitution(sub, w)
            trace.substitutions.append(sub)
        if clean_alpha and offenders(alpha):
            sub = correction_sub(beta, alpha)
            w = apply_substitution(sub, w)
            trace.substitutions.append(sub)
    left = offenders(beta) + (offenders(alpha) if clean_alpha else [])
    degrees = sorted(len(t) for t, _ in left)
    raise ReductionError(
        f"reduction did not separate the 2-cycle {format_word(word)!r} within "
        f"truncation degree {n}; offending degree {degrees[0]}")


def _normalize_quadratic(w, iq, trace):
    """Linear changes of unfrozen arrows making the quadratic part a disjoint
    union of scaled 2-cycles.

    Parallel arrows pairing with a common partner are separated by Gaussian
    elimination: each round picks a pivot 2-cycle x.y and substitutes
    y -> y - sum c_i/c0 . y_i (killing the other 2-cycles through x), then
    x -> x - sum d_j/c0 . x_j (killing those through y, which by then adds
    nothing new).  A substituted arrow must be unfrozen, so the elimination
    fails exactly when parallel frozen arrows pair with the same partners.
    """
    q = w.quiver
    n = w.truncation
    for _ in range(len(q.arrows) + 1):
        quad = {t: c for t, c in w.terms.items() if len(t) == 2}
        hits = {}
        for t in quad:
            for a in set(t):
                hits[a] = hits.get(a, 0) + 1
        offending = sorted(t for t in quad if hits[t[0]] > 1 or hits[t[1]] > 1)
        if not offending:
            return w
        pivot = None
        for t in offending:
            for x, y in ((t[0], t[1]), (t[1], t[0])):
                if ((hits[x] == 1 or not iq.is_frozen_arrow(y))
                        and (hits[y] == 1 or not iq.is_frozen_arrow(x))):
                    pivot = (t, x, y)
                    break
            if pivot is not None:
                break
        if pivot is None:
            raise ReductionError(
                "quadratic part cannot be made a disjoint union of 2-cycles: "
                f"separating {format_word(offending[0])!r} from its overlaps "
                "would substitute a frozen arrow")
        t0, x, y = pivot
        c0 = quad[t0]
        for kept, shared in ((y, x), (x, y)):
            value = arrow_series(q, kept, n)
            for t, c in sorted(quad.items()):
                if t != t0 and shared in t:
                    other = t[0] if t[1] == shared else t[1]
                    value = value.add(arrow_series(q, other, n).scale(-c / c0))
            if value != arrow_series(q, kept, n):
                sub = ArrowSubstitution(q, {kept: value}, n)
                w = apply_substitution(sub, w)
                trace.substitutions.append(sub)
                quad = {t: c for t, c in w.terms.items() if len(t) == 2}
    raise ReductionError("quadratic part did not stabilize under elimination")


def reduce(iqp):
    """Split off the trivial part of the potential.

    The quadratic part is first made a disjoint union of 2-cycles by linear
    substitutions among parallel unfrozen arrows.  Unfrozen 2-cycles are then
    substituted away and both arrows deleted; for half-frozen 2-cycles the
    frozen arrow is deleted and the unfrozen partner frozen, keeping the
    higher-order terms it appears in.  Returns the reduced IQP and a
    ReductionTrace.
    """
    iq = iqp.ice_quiver
    q = iq.quiver
    n = iqp.truncation
    trace = ReductionTrace()
    w, w_frozen = split_irredundant(iqp.potential, iq)
    if any(len(t) == 2 for t in w.terms):
        w = _normalize_quadratic(w, iq, trace)
    quadratic = sorted(t for t in w.terms if len(t) == 2)
    if not quadratic:
        if not trace.substitutions:
            return iqp, trace
        terms = [(c, t) for t, c in w.terms.items()] + \
                [(c, t) for t, c in w_frozen.terms.items()]
        return IQP(iq, potential(q, terms, n)), trace
    seen = set()
    for t in quadratic:
        assert not (seen & set(t)), f"overlap left at {format_word(t)!r}"
        seen.update(t)
    pairs = []  # (word, alpha unfrozen, beta, unfrozen?)
    for t in quadratic:
        unfrozen = [a for a in t if not iq.is_frozen_arrow(a)]
        if len(unfrozen) == 2:
            alpha = min(t)
            beta = t[0] if t[1] == alpha else t[1]
            pairs.append((t, alpha, beta, True))
        else:
            # exactly one unfrozen arrow: a half-frozen 2-cycle
            alpha = unfrozen[0]
            beta = t[0] if t[1] == alpha else t[1]
            pairs.append((t, alpha, beta, False))
    pairs.sort(key=lambda p: (not p[3], p[0]))  # unfrozen 2-cycles first
    removed = set()
    newly_frozen = set()
    for word, alpha, beta, is_unfrozen in pairs:
        c = w.terms[word]
        if c != 1:
            sub = ArrowSubstitution(
                q, {alpha: arrow_series(q, alpha, n).scale(Fraction(1) / c)}, n)
            w = apply_substitution(sub, w)
            trace.substitutions.append(sub)
        w = _clean_occurrences(w, word, alpha, beta, is_unfrozen, trace)
        w = _remove_term(w, word)
        if is_unfrozen:
            removed.update((alpha, beta))
            trace.removed_2cycles.append((alpha, beta))
        else:
            removed.add(beta)
            newly_frozen.add(alpha)
            trace.frozen_replacements.append((beta, alpha))
    for t in w_frozen.terms:
        hit = removed & set(t)
        if hit:
            raise ReductionError(
                f"the all-frozen part of the potential uses the deleted frozen "
                f"arrow {sorted(hit)[0]!r}")
    for t in w.terms:
        assert not (removed & set(t)), f"leftover occurrence in {format_word(t)!r}"
    arrows = [a for a in q.arrows if a.id not in removed]
    frozen = (set(iq.frozen_arrows) - removed) | newly_frozen
    new_iq = IceQuiver(Quiver(q.vertices, arrows), iq.frozen_vertices, frozen)
    terms = [(c, t) for t, c in w.terms.items()] + \
            [(c, t) for t, c in w_frozen.terms.items()]
    return IQP(new_iq, potential(new_iq.quiver, terms, n)), trace


def mutate_with_trace(iqp, v):
    """Pre-mutation followed by reduction; also returns the reduction trace."""
    return reduce(premutate(iqp, v))


def mutate(iqp, v):
    """Mutation at v: the reduction of the pre-mutation."""
    return mutate_with_trace(iqp, v)[0]
