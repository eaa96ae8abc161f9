"""Seeded random ice quivers with potential, sized so that truncated
computations stay cheap.  Used by property tests and by the `corpus` CLI
subcommand; all randomness flows through one random.Random instance."""

import random
from fractions import Fraction

from .mutation import IQP, _premutation_shape
from .quiver import IceQuiver, Quiver, check_mutable
from .series import potential

COEFFICIENTS = (Fraction(1), Fraction(-1), Fraction(2), Fraction(-1, 2))


def count_paths(quiver, n):
    """Number of paths of length <= n (including the lazy ones)."""
    verts = list(quiver.vertices)
    index = {v: i for i, v in enumerate(verts)}
    counts = [[0] * len(verts) for _ in verts]   # counts[i][j]: paths j -> i
    for i in range(len(verts)):
        counts[i][i] = 1
    total = len(verts)
    for _ in range(n):
        nxt = [[0] * len(verts) for _ in verts]
        for a in quiver.arrows:
            i, j = index[a.target], index[a.source]
            for k in range(len(verts)):
                nxt[i][k] += counts[j][k]
        counts = nxt
        total += sum(map(sum, counts))
    return total


def random_ice_quiver(rng, max_vertices=6, max_arrows=10, allow_loops=False):
    nv = rng.randint(2, max_vertices)
    vertices = [str(i + 1) for i in range(nv)]
    frozen_vertices = [v for v in vertices if rng.random() < 0.4]
    arrows = []
    frozen_arrows = []
    na = rng.randint(nv - 1, max_arrows)
    for k in range(na):
        source = rng.choice(vertices)
        target = rng.choice(vertices)
        if source == target and not allow_loops:
            continue
        aid = "abcdefghijklmnopqrst"[k]
        arrows.append((aid, source, target))
        if (source in frozen_vertices and target in frozen_vertices
                and rng.random() < 0.5):
            frozen_arrows.append(aid)
    quiver = Quiver(vertices, arrows)
    return IceQuiver(quiver, frozen_vertices, frozen_arrows)


def _random_cycle(rng, quiver, length):
    """A composable cyclic word of the given length, in written order, or
    None when the walk fails to close up."""
    arrows = list(quiver.arrows)
    if not arrows:
        return None
    first = rng.choice(arrows)
    chain = [first]                      # in application order
    for _ in range(length - 1):
        options = quiver.arrows_from(chain[-1].target)
        if not options:
            return None
        chain.append(rng.choice(options))
    if chain[-1].target != first.source:
        return None
    return tuple(a.id for a in reversed(chain))


def random_potential(rng, iq, n, max_terms=3, lengths=(3, 4, 5)):
    terms = []
    for _ in range(rng.randint(0, max_terms)):
        for _attempt in range(20):
            word = _random_cycle(rng, iq.quiver, rng.choice(lengths))
            if word is not None:
                terms.append((rng.choice(COEFFICIENTS), word))
                break
    return potential(iq.quiver, terms, n)


def random_iqp(rng, n=10, max_vertices=6, max_arrows=10, max_terms=3,
               budget=4000):
    """A random reduced IQP whose path count through degree n stays within
    the budget.  Potential terms have length 3..5, so no reduction is ever
    needed; frozen arrows only ever join frozen vertices."""
    for _attempt in range(400):
        iq = random_ice_quiver(rng, max_vertices, max_arrows)
        if count_paths(iq.quiver, n) > budget:
            continue
        w = random_potential(rng, iq, n, max_terms)
        return IQP(iq, w)
    raise RuntimeError("could not sample an IQP within the budget")


def mutable_vertices(iqp, n=10, budget=4000):
    """Unfrozen vertices where mutation is defined and the premutation shape
    stays within the path budget."""
    iq = iqp.ice_quiver
    out = []
    for v in iq.unfrozen_vertices():
        if check_mutable(iq, v).kind != "UnfrozenMutable":
            continue
        shape, _, _ = _premutation_shape(iq, v)
        if count_paths(shape.quiver, n) <= budget:
            out.append(v)
    return out


def random_mutable_iqp(rng, n=10, **kwargs):
    """A random reduced IQP together with an unfrozen vertex at which
    mutation is defined (and affordable)."""
    for _attempt in range(400):
        iqp = random_iqp(rng, n=n, **kwargs)
        candidates = mutable_vertices(iqp, n=n)
        if candidates:
            return iqp, rng.choice(candidates)
    raise RuntimeError("could not sample a mutable IQP")


def corpus(seed, count, n=10, **kwargs):
    """A deterministic list of (IQP, mutable vertex) pairs."""
    rng = random.Random(seed)
    return [random_mutable_iqp(rng, n=n, **kwargs) for _ in range(count)]


def small_jacobian_corpus(seed, count, n=8, max_total=60):
    """IQPs whose truncated Jacobian algebra is small enough for bimodule
    complex computations (the term bases are quadratic in its size)."""
    from .dg import jacobian_quotient
    rng = random.Random(seed)
    out = []
    for _attempt in range(count * 100):
        if len(out) == count:
            break
        iqp = random_iqp(rng, n=n, max_vertices=4, max_arrows=6, budget=1500)
        q = jacobian_quotient(iqp, n)
        if q.total <= max_total:
            out.append(iqp)
    if len(out) < count:
        raise RuntimeError("could not fill the small-Jacobian corpus")
    return out
