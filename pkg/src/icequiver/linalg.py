"""Sparse exact row reduction over the rationals.

Vectors are dicts mapping a column key to a nonzero Fraction.  Column keys
must be totally ordered (ints here); the pivot of a stored row is its minimal
column and rows are normalized so the pivot coefficient is 1.
"""

from fractions import Fraction


class Echelon:
    """A row space kept in (forward) echelon form, one row per pivot column."""

    def __init__(self):
        self.rows = {}  # pivot column -> row dict

    def reduce(self, vec):
        """Residue of vec modulo the stored row space.

        Repeatedly eliminates the smallest pivot column present; stored rows
        only contain columns >= their pivot, so this terminates.  The residue
        has no pivot columns left.
        """
        v = {c: Fraction(x) for c, x in vec.items() if x != 0}
        while True:
            hit = None
            for col in v:
                if col in self.rows and (hit is None or col < hit):
                    hit = col
            if hit is None:
                return v
            coef = v[hit]
            for col, val in self.rows[hit].items():
                nv = v.get(col, 0) - coef * val
                if nv == 0:
                    v.pop(col, None)
                else:
                    v[col] = nv

    def insert(self, vec):
        """Reduce vec and, if independent, store the normalized residue as a
        new pivot row.  Returns the stored row, or None if vec was dependent."""
        r = self.reduce(vec)
        if not r:
            return None
        piv = min(r)
        inv = Fraction(1) / r[piv]
        row = {c: x * inv for c, x in r.items()}
        self.rows[piv] = row
        return row

    @property
    def rank(self):
        return len(self.rows)

    def pivots(self):
        return set(self.rows)


def rank_of(vectors):
    """Rank of the span of an iterable of sparse vectors."""
    ech = Echelon()
    for v in vectors:
        ech.insert(v)
    return ech.rank
