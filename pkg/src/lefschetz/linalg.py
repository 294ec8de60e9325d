"""Exact linear algebra over the rationals.

Two engines live here.  ``rank``/``determinant`` use Bareiss fraction-free
elimination on an integer-scaled copy of the matrix.  ``EchelonBasis`` is a
sparse incremental row-echelon basis over ``Fraction`` that also records how
each basis vector was built from the inputs; kernels, solves and span
saturation are all expressed through it.
"""

from __future__ import annotations

from fractions import Fraction
from math import lcm
from typing import Hashable, Iterable, Mapping, Sequence

SparseVector = Mapping[Hashable, Fraction]


def _integer_rows(rows: Sequence[Sequence]) -> list[list[int]]:
    out = []
    for row in rows:
        row = [Fraction(c) for c in row]
        den = lcm(*(c.denominator for c in row)) if row else 1
        out.append([int(c * den) for c in row])
    return out


def rank(rows: Sequence[Sequence]) -> int:
    """Rank of a dense rational matrix by fraction-free (Bareiss) elimination."""
    m = _integer_rows(rows)
    if not m or not m[0]:
        return 0
    n_rows, n_cols = len(m), len(m[0])
    r = 0
    prev = 1
    for c in range(n_cols):
        pivot = next((i for i in range(r, n_rows) if m[i][c]), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        p = m[r][c]
        for i in range(r + 1, n_rows):
            mi = m[i]
            f = mi[c]
            if f == 0:
                # keep the Bareiss invariant: every row below is scaled by p/prev
                m[i] = [(p * v) // prev for v in mi]
                continue
            mr = m[r]
            m[i] = [(p * mi[j] - f * mr[j]) // prev for j in range(n_cols)]
        prev = p
        r += 1
        if r == n_rows:
            break
    return r


def determinant(rows: Sequence[Sequence]) -> Fraction:
    """Determinant of a square rational matrix (Bareiss)."""
    size = len(rows)
    if size == 0:
        return Fraction(1)
    if any(len(r) != size for r in rows):
        raise ValueError("determinant of a non-square matrix")
    frac_rows = [[Fraction(c) for c in row] for row in rows]
    scale = Fraction(1)
    m = []
    for row in frac_rows:
        den = lcm(*(c.denominator for c in row))
        scale *= den
        m.append([int(c * den) for c in row])
    sign = 1
    prev = 1
    for c in range(size - 1):
        pivot = next((i for i in range(c, size) if m[i][c]), None)
        if pivot is None:
            return Fraction(0)
        if pivot != c:
            m[c], m[pivot] = m[pivot], m[c]
            sign = -sign
        p = m[c][c]
        for i in range(c + 1, size):
            for j in range(c + 1, size):
                m[i][j] = (p * m[i][j] - m[i][c] * m[c][j]) // prev
            m[i][c] = 0
        prev = p
    return Fraction(sign * m[-1][-1]) / scale


class EchelonBasis:
    """Incrementally built echelon basis of a subspace of a sparse coordinate space.

    Keys of the sparse vectors must be mutually comparable; the smallest key of
    each stored row is its pivot.  When ``track`` is set, every stored row keeps
    its expression as a combination of the inserted vectors (by insertion label).
    """

    def __init__(self, track: bool = False):
        self.rows: dict = {}
        self.combos: dict = {}
        self.track = track
        self.labels: list = []

    def __len__(self):
        return len(self.rows)

    def reduce(self, v: SparseVector, combo: dict | None = None):
        """Reduce v against the basis; returns (residual, combo) as dicts."""
        vec = {k: Fraction(c) for k, c in v.items() if c}
        combo = dict(combo) if combo is not None else {}
        done: set = set()
        while True:
            live = [k for k in vec if k not in done]
            if not live:
                return vec, combo
            k = min(live)
            row = self.rows.get(k)
            if row is None:
                done.add(k)
                continue
            f = vec[k]
            for kk, c in row.items():
                nv = vec.get(kk, Fraction(0)) - f * c
                if nv:
                    vec[kk] = nv
                else:
                    vec.pop(kk, None)
            if self.track:
                for lab, c in self.combos[k].items():
                    nv = combo.get(lab, Fraction(0)) - f * c
                    if nv:
                        combo[lab] = nv
                    else:
                        combo.pop(lab, None)

    def add(self, v: SparseVector, label=None) -> bool:
        """Insert v; returns True if it enlarged the span."""
        if self.track:
            self.labels.append(label)
            start = {label: Fraction(1)}
        else:
            start = None
        residual, combo = self.reduce(v, start)
        if not residual:
            if self.track:
                self._last_dependency = combo
            return False
        pivot = min(residual)
        p = residual[pivot]
        self.rows[pivot] = {k: c / p for k, c in residual.items()}
        if self.track:
            self.combos[pivot] = {lab: c / p for lab, c in combo.items()}
        return True

    def contains(self, v: SparseVector) -> bool:
        residual, _ = self.reduce(v)
        return not residual


def kernel(columns: Sequence[SparseVector]) -> list[dict[int, Fraction]]:
    """Basis of {x : sum_j x_j * columns[j] = 0}, as sparse dicts over column indices."""
    eb = EchelonBasis(track=True)
    out = []
    for j, col in enumerate(columns):
        if not eb.add(col, label=j):
            out.append(dict(eb._last_dependency))
    return out


def solve(columns: Sequence[SparseVector], rhs: SparseVector) -> dict[int, Fraction] | None:
    """One solution x of sum_j x_j * columns[j] = rhs, or None if inconsistent."""
    eb = EchelonBasis(track=True)
    for j, col in enumerate(columns):
        eb.add(col, label=j)
    residual, combo = eb.reduce(rhs, {})
    if residual:
        return None
    # reduce(rhs) subtracted basis rows: rhs - sum(...) = 0, so x = -combo
    return {j: -c for j, c in combo.items() if c}


def span_rank(vectors: Iterable[SparseVector]) -> int:
    eb = EchelonBasis()
    for v in vectors:
        eb.add(v)
    return len(eb)


def dense_columns(rows: Sequence[Sequence]) -> list[dict[int, Fraction]]:
    """Columns of a dense matrix as sparse dicts keyed by row index."""
    if not rows:
        return []
    return [{i: Fraction(r[j]) for i, r in enumerate(rows) if r[j]} for j in range(len(rows[0]))]
