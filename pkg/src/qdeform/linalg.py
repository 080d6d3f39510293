"""Sparse exact linear algebra over Q(q) (or any field of Scalars).

Vectors are dicts ``column -> coefficient`` with hashable, totally ordered
column keys.  :class:`Echelon` grows a row-echelon basis incrementally, which
is all the rank computations need; :func:`nullspace` does a full reduction.
"""

from __future__ import annotations

from typing import Hashable, Iterable

from .scalars import ONE


class Echelon:
    """Incremental row echelon form; pivot = smallest column of each row."""

    def __init__(self, order=None):
        self.rows: dict[Hashable, dict] = {}
        self.key = order or (lambda c: c)

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self) -> int:
        return len(self.rows)

    def reduce(self, vec: dict) -> dict:
        v = {c: x for c, x in vec.items() if x}
        key = self.key
        done: dict = {}
        while v:
            col = min(v, key=key)
            x = v[col]
            row = self.rows.get(col)
            if row is None:
                done[col] = v.pop(col)
                continue
            for c, y in row.items():
                nv = v.get(c)
                nv = -(x * y) if nv is None else nv - x * y
                if nv:
                    v[c] = nv
                else:
                    v.pop(c, None)
        return done

    def add(self, vec: dict) -> bool:
        """Insert vec; True if it was independent of the rows so far."""
        r = self.reduce(vec)
        if not r:
            return False
        col = min(r, key=self.key)
        inv = ONE / r[col]
        self.rows[col] = {c: x * inv for c, x in r.items()}
        return True

    def contains(self, vec: dict) -> bool:
        return not self.reduce(vec)


def rank(vectors: Iterable[dict]) -> int:
    e = Echelon()
    for v in vectors:
        e.add(v)
    return e.rank


def nullspace(columns: list[dict], nvars: int) -> list[list]:
    """Basis of {c : sum_k c_k columns[k] = 0}.

    ``columns[k]`` is the image vector of unknown k (a dict over equation
    keys).  Returns coefficient lists of length ``nvars``.
    """
    # row-reduce the transpose: equations as rows over unknowns
    eqs: dict = {}
    for k, col in enumerate(columns):
        for key, x in col.items():
            if x:
                eqs.setdefault(key, {})[k] = x
    pivots: dict[int, dict] = {}
    for row in eqs.values():
        r = dict(row)
        for pc, prow in pivots.items():
            x = r.get(pc)
            if x:
                for c, y in prow.items():
                    nv = r.get(c)
                    nv = -(x * y) if nv is None else nv - x * y
                    if nv:
                        r[c] = nv
                    else:
                        r.pop(c, None)
        if not r:
            continue
        pc = min(r)
        inv = ONE / r[pc]
        r = {c: x * inv for c, x in r.items()}
        # keep fully reduced: eliminate pc from the other pivot rows
        for oc, orow in pivots.items():
            x = orow.get(pc)
            if x:
                for c, y in r.items():
                    nv = orow.get(c)
                    nv = -(x * y) if nv is None else nv - x * y
                    if nv:
                        orow[c] = nv
                    else:
                        orow.pop(c, None)
        pivots[pc] = r
    free = [k for k in range(nvars) if k not in pivots]
    basis = []
    for f in free:
        vec = [0] * nvars
        vec[f] = ONE
        for pc, prow in pivots.items():
            x = prow.get(f)
            if x:
                vec[pc] = -x
        basis.append(vec)
    return basis
