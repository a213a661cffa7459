"""Exact sparse row echelon forms over Q.

Rows are dicts ``column -> Fraction``. Columns are integers and *smaller
means more leading*: the pivot of a row is its smallest column. Callers map
their own monomial/position orders onto integers accordingly.
"""
from __future__ import annotations

import heapq
from fractions import Fraction
from typing import Dict, Iterable, List, Sequence

Row = Dict[int, Fraction]


class Echelon:
    """Semi-reduced row echelon basis of a growing subspace."""

    def __init__(self):
        self.pivots: Dict[int, Row] = {}

    def __len__(self):
        return len(self.pivots)

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, row: Row) -> Row:
        """Remainder of ``row`` with every pivot column eliminated."""
        r = {c: Fraction(v) for c, v in row.items() if v}
        pivots = self.pivots
        heap = [c for c in r if c in pivots]
        heapq.heapify(heap)
        while heap:
            c = heapq.heappop(heap)
            v = r.get(c)
            if not v:
                continue
            for cc, pv in pivots[c].items():
                nv = r.get(cc, 0) - v * pv
                if nv:
                    if cc not in r and cc in pivots:
                        heapq.heappush(heap, cc)
                    r[cc] = nv
                else:
                    r.pop(cc, None)
        return r

    def add(self, row: Row) -> bool:
        """Insert ``row``; return True if it enlarged the span."""
        r = self.reduce(row)
        if not r:
            return False
        c = min(r)
        inv = 1 / r[c]
        self.pivots[c] = {k: v * inv for k, v in r.items()}
        return True

    def contains(self, row: Row) -> bool:
        return not self.reduce(row)

    def rows(self) -> List[Row]:
        return [self.pivots[c] for c in sorted(self.pivots)]


def rank(rows: Iterable[Row]) -> int:
    e = Echelon()
    for r in rows:
        e.add(r)
    return e.rank


def nullspace(vectors: Sequence[Row]) -> List[Dict[int, Fraction]]:
    """Basis of {c : sum_k c_k vectors[k] = 0}, as dicts k -> c_k."""
    tag = 1 + max((max(v) for v in vectors if v), default=-1)
    e = Echelon()
    out = []
    for k, v in enumerate(vectors):
        row = dict(v)
        row[tag + k] = Fraction(1)
        r = e.reduce(row)
        if min(r) >= tag:
            out.append({c - tag: x for c, x in r.items()})
        else:
            c = min(r)
            inv = 1 / r[c]
            e.pivots[c] = {kk: vv * inv for kk, vv in r.items()}
    return out


def kernel_dim(rows: Sequence[Row], ncols: int) -> int:
    """Dimension of {v in Q^ncols : row . v = 0 for all rows}."""
    return ncols - rank(rows)
