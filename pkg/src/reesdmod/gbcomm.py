"""Commutative Groebner bases over Q, plus the generic Buchberger core.

The core works on raw term dicts keyed by ``(component, exponents)`` so the
same code handles ideals (component 0 only), submodules of free modules, and
the Weyl algebra (where only the monomial left-multiplication changes).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations
from typing import Callable, Dict, Iterable, List, Optional, Sequence, Tuple

from .corepoly import (BiDeg, Mono, MonoOrder, Poly, Ring, RingMismatch, add_into, mono_div,
                       mono_divides, mono_lcm, mono_mul, monomials_of_bidegree, monomials_of_degree)
from .linalg import Echelon

Key = Tuple[int, Mono]          # (component, exponent tuple)
Terms = Dict[Key, Fraction]


# ---------------------------------------------------------------------------
# generic engine


def comm_left_mul(q: Mono, terms: Terms) -> Terms:
    return {(c, mono_mul(q, m)): v for (c, m), v in terms.items()}


class _Elem:
    __slots__ = ("terms", "lt", "sugar")

    def __init__(self, terms, lt, sugar):
        self.terms = terms
        self.lt = lt
        self.sugar = sugar


class Engine:
    """Buchberger over left modules with a pluggable monomial product.

    ``tkey`` maps a term key ``(comp, mono)`` to a sort key (larger leads).
    ``left_mul(q, terms)`` multiplies terms on the left by the monomial q; its
    leading term must be q times the leading term (true for commutative rings
    and for the Weyl algebra under term orders). The product criterion is only
    valid when ``commutative`` is set. ``selection`` is ``"normal"`` (smallest
    lcm first) or ``"sugar"`` (smallest sugar first, ties by lcm).
    """

    def __init__(self, tkey: Callable[[Key], tuple], left_mul=comm_left_mul,
                 commutative: bool = True, degree: Callable[[Mono], int] = sum,
                 product_criterion: Optional[bool] = None, selection: str = "normal"):
        if selection not in ("normal", "sugar"):
            raise ValueError(f"unknown selection {selection!r}")
        self.selection = selection
        self._tkey = tkey
        self._cache: Dict[Key, tuple] = {}
        self.left_mul = left_mul
        self.commutative = commutative
        # coprime leads only certify a zero S-pair for commutative ideals
        self.product = commutative if product_criterion is None else product_criterion
        self.degree = degree

    def key(self, k: Key) -> tuple:
        v = self._cache.get(k)
        if v is None:
            v = self._tkey(k)
            self._cache[k] = v
        return v

    def lead(self, terms: Terms) -> Key:
        return max(terms, key=self.key)

    def sugar_of(self, terms: Terms) -> int:
        return max(self.degree(m) for _, m in terms)

    # reduction --------------------------------------------------------------
    def _reducer(self, lt: Key, basis: Sequence[_Elem]) -> Optional[_Elem]:
        c, m = lt
        for g in basis:
            gc, gm = g.lt
            if gc == c and mono_divides(gm, m):
                return g
        return None

    def reduce(self, terms: Terms, basis: Sequence[_Elem], full: bool = True,
               sugar: int = 0) -> Tuple[Terms, int]:
        """Normal form of ``terms`` (basis elements must be monic).

        Returns the remainder and its sugar. With ``full=False`` only the
        leading term is made irreducible.
        """
        f = dict(terms)
        rem: Terms = {}
        key = self.key
        while f:
            lt = max(f, key=key)
            g = self._reducer(lt, basis)
            if g is None:
                if not full:
                    add_into(f, rem)
                    return f, sugar
                rem[lt] = f.pop(lt)
                continue
            c = f[lt]
            q = mono_div(lt[1], g.lt[1])
            sugar = max(sugar, self.degree(q) + g.sugar)
            add_into(f, self.left_mul(q, g.terms), -c)
            f.pop(lt, None)
        return rem, sugar

    def make(self, terms: Terms, sugar: int) -> _Elem:
        lt = self.lead(terms)
        inv = 1 / terms[lt]
        return _Elem({k: v * inv for k, v in terms.items()}, lt, sugar)

    # pairs ------------------------------------------------------------------
    def _lcm(self, a: Key, b: Key) -> Optional[Key]:
        if a[0] != b[0]:
            return None
        return (a[0], mono_lcm(a[1], b[1]))

    def _coprime(self, a: Key, b: Key) -> bool:
        return self.product and all(not (x and y) for x, y in zip(a[1], b[1]))

    def spoly(self, f: _Elem, g: _Elem, lcm: Key) -> Tuple[Terms, int]:
        qf = mono_div(lcm[1], f.lt[1])
        qg = mono_div(lcm[1], g.lt[1])
        s = self.left_mul(qf, f.terms)
        add_into(s, self.left_mul(qg, g.terms), -1)
        sugar = max(self.degree(qf) + f.sugar, self.degree(qg) + g.sugar)
        return s, sugar

    def run(self, gens: Iterable[Terms], degree_bound: Optional[int] = None,
            stop: Optional[Callable[[List[_Elem]], bool]] = None) -> List[Terms]:
        """Reduced monic Groebner basis of the module generated by ``gens``.

        With ``degree_bound`` pairs of sugar above the bound are skipped; for
        homogeneous input the result is then a basis up to that degree.
        """
        elems: List[_Elem] = []
        active: List[int] = []
        pairs: List[Tuple[int, tuple, int, int, Key]] = []
        start = [(self.sugar_of(t), t) for t in gens if t]
        start.sort(key=lambda st: (st[0], self.key(self.lead(st[1]))))
        for sg, t in start:
            r, sg = self.reduce(t, [elems[i] for i in active], full=False, sugar=sg)
            if r:
                self._update(elems, active, pairs, self.make(r, sg))
        if self.selection == "sugar":
            def rank(k):
                return pairs[k][:4]
        else:
            def rank(k):
                return pairs[k][1:4]
        while pairs:
            best = min(range(len(pairs)), key=rank)
            sg, _, i, j, lcm = pairs.pop(best)
            if degree_bound is not None and sg > degree_bound:
                continue
            s, sg = self.spoly(elems[i], elems[j], lcm)
            if not s:
                continue
            r, sg = self.reduce(s, [elems[k] for k in active], full=False, sugar=sg)
            if r:
                self._update(elems, active, pairs, self.make(r, sg))
                if stop is not None and stop([elems[k] for k in active]):
                    break
        return self.interreduce([elems[k] for k in active])

    def _update(self, elems, active, pairs, h: _Elem) -> None:
        # Gebauer-Moeller installation of h
        hi = len(elems)
        elems.append(h)
        cand = []
        for g in active:
            lcm = self._lcm(h.lt, elems[g].lt)
            if lcm is not None:
                cand.append((g, lcm, self._coprime(h.lt, elems[g].lt)))
        kept = []
        while cand:
            g, lcm, cop = cand.pop(0)
            if cop or not any(mono_divides(l2[1], lcm[1]) for _, l2, _ in cand + kept):
                kept.append((g, lcm, cop))
        new_pairs = [(g, lcm) for g, lcm, cop in kept if not cop]
        # chain criterion on old pairs
        hm = h.lt
        survivors = []
        for pr in pairs:
            sg, k, i, j, lcm = pr
            if lcm[0] == hm[0] and mono_divides(hm[1], lcm[1]):
                li = self._lcm(elems[i].lt, hm)
                lj = self._lcm(elems[j].lt, hm)
                if li != lcm and lj != lcm:
                    continue
            survivors.append(pr)
        pairs[:] = survivors
        for g, lcm in new_pairs:
            qf = mono_div(lcm[1], elems[g].lt[1])
            qh = mono_div(lcm[1], hm[1])
            sg = max(self.degree(qf) + elems[g].sugar, self.degree(qh) + h.sugar)
            pairs.append((sg, self.key(lcm), g, hi, lcm))
        active[:] = [g for g in active
                     if not (elems[g].lt[0] == hm[0] and mono_divides(hm[1], elems[g].lt[1]))]
        active.append(hi)

    def interreduce(self, basis: List[_Elem]) -> List[Terms]:
        basis = sorted(basis, key=lambda e: self.key(e.lt))
        # drop non-minimal leads
        minimal = []
        for e in basis:
            if not any(g.lt[0] == e.lt[0] and mono_divides(g.lt[1], e.lt[1]) for g in minimal):
                minimal.append(e)
        out = []
        for k, e in enumerate(minimal):
            others = minimal[:k] + minimal[k + 1:]
            lt = e.lt
            tail = {kk: v for kk, v in e.terms.items() if kk != lt}
            r, _ = self.reduce(tail, others, full=True)
            r[lt] = Fraction(1)
            out.append(r)
        out.sort(key=lambda t: self.key(self.lead(t)))
        return out

    def elems_of(self, basis: Sequence[Terms]) -> List[_Elem]:
        return [self.make(t, self.sugar_of(t)) for t in basis]


# ---------------------------------------------------------------------------
# ideals


def _ideal_engine(order: MonoOrder, selection: str = "normal") -> Engine:
    k = order.key()
    return Engine(lambda t: k(t[1]), selection=selection)


def _wrap(p: Poly) -> Terms:
    return {(0, m): c for m, c in p.terms.items()}


def _unwrap(ring: Ring, t: Terms) -> Poly:
    return Poly._raw(ring, {m: c for (_, m), c in t.items()})


@dataclass
class IdealGB:
    """Reduced Groebner basis of an ideal (monic, sorted by leading term)."""

    ring: Ring
    order: MonoOrder
    basis: List[Poly]
    leads: List[Mono] = field(default_factory=list)

    def __post_init__(self):
        if not self.leads:
            self.leads = [p.leading_term(self.order)[0] for p in self.basis]

    def is_unit(self) -> bool:
        return any(not any(m) for m in self.leads)

    def contains(self, f: Poly) -> bool:
        return normal_form(f, self).is_zero()

    def __len__(self):
        return len(self.basis)


def buchberger(gens: Sequence[Poly], order: Optional[MonoOrder] = None,
               ring: Optional[Ring] = None, selection: str = "normal") -> IdealGB:
    """Reduced Groebner basis of the ideal generated by ``gens``.

    ``selection`` only affects speed: sugar pays off for eliminations from
    graph-like generators, normal selection for most of the rest.

    >>> R = Ring.polynomial("xy", MonoOrder.lex())
    >>> [str(g) for g in buchberger([R.var("x")**2 - R.var("y"), R.var("y")]).basis]
    ['y', 'x^2']
    """
    gens = list(gens)
    if ring is None:
        if not gens:
            raise ValueError("ring needed for an empty generator list")
        ring = gens[0].ring
    for g in gens:
        if g.ring.names != ring.names:
            raise RingMismatch("generators from different rings")
    order = order or ring.order
    eng = _ideal_engine(order, selection)
    basis = eng.run([_wrap(g) for g in gens])
    return IdealGB(ring, order, [_unwrap(ring, t) for t in basis])


def normal_form(f: Poly, G: IdealGB) -> Poly:
    if f.ring.names != G.ring.names:
        raise RingMismatch(f"{f.ring.names} vs {G.ring.names}")
    eng = _ideal_engine(G.order)
    r, _ = eng.reduce(_wrap(f), eng.elems_of([_wrap(g) for g in G.basis]))
    return _unwrap(G.ring, r)


def elimination_order(nvars: int, drop: Iterable[int]) -> MonoOrder:
    """Order where any monomial involving a dropped variable beats all others."""
    drop = set(drop)
    return MonoOrder.weighted([1 if i in drop else 0 for i in range(nvars)], MonoOrder.grevlex())


def _is_elimination_for(order: MonoOrder, nvars: int, drop: set) -> bool:
    if order.kind == "weighted":
        w = order.weights
        return all((w[i] > 0) if i in drop else (w[i] == 0) for i in range(nvars))
    if order.kind == "block" and order.blocks:
        return set(range(order.blocks[0])) == drop
    if order.kind == "lex":
        return drop == set(range(len(drop)))
    return False


def _indices(ring: Ring, names) -> List[int]:
    return [v if isinstance(v, int) else ring.index(v) for v in names]


def eliminate(G: IdealGB, drop_vars) -> List[Poly]:
    """Generators of the ideal intersected with the subring without ``drop_vars``."""
    drop = set(_indices(G.ring, drop_vars))
    if not _is_elimination_for(G.order, G.ring.nvars, drop):
        G = buchberger(G.basis, elimination_order(G.ring.nvars, drop), G.ring)
    return [g for g in G.basis if not (set(g.variables()) & drop)]


def dimension(G: IdealGB) -> int:
    """Krull dimension of R/I from the leading monomials; -1 for the unit ideal."""
    if G.is_unit():
        return -1
    n = G.ring.nvars
    supports = [frozenset(i for i, a in enumerate(m) if a) for m in G.leads]
    for size in range(n, -1, -1):
        for subset in combinations(range(n), size):
            s = set(subset)
            if not any(sup <= s for sup in supports):
                return size
    return 0


def bigraded_slice_dim(G: IdealGB, bd: BiDeg, mode: str = "quotient") -> int:
    """Dimension of the (p, u) slice of the ideal (``mode="ideal"``) or quotient."""
    if mode not in ("ideal", "quotient"):
        raise ValueError("mode is 'ideal' or 'quotient'")
    if bd.p < 0 or bd.q < 0:
        return 0
    monos = monomials_of_bidegree(G.ring, bd)
    leads = G.leads
    in_ideal = sum(1 for m in monos if any(mono_divides(l, m) for l in leads))
    return in_ideal if mode == "ideal" else len(monos) - in_ideal


# ---------------------------------------------------------------------------
# presentations and minors


class NonMinimalShape(ValueError):
    """The minimal first syzygies do not form a (d+1) x d matrix."""


@dataclass
class PresMatrix:
    ring: Ring
    entries: List[List[Poly]]

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def column(self, j: int) -> List[Poly]:
        return [row[j] for row in self.entries]

    def column_degrees(self) -> List[int]:
        out = []
        for j in range(self.ncols):
            degs = {p.total_degree() for p in self.column(j) if p}
            if len(degs) != 1 or not all(p.is_homogeneous() for p in self.column(j)):
                raise ValueError(f"column {j} is not homogeneous")
            out.append(degs.pop())
        return out

    def __str__(self):
        return "\n".join("  ".join(str(p) for p in row) for row in self.entries)


def determinant(rows: List[List[Poly]], ring: Ring) -> Poly:
    """Laplace expansion along columns, memoized on the surviving row set."""
    n = len(rows)
    memo: Dict[Tuple[int, ...], Poly] = {}

    def det(avail: Tuple[int, ...], col: int) -> Poly:
        if col == n:
            return ring.one()
        if avail in memo:
            return memo[avail]
        total = ring.zero()
        for pos, r in enumerate(avail):
            a = rows[r][col]
            if a:
                sub = det(avail[:pos] + avail[pos + 1:], col + 1)
                term = a * sub
                total = total - term if pos % 2 else total + term
        memo[avail] = total
        return total

    return det(tuple(range(n)), 0)


def maximal_minors(phi: PresMatrix) -> List[Poly]:
    """Signed maximal minors: delete row i (1-based), sign (-1)^i."""
    n, m = phi.nrows, phi.ncols
    if n != m + 1:
        raise ValueError("expected an (m+1) x m matrix")
    out = []
    for i in range(n):
        rows = [phi.entries[r] for r in range(n) if r != i]
        det = determinant(rows, phi.ring)
        out.append(-det if (i + 1) % 2 else det)
    return out


def _module_engine(order: MonoOrder, priority: Sequence[int]) -> Engine:
    k = order.key()
    rank = {c: -pos for pos, c in enumerate(priority)}
    return Engine(lambda t: (rank[t[0]], k(t[1])), product_criterion=False)


def syzygy_presentation(gens: Sequence[Poly]) -> PresMatrix:
    """Minimal graded first-syzygy matrix of homogeneous generators of equal degree.

    Columns are sorted by degree. Raises NonMinimalShape unless there are
    exactly len(gens) - 1 minimal syzygies.
    """
    gens = list(gens)
    if not gens:
        raise ValueError("no generators")
    ring = gens[0].ring
    degs = {g.total_degree() for g in gens}
    if len(degs) != 1 or not all(g.is_homogeneous() and g for g in gens):
        raise ValueError("generators must be nonzero homogeneous of one degree")
    n = len(gens)
    order = MonoOrder.grevlex()
    eng = _module_engine(order, list(range(n + 1)))
    rows = []
    for i, g in enumerate(gens):
        t = {(0, m): c for m, c in g.terms.items()}
        t[(i + 1, (0,) * ring.nvars)] = Fraction(1)
        rows.append(t)
    basis = eng.run(rows)
    syz = [t for t in basis if all(c != 0 for c, _ in t)]
    syz = [{(c - 1, m): v for (c, m), v in t.items()} for t in syz]

    def deg(t):
        return max(sum(m) for _, m in t)

    syz.sort(key=lambda t: (deg(t), eng.key(eng.lead(t))))
    # graded Nakayama: keep a syzygy iff it is not in the span of the kept
    # ones times monomials in its degree
    kept: List[Terms] = []
    for s in syz:
        dg = deg(s)
        index: Dict[Key, int] = {}

        def row(t):
            return {index.setdefault(k, len(index)): v for k, v in t.items()}

        ech = Echelon()
        for k in kept:
            for a in monomials_of_degree(ring.nvars, dg - deg(k)):
                ech.add(row(comm_left_mul(a, k)))
        if not ech.contains(row(s)):
            kept.append(s)
    if len(kept) != n - 1:
        raise NonMinimalShape(f"{len(kept)} minimal syzygies for {n} generators")
    entries = [[ring.zero() for _ in kept] for _ in range(n)]
    for j, s in enumerate(kept):
        per: Dict[int, Dict[Mono, Fraction]] = {}
        for (c, m), v in s.items():
            per.setdefault(c, {})[m] = v
        for c, terms in per.items():
            entries[c][j] = Poly._raw(ring, terms)
    phi = PresMatrix(ring, entries)
    phi.column_degrees()
    return phi
