"""Groebner bases of left ideals and left submodules in the Weyl algebra.

Term orders reuse the generic engine of :mod:`gbcomm` with the Weyl monomial
product. The (-w, w) weight order is not a term order, so weight bases are
computed in the homogenized algebra (central h with d_i x_i = x_i d_i + h^2)
and dehomogenized afterwards.

For matrices whose entries are constant-coefficient operators that are
homogeneous along each row, submodule intersections are computed degree by
degree with exact linear algebra (:func:`graded_component_ideals`).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Dict, List, Optional, Sequence, Tuple

from .corepoly import Mono, MonoOrder, add_into, mono_mul, monomials_of_degree
from .gbcomm import Engine, Terms
from .linalg import Echelon, nullspace
from .weyl import DimensionMismatch, WeylOp, weyl_mono_mul


def weyl_left_mul(d: int, homog: bool = False):
    def left_mul(q: Mono, terms: Terms) -> Terms:
        out: Terms = {}
        for (c, m), v in terms.items():
            for mm, w in weyl_mono_mul(q, m, d, homog):
                k = (c, mm)
                nv = out.get(k, 0) + v * w
                if nv:
                    out[k] = nv
                else:
                    del out[k]
        return out
    return left_mul


def _weight_of(w: Sequence[int], m: Mono, d: int) -> int:
    return sum(-wi * a + wi * b for wi, a, b in zip(w, m[:d], m[d:2 * d]))


@dataclass
class WeylGB:
    """Reduced Groebner basis of a left ideal (rank 0) or left submodule of D^rank."""

    d: int
    order: MonoOrder
    basis: list
    raw: List[Terms] = field(default_factory=list, repr=False)
    weight: Optional[Tuple[int, ...]] = None
    homog: bool = False
    rank: int = 0
    priority: Tuple[int, ...] = ()

    def is_unit(self) -> bool:
        return self.rank == 0 and any(len(t) == 1 and not any(m) for t in self.raw for (_, m) in t)

    def _key(self):
        k = self.order.key()
        if self.rank:
            pos = {c: -i for i, c in enumerate(self.priority)}
            return lambda t: (pos[t[0]], k(t[1]))
        return lambda t: k(t[1])

    def engine(self) -> Engine:
        return Engine(self._key(), weyl_left_mul(self.d, self.homog), commutative=False)


@dataclass
class DMatrix:
    """Rows generate a left submodule of D^{1 x ncols}."""

    d: int
    entries: List[List[WeylOp]]

    @property
    def nrows(self) -> int:
        return len(self.entries)

    @property
    def ncols(self) -> int:
        return len(self.entries[0]) if self.entries else 0

    def __post_init__(self):
        widths = {len(r) for r in self.entries}
        if len(widths) > 1:
            raise ValueError("ragged matrix")
        for r in self.entries:
            for op in r:
                if op.d != self.d:
                    raise DimensionMismatch("entry over a different Weyl algebra")

    def row_terms(self, r: int) -> Terms:
        out: Terms = {}
        for c, op in enumerate(self.entries[r]):
            for m, v in op.terms.items():
                out[(c, m)] = v
        return out


def _op_terms(op: WeylOp) -> Terms:
    return {(0, m): v for m, v in op.terms.items()}


def _terms_op(d: int, t: Terms) -> WeylOp:
    return WeylOp._raw(d, {m: v for (_, m), v in t.items()})


def _check_d(gens: Sequence[WeylOp], d: Optional[int]) -> int:
    ds = {g.d for g in gens}
    if d is not None:
        ds.add(d)
    if len(ds) != 1:
        raise DimensionMismatch(f"operators over A_d for d in {sorted(ds)}")
    return ds.pop()


def weyl_buchberger(gens: Sequence[WeylOp], order: Optional[MonoOrder] = None,
                    d: Optional[int] = None) -> WeylGB:
    """Left-ideal Groebner basis under a term order on (x, d)-exponents.

    >>> str(weyl_buchberger([WeylOp.x(1, 0), WeylOp.D(1, 0)]).basis[0])
    '1'
    """
    d = _check_d(gens, d)
    order = order or MonoOrder.grevlex()
    G = WeylGB(d, order, [])
    raw = G.engine().run([_op_terms(g) for g in gens if g])
    G.raw = raw
    G.basis = [_terms_op(d, t) for t in raw]
    return G


def weyl_normal_form(op: WeylOp, G: WeylGB) -> WeylOp:
    if G.homog or G.rank:
        raise ValueError("normal forms need a term-order ideal basis")
    if op.d != G.d:
        raise DimensionMismatch(f"d={op.d} vs d={G.d}")
    eng = G.engine()
    r, _ = eng.reduce(_op_terms(op), eng.elems_of(G.raw))
    return _terms_op(G.d, r)


def weyl_ideal_member(op: WeylOp, G: WeylGB) -> bool:
    return weyl_normal_form(op, G).is_zero()


# ---------------------------------------------------------------------------
# weight order through homogenization


def _homog_order_key(d: int, w: Sequence[int]):
    gl = MonoOrder.grevlex().key()

    # total degree makes the order a well-order on homogeneous elements; the
    # weight then decides; grevlex with h last prefers lower h-degree
    def key(m: Mono) -> tuple:
        return (sum(m), _weight_of(w, m, d), gl(m))
    return key


def weyl_gb_weight(gens: Sequence[WeylOp], w: Sequence[int], d: Optional[int] = None) -> WeylGB:
    """Generators whose (-w, w)-initial forms generate the initial ideal."""
    d = _check_d(gens, d)
    w = tuple(w)
    if len(w) != d:
        raise DimensionMismatch("weight vector length differs from d")
    hgens = []
    for g in gens:
        if not g:
            continue
        top = max(sum(m) for m in g.terms)
        hgens.append({(0, m + (top - sum(m),)): v for m, v in g.terms.items()})
    key = _homog_order_key(d, w)
    eng = Engine(lambda t: key(t[1]), weyl_left_mul(d, True), commutative=False)
    raw = eng.run(hgens)
    basis = []
    seen = set()
    for t in raw:
        out: Dict[Mono, Fraction] = {}
        for (_, m), v in t.items():
            add_into(out, {m[:2 * d]: v})
        op = WeylOp._raw(d, out)
        if op and op not in seen:
            seen.add(op)
            basis.append(op)
    G = WeylGB(d, MonoOrder.grevlex(), basis, weight=w, homog=True)
    G.raw = raw
    return G


def initial_form(op: WeylOp, w: Sequence[int]) -> WeylOp:
    d = op.d
    if not op:
        return op
    top = op.weight(w)
    return WeylOp._raw(d, {m: v for m, v in op.terms.items() if _weight_of(w, m, d) == top})


def initial_forms(G: WeylGB, w: Sequence[int]) -> List[WeylOp]:
    if G.weight is not None and tuple(w) != tuple(G.weight):
        raise ValueError("basis was computed for a different weight")
    return [initial_form(g, w) for g in G.basis]


# ---------------------------------------------------------------------------
# submodules of D^m


def module_gb(rows: DMatrix, priority: Optional[Sequence[int]] = None,
              order: Optional[MonoOrder] = None) -> WeylGB:
    """Position-over-term basis; ``priority`` lists components from most to least significant."""
    m = rows.ncols
    priority = tuple(range(m) if priority is None else priority)
    if sorted(priority) != list(range(m)):
        raise ValueError("priority must be a permutation of the components")
    G = WeylGB(rows.d, order or MonoOrder.grevlex(), [], rank=m, priority=priority)
    raw = G.engine().run([rows.row_terms(r) for r in range(rows.nrows)])
    G.raw = raw
    G.basis = [_vector(rows.d, m, t) for t in raw]
    return G


def _vector(d: int, m: int, t: Terms) -> List[WeylOp]:
    comps: List[Dict[Mono, Fraction]] = [dict() for _ in range(m)]
    for (c, mono), v in t.items():
        comps[c][mono] = v
    return [WeylOp._raw(d, x) for x in comps]


def module_normal_form(vec: Sequence[WeylOp], G: WeylGB) -> List[WeylOp]:
    eng = G.engine()
    t: Terms = {}
    for c, op in enumerate(vec):
        for mono, v in op.terms.items():
            t[(c, mono)] = v
    r, _ = eng.reduce(t, eng.elems_of(G.raw))
    return _vector(G.d, G.rank, r)


def component_intersect(N_gb: WeylGB, i: int, rows: Optional[DMatrix] = None) -> List[WeylOp]:
    """Generators of {f : f e_i in N}.

    Needs a position-over-term basis in which component i is least
    significant; if ``N_gb`` is not one, it is recomputed from its own basis.
    """
    G = N_gb
    if not G.priority or G.priority[-1] != i:
        prio = tuple(c for c in G.priority if c != i) + (i,)
        src = rows or DMatrix(G.d, [list(v) for v in G.basis])
        G = module_gb(src, prio, G.order)
    out = []
    for t in G.raw:
        if all(c == i for c, _ in t):
            out.append(WeylOp._raw(G.d, {m: v for (_, m), v in t.items()}))
    return out


# ---------------------------------------------------------------------------
# graded linear-algebra route


def _row_degree(terms: Terms, d: int) -> Optional[int]:
    degs = set()
    for (_, m) in terms:
        if any(m[:d]):
            return None
        degs.add(sum(m[d:]))
    return degs.pop() if len(degs) == 1 else None


def is_graded_d_matrix(H: DMatrix) -> bool:
    """True if every entry is a constant-coefficient operator and rows are homogeneous."""
    return all(_row_degree(H.row_terms(r), H.d) is not None for r in range(H.nrows)
               if any(H.entries[r]))


def graded_component_ideals(H: DMatrix, max_degree: int,
                            components: Optional[Sequence[int]] = None) -> Dict[int, List[WeylOp]]:
    """Generators, up to degree ``max_degree``, of J_i = {f : f e_i in N} for each i.

    Valid for matrices accepted by :func:`is_graded_d_matrix`. Then N is
    generated by homogeneous vectors over the polynomial ring Q[d_1..d_d] and
    D N is free over it in the x-direction, so J_i is generated by the
    homogeneous pieces {f in Q[d]_j : f e_i in N_j}, each a kernel computation.
    A component whose ideal reaches all monomials of some degree j is closed
    off with those monomials as generators.
    """
    d, m = H.d, H.ncols
    comps = list(range(m)) if components is None else list(components)
    gens_by_deg: Dict[int, List[Dict[Tuple[int, Mono], Fraction]]] = {}
    for r in range(H.nrows):
        t = H.row_terms(r)
        if not t:
            continue
        deg = _row_degree(t, d)
        if deg is None:
            raise ValueError("row is not a homogeneous constant-coefficient vector")
        gens_by_deg.setdefault(deg, []).append({(c, mono[d:]): v for (c, mono), v in t.items()})

    index: Dict[Tuple[int, Mono], int] = {}
    back: List[Tuple[int, Mono]] = []

    def col(k):
        v = index.get(k)
        if v is None:
            v = index[k] = len(back)
            back.append(k)
        return v

    def enc(t):
        return {col(k): v for k, v in t.items()}

    units = [tuple(1 if a == b else 0 for b in range(d)) for a in range(d)]
    result: Dict[int, List[WeylOp]] = {i: [] for i in comps}
    prev_ideal: Dict[int, List[Dict[Mono, Fraction]]] = {i: [] for i in comps}
    open_comps = set(comps)
    prev_rows: List[Dict[int, Fraction]] = []
    for j in range(max_degree + 1):
        if not open_comps:
            break
        ech = Echelon()
        for row in prev_rows:
            for u in units:
                shifted = {}
                for cidx, v in row.items():
                    c, mono = back[cidx]
                    shifted[col((c, mono_mul(u, mono)))] = v
                ech.add(shifted)
        for g in gens_by_deg.get(j, []):
            ech.add(enc(g))
        prev_rows = ech.rows()
        monos = monomials_of_degree(d, j)
        for i in sorted(open_comps):
            rems = [ech.reduce({col((i, a)): Fraction(1)}) for a in monos]
            kernel = nullspace(rems)
            ideal_j = [{monos[k]: v for k, v in vec.items()} for vec in kernel]
            # minimal new generators: not in the span of lower ones times d_k
            mindex = {a: n for n, a in enumerate(monos)}
            low = Echelon()
            for f in prev_ideal[i]:
                for u in units:
                    low.add({mindex[mono_mul(u, a)]: v for a, v in f.items()})
            if len(kernel) == len(monos):
                new = [{a: Fraction(1)} for a in monos if low.add({mindex[a]: Fraction(1)})]
                open_comps.discard(i)
            else:
                new = [f for f in ideal_j if low.add({mindex[a]: v for a, v in f.items()})]
            prev_ideal[i] = ideal_j
            for f in new:
                result[i].append(WeylOp._raw(d, {(0,) * d + a: v for a, v in f.items()}))
    return result
