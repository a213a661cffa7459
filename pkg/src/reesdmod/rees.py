"""From a Hilbert-Burch matrix to b-functions, the support of K and fiber data.

Here K is the kernel of Sym(I) -> R(I), bigraded by (T-degree p, x-degree u).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

from .bfun import BFunction, b_function_module, default_root_range
from .corepoly import BiDeg, Poly, Ring, monomials_of_degree
from .gbcomm import (PresMatrix, buchberger, determinant, dimension, maximal_minors,
                     syzygy_presentation)
from .gbweyl import DMatrix
from .weyl import TElem, WeylOp, fourier, op_from_poly


class ValidationError(ValueError):
    def __init__(self, report: "ValidationReport"):
        self.report = report
        super().__init__("; ".join(f"{c.name}: {c.detail}" for c in report.failures()))


class NotPrincipal(RuntimeError):
    pass


@dataclass
class ReesInput:
    """Presentation data over Q[x_1..x_d]; ``phi`` wins over ``gens`` when both are given."""

    ring: Ring
    phi: Optional[PresMatrix] = None
    gens: Optional[List[Poly]] = None
    tnames: Tuple[str, ...] = ()
    cache: Dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.phi is None and not self.gens:
            raise ValueError("need a matrix or generators")
        if not self.tnames:
            self.tnames = tuple(f"T{i + 1}" for i in range(self.d + 1))

    @property
    def d(self) -> int:
        return self.ring.nvars

    def presentation(self) -> PresMatrix:
        if self.phi is not None:
            return self.phi
        if "phi" not in self.cache:
            self.cache["phi"] = syzygy_presentation(self.gens)
        return self.cache["phi"]

    def generators(self) -> List[Poly]:
        if "minors" not in self.cache:
            self.cache["minors"] = maximal_minors(self.presentation())
        return self.cache["minors"]

    @property
    def nus(self) -> List[int]:
        return self.presentation().column_degrees()

    @property
    def nu(self) -> int:
        return sum(self.nus)

    def bigraded_ring(self) -> Ring:
        return Ring.bigraded(self.ring.names, self.tnames)


@dataclass
class Check:
    name: str
    ok: bool
    detail: str = ""


@dataclass
class ValidationReport:
    checks: List[Check] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(c.ok for c in self.checks)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.ok]

    def add(self, name, ok, detail=""):
        self.checks.append(Check(name, bool(ok), detail))
        return ok

    def as_dict(self) -> Dict[str, dict]:
        return {c.name: {"ok": c.ok, "detail": c.detail} for c in self.checks}


def minors_of_size(phi: PresMatrix, t: int) -> List[Poly]:
    out = []
    for rows in combinations(range(phi.nrows), t):
        for cols in combinations(range(phi.ncols), t):
            sub = [[phi.entries[r][c] for c in cols] for r in rows]
            det = determinant(sub, phi.ring)
            if det:
                out.append(det)
    return out


def height(gens: Sequence[Poly], ring: Ring) -> int:
    gens = [g for g in gens if g]
    if not gens:
        return 0
    dim = dimension(buchberger(gens, ring=ring))
    return ring.nvars - dim if dim >= 0 else ring.nvars + 1


def validate_input(inp: ReesInput) -> ValidationReport:
    """Check the standing hypotheses; every failure names the offending datum."""
    rep = ValidationReport()
    d = inp.d
    rep.add("dimension", d >= 3, f"d = {d}")
    try:
        phi = inp.presentation()
    except Exception as exc:  # NonMinimalShape or bad generators
        rep.add("shape", False, f"no minimal presentation: {exc}")
        return rep
    if not rep.add("shape", phi.nrows == d + 1 and phi.ncols == d,
                   f"{phi.nrows} x {phi.ncols}, expected {d + 1} x {d}"):
        return rep
    bad = []
    for j in range(d):
        col = phi.column(j)
        degs = {p.total_degree() for p in col if p}
        if not degs or len(degs) != 1 or not all(p.is_homogeneous() for p in col) or 0 in degs:
            bad.append(j + 1)
    if not rep.add("homogeneity", not bad,
                   "columns homogeneous with entries in the maximal ideal" if not bad
                   else f"bad columns {bad}"):
        return rep
    nus = phi.column_degrees()
    nu = sum(nus)
    minors = maximal_minors(phi)
    degs = sorted({m.total_degree() for m in minors})
    ok = all(m and m.is_homogeneous() for m in minors) and degs == [nu]
    rep.add("generator_degree", ok, f"nu = {nu}, column degrees {nus}, minor degrees {degs}")
    hI = height(minors, inp.ring)
    rep.add("height_I", hI == 2, f"ht I = {hI}")
    if inp.gens:
        gi = buchberger(inp.gens, ring=inp.ring)
        gm = buchberger(minors, ring=inp.ring)
        same = gi.basis == gm.basis
        rep.add("hilbert_burch", same, "I equals the ideal of maximal minors" if same
                else "ideal of maximal minors differs from the given ideal")
    else:
        rep.add("hilbert_burch", True, "matrix given; I is its ideal of maximal minors")
    h1 = height([p for row in phi.entries for p in row], inp.ring)
    rep.add("fitting_I1", h1 == d, f"ht I_1 = {h1}")
    bad = []
    for t in range(2, d + 1):
        ht = hI if t == d else height(minors_of_size(phi, t), inp.ring)
        if not ht > d + 1 - t:
            bad.append((t, ht))
    rep.add("fitting_It", not bad, "ht I_t > d+1-t for 1 < t <= d" if not bad
            else "failing (t, ht I_t): " + ", ".join(map(str, bad)))
    return rep


def symmetric_relations(phi: PresMatrix, tnames: Optional[Sequence[str]] = None
                        ) -> Tuple[List[Poly], List[TElem]]:
    """g_j = sum_i a_ij T_i over Q[x, T] and their Fourier images L_j."""
    d = phi.ncols
    nt = phi.nrows
    tnames = tuple(tnames or [f"T{i + 1}" for i in range(nt)])
    S = Ring.bigraded(phi.ring.names, tnames)
    xmap = [S.index(n) for n in phi.ring.names]
    gs, Ls = [], []
    for j in range(d):
        g = S.zero()
        terms = {}
        for i in range(nt):
            a = phi.entries[i][j]
            if not a:
                continue
            g = g + a.to_ring(S, xmap) * S.var(tnames[i])
            t = tuple(1 if k == i else 0 for k in range(nt))
            terms[t] = op_from_poly(a, to="x")
        gs.append(g)
        Ls.append(fourier(TElem(phi.ring.nvars, nt, terms)))
    return gs, Ls


def build_H(L: Sequence[TElem], p: int) -> DMatrix:
    """Stack of the blocks [L_i]: rows T^gamma (|gamma| = p-d+1), columns T^beta (|beta| = p-d)."""
    if not L:
        raise ValueError("no operators")
    d = len(L)
    if p < d:
        raise ValueError(f"p = {p} < d = {d}")
    nt, dd = L[0].nt, L[0].d
    cols = monomials_of_degree(nt, p - d)
    rows = monomials_of_degree(nt, p - d + 1)
    zero = WeylOp(dd)
    entries = []
    for Li in L:
        for gamma in rows:
            row = []
            for beta in cols:
                diff = tuple(g - b for g, b in zip(gamma, beta))
                row.append(Li.coefficient(diff) if min(diff) >= 0 else zero)
            entries.append(row)
    return DMatrix(dd, entries)


def relations_of(inp: ReesInput):
    if "rel" not in inp.cache:
        inp.cache["rel"] = symmetric_relations(inp.presentation(), inp.tnames)
    return inp.cache["rel"]


def b_p(inp: ReesInput, p: int, root_range=None, method: str = "auto") -> BFunction:
    """b-function of D^m / N for the T-degree p."""
    d = inp.d
    if root_range is None:
        root_range = default_root_range(inp.nu, d)
    _, L = relations_of(inp)
    H = build_H(L, p)
    return b_function_module(H, (-1,) * d, root_range, method)


def k_support_from_b(b: BFunction, p: int, nu: int, d: int) -> set:
    """Bidegrees (p, u) with b(-nu + d + u) = 0."""
    return {(p, int(r) + nu - d) for r in b.roots}


@dataclass(frozen=True)
class FiberInvariants:
    p0: int
    reltype: int
    reg: int
    multiplicity: int
    reduction_number: int
    fiber_equation: Optional[Poly] = None

    def as_tuple(self) -> Tuple[int, int, int, int, int]:
        return (self.p0, self.reltype, self.reg, self.multiplicity, self.reduction_number)


def fiber_invariants(inp: ReesInput) -> FiberInvariants:
    """Invariants of the special fiber k[T]/(u), u the generator of the x-degree-0 part of the Rees ideal."""
    from .oracle import rees_ideal

    R = rees_ideal(inp)
    if len(R.fiber) != 1:
        raise NotPrincipal(f"fiber ideal has {len(R.fiber)} generators")
    u = R.fiber[0]
    p0 = u.total_degree()
    return FiberInvariants(p0, p0, p0 - 1, p0, p0 - 1, u)


@dataclass
class GeneratorGuess:
    """Candidate bidegrees of generators of K read off the b-functions (heuristic)."""

    degrees: List[BiDeg]
    reltype_lower_bound: int
    label: str = "HEURISTIC"

    def pairs(self) -> List[Tuple[int, int]]:
        return [(b.p, b.q) for b in self.degrees]


def lowest_u(b: BFunction, nu: int, d: int) -> Optional[int]:
    if not b.roots:
        return None
    return int(min(b.roots)) + nu - d


def infer_generator_degrees(bs: Sequence[Tuple[int, BFunction]], nu: int, d: int) -> GeneratorGuess:
    """Emit (p, u_min(p)) at the first p and wherever u_min strictly drops."""
    out: List[BiDeg] = []
    last = None
    for p, b in sorted(bs, key=lambda pb: pb[0]):
        u = lowest_u(b, nu, d)
        if u is None:
            continue
        if last is None or u < last:
            out.append(BiDeg(p, u))
            last = u
    bound = max((b.p for b in out), default=0)
    return GeneratorGuess(out, bound)


def expected_top_dim(p: int, d: int) -> int:
    """dim K_{p, nu-d} for p >= d (that slice is a shifted copy of Q[T])."""
    return comb(p, d) if p >= d else 0
