"""Two commutative cross-checks for the support of K.

* Hilbert counting: compute the Rees ideal by eliminating t from
  (T_i - t f_i), then dim K_{p,u} = dim I_{p,u} - dim L_{p,u}.
* Solution kernel: the dimension of the space of h = (h_1..h_m), h_j of
  x-degree nu-d-u, killed by every entry row of H.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, List, Tuple

from .corepoly import BiDeg, MonoOrder, Poly, Ring, monomials_of_degree
from .gbcomm import IdealGB, bigraded_slice_dim, buchberger
from .linalg import rank
from .rees import ReesInput, build_H, relations_of
from .weyl import weyl_apply

T_KIND_ELIM = "t"


@dataclass
class ReesIdealGB:
    gb: IdealGB            # the Rees ideal over Q[x, T]
    fiber: List[Poly]      # its x-degree-0 part, over Q[x, T]
    L_gb: IdealGB          # the ideal of the g_j
    note: str = "eliminated t from (T_i - t*f_i)"


def rees_ideal(inp: ReesInput) -> ReesIdealGB:
    if "rees" in inp.cache:
        return inp.cache["rees"]
    d = inp.d
    S = inp.bigraded_ring()
    big = Ring(("_t",) + S.names, (T_KIND_ELIM,) + S.kinds)
    f = inp.generators()
    t = big.var("_t")
    xmap = [big.index(n) for n in inp.ring.names]
    gens = [big.var(T) - t * fi.to_ring(big, xmap) for T, fi in zip(inp.tnames, f)]
    # t, then the x block, then the T block: the surviving basis elements
    # restrict to bases of the Rees ideal and of its fiber part at once
    order = MonoOrder.block([1, d, d + 1])
    G = buchberger(gens, order, big, selection="sugar")
    keep = []
    for g in G.basis:
        if all(m[0] == 0 for m in g.terms):
            keep.append(Poly._raw(S, {m[1:]: c for m, c in g.terms.items()}))
    sub = MonoOrder.block([d, d + 1])
    I_gb = IdealGB(S, sub, keep)
    xs = set(S.x_indices)
    fiber = [g for g in keep if not any(m[i] for m in g.terms for i in xs)]
    gs, _ = relations_of(inp)
    L_gb = buchberger(gs, sub, S)
    out = ReesIdealGB(I_gb, fiber, L_gb)
    inp.cache["rees"] = out
    return out


def k_bigraded_dim(inp: ReesInput, p: int, u: int) -> int:
    """dim_Q K_{p,u} = dim I_{p,u} - dim L_{p,u}."""
    if p < 0 or u < 0:
        return 0
    R = rees_ideal(inp)
    bd = BiDeg(p, u)
    return bigraded_slice_dim(R.gb, bd, "ideal") - bigraded_slice_dim(R.L_gb, bd, "ideal")


def solution_kernel_dim(inp: ReesInput, p: int, u: int) -> int:
    """Dimension of {h : H . h = 0}, h_j homogeneous of degree nu - d - u."""
    d = inp.d
    if u < 0:
        raise ValueError("u must be nonnegative")
    k = inp.nu - d - u
    if p < d or k < 0:
        return 0
    _, L = relations_of(inp)
    H = build_H(L, p)
    R = inp.ring
    monos = monomials_of_degree(d, k)
    index: Dict[Tuple[int, tuple], int] = {}
    columns = []
    for j in range(H.ncols):
        for a in monos:
            basis = Poly._raw(R, {a: Fraction(1)})
            col: Dict[int, Fraction] = {}
            for r in range(H.nrows):
                op = H.entries[r][j]
                if not op:
                    continue
                img = weyl_apply(op, basis)
                for mono, c in img.terms.items():
                    key = index.setdefault((r, mono), len(index))
                    col[key] = col.get(key, 0) + c
            columns.append({c: v for c, v in col.items() if v})
    return len(columns) - rank(columns)
