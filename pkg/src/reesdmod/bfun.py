"""b-functions of left ideals and of modules D^m / N by membership tests.

Inside a known root range the generator of in(J) ∩ Q[s] is found without
elimination: the full product P(s) over the range must lie in in(J), and a
root r belongs to b exactly when P(s)/(s - r) drops out of in(J).
"""
from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

from .gbweyl import (DMatrix, component_intersect, graded_component_ideals, initial_forms,
                     is_graded_d_matrix, module_gb, weyl_buchberger, weyl_gb_weight,
                     weyl_ideal_member)
from .weyl import SPoly, WeylOp, expand_s_polynomial


class RangeExhausted(RuntimeError):
    """The product over the root range is not in the initial ideal."""

    def __init__(self, message: str, component: Optional[int] = None):
        self.component = component
        super().__init__(message if component is None else f"component {component}: {message}")


def _fmt_factor(r: Fraction) -> str:
    if r == 0:
        return "(s)"
    sign = "-" if r > 0 else "+"
    return f"(s {sign} {abs(r)})"


@dataclass(frozen=True)
class BFunction:
    """Monic b(s) = prod (s - root); the empty root tuple is b = 1."""

    roots: Tuple[Fraction, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "roots", tuple(sorted((Fraction(r) for r in self.roots), reverse=True)))

    @property
    def degree(self) -> int:
        return len(self.roots)

    def poly(self) -> SPoly:
        return SPoly.from_roots(self.roots)

    def root_set(self) -> set:
        return set(self.roots)

    def lcm(self, other: "BFunction") -> "BFunction":
        a, b = Counter(self.roots), Counter(other.roots)
        return BFunction(tuple((a | b).elements()))

    def __str__(self):
        if not self.roots:
            return "1"
        return "".join(_fmt_factor(r) for r in self.roots)

    def int_roots(self) -> List[int]:
        return [int(r) for r in self.roots if r.denominator == 1]


def default_root_range(nu: int, d: int) -> range:
    return range(-(nu - d), 1)


_cache: Dict[tuple, BFunction] = {}


def _cache_key(gens, w, roots):
    return (tuple(sorted(frozenset(g.terms.items()) for g in gens if g)), tuple(w), roots)


def b_function_ideal(J_gens: Sequence[WeylOp], w: Sequence[int], root_range: Iterable[int],
                     d: Optional[int] = None) -> BFunction:
    """Generator of in_(-w,w)(J) ∩ Q[s], s = -sum x_i d_i, with roots in ``root_range``.

    Raises RangeExhausted when the product over the range is not in in(J).
    """
    gens = [g for g in J_gens if g]
    if d is None:
        if not J_gens:
            raise ValueError("dimension needed for an empty generator list")
        d = J_gens[0].d
    roots = tuple(sorted(set(int(r) for r in root_range)))
    key = _cache_key(gens, w, roots)
    hit = _cache.get(key)
    if hit is not None:
        return hit
    if not gens:
        raise RangeExhausted("zero ideal has no b-function")
    G = weyl_gb_weight(gens, w, d)
    inJ = weyl_buchberger(initial_forms(G, w), d=d)
    if inJ.is_unit():
        result = BFunction(())
    else:
        full = SPoly.from_roots(roots)
        if not weyl_ideal_member(expand_s_polynomial(full, d), inJ):
            raise RangeExhausted(f"product over roots {list(roots)} is not in the initial ideal")
        keep = []
        for r in roots:
            rest = SPoly.from_roots([q for q in roots if q != r])
            if not weyl_ideal_member(expand_s_polynomial(rest, d), inJ):
                keep.append(r)
        result = BFunction(tuple(keep))
        if not weyl_ideal_member(expand_s_polynomial(result.poly(), d), inJ):
            raise RangeExhausted("b-function is not squarefree within the range")
    _cache[key] = result
    return result


def component_ideals(H: DMatrix, max_degree: int, method: str = "auto") -> Dict[int, List[WeylOp]]:
    """The ideals J_i = {f : f e_i in N} for every column i of H.

    ``graded`` uses degree-wise linear algebra (only for constant-coefficient
    rows of one degree each), ``gb`` a position-over-term basis per column;
    ``auto`` picks ``graded`` when it applies. Graded generators are
    truncated at ``max_degree``, which suffices for membership of elements of
    at most that degree.
    """
    if method not in ("auto", "graded", "gb"):
        raise ValueError(f"unknown method {method!r}")
    graded = is_graded_d_matrix(H)
    if method == "graded" and not graded:
        raise ValueError("matrix is not a graded constant-coefficient matrix")
    if method == "auto":
        method = "graded" if graded else "gb"
    if method == "graded":
        return graded_component_ideals(H, max_degree)
    out = {}
    m = H.ncols
    for i in range(m):
        prio = tuple(c for c in range(m) if c != i) + (i,)
        out[i] = component_intersect(module_gb(H, prio), i)
    return out


def b_function_module(H: DMatrix, w: Sequence[int], root_range: Iterable[int],
                      method: str = "auto") -> BFunction:
    """lcm over the columns i of the b-functions of J_i."""
    roots = sorted(set(int(r) for r in root_range))
    w = tuple(w)
    if method != "gb" and any(x != w[0] for x in w):
        method = "gb"
    Js = component_ideals(H, len(roots), method)
    total = BFunction(())
    for i in range(H.ncols):
        try:
            b = b_function_ideal(Js[i], w, roots, H.d)
        except RangeExhausted as exc:
            raise RangeExhausted(str(exc), i) from None
        total = total.lcm(b)
    return total
