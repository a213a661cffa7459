"""The Weyl algebra A_d(Q) and its central T-extension.

Operators are kept in normal order (x's left of d's). A monomial
x^a d^b is stored as the exponent tuple ``a + b`` of length 2d; the
homogenized algebra used for weight Groebner bases appends one more slot
for the central variable h (relation d_i x_i = x_i d_i + h^2).
"""
from __future__ import annotations

from fractions import Fraction
from functools import lru_cache
from itertools import product
from math import comb, factorial
from typing import Dict, Iterable, Optional, Sequence, Tuple

from .corepoly import (
    Mono,
    ParseError,
    Poly,
    Ring,
    TermParser,
    add_into,
    format_coeff_term,
    format_monomial,
    monomials_of_degree,
)


class DimensionMismatch(ValueError):
    pass


# ---------------------------------------------------------------------------
# monomial products


@lru_cache(maxsize=None)
def _pair_expansion(b: int, c: int) -> Tuple[Tuple[int, int], ...]:
    # d^b x^c = sum_k C(b,k) C(c,k) k! x^(c-k) d^(b-k)
    return tuple((k, comb(b, k) * comb(c, k) * factorial(k)) for k in range(min(b, c) + 1))


@lru_cache(maxsize=1 << 18)
def weyl_mono_mul(m1: Mono, m2: Mono, d: int, homog: bool = False) -> Tuple[Tuple[Mono, int], ...]:
    """Normal-ordered expansion of (x^a d^b)(x^c d^e) as (monomial, integer) pairs."""
    a, b = m1[:d], m1[d:2 * d]
    c, e = m2[:d], m2[d:2 * d]
    base_x = [i + j for i, j in zip(a, c)]
    base_d = [i + j for i, j in zip(b, e)]
    hexp = (m1[2 * d] + m2[2 * d]) if homog else 0
    active = [i for i in range(d) if b[i] and c[i]]
    if not active:
        mono = tuple(base_x) + tuple(base_d) + ((hexp,) if homog else ())
        return ((mono, 1),)
    ranges = [_pair_expansion(b[i], c[i]) for i in active]
    out = []
    for choice in product(*ranges):
        x = list(base_x)
        dd = list(base_d)
        coeff = 1
        ktot = 0
        for i, (k, w) in zip(active, choice):
            x[i] -= k
            dd[i] -= k
            coeff *= w
            ktot += k
        mono = tuple(x) + tuple(dd) + ((hexp + 2 * ktot,) if homog else ())
        out.append((mono, coeff))
    return tuple(out)


def weyl_mul_dicts(a: Dict[Mono, Fraction], b: Dict[Mono, Fraction], d: int, homog: bool = False) -> Dict:
    out: Dict[Mono, Fraction] = {}
    for m1, c1 in a.items():
        for m2, c2 in b.items():
            cc = c1 * c2
            for m, w in weyl_mono_mul(m1, m2, d, homog):
                v = out.get(m, 0) + cc * w
                if v:
                    out[m] = v
                else:
                    out.pop(m, None)
    return out


def is_d_only(terms: Iterable[Mono], d: int) -> bool:
    return all(not any(m[:d]) for m in terms)


# ---------------------------------------------------------------------------
# operators


class WeylOp:
    """Normally ordered element of A_d(Q)."""

    __slots__ = ("d", "terms")

    def __init__(self, d: int, terms: Optional[Dict[Mono, Fraction]] = None):
        self.d = d
        self.terms = {}
        for m, c in (terms or {}).items():
            if c:
                if len(m) != 2 * d:
                    raise DimensionMismatch(f"monomial {m} does not fit d={d}")
                self.terms[tuple(m)] = Fraction(c)

    @classmethod
    def _raw(cls, d, terms):
        op = cls.__new__(cls)
        op.d = d
        op.terms = terms
        return op

    @classmethod
    def monomial(cls, d: int, alpha: Sequence[int], beta: Sequence[int], coeff=1) -> "WeylOp":
        return cls(d, {tuple(alpha) + tuple(beta): Fraction(coeff)})

    @classmethod
    def const(cls, d: int, c=1) -> "WeylOp":
        return cls(d, {(0,) * (2 * d): Fraction(c)})

    @classmethod
    def x(cls, d: int, i: int) -> "WeylOp":
        e = [0] * (2 * d)
        e[i] = 1
        return cls(d, {tuple(e): Fraction(1)})

    @classmethod
    def D(cls, d: int, i: int) -> "WeylOp":
        e = [0] * (2 * d)
        e[d + i] = 1
        return cls(d, {tuple(e): Fraction(1)})

    @classmethod
    def from_poly_in_d(cls, f: Poly) -> "WeylOp":
        """Read a commutative polynomial in d variables as a constant-coefficient operator."""
        d = f.ring.nvars
        return cls._raw(d, {(0,) * d + m: c for m, c in f.terms.items()})

    def _same(self, other: "WeylOp"):
        if not isinstance(other, WeylOp):
            return NotImplemented
        if other.d != self.d:
            raise DimensionMismatch(f"d={self.d} vs d={other.d}")
        return other

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            other = WeylOp.const(self.d, other)
        other = self._same(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        add_into(out, other.terms)
        return WeylOp._raw(self.d, out)

    __radd__ = __add__

    def __neg__(self):
        return WeylOp._raw(self.d, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            other = WeylOp.const(self.d, other)
        other = self._same(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        add_into(out, other.terms, -1)
        return WeylOp._raw(self.d, out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return weyl_product(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.scale(other)
        return NotImplemented

    def __pow__(self, k: int):
        out = WeylOp.const(self.d)
        for _ in range(k):
            out = out * self
        return out

    def scale(self, c) -> "WeylOp":
        c = Fraction(c)
        if not c:
            return WeylOp(self.d)
        return WeylOp._raw(self.d, {m: v * c for m, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = WeylOp.const(self.d, other)
        if not isinstance(other, WeylOp):
            return NotImplemented
        return self.d == other.d and self.terms == other.terms

    def __hash__(self):
        return hash((self.d, frozenset(self.terms.items())))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def order(self) -> int:
        """Order in d (largest |beta|); -1 for the zero operator."""
        return max((sum(m[self.d:]) for m in self.terms), default=-1)

    def weight(self, w: Sequence[int]) -> Optional[int]:
        """Largest (-w, w)-weight of a term, None for zero."""
        d = self.d
        vals = [sum(-wi * a + wi * b for wi, a, b in zip(w, m[:d], m[d:])) for m in self.terms]
        return max(vals) if vals else None

    def is_d_only(self) -> bool:
        return is_d_only(self.terms, self.d)

    def sorted_terms(self):
        # x-degree then d-degree, then lex: deterministic printing
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def format(self, xnames: Optional[Sequence[str]] = None) -> str:
        names = list(xnames or [f"x{i + 1}" for i in range(self.d)]) + [f"d{i + 1}" for i in range(self.d)]
        out = []
        for m, c in self.sorted_terms():
            out.append(format_coeff_term(c, format_monomial(m, names), not out))
        return "".join(out) if out else "0"

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"WeylOp({self.d}, {str(self)!r})"


def weyl_product(a: WeylOp, b: WeylOp) -> WeylOp:
    if a.d != b.d:
        raise DimensionMismatch(f"d={a.d} vs d={b.d}")
    return WeylOp._raw(a.d, weyl_mul_dicts(a.terms, b.terms, a.d))


def commutator(a: WeylOp, b: WeylOp) -> WeylOp:
    return a * b - b * a


def weyl_apply(op: WeylOp, f: Poly) -> Poly:
    """Act on a polynomial: x^a d^b . f = x^a * (d^b f).

    The i-th x-variable of ``f.ring`` is paired with d_i; T-variables, if
    present, behave as constants.
    """
    xi = f.ring.x_indices
    d = op.d
    if len(xi) != d:
        raise DimensionMismatch(f"operator has d={d}, polynomial has {len(xi)} x-variables")
    out: Dict[Mono, Fraction] = {}
    for m, c in op.terms.items():
        alpha, beta = m[:d], m[d:]
        for g, cg in f.terms.items():
            coeff = c * cg
            e = list(g)
            ok = True
            for k, idx in enumerate(xi):
                bk = beta[k]
                if bk:
                    gk = e[idx]
                    if gk < bk:
                        ok = False
                        break
                    coeff *= factorial(gk) // factorial(gk - bk)
                    e[idx] = gk - bk
            if not ok:
                continue
            for k, idx in enumerate(xi):
                e[idx] += alpha[k]
            t = tuple(e)
            v = out.get(t, 0) + coeff
            if v:
                out[t] = v
            else:
                out.pop(t, None)
    return Poly(f.ring, out)


def fourier_op(a: WeylOp) -> WeylOp:
    """x_i -> d_i, d_i -> -x_i."""
    d = a.d
    out: Dict[Mono, Fraction] = {}
    zero = (0,) * d
    for m, c in a.terms.items():
        alpha, beta = m[:d], m[d:]
        sign = -1 if sum(beta) % 2 else 1
        # d^alpha x^beta
        for mono, w in weyl_mono_mul(zero + alpha, beta + zero, d):
            v = out.get(mono, 0) + sign * w * c
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
    return WeylOp._raw(d, out)


def transpose_tau(a: WeylOp) -> WeylOp:
    """Standard transposition f d^b -> (-1)^|b| d^b f, normal-ordered."""
    d = a.d
    out: Dict[Mono, Fraction] = {}
    zero = (0,) * d
    for m, c in a.terms.items():
        alpha, beta = m[:d], m[d:]
        sign = -1 if sum(beta) % 2 else 1
        for mono, w in weyl_mono_mul(zero + beta, alpha + zero, d):
            v = out.get(mono, 0) + sign * w * c
            if v:
                out[mono] = v
            else:
                out.pop(mono, None)
    return WeylOp._raw(d, out)


# ---------------------------------------------------------------------------
# T-extension


class TElem:
    """Element of A_d(Q)[T_1..T_n]: a map T-exponent -> nonzero WeylOp."""

    __slots__ = ("d", "nt", "terms")

    def __init__(self, d: int, nt: int, terms: Optional[Dict[Mono, WeylOp]] = None):
        self.d = d
        self.nt = nt
        self.terms = {}
        for t, op in (terms or {}).items():
            if len(t) != nt:
                raise DimensionMismatch("T-exponent length")
            if op.d != d:
                raise DimensionMismatch("operator dimension")
            if op:
                self.terms[tuple(t)] = op

    def __add__(self, other: "TElem") -> "TElem":
        out = dict(self.terms)
        for t, op in other.terms.items():
            s = out.get(t, WeylOp(self.d)) + op
            if s:
                out[t] = s
            else:
                out.pop(t, None)
        return TElem(self.d, self.nt, out)

    def __sub__(self, other: "TElem") -> "TElem":
        return self + other.scale(-1)

    def scale(self, c) -> "TElem":
        return TElem(self.d, self.nt, {t: op.scale(c) for t, op in self.terms.items()})

    def __mul__(self, other: "TElem") -> "TElem":
        if self.d != other.d or self.nt != other.nt:
            raise DimensionMismatch("TElem shapes differ")
        out: Dict[Mono, WeylOp] = {}
        for t1, a in self.terms.items():
            for t2, b in other.terms.items():
                t = tuple(i + j for i, j in zip(t1, t2))
                s = out.get(t, WeylOp(self.d)) + a * b
                if s:
                    out[t] = s
                else:
                    out.pop(t, None)
        return TElem(self.d, self.nt, out)

    def __eq__(self, other):
        return isinstance(other, TElem) and (self.d, self.nt, self.terms) == (other.d, other.nt, other.terms)

    def __hash__(self):
        return hash((self.d, self.nt, frozenset(self.terms.items())))

    def coefficient(self, t: Mono) -> WeylOp:
        return self.terms.get(tuple(t), WeylOp(self.d))

    def format(self, xnames=None, tnames=None) -> str:
        tnames = list(tnames or [f"T{i + 1}" for i in range(self.nt)])
        parts = []
        for t in sorted(self.terms, reverse=True):
            op = self.terms[t]
            mono = format_monomial(t, tnames)
            body = op.format(xnames)
            if len(op.terms) > 1:
                body = f"({body})"
            parts.append(f"{body}*{mono}" if mono else body)
        return " + ".join(parts) if parts else "0"

    def __str__(self):
        return self.format()

    def __repr__(self):
        return f"TElem({str(self)!r})"

    @classmethod
    def from_op(cls, op: WeylOp, nt: int, t: Mono = None) -> "TElem":
        return cls(op.d, nt, {tuple(t) if t else (0,) * nt: op})


def fourier(e):
    """Fourier transform on WeylOp or TElem (T's are fixed)."""
    if isinstance(e, WeylOp):
        return fourier_op(e)
    return TElem(e.d, e.nt, {t: fourier_op(op) for t, op in e.terms.items()})


# ---------------------------------------------------------------------------
# univariate polynomials in s


class SPoly:
    """Univariate polynomial in s; ``coeffs[k]`` multiplies s^k."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Sequence = ()):
        cs = [Fraction(c) for c in coeffs]
        while cs and cs[-1] == 0:
            cs.pop()
        self.coeffs = tuple(cs)

    @classmethod
    def from_roots(cls, roots: Iterable) -> "SPoly":
        out = cls([1])
        for r in roots:
            out = out * cls([-Fraction(r), 1])
        return out

    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __mul__(self, other: "SPoly") -> "SPoly":
        if not self.coeffs or not other.coeffs:
            return SPoly()
        out = [Fraction(0)] * (len(self.coeffs) + len(other.coeffs) - 1)
        for i, a in enumerate(self.coeffs):
            for j, b in enumerate(other.coeffs):
                out[i + j] += a * b
        return SPoly(out)

    def __call__(self, s):
        v = Fraction(0)
        for c in reversed(self.coeffs):
            v = v * s + c
        return v

    def __eq__(self, other):
        return isinstance(other, SPoly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"SPoly({[str(c) for c in self.coeffs]})"


def s_operator(d: int) -> WeylOp:
    """s = -(x_1 d_1 + ... + x_d d_d)."""
    out = {}
    for i in range(d):
        e = [0] * (2 * d)
        e[i] = 1
        e[d + i] = 1
        out[tuple(e)] = Fraction(-1)
    return WeylOp._raw(d, out)


def expand_s_polynomial(b: SPoly, d: int) -> WeylOp:
    """Normal-ordered b(s) with s = -sum x_i d_i, by Horner's rule."""
    if d < 1:
        raise ValueError("d must be positive")
    s = s_operator(d)
    out = WeylOp(d)
    for c in reversed(b.coeffs):
        out = out * s + c
    return out


def pochhammer_sum(k: int, d: int) -> WeylOp:
    """(-1)^(k+1) * sum_{|a|=k+1} (k+1)!/a! x^a d^a."""
    out = {}
    sign = -1 if (k + 1) % 2 else 1
    for a in monomials_of_degree(d, k + 1):
        w = factorial(k + 1)
        for ai in a:
            w //= factorial(ai)
        out[a + a] = Fraction(sign * w)
    return WeylOp._raw(d, out)


# ---------------------------------------------------------------------------
# parsing


def _op_parser(text, d, xnames, tnames=()):
    xnames = list(xnames or [f"x{i + 1}" for i in range(d)])
    dnames = [f"d{i + 1}" for i in range(d)]
    tnames = list(tnames)
    nt = len(tnames)
    table = {n: ("x", i) for i, n in enumerate(xnames)}
    table.update({n: ("d", i) for i, n in enumerate(dnames)})
    table.update({n: ("T", i) for i, n in enumerate(tnames)})

    # elements: dict T-exponent -> dict weyl-monomial -> coeff
    def factor(name, power, pos):
        kind, i = table[name]
        e = [0] * (2 * d)
        t = [0] * nt
        if kind == "x":
            e[i] = power
        elif kind == "d":
            e[d + i] = power
        else:
            t[i] = power
        return {tuple(t): {tuple(e): Fraction(1)}}

    def mul(a, b):
        out = {}
        for t1, o1 in a.items():
            for t2, o2 in b.items():
                t = tuple(i + j for i, j in zip(t1, t2))
                acc = out.setdefault(t, {})
                add_into(acc, weyl_mul_dicts(o1, o2, d))
                if not acc:
                    del out[t]
        return out

    def add(a, b):
        out = {t: dict(o) for t, o in a.items()}
        for t, o in b.items():
            acc = out.setdefault(t, {})
            add_into(acc, o)
            if not acc:
                del out[t]
        return out

    def scale(a, c):
        if not c:
            return {}
        return {t: {m: v * c for m, v in o.items()} for t, o in a.items()}

    one = {(0,) * nt: {(0,) * (2 * d): Fraction(1)}}
    parser = TermParser(text, lambda n: n in table, factor, one, mul, add, scale)
    return parser.parse()


def parse_op(text: str, d: int, xnames: Optional[Sequence[str]] = None) -> WeylOp:
    """Parse an operator; products are taken in the order written and normal-ordered.

    >>> str(parse_op("d1*x1", 1))
    'x1*d1 + 1'
    """
    raw = _op_parser(text, d, xnames)
    return WeylOp(d, raw.get((), {}))


def parse_telem(text: str, d: int, nt: int, xnames=None, tnames=None) -> TElem:
    tnames = list(tnames or [f"T{i + 1}" for i in range(nt)])
    raw = _op_parser(text, d, xnames, tnames)
    return TElem(d, nt, {t: WeylOp(d, o) for t, o in raw.items()})


def op_from_poly(f: Poly, to: str = "x") -> WeylOp:
    """Embed a polynomial in the x-variables of ``f.ring`` as an operator.

    ``to="x"`` keeps it a multiplication operator, ``to="d"`` replaces x_i by d_i.
    """
    xi = f.ring.x_indices
    d = len(xi)
    out = {}
    for m, c in f.terms.items():
        if any(m[i] for i in f.ring.t_indices):
            raise ValueError("polynomial involves T-variables")
        e = tuple(m[i] for i in xi)
        out[(e + (0,) * d) if to == "x" else ((0,) * d + e)] = c
    return WeylOp._raw(d, out)


__all__ = [
    "WeylOp", "TElem", "SPoly", "DimensionMismatch", "ParseError", "Ring",
    "weyl_product", "weyl_apply", "fourier", "transpose_tau", "expand_s_polynomial",
    "pochhammer_sum", "parse_op", "parse_telem", "commutator", "s_operator", "op_from_poly",
]
