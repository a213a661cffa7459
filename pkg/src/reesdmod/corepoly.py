"""Exact commutative polynomials over Q with bigraded bookkeeping.

Coefficients are :class:`fractions.Fraction` throughout. A :class:`Ring`
fixes an ordered variable list, a per-variable kind (``"x"`` or ``"T"``)
and an ambient monomial order; a :class:`Poly` is an immutable map from
exponent tuples to nonzero rationals.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from typing import Callable, Dict, Iterable, Iterator, Optional, Sequence, Tuple

Rat = Fraction
Mono = Tuple[int, ...]

X_KIND = "x"
T_KIND = "T"


class ParseError(ValueError):
    """Syntax error in polynomial text; ``pos`` is a 0-based offset."""

    def __init__(self, message: str, text: str, pos: int):
        self.text = text
        self.pos = pos
        super().__init__(f"{message} at position {pos}: {text!r}")


class RingMismatch(ValueError):
    pass


@dataclass(frozen=True)
class BiDeg:
    """Bidegree (p, q): p counts T-variables, q counts x-variables."""

    p: int
    q: int

    def __add__(self, other: "BiDeg") -> "BiDeg":
        return BiDeg(self.p + other.p, self.q + other.q)

    def __le__(self, other: "BiDeg") -> bool:
        return self.p <= other.p and self.q <= other.q


# ---------------------------------------------------------------------------
# monomial orders


@dataclass(frozen=True)
class MonoOrder:
    """A monomial order, compared through a sort key (larger key = larger).

    kinds: ``lex``, ``grevlex``, ``weighted`` (weights + tiebreak order) and
    ``block`` (consecutive variable blocks, each with its own order, earlier
    blocks dominating -- an elimination order for the first blocks).
    """

    kind: str
    weights: Tuple[int, ...] = ()
    tiebreak: Optional["MonoOrder"] = None
    blocks: Tuple[int, ...] = ()
    inner: Tuple["MonoOrder", ...] = ()

    @staticmethod
    def lex() -> "MonoOrder":
        return MonoOrder("lex")

    @staticmethod
    def grevlex() -> "MonoOrder":
        return MonoOrder("grevlex")

    @staticmethod
    def weighted(weights: Sequence[int], tiebreak: Optional["MonoOrder"] = None) -> "MonoOrder":
        return MonoOrder("weighted", weights=tuple(weights), tiebreak=tiebreak or MonoOrder.grevlex())

    @staticmethod
    def block(sizes: Sequence[int], inner: Optional[Sequence["MonoOrder"]] = None) -> "MonoOrder":
        if inner is None:
            inner = [MonoOrder.grevlex()] * len(sizes)
        if len(inner) != len(sizes):
            raise ValueError("one inner order per block")
        return MonoOrder("block", blocks=tuple(sizes), inner=tuple(inner))

    def key(self) -> Callable[[Mono], tuple]:
        """Return a function mapping an exponent tuple to its sort key."""
        kind = self.kind
        if kind == "lex":
            return lambda e: e
        if kind == "grevlex":
            return lambda e: (sum(e), tuple(-a for a in reversed(e)))
        if kind == "weighted":
            w = self.weights
            tb = self.tiebreak.key()
            return lambda e: (sum(a * b for a, b in zip(w, e)), tb(e))
        if kind == "block":
            cuts = []
            start = 0
            for size in self.blocks:
                cuts.append((start, start + size))
                start += size
            keys = [o.key() for o in self.inner]
            pieces = list(zip(cuts, keys))
            return lambda e: tuple(k(e[a:b]) for (a, b), k in pieces)
        raise ValueError(f"unknown order kind {kind!r}")

    @property
    def is_degree_compatible(self) -> bool:
        return self.kind == "grevlex" or (self.kind == "weighted" and all(w > 0 for w in self.weights))


def compare(order: MonoOrder, a: Mono, b: Mono) -> int:
    """Three-way comparison: -1, 0 or 1."""
    if len(a) != len(b):
        raise ValueError("monomials of different length")
    k = order.key()
    ka, kb = k(a), k(b)
    return (ka > kb) - (ka < kb)


# ---------------------------------------------------------------------------
# rings


@dataclass(frozen=True)
class Ring:
    names: Tuple[str, ...]
    kinds: Tuple[str, ...]
    order: MonoOrder = field(default_factory=MonoOrder.grevlex)
    aliases: Tuple[Tuple[str, str], ...] = ()

    def __post_init__(self):
        if len(self.names) != len(self.kinds):
            raise ValueError("names and kinds differ in length")
        if len(set(self.names)) != len(self.names):
            raise ValueError("duplicate variable name")

    @staticmethod
    def polynomial(names: Sequence[str], order: Optional[MonoOrder] = None) -> "Ring":
        names = tuple(names)
        return Ring(names, (X_KIND,) * len(names), order or MonoOrder.grevlex())

    @staticmethod
    def bigraded(xnames: Sequence[str], tnames: Sequence[str], order: Optional[MonoOrder] = None,
                 aliases: Sequence[Tuple[str, str]] = ()) -> "Ring":
        names = tuple(xnames) + tuple(tnames)
        kinds = (X_KIND,) * len(xnames) + (T_KIND,) * len(tnames)
        return Ring(names, kinds, order or MonoOrder.grevlex(), tuple(aliases))

    @property
    def nvars(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        for alias, target in self.aliases:
            if alias == name:
                name = target
        try:
            return self.names.index(name)
        except ValueError:
            raise KeyError(name) from None

    def known(self, name: str) -> bool:
        try:
            self.index(name)
            return True
        except KeyError:
            return False

    @property
    def x_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, k in enumerate(self.kinds) if k == X_KIND)

    @property
    def t_indices(self) -> Tuple[int, ...]:
        return tuple(i for i, k in enumerate(self.kinds) if k == T_KIND)

    def with_order(self, order: MonoOrder) -> "Ring":
        return Ring(self.names, self.kinds, order, self.aliases)

    def bidegree(self, e: Mono) -> BiDeg:
        p = q = 0
        for a, k in zip(e, self.kinds):
            if k == T_KIND:
                p += a
            else:
                q += a
        return BiDeg(p, q)

    def var(self, name: str) -> "Poly":
        e = [0] * self.nvars
        e[self.index(name)] = 1
        return Poly(self, {tuple(e): Fraction(1)})

    def gens(self) -> Tuple["Poly", ...]:
        return tuple(self.var(n) for n in self.names)

    def zero(self) -> "Poly":
        return Poly(self, {})

    def one(self) -> "Poly":
        return self.const(1)

    def const(self, c) -> "Poly":
        c = Fraction(c)
        return Poly(self, {(0,) * self.nvars: c} if c else {})


# ---------------------------------------------------------------------------
# raw term-dict helpers (hot paths in the Groebner engines use these directly)


def add_into(acc: Dict, other: Dict, scale=1) -> None:
    for m, c in other.items():
        v = acc.get(m, 0) + scale * c
        if v:
            acc[m] = v
        else:
            acc.pop(m, None)


def mono_mul(a: Mono, b: Mono) -> Mono:
    return tuple(x + y for x, y in zip(a, b))


def mono_divides(a: Mono, b: Mono) -> bool:
    return all(x <= y for x, y in zip(a, b))


def mono_div(b: Mono, a: Mono) -> Mono:
    return tuple(y - x for x, y in zip(a, b))


def mono_lcm(a: Mono, b: Mono) -> Mono:
    return tuple(max(x, y) for x, y in zip(a, b))


def dict_mul(a: Dict, b: Dict) -> Dict:
    out: Dict = {}
    for ma, ca in a.items():
        for mb, cb in b.items():
            m = mono_mul(ma, mb)
            v = out.get(m, 0) + ca * cb
            if v:
                out[m] = v
            else:
                out.pop(m, None)
    return out


# ---------------------------------------------------------------------------
# polynomials


class Poly:
    """Immutable polynomial: ``ring`` plus a map exponent-tuple -> Fraction."""

    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: Ring, terms: Dict[Mono, Fraction]):
        self.ring = ring
        self.terms = {m: Fraction(c) for m, c in terms.items() if c}
        self._hash = None

    # construction -----------------------------------------------------------
    @classmethod
    def _raw(cls, ring: Ring, terms: Dict[Mono, Fraction]) -> "Poly":
        p = cls.__new__(cls)
        p.ring = ring
        p.terms = terms
        p._hash = None
        return p

    def _check(self, other: "Poly") -> None:
        if self.ring.names != other.ring.names or self.ring.kinds != other.ring.kinds:
            raise RingMismatch(f"{self.ring.names} vs {other.ring.names}")

    def _coerce(self, other) -> "Poly":
        if isinstance(other, Poly):
            self._check(other)
            return other
        if isinstance(other, (int, Fraction)):
            return self.ring.const(other)
        return NotImplemented

    # arithmetic -------------------------------------------------------------
    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        add_into(out, other.terms)
        return Poly._raw(self.ring, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly._raw(self.ring, {m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        add_into(out, other.terms, -1)
        return Poly._raw(self.ring, out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return other
        return Poly._raw(self.ring, dict_mul(self.terms, other.terms))

    __rmul__ = __mul__

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative power")
        out = self.ring.one()
        base = self
        while k:
            if k & 1:
                out = out * base
            base = base * base
            k >>= 1
        return out

    def scale(self, c) -> "Poly":
        c = Fraction(c)
        if not c:
            return self.ring.zero()
        return Poly._raw(self.ring, {m: v * c for m, v in self.terms.items()})

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = self.ring.const(other)
        if not isinstance(other, Poly):
            return NotImplemented
        return self.ring.names == other.ring.names and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.names, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self):
        return bool(self.terms)

    # inspection -------------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.terms

    def sorted_terms(self, order: Optional[MonoOrder] = None) -> Iterator[Tuple[Mono, Fraction]]:
        """Terms in decreasing order (the ring's ambient order by default)."""
        key = (order or self.ring.order).key()
        return iter(sorted(self.terms.items(), key=lambda t: key(t[0]), reverse=True))

    def leading_term(self, order: Optional[MonoOrder] = None) -> Tuple[Mono, Fraction]:
        if not self.terms:
            raise ValueError("zero polynomial has no leading term")
        key = (order or self.ring.order).key()
        m = max(self.terms, key=key)
        return m, self.terms[m]

    def total_degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def is_homogeneous(self) -> bool:
        return len({sum(m) for m in self.terms}) <= 1

    def bidegree(self) -> Optional[BiDeg]:
        """Common bidegree of all terms, or None if not bihomogeneous (or zero)."""
        degs = {self.ring.bidegree(m) for m in self.terms}
        return degs.pop() if len(degs) == 1 else None

    def variables(self) -> Tuple[int, ...]:
        used = set()
        for m in self.terms:
            used.update(i for i, a in enumerate(m) if a)
        return tuple(sorted(used))

    def coefficient(self, m: Mono) -> Fraction:
        return self.terms.get(tuple(m), Fraction(0))

    def monic(self, order: Optional[MonoOrder] = None) -> "Poly":
        if not self.terms:
            return self
        return self.scale(1 / self.leading_term(order)[1])

    def to_ring(self, ring: Ring, mapping: Optional[Sequence[int]] = None) -> "Poly":
        """Re-embed into ``ring``; ``mapping[i]`` is the target index of variable i."""
        if mapping is None:
            mapping = [ring.index(n) for n in self.ring.names]
        out: Dict[Mono, Fraction] = {}
        for m, c in self.terms.items():
            e = [0] * ring.nvars
            for i, a in enumerate(m):
                if a:
                    e[mapping[i]] += a
            out[tuple(e)] = c
        return Poly._raw(ring, out)

    def derivative(self, i: int) -> "Poly":
        out: Dict[Mono, Fraction] = {}
        for m, c in self.terms.items():
            if m[i]:
                e = list(m)
                e[i] -= 1
                out[tuple(e)] = c * m[i]
        return Poly._raw(self.ring, out)

    # printing ---------------------------------------------------------------
    def __str__(self):
        return format_terms(self.sorted_terms(), self.ring.names)

    def __repr__(self):
        return f"Poly({str(self)!r})"


def format_monomial(m: Mono, names: Sequence[str]) -> str:
    parts = []
    for a, n in zip(m, names):
        if a == 1:
            parts.append(n)
        elif a > 1:
            parts.append(f"{n}^{a}")
    return "*".join(parts)


def format_coeff_term(c: Fraction, mono: str, first: bool) -> str:
    sign = "-" if c < 0 else "+"
    a = abs(c)
    if mono:
        body = mono if a == 1 else f"{a}*{mono}"
    else:
        body = str(a)
    if first:
        return body if sign == "+" else "-" + body
    return f" {sign} {body}"


def format_terms(items: Iterable[Tuple[Mono, Fraction]], names: Sequence[str]) -> str:
    out = []
    for m, c in items:
        out.append(format_coeff_term(c, format_monomial(m, names), not out))
    return "".join(out) if out else "0"


# ---------------------------------------------------------------------------
# parsing

_TOKEN = re.compile(r"\s*(?:(?P<num>\d+)|(?P<id>[A-Za-z_][A-Za-z0-9_]*)|(?P<op>[-+*/^]))")


def tokenize(text: str):
    pos = 0
    toks = []
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        mt = _TOKEN.match(text, pos)
        if not mt:
            bad = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[bad]!r}", text, bad)
        kind = mt.lastgroup
        toks.append((kind, mt.group(kind), mt.start(kind)))
        pos = mt.end()
    toks.append(("end", "", len(text)))
    return toks


def split_identifier(ident: str, known: Callable[[str], bool]) -> Optional[list]:
    """Split a run like ``xyz`` or ``xK_3`` into known variable names."""
    if known(ident):
        return [ident]
    for cut in range(len(ident) - 1, 0, -1):
        head = ident[:cut]
        if known(head):
            rest = split_identifier(ident[cut:], known)
            if rest is not None:
                return [head] + rest
    return None


class TermParser:
    """Recursive-descent parser for ``expr := term (('+'|'-') term)*``.

    Factors are resolved by ``factor_fn(name, power, pos)`` and multiplied with
    ``mul``; this lets the Weyl-operator parser reuse the grammar with a
    noncommutative product.
    """

    def __init__(self, text: str, known, factor_fn, one, mul, add, scale):
        self.text = text
        self.toks = tokenize(text)
        self.i = 0
        self.known = known
        self.factor_fn = factor_fn
        self.one = one
        self.mul = mul
        self.add = add
        self.scale = scale

    def peek(self):
        return self.toks[self.i]

    def take(self):
        t = self.toks[self.i]
        self.i += 1
        return t

    def error(self, msg, pos=None):
        raise ParseError(msg, self.text, self.peek()[2] if pos is None else pos)

    def parse(self):
        total = None
        sign = 1
        kind, val, pos = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            sign = -1 if val == "-" else 1
        elif kind == "end":
            self.error("empty expression")
        total = self.scale(self.term(), sign)
        while True:
            kind, val, pos = self.peek()
            if kind == "end":
                return total
            if kind == "op" and val in "+-":
                self.take()
                total = self.add(total, self.scale(self.term(), -1 if val == "-" else 1))
            else:
                self.error(f"expected '+' or '-' but found {val!r}")

    def term(self):
        coeff = Fraction(1)
        kind, val, pos = self.peek()
        value = None
        if kind == "num":
            self.take()
            num = int(val)
            if self.peek()[:2] == ("op", "/"):
                self.take()
                k2, v2, p2 = self.take()
                if k2 != "num":
                    self.error("expected denominator", p2)
                if int(v2) == 0:
                    self.error("zero denominator", p2)
                coeff = Fraction(num, int(v2))
            else:
                coeff = Fraction(num)
            value = self.one
        elif kind != "id":
            self.error(f"expected coefficient or variable but found {val or 'end of input'!r}")
        else:
            value = self.one
        nfactors = 0
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "*":
                self.take()
                kind, val, pos = self.peek()
                if kind != "id":
                    self.error("expected variable after '*'")
            if kind != "id":
                break
            self.take()
            names = split_identifier(val, self.known)
            if names is None:
                raise ParseError(f"unknown variable {val!r}", self.text, pos)
            power = 1
            if self.peek()[:2] == ("op", "^"):
                self.take()
                k2, v2, p2 = self.take()
                if k2 != "num":
                    self.error("expected exponent", p2)
                power = int(v2)
            for j, name in enumerate(names):
                value = self.mul(value, self.factor_fn(name, power if j == len(names) - 1 else 1, pos))
            nfactors += 1
        return self.scale(value, coeff)


def parse_poly(text: str, ring: Ring) -> Poly:
    """Parse ``text`` into a :class:`Poly` over ``ring``.

    >>> R = Ring.polynomial("xyz")
    >>> str(parse_poly("-x^3z + xyz^2", R))
    '-x^3*z + x*y*z^2'
    """

    def factor(name, power, pos):
        e = [0] * ring.nvars
        e[ring.index(name)] = power
        return {tuple(e): Fraction(1)}

    def add(a, b):
        out = dict(a)
        add_into(out, b)
        return out

    def scale(a, c):
        return {m: v * c for m, v in a.items()} if c else {}

    parser = TermParser(text, ring.known, factor, {(0,) * ring.nvars: Fraction(1)}, dict_mul, add, scale)
    return Poly(ring, parser.parse())


# ---------------------------------------------------------------------------
# monomial enumeration


def monomials_of_degree(nvars: int, degree: int) -> list:
    """Exponent tuples of the given total degree, in decreasing lex order."""
    if degree < 0:
        return []
    if nvars == 0:
        return [()] if degree == 0 else []
    out = []
    for combo in combinations_with_replacement(range(nvars), degree):
        e = [0] * nvars
        for i in combo:
            e[i] += 1
        out.append(tuple(e))
    out.sort(reverse=True)
    return out


def monomials_of_bidegree(ring: Ring, bidegree: BiDeg) -> list:
    """All monomials of ``ring`` with the given bidegree.

    Ordered lexicographically on the T-block first and the x-block second,
    largest first (T1^2, T1*T2, ..., T4^2 for T-degree 2 in four variables).
    """
    if bidegree.p < 0 or bidegree.q < 0:
        return []
    xi, ti = ring.x_indices, ring.t_indices
    out = []
    for te in monomials_of_degree(len(ti), bidegree.p):
        for xe in monomials_of_degree(len(xi), bidegree.q):
            e = [0] * ring.nvars
            for i, a in zip(ti, te):
                e[i] = a
            for i, a in zip(xi, xe):
                e[i] = a
            out.append(tuple(e))
    return out
