from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from reesdmod.corepoly import BiDeg, MonoOrder, Poly, Ring, monomials_of_bidegree, parse_poly
from reesdmod.gbcomm import (NonMinimalShape, PresMatrix, buchberger, determinant, dimension,
                             eliminate, maximal_minors, normal_form, syzygy_presentation,
                             bigraded_slice_dim)
from reesdmod.linalg import Echelon, kernel_dim, nullspace, rank

from conftest import corner_matrix, matrix_input

LEX = MonoOrder.lex()
GREVLEX = MonoOrder.grevlex()


def R(names="xyz", order=None):
    return Ring.polynomial(names, order or GREVLEX)


def P(s, ring):
    return parse_poly(s, ring)


def test_small_lex_basis():
    r = R("xy", LEX)
    G = buchberger([P("x^2 - y", r), P("y", r)])
    assert [str(g) for g in G.basis] == ["y", "x^2"]


def test_unit_and_zero_ideals():
    r = R()
    assert buchberger([P("x", r), P("x + 1", r)]).is_unit()
    assert dimension(buchberger([P("x", r), P("x + 1", r)])) == -1
    assert dimension(buchberger([r.zero()], ring=r)) == 3


def test_elimination_examples():
    r = R("txy")
    G = buchberger([P("t - x", r), P("t^2 - y", r)])
    assert eliminate(G, ["t"]) == [P("x^2 - y", r)]
    twisted = buchberger([P("x - t", r), P("y - t^2", r)], MonoOrder.block([1, 2]))
    assert [str(g) for g in eliminate(twisted, [0])] == ["x^2 - y"]


def test_dimension_examples():
    r = R()
    assert dimension(buchberger([P("x", r), P("y", r)])) == 1
    assert dimension(buchberger([P("x*y", r), P("x*z", r)])) == 2
    assert dimension(buchberger([P("x", r), P("y", r), P("z", r)])) == 0


def test_minor_signs():
    r = R()
    phi = PresMatrix(r, [[P("x", r), r.zero()], [P("y", r), P("x", r)], [r.zero(), P("y", r)]])
    assert maximal_minors(phi) == [-P("y^2", r), P("x*y", r), -P("x^2", r)]
    # the minors are syzygies of the rows
    f = maximal_minors(phi)
    for j in range(2):
        assert sum((phi.entries[i][j] * f[i] for i in range(3)), r.zero()).is_zero()


def test_determinant_matches_sympy():
    r = R()
    M = [[P("x", r), P("y + 1", r), P("z", r)], [P("x*y", r), P("2", r), P("0", r)],
         [P("z^2", r), P("x", r), P("y - z", r)]]
    x, y, z = sympy.symbols("x y z")
    sm = sympy.Matrix([[x, y + 1, z], [x * y, 2, 0], [z ** 2, x, y - z]])
    ours = sympy.sympify(str(determinant(M, r)).replace("^", "**"))
    assert sympy.expand(ours - sm.det()) == 0


def test_ex1_hilbert_burch_round_trip(ex1):
    f = maximal_minors(ex1.phi)
    listed = [P(s, ex1.ring) for s in ("x^4", "x^2*z^2", "-x^3*z + x*y*z^2", "-x^2*y*z + y^2*z^2 - x*z^3")]
    assert buchberger(f).basis == buchberger(listed).basis
    assert all(normal_form(g, buchberger(f)).is_zero() for g in listed)
    phi = syzygy_presentation(f)
    assert phi.nrows == 4 and phi.column_degrees() == [1, 1, 2]
    assert buchberger(maximal_minors(phi)).basis == buchberger(f).basis


def test_ex2_column_degrees(ex2):
    phi = syzygy_presentation(maximal_minors(ex2.phi))
    assert phi.column_degrees() == [1, 1, 5]


def test_non_minimal_shape():
    r = R()
    with pytest.raises(NonMinimalShape):
        syzygy_presentation([P("x^2", r), P("y^2", r), P("z^2", r)])


def test_slice_dims_against_linear_algebra():
    S = Ring.bigraded("xy", ["T1", "T2", "T3"])
    gens = [P("x*T1 + y*T2", S), P("x*T2 + y*T3", S)]
    G = buchberger(gens, MonoOrder.block([2, 3]), S)
    for p in range(0, 4):
        for u in range(0, 4):
            bd = BiDeg(p, u)
            target = monomials_of_bidegree(S, bd)
            index = {m: k for k, m in enumerate(target)}
            rows = []
            for g in gens:
                gb = g.bidegree()
                if gb.p > p or gb.q > u:
                    continue
                for m in monomials_of_bidegree(S, BiDeg(p - gb.p, u - gb.q)):
                    prod = g * Poly(S, {m: 1})
                    rows.append({index[t]: c for t, c in prod.terms.items()})
            assert bigraded_slice_dim(G, bd, "ideal") == rank(rows)
            assert bigraded_slice_dim(G, bd) == len(target) - rank(rows)


def test_linalg_basics():
    rows = [{0: Fraction(1), 1: Fraction(2)}, {0: Fraction(2), 1: Fraction(4)}, {2: Fraction(1)}]
    assert rank(rows) == 2 and kernel_dim(rows, 3) == 1
    ns = nullspace(rows)
    assert ns == [{0: Fraction(-2), 1: Fraction(1)}]
    e = Echelon()
    assert e.add(dict(rows[0])) and not e.add(dict(rows[1]))
    assert e.contains({0: Fraction(3), 1: Fraction(6)})


# --- properties -----------------------------------------------------------

R3 = R()
small = st.integers(-2, 2).map(Fraction)
monos = st.tuples(*[st.integers(0, 2)] * 3).filter(lambda m: sum(m) <= 3)
polys = st.dictionaries(monos, small, min_size=1, max_size=3).map(lambda t: Poly(R3, t)).filter(bool)
orders = st.sampled_from([GREVLEX, LEX, MonoOrder.weighted([1, 2, 1])])


def _spoly(f, g, order):
    mf, cf = f.leading_term(order)
    mg, cg = g.leading_term(order)
    l = tuple(max(a, b) for a, b in zip(mf, mg))
    uf = Poly(R3, {tuple(a - b for a, b in zip(l, mf)): 1 / cf})
    ug = Poly(R3, {tuple(a - b for a, b in zip(l, mg)): 1 / cg})
    return uf * f - ug * g


def _sympy_gb(gens, order):
    x, y, z = sympy.symbols("x y z")
    exprs = [sympy.sympify(str(g).replace("^", "**")) for g in gens]
    name = {"lex": "lex", "grevlex": "grevlex"}[order.kind]
    return sympy.groebner(exprs, x, y, z, order=name)


@settings(max_examples=200, deadline=None)
@given(st.lists(polys, min_size=1, max_size=3), orders)
def test_spairs_reduce_to_zero(gens, order):
    G = buchberger(gens, order, R3)
    for i, f in enumerate(G.basis):
        assert f.leading_term(order)[1] == 1
        for g in G.basis[i + 1:]:
            assert normal_form(_spoly(f, g, order), G).is_zero()
    for g in gens:
        assert G.contains(g)


@settings(max_examples=200, deadline=None)
@given(st.lists(polys, min_size=1, max_size=3), st.sampled_from([GREVLEX, LEX]))
def test_reduced_basis_matches_independent_engine(gens, order):
    G = buchberger(gens, order, R3)
    ref = _sympy_gb(gens, order)
    ours = {str(sympy.expand(sympy.sympify(str(g).replace("^", "**")))) for g in G.basis}
    theirs = {str(sympy.expand(e / sympy.Poly(e, *sympy.symbols("x y z")).LC(order=order.kind)))
              for e in ref.exprs}
    assert ours == theirs and len(G.basis) == len(ref.exprs)


@settings(max_examples=200, deadline=None)
@given(st.lists(polys, min_size=1, max_size=3), polys, st.lists(polys, min_size=3, max_size=3), orders)
def test_normal_form_sound(gens, r, qs, order):
    G = buchberger(gens, order, R3)
    f = r
    for q, g in zip(qs, gens):
        f = f + q * g
    nf = normal_form(f, G)
    assert nf == normal_form(r, G)
    assert G.contains(f - nf)
    leads = G.leads
    for m in nf.terms:
        assert not any(all(a <= b for a, b in zip(l, m)) for l in leads)
    assert normal_form(nf, G) == nf


@settings(max_examples=200, deadline=None)
@given(st.lists(st.tuples(*[st.integers(-2, 2)] * 3), min_size=1, max_size=3))
def test_dimension_of_linear_ideals(vectors):
    gens = [Poly(R3, {tuple(int(k == i) for k in range(3)): c for i, c in enumerate(v) if c})
            for v in vectors]
    gens = [g for g in gens if g]
    G = buchberger(gens, ring=R3)
    expected = 3 - sympy.Matrix(vectors).rank()
    assert dimension(G) == expected


def test_elimination_cross_check_between_orders():
    r = Ring.polynomial("txyz", GREVLEX)
    gens = [P("x - t^2", r), P("y - t^3", r), P("z - t*x", r)]
    a = buchberger(eliminate(buchberger(gens, LEX, r), ["t"]), GREVLEX, r)
    b = buchberger(eliminate(buchberger(gens, GREVLEX, r), ["t"]), GREVLEX, r)
    assert a.basis == b.basis and a.contains(P("x^3 - y^2", r))


def test_corner_minors_ideal_dimension():
    inp = matrix_input(corner_matrix(3))
    assert dimension(buchberger(inp.generators())) == 1
