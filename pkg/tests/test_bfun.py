from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from reesdmod.bfun import (BFunction, RangeExhausted, b_function_ideal, b_function_module,
                           component_ideals, default_root_range)
from reesdmod.gbweyl import DMatrix
from reesdmod.rees import build_H, relations_of
from reesdmod.weyl import WeylOp, parse_op

W3 = (-1, -1, -1)


def test_b_of_derivative_ideal():
    for d in (1, 2, 3):
        J = [WeylOp.D(d, i) for i in range(d)]
        assert b_function_ideal(J, (-1,) * d, range(-3, 4)) == BFunction((0,))


def test_b_of_coordinate_ideal():
    for d in (1, 2, 3):
        J = [WeylOp.x(d, i) for i in range(d)]
        assert b_function_ideal(J, (-1,) * d, range(-1, d + 1)) == BFunction((d,))


def test_b_of_unit_ideal():
    assert b_function_ideal([WeylOp.const(2, 1)], (-1, -1), range(0, 1)) == BFunction(())
    assert str(BFunction(())) == "1"


def test_range_too_small():
    J = [WeylOp.x(3, i) for i in range(3)]
    with pytest.raises(RangeExhausted):
        b_function_ideal(J, W3, range(-2, 1))


def test_non_squarefree_detected():
    # D (x1 d1)^2 = D s^2 has b = s^2, which the membership method must reject
    d = 1
    J = [parse_op("x1*d1", d) * parse_op("x1*d1", d)]
    with pytest.raises(RangeExhausted):
        b_function_ideal(J, (-1,), range(-2, 3))


def test_bfunction_value_semantics():
    b = BFunction((0, -1))
    assert b.roots == (0, -1) and b.degree == 2
    assert str(b) == "(s)(s + 1)"
    assert str(BFunction((2, Fraction(-1, 2)))) == "(s - 2)(s + 1/2)"
    assert b.lcm(BFunction((-1, -2))) == BFunction((0, -1, -2))
    assert b.poly()(0) == 0 and b.poly()(-1) == 0 and b.poly()(1) == 2
    assert BFunction((-1, 0)) == b and hash(BFunction((-1, 0))) == hash(b)


def test_default_root_range():
    assert list(default_root_range(4, 3)) == [-1, 0]
    assert list(default_root_range(7, 3)) == [-4, -3, -2, -1, 0]


def test_module_with_full_rows_is_one():
    d = 2
    one, zero = WeylOp.const(d, 1), WeylOp(d)
    H = DMatrix(d, [[one, zero], [zero, one]])
    assert b_function_module(H, (-1, -1), range(-2, 1)) == BFunction(())


@pytest.mark.parametrize("p,expected", [(3, (0,)), (4, (0,)), (5, (0, -1)), (6, (0, -1))])
def test_ex1_module_b(ex1, p, expected):
    _, L = relations_of(ex1)
    H = build_H(L, p)
    assert b_function_module(H, W3, default_root_range(ex1.nu, 3)) == BFunction(expected)


def test_routes_agree_on_ex1(ex1):
    _, L = relations_of(ex1)
    for p in (3, 4, 5):
        H = build_H(L, p)
        roots = default_root_range(ex1.nu, 3)
        assert b_function_module(H, W3, roots, "graded") == b_function_module(H, W3, roots, "gb")


def test_unknown_method(ex1):
    _, L = relations_of(ex1)
    with pytest.raises(ValueError):
        component_ideals(build_H(L, 3), 2, "magic")


def test_adding_rows_never_adds_roots(ex1):
    # enlarging N can only shrink the root set
    _, L = relations_of(ex1)
    H = build_H(L, 5)
    roots = range(-2, 1)
    base = b_function_module(H, W3, roots)
    extra = DMatrix(3, H.entries + [[WeylOp.D(3, 0)] + [WeylOp(3)] * (H.ncols - 1)])
    assert b_function_module(extra, W3, roots).root_set() <= base.root_set()


root_lists = st.lists(st.integers(-4, 4), max_size=4)


@settings(max_examples=200)
@given(root_lists, root_lists)
def test_lcm_is_multiset_union(a, b):
    A, B = BFunction(tuple(a)), BFunction(tuple(b))
    L = A.lcm(B)
    assert L == B.lcm(A)
    for r in set(a) | set(b):
        assert L.roots.count(r) == max(a.count(r), b.count(r))
    # lcm is divisible by both
    for r in set(a):
        assert A.roots.count(r) <= L.roots.count(r)
