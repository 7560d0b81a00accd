"""Constant folding and algebraic simplification."""
import random

import pytest
from hypothesis import given, strategies as st

import minibmc.terms as T
from minibmc.simplify import simplify, _signed

W = 4
MASK = 15


def bv(v, w=W):
    return T.mk_bv(v, w)


X = T.mk_var("sx", T.BvSort(W))


def _py_ref(op, a, b, w):
    mask = (1 << w) - 1
    if op == "add":
        return (a + b) & mask
    if op == "sub":
        return (a - b) & mask
    if op == "mul":
        return (a * b) & mask
    if op == "and":
        return a & b
    if op == "or":
        return a | b
    if op == "xor":
        return a ^ b
    if op == "shl":
        return (a << b) & mask if b < w else 0
    if op == "lshr":
        return a >> b if b < w else 0
    raise AssertionError(op)


_MK = {"add": T.mk_add, "sub": T.mk_sub, "mul": T.mk_mul, "and": T.mk_bvand,
       "or": T.mk_bvor, "xor": T.mk_bvxor, "shl": T.mk_shl, "lshr": T.mk_lshr}


class TestFolding:
    @pytest.mark.parametrize("op", sorted(_MK))
    def test_width4_exhaustive_against_modulo_oracle(self, op):
        for a in range(16):
            for b in range(16):
                got = simplify(_MK[op](bv(a), bv(b)))
                assert T.is_const(got)
                assert got.attr == _py_ref(op, a, b, W), (op, a, b)

    @pytest.mark.parametrize("op", sorted(_MK))
    def test_width8_sampled_against_modulo_oracle(self, op):
        rng = random.Random(7)
        for _ in range(300):
            a, b = rng.randrange(256), rng.randrange(256)
            got = simplify(_MK[op](bv(a, 8), bv(b, 8)))
            assert got.attr == _py_ref(op, a, b, 8)

    def test_mode_dependent_fold(self):
        # 8-bit fold wraps; integer fold is exact
        assert simplify(T.mk_add(bv(200, 8), bv(100, 8))).attr == 44
        assert simplify(T.mk_add(T.mk_int(200), T.mk_int(100))).attr == 300

    def test_signed_division_folds(self):
        assert simplify(T.mk_div(bv(-8, 4), bv(-1, 4), signed=True)).attr == 8
        # truncation toward zero: -7 / 2 == -3
        assert T.bv_signed_value(
            simplify(T.mk_div(bv(-7, 4), bv(2, 4), signed=True))) == -3
        # remainder takes the dividend's sign
        assert T.bv_signed_value(
            simplify(T.mk_rem(bv(-7, 4), bv(2, 4), signed=True))) == -1

    def test_relation_folding_respects_signedness(self):
        assert simplify(T.mk_lt(bv(15), bv(0), signed=True)) is T.TRUE
        assert simplify(T.mk_lt(bv(15), bv(0), signed=False)) is T.FALSE


class TestIdentities:
    def test_additive_and_bitwise(self):
        assert simplify(T.mk_add(X, bv(0))) is X
        assert simplify(T.mk_sub(X, X)).attr == 0
        assert simplify(T.mk_bvand(X, bv(0))).attr == 0
        assert simplify(T.mk_bvand(X, bv(MASK))) is X
        assert simplify(T.mk_bvxor(X, X)).attr == 0
        assert simplify(T.mk_mul(X, bv(1))) is X

    def test_store_over_store_same_index(self):
        a = T.mk_var("sa", T.ArraySort(T.BvSort(W), T.BvSort(W), 4))
        i = T.mk_var("si", T.BvSort(W))
        s = T.mk_store(T.mk_store(a, i, bv(1)), i, bv(2))
        assert simplify(s) is T.mk_store(a, i, bv(2))

    def test_select_of_store(self):
        a = T.mk_var("sa", T.ArraySort(T.BvSort(W), T.BvSort(W), 4))
        i = T.mk_var("si", T.BvSort(W))
        assert simplify(T.mk_select(T.mk_store(a, i, bv(3)), i)) is bv(3)
        # distinct constant indices skip over the store
        s = T.mk_select(T.mk_store(a, bv(0), bv(3)), bv(1))
        assert simplify(s) is T.mk_select(a, bv(1))

    def test_deep_constant_store_chain_select(self):
        a = T.mk_var("sa", T.ArraySort(T.BvSort(W), T.BvSort(W), 4))
        chain = a
        for j in range(4):
            chain = T.mk_store(chain, bv(j), bv(j + 1))
        assert simplify(T.mk_select(chain, bv(0))) is bv(1)

    def test_complementary_literals(self):
        g = T.mk_var("sg", T.BOOL_S)
        assert simplify(T.mk_or(g, T.mk_not(g))) is T.TRUE
        assert simplify(T.mk_and(g, T.mk_not(g))) is T.FALSE

    def test_unsigned_ge_zero(self):
        assert simplify(T.mk_ge(X, bv(0), signed=False)) is T.TRUE


_leafs = st.sampled_from(["x", "y", "0", "1", "7"])


@st.composite
def term_shapes(draw, depth=3):
    if depth == 0 or draw(st.booleans()):
        return draw(_leafs)
    op = draw(st.sampled_from(["add", "sub", "mul", "and", "xor", "ite"]))
    if op == "ite":
        return (op, draw(term_shapes(depth=depth - 1)),
                draw(term_shapes(depth=depth - 1)))
    return (op, draw(term_shapes(depth=depth - 1)),
            draw(term_shapes(depth=depth - 1)))


def _build(shape):
    if isinstance(shape, str):
        if shape in ("x", "y"):
            return T.mk_var("s_" + shape, T.BvSort(W))
        return bv(int(shape))
    op, a, b = shape
    ta, tb = _build(a), _build(b)
    if op == "ite":
        return T.mk_ite(T.mk_lt(ta, tb, True), ta, tb)
    return _MK[op](ta, tb)


class TestProperties:
    @given(term_shapes())
    def test_idempotent(self, shape):
        t = _build(shape)
        s = simplify(t)
        assert simplify(s) is s

    @given(term_shapes(), st.integers(0, 15), st.integers(0, 15))
    def test_preserves_value(self, shape, vx, vy):
        from minibmc.evalterm import eval_term
        t = _build(shape)
        env = {T.mk_var("s_x", T.BvSort(W)): vx, T.mk_var("s_y", T.BvSort(W)): vy}
        assert eval_term(t, env) == eval_term(simplify(t), env)
