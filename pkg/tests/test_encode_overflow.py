"""Scalar conversions, unsigned wraparound and overflow predicates."""
from fractions import Fraction

import pytest

import minibmc.terms as T
from minibmc.encode import (BITVECTOR, INTEGER_REAL, EncodingCtx,
                            encode_unsigned_wraparound)
from minibmc.overflow import overflow_predicates, signed_bounds
from minibmc.simplify import simplify, _signed
from minibmc.typeinfo import TypeInfo, Widths

BV = EncodingCtx(BITVECTOR)
IR = EncodingCtx(INTEGER_REAL)

S8 = TypeInfo("signedbv", width=8)
U8 = TypeInfo("unsignedbv", width=8)
S32 = TypeInfo("signedbv", width=32)
S4 = TypeInfo("signedbv", width=4)
BOOL = TypeInfo("bool", width=1)
FX = TypeInfo("fixedbv", width=32, fraction_bits=16)


class TestConvert:
    def test_sign_extension_of_minus_one(self):
        v = BV.convert(T.mk_bv(-1, 8), S8, S32)
        assert simplify(v).attr == T.bv_mask(32)

    def test_widening_unsigned_zero_extends(self):
        v = BV.convert(T.mk_var("c", T.BvSort(8)), U8, S32)
        assert v.kind == T.ZEXT and v.attr == 24

    def test_widening_signed_sign_extends(self):
        v = BV.convert(T.mk_var("c", T.BvSort(8)), S8, S32)
        assert v.kind == T.SEXT and v.attr == 24

    def test_narrowing_extracts_low_bits(self):
        v = BV.convert(T.mk_var("w", T.BvSort(32)), S32, S8)
        assert v.kind == T.EXTRACT and v.attr == (7, 0)

    def test_numeric_to_bool_case_split(self):
        # v == 0 maps to false, anything else to true
        assert BV.convert(T.mk_bv(0, 32), S32, BOOL) is T.FALSE
        assert BV.convert(T.mk_bv(5, 32), S32, BOOL) is T.TRUE
        x = T.mk_var("v", T.BvSort(32))
        f = BV.convert(x, S32, BOOL)
        assert f.kind == T.NOT and f.args[0].kind == T.EQ

    def test_bool_to_numeric_via_ite(self):
        g = T.mk_var("t", T.BOOL_S)
        v = BV.convert(g, BOOL, S32)
        assert v.kind == T.ITE

    def test_fixed_point_to_int_truncates_toward_zero(self):
        raw = BV.fixed_literal(Fraction(3, 2), FX)
        assert raw.attr == 0x18000
        v = simplify(BV.convert(raw, FX, S32))
        assert v.attr == 1
        neg = BV.fixed_literal(Fraction(-3, 2), FX)
        v2 = simplify(BV.convert(neg, FX, S32))
        assert T.bv_signed_value(v2) == -1

    def test_int_to_fixed_shifts_binary_point(self):
        v = simplify(BV.convert(T.mk_bv(3, 32), S32, FX))
        assert v.attr == 3 << 16

    def test_integer_mode_conversions_are_value_preserving(self):
        x = T.mk_var("ix", T.INT_S)
        assert IR.convert(x, S32, S8) is x
        r = IR.convert(x, S32, TypeInfo("fixedbv", width=32, fraction_bits=16))
        assert r.kind == T.TO_REAL


class TestWraparound:
    def test_modulo_below_modulus_unchanged(self):
        x = T.mk_var("u8", T.BvSort(8))
        assert encode_unsigned_wraparound(x, 8) is x

    def test_extended_result_reduced(self):
        wide = T.mk_add(T.mk_zero_ext(T.mk_bv(250, 8), 1),
                        T.mk_zero_ext(T.mk_bv(10, 8), 1))
        assert simplify(encode_unsigned_wraparound(wide, 8)).attr == 4

    def test_4bit_multiplication(self):
        # 15*15 mod 16 == 1, cross-checked exhaustively below
        v = simplify(T.mk_mul(T.mk_bv(15, 4), T.mk_bv(15, 4)))
        assert v.attr == 1

    def test_exhaustive_4bit_matches_modulo_oracle(self):
        for op, mk in (("+", T.mk_add), ("-", T.mk_sub), ("*", T.mk_mul)):
            for a in range(16):
                for b in range(16):
                    got = simplify(mk(T.mk_bv(a, 4), T.mk_bv(b, 4))).attr
                    ref = {"+": a + b, "-": a - b, "*": a * b}[op] % 16
                    assert got == ref


def _oracle_overflow(op, a, b, w):
    lo, hi = signed_bounds(w)
    if op == "+":
        r = a + b
    elif op == "-":
        r = a - b
    elif op == "*":
        r = a * b
    elif op == "/":
        r = None if b == 0 else abs(a) // abs(b) * (1 if (a < 0) == (b < 0) else -1)
    elif op == "neg":
        r = -a
    if r is None:
        return False, False
    return r > hi, r < lo


class TestOverflowPredicates:
    @pytest.mark.parametrize("op", ["+", "-", "*", "/"])
    def test_width4_exhaustive(self, op):
        for ra in range(16):
            for rb in range(16):
                a, b = _signed(ra, 4), _signed(rb, 4)
                preds = overflow_predicates(BV, op, T.mk_bv(ra, 4),
                                            T.mk_bv(rb, 4), S4)
                ovf = simplify(preds["overflow"]) is T.TRUE
                unf = simplify(preds["underflow"]) is T.TRUE
                want_o, want_u = _oracle_overflow(op, a, b, 4)
                assert (ovf, unf) == (want_o, want_u), (op, a, b)

    def test_negation_exhaustive(self):
        for ra in range(16):
            a = _signed(ra, 4)
            preds = overflow_predicates(BV, "neg", T.mk_bv(ra, 4), None, S4)
            assert (simplify(preds["overflow"]) is T.TRUE) == (a == -8)

    def test_examples(self):
        p = overflow_predicates(BV, "+", T.mk_bv(7, 4), T.mk_bv(1, 4), S4)
        assert simplify(p["overflow"]) is T.TRUE
        p = overflow_predicates(BV, "/", T.mk_bv(-8, 4), T.mk_bv(-1, 4), S4)
        assert simplify(p["overflow"]) is T.TRUE

    def test_adding_zero_never_overflows(self):
        # semantic, not syntactic: discharge through the bit-blaster
        from minibmc.bitblast import Blaster
        from minibmc.cdcl import solve_cnf
        x = T.mk_var("o4", T.BvSort(4))
        p = overflow_predicates(BV, "+", x, T.mk_bv(0, 4), S4)
        for f in (p["overflow"], p["underflow"]):
            bl = Blaster()
            bl.clause(bl.blast(f))
            assert solve_cnf(bl.nvars, bl.clauses)[0] == "unsat"

    def test_integer_mode_uses_scaled_bounds(self):
        p = overflow_predicates(IR, "+", T.mk_int(7), T.mk_int(1), S4)
        assert simplify(p["overflow"]) is T.TRUE
        p = overflow_predicates(IR, "+", T.mk_int(3), T.mk_int(1), S4)
        assert simplify(p["overflow"]) is T.FALSE


class TestModeGuards:
    def test_bitwise_rejected_in_integer_mode(self):
        from minibmc.errors import DiagnosticsError
        with pytest.raises(DiagnosticsError):
            IR.bitwise("&", T.mk_int(1), T.mk_int(2))
        with pytest.raises(DiagnosticsError):
            IR.shift("<<", T.mk_int(1), T.mk_int(2), S32)
