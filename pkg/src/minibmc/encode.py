"""Bridge between program types and theory terms.

Houses the encoding-mode selection (bit-vector vs integer/real), the scalar
conversion rules built from Extract/SignExt/ZeroExt and ite, fixed-point
arithmetic, and the unsigned modulo rule.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from . import terms as T
from .errors import Diagnostic, DiagnosticsError, SourceLoc
from .terms import Term
from .typeinfo import TypeInfo, Widths

BITVECTOR = "bitvector"
INTEGER_REAL = "integer-real"


def scalar_view(ty: TypeInfo) -> TypeInfo:
    """Enumerations behave like their underlying signed integer type."""
    if ty.kind == "enumeration":
        return TypeInfo("signedbv", width=ty.width)
    return ty


@dataclass
class EncodingCtx:
    mode: str = BITVECTOR
    widths: Widths = None

    def __post_init__(self):
        if self.widths is None:
            self.widths = Widths()
        assert self.mode in (BITVECTOR, INTEGER_REAL)

    @property
    def is_bv(self) -> bool:
        return self.mode == BITVECTOR

    # ------------------------------------------------------------ sorts
    def object_id_sort(self) -> T.Sort:
        return T.BvSort(self.widths.object_id) if self.is_bv else T.INT_S

    def index_sort(self) -> T.Sort:
        return T.BvSort(self.widths.int_) if self.is_bv else T.INT_S

    def pointer_sort(self) -> T.TupleSort:
        return T.TupleSort((("o", self.object_id_sort()), ("i", self.index_sort())),
                           tag="$ptr")

    def sort_of(self, ty: TypeInfo) -> T.Sort:
        ty = scalar_view(ty)
        k = ty.kind
        if k == "bool":
            return T.BOOL_S
        if k in ("signedbv", "unsignedbv"):
            return T.BvSort(ty.width) if self.is_bv else T.INT_S
        if k == "fixedbv":
            return T.BvSort(ty.width) if self.is_bv else T.REAL_S
        if k == "pointer":
            return self.pointer_sort()
        if k == "array":
            return T.ArraySort(self.index_sort(), self.sort_of(ty.element), ty.length)
        if k == "structure":
            return T.TupleSort(tuple((n, self.sort_of(t)) for n, t in ty.fields),
                               tag=ty.tag)
        if k == "union":
            from .typeinfo import union_widest_member
            return T.TupleSort((("$v", self.sort_of(union_widest_member(ty))),),
                               tag=ty.tag)
        raise AssertionError(k)

    # --------------------------------------------------------- constants
    def object_id(self, value: int) -> Term:
        return T.mk_const(self.object_id_sort(), value)

    def index_const(self, value: int) -> Term:
        return T.mk_const(self.index_sort(), value)

    def null_pointer(self) -> Term:
        return T.mk_tuple(self.pointer_sort(), self.object_id(0), self.index_const(0))

    def int_literal(self, value: int, ty: TypeInfo) -> Term:
        ty = scalar_view(ty)
        if ty.kind == "bool":
            return T.mk_bool(value != 0)
        if ty.kind == "fixedbv":
            return self.fixed_literal(Fraction(value), ty)
        if self.is_bv:
            return T.mk_bv(value, ty.width)
        if ty.kind == "unsignedbv":
            value %= 1 << ty.width
        return T.mk_int(value)

    def fixed_literal(self, value: Fraction, ty: TypeInfo) -> Term:
        assert ty.kind == "fixedbv"
        if self.is_bv:
            scaled = value * (1 << ty.fraction_bits)
            raw = abs(scaled.numerator) // scaled.denominator  # truncate toward zero
            if scaled < 0:
                raw = -raw
            return T.mk_bv(raw, ty.width)
        return T.mk_real(value)

    # ------------------------------------------------------- mode guards
    def reject_in_int_mode(self, construct: str, loc: SourceLoc):
        if not self.is_bv:
            raise DiagnosticsError([Diagnostic(
                "unsupported",
                f"{construct} has no integer/real-mode encoding; "
                "use the bit-vector mode", loc)])

    # -------------------------------------------------------- conversions
    def resize_bv(self, t: Term, to_width: int, signed: bool) -> Term:
        w = t.sort.width
        if to_width == w:
            return t
        if to_width > w:
            return T.mk_sign_ext(t, to_width - w) if signed \
                else T.mk_zero_ext(t, to_width - w)
        return T.mk_extract(t, to_width - 1, 0)

    def convert(self, t: Term, frm: TypeInfo, to: TypeInfo) -> Term:
        """Scalar conversion; bool goes through ite / the v != 0 case split."""
        frm, to = scalar_view(frm), scalar_view(to)
        if frm == to:
            return t
        if to.kind == "bool":
            if frm.kind == "bool":
                return t
            zero = self.int_literal(0, frm) if frm.kind != "fixedbv" \
                else self.fixed_literal(Fraction(0), frm)
            return T.mk_ne(t, zero)
        if frm.kind == "bool":
            one = self.int_literal(1, to) if to.kind != "fixedbv" \
                else self.fixed_literal(Fraction(1), to)
            zero = self.int_literal(0, to) if to.kind != "fixedbv" \
                else self.fixed_literal(Fraction(0), to)
            return T.mk_ite(t, one, zero)
        if not self.is_bv:
            return self._convert_exact(t, frm, to)
        return self._convert_bv(t, frm, to)

    def _convert_bv(self, t: Term, frm: TypeInfo, to: TypeInfo) -> Term:
        fk, tk = frm.kind, to.kind
        if fk in ("signedbv", "unsignedbv") and tk in ("signedbv", "unsignedbv"):
            return self.resize_bv(t, to.width, frm.kind == "signedbv")
        if fk in ("signedbv", "unsignedbv") and tk == "fixedbv":
            x = self.resize_bv(t, to.width, fk == "signedbv")
            return T.mk_shl(x, T.mk_bv(to.fraction_bits, to.width))
        if fk == "fixedbv" and tk in ("signedbv", "unsignedbv"):
            f = frm.fraction_bits
            zero = T.mk_bv(0, frm.width)
            pos = T.mk_ashr(t, T.mk_bv(f, frm.width))
            negated = T.mk_ashr(T.mk_neg(t), T.mk_bv(f, frm.width))
            trunc = T.mk_ite(T.mk_ge(t, zero, signed=True), pos, T.mk_neg(negated))
            return self.resize_bv(trunc, to.width, signed=True)
        if fk == "fixedbv" and tk == "fixedbv":
            f1, f2 = frm.fraction_bits, to.fraction_bits
            if f2 >= f1:
                work = max(frm.width + (f2 - f1), to.width)
                x = self.resize_bv(t, work, signed=True)
                x = T.mk_shl(x, T.mk_bv(f2 - f1, work))
                return self.resize_bv(x, to.width, signed=True)
            x = T.mk_ashr(t, T.mk_bv(f1 - f2, frm.width))
            return self.resize_bv(x, to.width, signed=True)
        raise DiagnosticsError([Diagnostic(
            "type", f"unsupported conversion {frm} -> {to}")])

    def _convert_exact(self, t: Term, frm: TypeInfo, to: TypeInfo) -> Term:
        fk, tk = frm.kind, to.kind
        if fk in ("signedbv", "unsignedbv") and tk in ("signedbv", "unsignedbv"):
            return t  # value-preserving by design in the numeric domain
        if fk in ("signedbv", "unsignedbv") and tk == "fixedbv":
            return T.mk_to_real(t)
        if fk == "fixedbv" and tk in ("signedbv", "unsignedbv"):
            return T.mk_to_int(t)
        if fk == "fixedbv" and tk == "fixedbv":
            return t
        raise DiagnosticsError([Diagnostic(
            "type", f"unsupported conversion {frm} -> {to}")])

    # ----------------------------------------------------------- arithmetic
    def arith(self, op: str, a: Term, b: Term | None, ty: TypeInfo,
              loc: SourceLoc | None = None) -> Term:
        """op in + - * / % neg over operands already of the result type."""
        ty = scalar_view(ty)
        signed = ty.is_signed
        if op == "neg":
            return T.mk_neg(a)
        if ty.kind == "fixedbv" and self.is_bv:
            return self._fixed_arith(op, a, b, ty)
        if op == "+":
            return T.mk_add(a, b)
        if op == "-":
            return T.mk_sub(a, b)
        if op == "*":
            if ty.kind == "fixedbv":
                return T.mk_mul(a, b)
            return T.mk_mul(a, b)
        if op == "/":
            return T.mk_div(a, b, signed)
        if op == "%":
            return T.mk_rem(a, b, signed)
        raise AssertionError(op)

    def _fixed_arith(self, op: str, a: Term, b: Term, ty: TypeInfo) -> Term:
        w, f = ty.width, ty.fraction_bits
        if op == "+":
            return T.mk_add(a, b)
        if op == "-":
            return T.mk_sub(a, b)
        if op == "*":
            p = T.mk_mul(T.mk_sign_ext(a, w), T.mk_sign_ext(b, w))
            return T.mk_extract(p, w - 1 + f, f)
        if op == "/":
            num = T.mk_shl(T.mk_sign_ext(a, f), T.mk_bv(f, w + f))
            den = T.mk_sign_ext(b, f)
            q = T.mk_div(num, den, signed=True)
            return T.mk_extract(q, w - 1, 0)
        raise DiagnosticsError([Diagnostic("type", f"operator {op!r} on {ty}")])

    def shift(self, op: str, a: Term, amount: Term, ty: TypeInfo,
              loc: SourceLoc | None = None) -> Term:
        self.reject_in_int_mode(f"shift operator {op!r}", loc or SourceLoc())
        ty = scalar_view(ty)
        amt = self.resize_bv(amount, a.sort.width, signed=False)
        if op == "<<":
            return T.mk_shl(a, amt)
        if ty.is_signed:
            return T.mk_ashr(a, amt)
        return T.mk_lshr(a, amt)

    def bitwise(self, op: str, a: Term, b: Term | None,
                loc: SourceLoc | None = None) -> Term:
        self.reject_in_int_mode(f"bitwise operator {op!r}", loc or SourceLoc())
        if op == "&":
            return T.mk_bvand(a, b)
        if op == "|":
            return T.mk_bvor(a, b)
        if op == "^":
            return T.mk_bvxor(a, b)
        if op == "~":
            return T.mk_bvnot(a)
        raise AssertionError(op)

    def compare(self, op: str, a: Term, b: Term, operand_ty: TypeInfo) -> Term:
        operand_ty = scalar_view(operand_ty)
        signed = operand_ty.is_signed
        if op == "==":
            return T.mk_eq(a, b)
        if op == "!=":
            return T.mk_ne(a, b)
        if op == "<":
            return T.mk_lt(a, b, signed)
        if op == "<=":
            return T.mk_le(a, b, signed)
        if op == ">":
            return T.mk_gt(a, b, signed)
        if op == ">=":
            return T.mk_ge(a, b, signed)
        raise AssertionError(op)


def encode_unsigned_wraparound(t: Term, width: int) -> Term:
    """Reduce an unsigned result held at extended width to r mod 2^w."""
    if isinstance(t.sort, T.BvSort):
        if t.sort.width == width:
            return t
        if t.sort.width > width:
            return T.mk_extract(t, width - 1, 0)
        return T.mk_zero_ext(t, width - t.sort.width)
    # exact domain: fold constants, otherwise leave the modulo to the caller
    if t.kind == T.CONST:
        return T.mk_int(t.attr % (1 << width))
    return t
