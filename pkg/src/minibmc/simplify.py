"""Constant folding and local algebraic simplification.

Bit-vector folding wraps modulo 2^w; integer and real folding are exact.
Division/remainder folding follows the total semantics also used by the
bit-blaster (divisor zero: quotient all-ones/sign-dependent, remainder is
the dividend), so simplification never changes a verdict.
"""
from __future__ import annotations

from fractions import Fraction

from . import terms as T
from .terms import Term


def _signed(v: int, w: int) -> int:
    return v - (1 << w) if v >> (w - 1) else v


def _udiv(x: int, y: int, w: int) -> int:
    if y == 0:
        return T.bv_mask(w)
    return x // y


def _urem(x: int, y: int, w: int) -> int:
    if y == 0:
        return x
    return x % y


def _sdiv(x: int, y: int, w: int) -> int:
    sx, sy = _signed(x, w), _signed(y, w)
    if sy == 0:
        return T.bv_mask(w) if sx >= 0 else 1
    q = abs(sx) // abs(sy)
    if (sx < 0) != (sy < 0):
        q = -q
    return q & T.bv_mask(w)


def _srem(x: int, y: int, w: int) -> int:
    sx, sy = _signed(x, w), _signed(y, w)
    if sy == 0:
        return x
    r = abs(sx) % abs(sy)
    if sx < 0:
        r = -r
    return r & T.bv_mask(w)


def _trunc_div(a: int, b: int) -> int:
    q = abs(a) // abs(b)
    return -q if (a < 0) != (b < 0) else q


def _fold_bv(t: Term) -> Term | None:
    w = t.sort.width if isinstance(t.sort, T.BvSort) else 0
    k = t.kind
    vals = [a.attr for a in t.args]
    mask = T.bv_mask(w)
    if k == T.ADD:
        return T.mk_bv(vals[0] + vals[1], w)
    if k == T.SUB:
        return T.mk_bv(vals[0] - vals[1], w)
    if k == T.MUL:
        return T.mk_bv(vals[0] * vals[1], w)
    if k == T.NEG:
        return T.mk_bv(-vals[0], w)
    if k == T.DIV:
        f = _sdiv if t.attr else _udiv
        return T.mk_bv(f(vals[0], vals[1], w), w)
    if k == T.REM:
        f = _srem if t.attr else _urem
        return T.mk_bv(f(vals[0], vals[1], w), w)
    if k == T.BVAND:
        return T.mk_bv(vals[0] & vals[1], w)
    if k == T.BVOR:
        return T.mk_bv(vals[0] | vals[1], w)
    if k == T.BVXOR:
        return T.mk_bv(vals[0] ^ vals[1], w)
    if k == T.BVNOT:
        return T.mk_bv(~vals[0], w)
    if k == T.SHL:
        return T.mk_bv(0 if vals[1] >= w else vals[0] << vals[1], w)
    if k == T.LSHR:
        return T.mk_bv(0 if vals[1] >= w else vals[0] >> vals[1], w)
    if k == T.ASHR:
        s = _signed(vals[0], w)
        n = min(vals[1], w)
        return T.mk_bv((s >> n) & mask, w)
    if k == T.CONCAT:
        wb = t.args[1].sort.width
        return T.mk_bv((vals[0] << wb) | vals[1], w)
    if k == T.EXTRACT:
        hi, lo = t.attr
        return T.mk_bv(vals[0] >> lo, hi - lo + 1)
    if k == T.SEXT:
        wa = t.args[0].sort.width
        return T.mk_bv(_signed(vals[0], wa), w)
    if k == T.ZEXT:
        return T.mk_bv(vals[0], w)
    return None


def _fold_exact(t: Term) -> Term | None:
    k = t.kind
    vals = [a.attr for a in t.args]
    mk = T.mk_int if isinstance(t.sort, T.IntSort) else T.mk_real
    if k == T.ADD:
        return mk(vals[0] + vals[1])
    if k == T.SUB:
        return mk(vals[0] - vals[1])
    if k == T.MUL:
        return mk(vals[0] * vals[1])
    if k == T.NEG:
        return mk(-vals[0])
    if k == T.DIV:
        if vals[1] == 0:
            return None  # division by zero stays symbolic in exact modes
        if isinstance(t.sort, T.RealSort):
            return mk(Fraction(vals[0]) / vals[1])
        return mk(_trunc_div(vals[0], vals[1]))
    if k == T.REM:
        if vals[1] == 0 or isinstance(t.sort, T.RealSort):
            return None
        return mk(vals[0] - vals[1] * _trunc_div(vals[0], vals[1]))
    return None


def _fold_relation(t: Term) -> Term | None:
    a, b = t.args
    if not (T.is_const(a) and T.is_const(b)):
        return None
    if isinstance(a.sort, T.BvSort):
        w = a.sort.width
        if t.attr:  # signed comparison
            va, vb = _signed(a.attr, w), _signed(b.attr, w)
        else:
            va, vb = a.attr, b.attr
    else:
        va, vb = a.attr, b.attr
    return T.mk_bool(va < vb if t.kind == T.LT else va <= vb)


_NUMERIC_FOLD = {T.ADD, T.SUB, T.MUL, T.DIV, T.REM, T.NEG, T.BVAND, T.BVOR,
                 T.BVXOR, T.BVNOT, T.SHL, T.LSHR, T.ASHR, T.CONCAT,
                 T.EXTRACT, T.SEXT, T.ZEXT}

_memo: dict[Term, Term] = {}


def simplify(t: Term) -> Term:
    """Simplify bottom-up; idempotent and verdict-preserving."""
    hit = _memo.get(t)
    if hit is not None:
        return hit
    args = tuple(simplify(a) for a in t.args)
    out = _rebuild(t, args)
    out = _rules(out)
    _memo[t] = out
    _memo[out] = out
    return out


def _rebuild(t: Term, args: tuple[Term, ...]) -> Term:
    if args == t.args:
        return t
    k = t.kind
    if k == T.NOT:
        return T.mk_not(args[0])
    if k == T.AND:
        return T.mk_and(*args)
    if k == T.OR:
        return T.mk_or(*args)
    if k == T.XOR:
        return T.mk_bool_xor(*args)
    if k == T.IMPLIES:
        return T.mk_implies(*args)
    if k == T.IFF:
        return T.mk_iff(*args)
    if k == T.EQ:
        return T.mk_eq(*args)
    if k == T.LT:
        return T.mk_lt(args[0], args[1], t.attr)
    if k == T.LE:
        return T.mk_le(args[0], args[1], t.attr)
    if k == T.ADD:
        return T.mk_add(*args)
    if k == T.SUB:
        return T.mk_sub(*args)
    if k == T.MUL:
        return T.mk_mul(*args)
    if k == T.DIV:
        return T.mk_div(args[0], args[1], t.attr)
    if k == T.REM:
        return T.mk_rem(args[0], args[1], t.attr)
    if k == T.NEG:
        return T.mk_neg(args[0])
    if k == T.BVAND:
        return T.mk_bvand(*args)
    if k == T.BVOR:
        return T.mk_bvor(*args)
    if k == T.BVXOR:
        return T.mk_bvxor(*args)
    if k == T.BVNOT:
        return T.mk_bvnot(args[0])
    if k == T.SHL:
        return T.mk_shl(*args)
    if k == T.LSHR:
        return T.mk_lshr(*args)
    if k == T.ASHR:
        return T.mk_ashr(*args)
    if k == T.CONCAT:
        return T.mk_concat(*args)
    if k == T.EXTRACT:
        return T.mk_extract(args[0], t.attr[0], t.attr[1])
    if k == T.SEXT:
        return T.mk_sign_ext(args[0], t.attr)
    if k == T.ZEXT:
        return T.mk_zero_ext(args[0], t.attr)
    if k == T.ITE:
        return T.mk_ite(*args)
    if k == T.SELECT:
        return T.mk_select(*args)
    if k == T.STORE:
        return T.mk_store(*args)
    if k == T.TSEL:
        return T.mk_tup_select(args[0], t.attr)
    if k == T.TSTORE:
        return T.mk_tup_store(args[0], t.attr, args[1])
    if k == T.MKTUP:
        return T.mk_tuple(t.sort, *args)
    if k == T.TO_REAL:
        return T.mk_to_real(args[0])
    if k == T.TO_INT:
        return T.mk_to_int(args[0])
    return t


def _rules(t: Term) -> Term:
    k = t.kind
    if k in (T.CONST, T.VAR):
        return t
    args = t.args
    all_const = all(a.kind == T.CONST for a in args)
    if k in _NUMERIC_FOLD and all_const:
        folded = _fold_bv(t) if isinstance(args[0].sort, T.BvSort) else _fold_exact(t)
        if folded is not None:
            return folded
    if k in (T.LT, T.LE):
        folded = _fold_relation(t)
        if folded is not None:
            return folded
        return _order_rules(t)
    if k == T.ADD:
        return _add_rules(t)
    if k == T.SUB:
        return _sub_rules(t)
    if k == T.MUL:
        return _mul_rules(t)
    if k == T.DIV:
        if _is_value(args[1], 1):
            return args[0]
        return t
    if k == T.REM:
        if _is_value(args[1], 1):
            return T.mk_const(t.sort, 0)
        return t
    if k == T.NEG and args[0].kind == T.NEG:
        return args[0].args[0]
    if k == T.BVAND:
        if _is_value(args[0], 0) or _is_value(args[1], 0):
            return T.mk_const(t.sort, 0)
        if _is_all_ones(args[0]):
            return args[1]
        if _is_all_ones(args[1]):
            return args[0]
        if args[0] is args[1]:
            return args[0]
        return t
    if k == T.BVOR:
        if _is_value(args[0], 0):
            return args[1]
        if _is_value(args[1], 0):
            return args[0]
        if _is_all_ones(args[0]) or _is_all_ones(args[1]):
            return T.mk_bv(-1, t.sort.width)
        if args[0] is args[1]:
            return args[0]
        return t
    if k == T.BVXOR:
        if args[0] is args[1]:
            return T.mk_const(t.sort, 0)
        if _is_value(args[0], 0):
            return args[1]
        if _is_value(args[1], 0):
            return args[0]
        return t
    if k in (T.SHL, T.LSHR, T.ASHR):
        if _is_value(args[1], 0):
            return args[0]
        if T.is_const(args[1]) and args[1].attr >= t.args[0].sort.width \
                and k in (T.SHL, T.LSHR):
            return T.mk_const(t.sort, 0)
        return t
    if k == T.SELECT:
        return _select_rules(t)
    if k == T.STORE:
        inner, idx, _val = args
        if inner.kind == T.STORE and inner.args[1] is idx:
            return T.mk_store(inner.args[0], idx, args[2])
        return t
    if k == T.TSEL:
        base = args[0]
        while base.kind == T.TSTORE:
            if base.attr == t.attr:
                return base.args[1]
            base = base.args[0]
        if base is not args[0]:
            return T.mk_tup_select(base, t.attr)
        return t
    if k == T.TSTORE:
        inner = args[0]
        if inner.kind == T.TSTORE and inner.attr == t.attr:
            return T.mk_tup_store(inner.args[0], t.attr, args[1])
        return t
    if k == T.EQ:
        a, b = args
        if a.sort == T.BOOL_S:
            return T.mk_iff(a, b)
        return t
    if k == T.OR:
        a, b = args
        if _complementary(a, b):
            return T.TRUE
        return t
    if k == T.AND:
        a, b = args
        if _complementary(a, b):
            return T.FALSE
        return t
    return t


def _complementary(a: Term, b: Term) -> bool:
    return (a.kind == T.NOT and a.args[0] is b) or \
        (b.kind == T.NOT and b.args[0] is a)


def _is_value(t: Term, v: int) -> bool:
    return t.kind == T.CONST and t.attr == v


def _is_all_ones(t: Term) -> bool:
    return t.kind == T.CONST and isinstance(t.sort, T.BvSort) \
        and t.attr == T.bv_mask(t.sort.width)


def _order_rules(t: Term) -> Term:
    a, b = t.args
    if a is b:
        return T.TRUE if t.kind == T.LE else T.FALSE
    if isinstance(a.sort, T.BvSort) and not t.attr:
        # unsigned comparisons against the extremes
        if t.kind == T.LE and _is_value(a, 0):
            return T.TRUE
        if t.kind == T.LT and _is_value(b, 0):
            return T.FALSE
        if t.kind == T.LE and _is_all_ones(b):
            return T.TRUE
    return t


def _add_rules(t: Term) -> Term:
    a, b = t.args
    if _is_value(a, 0):
        return b
    if _is_value(b, 0):
        return a
    # (x + c1) + c2  ->  x + (c1 + c2); sound in modular arithmetic
    if T.is_const(b) and a.kind == T.ADD and T.is_const(a.args[1]):
        inner = T.mk_add(a.args[1], b)
        return simplify(T.mk_add(a.args[0], simplify(inner)))
    return t


def _sub_rules(t: Term) -> Term:
    a, b = t.args
    if _is_value(b, 0):
        return a
    if a is b:
        return T.mk_const(t.sort, 0)
    return t


def _mul_rules(t: Term) -> Term:
    a, b = t.args
    if _is_value(a, 0) or _is_value(b, 0):
        return T.mk_const(t.sort, 0)
    if _is_value(a, 1):
        return b
    if _is_value(b, 1):
        return a
    return t


def _select_rules(t: Term) -> Term:
    arr, idx = t.args
    while arr.kind == T.STORE:
        sidx = arr.args[1]
        if sidx is idx:
            return arr.args[2]
        if T.is_const(sidx) and T.is_const(idx):
            arr = arr.args[0]  # definitely distinct indices
            continue
        break
    if arr is not t.args[0]:
        return T.mk_select(arr, idx)
    return t
