"""Concrete evaluation of reduced (scalar/bool) terms under an assignment.

Mirrors the folding semantics of the simplifier and the bit-blaster, so a
model can be validated by evaluating every definition and the goal.
"""
from __future__ import annotations

from fractions import Fraction

from . import terms as T
from .errors import InternalError
from .simplify import _sdiv, _signed, _srem, _trunc_div, _udiv, _urem
from .terms import Term


def eval_term(t: Term, env: dict[Term, object], memo: dict | None = None):
    if memo is None:
        memo = {}
    hit = memo.get(t)
    if hit is not None:
        return hit
    out = _eval(t, env, memo)
    memo[t] = out
    return out


def _eval(t: Term, env, memo):
    k = t.kind
    if k == T.CONST:
        return t.attr
    if k == T.VAR:
        if t in env:
            return env[t]
        # unconstrained leaves default to zero/false
        if t.sort == T.BOOL_S:
            return False
        if isinstance(t.sort, T.RealSort):
            return Fraction(0)
        return 0
    a = [eval_term(x, env, memo) for x in t.args]
    if k == T.NOT:
        return not a[0]
    if k == T.AND:
        return a[0] and a[1]
    if k == T.OR:
        return a[0] or a[1]
    if k == T.XOR:
        return bool(a[0]) != bool(a[1])
    if k == T.IMPLIES:
        return (not a[0]) or a[1]
    if k == T.IFF:
        return bool(a[0]) == bool(a[1])
    if k == T.EQ:
        return a[0] == a[1]
    if k == T.ITE:
        return a[1] if a[0] else a[2]
    sort = t.args[0].sort if t.args else t.sort
    if k in (T.LT, T.LE):
        if isinstance(sort, T.BvSort) and t.attr:
            va, vb = _signed(a[0], sort.width), _signed(a[1], sort.width)
        else:
            va, vb = a[0], a[1]
        return va < vb if k == T.LT else va <= vb
    if isinstance(t.sort, T.BvSort):
        return _eval_bv(t, a)
    if k == T.ADD:
        return a[0] + a[1]
    if k == T.SUB:
        return a[0] - a[1]
    if k == T.MUL:
        return a[0] * a[1]
    if k == T.NEG:
        return -a[0]
    if k == T.DIV:
        if isinstance(t.sort, T.RealSort):
            return Fraction(a[0]) / a[1] if a[1] != 0 else Fraction(0)
        return _trunc_div(a[0], a[1]) if a[1] != 0 else 0
    if k == T.REM:
        return a[0] - a[1] * _trunc_div(a[0], a[1]) if a[1] != 0 else a[0]
    if k == T.TO_REAL:
        return Fraction(a[0])
    if k == T.TO_INT:
        v = a[0]
        q = abs(v.numerator) // v.denominator
        return -q if v < 0 else q
    raise InternalError(f"cannot evaluate {k}")


def _eval_bv(t: Term, a: list):
    k = t.kind
    w = t.sort.width
    mask = T.bv_mask(w)
    if k == T.ADD:
        return (a[0] + a[1]) & mask
    if k == T.SUB:
        return (a[0] - a[1]) & mask
    if k == T.MUL:
        return (a[0] * a[1]) & mask
    if k == T.NEG:
        return (-a[0]) & mask
    if k == T.DIV:
        return (_sdiv if t.attr else _udiv)(a[0], a[1], w)
    if k == T.REM:
        return (_srem if t.attr else _urem)(a[0], a[1], w)
    if k == T.BVAND:
        return a[0] & a[1]
    if k == T.BVOR:
        return a[0] | a[1]
    if k == T.BVXOR:
        return a[0] ^ a[1]
    if k == T.BVNOT:
        return (~a[0]) & mask
    if k == T.SHL:
        return 0 if a[1] >= w else (a[0] << a[1]) & mask
    if k == T.LSHR:
        return 0 if a[1] >= w else a[0] >> a[1]
    if k == T.ASHR:
        wa = t.args[0].sort.width
        return (_signed(a[0], wa) >> min(a[1], wa)) & mask
    if k == T.CONCAT:
        wb = t.args[1].sort.width
        return ((a[0] << wb) | a[1]) & mask
    if k == T.EXTRACT:
        hi, lo = t.attr
        return (a[0] >> lo) & T.bv_mask(hi - lo + 1)
    if k == T.SEXT:
        wa = t.args[0].sort.width
        return _signed(a[0], wa) & mask
    if k == T.ZEXT:
        return a[0]
    if k == T.ITE:
        return a[1] if a[0] else a[2]
    raise InternalError(f"cannot evaluate bv {k}")
