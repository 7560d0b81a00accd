"""Signed overflow/underflow predicates.

In bit-vector mode the exact result is computed at extended width (w+1 for
addition and subtraction, 2w for multiplication) and compared against the
bounds of the result type; in the integer/real mode the exact result is
compared against the width-scaled bounds directly.
"""
from __future__ import annotations

from . import terms as T
from .encode import EncodingCtx, scalar_view
from .terms import Term
from .typeinfo import TypeInfo


def signed_bounds(width: int) -> tuple[int, int]:
    return -(1 << (width - 1)), (1 << (width - 1)) - 1


def overflow_predicates(ctx: EncodingCtx, op: str, x: Term, y: Term | None,
                        ty: TypeInfo) -> dict[str, Term]:
    """Predicates that hold exactly when the mathematical result of the
    signed operation leaves [min, max] of the result type."""
    ty = scalar_view(ty)
    assert ty.kind == "signedbv"
    w = ty.width
    lo, hi = signed_bounds(w)
    if not ctx.is_bv:
        return _exact_predicates(op, x, y, lo, hi)
    if op == "+":
        ext = T.mk_sign_ext(x, 1), T.mk_sign_ext(y, 1)
        s = T.mk_add(*ext)
        return _bounded(s, w + 1, lo, hi)
    if op == "-":
        ext = T.mk_sign_ext(x, 1), T.mk_sign_ext(y, 1)
        s = T.mk_sub(*ext)
        return _bounded(s, w + 1, lo, hi)
    if op == "*":
        p = T.mk_mul(T.mk_sign_ext(x, w), T.mk_sign_ext(y, w))
        return _bounded(p, 2 * w, lo, hi)
    if op == "/":
        # INT_MIN / -1 is the only overflowing two's-complement division
        ov = T.mk_and(T.mk_eq(x, T.mk_bv(lo, w)), T.mk_eq(y, T.mk_bv(-1, w)))
        return {"overflow": ov, "underflow": T.FALSE}
    if op == "neg":
        return {"overflow": T.mk_eq(x, T.mk_bv(lo, w)), "underflow": T.FALSE}
    raise AssertionError(op)


def _bounded(result: Term, width: int, lo: int, hi: int) -> dict[str, Term]:
    return {
        "overflow": T.mk_gt(result, T.mk_bv(hi, width), signed=True),
        "underflow": T.mk_lt(result, T.mk_bv(lo, width), signed=True),
    }


def _exact_predicates(op: str, x: Term, y: Term | None,
                      lo: int, hi: int) -> dict[str, Term]:
    if op == "+":
        r = T.mk_add(x, y)
    elif op == "-":
        r = T.mk_sub(x, y)
    elif op == "*":
        r = T.mk_mul(x, y)
    elif op == "/":
        ov = T.mk_and(T.mk_eq(x, T.mk_int(lo)), T.mk_eq(y, T.mk_int(-1)))
        return {"overflow": ov, "underflow": T.FALSE}
    elif op == "neg":
        r = T.mk_neg(x)
    else:
        raise AssertionError(op)
    out = {
        "overflow": T.mk_gt(r, T.mk_int(hi), signed=True),
        "underflow": T.mk_lt(r, T.mk_int(lo), signed=True),
    }
    if op == "neg":
        out["underflow"] = T.FALSE  # -x >= -max > min always holds
    return out


def unsigned_overflow_predicates(op: str, x: Term, y: Term,
                                 width: int) -> dict[str, Term]:
    """Wraparound detectors for the opt-in strict unsigned check; unsigned
    results themselves stay modulo-defined."""
    mask = T.bv_mask(width)
    if op == "+":
        s = T.mk_add(T.mk_zero_ext(x, 1), T.mk_zero_ext(y, 1))
        return {"overflow": T.mk_gt(s, T.mk_bv(mask, width + 1), signed=False),
                "underflow": T.FALSE}
    if op == "-":
        return {"overflow": T.FALSE,
                "underflow": T.mk_lt(x, y, signed=False)}
    if op == "*":
        p = T.mk_mul(T.mk_zero_ext(x, width), T.mk_zero_ext(y, width))
        return {"overflow": T.mk_gt(p, T.mk_bv(mask, 2 * width), signed=False),
                "underflow": T.FALSE}
    raise AssertionError(op)
