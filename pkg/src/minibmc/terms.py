"""Hash-consed term and formula language.

One node class covers both terms and formulas (formulas are nodes of boolean
sort).  Nodes are interned: structurally equal nodes are the same Python
object, so equality is identity and the construction cache doubles as the
expression cache used during encoding.  Sorts are checked at construction;
an ill-sorted node cannot exist.
"""
from __future__ import annotations

import threading
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

# --------------------------------------------------------------------------
# Sorts
# --------------------------------------------------------------------------


@dataclass(frozen=True)
class Sort:
    pass


@dataclass(frozen=True)
class BoolSort(Sort):
    def __str__(self) -> str:
        return "Bool"


@dataclass(frozen=True)
class BvSort(Sort):
    width: int

    def __str__(self) -> str:
        return f"Bv{self.width}"


@dataclass(frozen=True)
class IntSort(Sort):
    def __str__(self) -> str:
        return "Int"


@dataclass(frozen=True)
class RealSort(Sort):
    def __str__(self) -> str:
        return "Real"


@dataclass(frozen=True)
class ArraySort(Sort):
    index: Sort
    element: Sort
    length: int  # static element count; arrays in MiniC are always sized

    def __str__(self) -> str:
        return f"Array({self.index},{self.element})[{self.length}]"


@dataclass(frozen=True)
class TupleSort(Sort):
    fields: tuple[tuple[str, Sort], ...]
    tag: str = ""

    def field_sort(self, name: str) -> Sort:
        for n, s in self.fields:
            if n == name:
                return s
        raise KeyError(name)

    def __str__(self) -> str:
        inner = ", ".join(f"{n}:{s}" for n, s in self.fields)
        return f"Tuple{{{inner}}}"


BOOL_S = BoolSort()
INT_S = IntSort()
REAL_S = RealSort()


def is_numeric(s: Sort) -> bool:
    return isinstance(s, (BvSort, IntSort, RealSort))


class SortError(TypeError):
    """Attempt to build an ill-sorted node."""


# --------------------------------------------------------------------------
# Nodes
# --------------------------------------------------------------------------

CONST = "const"
VAR = "var"
NOT = "not"
AND = "and"
OR = "or"
XOR = "xor"
IMPLIES = "implies"
IFF = "iff"
EQ = "eq"
LT = "lt"
LE = "le"
ADD = "add"
SUB = "sub"
MUL = "mul"
DIV = "div"
REM = "rem"
NEG = "neg"
BVAND = "bvand"
BVOR = "bvor"
BVXOR = "bvxor"
BVNOT = "bvnot"
SHL = "shl"
LSHR = "lshr"
ASHR = "ashr"
CONCAT = "concat"
EXTRACT = "extract"
SEXT = "sext"
ZEXT = "zext"
ITE = "ite"
SELECT = "select"
STORE = "store"
TSEL = "tsel"
TSTORE = "tstore"
MKTUP = "mktup"
TO_REAL = "to_real"
TO_INT = "to_int"  # truncation toward zero


class Term:
    __slots__ = ("kind", "sort", "args", "attr", "serial", "__weakref__")

    kind: str
    sort: Sort
    args: tuple["Term", ...]
    attr: object
    serial: int

    def __repr__(self) -> str:
        return f"<{self.serial}:{pretty(self)}>"

    # identity semantics; interning guarantees structural sharing
    __hash__ = object.__hash__


_table: dict[tuple, Term] = {}
_lock = threading.Lock()
_next_serial = 0


def _intern(kind: str, sort: Sort, args: tuple[Term, ...], attr: object = None) -> Term:
    global _next_serial
    key = (kind, sort, tuple(a.serial for a in args), attr)
    t = _table.get(key)
    if t is not None:
        return t
    with _lock:
        t = _table.get(key)
        if t is not None:
            return t
        t = Term.__new__(Term)
        t.kind = kind
        t.sort = sort
        t.args = args
        t.attr = attr
        t.serial = _next_serial
        _next_serial += 1
        _table[key] = t
        return t


def cache_size() -> int:
    return len(_table)


# --------------------------------------------------------------------------
# Constants and variables
# --------------------------------------------------------------------------

def bv_mask(width: int) -> int:
    return (1 << width) - 1


def mk_bv(value: int, width: int) -> Term:
    return _intern(CONST, BvSort(width), (), value & bv_mask(width))


def mk_int(value: int) -> Term:
    return _intern(CONST, INT_S, (), value)


def mk_real(value: Fraction | int) -> Term:
    return _intern(CONST, REAL_S, (), Fraction(value))


def mk_bool(value: bool) -> Term:
    return _intern(CONST, BOOL_S, (), bool(value))


TRUE = mk_bool(True)
FALSE = mk_bool(False)


def mk_const(sort: Sort, value) -> Term:
    if isinstance(sort, BvSort):
        return mk_bv(value, sort.width)
    if isinstance(sort, IntSort):
        return mk_int(int(value))
    if isinstance(sort, RealSort):
        return mk_real(value)
    if isinstance(sort, BoolSort):
        return mk_bool(value)
    raise SortError(f"no constants of sort {sort}")


def mk_var(name: str, sort: Sort) -> Term:
    return _intern(VAR, sort, (), name)


def is_const(t: Term) -> bool:
    return t.kind == CONST


def const_value(t: Term):
    assert t.kind == CONST
    return t.attr


def bv_signed_value(t: Term) -> int:
    """Two's-complement reading of a bit-vector constant."""
    assert t.kind == CONST and isinstance(t.sort, BvSort)
    v = t.attr
    w = t.sort.width
    return v - (1 << w) if v >> (w - 1) else v


# --------------------------------------------------------------------------
# Boolean connectives
# --------------------------------------------------------------------------

def _need(cond: bool, msg: str):
    if not cond:
        raise SortError(msg)


def _need_bool(*ts: Term):
    for t in ts:
        _need(t.sort == BOOL_S, f"expected boolean operand, got {t.sort}")


def mk_not(a: Term) -> Term:
    _need_bool(a)
    if a is TRUE:
        return FALSE
    if a is FALSE:
        return TRUE
    if a.kind == NOT:
        return a.args[0]
    return _intern(NOT, BOOL_S, (a,))


def mk_and(*fs: Term) -> Term:
    _need_bool(*fs)
    out: list[Term] = []
    for f in fs:
        if f is FALSE:
            return FALSE
        if f is TRUE:
            continue
        out.append(f)
    if not out:
        return TRUE
    acc = out[0]
    for f in out[1:]:
        if f is acc:
            continue
        acc = _intern(AND, BOOL_S, (acc, f))
    return acc


def mk_or(*fs: Term) -> Term:
    _need_bool(*fs)
    out: list[Term] = []
    for f in fs:
        if f is TRUE:
            return TRUE
        if f is FALSE:
            continue
        out.append(f)
    if not out:
        return FALSE
    acc = out[0]
    for f in out[1:]:
        if f is acc:
            continue
        acc = _intern(OR, BOOL_S, (acc, f))
    return acc


def mk_implies(a: Term, b: Term) -> Term:
    _need_bool(a, b)
    if a is TRUE:
        return b
    if a is FALSE or b is TRUE:
        return TRUE
    if b is FALSE:
        return mk_not(a)
    return _intern(IMPLIES, BOOL_S, (a, b))


def mk_iff(a: Term, b: Term) -> Term:
    _need_bool(a, b)
    if a is b:
        return TRUE
    if a is TRUE:
        return b
    if b is TRUE:
        return a
    if a is FALSE:
        return mk_not(b)
    if b is FALSE:
        return mk_not(a)
    return _intern(IFF, BOOL_S, (a, b))


def mk_bool_xor(a: Term, b: Term) -> Term:
    _need_bool(a, b)
    if a is b:
        return FALSE
    if a is FALSE:
        return b
    if b is FALSE:
        return a
    if a is TRUE:
        return mk_not(b)
    if b is TRUE:
        return mk_not(a)
    return _intern(XOR, BOOL_S, (a, b))


# --------------------------------------------------------------------------
# Relations
# --------------------------------------------------------------------------

def mk_eq(a: Term, b: Term) -> Term:
    _need(a.sort == b.sort, f"= over distinct sorts {a.sort} vs {b.sort}")
    if a is b:
        return TRUE
    if a.kind == CONST and b.kind == CONST:
        return mk_bool(a.attr == b.attr)
    return _intern(EQ, BOOL_S, (a, b))


def mk_ne(a: Term, b: Term) -> Term:
    return mk_not(mk_eq(a, b))


def _need_numeric_pair(a: Term, b: Term, what: str):
    _need(a.sort == b.sort and is_numeric(a.sort),
          f"{what} needs equal numeric sorts, got {a.sort} vs {b.sort}")


def mk_lt(a: Term, b: Term, signed: bool = True) -> Term:
    _need_numeric_pair(a, b, "<")
    return _intern(LT, BOOL_S, (a, b), bool(signed))


def mk_le(a: Term, b: Term, signed: bool = True) -> Term:
    _need_numeric_pair(a, b, "<=")
    return _intern(LE, BOOL_S, (a, b), bool(signed))


def mk_gt(a: Term, b: Term, signed: bool = True) -> Term:
    return mk_lt(b, a, signed)


def mk_ge(a: Term, b: Term, signed: bool = True) -> Term:
    return mk_le(b, a, signed)


# --------------------------------------------------------------------------
# Arithmetic
# --------------------------------------------------------------------------

def mk_add(a: Term, b: Term) -> Term:
    _need_numeric_pair(a, b, "+")
    return _intern(ADD, a.sort, (a, b))


def mk_sub(a: Term, b: Term) -> Term:
    _need_numeric_pair(a, b, "-")
    return _intern(SUB, a.sort, (a, b))


def mk_mul(a: Term, b: Term) -> Term:
    _need_numeric_pair(a, b, "*")
    return _intern(MUL, a.sort, (a, b))


def mk_div(a: Term, b: Term, signed: bool = True) -> Term:
    _need_numeric_pair(a, b, "/")
    return _intern(DIV, a.sort, (a, b), bool(signed))


def mk_rem(a: Term, b: Term, signed: bool = True) -> Term:
    _need_numeric_pair(a, b, "rem")
    return _intern(REM, a.sort, (a, b), bool(signed))


def mk_neg(a: Term) -> Term:
    _need(is_numeric(a.sort), f"negation of {a.sort}")
    return _intern(NEG, a.sort, (a,))


# --------------------------------------------------------------------------
# Bit-vector specific
# --------------------------------------------------------------------------

def _need_bv(*ts: Term):
    for t in ts:
        _need(isinstance(t.sort, BvSort), f"expected a bit-vector, got {t.sort}")


def _bv_binop(kind: str, a: Term, b: Term) -> Term:
    _need_bv(a, b)
    _need(a.sort == b.sort, f"{kind} over distinct widths")
    return _intern(kind, a.sort, (a, b))


def mk_bvand(a: Term, b: Term) -> Term:
    return _bv_binop(BVAND, a, b)


def mk_bvor(a: Term, b: Term) -> Term:
    return _bv_binop(BVOR, a, b)


def mk_bvxor(a: Term, b: Term) -> Term:
    return _bv_binop(BVXOR, a, b)


def mk_bvnot(a: Term) -> Term:
    _need_bv(a)
    return _intern(BVNOT, a.sort, (a,))


def mk_shl(a: Term, b: Term) -> Term:
    return _bv_binop(SHL, a, b)


def mk_lshr(a: Term, b: Term) -> Term:
    return _bv_binop(LSHR, a, b)


def mk_ashr(a: Term, b: Term) -> Term:
    return _bv_binop(ASHR, a, b)


def mk_concat(a: Term, b: Term) -> Term:
    _need_bv(a, b)
    return _intern(CONCAT, BvSort(a.sort.width + b.sort.width), (a, b))


def mk_extract(a: Term, hi: int, lo: int) -> Term:
    _need_bv(a)
    _need(hi >= lo >= 0 and hi < a.sort.width,
          f"Extract[{hi},{lo}] out of range for width {a.sort.width}")
    if lo == 0 and hi == a.sort.width - 1:
        return a
    return _intern(EXTRACT, BvSort(hi - lo + 1), (a,), (hi, lo))


def mk_sign_ext(a: Term, k: int) -> Term:
    _need_bv(a)
    _need(k >= 0, "SignExt needs k >= 0")
    if k == 0:
        return a
    return _intern(SEXT, BvSort(a.sort.width + k), (a,), k)


def mk_zero_ext(a: Term, k: int) -> Term:
    _need_bv(a)
    _need(k >= 0, "ZeroExt needs k >= 0")
    if k == 0:
        return a
    return _intern(ZEXT, BvSort(a.sort.width + k), (a,), k)


# --------------------------------------------------------------------------
# ite / arrays / tuples
# --------------------------------------------------------------------------

def mk_ite(g: Term, a: Term, b: Term) -> Term:
    _need_bool(g)
    _need(a.sort == b.sort, f"ite arms of distinct sorts {a.sort} vs {b.sort}")
    if g is TRUE:
        return a
    if g is FALSE:
        return b
    if a is b:
        return a
    if a.sort == BOOL_S:
        if a is TRUE and b is FALSE:
            return g
        if a is FALSE and b is TRUE:
            return mk_not(g)
    return _intern(ITE, a.sort, (g, a, b))


def mk_select(arr: Term, idx: Term) -> Term:
    _need(isinstance(arr.sort, ArraySort), f"select on {arr.sort}")
    _need(idx.sort == arr.sort.index, "select index sort mismatch")
    return _intern(SELECT, arr.sort.element, (arr, idx))


def mk_store(arr: Term, idx: Term, val: Term) -> Term:
    _need(isinstance(arr.sort, ArraySort), f"store on {arr.sort}")
    _need(idx.sort == arr.sort.index, "store index sort mismatch")
    _need(val.sort == arr.sort.element, "store value sort mismatch")
    return _intern(STORE, arr.sort, (arr, idx, val))


def mk_tuple(sort: TupleSort, *values: Term) -> Term:
    _need(len(values) == len(sort.fields), "tuple arity mismatch")
    for v, (n, s) in zip(values, sort.fields):
        _need(v.sort == s, f"tuple field {n} expects {s}, got {v.sort}")
    return _intern(MKTUP, sort, tuple(values))


def mk_tup_select(t: Term, fld: str) -> Term:
    _need(isinstance(t.sort, TupleSort), f"tuple select on {t.sort}")
    if t.kind == MKTUP:
        for v, (n, _) in zip(t.args, t.sort.fields):
            if n == fld:
                return v
    return _intern(TSEL, t.sort.field_sort(fld), (t,), fld)


def mk_tup_store(t: Term, fld: str, val: Term) -> Term:
    _need(isinstance(t.sort, TupleSort), f"tuple store on {t.sort}")
    _need(val.sort == t.sort.field_sort(fld), f"tuple store value sort mismatch on {fld}")
    return _intern(TSTORE, t.sort, (t, val), fld)


def mk_to_real(a: Term) -> Term:
    _need(isinstance(a.sort, IntSort), f"to_real of {a.sort}")
    if a.kind == CONST:
        return mk_real(a.attr)
    return _intern(TO_REAL, REAL_S, (a,))


def mk_to_int(a: Term) -> Term:
    """Real to integer, truncating toward zero."""
    _need(isinstance(a.sort, RealSort), f"to_int of {a.sort}")
    if a.kind == CONST:
        v = a.attr
        q = abs(v.numerator) // v.denominator
        return mk_int(-q if v < 0 else q)
    return _intern(TO_INT, INT_S, (a,))


# --------------------------------------------------------------------------
# Traversal helpers
# --------------------------------------------------------------------------

def iter_subterms(*roots: Term) -> Iterator[Term]:
    """Every distinct node reachable from the roots, post-order-ish."""
    seen: set[int] = set()
    stack = list(roots)
    while stack:
        t = stack.pop()
        if t.serial in seen:
            continue
        seen.add(t.serial)
        stack.extend(t.args)
        yield t


def free_vars(*roots: Term) -> list[Term]:
    return [t for t in iter_subterms(*roots) if t.kind == VAR]


def count_distinct(*roots: Term, include_consts: bool = False) -> int:
    n = 0
    for t in iter_subterms(*roots):
        if include_consts or t.kind != CONST:
            n += 1
    return n


# --------------------------------------------------------------------------
# Pretty printing (SSA-dump style)
# --------------------------------------------------------------------------

def default_display(name: str) -> str:
    short = name.rsplit("::", 1)[-1]
    short = short.replace("#", "")
    return short.lstrip("$")


def pretty(t: Term, disp=default_display) -> str:
    k = t.kind
    if k == CONST:
        if t.sort == BOOL_S:
            return "TRUE" if t.attr else "FALSE"
        if isinstance(t.attr, Fraction) and t.attr.denominator != 1:
            return f"{t.attr.numerator}/{t.attr.denominator}"
        return str(t.attr)
    if k == VAR:
        return disp(t.attr)
    if k == NOT:
        return f"!{pretty(t.args[0], disp)}"
    if k in (AND, OR, XOR, IMPLIES, IFF, EQ, ADD, SUB, MUL, DIV, REM,
             BVAND, BVOR, BVXOR, SHL, LSHR, ASHR, CONCAT, LT, LE):
        sym = {AND: "&&", OR: "||", XOR: "^^", IMPLIES: "=>", IFF: "<=>",
               EQ: "==", ADD: "+", SUB: "-", MUL: "*", DIV: "/", REM: "%",
               BVAND: "&", BVOR: "|", BVXOR: "^", SHL: "<<", LSHR: ">>u",
               ASHR: ">>", CONCAT: "@", LT: "<", LE: "<="}[k]
        a, b = (pretty(x, disp) for x in t.args)
        return f"({a} {sym} {b})"
    if k == NEG:
        return f"-{pretty(t.args[0], disp)}"
    if k == BVNOT:
        return f"~{pretty(t.args[0], disp)}"
    if k == EXTRACT:
        hi, lo = t.attr
        return f"Extract[{hi},{lo}]({pretty(t.args[0], disp)})"
    if k == SEXT:
        return f"SignExt[{t.attr}]({pretty(t.args[0], disp)})"
    if k == ZEXT:
        return f"ZeroExt[{t.attr}]({pretty(t.args[0], disp)})"
    if k == ITE:
        g, a, b = (pretty(x, disp) for x in t.args)
        return f"({g} ? {a} : {b})"
    if k == SELECT:
        return f"{pretty(t.args[0], disp)}[{pretty(t.args[1], disp)}]"
    if k == STORE:
        a, i, v = (pretty(x, disp) for x in t.args)
        return f"({a} WITH [{i}:={v}])"
    if k == TSEL:
        return f"{pretty(t.args[0], disp)}.{t.attr}"
    if k == TSTORE:
        a, v = (pretty(x, disp) for x in t.args)
        return f"({a} WITH .{t.attr}:={v})"
    if k == MKTUP:
        inner = ", ".join(f"{n}: {pretty(v, disp)}"
                          for v, (n, _) in zip(t.args, t.sort.fields))
        return f"{{{inner}}}"
    if k == TO_REAL:
        return f"to_real({pretty(t.args[0], disp)})"
    if k == TO_INT:
        return f"to_int({pretty(t.args[0], disp)})"
    raise AssertionError(k)
