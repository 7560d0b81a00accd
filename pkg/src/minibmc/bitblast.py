"""Tseitin bit-blasting of array-free, tuple-free bit-vector queries.

Word-level operators become bit-level circuits: ripple-carry adders,
shift-and-add multipliers, restoring dividers, barrel shifters and
comparator chains.  Variables defined by an equation are bound directly to
the bits of their right-hand side, so only free inputs allocate fresh
CNF variables.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import terms as T
from .errors import InternalError
from .terms import Term

TRUE_LIT = 1


@dataclass
class CnfInstance:
    nvars: int
    clauses: list[list[int]]
    var_bits: dict[Term, object] = field(default_factory=dict)  # var -> lit / [lit]
    literal_lits: dict[Term, int] = field(default_factory=dict)  # property literal -> lit

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.nvars} {len(self.clauses)}"]
        for c in self.clauses:
            lines.append(" ".join(map(str, c)) + " 0")
        return "\n".join(lines) + "\n"


class Blaster:
    def __init__(self):
        self.nvars = 1  # var 1 is the constant TRUE
        self.clauses: list[list[int]] = [[TRUE_LIT]]
        self.bits: dict[Term, object] = {}
        self.gates: dict[tuple, int] = {}
        self.var_bits: dict[Term, object] = {}

    # ------------------------------------------------------------ plumbing
    def new_var(self) -> int:
        self.nvars += 1
        return self.nvars

    def clause(self, *lits: int):
        out = []
        for l in lits:
            if l == TRUE_LIT:
                return
            if l == -TRUE_LIT:
                continue
            out.append(l)
        self.clauses.append(out if out else [-TRUE_LIT])

    def const_lit(self, b: bool) -> int:
        return TRUE_LIT if b else -TRUE_LIT

    # --------------------------------------------------------------- gates
    def g_and(self, a: int, b: int) -> int:
        if a == -TRUE_LIT or b == -TRUE_LIT:
            return -TRUE_LIT
        if a == TRUE_LIT:
            return b
        if b == TRUE_LIT:
            return a
        if a == b:
            return a
        if a == -b:
            return -TRUE_LIT
        key = ("and", min(a, b), max(a, b))
        hit = self.gates.get(key)
        if hit is not None:
            return hit
        o = self.new_var()
        self.clause(-o, a)
        self.clause(-o, b)
        self.clause(o, -a, -b)
        self.gates[key] = o
        return o

    def g_or(self, a: int, b: int) -> int:
        return -self.g_and(-a, -b)

    def g_xor(self, a: int, b: int) -> int:
        if a == TRUE_LIT:
            return -b
        if a == -TRUE_LIT:
            return b
        if b == TRUE_LIT:
            return -a
        if b == -TRUE_LIT:
            return a
        if a == b:
            return -TRUE_LIT
        if a == -b:
            return TRUE_LIT
        key = ("xor", min(a, b), max(a, b))
        hit = self.gates.get(key)
        if hit is not None:
            return hit
        o = self.new_var()
        self.clause(-o, a, b)
        self.clause(-o, -a, -b)
        self.clause(o, -a, b)
        self.clause(o, a, -b)
        self.gates[key] = o
        return o

    def g_iff(self, a: int, b: int) -> int:
        return -self.g_xor(a, b)

    def g_ite(self, c: int, t: int, e: int) -> int:
        if c == TRUE_LIT:
            return t
        if c == -TRUE_LIT:
            return e
        if t == e:
            return t
        if t == TRUE_LIT and e == -TRUE_LIT:
            return c
        if t == -TRUE_LIT and e == TRUE_LIT:
            return -c
        key = ("ite", c, t, e)
        hit = self.gates.get(key)
        if hit is not None:
            return hit
        o = self.new_var()
        self.clause(-c, -t, o)
        self.clause(-c, t, -o)
        self.clause(c, -e, o)
        self.clause(c, e, -o)
        self.clause(-t, -e, o)
        self.clause(t, e, -o)
        self.gates[key] = o
        return o

    def g_and_list(self, lits: list[int]) -> int:
        acc = TRUE_LIT
        for l in lits:
            acc = self.g_and(acc, l)
        return acc

    def g_or_list(self, lits: list[int]) -> int:
        acc = -TRUE_LIT
        for l in lits:
            acc = self.g_or(acc, l)
        return acc

    # ----------------------------------------------------------- circuits
    def full_add(self, a: int, b: int, c: int) -> tuple[int, int]:
        s = self.g_xor(self.g_xor(a, b), c)
        carry = self.g_or(self.g_and(a, b), self.g_and(c, self.g_xor(a, b)))
        return s, carry

    def ripple(self, A: list[int], B: list[int], cin: int) -> list[int]:
        out = []
        c = cin
        for a, b in zip(A, B):
            s, c = self.full_add(a, b, c)
            out.append(s)
        return out

    def add(self, A, B):
        return self.ripple(A, B, -TRUE_LIT)

    def sub(self, A, B):
        return self.ripple(A, [-b for b in B], TRUE_LIT)

    def neg(self, A):
        return self.ripple([-a for a in A], [self.const_lit(False)] * len(A),
                           TRUE_LIT)

    def mul(self, A, B):
        w = len(A)
        acc = [self.const_lit(False)] * w
        for i, b in enumerate(B):
            if b == -TRUE_LIT:
                continue
            partial = [self.const_lit(False)] * i + \
                [self.g_and(a, b) for a in A[: w - i]]
            acc = self.add(acc, partial)
        return acc

    def ult(self, A, B) -> int:
        r = self.const_lit(False)
        for a, b in zip(A, B):  # LSB to MSB
            r = self.g_ite(self.g_xor(a, b), b, r)
        return r

    def slt(self, A, B) -> int:
        A2 = A[:-1] + [-A[-1]]
        B2 = B[:-1] + [-B[-1]]
        return self.ult(A2, B2)

    def equal(self, A, B) -> int:
        return self.g_and_list([self.g_iff(a, b) for a, b in zip(A, B)])

    def shift(self, A: list[int], amount: list[int], kind: str) -> list[int]:
        w = len(A)
        fill = A[-1] if kind == "ashr" else self.const_lit(False)
        cur = list(A)
        k = 0
        while (1 << k) < w:
            bit = amount[k] if k < len(amount) else self.const_lit(False)
            step = 1 << k
            if kind == "shl":
                shifted = [self.const_lit(False) if i < step else cur[i - step]
                           for i in range(w)]
            else:
                shifted = [cur[i + step] if i + step < w else fill
                           for i in range(w)]
            cur = [self.g_ite(bit, s, c) for s, c in zip(shifted, cur)]
            k += 1
        # amounts >= w produce the fill value everywhere
        wbits = _w_const_bits(w, len(amount))
        in_range = self.ult(amount, [self.const_lit(b) for b in wbits])
        return [self.g_ite(in_range, c, fill) for c in cur]

    def udivrem(self, A, B) -> tuple[list[int], list[int]]:
        w = len(A)
        F = self.const_lit(False)
        R = [F] * (w + 1)
        D = B + [F]
        Q = [F] * w
        for i in range(w - 1, -1, -1):
            R = [A[i]] + R[:-1]
            ge = -self.ult(R, D)
            Q[i] = ge
            RmD = self.sub(R, D)
            R = [self.g_ite(ge, x, y) for x, y in zip(RmD, R)]
        divisor_zero = self.equal(B, [F] * w)
        ones = [TRUE_LIT] * w
        Q = [self.g_ite(divisor_zero, o, q) for o, q in zip(ones, Q)]
        R = [self.g_ite(divisor_zero, a, r) for a, r in zip(A, R[:w])]
        return Q, R[:w]

    def sdivrem(self, A, B) -> tuple[list[int], list[int]]:
        w = len(A)
        sa, sb = A[-1], B[-1]
        absA = [self.g_ite(sa, n, a) for n, a in zip(self.neg(A), A)]
        absB = [self.g_ite(sb, n, b) for n, b in zip(self.neg(B), B)]
        uq, ur = self.udivrem(absA, absB)
        qneg = self.g_xor(sa, sb)
        Q = [self.g_ite(qneg, n, q) for n, q in zip(self.neg(uq), uq)]
        R = [self.g_ite(sa, n, r) for n, r in zip(self.neg(ur), ur)]
        # SMT-LIB fixes the divisor-zero quotient by the dividend's sign
        divisor_zero = self.equal(B, [self.const_lit(False)] * w)
        ones = [TRUE_LIT] * w
        one = [TRUE_LIT] + [-TRUE_LIT] * (w - 1)
        qz = [self.g_ite(sa, o1, o) for o1, o in zip(one, ones)]
        Q = [self.g_ite(divisor_zero, z, q) for z, q in zip(qz, Q)]
        R = [self.g_ite(divisor_zero, a, r) for a, r in zip(A, R)]
        return Q, R

    # -------------------------------------------------------------- terms
    def blast(self, t: Term) -> object:
        hit = self.bits.get(t)
        if hit is not None:
            return hit
        out = self._blast(t)
        self.bits[t] = out
        return out

    def _blast(self, t: Term) -> object:
        k = t.kind
        if k == T.CONST:
            if t.sort == T.BOOL_S:
                return self.const_lit(t.attr)
            w = t.sort.width
            return [self.const_lit(bool(t.attr >> i & 1)) for i in range(w)]
        if k == T.VAR:
            if t.sort == T.BOOL_S:
                out = self.new_var()
            elif isinstance(t.sort, T.BvSort):
                out = [self.new_var() for _ in range(t.sort.width)]
            else:
                raise InternalError(f"cannot bit-blast sort {t.sort} of {t.attr}")
            self.var_bits[t] = out
            return out
        if k == T.NOT:
            return -self.blast(t.args[0])
        if k in (T.AND, T.OR, T.XOR, T.IMPLIES, T.IFF):
            a = self.blast(t.args[0])
            b = self.blast(t.args[1])
            if k == T.AND:
                return self.g_and(a, b)
            if k == T.OR:
                return self.g_or(a, b)
            if k == T.XOR:
                return self.g_xor(a, b)
            if k == T.IMPLIES:
                return self.g_or(-a, b)
            return self.g_iff(a, b)
        if k == T.EQ:
            a, b = (self.blast(x) for x in t.args)
            if isinstance(a, int):
                return self.g_iff(a, b)
            return self.equal(a, b)
        if k in (T.LT, T.LE):
            a, b = (self.blast(x) for x in t.args)
            lt = self.slt if t.attr else self.ult
            if k == T.LT:
                return lt(a, b)
            return -lt(b, a)
        if k == T.ITE:
            g = self.blast(t.args[0])
            a, b = self.blast(t.args[1]), self.blast(t.args[2])
            if isinstance(a, int):
                return self.g_ite(g, a, b)
            return [self.g_ite(g, x, y) for x, y in zip(a, b)]
        if k in (T.ADD, T.SUB, T.MUL, T.DIV, T.REM):
            a, b = (self.blast(x) for x in t.args)
            if k == T.ADD:
                return self.add(a, b)
            if k == T.SUB:
                return self.sub(a, b)
            if k == T.MUL:
                return self.mul(a, b)
            if t.attr:  # signed
                q, r = self.sdivrem(a, b)
            else:
                q, r = self.udivrem(a, b)
            return q if k == T.DIV else r
        if k == T.NEG:
            return self.neg(self.blast(t.args[0]))
        if k in (T.BVAND, T.BVOR, T.BVXOR):
            a, b = (self.blast(x) for x in t.args)
            g = {T.BVAND: self.g_and, T.BVOR: self.g_or, T.BVXOR: self.g_xor}[k]
            return [g(x, y) for x, y in zip(a, b)]
        if k == T.BVNOT:
            return [-x for x in self.blast(t.args[0])]
        if k in (T.SHL, T.LSHR, T.ASHR):
            a, b = (self.blast(x) for x in t.args)
            kind = {T.SHL: "shl", T.LSHR: "lshr", T.ASHR: "ashr"}[k]
            return self.shift(a, b, kind)
        if k == T.CONCAT:
            a, b = (self.blast(x) for x in t.args)
            return b + a  # LSB-first
        if k == T.EXTRACT:
            hi, lo = t.attr
            return self.blast(t.args[0])[lo:hi + 1]
        if k == T.SEXT:
            a = self.blast(t.args[0])
            return a + [a[-1]] * t.attr
        if k == T.ZEXT:
            a = self.blast(t.args[0])
            return a + [self.const_lit(False)] * t.attr
        raise InternalError(f"cannot bit-blast {k} (was the query reduced?)")


def _w_const_bits(value: int, width: int) -> list[bool]:
    return [bool(value >> i & 1) for i in range(width)]


def bitblast(query) -> CnfInstance:
    """Blast definitions and property literals; goals are asserted later."""
    bl = Blaster()
    for lhs, rhs in query.defs:
        bl.bits[lhs] = bl.blast(rhs)
        bl.var_bits[lhs] = bl.bits[lhs]
    lits: dict[Term, int] = {}
    for lvar, clause in query.literal_defs:
        l = bl.blast(clause)
        bl.bits[lvar] = l
        bl.var_bits[lvar] = l
        lits[lvar] = l
    return CnfInstance(bl.nvars, bl.clauses, bl.var_bits, lits)
