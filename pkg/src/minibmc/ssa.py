"""Symbolic execution of the unrolled program into guarded SSA equations.

Assignments become versioned equations, control-flow joins merge variable
versions with ite on the branch guard, assertions become properties guarded
by the accumulated path condition, and assumptions strengthen the context of
every later property.  Pointers are two-field tuples (object id, element
offset) with a statically tracked candidate object set per pointer term.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import terms as T
from .ast import (
    Binary, Call, Cast, Conditional, Expr, FloatLit, Ident, Index, IntLit,
    Member, Nondet, Unary,
)
from .encode import BITVECTOR, EncodingCtx, scalar_view
from .errors import Diagnostic, DiagnosticsError, InternalError, NOWHERE, SourceLoc
from .goto import GotoProgram, Instr
from .printer import print_expr
from .simplify import simplify
from .terms import Term
from .typeinfo import TypeInfo, union_widest_member

NULL_OBJECT = 0
INVALID_OBJECT = 1
FIRST_OBJECT = 2


@dataclass(frozen=True)
class SsaVar:
    base: str
    version: int

    def display(self) -> str:
        short = self.base.rsplit("::", 1)[-1].lstrip("$")
        return f"{short}{self.version}"


@dataclass
class SsaEquation:
    lhs: SsaVar
    lhs_term: Term
    rhs: Term
    guard: Term
    loc: SourceLoc
    kind: str  # assign | guard | phi | copy | nondet | init
    source_text: str = ""


@dataclass
class SsaProperty:
    kind: str  # PropertyKind tag
    guard: Term
    claim: Term
    assumptions: Term
    desc: str
    loc: SourceLoc
    index: int
    aux: dict = field(default_factory=dict)

    def clause(self) -> Term:
        """The formula a definition literal abbreviates."""
        return T.mk_implies(T.mk_and(self.assumptions, self.guard), self.claim)


@dataclass
class PointerValue:
    object: Term
    index: Term


@dataclass
class ObjectInfo:
    name: str
    oid: int
    ty: TypeInfo

    @property
    def length(self) -> int:
        return self.ty.length if self.ty.kind == "array" else 1


# ------------------------------- VC sites -----------------------------------

@dataclass
class ArrayAccessSite:
    array_name: str
    index: Term
    length: int
    guard: Term
    loc: SourceLoc
    is_store: bool


@dataclass
class DivSite:
    divisor: Term
    ty: TypeInfo
    guard: Term
    loc: SourceLoc


@dataclass
class ArithSite:
    op: str  # + - * / neg
    x: Term
    y: Term | None
    ty: TypeInfo
    guard: Term
    loc: SourceLoc


@dataclass
class DerefSite:
    pointer: PointerValue
    candidates: list[tuple[ObjectInfo, int]]  # (object, extent in elements)
    guard: Term
    loc: SourceLoc


@dataclass
class SameObjectSite:
    """Relational pointer use: both sides must point into one object."""

    left: PointerValue
    right: PointerValue
    guard: Term
    loc: SourceLoc


@dataclass
class Sites:
    array: list[ArrayAccessSite] = field(default_factory=list)
    div: list[DivSite] = field(default_factory=list)
    signed_arith: list[ArithSite] = field(default_factory=list)
    unsigned_arith: list[ArithSite] = field(default_factory=list)
    deref: list[DerefSite] = field(default_factory=list)
    same_object: list[SameObjectSite] = field(default_factory=list)


@dataclass
class SsaSystem:
    ctx: EncodingCtx
    constraints: list[SsaEquation] = field(default_factory=list)
    properties: list[SsaProperty] = field(default_factory=list)
    pointer_map: dict[SsaVar, PointerValue] = field(default_factory=dict)
    sites: Sites = field(default_factory=Sites)
    objects: dict[str, ObjectInfo] = field(default_factory=dict)
    var_types: dict[str, TypeInfo] = field(default_factory=dict)
    assumptions: list[Term] = field(default_factory=list)

    def var_count(self) -> int:
        lhs = {eq.lhs for eq in self.constraints}
        free = {t.attr for eq in self.constraints
                for t in T.free_vars(eq.rhs)} - {v.display() for v in lhs}
        return len(lhs) + len(free)

    def object_by_id(self, oid: int) -> ObjectInfo | None:
        for o in self.objects.values():
            if o.oid == oid:
                return o
        return None


# ------------------------------- executor -----------------------------------

@dataclass
class _State:
    guard_lits: list[Term]
    varmap: dict[str, int]
    active: bool = True

    def guard(self) -> Term:
        return T.mk_and(*self.guard_lits) if self.guard_lits else T.TRUE

    def fork(self) -> "_State":
        return _State(list(self.guard_lits), dict(self.varmap), True)


class Executor:
    def __init__(self, gp: GotoProgram, ctx: EncodingCtx | None = None,
                 simplify_enabled: bool = True):
        self.gp = gp
        self.ctx = ctx or EncodingCtx()
        self.simp = simplify_enabled
        self.sys = SsaSystem(self.ctx)
        self.versions: dict[str, int] = {}
        self.declared: set[str] = set()
        self.constvals: dict[Term, Term] = {}
        self.ptr_candidates: dict[Term, frozenset[str]] = {}
        self._guards = 0
        self._nondets = 0
        self._derefs = 0
        self._next_oid = FIRST_OBJECT
        self._prop_index = 0

    # ------------------------------------------------------------ plumbing
    def F(self, t: Term) -> Term:
        return simplify(t) if self.simp else t

    def type_of(self, base: str) -> TypeInfo:
        info = self.gp.symbols.get(base)
        if info is None:
            raise InternalError(f"unknown symbol {base!r}")
        return info.ty

    def var_term(self, base: str, version: int) -> Term:
        ty = self.type_of(base)
        self.sys.var_types[base] = ty
        return T.mk_var(f"{base}#{version}", self.ctx.sort_of(ty))

    def value_of(self, state: _State, base: str) -> Term:
        t = self.var_term(base, state.varmap.get(base, 0))
        if self.simp:
            return self.constvals.get(t, t)
        return t

    def new_version(self, base: str) -> SsaVar:
        n = self.versions.get(base, 0) + 1
        self.versions[base] = n
        return SsaVar(base, n)

    def object_of(self, base: str) -> ObjectInfo:
        obj = self.sys.objects.get(base)
        if obj is None:
            obj = ObjectInfo(base, self._next_oid, self.type_of(base))
            self._next_oid += 1
            self.sys.objects[base] = obj
        return obj

    def emit_eq(self, state: _State, base: str, rhs: Term, loc: SourceLoc,
                kind: str, source_text: str = "") -> SsaVar:
        var = self.new_version(base)
        lhs_term = self.var_term(base, var.version)
        rhs = self.F(rhs)
        self.sys.constraints.append(SsaEquation(
            var, lhs_term, rhs, state.guard(), loc, kind, source_text))
        state.varmap[base] = var.version
        if self.simp and rhs.kind in (T.CONST, T.MKTUP):
            self.constvals[lhs_term] = rhs
        if rhs in self.ptr_candidates:
            self.ptr_candidates[lhs_term] = self.ptr_candidates[rhs]
        if isinstance(lhs_term.sort, T.TupleSort) and lhs_term.sort.tag == "$ptr":
            self.sys.pointer_map[var] = PointerValue(
                self.F(T.mk_tup_select(rhs, "o")), self.F(T.mk_tup_select(rhs, "i")))
        return var

    # ------------------------------------------------------------- driver
    def run(self) -> SsaSystem:
        pending: dict[int, list[_State]] = {}
        state = _State([], {})
        for ins in self.gp.instructions:
            arrivals = pending.pop(id(ins), [])
            for arr in arrivals:
                if not state.active:
                    state = self._adopt(arr)
                else:
                    state = self._merge(state, arr)
            if not state.active:
                continue
            if ins.kind == "skip":
                continue
            if ins.kind == "decl":
                self._do_decl(state, ins)
            elif ins.kind == "assign":
                self._do_assign(state, ins)
            elif ins.kind == "assert":
                claim = self.F(self.encode_bool(state, ins.cond))
                self._add_property(ins.prop_kind or "user-assertion",
                                   state.guard(), claim, ins.desc, ins.loc)
            elif ins.kind == "assume":
                cond = self.F(self.encode_bool(state, ins.cond))
                self.sys.assumptions.append(
                    self.F(T.mk_implies(state.guard(), cond)))
            elif ins.kind == "goto":
                state = self._do_goto(state, ins, pending)
            else:
                raise InternalError(f"unknown instruction {ins.kind}")
        if pending:
            raise InternalError("branch to an unreached target; "
                                "was the program unrolled?")
        return self.sys

    def _add_property(self, kind: str, guard: Term, claim: Term,
                      desc: str, loc: SourceLoc):
        self._prop_index += 1
        self.sys.properties.append(SsaProperty(
            kind, guard, claim, T.mk_and(*self.sys.assumptions), desc, loc,
            self._prop_index))

    def _do_decl(self, state: _State, ins: Instr):
        base = ins.symbol
        self.sys.var_types[base] = ins.ty or self.type_of(base)
        if base in self.declared:
            var = self.new_version(base)  # re-entry: fresh unconstrained value
            state.varmap[base] = var.version
        else:
            self.declared.add(base)
            state.varmap.setdefault(base, self.versions.get(base, 0))

    def _do_goto(self, state: _State, ins: Instr,
                 pending: dict[int, list[_State]]) -> _State:
        if ins.guard is None:
            pending.setdefault(id(ins.target), []).append(state)
            return _State([], {}, active=False)
        # keep the guard literal's polarity positive when the branch guard
        # is a negation, matching g1 == (cond) with the taken side on !g1
        guard_expr = ins.guard
        negated = isinstance(guard_expr, Unary) and guard_expr.op == "!"
        cond_expr = guard_expr.operand if negated else guard_expr
        cond = self.F(self.encode_bool(state, cond_expr))
        taken_cond = T.mk_not(cond) if negated else cond
        if taken_cond is T.TRUE:
            pending.setdefault(id(ins.target), []).append(state)
            return _State([], {}, active=False)
        if taken_cond is T.FALSE:
            return state
        self._guards += 1
        gbase = "$g"
        self.gp.symbols.setdefault(gbase, _bool_symbol(gbase))
        gvar = self.new_version(gbase)
        gterm = T.mk_var(f"{gbase}#{gvar.version}", T.BOOL_S)
        self.sys.var_types[gbase] = _BOOL_TI
        self.sys.constraints.append(SsaEquation(
            gvar, gterm, cond, state.guard(), ins.loc, "guard",
            ins.source_text))
        taken_lit = T.mk_not(gterm) if negated else gterm
        fall_lit = gterm if negated else T.mk_not(gterm)
        taken = state.fork()
        taken.guard_lits.append(taken_lit)
        pending.setdefault(id(ins.target), []).append(taken)
        state.guard_lits.append(fall_lit)
        return state

    def _adopt(self, arr: _State) -> _State:
        """Resume a queued branch; rebase variables written since the fork."""
        for base, cnt in list(self.versions.items()):
            snap = arr.varmap.get(base, 0)
            if cnt > snap and base != "$g":
                snap_term = self.var_term(base, snap)
                rhs = self.constvals.get(snap_term, snap_term) if self.simp else snap_term
                self.emit_eq(arr, base, rhs, NOWHERE, "copy")
        return arr

    def _merge(self, cur: _State, arr: _State) -> _State:
        prefix = 0
        while (prefix < len(cur.guard_lits) and prefix < len(arr.guard_lits)
               and cur.guard_lits[prefix] is arr.guard_lits[prefix]):
            prefix += 1
        arr_cond = T.mk_and(*arr.guard_lits[prefix:]) if len(arr.guard_lits) > prefix \
            else T.TRUE
        cur_cond = T.mk_and(*cur.guard_lits[prefix:]) if len(cur.guard_lits) > prefix \
            else T.TRUE
        merged_lits = cur.guard_lits[:prefix]
        disj = self.F(T.mk_or(arr_cond, cur_cond))
        if disj is not T.TRUE:
            merged_lits = merged_lits + [disj]
        out = _State(merged_lits, {})
        bases = set(cur.varmap) | set(arr.varmap)
        for base in sorted(bases):
            vc = cur.varmap.get(base, 0)
            va = arr.varmap.get(base, 0)
            if vc == va:
                out.varmap[base] = vc
                continue
            tc = self.value_of(cur, base)
            ta = self.value_of(arr, base)
            phi = T.mk_ite(arr_cond, ta, tc)
            cand = self.ptr_candidates.get(ta, frozenset()) | \
                self.ptr_candidates.get(tc, frozenset())
            if cand:
                self.ptr_candidates[self.F(phi)] = cand
            self.emit_eq(out, base, phi, NOWHERE, "phi")
        return out

    # -------------------------------------------------------------- assign
    def _do_assign(self, state: _State, ins: Instr):
        rhs_expr = ins.rhs
        lhs = ins.lhs
        # strip implicit casts wrapping the assignment target
        while isinstance(lhs, Cast):
            lhs = lhs.operand
        if isinstance(rhs_expr, Nondet):
            self._assign_nondet(state, lhs, rhs_expr, ins)
            return
        value = self.encode(state, rhs_expr)
        self._write(state, lhs, value, ins, kind="assign")

    def _assign_nondet(self, state: _State, lhs: Expr, nd: Nondet, ins: Instr):
        fresh = self._fresh_free(nd.ty, ins.loc)
        self._write(state, lhs, fresh, ins, kind="nondet")

    def _fresh_free(self, ty: TypeInfo, loc: SourceLoc) -> Term:
        self._nondets += 1
        base = f"$nondet{self._nondets}"
        self.gp.symbols[base] = _symbol(base, ty)
        self.sys.var_types[base] = ty
        return T.mk_var(f"{base}#0", self.ctx.sort_of(ty))

    def _write(self, state: _State, lhs: Expr, value: Term, ins: Instr,
               kind: str):
        base, steps, deref = self._lvalue_path(state, lhs)
        if deref is None:
            if not steps:
                self.emit_eq(state, base, value, ins.loc, kind, ins.source_text)
                return
            cur = self.value_of(state, base)
            updated = self._apply_update(cur, steps, value)
            self.emit_eq(state, base, updated, ins.loc, kind, ins.source_text)
            return
        pv, candidates, elem_ty = deref
        self._deref_site(state, pv, candidates, elem_ty, ins.loc)
        for obj, _extent in candidates:
            cur = self.value_of(state, obj.name)
            full_steps = list(steps)
            if obj.ty.kind == "array":
                full_steps = [("idx", pv.index)] + full_steps
            updated = self._apply_update(cur, full_steps, value)
            cond = self.F(T.mk_eq(pv.object, self.ctx.object_id(obj.oid)))
            new_val = T.mk_ite(cond, updated, cur)
            self.emit_eq(state, obj.name, new_val, ins.loc, kind, ins.source_text)

    def _apply_update(self, container: Term, steps: list, value: Term) -> Term:
        if not steps:
            return value
        hd, *rest = steps
        if hd[0] == "idx":
            inner = T.mk_select(container, hd[1])
            return T.mk_store(container, hd[1], self._apply_update(inner, rest, value))
        if hd[0] == "fld":
            inner = T.mk_tup_select(container, hd[1])
            return T.mk_tup_store(container, hd[1],
                                  self._apply_update(inner, rest, value))
        if hd[0] == "ufld":
            member_ty, widest_ty = hd[1], hd[2]
            assert not rest
            return T.mk_tup_store(container, "$v",
                                  self.ctx.convert(value, member_ty, widest_ty))
        raise AssertionError(hd)

    def _lvalue_path(self, state: _State, e: Expr):
        """Return (base symbol, steps, deref) for an assignment target.

        steps apply to the base object's value; deref is
        (PointerValue, candidates, element type) when the path goes through
        a pointer, in which case base is unused.
        """
        steps: list = []
        node = e
        while True:
            if isinstance(node, Ident):
                sym = node.symbol  # type: ignore[attr-defined]
                return sym, steps, None
            if isinstance(node, Index):
                base_ty = node.base.ty
                if base_ty.kind == "array":
                    idx = self.F(self.encode(state, node.index))
                    self._array_site(state, node, idx, base_ty, is_store=not steps)
                    steps.insert(0, ("idx", idx))
                    node = node.base
                    continue
                # pointer subscript: p[i] writes through the pointer
                idx = self.F(self.encode(state, node.index))
                pv, cands, elem = self._pointer_of(state, node.base, node.loc)
                pv = PointerValue(pv.object, self.F(T.mk_add(pv.index, idx)))
                return "", steps, (pv, cands, elem)
            if isinstance(node, Member):
                if node.arrow:
                    pv, cands, elem = self._pointer_of(state, node.base, node.loc)
                    steps2 = self._member_steps(elem, node.name, node.loc)
                    return "", steps2 + steps, (pv, cands, elem)
                rec = node.base.ty
                steps = self._member_steps(rec, node.name, node.loc) + steps
                node = node.base
                continue
            if isinstance(node, Unary) and node.op == "*":
                pv, cands, elem = self._pointer_of(state, node.operand, node.loc)
                return "", steps, (pv, cands, elem)
            if isinstance(node, Cast):
                node = node.operand
                continue
            raise InternalError(f"unsupported lvalue {node!r}")

    def _member_steps(self, rec: TypeInfo, name: str, loc: SourceLoc) -> list:
        rec = self._complete(rec, loc)
        if rec.kind == "union":
            widest = union_widest_member(rec)
            return [("ufld", rec.field_type(name), widest)]
        return [("fld", name)]

    def _complete(self, rec: TypeInfo, loc: SourceLoc) -> TypeInfo:
        if rec.kind in ("structure", "union") and not rec.fields:
            for obj in self.gp.symbols.values():
                t = obj.ty
                if t.kind == rec.kind and t.tag == rec.tag and t.fields:
                    return t
            raise DiagnosticsError([Diagnostic(
                "type", f"incomplete record {rec.tag!r}", loc)])
        return rec

    # --------------------------------------------------------- expressions
    def encode_bool(self, state: _State, e: Expr) -> Term:
        t = self.encode(state, e)
        if t.sort != T.BOOL_S:
            raise InternalError(f"expected boolean, got {t.sort} for {e!r}")
        return t

    def encode(self, state: _State, e: Expr) -> Term:
        t = self._encode(state, e)
        return self.F(t)

    def _encode(self, state: _State, e: Expr) -> Term:
        ctx = self.ctx
        if isinstance(e, IntLit):
            return ctx.int_literal(e.value, e.ty)
        if isinstance(e, FloatLit):
            return ctx.fixed_literal(e.value, e.ty)
        if isinstance(e, Ident):
            return self.value_of(state, e.symbol)  # type: ignore[attr-defined]
        if isinstance(e, Nondet):
            return self._fresh_free(e.ty, e.loc)
        if isinstance(e, Cast):
            return self._encode_cast(state, e)
        if isinstance(e, Unary):
            return self._encode_unary(state, e)
        if isinstance(e, Binary):
            return self._encode_binary(state, e)
        if isinstance(e, Conditional):
            g = self.encode_bool(state, e.cond)
            return T.mk_ite(g, self.encode(state, e.then), self.encode(state, e.els))
        if isinstance(e, Index):
            return self._encode_index(state, e)
        if isinstance(e, Member):
            return self._encode_member(state, e)
        if isinstance(e, Call):
            raise InternalError("calls must be inlined before SSA")
        raise InternalError(f"unhandled expression {e!r}")

    def _encode_cast(self, state: _State, e: Cast) -> Term:
        if e.decay:
            return self._address_of(state, e.operand, index=None, loc=e.loc)
        inner_ty = e.operand.ty
        if inner_ty.kind == "pointer" and e.ty.kind == "bool":
            p = self.encode(state, e.operand)
            return T.mk_ne(p, ctx_null(self.ctx))
        if e.ty.kind == "pointer":
            # null pointer constant
            return ctx_null(self.ctx)
        inner = self.encode(state, e.operand)
        return self.ctx.convert(inner, inner_ty, e.ty)

    def _encode_unary(self, state: _State, e: Unary) -> Term:
        if e.op == "!":
            return T.mk_not(self.encode_bool(state, e.operand))
        if e.op == "&":
            return self._address_of_expr(state, e.operand, e.loc)
        if e.op == "*":
            pv, cands, elem = self._pointer_of(state, e.operand, e.loc)
            return self._deref_read(state, pv, cands, elem, e.ty, e.loc)
        x = self.encode(state, e.operand)
        if e.op == "~":
            return self.ctx.bitwise("~", x, None, e.loc)
        if e.op == "-":
            ty = scalar_view(e.ty)
            if ty.kind == "signedbv":
                self.sys.sites.signed_arith.append(
                    ArithSite("neg", x, None, ty, state.guard(), e.loc))
            return self.ctx.arith("neg", x, None, e.ty, e.loc)
        raise InternalError(f"unary {e.op!r}")

    def _encode_binary(self, state: _State, e: Binary) -> Term:
        op = e.op
        if op in ("&&", "||"):
            a = self.encode_bool(state, e.left)
            b = self.encode_bool(state, e.right)
            return T.mk_and(a, b) if op == "&&" else T.mk_or(a, b)
        lt, rt = e.left.ty, e.right.ty
        if lt.kind == "pointer" or rt.kind == "pointer":
            return self._encode_pointer_binary(state, e)
        a = self.encode(state, e.left)
        b = self.encode(state, e.right)
        if op in ("==", "!=", "<", "<=", ">", ">="):
            return self.ctx.compare(op, a, b, lt)
        if op in ("<<", ">>"):
            return self.ctx.shift(op, a, b, lt, e.loc)
        if op in ("&", "|", "^"):
            return self.ctx.bitwise(op, a, b, e.loc)
        ty = scalar_view(e.ty)
        if op in ("/", "%"):
            self.sys.sites.div.append(DivSite(b, ty, state.guard(), e.loc))
        if ty.kind == "signedbv" and op in ("+", "-", "*", "/"):
            self.sys.sites.signed_arith.append(
                ArithSite(op, a, b, ty, state.guard(), e.loc))
        elif ty.kind == "unsignedbv" and op in ("+", "-", "*"):
            self.sys.sites.unsigned_arith.append(
                ArithSite(op, a, b, ty, state.guard(), e.loc))
        return self.ctx.arith(op, a, b, e.ty, e.loc)

    def _encode_pointer_binary(self, state: _State, e: Binary) -> Term:
        op = e.op
        if op in ("+", "-") and e.left.ty.kind == "pointer" and e.right.ty.is_integer:
            p = self.encode(state, e.left)
            n = self.encode(state, e.right)
            pv = self._pv(p)
            new_index = T.mk_add(pv.index, n) if op == "+" else T.mk_sub(pv.index, n)
            out = T.mk_tuple(self.ctx.pointer_sort(), pv.object, self.F(new_index))
            self._copy_candidates(p, out)
            return out
        p = self.encode(state, e.left)
        q = self.encode(state, e.right)
        if op == "==":
            return T.mk_eq(p, q)
        if op == "!=":
            return T.mk_ne(p, q)
        pv, qv = self._pv(p), self._pv(q)
        self._same_object_site(state, pv, qv, p, q, e.loc)
        if op == "-":
            diff = T.mk_sub(pv.index, qv.index)
            long_ty = scalar_view(e.ty)
            if self.ctx.is_bv and long_ty.width != diff.sort.width:
                diff = self.ctx.resize_bv(diff, long_ty.width, signed=True)
            return diff
        return self.ctx.compare(op, pv.index, qv.index,
                                TypeInfo("signedbv", width=self.ctx.widths.int_))

    def _same_object_site(self, state: _State, pv: PointerValue, qv: PointerValue,
                          p: Term, q: Term, loc: SourceLoc):
        self.sys.sites.same_object.append(
            SameObjectSite(pv, qv, state.guard(), loc))

    # --------------------------------------------------------- pointers
    def _pv(self, p: Term) -> PointerValue:
        return PointerValue(self.F(T.mk_tup_select(p, "o")),
                            self.F(T.mk_tup_select(p, "i")))

    def _copy_candidates(self, src: Term, dst: Term):
        c = self.ptr_candidates.get(src)
        if c:
            self.ptr_candidates[self.F(dst)] = c

    def _address_of_expr(self, state: _State, operand: Expr, loc: SourceLoc) -> Term:
        if isinstance(operand, Index):
            idx = self.encode(state, operand.index)
            return self._address_of(state, operand.base, idx, loc)
        if isinstance(operand, Member) and not operand.arrow:
            rec = operand.base.ty
            if rec.kind == "union":
                raise DiagnosticsError([Diagnostic(
                    "unsupported", "pointers into union interiors", loc)])
            ordinal = rec.field_index(operand.name)
            return self._address_of(state, operand.base, None, loc,
                                    field_ordinal=ordinal)
        return self._address_of(state, operand, None, loc)

    def _address_of(self, state: _State, target: Expr, index: Term | None,
                    loc: SourceLoc, field_ordinal: int | None = None) -> Term:
        while isinstance(target, Cast):
            target = target.operand
        if not isinstance(target, Ident):
            raise DiagnosticsError([Diagnostic(
                "unsupported", "address-of is limited to whole objects, array "
                "elements and top-level struct fields", loc)])
        base = target.symbol  # type: ignore[attr-defined]
        obj = self.object_of(base)
        if field_ordinal is not None:
            idx = self.ctx.index_const(field_ordinal)
        else:
            idx = index if index is not None else self.ctx.index_const(0)
        out = T.mk_tuple(self.ctx.pointer_sort(),
                         self.ctx.object_id(obj.oid), self.F(idx))
        self.ptr_candidates[self.F(out)] = frozenset([base])
        return self.F(out)

    def _pointer_of(self, state: _State, e: Expr, loc: SourceLoc):
        """Evaluate a pointer-typed expression; returns (pv, candidates, elem_ty)."""
        ty = e.ty
        assert ty.kind == "pointer", ty
        p = self.encode(state, e)
        pv = self._pv(p)
        cand_names = self.ptr_candidates.get(p, frozenset())
        elem = ty.element
        elem = self._complete(elem, loc) if elem.kind in ("structure", "union") else elem
        candidates: list[tuple[ObjectInfo, int]] = []
        for name in sorted(cand_names):
            obj = self.sys.objects.get(name)
            if obj is None:
                continue
            candidates.append((obj, self._extent(obj, elem)))
        return pv, candidates, elem

    def _extent(self, obj: ObjectInfo, elem_ty: TypeInfo) -> int:
        if obj.ty.kind == "array":
            return obj.ty.length
        if obj.ty.kind in ("structure", "union") and \
                not (elem_ty.kind in ("structure", "union")
                     and elem_ty.tag == obj.ty.tag):
            return len(obj.ty.fields)  # pointer to a top-level field
        return 1

    def _deref_site(self, state: _State, pv: PointerValue, candidates,
                    elem_ty: TypeInfo, loc: SourceLoc):
        self.sys.sites.deref.append(
            DerefSite(pv, list(candidates), state.guard(), loc))

    def _deref_read(self, state: _State, pv: PointerValue, candidates,
                    elem_ty: TypeInfo, result_ty: TypeInfo, loc: SourceLoc) -> Term:
        self._deref_site(state, pv, candidates, elem_ty, loc)
        self._derefs += 1
        fallback_base = f"$deref{self._derefs}"
        self.gp.symbols[fallback_base] = _symbol(fallback_base, result_ty)
        self.sys.var_types[fallback_base] = result_ty
        acc = T.mk_var(f"{fallback_base}#0", self.ctx.sort_of(result_ty))
        for obj, _extent in candidates:
            val = self._read_candidate(state, obj, pv, elem_ty, result_ty, loc)
            cond = self.F(T.mk_eq(pv.object, self.ctx.object_id(obj.oid)))
            if cond is T.TRUE:
                return val
            if cond is T.FALSE:
                continue
            acc = T.mk_ite(cond, val, acc)
        if len(candidates) == 1 and T.is_const(pv.object):
            # constant object id matching the only candidate short-circuits above;
            # a constant mismatch leaves the free fallback
            pass
        return acc

    def _read_candidate(self, state: _State, obj: ObjectInfo, pv: PointerValue,
                        elem_ty: TypeInfo, result_ty: TypeInfo,
                        loc: SourceLoc) -> Term:
        cur = self.value_of(state, obj.name)
        oty = obj.ty
        if oty.kind == "array":
            val = T.mk_select(cur, pv.index)
            if oty.element != result_ty and oty.element.is_scalar \
                    and result_ty.is_scalar:
                val = self.ctx.convert(val, oty.element, result_ty)
            return val
        if oty.kind in ("structure", "union"):
            if result_ty.kind in ("structure", "union") and result_ty.tag == oty.tag:
                return cur
            # pointer to a top-level field: constant ordinal selects the field
            if not T.is_const(pv.index):
                raise DiagnosticsError([Diagnostic(
                    "unsupported", "arithmetic on struct-field pointers", loc)])
            ordinal = pv.index.attr
            if not 0 <= ordinal < len(oty.fields):
                return T.mk_var(f"$deref{self._derefs}#0",
                                self.ctx.sort_of(result_ty))
            name, fty = oty.fields[ordinal]
            val = T.mk_tup_select(cur, name) if oty.kind == "structure" else \
                self.ctx.convert(T.mk_tup_select(cur, "$v"),
                                 union_widest_member(oty), fty)
            if fty != result_ty and fty.is_scalar and result_ty.is_scalar:
                val = self.ctx.convert(val, fty, result_ty)
            return val
        val = cur
        if oty != result_ty and oty.is_scalar and result_ty.is_scalar:
            val = self.ctx.convert(val, oty, result_ty)
        return val

    # ------------------------------------------------------ reads: composites
    def _encode_index(self, state: _State, e: Index) -> Term:
        base_ty = e.base.ty
        idx = self.encode(state, e.index)
        if base_ty.kind == "array":
            arr = self.encode(state, e.base)
            self._array_site(state, e, idx, base_ty, is_store=False)
            return T.mk_select(arr, idx)
        pv, cands, elem = self._pointer_of(state, e.base, e.loc)
        pv = PointerValue(pv.object, self.F(T.mk_add(pv.index, idx)))
        return self._deref_read(state, pv, cands, elem, e.ty, e.loc)

    def _array_site(self, state: _State, e: Index, idx: Term,
                    base_ty: TypeInfo, is_store: bool):
        self.sys.sites.array.append(ArrayAccessSite(
            print_expr(e.base), idx, base_ty.length, state.guard(), e.loc,
            is_store))

    def _encode_member(self, state: _State, e: Member) -> Term:
        if e.arrow:
            pv, cands, elem = self._pointer_of(state, e.base, e.loc)
            whole = self._deref_read(state, pv, cands, elem, elem, e.loc)
            rec = elem
        else:
            whole = self.encode(state, e.base)
            rec = self._complete(e.base.ty, e.loc)
        if rec.kind == "union":
            widest = union_widest_member(rec)
            slot = T.mk_tup_select(whole, "$v")
            return self.ctx.convert(slot, widest, rec.field_type(e.name))
        return T.mk_tup_select(whole, e.name)


_BOOL_TI = TypeInfo("bool", width=1)


def _symbol(name: str, ty: TypeInfo):
    from .ast import SymbolInfo
    return SymbolInfo(name, ty, "local")


def _bool_symbol(name: str):
    return _symbol(name, _BOOL_TI)


def ctx_null(ctx: EncodingCtx) -> Term:
    return ctx.null_pointer()


def execute(gp: GotoProgram, ctx: EncodingCtx | None = None,
            simplify_enabled: bool = True) -> SsaSystem:
    """Symbolically execute an unrolled program into an SSA system."""
    return Executor(gp, ctx, simplify_enabled).run()


def format_ssa(ssa: SsaSystem) -> str:
    """Fig-2(b)-style dump: versioned equations then property claims."""
    lines: list[str] = []
    for eq in ssa.constraints:
        lines.append(f"{eq.lhs.display()} == {T.pretty(eq.rhs)}")
    for i, p in enumerate(ssa.properties, start=1):
        suffix = "" if p.guard is T.TRUE else f"  [guard {T.pretty(p.guard)}]"
        lines.append(f"t{i} == {T.pretty(p.claim)}{suffix}")
    return "\n".join(lines)
