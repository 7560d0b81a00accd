"""Lowering from the typed AST to a guarded, linear instruction stream.

Calls to defined functions are inlined bottom-up with per-call-site fresh
renaming of locals; side-effecting expressions were already decomposed by
the parser; short-circuit operators whose operands can carry safety
obligations are expanded into explicit branches so path guards stay exact.
Loops survive this phase as backward branches and are unrolled separately.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .ast import (
    Assign, AssertStmt, AssumeStmt, Binary, Block, Call, Cast, Conditional,
    DeclStmt, DoWhile, Expr, ExprStmt, FloatLit, For, FuncDef, GlobalDecl,
    Ident, If, Index, InitList, IntLit, Member, Nondet, ProgramAst, Return,
    Stmt, SymbolInfo, Unary, VarDecl, While,
)
from .errors import Diagnostic, DiagnosticsError, NOWHERE, SourceLoc
from .printer import print_expr
from .typeinfo import BOOL, TypeInfo

_BOT = "  "  # indent for diagnostics only


@dataclass(eq=False)
class Instr:
    kind: str  # assign | assume | assert | goto | skip | decl
    loc: SourceLoc = NOWHERE
    lhs: Expr | None = None
    rhs: Expr | None = None
    cond: Expr | None = None
    desc: str = ""
    prop_kind: str = ""  # user-assertion | unwinding
    guard: Expr | None = None  # branch condition; None = always taken
    target: "Instr | None" = None
    symbol: str = ""
    ty: TypeInfo | None = None
    source_text: str = ""

    def __repr__(self) -> str:
        if self.kind == "assign":
            return f"ASSIGN {print_expr(self.lhs)} := {print_expr(self.rhs)}"
        if self.kind in ("assume", "assert"):
            return f"{self.kind.upper()} {print_expr(self.cond)}"
        if self.kind == "goto":
            g = "" if self.guard is None else f" IF {print_expr(self.guard)}"
            return f"GOTO <{id(self.target) & 0xffff:x}>{g}"
        if self.kind == "decl":
            return f"DECL {self.symbol}"
        return "SKIP"


@dataclass
class LoopInfo:
    loop_id: int
    start: Instr  # skip at the loop head (back-edge target)
    exit: Instr   # the conditional branch leaving the loop
    back: Instr   # the backward goto
    loc: SourceLoc = NOWHERE


@dataclass
class GotoProgram:
    instructions: list[Instr] = field(default_factory=list)
    loops: list[LoopInfo] = field(default_factory=list)
    symbols: dict[str, SymbolInfo] = field(default_factory=dict)

    def index_of(self, ins: Instr) -> int:
        return self.instructions.index(ins)


_PURE_LEAVES = (IntLit, FloatLit, Ident)


def _is_trivial(e: Expr) -> bool:
    """No safety obligations and no state: safe to keep inside a formula."""
    if isinstance(e, _PURE_LEAVES):
        return True
    if isinstance(e, Cast):
        return _is_trivial(e.operand)
    if isinstance(e, Unary):
        return e.op in ("!", "~") and _is_trivial(e.operand)
    if isinstance(e, Binary):
        if e.op in ("/", "%", "+", "-", "*"):
            return False  # may carry division/overflow obligations
        return _is_trivial(e.left) and _is_trivial(e.right)
    if isinstance(e, Conditional):
        return all(_is_trivial(x) for x in (e.cond, e.then, e.els))
    return False


class Lowerer:
    def __init__(self, ast: ProgramAst):
        if not ast.typed:
            raise DiagnosticsError([Diagnostic("type", "lowering needs a typed AST")])
        self.ast = ast
        self.functions = ast.functions()
        self.symbols = dict(ast.symbols)
        self.out: list[Instr] = []
        self.loops: list[LoopInfo] = []
        self._loop_ids = 0
        self._tmp = 0
        self._inline = 0
        self._stack: list[str] = []  # call chain for recursion reports

    # ------------------------------------------------------------- helpers
    def emit(self, ins: Instr) -> Instr:
        self.out.append(ins)
        return ins

    def new_skip(self, loc: SourceLoc = NOWHERE) -> Instr:
        return Instr("skip", loc)

    def fresh_temp(self, ty: TypeInfo, loc: SourceLoc) -> Ident:
        self._tmp += 1
        name = f"$t{self._tmp}"
        self.symbols[name] = SymbolInfo(name, ty, "local")
        ident = Ident(name, loc)
        ident.ty = ty
        ident.symbol = name  # type: ignore[attr-defined]
        return ident

    def error(self, message: str, loc: SourceLoc, kind: str = "unsupported"):
        raise DiagnosticsError([Diagnostic(kind, message, loc)])

    # ------------------------------------------------------------- program
    def lower(self) -> GotoProgram:
        entry = self.ast.entry
        if entry not in self.functions:
            self.error(f"entry function {entry!r} not defined", NOWHERE, kind="type")
        for vd in self.ast.globals():
            self._init_global(vd)
        fn = self.functions[entry]
        self._stack.append(entry)
        self.lower_stmt(fn.body, {})
        self._stack.pop()
        return GotoProgram(self.out, self.loops, self.symbols)

    def _init_global(self, vd: VarDecl):
        base = Ident(vd.name, vd.loc)
        base.ty = vd.ty
        base.symbol = vd.name  # type: ignore[attr-defined]
        if vd.init is None:
            self._zero_fill(base, vd.ty, vd.loc)
        else:
            self._assign_init(base, vd.ty, vd.init, vd.loc, zero_rest=True)

    def _zero_fill(self, lval: Expr, ty: TypeInfo, loc: SourceLoc):
        """Element-wise zero initialization for a global object."""
        if ty.kind == "array":
            for i in range(ty.length):
                idx = IntLit(i, loc)
                idx.ty = None
                elem = Index(lval, self._int_const(i, loc), loc)
                elem.ty = ty.element
                self._zero_fill(elem, ty.element, loc)
        elif ty.kind == "structure":
            for name, ft in ty.fields:
                m = Member(lval, name, False, loc)
                m.ty = ft
                self._zero_fill(m, ft, loc)
        elif ty.kind == "union":
            from .typeinfo import union_widest_member
            widest = union_widest_member(ty)
            for name, ft in ty.fields:
                if ft == widest:
                    m = Member(lval, name, False, loc)
                    m.ty = ft
                    self._zero_fill(m, ft, loc)
                    break
        elif ty.kind == "pointer":
            zero = IntLit(0, loc)
            zero.ty = ty  # null pointer constant
            self.emit(Instr("assign", loc, lhs=lval, rhs=zero,
                            source_text=f"{print_expr(lval)} = 0"))
        else:
            value = self._typed_zero(ty, loc)
            self.emit(Instr("assign", loc, lhs=lval, rhs=value,
                            source_text=f"{print_expr(lval)} = 0"))

    def _typed_zero(self, ty: TypeInfo, loc: SourceLoc) -> Expr:
        if ty.kind == "fixedbv":
            from fractions import Fraction
            z = FloatLit(Fraction(0), loc)
        else:
            z = IntLit(0, loc)
        z.ty = ty
        return z

    def _int_const(self, value: int, loc: SourceLoc) -> Expr:
        lit = IntLit(value, loc)
        from .typeinfo import Widths
        lit.ty = Widths().int_type()
        return lit

    def _assign_init(self, lval: Expr, ty: TypeInfo, init, loc: SourceLoc,
                     zero_rest: bool):
        if isinstance(init, InitList):
            assert ty.kind == "array"
            for i in range(ty.length):
                elem = Index(lval, self._int_const(i, loc), loc)
                elem.ty = ty.element
                if i < len(init.items):
                    self._assign_init(elem, ty.element, init.items[i], loc, zero_rest)
                elif zero_rest or True:  # C zero-fills missing elements
                    self._zero_fill(elem, ty.element, loc)
            return
        rhs = self.prepare(init, {})
        self.emit(Instr("assign", loc, lhs=lval, rhs=rhs,
                        source_text=f"{print_expr(lval)} = {print_expr(rhs)}"))

    # ---------------------------------------------------------- statements
    def lower_stmt(self, s: Stmt, ren: dict[str, str]):
        if isinstance(s, Block):
            for x in s.stmts:
                self.lower_stmt(x, ren)
            return
        if isinstance(s, DeclStmt):
            for vd in s.decls:
                sym = ren.get(vd.symbol, vd.symbol)
                self.emit(Instr("decl", vd.loc, symbol=sym, ty=vd.ty,
                                source_text=f"{vd.name}"))
                if vd.init is not None:
                    base = Ident(vd.name, vd.loc)
                    base.ty = vd.ty
                    base.symbol = sym  # type: ignore[attr-defined]
                    self._assign_init(base, vd.ty, self._rename(vd.init, ren),
                                      vd.loc, zero_rest=True)
            return
        if isinstance(s, Assign):
            lhs = self.prepare_lvalue(s.lhs, ren)
            rhs = self.prepare(s.rhs, ren)
            self.emit(Instr("assign", s.loc, lhs=lhs, rhs=rhs,
                            source_text=f"{print_expr(lhs)} = {print_expr(rhs)}"))
            return
        if isinstance(s, ExprStmt):
            if isinstance(s.expr, Call):
                self.inline_call(s.expr, ren, want_value=False)
                return
            self.prepare(s.expr, ren)
            return
        if isinstance(s, If):
            cond = self.prepare(s.cond, ren)
            els_label = self.new_skip(s.loc)
            end_label = self.new_skip(s.loc)
            self.emit(Instr("goto", s.loc, guard=self._negate(cond),
                            target=els_label,
                            source_text=f"if ({print_expr(cond)})"))
            self.lower_stmt(s.then, ren)
            if s.els is not None:
                self.emit(Instr("goto", s.loc, guard=None, target=end_label))
                self.emit(els_label)
                self.lower_stmt(s.els, ren)
                self.emit(end_label)
            else:
                self.emit(els_label)
            return
        if isinstance(s, While):
            self._lower_loop(s.cond, s.body, None, ren, s.loc)
            return
        if isinstance(s, DoWhile):
            self.lower_stmt(s.body, ren)
            self._lower_loop(s.cond, s.body, None, ren, s.loc)
            return
        if isinstance(s, For):
            if s.init is not None:
                self.lower_stmt(s.init, ren)
            cond = s.cond
            if cond is None:
                cond = IntLit(1, s.loc)
                cond.ty = BOOL
            self._lower_loop(cond, s.body, s.step, ren, s.loc)
            return
        if isinstance(s, Return):
            # inlined returns are handled by inline_call; the entry's return
            # value is not observable
            if s.value is not None:
                self.prepare(s.value, ren)
            return
        if isinstance(s, AssertStmt):
            cond = self.prepare(s.cond, ren)
            self.emit(Instr("assert", s.loc, cond=cond,
                            desc=f"assertion {s.text}", prop_kind="user-assertion",
                            source_text=f"assert({s.text})"))
            return
        if isinstance(s, AssumeStmt):
            cond = self.prepare(s.cond, ren)
            self.emit(Instr("assume", s.loc, cond=cond,
                            desc=f"assumption {s.text}",
                            source_text=f"assume({s.text})"))
            return
        raise AssertionError(f"unhandled stmt {s!r}")

    def _lower_loop(self, cond: Expr, body: Stmt, step: Stmt | None,
                    ren: dict[str, str], loc: SourceLoc):
        head = self.emit(self.new_skip(loc))
        exit_label = self.new_skip(loc)
        c = self.prepare(cond, ren)
        exit_test = self.emit(Instr("goto", loc, guard=self._negate(c),
                                    target=exit_label,
                                    source_text=f"loop exit test !({print_expr(c)})"))
        self.lower_stmt(body, ren)
        if step is not None:
            self.lower_stmt(step, ren)
        back = self.emit(Instr("goto", loc, guard=None, target=head,
                               source_text="loop back edge"))
        self.emit(exit_label)
        self._loop_ids += 1
        self.loops.append(LoopInfo(self._loop_ids, head, exit_test, back, loc))

    def _negate(self, cond: Expr) -> Expr:
        n = Unary("!", cond, getattr(cond, "loc", NOWHERE))
        n.ty = BOOL
        return n

    # --------------------------------------------------------- expressions
    def _rename(self, e: Expr, ren: dict[str, str]) -> Expr:
        """Deep-copy an expression applying an inline symbol substitution."""
        if not ren:
            return e
        import copy

        def walk(x):
            if isinstance(x, Ident):
                new = Ident(x.name, x.loc)
                new.ty = x.ty
                new.symbol = ren.get(x.symbol, x.symbol)  # type: ignore[attr-defined]
                return new
            y = copy.copy(x)
            for f in ("operand", "left", "right", "cond", "then", "els",
                      "base", "index"):
                if hasattr(y, f) and isinstance(getattr(y, f), Expr):
                    setattr(y, f, walk(getattr(y, f)))
            if isinstance(y, Call):
                y.args = [walk(a) for a in y.args]
            return y

        return walk(e)

    def prepare(self, e: Expr, ren: dict[str, str]) -> Expr:
        """Extract calls and risky short-circuits; returns a pure expression."""
        e = self._rename(e, ren)
        return self._prep(e)

    def prepare_lvalue(self, e: Expr, ren: dict[str, str]) -> Expr:
        e = self._rename(e, ren)
        if isinstance(e, Index):
            e.base = self.prepare_lvalue(e.base, {})
            e.index = self._prep(e.index)
            return e
        if isinstance(e, Member):
            e.base = self.prepare_lvalue(e.base, {})
            return e
        if isinstance(e, Unary) and e.op == "*":
            e.operand = self._prep(e.operand)
            return e
        if isinstance(e, Ident):
            return e
        if isinstance(e, Cast):
            e.operand = self.prepare_lvalue(e.operand, {})
            return e
        self.error("unsupported assignment target", getattr(e, "loc", NOWHERE))

    def _prep(self, e: Expr) -> Expr:
        if isinstance(e, (IntLit, FloatLit, Ident, Nondet)):
            return e
        if isinstance(e, Call):
            return self.inline_call(e, {}, want_value=True)
        if isinstance(e, Cast):
            e.operand = self._prep(e.operand)
            return e
        if isinstance(e, Unary):
            e.operand = self._prep(e.operand)
            return e
        if isinstance(e, Index):
            e.base = self._prep(e.base)
            e.index = self._prep(e.index)
            return e
        if isinstance(e, Member):
            e.base = self._prep(e.base)
            return e
        if isinstance(e, Binary):
            if e.op in ("&&", "||"):
                return self._prep_shortcircuit(e)
            e.left = self._prep(e.left)
            e.right = self._prep(e.right)
            return e
        if isinstance(e, Conditional):
            return self._prep_conditional(e)
        raise AssertionError(f"unhandled expr {e!r}")

    def _prep_shortcircuit(self, e: Binary) -> Expr:
        left = self._prep(e.left)
        if _is_trivial(left) and _is_trivial(e.right):
            e.left = left
            e.right = self._prep(e.right)
            return e
        # t = left; if (t) t = right;   (|| branches on !t)
        t = self.fresh_temp(BOOL, e.loc)
        self.emit(Instr("decl", e.loc, symbol=t.symbol, ty=BOOL))
        self.emit(Instr("assign", e.loc, lhs=t, rhs=left,
                        source_text=f"{t.name} = {print_expr(left)}"))
        skip = self.new_skip(e.loc)
        guard = self._negate(t) if e.op == "&&" else t
        self.emit(Instr("goto", e.loc, guard=guard, target=skip))
        right = self._prep(e.right)
        self.emit(Instr("assign", e.loc, lhs=t, rhs=right,
                        source_text=f"{t.name} = {print_expr(right)}"))
        self.emit(skip)
        return t

    def _prep_conditional(self, e: Conditional) -> Expr:
        cond = self._prep(e.cond)
        if _is_trivial(cond) and _is_trivial(e.then) and _is_trivial(e.els):
            e.cond = cond
            e.then = self._prep(e.then)
            e.els = self._prep(e.els)
            return e
        t = self.fresh_temp(e.ty, e.loc)
        self.emit(Instr("decl", e.loc, symbol=t.symbol, ty=e.ty))
        els_label = self.new_skip(e.loc)
        end_label = self.new_skip(e.loc)
        self.emit(Instr("goto", e.loc, guard=self._negate(cond), target=els_label))
        then = self._prep(e.then)
        self.emit(Instr("assign", e.loc, lhs=t, rhs=then))
        self.emit(Instr("goto", e.loc, guard=None, target=end_label))
        self.emit(els_label)
        els = self._prep(e.els)
        self.emit(Instr("assign", e.loc, lhs=t, rhs=els))
        self.emit(end_label)
        return t

    # -------------------------------------------------------------- calls
    def inline_call(self, call: Call, ren: dict[str, str],
                    want_value: bool) -> Expr | None:
        name = call.name
        if name in self._stack:
            cycle = " -> ".join(self._stack + [name])
            self.error(f"recursion is not supported (call cycle {cycle})", call.loc)
        fn = self.functions.get(name)
        if fn is None:
            self.error(f"call to undefined function {name!r}", call.loc, kind="type")
        args = [self._prep(self._rename(a, ren)) for a in call.args]

        single = self._single_return(fn)
        if single is not None and want_value and \
                all(isinstance(a, _PURE_LEAVES) for a in args):
            sub = {p.name: a for p, a in zip(fn.params, args)}
            expr = self._subst_params(single, fn, sub)
            if expr is not None:
                return expr

        self._inline += 1
        n = self._inline
        renames: dict[str, str] = {}
        for p in fn.params:
            q = f"{name}::{p.name}"
            renames[q] = f"{q}~{n}"
            self.symbols[renames[q]] = SymbolInfo(renames[q], p.ty, "local")
        for sym, info in list(self.symbols.items()):
            if sym.startswith(f"{name}::") and info.storage == "local" \
                    and "~" not in sym:
                renames[sym] = f"{sym}~{n}"
                self.symbols[renames[sym]] = SymbolInfo(renames[sym], info.ty, "local")
        ret_sym = None
        if fn.ret_ty is not None:
            ret_sym = f"{name}::$ret~{n}"
            self.symbols[ret_sym] = SymbolInfo(ret_sym, fn.ret_ty, "local")

        for p, a in zip(fn.params, args):
            lhs = Ident(p.name, call.loc)
            lhs.ty = p.ty
            lhs.symbol = renames[f"{name}::{p.name}"]  # type: ignore[attr-defined]
            self.emit(Instr("decl", call.loc, symbol=lhs.symbol, ty=p.ty))
            self.emit(Instr("assign", call.loc, lhs=lhs, rhs=a,
                            source_text=f"{name}::{p.name} = {print_expr(a)}"))

        self._stack.append(name)
        self._lower_inlined_body(fn.body, renames, ret_sym, fn)
        self._stack.pop()

        if not want_value or fn.ret_ty is None:
            return None
        out = Ident(f"$ret({name})", call.loc)
        out.ty = fn.ret_ty
        out.symbol = ret_sym  # type: ignore[attr-defined]
        return out

    def _single_return(self, fn: FuncDef) -> Expr | None:
        stmts = fn.body.stmts
        if len(stmts) == 1 and isinstance(stmts[0], Return) and stmts[0].value is not None:
            v = stmts[0].value
            if _expr_is_pure_of_calls(v):
                return v
        return None

    def _subst_params(self, expr: Expr, fn: FuncDef, sub: dict[str, Expr]) -> Expr | None:
        import copy

        def walk(x):
            if isinstance(x, Ident):
                base = x.symbol.rsplit("::", 1)[-1]  # type: ignore[attr-defined]
                if base in sub:
                    return sub[base]
                return x  # a global
            y = copy.copy(x)
            for f in ("operand", "left", "right", "cond", "then", "els",
                      "base", "index"):
                if hasattr(y, f) and isinstance(getattr(y, f), Expr):
                    setattr(y, f, walk(getattr(y, f)))
            return y

        return walk(copy.copy(expr))

    def _lower_inlined_body(self, body: Block, renames: dict[str, str],
                            ret_sym: str | None, fn: FuncDef):
        for i, s in enumerate(body.stmts):
            if isinstance(s, Return):
                if s.value is not None and ret_sym is not None:
                    rhs = self.prepare(s.value, renames)
                    lhs = Ident("$ret", s.loc)
                    lhs.ty = fn.ret_ty
                    lhs.symbol = ret_sym  # type: ignore[attr-defined]
                    self.emit(Instr("assign", s.loc, lhs=lhs, rhs=rhs,
                                    source_text=f"return {print_expr(rhs)}"))
                return
            self.lower_stmt(s, renames)


def _expr_is_pure_of_calls(e: Expr) -> bool:
    if isinstance(e, (Call, Nondet)):
        return False
    for f in ("operand", "left", "right", "cond", "then", "els", "base", "index"):
        sub = getattr(e, f, None)
        if isinstance(sub, Expr) and not _expr_is_pure_of_calls(sub):
            return False
    return True


def lower(ast: ProgramAst) -> GotoProgram:
    """Lower a typed AST; loops stay as backward branches until unroll()."""
    return Lowerer(ast).lower()
