"""Type checking and annotation for MiniC.

Annotates every expression with a resolved TypeInfo, makes implicit
conversions explicit as cast nodes, and applies the usual arithmetic
conversions (promotion to the wider operand, signed to unsigned when mixing
at equal width).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .ast import (
    Assign, AssertStmt, AssumeStmt, Binary, Block, Call, Cast, Conditional,
    DeclStmt, DoWhile, EnumDef, Expr, ExprStmt, FloatLit, For, FuncDef,
    GlobalDecl, Ident, If, Index, InitList, IntLit, Member, Nondet, Param,
    ProgramAst, RecordDef, Return, Stmt, SymbolInfo, TypeSyntax, Unary,
    VarDecl, While,
)
from .errors import Diagnostic, DiagnosticsError, SourceLoc
from .typeinfo import BOOL, TypeInfo, Widths, array_of, pointer_to, union_widest_member

_BASE_TYPES = {
    "char": ("char", False), "signed char": ("char", False), "unsigned char": ("char", True),
    "short": ("short", False), "short int": ("short", False),
    "signed short": ("short", False), "signed short int": ("short", False),
    "unsigned short": ("short", True), "unsigned short int": ("short", True),
    "int": ("int", False), "signed": ("int", False), "signed int": ("int", False),
    "unsigned": ("int", True), "unsigned int": ("int", True),
    "long": ("long", False), "long int": ("long", False), "signed long": ("long", False),
    "signed long int": ("long", False), "long long": ("long", False),
    "long long int": ("long", False), "signed long long": ("long", False),
    "signed long long int": ("long", False),
    "unsigned long": ("long", True), "unsigned long int": ("long", True),
    "unsigned long long": ("long", True), "unsigned long long int": ("long", True),
}


@dataclass
class FuncSig:
    name: str
    ret: TypeInfo | None  # None = void
    params: list[tuple[str, TypeInfo]]
    defn: FuncDef = field(repr=False, default=None)


class TypeChecker:
    def __init__(self, widths: Widths | None = None):
        self.w = widths or Widths()
        self.records: dict[str, TypeInfo] = {}
        self.enums: dict[str, TypeInfo] = {}
        self.enum_consts: dict[str, tuple[int, TypeInfo]] = {}
        self.globals: dict[str, TypeInfo] = {}
        self.functions: dict[str, FuncSig] = {}
        self.symbols: dict[str, SymbolInfo] = {}
        self.diags: list[Diagnostic] = []
        self.nondet_types = self._nondet_table()
        self._scopes: list[dict[str, str]] = []  # name -> qualified symbol
        self._func: FuncSig | None = None
        self._local_counts: dict[str, int] = {}

    def _nondet_table(self) -> dict[str, TypeInfo]:
        w = self.w
        return {
            "nondet_bool": BOOL,
            "nondet_char": w.basic("char"), "nondet_uchar": w.basic("char", True),
            "nondet_short": w.basic("short"), "nondet_ushort": w.basic("short", True),
            "nondet_int": w.basic("int"), "nondet_uint": w.basic("int", True),
            "nondet_long": w.basic("long"), "nondet_ulong": w.basic("long", True),
            "nondet_float": w.float_type(), "nondet_double": w.double_type(),
        }

    # ------------------------------------------------------------------ utils
    def error(self, message: str, loc: SourceLoc, kind: str = "type"):
        raise DiagnosticsError([Diagnostic(kind, message, loc)])

    def resolve(self, ts: TypeSyntax, dims: list[int] | None = None,
                loc: SourceLoc | None = None) -> TypeInfo | None:
        loc = loc or ts.loc
        base: TypeInfo | None
        if ts.base == "void":
            base = None
        elif ts.base.startswith("struct ") or ts.base.startswith("union "):
            tag = ts.base.split(" ", 1)[1]
            if tag not in self.records:
                self.error(f"unknown record type {ts.base!r}", loc)
            base = self.records[tag]
        elif ts.base.startswith("enum "):
            tag = ts.base.split(" ", 1)[1]
            if tag not in self.enums:
                self.error(f"unknown enum type {ts.base!r}", loc)
            base = self.enums[tag]
        elif ts.base == "float":
            base = self.w.float_type()
        elif ts.base == "double":
            base = self.w.double_type()
        elif ts.base == "_Bool":
            base = BOOL
        elif ts.base in _BASE_TYPES:
            name, unsigned = _BASE_TYPES[ts.base]
            base = self.w.basic(name, unsigned)
        else:
            self.error(f"unknown type {ts.base!r}", loc)
        for _ in range(ts.ptr_depth):
            if base is None:
                self.error("void pointers are outside the supported subset", loc,
                           kind="unsupported")
            base = pointer_to(self._pointer_target(base))
        if dims:
            if base is None:
                self.error("array of void", loc)
            for d in reversed(dims):
                if d <= 0:
                    self.error("array length must be positive", loc)
                base = array_of(base, d)
        return base

    @staticmethod
    def _pointer_target(ty: TypeInfo) -> TypeInfo:
        # Record targets are stored as tag-only stubs so self-referential
        # structs stay representable; deref_type() restores the full type.
        if ty.kind in ("structure", "union"):
            return TypeInfo(ty.kind, tag=ty.tag)
        return ty

    def deref_type(self, ptr: TypeInfo, loc: SourceLoc) -> TypeInfo:
        assert ptr.kind == "pointer" and ptr.element is not None
        t = ptr.element
        if t.kind in ("structure", "union") and not t.fields:
            if t.tag not in self.records:
                self.error(f"incomplete record type {t.tag!r}", loc)
            return self.records[t.tag]
        return t

    def same_pointer(self, a: TypeInfo, b: TypeInfo) -> bool:
        if a.kind != "pointer" or b.kind != "pointer":
            return False
        ea, eb = a.element, b.element
        if ea.kind in ("structure", "union") and eb.kind in ("structure", "union"):
            return ea.kind == eb.kind and ea.tag == eb.tag
        return ea == eb

    # --------------------------------------------------------------- program
    def check(self, ast: ProgramAst) -> ProgramAst:
        # pass 1: collect types, globals and function signatures
        for d in ast.declarations:
            if isinstance(d, RecordDef):
                self._collect_record(d)
            elif isinstance(d, EnumDef):
                self._collect_enum(d)
            elif isinstance(d, GlobalDecl):
                self._collect_globals(d)
            elif isinstance(d, FuncDef):
                self._collect_function(d)
        # pass 2: check bodies and global initializers
        for d in ast.declarations:
            if isinstance(d, GlobalDecl):
                for vd in d.decls:
                    self._check_global_init(vd)
            elif isinstance(d, FuncDef):
                self._check_function(d)
        ast.symbols = self.symbols
        ast.typed = True
        return ast

    def _collect_record(self, d: RecordDef):
        if d.tag in self.records:
            self.error(f"record {d.tag!r} redefined", d.loc)
        fields: list[tuple[str, TypeInfo]] = []
        seen = set()
        for m in d.members:
            if m.name in seen:
                self.error(f"duplicate field {m.name!r} in {d.tag!r}", m.loc)
            seen.add(m.name)
            ty = self.resolve(m.type_syntax, m.array_dims, m.loc)
            if ty is None:
                self.error("void field", m.loc)
            fields.append((m.name, ty))
            m.ty = ty
        if d.is_union:
            for name, ft in fields:
                if not ft.is_scalar:
                    self.error("union members must be scalar types", d.loc,
                               kind="unsupported")
        kind = "union" if d.is_union else "structure"
        self.records[d.tag] = TypeInfo(kind, fields=tuple(fields), tag=d.tag)
        d.ty = self.records[d.tag]

    def _collect_enum(self, d: EnumDef):
        if d.tag in self.enums:
            self.error(f"enum {d.tag!r} redefined", d.loc)
        ety = self.w.enum_type(d.tag)
        self.enums[d.tag] = ety
        next_val = 0
        for name, expr in d.enumerators:
            if expr is not None:
                val = _const_int(expr)
                if val is None:
                    self.error("enumerator value must be constant", d.loc)
                next_val = val
            if name in self.enum_consts:
                self.error(f"enumerator {name!r} redefined", d.loc)
            self.enum_consts[name] = (next_val, ety)
            self.symbols[name] = SymbolInfo(name, ety, "enum-const", next_val)
            next_val += 1

    def _collect_globals(self, d: GlobalDecl):
        for vd in d.decls:
            ty = self.resolve(vd.type_syntax, vd.array_dims, vd.loc)
            if ty is None:
                self.error("void variable", vd.loc)
            if vd.name in self.globals or vd.name in self.functions:
                self.error(f"{vd.name!r} redefined", vd.loc)
            self.globals[vd.name] = ty
            vd.ty = ty
            vd.symbol = vd.name  # type: ignore[attr-defined]
            self.symbols[vd.name] = SymbolInfo(vd.name, ty, "global")

    def _collect_function(self, d: FuncDef):
        if d.name in self.functions or d.name in self.globals:
            self.error(f"{d.name!r} redefined", d.loc)
        ret = self.resolve(d.ret_syntax, None, d.loc)
        params = []
        for p in d.params:
            pt = self.resolve(p.type_syntax, None, p.loc)
            if pt is None:
                self.error("void parameter", p.loc)
            p.ty = pt
            params.append((p.name, pt))
        d.ret_ty = ret
        self.functions[d.name] = FuncSig(d.name, ret, params, d)

    def _check_global_init(self, vd: VarDecl):
        if vd.init is None:
            return
        vd.init = self._check_init(vd.init, vd.ty, vd.loc, constant=True)

    def _check_init(self, init, ty: TypeInfo, loc: SourceLoc, constant: bool):
        if isinstance(init, InitList):
            if ty.kind != "array":
                self.error("brace initializer only supported for arrays", init.loc,
                           kind="unsupported")
            if len(init.items) > ty.length:
                self.error("too many initializer elements", init.loc)
            init.items = [self._check_init(item, ty.element, loc, constant)
                          for item in init.items]
            return init
        expr = self.expr(init)
        if constant and not isinstance(expr, (IntLit, FloatLit, Cast)):
            self.error("global initializer must be a constant", loc)
        return self.coerce(expr, ty, loc)

    def _check_function(self, d: FuncDef):
        sig = self.functions[d.name]
        self._func = sig
        self._scopes = [{}]
        self._local_counts = {}
        for p in d.params:
            q = f"{d.name}::{p.name}"
            self._scopes[-1][p.name] = q
            self.symbols[q] = SymbolInfo(q, p.ty, "param")
        self._check_return_placement(d)
        d.body = self.stmt(d.body)
        self._func = None

    def _check_return_placement(self, d: FuncDef):
        # Early return would need return-guard tracking in the lowering;
        # the subset pins `return` to the end of the function body.
        def scan(s: Stmt, allowed: bool):
            if isinstance(s, Return):
                if not allowed:
                    self.error("return is only supported as the final statement",
                               s.loc, kind="unsupported")
            elif isinstance(s, Block):
                for i, sub in enumerate(s.stmts):
                    scan(sub, allowed and i == len(s.stmts) - 1)
            elif isinstance(s, If):
                scan(s.then, False)
                if s.els:
                    scan(s.els, False)
            elif isinstance(s, (While, DoWhile, For)):
                scan(s.body, False)
        scan(d.body, True)

    # ------------------------------------------------------------ statements
    def stmt(self, s: Stmt) -> Stmt:
        if isinstance(s, Block):
            self._scopes.append({})
            s.stmts = [self.stmt(x) for x in s.stmts]
            self._scopes.pop()
            return s
        if isinstance(s, DeclStmt):
            for vd in s.decls:
                self._declare_local(vd)
            return s
        if isinstance(s, Assign):
            lhs = self.expr(s.lhs, want_lvalue=True)
            rhs = self.expr(s.rhs)
            s.lhs = lhs
            s.rhs = self.coerce(rhs, lhs.ty, s.loc)
            return s
        if isinstance(s, ExprStmt):
            s.expr = self.expr(s.expr, allow_void=True)
            return s
        if isinstance(s, If):
            s.cond = self.to_bool(self.expr(s.cond), s.loc)
            s.then = self.stmt(_as_block(s.then))
            if s.els:
                s.els = self.stmt(_as_block(s.els))
            return s
        if isinstance(s, While):
            s.cond = self.to_bool(self.expr(s.cond), s.loc)
            s.body = self.stmt(_as_block(s.body))
            return s
        if isinstance(s, DoWhile):
            s.body = self.stmt(_as_block(s.body))
            s.cond = self.to_bool(self.expr(s.cond), s.loc)
            return s
        if isinstance(s, For):
            self._scopes.append({})
            if s.init:
                s.init = self.stmt(s.init)
            if s.cond is not None:
                s.cond = self.to_bool(self.expr(s.cond), s.loc)
            if s.step:
                s.step = self.stmt(s.step)
            s.body = self.stmt(_as_block(s.body))
            self._scopes.pop()
            return s
        if isinstance(s, Return):
            assert self._func is not None
            if s.value is None:
                if self._func.ret is not None:
                    self.error("missing return value", s.loc)
            else:
                if self._func.ret is None:
                    self.error("void function returns a value", s.loc)
                s.value = self.coerce(self.expr(s.value), self._func.ret, s.loc)
            return s
        if isinstance(s, (AssertStmt, AssumeStmt)):
            s.cond = self.to_bool(self.expr(s.cond), s.loc)
            return s
        raise AssertionError(f"unhandled stmt {s!r}")

    def _declare_local(self, vd: VarDecl):
        ty = self.resolve(vd.type_syntax, vd.array_dims, vd.loc)
        if ty is None:
            self.error("void variable", vd.loc)
        func = self._func.name
        if vd.name in self._scopes[-1]:
            self.error(f"{vd.name!r} redeclared in the same scope", vd.loc)
        n = self._local_counts.get(vd.name, 0) + 1
        self._local_counts[vd.name] = n
        q = f"{func}::{vd.name}" if n == 1 else f"{func}::{vd.name}${n}"
        self._scopes[-1][vd.name] = q
        self.symbols[q] = SymbolInfo(q, ty, "local")
        vd.ty = ty
        vd.symbol = q  # type: ignore[attr-defined]
        if vd.init is not None:
            vd.init = self._check_init(vd.init, ty, vd.loc, constant=False)

    # ----------------------------------------------------------- expressions
    def lookup(self, name: str, loc: SourceLoc) -> tuple[str, TypeInfo] | None:
        for scope in reversed(self._scopes):
            if name in scope:
                q = scope[name]
                return q, self.symbols[q].ty
        if name in self.globals:
            return name, self.globals[name]
        return None

    def expr(self, e: Expr, want_lvalue: bool = False, allow_void: bool = False) -> Expr:
        out = self._expr(e, want_lvalue, allow_void)
        assert out.ty is not None or (allow_void and isinstance(out, Call))
        return out

    def _expr(self, e: Expr, want_lvalue: bool, allow_void: bool = False) -> Expr:
        if isinstance(e, IntLit):
            e.ty = self._int_lit_type(e)
            return e
        if isinstance(e, FloatLit):
            e.ty = self.w.float_type() if e.suffix == "f" else self.w.double_type()
            return e
        if isinstance(e, Ident):
            if e.name in self.enum_consts:
                val, _ety = self.enum_consts[e.name]
                lit = IntLit(val, e.loc)
                lit.ty = self.w.int_type()  # enum constants have type int
                return lit
            hit = self.lookup(e.name, e.loc)
            if hit is None:
                self.error(f"undeclared identifier {e.name!r}", e.loc)
            q, ty = hit
            e.symbol = q  # type: ignore[attr-defined]
            e.ty = ty
            return e
        if isinstance(e, Call):
            return self._call(e, allow_void)
        if isinstance(e, Cast):
            target = self.resolve(e.target, None, e.loc)
            if target is None:
                self.error("cast to void", e.loc)
            inner = self.expr(e.operand)
            return self._explicit_cast(inner, target, e)
        if isinstance(e, Unary):
            return self._unary(e, want_lvalue)
        if isinstance(e, Binary):
            return self._binary(e)
        if isinstance(e, Conditional):
            return self._conditional(e)
        if isinstance(e, Index):
            base = self.expr(e.base, want_lvalue=want_lvalue)
            idx = self.coerce(self.expr(e.index), self.w.int_type(), e.loc)
            if base.ty.kind == "array":
                e.ty = base.ty.element
            elif base.ty.kind == "pointer":
                e.ty = self.deref_type(base.ty, e.loc)
            else:
                self.error(f"subscripted value is not an array or pointer "
                           f"({base.ty})", e.loc)
            e.base, e.index = base, idx
            return e
        if isinstance(e, Member):
            base = self.expr(e.base, want_lvalue=want_lvalue)
            if e.arrow:
                if base.ty.kind != "pointer":
                    self.error("'->' applied to a non-pointer", e.loc)
                rec = self.deref_type(base.ty, e.loc)
            else:
                rec = base.ty
            if rec.kind not in ("structure", "union"):
                self.error("member access on a non-record type", e.loc)
            try:
                e.ty = rec.field_type(e.name)
            except KeyError:
                self.error(f"no field {e.name!r} in {rec.kind} {rec.tag!r}", e.loc)
            e.base = base
            return e
        raise AssertionError(f"unhandled expr {e!r}")

    def _int_lit_type(self, e: IntLit) -> TypeInfo:
        w = self.w
        unsigned = "u" in e.suffix
        long_ = "l" in e.suffix or e.value >= (1 << (w.int_ - (0 if unsigned else 1)))
        name = "long" if long_ else "int"
        return w.basic(name, unsigned)

    def _call(self, e: Call, allow_void: bool) -> Expr:
        if e.name in self.nondet_types:
            if e.args:
                self.error(f"{e.name} takes no arguments", e.loc)
            nd = Nondet(e.name.removeprefix("nondet_"), e.loc)
            nd.ty = self.nondet_types[e.name]
            return nd
        if e.name in ("assert", "assume"):
            self.error(f"{e.name} is only supported as a statement", e.loc,
                       kind="unsupported")
        sig = self.functions.get(e.name)
        if sig is None:
            self.error(f"undeclared identifier {e.name!r}", e.loc)
        if len(e.args) != len(sig.params):
            self.error(f"{e.name} expects {len(sig.params)} argument(s), "
                       f"got {len(e.args)}", e.loc)
        e.args = [self.coerce(self.expr(a), pt, e.loc)
                  for a, (_, pt) in zip(e.args, sig.params)]
        if sig.ret is None and not allow_void:
            self.error(f"void value of {e.name}() used in an expression", e.loc)
        e.ty = sig.ret
        return e

    def _unary(self, e: Unary, want_lvalue: bool) -> Expr:
        if e.op in ("++pre", "--pre"):
            self.error("pre-increment inside an expression is outside the supported "
                       "subset (use it as a statement)", e.loc, kind="unsupported")
        if e.op == "&":
            operand = self.expr(e.operand, want_lvalue=True)
            if isinstance(operand, Unary) and operand.op == "*":
                return operand.operand  # &*p == p
            if not self._is_addressable(operand):
                self.error("address-of requires a variable, array element or "
                           "top-level struct field", e.loc)
            e.operand = operand
            e.ty = pointer_to(self._pointer_target(operand.ty))
            return e
        if e.op == "*":
            operand = self.expr(e.operand)
            if operand.ty.kind == "array":
                operand = self._decay(operand)
            if operand.ty.kind != "pointer":
                self.error("dereference of a non-pointer", e.loc)
            e.operand = operand
            e.ty = self.deref_type(operand.ty, e.loc)
            return e
        operand = self.expr(e.operand)
        if e.op == "!":
            e.operand = self.to_bool(operand, e.loc)
            e.ty = BOOL
            return e
        if e.op == "~":
            operand = self._require_integer(operand, e.loc, "~")
            operand = self.promote(operand)
            e.operand, e.ty = operand, operand.ty
            return e
        if e.op == "-":
            if operand.ty.kind == "fixedbv":
                e.operand, e.ty = operand, operand.ty
                return e
            operand = self._require_integer(operand, e.loc, "unary -")
            operand = self.promote(operand)
            e.operand, e.ty = operand, operand.ty
            return e
        raise AssertionError(e.op)

    def _is_addressable(self, e: Expr) -> bool:
        if isinstance(e, Ident):
            return True
        if isinstance(e, Index):
            return isinstance(e.base, Ident) and e.base.ty.kind == "array"
        if isinstance(e, Member):
            return not e.arrow and isinstance(e.base, Ident)
        return False

    def _binary(self, e: Binary) -> Expr:
        op = e.op
        left = self.expr(e.left)
        right = self.expr(e.right)
        if op in ("&&", "||"):
            e.left = self.to_bool(left, e.loc)
            e.right = self.to_bool(right, e.loc)
            e.ty = BOOL
            return e
        if left.ty.kind == "array":
            left = self._decay(left)
        if right.ty.kind == "array":
            right = self._decay(right)
        if left.ty.kind == "pointer" or right.ty.kind == "pointer":
            return self._pointer_binary(e, left, right)
        if op in ("<<", ">>"):
            left = self.promote(self._require_integer(left, e.loc, op))
            right = self.promote(self._require_integer(right, e.loc, op))
            e.left, e.right, e.ty = left, right, left.ty
            return e
        if op in ("&", "|", "^", "%"):
            left = self._require_integer(left, e.loc, op)
            right = self._require_integer(right, e.loc, op)
        common = self.usual_arith(left.ty, right.ty, e.loc)
        e.left = self.coerce(left, common, e.loc)
        e.right = self.coerce(right, common, e.loc)
        if op in ("==", "!=", "<", "<=", ">", ">="):
            e.ty = BOOL
        else:
            e.ty = common
        return e

    def _pointer_binary(self, e: Binary, left: Expr, right: Expr) -> Expr:
        op = e.op
        lt, rt = left.ty, right.ty
        if op == "+" and lt.is_integer and rt.kind == "pointer":
            left, right = right, left
            lt, rt = rt, lt
        if op in ("+", "-") and lt.kind == "pointer" and rt.is_integer:
            e.left = left
            e.right = self.coerce(right, self.w.int_type(), e.loc)
            e.ty = lt
            return e
        if op == "-" and self.same_pointer(lt, rt):
            e.left, e.right = left, right
            e.ty = self.w.basic("long")
            return e
        if op in ("==", "!=", "<", "<=", ">", ">="):
            left = self._null_adjust(left, rt)
            right = self._null_adjust(right, lt)
            if not self.same_pointer(left.ty, right.ty):
                self.error("comparison of incompatible pointer types", e.loc)
            e.left, e.right, e.ty = left, right, BOOL
            return e
        self.error(f"invalid pointer operation {op!r}", e.loc)

    def _null_adjust(self, e: Expr, other: TypeInfo) -> Expr:
        if e.ty.is_integer and isinstance(e, IntLit) and e.value == 0 \
                and other.kind == "pointer":
            c = Cast(None, e, e.loc, implicit=True)
            c.ty = other
            return c
        return e

    def _conditional(self, e: Conditional) -> Expr:
        e.cond = self.to_bool(self.expr(e.cond), e.loc)
        then = self.expr(e.then)
        els = self.expr(e.els)
        if then.ty.kind == "array":
            then = self._decay(then)
        if els.ty.kind == "array":
            els = self._decay(els)
        if then.ty.kind == "pointer" or els.ty.kind == "pointer":
            then = self._null_adjust(then, els.ty)
            els = self._null_adjust(els, then.ty)
            if not self.same_pointer(then.ty, els.ty):
                self.error("conditional arms have incompatible pointer types", e.loc)
            e.then, e.els, e.ty = then, els, then.ty
            return e
        if then.ty.kind in ("structure", "union"):
            if then.ty != els.ty:
                self.error("conditional arms have different record types", e.loc)
            e.then, e.els, e.ty = then, els, then.ty
            return e
        common = self.usual_arith(then.ty, els.ty, e.loc)
        e.then = self.coerce(then, common, e.loc)
        e.els = self.coerce(els, common, e.loc)
        e.ty = common
        return e

    # ---------------------------------------------------------- conversions
    def promote(self, e: Expr) -> Expr:
        t = e.ty
        if t.kind in ("bool", "enumeration") or \
                (t.kind in ("signedbv", "unsignedbv") and t.width < self.w.int_):
            return self.coerce(e, self.w.int_type(), e.loc if hasattr(e, "loc") else None)
        return e

    def promoted_type(self, t: TypeInfo) -> TypeInfo:
        if t.kind in ("bool", "enumeration") or \
                (t.kind in ("signedbv", "unsignedbv") and t.width < self.w.int_):
            return self.w.int_type()
        return t

    def usual_arith(self, a: TypeInfo, b: TypeInfo, loc: SourceLoc) -> TypeInfo:
        if a.kind == "fixedbv" or b.kind == "fixedbv":
            if a.kind != "fixedbv":
                return b
            if b.kind != "fixedbv":
                return a
            return a if (a.width, a.fraction_bits) >= (b.width, b.fraction_bits) else b
        if not (a.is_integer and b.is_integer):
            self.error(f"invalid operand types {a} and {b}", loc)
        a, b = self.promoted_type(a), self.promoted_type(b)
        if a == b:
            return a
        sa, sb = a.kind == "signedbv", b.kind == "signedbv"
        if sa == sb:
            return a if a.width >= b.width else b
        signed, unsigned = (a, b) if sa else (b, a)
        if unsigned.width >= signed.width:
            return unsigned
        return signed

    def to_bool(self, e: Expr, loc: SourceLoc) -> Expr:
        if e.ty.kind == "bool":
            return e
        if e.ty.kind == "array":
            e = self._decay(e)
        if not (e.ty.is_scalar or e.ty.kind == "pointer"):
            self.error(f"cannot use {e.ty} as a condition", loc)
        c = Cast(None, e, loc, implicit=True)
        c.ty = BOOL
        return c

    def coerce(self, e: Expr, target: TypeInfo, loc: SourceLoc | None) -> Expr:
        if e.ty == target:
            return e
        if e.ty.kind == "array" and target.kind == "pointer":
            e = self._decay(e)
            if self.same_pointer(e.ty, target):
                return e
        if target.kind == "pointer":
            e = self._null_adjust(e, target)
            if self.same_pointer(e.ty, target) or e.ty == target:
                return e
            self.error(f"cannot convert {e.ty} to {target}",
                       loc or getattr(e, "loc", None))
        if e.ty.kind == "pointer":
            if target.kind == "bool":
                c = Cast(None, e, loc or e.loc, implicit=True)
                c.ty = BOOL
                return c
            self.error(f"cannot convert {e.ty} to {target}", loc or e.loc)
        if e.ty.kind in ("structure", "union") or target.kind in ("structure", "union"):
            if e.ty.kind == target.kind and e.ty.tag == target.tag:
                return e
            self.error(f"cannot convert {e.ty} to {target}", loc or e.loc)
        if e.ty.kind == "array" or target.kind == "array":
            self.error(f"cannot convert {e.ty} to {target}", loc or e.loc)
        c = Cast(None, e, loc or getattr(e, "loc", None) or e.loc, implicit=True)
        c.ty = target
        return c

    def _explicit_cast(self, inner: Expr, target: TypeInfo, node: Cast) -> Expr:
        if inner.ty.kind == "array" and target.kind == "pointer":
            inner = self._decay(inner)
        if inner.ty == target:
            return inner  # identity casts do not survive typechecking
        if target.kind == "pointer" or inner.ty.kind == "pointer":
            if self.same_pointer(inner.ty, target):
                return inner
            if target.kind == "pointer" and isinstance(inner, IntLit) and inner.value == 0:
                node.operand, node.ty = inner, target
                return node
            if target.kind == "bool" and inner.ty.kind == "pointer":
                node.operand, node.ty = inner, target
                return node
            self.error("pointer casts between distinct target types are outside "
                       "the supported subset", node.loc, kind="unsupported")
        if not (target.is_scalar and inner.ty.is_scalar):
            self.error(f"cannot cast {inner.ty} to {target}", node.loc)
        node.operand, node.ty = inner, target
        return node

    def _decay(self, e: Expr) -> Expr:
        """Array-to-pointer decay: a becomes &a[0]."""
        assert e.ty.kind == "array"
        c = Cast(None, e, getattr(e, "loc", None), implicit=True, decay=True)
        c.ty = pointer_to(self._pointer_target(e.ty.element))
        return c

    def _require_integer(self, e: Expr, loc: SourceLoc, op: str) -> Expr:
        if not e.ty.is_integer:
            self.error(f"operator {op!r} requires integer operands, got {e.ty}", loc)
        return e


def _as_block(s: Stmt) -> Block:
    return s if isinstance(s, Block) else Block([s], getattr(s, "loc", None))


def _const_int(e: Expr) -> int | None:
    from .parser import _const_eval
    return _const_eval(e)


def typecheck(ast: ProgramAst, widths: Widths | None = None) -> ProgramAst:
    """Annotate the AST in place; raises DiagnosticsError on the first problem."""
    return TypeChecker(widths).check(ast)
