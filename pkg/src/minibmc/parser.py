"""Recursive-descent parser producing an untyped MiniC AST."""
from __future__ import annotations

from .ast import (
    Assign, AssertStmt, AssumeStmt, Binary, Block, Call, Cast, Conditional,
    DeclStmt, DoWhile, EnumDef, Expr, ExprStmt, FloatLit, For, FuncDef,
    GlobalDecl, Ident, If, Index, InitList, IntLit, Member, Param, ProgramAst,
    RecordDef, Return, Stmt, TypeSyntax, Unary, VarDecl, While,
)
from .errors import Diagnostic, DiagnosticsError, SourceUnit
from .lexer import Token, tokenize

_UNSUPPORTED_STMT_KW = {
    "break", "continue", "switch", "case", "default", "goto",
    "static", "const", "volatile", "typedef", "extern", "register", "inline",
}

_TYPE_START = {"int", "char", "short", "long", "unsigned", "signed", "void",
               "float", "double", "_Bool", "struct", "union", "enum"}

_ASSIGN_OPS = {"=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>="}

# binary operator precedence, higher binds tighter
_BINOPS: dict[str, int] = {
    "||": 1, "&&": 2, "|": 3, "^": 4, "&": 5,
    "==": 6, "!=": 6,
    "<": 7, "<=": 7, ">": 7, ">=": 7,
    "<<": 8, ">>": 8,
    "+": 9, "-": 9,
    "*": 10, "/": 10, "%": 10,
}


class _Parser:
    def __init__(self, src: SourceUnit):
        self.src = src
        self.toks = tokenize(src)
        self.pos = 0

    # -- token helpers ------------------------------------------------------
    def peek(self, ahead: int = 0) -> Token:
        return self.toks[min(self.pos + ahead, len(self.toks) - 1)]

    def next(self) -> Token:
        t = self.toks[self.pos]
        if t.kind != "eof":
            self.pos += 1
        return t

    def at(self, *kinds: str) -> bool:
        return self.peek().kind in kinds

    def accept(self, kind: str) -> Token | None:
        if self.at(kind):
            return self.next()
        return None

    def expect(self, kind: str) -> Token:
        t = self.peek()
        if t.kind != kind:
            self.fail(f"expected {kind!r}, found {t.text or '<eof>'!r}", t)
        return self.next()

    def loc(self, tok: Token):
        return self.src.loc(tok.offset)

    def fail(self, message: str, tok: Token | None = None, kind: str = "syntax"):
        tok = tok or self.peek()
        raise DiagnosticsError([Diagnostic(kind, message, self.loc(tok))])

    def unsupported(self, message: str, tok: Token | None = None):
        self.fail(message, tok, kind="unsupported")

    # -- top level ----------------------------------------------------------
    def parse_program(self) -> ProgramAst:
        decls: list = []
        while not self.at("eof"):
            decls.extend(self.parse_top_decl())
        return ProgramAst(decls)

    def parse_top_decl(self) -> list:
        t = self.peek()
        if t.kind in _UNSUPPORTED_STMT_KW:
            self.unsupported(f"{t.text!r} is outside the supported subset", t)
        if t.kind in ("struct", "union") and self.peek(1).kind == "id" and self.peek(2).kind == "{":
            return self.parse_record_def()
        if t.kind == "enum" and self.peek(1).kind == "id" and self.peek(2).kind == "{":
            return [self.parse_enum_def()]
        if t.kind not in _TYPE_START:
            self.fail(f"expected a declaration, found {t.text!r}", t)
        ts = self.parse_type_specifier()
        ptr = 0
        while self.accept("*"):
            ptr += 1
        name_tok = self.expect("id")
        if self.at("("):
            return [self.parse_func_def(ts, ptr, name_tok)]
        return [self.parse_global_decl(ts, ptr, name_tok)]

    def parse_record_def(self) -> list:
        kw = self.next()  # struct / union
        tag = self.expect("id")
        self.expect("{")
        members: list[VarDecl] = []
        while not self.accept("}"):
            ts = self.parse_type_specifier()
            while True:
                ptr = 0
                while self.accept("*"):
                    ptr += 1
                nm = self.expect("id")
                dims = self.parse_array_dims()
                members.append(VarDecl(nm.text, TypeSyntax(ts.base, ptr, ts.loc), dims,
                                       None, self.loc(nm)))
                if not self.accept(","):
                    break
            self.expect(";")
        rec = RecordDef(tag.text, kw.kind == "union", members, self.loc(kw))
        out: list = [rec]
        if not self.at(";"):
            # struct x { ... } y;  declares variables of the new type
            rts = TypeSyntax(f"{kw.kind} {tag.text}", 0, self.loc(kw))
            decls = []
            while True:
                ptr = 0
                while self.accept("*"):
                    ptr += 1
                nm = self.expect("id")
                decls.append(self.finish_declarator(rts, ptr, nm))
                if not self.accept(","):
                    break
            out.append(GlobalDecl(decls, decls[0].loc))
        self.expect(";")
        return out

    def parse_enum_def(self) -> EnumDef:
        kw = self.next()
        tag = self.expect("id")
        self.expect("{")
        enumerators: list[tuple[str, Expr | None]] = []
        while not self.accept("}"):
            nm = self.expect("id")
            val = None
            if self.accept("="):
                val = self.parse_conditional()
            enumerators.append((nm.text, val))
            if not self.accept(","):
                self.expect("}")
                break
        self.expect(";")
        return EnumDef(tag.text, enumerators, self.loc(kw))

    def parse_func_def(self, ret: TypeSyntax, ptr: int, name_tok: Token) -> FuncDef:
        self.expect("(")
        params: list[Param] = []
        if not self.at(")"):
            if self.at("void") and self.peek(1).kind == ")":
                self.next()
            else:
                while True:
                    if self.at("..."):
                        self.unsupported("varargs are outside the supported subset")
                    pts = self.parse_type_specifier()
                    pp = 0
                    while self.accept("*"):
                        pp += 1
                    pn = self.expect("id")
                    if self.at("["):
                        self.unsupported("array parameters are outside the supported subset", pn)
                    params.append(Param(pn.text, TypeSyntax(pts.base, pp, pts.loc), self.loc(pn)))
                    if not self.accept(","):
                        break
        self.expect(")")
        body = self.parse_block()
        return FuncDef(name_tok.text, TypeSyntax(ret.base, ptr, ret.loc), params, body,
                       self.loc(name_tok))

    def parse_global_decl(self, ts: TypeSyntax, ptr: int, first_name: Token) -> GlobalDecl:
        decls = [self.finish_declarator(ts, ptr, first_name)]
        while self.accept(","):
            p = 0
            while self.accept("*"):
                p += 1
            nm = self.expect("id")
            decls.append(self.finish_declarator(ts, p, nm))
        self.expect(";")
        return GlobalDecl(decls, decls[0].loc)

    def finish_declarator(self, ts: TypeSyntax, ptr: int, name_tok: Token) -> VarDecl:
        dims = self.parse_array_dims()
        init = None
        if self.accept("="):
            init = self.parse_initializer()
        return VarDecl(name_tok.text, TypeSyntax(ts.base, ptr, ts.loc), dims, init,
                       self.loc(name_tok))

    def parse_array_dims(self) -> list[int]:
        dims: list[int] = []
        while self.accept("["):
            e = self.parse_conditional()
            self.expect("]")
            dims.append(self.const_int(e))
        return dims

    def parse_initializer(self):
        if self.at("{"):
            tok = self.next()
            items: list = []
            while not self.accept("}"):
                items.append(self.parse_initializer())
                if not self.accept(","):
                    self.expect("}")
                    break
            return InitList(items, self.loc(tok))
        return self.parse_conditional()

    def const_int(self, e: Expr) -> int:
        v = _const_eval(e)
        if v is None:
            self.fail("array length must be a constant expression")
        return v

    # -- types --------------------------------------------------------------
    def parse_type_specifier(self) -> TypeSyntax:
        t = self.peek()
        loc = self.loc(t)
        if t.kind in ("struct", "union", "enum"):
            kw = self.next()
            tag = self.expect("id")
            if self.at("{"):
                self.unsupported("record/enum definitions must appear at file scope", tag)
            return TypeSyntax(f"{kw.kind} {tag.text}", 0, loc)
        words: list[str] = []
        while self.peek().kind in ("unsigned", "signed", "char", "short", "int", "long",
                                   "float", "double", "_Bool", "void"):
            words.append(self.next().kind)
        if not words:
            self.fail(f"expected a type, found {t.text!r}", t)
        return TypeSyntax(" ".join(words), 0, loc)

    # -- statements -----------------------------------------------------------
    def parse_block(self) -> Block:
        lb = self.expect("{")
        stmts: list[Stmt] = []
        while not self.accept("}"):
            stmts.append(self.parse_stmt())
        return Block(stmts, self.loc(lb))

    def parse_stmt(self) -> Stmt:
        t = self.peek()
        if t.kind in _UNSUPPORTED_STMT_KW:
            self.unsupported(f"{t.text!r} is outside the supported subset", t)
        if t.kind == "sizeof":
            self.unsupported("sizeof is outside the supported subset", t)
        if t.kind == "{":
            return self.parse_block()
        if t.kind == ";":
            self.next()
            return Block([], self.loc(t))
        if t.kind == "if":
            self.next()
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            then = self.parse_stmt()
            els = None
            if self.accept("else"):
                els = self.parse_stmt()
            return If(cond, then, els, self.loc(t))
        if t.kind == "while":
            self.next()
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            return While(cond, self.parse_stmt(), self.loc(t))
        if t.kind == "do":
            self.next()
            body = self.parse_stmt()
            self.expect("while")
            self.expect("(")
            cond = self.parse_expr()
            self.expect(")")
            self.expect(";")
            return DoWhile(body, cond, self.loc(t))
        if t.kind == "for":
            return self.parse_for(t)
        if t.kind == "return":
            self.next()
            value = None
            if not self.at(";"):
                value = self.parse_expr()
            self.expect(";")
            return Return(value, self.loc(t))
        if t.kind in _TYPE_START:
            ds = self.parse_decl_stmt()
            self.expect(";")
            return ds
        if t.kind == "id" and t.text in ("assert", "assume") and self.peek(1).kind == "(":
            self.next()
            open_tok = self.expect("(")
            start = self.pos
            cond = self.parse_expr()
            text = self.src.text[self.toks[start].offset:self.peek().offset].strip()
            self.expect(")")
            self.expect(";")
            cls = AssertStmt if t.text == "assert" else AssumeStmt
            return cls(cond, text, self.loc(t))
        return self.parse_expr_stmt()

    def parse_for(self, t: Token) -> For:
        self.next()
        self.expect("(")
        init: Stmt | None = None
        if not self.at(";"):
            if self.peek().kind in _TYPE_START:
                init = self.parse_decl_stmt()
            else:
                init = self.parse_simple_expr_stmt()
        self.expect(";")
        cond = None
        if not self.at(";"):
            cond = self.parse_expr()
        self.expect(";")
        step: Stmt | None = None
        if not self.at(")"):
            step = self.parse_simple_expr_stmt()
        self.expect(")")
        body = self.parse_stmt()
        return For(init, cond, step, body, self.loc(t))

    def parse_decl_stmt(self) -> DeclStmt:
        ts = self.parse_type_specifier()
        decls: list[VarDecl] = []
        while True:
            ptr = 0
            while self.accept("*"):
                ptr += 1
            nm = self.expect("id")
            decls.append(self.finish_declarator(ts, ptr, nm))
            if not self.accept(","):
                break
        return DeclStmt(decls, decls[0].loc)

    def parse_expr_stmt(self) -> Stmt:
        s = self.parse_simple_expr_stmt()
        self.expect(";")
        return s

    def parse_simple_expr_stmt(self) -> Stmt:
        """assignment / compound assignment / ++ / -- / call, without the ';'."""
        start = self.peek()
        lhs = self.parse_unary()
        t = self.peek()
        if t.kind in _ASSIGN_OPS:
            self.next()
            rhs = self.parse_expr()
            if t.kind != "=":
                rhs = Binary(t.kind[:-1], lhs, rhs, self.loc(t))
            return Assign(lhs, rhs, self.loc(start))
        if t.kind in ("++", "--"):
            self.next()
            one = IntLit(1, self.loc(t))
            return Assign(lhs, Binary(t.kind[0], lhs, one, self.loc(t)), self.loc(start))
        if isinstance(lhs, Call):
            return ExprStmt(lhs, self.loc(start))
        if isinstance(lhs, Unary) and lhs.op in ("++pre", "--pre"):
            one = IntLit(1, lhs.loc)
            return Assign(lhs.operand, Binary(lhs.op[0], lhs.operand, one, lhs.loc),
                          self.loc(start))
        self.fail("expected a statement", start)

    # -- expressions ----------------------------------------------------------
    def parse_expr(self) -> Expr:
        e = self.parse_conditional()
        if self.peek().kind in _ASSIGN_OPS:
            self.unsupported("assignment inside an expression is outside the supported subset")
        if self.at(","):
            self.unsupported("the comma operator is outside the supported subset")
        return e

    def parse_conditional(self) -> Expr:
        cond = self.parse_binary(1)
        if self.accept("?"):
            then = self.parse_conditional()
            colon = self.expect(":")
            els = self.parse_conditional()
            return Conditional(cond, then, els, self.loc(colon))
        return cond

    def parse_binary(self, min_prec: int) -> Expr:
        left = self.parse_unary()
        while True:
            t = self.peek()
            prec = _BINOPS.get(t.kind, 0)
            if prec < min_prec or prec == 0:
                return left
            self.next()
            right = self.parse_binary(prec + 1)
            left = Binary(t.kind, left, right, self.loc(t))

    def parse_unary(self) -> Expr:
        t = self.peek()
        if t.kind in ("-", "~", "!", "&", "*"):
            self.next()
            return Unary(t.kind, self.parse_unary(), self.loc(t))
        if t.kind == "+":
            self.next()
            return self.parse_unary()
        if t.kind in ("++", "--"):
            self.next()
            return Unary(t.kind + "pre", self.parse_unary(), self.loc(t))
        if t.kind == "sizeof":
            self.unsupported("sizeof is outside the supported subset", t)
        if t.kind == "(" and self.peek(1).kind in _TYPE_START:
            self.next()
            ts = self.parse_type_specifier()
            ptr = 0
            while self.accept("*"):
                ptr += 1
            self.expect(")")
            return Cast(TypeSyntax(ts.base, ptr, ts.loc), self.parse_unary(), self.loc(t))
        return self.parse_postfix()

    def parse_postfix(self) -> Expr:
        e = self.parse_primary()
        while True:
            t = self.peek()
            if t.kind == "[":
                self.next()
                idx = self.parse_expr()
                self.expect("]")
                e = Index(e, idx, self.loc(t))
            elif t.kind == ".":
                self.next()
                nm = self.expect("id")
                e = Member(e, nm.text, False, self.loc(t))
            elif t.kind == "->":
                self.next()
                nm = self.expect("id")
                e = Member(e, nm.text, True, self.loc(t))
            else:
                # ++/-- are consumed by the statement level; anywhere else
                # they surface as a plain syntax error
                return e

    def parse_primary(self) -> Expr:
        t = self.next()
        if t.kind == "num":
            return IntLit(t.value, self.loc(t), t.suffix)
        if t.kind == "fnum":
            return FloatLit(t.value, self.loc(t), t.suffix)
        if t.kind == "id":
            if self.at("("):
                self.next()
                args: list[Expr] = []
                if not self.at(")"):
                    while True:
                        args.append(self.parse_conditional())
                        if not self.accept(","):
                            break
                self.expect(")")
                return Call(t.text, args, self.loc(t))
            return Ident(t.text, self.loc(t))
        if t.kind == "(":
            e = self.parse_expr()
            self.expect(")")
            return e
        self.fail(f"expected an expression, found {t.text or '<eof>'!r}", t)


def _const_eval(e: Expr) -> int | None:
    """Fold integer constant expressions (array lengths, enum values)."""
    if isinstance(e, IntLit):
        return e.value
    if isinstance(e, Unary):
        v = _const_eval(e.operand)
        if v is None:
            return None
        return {"-": -v, "~": ~v, "!": int(v == 0)}.get(e.op)
    if isinstance(e, Binary):
        a, b = _const_eval(e.left), _const_eval(e.right)
        if a is None or b is None:
            return None
        try:
            return {
                "+": a + b, "-": a - b, "*": a * b,
                "/": int(a / b) if b else None, "%": a - b * int(a / b) if b else None,
                "<<": a << b, ">>": a >> b, "&": a & b, "|": a | b, "^": a ^ b,
                "==": int(a == b), "!=": int(a != b), "<": int(a < b), "<=": int(a <= b),
                ">": int(a > b), ">=": int(a >= b), "&&": int(bool(a and b)),
                "||": int(bool(a or b)),
            }[e.op]
        except (ZeroDivisionError, KeyError):
            return None
    return None


def parse(src: SourceUnit) -> ProgramAst:
    """Parse a source unit; raises DiagnosticsError on the first bad token."""
    return _Parser(src).parse_program()
