"""Abstract syntax for MiniC.

Expression nodes carry a `ty` slot that the typechecker fills in with a
resolved TypeInfo; source locations never participate in equality so that
structural comparison of trees works across reprints.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .errors import NOWHERE, SourceLoc
from .typeinfo import TypeInfo


@dataclass
class Node:
    pass


# --------------------------------------------------------------------------
# Expressions
# --------------------------------------------------------------------------

@dataclass
class Expr(Node):
    pass


@dataclass
class IntLit(Expr):
    value: int
    loc: SourceLoc = field(default=NOWHERE, compare=False)
    suffix: str = ""
    ty: TypeInfo | None = field(default=None, compare=False)


@dataclass
class FloatLit(Expr):
    value: Fraction
    loc: SourceLoc = field(default=NOWHERE, compare=False)
    suffix: str = ""
    ty: TypeInfo | None = field(default=None, compare=False)


@dataclass
class Ident(Expr):
    name: str
    loc: SourceLoc = field(default=NOWHERE, compare=False)
    ty: TypeInfo | None = field(default=None, compare=False)


@dataclass
class Unary(Expr):
    op: str  # - ~ ! & * ++pre --pre post++ post--
    operand: Expr
    loc: SourceLoc = field(default=NOWHERE, compare=False)
    ty: TypeInfo | None = field(default=None, compare=False)


@dataclass
class Binary(Expr):
    op: str  # + - * / % << >> & | ^ < <= > >= == != && ||
    left: Expr
    right: Expr
    loc: SourceLoc = field(default=NOWHERE, compare=False)
    ty: TypeInfo | None = field(default=None, compare=False)


@dataclass
class Conditional(Expr):
    cond: Expr
    then: Expr
    els: Expr
    loc: SourceLoc = field(default=NOWHERE, compare=False)
    ty: TypeInfo | None = field(default=None, compare=False)


@dataclass
class Call(Expr):
    name: str
    args: list[Expr]
    loc: SourceLoc = field(default=NOWHERE, compare=False)
    ty: TypeInfo | None = field(default=None, compare=False)


@dataclass
class Index(Expr):
    base: Expr
    index: Expr
    loc: SourceLoc = field(default=NOWHERE, compare=False)
    ty: TypeInfo | None = field(default=None, compare=False)


@dataclass
class Member(Expr):
    base: Expr
    name: str
    arrow: bool
    loc: SourceLoc = field(default=NOWHERE, compare=False)
    ty: TypeInfo | None = field(default=None, compare=False)


@dataclass
class TypeSyntax(Node):
    """Unresolved type spelling from a cast or declaration."""

    base: str  # "int", "unsigned char", "struct x", "float", ...
    ptr_depth: int = 0
    loc: SourceLoc = field(default=NOWHERE, compare=False)


@dataclass
class Cast(Expr):
    target: TypeSyntax | None  # None for implicit casts built by the typechecker
    operand: Expr
    loc: SourceLoc = field(default=NOWHERE, compare=False)
    ty: TypeInfo | None = field(default=None, compare=False)
    implicit: bool = False
    decay: bool = False  # array-to-pointer decay (p = a becomes p = &a[0])


@dataclass
class Nondet(Expr):
    """A free input introduced by a nondet_<type>() intrinsic."""

    type_name: str
    loc: SourceLoc = field(default=NOWHERE, compare=False)
    ty: TypeInfo | None = field(default=None, compare=False)


# --------------------------------------------------------------------------
# Statements
# --------------------------------------------------------------------------

@dataclass
class Stmt(Node):
    pass


@dataclass
class VarDecl(Node):
    name: str
    type_syntax: TypeSyntax
    array_dims: list[int]
    init: "Expr | InitList | None"
    loc: SourceLoc = field(default=NOWHERE, compare=False)
    ty: TypeInfo | None = field(default=None, compare=False)


@dataclass
class InitList(Node):
    items: list["Expr | InitList"]
    loc: SourceLoc = field(default=NOWHERE, compare=False)


@dataclass
class DeclStmt(Stmt):
    decls: list[VarDecl]
    loc: SourceLoc = field(default=NOWHERE, compare=False)


@dataclass
class ExprStmt(Stmt):
    expr: Expr
    loc: SourceLoc = field(default=NOWHERE, compare=False)


@dataclass
class Assign(Stmt):
    lhs: Expr
    rhs: Expr
    loc: SourceLoc = field(default=NOWHERE, compare=False)


@dataclass
class If(Stmt):
    cond: Expr
    then: Stmt
    els: Stmt | None
    loc: SourceLoc = field(default=NOWHERE, compare=False)


@dataclass
class While(Stmt):
    cond: Expr
    body: Stmt
    loc: SourceLoc = field(default=NOWHERE, compare=False)


@dataclass
class DoWhile(Stmt):
    body: Stmt
    cond: Expr
    loc: SourceLoc = field(default=NOWHERE, compare=False)


@dataclass
class For(Stmt):
    init: Stmt | None
    cond: Expr | None
    step: Stmt | None
    body: Stmt
    loc: SourceLoc = field(default=NOWHERE, compare=False)


@dataclass
class Block(Stmt):
    stmts: list[Stmt]
    loc: SourceLoc = field(default=NOWHERE, compare=False)


@dataclass
class Return(Stmt):
    value: Expr | None
    loc: SourceLoc = field(default=NOWHERE, compare=False)


@dataclass
class AssertStmt(Stmt):
    cond: Expr
    text: str = field(default="", compare=False)
    loc: SourceLoc = field(default=NOWHERE, compare=False)


@dataclass
class AssumeStmt(Stmt):
    cond: Expr
    text: str = field(default="", compare=False)
    loc: SourceLoc = field(default=NOWHERE, compare=False)


# --------------------------------------------------------------------------
# Top level
# --------------------------------------------------------------------------

@dataclass
class Param(Node):
    name: str
    type_syntax: TypeSyntax
    loc: SourceLoc = field(default=NOWHERE, compare=False)
    ty: TypeInfo | None = field(default=None, compare=False)


@dataclass
class FuncDef(Node):
    name: str
    ret_syntax: TypeSyntax
    params: list[Param]
    body: Block
    loc: SourceLoc = field(default=NOWHERE, compare=False)
    ret_ty: TypeInfo | None = field(default=None, compare=False)


@dataclass
class RecordDef(Node):
    """struct or union definition."""

    tag: str
    is_union: bool
    members: list[VarDecl]
    loc: SourceLoc = field(default=NOWHERE, compare=False)
    ty: TypeInfo | None = field(default=None, compare=False)


@dataclass
class EnumDef(Node):
    tag: str
    enumerators: list[tuple[str, Expr | None]]
    loc: SourceLoc = field(default=NOWHERE, compare=False)


@dataclass
class GlobalDecl(Node):
    decls: list[VarDecl]
    loc: SourceLoc = field(default=NOWHERE, compare=False)


@dataclass
class SymbolInfo(Node):
    name: str
    ty: TypeInfo
    storage: str  # "global", "local", "param", "function", "enum-const"
    value: int | None = None  # enum constant value


@dataclass
class ProgramAst(Node):
    declarations: list[Node]  # RecordDef | EnumDef | GlobalDecl | FuncDef
    symbols: dict[str, SymbolInfo] = field(default_factory=dict, compare=False)
    entry: str = "main"
    typed: bool = field(default=False, compare=False)

    def functions(self) -> dict[str, FuncDef]:
        return {d.name: d for d in self.declarations if isinstance(d, FuncDef)}

    def globals(self) -> list[VarDecl]:
        out = []
        for d in self.declarations:
            if isinstance(d, GlobalDecl):
                out.extend(d.decls)
        return out
