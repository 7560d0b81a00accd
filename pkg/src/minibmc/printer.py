"""Pretty-printer from (typed or untyped) ASTs back to MiniC source.

Implicit casts inserted by the typechecker are not printed, so the printed
program re-parses and re-typechecks to a structurally identical tree.
"""
from __future__ import annotations

from fractions import Fraction

from .ast import (
    Assign, AssertStmt, AssumeStmt, Binary, Block, Call, Cast, Conditional,
    DeclStmt, DoWhile, EnumDef, Expr, ExprStmt, FloatLit, For, FuncDef,
    GlobalDecl, Ident, If, Index, InitList, IntLit, Member, Nondet,
    ProgramAst, RecordDef, Return, Stmt, TypeSyntax, Unary, VarDecl, While,
)


def frac_to_c(value: Fraction) -> str:
    num, den = value.numerator, value.denominator
    k = 0
    while den % 2 == 0:
        den //= 2
        k += 1
    j = 0
    while den % 5 == 0:
        den //= 5
        j += 1
    assert den == 1, "float literals always come from decimal text"
    digits = max(k, j)
    scaled = abs(num) * 10 ** digits // value.denominator
    s = str(scaled).rjust(digits + 1, "0")
    out = s[:-digits] + "." + s[-digits:] if digits else s + ".0"
    return ("-" if num < 0 else "") + out


def print_expr(e: Expr) -> str:
    if isinstance(e, IntLit):
        return f"{e.value}{e.suffix}"
    if isinstance(e, FloatLit):
        return frac_to_c(e.value) + e.suffix
    if isinstance(e, Ident):
        return e.name
    if isinstance(e, Nondet):
        return f"nondet_{e.type_name}()"
    if isinstance(e, Unary):
        op = e.op.replace("pre", "")
        return f"{op}({print_expr(e.operand)})"
    if isinstance(e, Binary):
        return f"({print_expr(e.left)} {e.op} {print_expr(e.right)})"
    if isinstance(e, Conditional):
        return f"({print_expr(e.cond)} ? {print_expr(e.then)} : {print_expr(e.els)})"
    if isinstance(e, Call):
        return f"{e.name}({', '.join(print_expr(a) for a in e.args)})"
    if isinstance(e, Index):
        return f"{print_expr(e.base)}[{print_expr(e.index)}]"
    if isinstance(e, Member):
        return f"{print_expr(e.base)}{'->' if e.arrow else '.'}{e.name}"
    if isinstance(e, Cast):
        if e.target is None:  # implicit; re-typechecking reinserts it
            return print_expr(e.operand)
        stars = "*" * e.target.ptr_depth
        return f"({e.target.base}{stars})({print_expr(e.operand)})"
    raise AssertionError(f"unprintable expr {e!r}")


def _print_init(init) -> str:
    if isinstance(init, InitList):
        return "{" + ", ".join(_print_init(i) for i in init.items) + "}"
    return print_expr(init)


def _print_var_decl(vd: VarDecl) -> str:
    return f"{vd.type_syntax.base} {_print_declarator(vd)}"


def _print_declarator(vd: VarDecl) -> str:
    stars = "*" * vd.type_syntax.ptr_depth
    dims = "".join(f"[{d}]" for d in vd.array_dims)
    s = f"{stars}{vd.name}{dims}"
    if vd.init is not None:
        s += " = " + _print_init(vd.init)
    return s


def _print_decl_group(decls: list[VarDecl]) -> str:
    base = decls[0].type_syntax.base
    return f"{base} {', '.join(_print_declarator(vd) for vd in decls)}"


def print_stmt(s: Stmt, indent: int = 0) -> str:
    pad = "  " * indent
    if isinstance(s, Block):
        inner = "".join(print_stmt(x, indent + 1) for x in s.stmts)
        return f"{pad}{{\n{inner}{pad}}}\n"
    if isinstance(s, DeclStmt):
        return pad + _print_decl_group(s.decls) + ";\n"
    if isinstance(s, Assign):
        return f"{pad}{print_expr(s.lhs)} = {print_expr(s.rhs)};\n"
    if isinstance(s, ExprStmt):
        return f"{pad}{print_expr(s.expr)};\n"
    if isinstance(s, If):
        out = f"{pad}if ({print_expr(s.cond)})\n{print_stmt(_blk(s.then), indent)}"
        if s.els:
            out += f"{pad}else\n{print_stmt(_blk(s.els), indent)}"
        return out
    if isinstance(s, While):
        return f"{pad}while ({print_expr(s.cond)})\n{print_stmt(_blk(s.body), indent)}"
    if isinstance(s, DoWhile):
        return (f"{pad}do\n{print_stmt(_blk(s.body), indent)}"
                f"{pad}while ({print_expr(s.cond)});\n")
    if isinstance(s, For):
        init = print_stmt(s.init, 0).strip().rstrip(";") if s.init else ""
        cond = print_expr(s.cond) if s.cond is not None else ""
        step = print_stmt(s.step, 0).strip().rstrip(";") if s.step else ""
        return (f"{pad}for ({init}; {cond}; {step})\n"
                f"{print_stmt(_blk(s.body), indent)}")
    if isinstance(s, Return):
        if s.value is None:
            return f"{pad}return;\n"
        return f"{pad}return {print_expr(s.value)};\n"
    if isinstance(s, AssertStmt):
        return f"{pad}assert({print_expr(s.cond)});\n"
    if isinstance(s, AssumeStmt):
        return f"{pad}assume({print_expr(s.cond)});\n"
    raise AssertionError(f"unprintable stmt {s!r}")


def _blk(s: Stmt) -> Block:
    return s if isinstance(s, Block) else Block([s])


def print_program(ast: ProgramAst) -> str:
    parts: list[str] = []
    for d in ast.declarations:
        if isinstance(d, RecordDef):
            kw = "union" if d.is_union else "struct"
            fields = "".join(f"  {_print_var_decl(m)};\n" for m in d.members)
            parts.append(f"{kw} {d.tag} {{\n{fields}}};\n")
        elif isinstance(d, EnumDef):
            items = ", ".join(n if v is None else f"{n} = {print_expr(v)}"
                              for n, v in d.enumerators)
            parts.append(f"enum {d.tag} {{ {items} }};\n")
        elif isinstance(d, GlobalDecl):
            parts.append(_print_decl_group(d.decls) + ";\n")
        elif isinstance(d, FuncDef):
            stars = "*" * d.ret_syntax.ptr_depth
            params = ", ".join(
                f"{p.type_syntax.base} {'*' * p.type_syntax.ptr_depth}{p.name}"
                for p in d.params) or "void"
            parts.append(f"{d.ret_syntax.base} {stars}{d.name}({params})\n"
                         f"{print_stmt(d.body, 0)}")
    return "\n".join(parts)
