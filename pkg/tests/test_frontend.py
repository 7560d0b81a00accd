"""Lexing, parsing and typechecking."""
import pytest

from conftest import parse_src
from programs import FIG2, FIG5, FIG6
from minibmc.ast import (
    AssertStmt, Assign, Block, Cast, DeclStmt, FuncDef, Ident, If, IntLit,
    Member, Unary,
)
from minibmc.errors import DiagnosticsError, SourceUnit
from minibmc.parser import parse
from minibmc.printer import print_program
from minibmc.typecheck import typecheck
from minibmc.typeinfo import Widths


def first_func(ast) -> FuncDef:
    return next(d for d in ast.declarations if isinstance(d, FuncDef))


class TestParse:
    def test_fig2_shape(self):
        ast = parse(SourceUnit("f.c", FIG2))
        funcs = ast.functions()
        assert list(funcs) == ["main"]
        body = funcs["main"].body.stmts
        decl = body[0]
        assert isinstance(decl, DeclStmt)
        assert [d.name for d in decl.decls] == ["a", "i", "x"]
        assert decl.decls[0].array_dims == [2]
        assert isinstance(body[1], If) and body[1].els is not None
        assert isinstance(body[2], AssertStmt)

    def test_empty_unit(self):
        ast = parse(SourceUnit("e.c", ""))
        assert ast.declarations == []

    def test_out_of_bounds_is_not_a_parse_matter(self):
        # bounds are a verification matter, not a parse matter
        ast = parse_src("int main(){int a[2]; a[3]=0;}")
        assert ast.typed

    def test_syntax_error_reports_first_token(self):
        with pytest.raises(DiagnosticsError) as ei:
            parse(SourceUnit("b.c", "int main() { int x; x = ; }"))
        d = ei.value.diagnostics[0]
        assert d.kind == "syntax"
        assert d.loc.line == 1

    def test_unsupported_distinct_from_syntax(self):
        with pytest.raises(DiagnosticsError) as ei:
            parse(SourceUnit("g.c", "int main() { goto l; }"))
        assert ei.value.diagnostics[0].kind == "unsupported"

    def test_varargs_unsupported(self):
        with pytest.raises(DiagnosticsError) as ei:
            parse(SourceUnit("v.c", "int f(int a, ...) { return a; }"))
        assert ei.value.diagnostics[0].kind == "unsupported"


class TestTypecheck:
    def test_fig5_decay_to_address_of_first_element(self):
        ast = parse_src(FIG5)
        body = first_func(ast).body.stmts
        assign = body[1]
        assert isinstance(assign, Assign)
        cast = assign.rhs
        assert isinstance(cast, Cast) and cast.decay
        assert cast.ty.kind == "pointer"
        assert cast.ty.element.kind == "signedbv"

    def test_unsigned_char_widens_with_zero_extend(self):
        ast = parse_src("int main(){unsigned char c; int i; i = c;}")
        assign = first_func(ast).body.stmts[2]
        cast = assign.rhs
        assert isinstance(cast, Cast) and cast.implicit
        assert cast.operand.ty.kind == "unsignedbv"
        assert cast.operand.ty.width == 8
        assert cast.ty.width == 32

    def test_fig6_field_access_typed_from_field_list(self):
        ast = parse_src(FIG6)
        body = first_func(ast).body.stmts
        store = body[2]  # p->a[1] = 1
        assert isinstance(store, Assign)
        member = store.lhs.base  # p->a within p->a[1]
        assert isinstance(member, Member) and member.arrow
        assert member.ty.kind == "array" and member.ty.length == 2

    def test_undeclared_identifier(self):
        with pytest.raises(DiagnosticsError) as ei:
            parse_src("int main(){ x = 1; }")
        assert "undeclared" in ei.value.diagnostics[0].message

    def test_field_not_in_structure(self):
        src = "struct s { int a; };\nint main(){ struct s v; v.b = 1; }"
        with pytest.raises(DiagnosticsError) as ei:
            parse_src(src)
        assert "no field" in ei.value.diagnostics[0].message

    def test_address_of_non_lvalue(self):
        with pytest.raises(DiagnosticsError):
            parse_src("int main(){ int *p; p = &(1 + 2); }")

    def test_no_identity_casts_survive(self):
        ast = parse_src("int main(){ int x; x = (int)x; }")
        assign = first_func(ast).body.stmts[1]
        assert isinstance(assign.rhs, Ident)  # the identity cast is gone

    def test_usual_arith_signed_to_unsigned_at_equal_width(self):
        ast = parse_src("int main(){ unsigned int u; int s; int r; r = (s < u); }")
        assign = first_func(ast).body.stmts[3]
        cmp = assign.rhs.operand  # bool->int cast wraps the comparison
        assert isinstance(cmp.left, Cast)
        assert cmp.left.ty.kind == "unsignedbv"

    def test_enum_constants_fold(self):
        ast = parse_src("enum e { A, B = 5, C };\nint main(){ int x; x = C; }")
        assign = first_func(ast).body.stmts[1]
        inner = assign.rhs
        while isinstance(inner, Cast):
            inner = inner.operand
        assert isinstance(inner, IntLit) and inner.value == 6

    def test_early_return_rejected(self):
        src = "int f(int x){ if (x) return 1; return 0; }\nint main(){ assert(f(1)==1); }"
        with pytest.raises(DiagnosticsError) as ei:
            parse_src(src)
        assert ei.value.diagnostics[0].kind == "unsupported"

    def test_widths_configurable(self):
        ast = parse_src("int main(){ int x; x = 1; }", Widths(int_=16))
        decl = first_func(ast).body.stmts[0]
        assert decl.decls[0].ty.width == 16


class TestPrintRoundTrip:
    @pytest.mark.parametrize("src", [
        FIG2, FIG5, FIG6,
        "int g = 3;\nint main(){ int a[3] = {1, 2, 3}; assert(a[0] == 1); }",
        "int main(){ int i; for (i = 0; i < 4; i = i + 1) { assert(i < 4); } }",
        "int main(){ float f; f = 1.5; assert(f > 1.0); }",
        "enum e { A, B = 5 };\nint main(){ int x; x = B; assert(x == 5); }",
        "union u { int i; char c; } w;\nint main(){ w.i = 7; assert(w.c == 7); }",
        "int main(){ int x; x = nondet_int(); assume(x > 0); assert(x >= 1); }",
    ])
    def test_parse_print_parse_idempotent(self, src):
        a = parse_src(src)
        printed = print_program(a)
        b = parse_src(printed)
        assert a == b

    def test_typecheck_deterministic(self):
        a1 = parse_src(FIG2)
        a2 = parse_src(FIG2)
        assert a1 == a2
