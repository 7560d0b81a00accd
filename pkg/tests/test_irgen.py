"""Lowering to the instruction stream and loop unrolling."""
import pytest

from conftest import parse_src, run_verify
from programs import FIG2
from minibmc.errors import DiagnosticsError
from minibmc.goto import lower
from minibmc.unroll import UnwindConfig, unroll


def lowered(src):
    return lower(parse_src(src))


class TestLower:
    def test_fig2_stream(self):
        gp = lowered(FIG2)
        kinds = [i.kind for i in gp.instructions if i.kind != "skip"]
        assert kinds == ["decl", "decl", "decl", "goto", "assign", "goto",
                         "assign", "assert"]
        branch = next(i for i in gp.instructions if i.kind == "goto"
                      and i.guard is not None)
        assert "x == 0" in repr(branch).replace("(", "").replace(")", "")

    def test_identity_inline_is_one_assignment(self):
        gp = lowered("int id(int v){return v;}\n"
                     "int main(){int x; x = id(5); assert(x == 5);}")
        assigns = [i for i in gp.instructions if i.kind == "assign"]
        assert len(assigns) == 1  # x := 5 directly

    def test_general_inline_renames_locals(self):
        src = ("int twice(int v){int t; t = v + v; return t;}\n"
               "int main(){int x; x = twice(3); x = twice(x); assert(x == 12);}")
        gp = lowered(src)
        decls = {i.symbol for i in gp.instructions if i.kind == "decl"}
        # the two call sites get distinct copies of t
        assert len([d for d in decls if d.startswith("twice::t")]) == 2
        assert run_verify(src).exit_code == 0

    def test_compound_assign_desugars(self):
        gp = lowered("int main(){int x; x = 1; x += 2; assert(x == 3);}")
        texts = [i.source_text for i in gp.instructions if i.kind == "assign"]
        assert any("(x + 2)" in t for t in texts)

    def test_recursion_rejected_with_cycle(self):
        src = ("int f(int n){return g(n);}\nint g(int n){return f(n);}\n"
               "int main(){assert(f(0) == 0);}")
        with pytest.raises(DiagnosticsError) as ei:
            lowered(src)
        assert "f -> g -> f" in ei.value.diagnostics[0].message

    def test_call_to_undefined(self):
        with pytest.raises(DiagnosticsError):
            parse_src("int main(){ int x; x = mystery(); }")


class TestUnroll:
    def test_loop_free_identity(self):
        gp = lowered(FIG2)
        for k in (1, 3, 10):
            up = unroll(gp, UnwindConfig(k))
            assert up.instructions == gp.instructions

    def test_count_bound(self):
        src = "int main(){int i; for(i=0;i<3;i=i+1){ assert(i < 3); }}"
        gp = lowered(src)
        n0 = len(gp.instructions)
        for k in (1, 2, 5):
            up = unroll(gp, UnwindConfig(k))
            assert len(up.instructions) <= n0 * (k + 1)

    def test_forward_only_after_unroll(self):
        src = ("int main(){int i, j; for(i=0;i<2;i=i+1){"
               "for(j=0;j<2;j=j+1){ assert(j < 2); }}}")
        up = unroll(lowered(src), UnwindConfig(2))
        idx = {id(ins): n for n, ins in enumerate(up.instructions)}
        for n, ins in enumerate(up.instructions):
            if ins.kind == "goto":
                assert idx[id(ins.target)] > n
        assert up.loops == []

    def test_unwinding_assertion_emitted(self):
        src = "int main(){int i; i = 0; while(i < 10) i = i + 1;}"
        up = unroll(lowered(src), UnwindConfig(2))
        unwinds = [i for i in up.instructions
                   if i.kind == "assert" and i.prop_kind == "unwinding"]
        assert len(unwinds) == 1
        assumes = [i for i in up.instructions if i.kind == "assume"]
        assert len(assumes) == 1

    def test_unwinding_assertion_off(self):
        src = "int main(){int i; i = 0; while(i < 10) i = i + 1;}"
        up = unroll(lowered(src), UnwindConfig(2, unwinding_assertions=False))
        assert not any(i.prop_kind == "unwinding" for i in up.instructions
                       if i.kind == "assert")

    def test_per_loop_override(self):
        src = ("int main(){int i, j; for(i=0;i<1;i=i+1){ assert(i<1); }"
               "for(j=0;j<4;j=j+1){ assert(j<4); }}")
        rep = run_verify(src, bound=1, unwindset={2: 4})
        assert rep.exit_code == 0

    def test_bound_must_be_positive(self):
        with pytest.raises(ValueError):
            UnwindConfig(0)


class TestUnwindSemantics:
    def test_while_under_bounded_is_violable(self):
        # while (i < 10) i++ with k=2: the final !(i < 10) check is violable
        src = "int main(){int i; while(i < 10) i = i + 1;}"
        rep = run_verify(src, bound=2)
        assert rep.exit_code == 10
        assert [r.prop.kind for r in rep.results
                if r.status == "violated"] == ["unwinding"]

    def test_sufficient_bound_passes(self):
        src = "int main(){int i; i = 0; while(i < 3) i = i + 1; assert(i == 3);}"
        rep = run_verify(src, bound=3)
        assert rep.exit_code == 0

    def test_constant_255_loop_unrolls_vacuously(self):
        # bound 257 leaves the unwinding assertion vacuously true
        src = ("int main(){int j; int s; s = 0;"
               "for(j=0;j<=255;j=j+1){ s = s + 1; } assert(s == 256);}")
        rep = run_verify(src, bound=257)
        assert rep.exit_code == 0
