"""Safety VC generation, definition literals and query assembly."""
import pytest

import minibmc.terms as T
from conftest import ssa_of
from programs import FIG2, FIG5, FIG6
from minibmc.solver import BuiltinSolver
from minibmc.vcgen import ChecksConfig, generate_safety, introduce_literals


def vcs(src, bound=1, checks=None, **kw):
    ssa = ssa_of(src, bound, **kw)
    generate_safety(ssa, checks or ChecksConfig())
    return ssa


class TestGenerateSafety:
    def test_fig2_exactly_seven(self):
        ssa = vcs(FIG2)
        assert len(ssa.properties) == 7
        kinds = [p.kind for p in ssa.properties]
        assert kinds.count("array-lower-bound") == 3
        assert kinds.count("array-upper-bound") == 3
        assert kinds.count("user-assertion") == 1
        lines = sorted({p.loc.line for p in ssa.properties})
        assert lines == [4, 6, 7]

    def test_fig6_zero_pointer_vcs(self):
        ssa = vcs(FIG6)
        assert all(p.kind == "user-assertion" for p in ssa.properties)
        assert len(ssa.properties) == 2

    def test_statically_safe_access_no_vc(self):
        ssa = vcs("int main(){int a[2]; a[0] = 1; assert(a[0] == 1);}")
        assert all(p.kind == "user-assertion" for p in ssa.properties)

    def test_statically_violated_access_keeps_vc(self):
        ssa = vcs("int main(){int a[2]; a[3] = 1; assert(1);}")
        uppers = [p for p in ssa.properties if p.kind == "array-upper-bound"]
        assert len(uppers) == 1 and uppers[0].claim is T.FALSE

    def test_fig5_same_object_vc(self):
        ssa = vcs(FIG5)
        kinds = {p.kind for p in ssa.properties}
        assert "same-object" in kinds
        assert "invalid-pointer" not in kinds  # statically valid pointer

    def test_div_by_zero_vc(self):
        ssa = vcs("int main(){int x, y; y = nondet_int(); x = 10 / y; assert(1);}")
        assert any(p.kind == "div-by-zero" for p in ssa.properties)

    def test_overflow_vcs_default_off(self):
        src = "int main(){int x; x = nondet_int(); x = x + 1; assert(1);}"
        assert not any(p.kind == "overflow" for p in vcs(src).properties)
        on = vcs(src, checks=ChecksConfig(signed_overflow=True))
        assert any(p.kind == "overflow" for p in on.properties)

    def test_guards_attached(self):
        ssa = vcs(FIG2)
        by_line = {}
        for p in ssa.properties:
            by_line.setdefault(p.loc.line, []).append(p)
        # the line-4 access sits in the then branch, line 6 in the else branch
        assert all(p.guard is not T.TRUE for p in by_line[4])
        assert all(p.guard is not T.TRUE for p in by_line[6])
        bounds7 = [p for p in by_line[7] if p.kind != "user-assertion"]
        assert all(p.guard is T.TRUE for p in bounds7)


class TestIntroduceLiterals:
    def test_literal_bijection_and_goal(self):
        ssa = vcs(FIG2)
        q = introduce_literals(ssa)
        assert len(q.literal_defs) == len(ssa.properties) == 7
        # the goal is the disjunction of the negated literals
        negs = set()
        goal = q.goal
        while goal.kind == T.OR:
            negs.add(goal.args[1])
            goal = goal.args[0]
        negs.add(goal)
        assert len(negs) == 7
        assert all(n.kind == T.NOT for n in negs)
        # stripping literal defs recovers the original constraint count
        assert len(q.defs) == len(ssa.constraints)

    def test_single_property_goal(self):
        ssa = vcs("int main(){ assert(nondet_int() == 0); }")
        q = introduce_literals(ssa)
        assert len(q.properties) == 1
        assert q.goal.kind == T.NOT

    def test_zero_properties_trivially_unsat(self):
        ssa = vcs("int main(){ int x; x = 1; }")
        q = introduce_literals(ssa)
        assert q.goal is T.FALSE
        outcome = BuiltinSolver(q).prepare().check_combined()
        assert outcome.verdict == "unsat"


class TestFig2QuerySoundness:
    def test_combined_query_satisfiable(self):
        q = introduce_literals(vcs(FIG2))
        outcome = BuiltinSolver(q).prepare().check_combined()
        assert outcome.verdict == "sat"
        assert outcome.false_literals  # some property is violated

    def test_line6_upper_bound_and_assert_individually_violable(self):
        ssa = vcs(FIG2)
        q = introduce_literals(ssa)
        solver = BuiltinSolver(q).prepare()
        wanted = {("array-upper-bound", 6), ("user-assertion", 7)}
        for qp in q.properties:
            key = (qp.prop.kind, qp.prop.loc.line)
            if key in wanted:
                assert solver.check_property(qp).verdict == "sat", key
