"""Symbolic execution into guarded single-assignment form."""
import pytest

import minibmc.terms as T
from conftest import ssa_of
from programs import FIG2, FIG5, FIG6, SAME_JOIN, STRAIGHT_LINE


def eq_map(ssa):
    return {f"{e.lhs.base.rsplit('::', 1)[-1].lstrip('$')}{e.lhs.version}": e
            for e in ssa.constraints}


class TestFig2:
    def test_exactly_the_six_equations(self):
        ssa = ssa_of(FIG2)
        assert len(ssa.constraints) == 5
        assert len(ssa.properties) == 1
        g1, a1, a2, a3, a4 = ssa.constraints

        # g1 == (x0 == 0)
        assert g1.lhs.base == "$g" and g1.lhs.version == 1
        assert g1.rhs.kind == T.EQ
        assert g1.rhs.args[0].attr == "main::x#0"
        assert g1.rhs.args[1].attr == 0

        # a1 == store(a0, i0, 0)
        assert a1.rhs.kind == T.STORE
        assert a1.rhs.args[0].attr == "main::a#0"
        assert a1.rhs.args[1].attr == "main::i#0"
        assert a1.rhs.args[2].attr == 0

        # a2 == a0  (branch resume copy)
        assert a2.kind == "copy"
        assert a2.rhs.attr == "main::a#0"

        # a3 == store(a2, i0 + 2, 1)
        assert a3.rhs.kind == T.STORE
        assert a3.rhs.args[0].attr == "main::a#2"
        assert a3.rhs.args[2].attr == 1

        # a4 == ite(g1, a1, a3)
        assert a4.rhs.kind == T.ITE
        assert a4.rhs.args[0].attr == "$g#1"
        assert a4.rhs.args[1].attr == "main::a#1"
        assert a4.rhs.args[2].attr == "main::a#3"

        # t1 == (select(a4, i0 + 1) == 1)
        t1 = ssa.properties[0]
        assert t1.claim.kind == T.EQ
        sel = t1.claim.args[0]
        assert sel.kind == T.SELECT and sel.args[0].attr == "main::a#4"

    def test_dump_matches_figure_style(self):
        from minibmc.ssa import format_ssa
        dump = format_ssa(ssa_of(FIG2))
        assert "g1 == (x0 == 0)" in dump
        assert "a1 == (a0 WITH [i0:=0])" in dump
        assert "a2 == a0" in dump
        assert "a4 == (g1 ? a1 : a3)" in dump


class TestBasics:
    def test_straight_line_versions(self):
        # two versions, no ite; with folding off the chain stays symbolic
        ssa = ssa_of(STRAIGHT_LINE, simplify_enabled=False)
        assigns = [e for e in ssa.constraints if e.lhs.base == "main::x"]
        assert [e.lhs.version for e in assigns] == [1, 2]
        assert assigns[1].rhs.kind == T.ADD
        assert assigns[1].rhs.args[0].attr == "main::x#1"
        assert not any(e.rhs.kind == T.ITE for e in ssa.constraints)
        # with folding on, the second version becomes the constant 2
        folded = ssa_of(STRAIGHT_LINE)
        assigns = [e for e in folded.constraints if e.lhs.base == "main::x"]
        assert assigns[1].rhs.attr == 2

    def test_single_assignment(self):
        for src in (FIG2, FIG5, FIG6):
            ssa = ssa_of(src)
            lhs = [e.lhs for e in ssa.constraints]
            assert len(lhs) == len(set(lhs))

    def test_use_before_def_freedom(self):
        # every variable used is either defined earlier or free
        for src in (FIG2, FIG5, FIG6, SAME_JOIN):
            ssa = ssa_of(src)
            defined: set[str] = set()
            for e in ssa.constraints:
                for v in T.free_vars(e.rhs):
                    name = v.attr
                    if name.endswith("#0") or "$nondet" in name or \
                            "$deref" in name:
                        continue
                    assert name in defined, f"{name} used before def"
                defined.add(e.lhs_term.attr)

    def test_same_value_join_collapses(self):
        # if (c) y=1; else y=1;  -- the merged value simplifies to 1 and the
        # assertion discharges
        ssa = ssa_of(SAME_JOIN)
        y_eqs = [e for e in ssa.constraints if e.lhs.base == "main::y"]
        assert ssa.properties[0].claim is T.TRUE or \
            any(e.rhs.kind == T.CONST and e.rhs.attr == 1 for e in y_eqs)

    def test_guard_semantics_in_branch(self):
        src = ("int main(){int c; c = nondet_int();"
               "if (c) { assert(c != 0); } }")
        ssa = ssa_of(src)
        prop = ssa.properties[0]
        assert prop.guard is not T.TRUE  # carries the branch guard

    def test_assume_strengthens_later_properties(self):
        src = ("int main(){int x; x = nondet_int(); assume(x > 3);"
               "assert(x > 2);}")
        ssa = ssa_of(src)
        assert len(ssa.assumptions) == 1
        assert ssa.properties[0].assumptions is not T.TRUE


class TestPointers:
    def test_fig5_pointer_map(self):
        ssa = ssa_of(FIG5)
        p_eqs = [e for e in ssa.constraints if e.lhs.base == "main::p"]
        assert len(p_eqs) == 1
        pv = ssa.pointer_map[p_eqs[0].lhs]
        a_obj = ssa.objects["main::a"]
        assert pv.object.attr == a_obj.oid
        assert pv.index.attr == 0

    def test_fig6_pointer_map(self):
        ssa = ssa_of(FIG6)
        p_eqs = [e for e in ssa.constraints if e.lhs.base == "main::p"]
        pv = ssa.pointer_map[p_eqs[0].lhs]
        assert pv.object.attr == ssa.objects["y"].oid
        assert pv.index.attr == 0

    def test_pointer_plus_zero_is_identity(self):
        src = ("int main(){int a[2], *p, *q; p = a; q = p + 0;"
               "assert(q == p);}")
        ssa = ssa_of(src)
        q_eqs = [e for e in ssa.constraints if e.lhs.base == "main::q"]
        p_eqs = [e for e in ssa.constraints if e.lhs.base == "main::p"]
        assert q_eqs[0].rhs is p_eqs[0].rhs  # identical tuple value
        assert ssa.properties[0].claim is T.TRUE

    def test_pointer_arith_copies_object_adds_index(self):
        src = "int main(){int a[4], *p, *q; p = a; q = p + 3; assert(*q == a[3]);}"
        ssa = ssa_of(src)
        q_eq = next(e for e in ssa.constraints if e.lhs.base == "main::q")
        pv = ssa.pointer_map[q_eq.lhs]
        assert pv.object.attr == ssa.objects["main::a"].oid
        assert pv.index.attr == 3

    def test_scalar_pointer_index_is_zero(self):
        ssa = ssa_of("int main(){int v, *p; p = &v; assert(*p == v);}")
        p_eq = next(e for e in ssa.constraints if e.lhs.base == "main::p")
        assert ssa.pointer_map[p_eq.lhs].index.attr == 0


class TestFig6Structure:
    def test_zero_init_and_store_chain(self):
        ssa = ssa_of(FIG6)
        y_eqs = [e for e in ssa.constraints if e.lhs.base == "y"]
        # zero-init: a[0]:=0, a[1]:=0, b:=0; then a[1]:=1; then b:=99
        assert len(y_eqs) == 5
        for e in y_eqs:
            assert e.rhs.kind == T.TSTORE
        last = y_eqs[-1]
        assert last.rhs.attr == "b" and last.rhs.args[1].attr == 99
        a_store = y_eqs[-2]
        assert a_store.rhs.attr == "a"
        inner = a_store.rhs.args[1]
        assert inner.kind == T.STORE and inner.args[1].attr == 1 \
            and inner.args[2].attr == 1

    def test_properties_select_structure(self):
        ssa = ssa_of(FIG6)
        p1, p2 = ssa.properties
        # select(select(y_final, a), 1) == 1
        sel = p1.claim.args[0]
        assert sel.kind == T.SELECT
        assert sel.args[0].kind == T.TSEL and sel.args[0].attr == "a"
        assert p1.claim.args[1].attr == 1
        # select(y_final, b) == 99  (modulo the widening cast)
        lhs = p2.claim.args[0]
        while lhs.kind in (T.SEXT, T.ZEXT):
            lhs = lhs.args[0]
        assert lhs.kind == T.TSEL and lhs.attr == "b"
