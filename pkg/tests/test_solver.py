"""Tuple flattening, array reduction, bit-blasting and the CDCL core."""
import itertools
import random

import pytest

import minibmc.terms as T
from conftest import ssa_of
from programs import FIG2, FIG5, FIG6
from minibmc.arrays import reduce_arrays
from minibmc.bitblast import Blaster
from minibmc.cdcl import solve_cnf
from minibmc.flatten import flatten_tuples
from minibmc.solver import BuiltinSolver
from minibmc.vcgen import ChecksConfig, Query, generate_safety, introduce_literals


def query_of(src, bound=1, checks=None):
    ssa = ssa_of(src, bound)
    generate_safety(ssa, checks or ChecksConfig())
    return introduce_literals(ssa)


def formula_query(formula: T.Term) -> Query:
    lit = T.mk_var("$l#0", T.BOOL_S)
    return Query([], [(lit, T.mk_not(formula))], T.mk_not(lit), [])


def decide_formula(formula: T.Term) -> str:
    """sat/unsat of a closed formula through flatten+reduce+blast+cdcl."""
    q = formula_query(formula)
    red = reduce_arrays(flatten_tuples(q).query)
    bl = Blaster()
    for lvar, clause in red.query.literal_defs:
        bl.bits[lvar] = bl.blast(clause)
    bl.clause(bl.blast(red.query.goal))
    return solve_cnf(bl.nvars, bl.clauses)[0]


class TestFlattenTuples:
    def test_tuple_store_becomes_fieldwise_equations(self):
        # w' = store(w, b, 99):  w'.a == w.a  and  w'.b == 99
        sort = T.TupleSort((("a", T.BvSort(8)), ("b", T.BvSort(8))), tag="s")
        w = T.mk_var("w", sort)
        w2 = T.mk_var("w2", sort)
        q = Query([(w2, T.mk_tup_store(w, "b", T.mk_bv(99, 8)))], [], T.FALSE, [])
        flat = flatten_tuples(q)
        defs = {lhs.attr: rhs for lhs, rhs in flat.query.defs}
        assert defs["w2$a"] is T.mk_var("w$a", T.BvSort(8))
        assert defs["w2$b"] is T.mk_bv(99, 8)

    def test_degenerate_single_field_tuple(self):
        sort = T.TupleSort((("v", T.BvSort(8)),))
        t = T.mk_var("u", sort)
        t2 = T.mk_var("u2", sort)
        q = Query([(t2, t)], [], T.FALSE, [])
        flat = flatten_tuples(q)
        (lhs, rhs), = flat.query.defs
        assert lhs.attr == "u2$v" and rhs.attr == "u$v"

    def test_array_of_tuples(self):
        elem = T.TupleSort((("x", T.BvSort(4)), ("y", T.BvSort(4))))
        arr_sort = T.ArraySort(T.BvSort(4), elem, 2)
        a = T.mk_var("arr", arr_sort)
        i = T.mk_var("idx", T.BvSort(4))
        sel = T.mk_tup_select(T.mk_select(a, i), "y")
        q = Query([], [(T.mk_var("$l#0", T.BOOL_S),
                        T.mk_eq(sel, T.mk_bv(1, 4)))], T.FALSE, [])
        flat = flatten_tuples(q)
        (_, clause), = flat.query.literal_defs
        inner = clause.args[0]
        assert inner.kind == T.SELECT
        assert inner.args[0].attr == "arr$y"


class TestReduceArrays:
    def test_select_of_store_expands_to_ite(self):
        asort = T.ArraySort(T.BvSort(4), T.BvSort(4), 2)
        a = T.mk_var("ra", asort)
        i = T.mk_var("ri", T.BvSort(4))
        j = T.mk_var("rj", T.BvSort(4))
        v = T.mk_var("rv", T.BvSort(4))
        sel = T.mk_select(T.mk_store(a, i, v), j)
        q = Query([], [(T.mk_var("$l#0", T.BOOL_S),
                        T.mk_eq(sel, T.mk_bv(0, 4)))], T.FALSE, [])
        red = reduce_arrays(flatten_tuples(q).query)
        (_, clause), = red.query.literal_defs
        assert clause.args[0].kind == T.ITE

    def test_concrete_two_element_axioms(self):
        asort = T.ArraySort(T.BvSort(4), T.BvSort(4), 2)
        a = T.mk_var("ca", asort)
        stored = T.mk_store(a, T.mk_bv(0, 4), T.mk_bv(7, 4))
        # select at the stored index gives the stored value
        f1 = T.mk_eq(T.mk_select(stored, T.mk_bv(0, 4)), T.mk_bv(7, 4))
        assert decide_formula(T.mk_not(f1)) == "unsat"
        # select at the other index reads the original element
        f2 = T.mk_eq(T.mk_select(stored, T.mk_bv(1, 4)),
                     T.mk_select(a, T.mk_bv(1, 4)))
        assert decide_formula(T.mk_not(f2)) == "unsat"

    def test_mccarthy_axioms_on_random_chains(self):
        rng = random.Random(11)
        asort = T.ArraySort(T.BvSort(4), T.BvSort(4), 16)
        for trial in range(60):
            a = T.mk_var(f"mc{trial}", asort)
            chain = a
            depth = rng.randint(0, 5)
            for d in range(depth):
                idx = T.mk_bv(rng.randrange(16), 4) if rng.random() < 0.5 \
                    else T.mk_var(f"mi{trial}_{d}", T.BvSort(4))
                chain = T.mk_store(chain, idx, T.mk_bv(rng.randrange(16), 4))
            i = T.mk_var(f"i{trial}", T.BvSort(4))
            j = T.mk_var(f"j{trial}", T.BvSort(4))
            v = T.mk_var(f"v{trial}", T.BvSort(4))
            s = T.mk_store(chain, i, v)
            ax1 = T.mk_implies(T.mk_eq(i, j),
                               T.mk_eq(T.mk_select(s, j), v))
            ax2 = T.mk_implies(T.mk_ne(i, j),
                               T.mk_eq(T.mk_select(s, j),
                                       T.mk_select(chain, j)))
            assert decide_formula(T.mk_not(ax1)) == "unsat"
            assert decide_formula(T.mk_not(ax2)) == "unsat"

    def test_oob_read_is_cached_free_variable(self):
        asort = T.ArraySort(T.BvSort(4), T.BvSort(4), 2)
        a = T.mk_var("oa", asort)
        sel = T.mk_select(a, T.mk_bv(9, 4))
        # the same out-of-bounds read twice is the same value
        f = T.mk_eq(sel, sel)
        assert decide_formula(T.mk_not(f)) == "unsat"
        # but it is unconstrained: it can be any value
        f2 = T.mk_eq(sel, T.mk_bv(3, 4))
        assert decide_formula(f2) == "sat"


class TestBitblast:
    def test_contradiction_1bit(self):
        x = T.mk_var("b1", T.BOOL_S)
        assert decide_formula(T.mk_and(x, T.mk_not(x))) == "unsat"

    def test_commutativity_4bit(self):
        a = T.mk_var("ka", T.BvSort(4))
        b = T.mk_var("kb", T.BvSort(4))
        f = T.mk_eq(T.mk_add(a, b), T.mk_add(b, a))
        assert decide_formula(T.mk_not(f)) == "unsat"

    def test_multiplication_matches_oracle_exhaustively(self):
        a = T.mk_var("ma", T.BvSort(4))
        b = T.mk_var("mb", T.BvSort(4))
        bl = Blaster()
        ab = bl.blast(a)
        bb = bl.blast(b)
        ob = bl.blast(T.mk_mul(a, b))
        for x in range(16):
            for y in range(16):
                assume = tuple(ab[i] if x >> i & 1 else -ab[i] for i in range(4)) \
                    + tuple(bb[i] if y >> i & 1 else -bb[i] for i in range(4))
                verdict, model = solve_cnf(bl.nvars, bl.clauses, assume)
                assert verdict == "sat"
                got = 0
                for i, l in enumerate(ob):
                    bit = (l > 0) if abs(l) == 1 else \
                        (model[abs(l)] > 0) == (l > 0)
                    got |= bit << i
                assert got == (x * y) % 16


class TestCdcl:
    def test_empty_clause_set_sat(self):
        assert solve_cnf(0, [])[0] == "sat"

    def test_pigeonhole_3_into_2(self):
        cls = []
        for i in range(3):
            cls.append([i * 2 + 1, i * 2 + 2])
        for j in range(2):
            for i1 in range(3):
                for i2 in range(i1 + 1, 3):
                    cls.append([-(i1 * 2 + j + 1), -(i2 * 2 + j + 1)])
        assert solve_cnf(6, cls)[0] == "unsat"

    def test_random_3cnf_matches_brute_force(self):
        rng = random.Random(3)

        def brute(nv, clauses):
            for bits in itertools.product([1, -1], repeat=nv):
                if all(any((l > 0) == (bits[abs(l) - 1] > 0) for l in c)
                       for c in clauses):
                    return "sat"
            return "unsat"

        for _ in range(150):
            nv = rng.randint(3, 14)
            m = rng.randint(3, 6 * nv)
            cls = [[rng.choice([1, -1]) * rng.randint(1, nv) for _ in range(3)]
                   for _ in range(m)]
            verdict, model = solve_cnf(nv, cls)
            assert verdict == brute(nv, cls)
            if verdict == "sat":
                assert all(any((l > 0) == (model[abs(l)] > 0) for l in c)
                           for c in cls)

    def test_budget_reported_distinctly(self):
        rng = random.Random(1)
        nv = 300
        cls = [[rng.choice([1, -1]) * rng.randint(1, nv) for _ in range(3)]
               for _ in range(nv * 5)]
        verdict, _ = solve_cnf(nv, cls, timeout_s=0.0)
        assert verdict == "budget"


class TestModels:
    def test_single_equation_model(self):
        q = query_of("int main(){int x; x = 5; assert(x != 5);}")
        solver = BuiltinSolver(q).prepare()
        outcome = solver.check_property(q.properties[0])
        assert outcome.verdict == "sat"
        assert outcome.model.structured["main::x#1"] == 5
        assert solver.validate_model(outcome.model)

    def test_fig2_model_violates_line6_upper_bound(self):
        q = query_of(FIG2)
        solver = BuiltinSolver(q).prepare()
        qp = next(p for p in q.properties
                  if (p.prop.kind, p.prop.loc.line) == ("array-upper-bound", 6))
        outcome = solver.check_property(qp)
        assert outcome.verdict == "sat"
        m = outcome.model
        # the else branch runs: x1 != 0, and the write lands at i0+2 >= 2
        assert m.structured["main::x#0"] != 0
        i0 = m.structured["main::i#0"]
        i0s = i0 - (1 << 32) if i0 >> 31 else i0
        assert i0s + 2 >= 2
        assert solver.validate_model(m)

    def test_fig5_model_offset_exceeds_object(self):
        q = query_of(FIG5)
        solver = BuiltinSolver(q).prepare()
        qp = next(p for p in q.properties if p.prop.kind == "same-object")
        outcome = solver.check_property(qp)
        assert outcome.verdict == "sat"
        p1 = outcome.model.structured["main::p#1"]
        assert p1["i"] + 2 >= 2  # offset beyond the 2-element object

    def test_unsat_stable_under_constraint_reordering(self):
        q = query_of("int main(){int x; x = 3; x = x + 1; assert(x == 4);}")
        base = BuiltinSolver(q).prepare()
        assert base.check_property(q.properties[0]).verdict == "unsat"
        rng = random.Random(5)
        for _ in range(5):
            defs = list(q.defs)
            rng.shuffle(defs)
            q2 = Query(defs, q.literal_defs, q.goal, q.properties, q.ssa)
            assert BuiltinSolver(q2).prepare() \
                .check_property(q2.properties[0]).verdict == "unsat"
