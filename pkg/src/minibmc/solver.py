"""Built-in decision procedure: flatten tuples, reduce arrays, bit-blast,
decide with the CDCL core, and reassemble models.

Definitions are blasted once per run; each property is then decided as an
independent query (constraints with the property's definition literal
forced false), or all at once in the combined goal form.
"""
from __future__ import annotations

import time
from dataclasses import dataclass, field

from . import terms as T
from .arrays import ReduceResult, reduce_arrays
from .bitblast import CnfInstance, bitblast
from .cdcl import BUDGET, SAT, UNSAT, solve_cnf
from .errors import InternalError
from .evalterm import eval_term
from .flatten import FlattenResult, flatten_tuples
from .terms import Term
from .vcgen import Query, QueryProperty


@dataclass
class Model:
    values: dict[Term, object] = field(default_factory=dict)  # leaf vars -> raw
    structured: dict[str, object] = field(default_factory=dict)  # "base#v" -> value

    def value_of_var(self, name: str):
        return self.structured.get(name)


@dataclass
class SolveOutcome:
    verdict: str  # "sat" | "unsat" | "budget"
    model: Model | None = None
    false_literals: list[QueryProperty] = field(default_factory=list)


class BuiltinSolver:
    def __init__(self, query: Query, timeout_s: float | None = None):
        self.query = query
        self.timeout_s = timeout_s
        self.flat: FlattenResult | None = None
        self.red: ReduceResult | None = None
        self.cnf: CnfInstance | None = None
        self.encode_seconds = 0.0
        self.decide_seconds = 0.0

    def prepare(self) -> "BuiltinSolver":
        t0 = time.monotonic()
        self.flat = flatten_tuples(self.query)
        self.red = reduce_arrays(self.flat.query)
        self.cnf = bitblast(self.red.query)
        self.encode_seconds += time.monotonic() - t0
        return self

    # ----------------------------------------------------------- checking
    def check_property(self, qp: QueryProperty) -> SolveOutcome:
        lit = self.cnf.literal_lits[qp.literal]
        t0 = time.monotonic()
        verdict, satmodel = solve_cnf(self.cnf.nvars, self.cnf.clauses,
                                      assumptions=(-lit,),
                                      timeout_s=self.timeout_s)
        self.decide_seconds += time.monotonic() - t0
        if verdict != SAT:
            return SolveOutcome(verdict)
        model = self.extract_model(satmodel)
        return SolveOutcome(SAT, model, [qp])

    def check_combined(self) -> SolveOutcome:
        goal_clause = []
        for qp in self.query.properties:
            goal_clause.append(-self.cnf.literal_lits[qp.literal])
        if not goal_clause:
            return SolveOutcome(UNSAT)  # empty disjunction is false
        clauses = self.cnf.clauses + [goal_clause]
        t0 = time.monotonic()
        verdict, satmodel = solve_cnf(self.cnf.nvars, clauses,
                                      timeout_s=self.timeout_s)
        self.decide_seconds += time.monotonic() - t0
        if verdict != SAT:
            return SolveOutcome(verdict)
        model = self.extract_model(satmodel)
        false_lits = []
        for qp in self.query.properties:
            lit = self.cnf.literal_lits[qp.literal]
            if _lit_value(lit, satmodel) is False:
                false_lits.append(qp)
        return SolveOutcome(SAT, model, false_lits)

    # -------------------------------------------------------------- model
    def extract_model(self, satmodel: list[int]) -> Model:
        values: dict[Term, object] = {}
        for var, bits in self.cnf.var_bits.items():
            if isinstance(bits, int):
                values[var] = _lit_value(bits, satmodel)
            else:
                raw = 0
                for i, l in enumerate(bits):
                    if _lit_value(l, satmodel):
                        raw |= 1 << i
                values[var] = raw
        model = Model(values)
        arr_exp = self.red.expansion
        tup_exp = self.flat.expansion

        def resolve(node):
            if isinstance(node, dict):
                return {k: resolve(v) for k, v in node.items()}
            if isinstance(node, list):
                return {i: resolve(v) for i, v in enumerate(node)}
            if node in tup_exp:
                return resolve(tup_exp[node])
            if node in arr_exp:
                return resolve(arr_exp[node])
            if node in values:
                return values[node]
            if node.sort == T.BOOL_S:
                return False
            return 0

        names: set[Term] = set(tup_exp) | set(arr_exp) | set(values)
        for var in names:
            if var.kind == T.VAR and isinstance(var.attr, str):
                model.structured[var.attr] = resolve(var)
        return model

    def validate_model(self, model: Model) -> bool:
        """Every reduced definition and literal definition holds in the model."""
        env = dict(model.values)
        memo: dict = {}
        for lhs, rhs in self.red.query.defs:
            want = env.get(lhs)
            got = eval_term(rhs, env, memo)
            if want is None:
                env[lhs] = got
            elif want != got:
                return False
        for lit, clause in self.red.query.literal_defs:
            if env.get(lit) != eval_term(clause, env, memo):
                return False
        return True

    def dimacs(self) -> str:
        return self.cnf.to_dimacs()


def _lit_value(lit: int, satmodel: list[int]) -> bool:
    if abs(lit) == 1:
        return lit > 0
    if abs(lit) >= len(satmodel):
        return False  # variable absent from the instance: don't-care
    return (satmodel[abs(lit)] > 0) == (lit > 0)


def flatten_and_reduce(query: Query) -> Query:
    """The tuple-free, array-free form of a query (testing helper)."""
    return reduce_arrays(flatten_tuples(query).query).query
