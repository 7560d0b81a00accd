"""Bundled SMT-LIB2 solver for quantifier-free linear integer/real arithmetic.

A deliberately small fallback so the integer/real encoding stays decidable
when no full SMT solver is installed: boolean structure goes through the
CDCL core, conjunctions of linear atoms through an exact rational simplex
with branch-and-bound for integer variables.  Nonlinear atoms or unsupported
constructs yield "unknown".  Reads one script from a file argument or stdin.
"""
from __future__ import annotations

import re
import sys
from dataclasses import dataclass
from fractions import Fraction

from .cdcl import solve_cnf

NODE_LIMIT = 400
LOOP_LIMIT = 20000


class Unsupported(Exception):
    pass


# --------------------------------------------------------------------------
# S-expressions
# --------------------------------------------------------------------------

def tokenize(text: str) -> list[str]:
    text = re.sub(r";[^\n]*", "", text)
    return re.findall(r"\(|\)|[^\s()]+", text)


def parse_sexprs(tokens: list[str]):
    stack: list[list] = [[]]
    for tk in tokens:
        if tk == "(":
            stack.append([])
        elif tk == ")":
            done = stack.pop()
            stack[-1].append(done)
        else:
            stack[-1].append(tk)
    return stack[0]


# --------------------------------------------------------------------------
# Linear forms and constraints
# --------------------------------------------------------------------------

@dataclass(frozen=True)
class Lin:
    """Sum of coeff*var plus a constant."""

    coeffs: tuple[tuple[str, Fraction], ...]
    const: Fraction

    @staticmethod
    def of_const(c: Fraction) -> "Lin":
        return Lin((), c)

    @staticmethod
    def of_var(name: str) -> "Lin":
        return Lin(((name, Fraction(1)),), Fraction(0))

    def scale(self, k: Fraction) -> "Lin":
        if k == 0:
            return Lin((), Fraction(0))
        return Lin(tuple((v, c * k) for v, c in self.coeffs), self.const * k)

    def add(self, other: "Lin") -> "Lin":
        acc = dict(self.coeffs)
        for v, c in other.coeffs:
            acc[v] = acc.get(v, Fraction(0)) + c
        coeffs = tuple((v, c) for v, c in acc.items() if c != 0)
        return Lin(coeffs, self.const + other.const)

    def is_const(self) -> bool:
        return not self.coeffs


@dataclass(frozen=True)
class Constraint:
    """lin <= 0 (strict: lin < 0)."""

    lin: Lin
    strict: bool

    def negate(self) -> "Constraint":
        return Constraint(self.lin.scale(Fraction(-1)), not self.strict)


# --------------------------------------------------------------------------
# Exact simplex with infinitesimals for strict inequalities
# --------------------------------------------------------------------------

class Eps:
    """a + b*epsilon with lexicographic order."""

    __slots__ = ("a", "b")

    def __init__(self, a: Fraction, b: Fraction = Fraction(0)):
        self.a = Fraction(a)
        self.b = Fraction(b)

    def __add__(self, o):
        return Eps(self.a + o.a, self.b + o.b)

    def __sub__(self, o):
        return Eps(self.a - o.a, self.b - o.b)

    def scale(self, k: Fraction):
        return Eps(self.a * k, self.b * k)

    def __lt__(self, o):
        return (self.a, self.b) < (o.a, o.b)

    def __le__(self, o):
        return (self.a, self.b) <= (o.a, o.b)

    def __eq__(self, o):
        return (self.a, self.b) == (o.a, o.b)

    def __repr__(self):
        return f"Eps({self.a},{self.b})"


ZERO = Eps(Fraction(0))


class Simplex:
    """Feasibility of  A x <= b  with x free, exact arithmetic.

    Free variables are split into nonnegative pairs; a textbook two-phase
    dictionary simplex with Bland's rule decides feasibility.
    """

    def __init__(self, constraints: list[Constraint]):
        names: list[str] = []
        seen = {}
        for c in constraints:
            for v, _ in c.lin.coeffs:
                if v not in seen:
                    seen[v] = len(names)
                    names.append(v)
        self.names = names
        self.n = 2 * len(names)  # vp/vm pairs
        self.m = len(constraints)
        self.rows: list[dict[int, Fraction]] = []
        self.b: list[Eps] = []
        for c in constraints:
            row: dict[int, Fraction] = {}
            for v, coef in c.lin.coeffs:
                j = seen[v]
                row[2 * j] = row.get(2 * j, Fraction(0)) + coef
                row[2 * j + 1] = row.get(2 * j + 1, Fraction(0)) - coef
            self.rows.append(row)
            rhs = Eps(-c.lin.const, Fraction(-1) if c.strict else Fraction(0))
            self.b.append(rhs)

    def solve(self) -> dict[str, Eps] | None:
        n, m = self.n, self.m
        total = n + m  # structural + slack
        # dictionary: basic[i] is the variable of row i
        # row i:  basic_i = rhs_i - sum coef_ij * nonbasic_j
        basic = [n + i for i in range(m)]
        rhs = list(self.b)
        coef: list[dict[int, Fraction]] = [dict(r) for r in self.rows]
        AUX = total  # artificial variable for phase one

        def pivot(r: int, j: int):
            # nonbasic j enters, basic of row r leaves
            piv = coef[r].pop(j)
            leave = basic[r]
            row = {k: Fraction(v) / piv for k, v in coef[r].items()}
            row[leave] = Fraction(1) / piv
            new_rhs = rhs[r].scale(Fraction(1) / piv)
            for i in range(m):
                if i == r:
                    continue
                c = coef[i].pop(j, None)
                if c is None or c == 0:
                    continue
                for k, v in row.items():
                    coef[i][k] = coef[i].get(k, Fraction(0)) - c * v
                    if coef[i][k] == 0:
                        del coef[i][k]
                rhs[i] = rhs[i] - new_rhs.scale(c)
            coef[r] = row
            rhs[r] = new_rhs
            basic[r] = j

        if any(rhs[i] < ZERO for i in range(m)):
            # phase one: introduce an artificial variable and drive it to zero
            for i in range(m):
                coef[i][AUX] = Fraction(-1)
            r = min(range(m), key=lambda i: (rhs[i].a, rhs[i].b))
            pivot(r, AUX)
            while AUX in basic:
                rr = basic.index(AUX)
                if rhs[rr] == ZERO:
                    j = next((k for k in sorted(coef[rr])
                              if coef[rr][k] != 0), None)
                    if j is None:
                        basic[rr] = -1  # degenerate empty row
                    else:
                        pivot(rr, j)
                    break
                # Bland's rule: smallest index with a positive coefficient
                enter = next((k for k in sorted(coef[rr])
                              if coef[rr][k] > 0), None)
                if enter is None:
                    return None  # the artificial minimum is positive
                ratios = []
                for i in range(m):
                    c = coef[i].get(enter, Fraction(0))
                    if c > 0:
                        q = rhs[i].scale(Fraction(1) / c)
                        ratios.append((q.a, q.b, basic[i], i))
                r = min(ratios)[3]
                pivot(r, enter)
        values: dict[int, Eps] = {}
        for i in range(m):
            if basic[i] >= 0:
                values[basic[i]] = rhs[i]
        out: dict[str, Eps] = {}
        for idx, name in enumerate(self.names):
            vp = values.get(2 * idx, ZERO)
            vm = values.get(2 * idx + 1, ZERO)
            out[name] = vp - vm
        return out


def _check_point(constraints: list[Constraint], point: dict[str, Fraction]) -> bool:
    for c in constraints:
        val = c.lin.const
        for v, coef in c.lin.coeffs:
            val += coef * point.get(v, Fraction(0))
        if c.strict:
            if not val < 0:
                return False
        elif not val <= 0:
            return False
    return True


def _realize_epsilon(constraints: list[Constraint],
                     sol: dict[str, Eps]) -> dict[str, Fraction] | None:
    eps = Fraction(1)
    for _ in range(200):
        point = {v: e.a + e.b * eps for v, e in sol.items()}
        if _check_point(constraints, point):
            return point
        eps /= 16
    return None


# --------------------------------------------------------------------------
# Branch and bound for integer variables
# --------------------------------------------------------------------------

def feasible_mixed(constraints: list[Constraint], int_vars: set[str],
                   budget: list[int]) -> dict[str, Fraction] | None:
    budget[0] -= 1
    if budget[0] < 0:
        raise Unsupported("branch-and-bound node limit")
    sol = Simplex(constraints).solve()
    if sol is None:
        return None
    frac_var = None
    for v in sorted(int_vars):
        e = sol.get(v, ZERO)
        if e.a.denominator == 1 and e.b == 0:
            continue
        frac_var = v
        break
    if frac_var is None:
        point = _realize_epsilon(constraints, sol)
        if point is not None:
            for v in int_vars:
                point[v] = Fraction(int(point.get(v, Fraction(0))))
            if _check_point(constraints, point):
                return point
            # fall through to branching on a mismatch
        frac_var = next(iter(sorted(int_vars)), None)
        if frac_var is None or point is None:
            return point
    e = sol.get(frac_var, ZERO)
    if e.a.denominator != 1:
        k = e.a.numerator // e.a.denominator
    elif e.b > 0:
        k = int(e.a)
    else:
        k = int(e.a) - 1
    lo = Constraint(Lin.of_var(frac_var).add(Lin.of_const(Fraction(-k))), False)
    hi = Constraint(Lin.of_var(frac_var).scale(Fraction(-1))
                    .add(Lin.of_const(Fraction(k + 1))), False)
    got = feasible_mixed(constraints + [lo], int_vars, budget)
    if got is not None:
        return got
    return feasible_mixed(constraints + [hi], int_vars, budget)


# --------------------------------------------------------------------------
# Formula construction from s-expressions
# --------------------------------------------------------------------------

@dataclass
class Problem:
    sorts: dict[str, str]  # var -> "Int" | "Real" | "Bool"
    formulas: list  # boolean ast
    aux_counter: int = 0

    def fresh(self, sort: str, hint: str = "aux") -> str:
        self.aux_counter += 1
        name = f".{hint}.{self.aux_counter}"
        self.sorts[name] = sort
        return name


class Builder:
    """Translates assert bodies to a boolean AST over linear atoms."""

    def __init__(self, prob: Problem):
        self.p = prob
        self.side: list = []  # formulas added by term-level rewrites

    def formula(self, e) -> object:
        if isinstance(e, str):
            if e == "true":
                return True
            if e == "false":
                return False
            if self.p.sorts.get(e) == "Bool":
                return ("bvar", e)
            raise Unsupported(f"unknown boolean symbol {e}")
        if not isinstance(e, list) or not e:
            raise Unsupported(f"bad formula {e!r}")
        op = e[0]
        if op == "not":
            return ("not", self.formula(e[1]))
        if op in ("and", "or"):
            return (op, [self.formula(x) for x in e[1:]])
        if op == "=>":
            f = self.formula(e[-1])
            for x in reversed(e[1:-1]):
                f = ("or", [("not", self.formula(x)), f])
            return f
        if op == "xor":
            a, b = self.formula(e[1]), self.formula(e[2])
            return ("not", ("iff", a, b))
        if op == "ite":
            g = self.formula(e[1])
            a, b = self.formula(e[2]), self.formula(e[3])
            return ("and", [("or", [("not", g), a]), ("or", [g, b])])
        if op == "=":
            return self._equality(e[1:])
        if op == "distinct":
            eqs = []
            for i in range(1, len(e)):
                for j in range(i + 1, len(e)):
                    eqs.append(("not", self._equality([e[i], e[j]])))
            return ("and", eqs)
        if op in ("<", "<=", ">", ">="):
            a = self.term(e[1])
            b = self.term(e[2])
            if op == ">":
                a, b = b, a
                op = "<"
            elif op == ">=":
                a, b = b, a
                op = "<="
            lin = a.add(b.scale(Fraction(-1)))
            return ("atom", self._norm(Constraint(lin, op == "<")))
        raise Unsupported(f"operator {op!r}")

    def _equality(self, args) -> object:
        kinds = [self._kind(x) for x in args]
        if all(k == "bool" for k in kinds):
            f = True
            prev = self.formula(args[0])
            for x in args[1:]:
                cur = self.formula(x)
                f = ("and", [f, ("iff", prev, cur)]) if f is not True \
                    else ("iff", prev, cur)
                prev = cur
            return f
        a = self.term(args[0])
        out = []
        for x in args[1:]:
            b = self.term(x)
            d = a.add(b.scale(Fraction(-1)))
            out.append(("and", [("atom", self._norm(Constraint(d, False))),
                                ("atom", self._norm(
                                    Constraint(d.scale(Fraction(-1)), False)))]))
            a = b
        return ("and", out) if len(out) > 1 else out[0]

    def _kind(self, e) -> str:
        if isinstance(e, str):
            s = self.p.sorts.get(e)
            if s == "Bool":
                return "bool"
            if e in ("true", "false"):
                return "bool"
            return "num"
        if isinstance(e, list) and e and e[0] in ("not", "and", "or", "=>",
                                                  "<", "<=", ">", ">="):
            return "bool"
        if isinstance(e, list) and e and e[0] == "ite":
            return self._kind(e[2])
        if isinstance(e, list) and e and e[0] == "=":
            return "bool"
        return "num"

    def _int_only(self, c: Constraint) -> bool:
        return all(self.p.sorts.get(v, "Int") == "Int" for v, _ in c.lin.coeffs)

    def _norm(self, c: Constraint) -> Constraint:
        """Scale to integer coefficients; rewrite strict over ints."""
        if not self._int_only(c):
            return c
        denoms = [x.denominator for _, x in c.lin.coeffs] + [c.lin.const.denominator]
        scale = 1
        for d in denoms:
            scale = scale * d // _gcd(scale, d)
        lin = c.lin.scale(Fraction(scale))
        if c.strict:
            lin = lin.add(Lin.of_const(Fraction(1)))
        return Constraint(lin, False)

    # ---------------------------------------------------------------- terms
    def term(self, e) -> Lin:
        if isinstance(e, str):
            if re.fullmatch(r"\d+", e):
                return Lin.of_const(Fraction(e))
            if re.fullmatch(r"\d+\.\d*", e):
                return Lin.of_const(Fraction(e))
            s = self.p.sorts.get(e)
            if s in ("Int", "Real"):
                return Lin.of_var(e)
            raise Unsupported(f"unknown symbol {e}")
        if not isinstance(e, list) or not e:
            raise Unsupported(f"bad term {e!r}")
        op = e[0]
        if op == "+":
            acc = self.term(e[1])
            for x in e[2:]:
                acc = acc.add(self.term(x))
            return acc
        if op == "-":
            if len(e) == 2:
                return self.term(e[1]).scale(Fraction(-1))
            acc = self.term(e[1])
            for x in e[2:]:
                acc = acc.add(self.term(x).scale(Fraction(-1)))
            return acc
        if op == "*":
            a, b = self.term(e[1]), self.term(e[2])
            if a.is_const():
                return b.scale(a.const)
            if b.is_const():
                return a.scale(b.const)
            raise Unsupported("nonlinear multiplication")
        if op == "/":
            a, b = self.term(e[1]), self.term(e[2])
            if b.is_const() and b.const != 0:
                return a.scale(Fraction(1) / b.const)
            raise Unsupported("division by a non-constant")
        if op == "to_real":
            return self.term(e[1])
        if op == "to_int":
            x = self.term(e[1])
            t = self.p.fresh("Int", "floor")
            tv = Lin.of_var(t)
            # t <= x < t + 1
            self.side.append(("atom", self._norm(
                Constraint(tv.add(x.scale(Fraction(-1))), False))))
            self.side.append(("atom", Constraint(
                x.add(tv.scale(Fraction(-1))).add(Lin.of_const(Fraction(-1))),
                True)))
            return tv
        if op == "ite":
            g = self.formula(e[1])
            a, b = self.term(e[2]), self.term(e[3])
            sort = "Real" if any(
                self.p.sorts.get(v) == "Real"
                for t in (a, b) for v, _ in t.coeffs) else "Int"
            t = self.p.fresh(sort, "ite")
            tv = Lin.of_var(t)
            eq_a = self._eq_formula(tv, a)
            eq_b = self._eq_formula(tv, b)
            self.side.append(("or", [("not", g), eq_a]))
            self.side.append(("or", [g, eq_b]))
            return tv
        if op == "abs":
            x = self.term(e[1])
            sort = "Real" if any(self.p.sorts.get(v) == "Real"
                                 for v, _ in x.coeffs) else "Int"
            t = self.p.fresh(sort, "abs")
            tv = Lin.of_var(t)
            neg = x.scale(Fraction(-1))
            self.side.append(("or", [
                ("and", [self._eq_formula(tv, x),
                         ("atom", self._norm(Constraint(neg, False)))]),
                ("and", [self._eq_formula(tv, neg),
                         ("atom", self._norm(Constraint(x, False)))])]))
            return tv
        raise Unsupported(f"term operator {op!r}")

    def _eq_formula(self, a: Lin, b: Lin) -> object:
        d = a.add(b.scale(Fraction(-1)))
        return ("and", [("atom", self._norm(Constraint(d, False))),
                        ("atom", self._norm(Constraint(d.scale(Fraction(-1)),
                                                       False)))])


def _gcd(a: int, b: int) -> int:
    while b:
        a, b = b, a % b
    return a


# --------------------------------------------------------------------------
# CNF abstraction of the boolean skeleton
# --------------------------------------------------------------------------

class Abstraction:
    def __init__(self):
        self.nvars = 1
        self.clauses: list[list[int]] = [[1]]
        self.atom_lit: dict[Constraint, int] = {}
        self.bvar_lit: dict[str, int] = {}
        self.gate: dict[tuple, int] = {}

    def new(self) -> int:
        self.nvars += 1
        return self.nvars

    def lit_of_atom(self, c: Constraint) -> int:
        hit = self.atom_lit.get(c)
        if hit is None:
            neg = c.negate()
            if neg in self.atom_lit:
                return -self.atom_lit[neg]
            hit = self.new()
            self.atom_lit[c] = hit
        return hit

    def cnf(self, f) -> int:
        if f is True:
            return 1
        if f is False:
            return -1
        tag = f[0]
        if tag == "bvar":
            name = f[1]
            if name not in self.bvar_lit:
                self.bvar_lit[name] = self.new()
            return self.bvar_lit[name]
        if tag == "atom":
            return self.lit_of_atom(f[1])
        if tag == "not":
            return -self.cnf(f[1])
        if tag in ("and", "or"):
            lits = [self.cnf(x) for x in f[1]]
            if tag == "and":
                acc = 1
                for l in lits:
                    acc = self._g_and(acc, l)
                return acc
            acc = -1
            for l in lits:
                acc = -self._g_and(-acc, -l)
            return acc
        if tag == "iff":
            a, b = self.cnf(f[1]), self.cnf(f[2])
            return self._g_iff(a, b)
        raise Unsupported(f"skeleton {tag}")

    def _g_and(self, a: int, b: int) -> int:
        if a == -1 or b == -1:
            return -1
        if a == 1:
            return b
        if b == 1:
            return a
        if a == b:
            return a
        if a == -b:
            return -1
        key = ("and", min(a, b), max(a, b))
        if key in self.gate:
            return self.gate[key]
        o = self.new()
        self.clauses += [[-o, a], [-o, b], [o, -a, -b]]
        self.gate[key] = o
        return o

    def _g_iff(self, a: int, b: int) -> int:
        if a == 1:
            return b
        if a == -1:
            return -b
        if b == 1:
            return a
        if b == -1:
            return -a
        if a == b:
            return 1
        if a == -b:
            return -1
        key = ("iff", min(a, b), max(a, b))
        if key in self.gate:
            return self.gate[key]
        o = self.new()
        self.clauses += [[-o, a, -b], [-o, -a, b], [o, a, b], [o, -a, -b]]
        self.gate[key] = o
        return o


# --------------------------------------------------------------------------
# The lazy SMT loop
# --------------------------------------------------------------------------

def decide(prob: Problem) -> tuple[str, dict[str, Fraction] | None, dict[str, bool]]:
    ab = Abstraction()
    roots = [ab.cnf(f) for f in prob.formulas]
    for r in roots:
        ab.clauses.append([r])
    int_vars = {v for v, s in prob.sorts.items() if s == "Int"}
    atoms = list(ab.atom_lit.items())
    for _ in range(LOOP_LIMIT):
        verdict, model = solve_cnf(ab.nvars, ab.clauses)
        if verdict == "unsat":
            return "unsat", None, {}
        if verdict != "sat":
            return "unknown", None, {}
        active: list[Constraint] = []
        involved: list[int] = []
        for c, lit in atoms:
            if model[lit] > 0:
                active.append(c)
                involved.append(-lit)
            else:
                active.append(Builder(prob)._norm(c.negate()))
                involved.append(lit)
        try:
            point = feasible_mixed(active, int_vars, [NODE_LIMIT])
        except Unsupported:
            return "unknown", None, {}
        if point is not None:
            bools = {name: model[lit] > 0 for name, lit in ab.bvar_lit.items()}
            return "sat", point, bools
        if not involved:
            return "sat", {}, {name: model[lit] > 0
                               for name, lit in ab.bvar_lit.items()}
        ab.clauses.append(involved)
    return "unknown", None, {}


# --------------------------------------------------------------------------
# Script interpreter
# --------------------------------------------------------------------------

def run_script(text: str, out) -> int:
    try:
        exprs = parse_sexprs(tokenize(text))
    except Exception:
        print("error", file=out)
        return 1
    prob = Problem({}, [])
    status: str | None = None
    point: dict[str, Fraction] | None = None
    bools: dict[str, bool] = {}
    for e in exprs:
        if not isinstance(e, list) or not e:
            continue
        cmd = e[0]
        if cmd in ("set-logic", "set-option", "set-info"):
            continue
        if cmd in ("declare-fun", "declare-const"):
            name = e[1]
            sort = e[-1]
            if isinstance(sort, list):
                print("unknown", file=out)
                return 0
            if sort not in ("Int", "Real", "Bool"):
                print("unknown", file=out)
                return 0
            prob.sorts[name] = sort
        elif cmd == "assert":
            b = Builder(prob)
            try:
                f = b.formula(e[1])
            except Unsupported:
                print("unknown", file=out)
                return 0
            prob.formulas.append(f)
            prob.formulas.extend(b.side)
        elif cmd == "check-sat":
            try:
                status, point, bools = decide(prob)
            except (Unsupported, RecursionError):
                status = "unknown"
            print(status, file=out)
        elif cmd == "get-model":
            if status != "sat":
                print('(error "model is not available")', file=out)
                continue
            lines = ["("]
            for name, sort in prob.sorts.items():
                if name.startswith("."):
                    continue
                if sort == "Bool":
                    val = "true" if bools.get(name) else "false"
                    lines.append(f"  (define-fun {name} () Bool {val})")
                else:
                    v = (point or {}).get(name, Fraction(0))
                    lines.append(f"  (define-fun {name} () {sort} {_fmt(v, sort)})")
            lines.append(")")
            print("\n".join(lines), file=out)
        elif cmd == "exit":
            break
    return 0


def _fmt(v: Fraction, sort: str) -> str:
    if sort == "Int":
        n = int(v)
        return str(n) if n >= 0 else f"(- {-n})"
    if v.denominator == 1:
        s = f"{abs(v.numerator)}.0"
    else:
        s = f"(/ {abs(v.numerator)}.0 {v.denominator}.0)"
    return s if v >= 0 else f"(- {s})"


def main(argv: list[str] | None = None) -> int:
    argv = sys.argv[1:] if argv is None else argv
    if argv:
        with open(argv[0], "r", encoding="utf-8") as f:
            text = f.read()
    else:
        text = sys.stdin.read()
    return run_script(text, sys.stdout)


if __name__ == "__main__":
    sys.exit(main())
