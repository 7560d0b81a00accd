"""Independent oracles for the acceptance suite.

The concrete interpreter executes scalar MiniC programs directly over
two's-complement integers at a configurable width, enumerating every nondet
input valuation, with the same loop-bound semantics the checker encodes
(an execution still looping after k iterations trips the unwinding check
and stops).  It shares only the frontend with the checker; evaluation is a
separate recursive implementation.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product

from minibmc.ast import (
    Assign, AssertStmt, AssumeStmt, Binary, Block, Cast, Conditional,
    DeclStmt, DoWhile, Expr, ExprStmt, For, FuncDef, Ident, If, IntLit,
    Nondet, ProgramAst, Return, Stmt, Unary, While,
)
from minibmc.errors import SourceUnit
from minibmc.parser import parse
from minibmc.typecheck import typecheck
from minibmc.typeinfo import Widths


def _wrap(v: int, w: int) -> int:
    v &= (1 << w) - 1
    return v - (1 << w) if v >> (w - 1) else v


@dataclass
class Violation:
    kind: str
    line: int


class _StopRun(Exception):
    """Assumption failed or bound exhausted: the path ends here."""


@dataclass
class OracleRun:
    width: int
    bound: int
    inputs: list[int]
    violations: list[Violation] = field(default_factory=list)
    _next_input: int = 0

    def take_input(self) -> int:
        v = self.inputs[self._next_input]
        self._next_input += 1
        return v


class Interpreter:
    def __init__(self, ast: ProgramAst, width: int, bound: int):
        self.ast = ast
        self.width = width
        self.bound = bound
        self.main: FuncDef = ast.functions()["main"]

    def count_nondets(self) -> int:
        n = 0

        def walk(e):
            nonlocal n
            if isinstance(e, Nondet):
                n += 1
            for f in ("operand", "left", "right", "cond", "then", "els"):
                sub = getattr(e, f, None)
                if isinstance(sub, Expr):
                    walk(sub)

        def stmts(s):
            if isinstance(s, Block):
                for x in s.stmts:
                    stmts(x)
            elif isinstance(s, DeclStmt):
                for vd in s.decls:
                    if isinstance(vd.init, Expr):
                        walk(vd.init)
            elif isinstance(s, Assign):
                walk(s.rhs)
            elif isinstance(s, (AssertStmt, AssumeStmt)):
                walk(s.cond)
            elif isinstance(s, If):
                walk(s.cond)
                stmts(s.then)
                if s.els:
                    stmts(s.els)
            elif isinstance(s, (While, DoWhile)):
                walk(s.cond)
                stmts(s.body)
            elif isinstance(s, For):
                if s.init:
                    stmts(s.init)
                if s.cond is not None:
                    walk(s.cond)
                if s.step:
                    stmts(s.step)
                stmts(s.body)

        stmts(self.main.body)
        return n

    # ------------------------------------------------------------- running
    def run_all(self) -> set[tuple[str, int]]:
        """Union of violations over every input valuation."""
        n = self.count_nondets()
        w = self.width
        domain = range(-(1 << (w - 1)), 1 << (w - 1))
        out: set[tuple[str, int]] = set()
        for inputs in product(domain, repeat=n):
            run = OracleRun(w, self.bound, list(inputs))
            try:
                self.exec_stmt(self.main.body, {}, run)
            except _StopRun:
                pass
            for v in run.violations:
                out.add((v.kind, v.line))
        return out

    def exec_stmt(self, s: Stmt, env: dict[str, int], run: OracleRun):
        if isinstance(s, Block):
            for x in s.stmts:
                self.exec_stmt(x, env, run)
        elif isinstance(s, DeclStmt):
            for vd in s.decls:
                env[vd.symbol] = 0 if vd.init is None else \
                    self.eval(vd.init, env, run)
        elif isinstance(s, Assign):
            assert isinstance(s.lhs, Ident)
            env[s.lhs.symbol] = self.eval(s.rhs, env, run)
        elif isinstance(s, ExprStmt):
            self.eval(s.expr, env, run)
        elif isinstance(s, If):
            if self.eval(s.cond, env, run):
                self.exec_stmt(s.then, env, run)
            elif s.els is not None:
                self.exec_stmt(s.els, env, run)
        elif isinstance(s, While):
            self._loop(s.cond, s.body, None, env, run, s.loc.line)
        elif isinstance(s, DoWhile):
            self.exec_stmt(s.body, env, run)
            self._loop(s.cond, s.body, None, env, run, s.loc.line)
        elif isinstance(s, For):
            if s.init is not None:
                self.exec_stmt(s.init, env, run)
            cond = s.cond if s.cond is not None else IntLit(1)
            self._loop(cond, s.body, s.step, env, run, s.loc.line)
        elif isinstance(s, AssertStmt):
            if not self.eval(s.cond, env, run):
                run.violations.append(Violation("user-assertion", s.loc.line))
        elif isinstance(s, AssumeStmt):
            if not self.eval(s.cond, env, run):
                raise _StopRun()
        elif isinstance(s, Return):
            pass
        else:
            raise AssertionError(f"oracle cannot run {s!r}")

    def _loop(self, cond, body, step, env, run: OracleRun, line: int):
        iterations = 0
        while True:
            if not self.eval(cond, env, run):
                return
            if iterations >= run.bound:
                run.violations.append(Violation("unwinding", line))
                raise _StopRun()
            self.exec_stmt(body, env, run)
            if step is not None:
                self.exec_stmt(step, env, run)
            iterations += 1

    # ---------------------------------------------------------- expressions
    def eval(self, e: Expr, env: dict[str, int], run: OracleRun) -> int:
        w = run.width
        if isinstance(e, IntLit):
            return _wrap(e.value, w)
        if isinstance(e, Ident):
            return env[e.symbol]
        if isinstance(e, Nondet):
            return _wrap(run.take_input(), w)
        if isinstance(e, Cast):
            v = self.eval(e.operand, env, run)
            if e.ty is not None and e.ty.kind == "bool":
                return 1 if v != 0 else 0
            return _wrap(v, w)
        if isinstance(e, Unary):
            v = self.eval(e.operand, env, run)
            if e.op == "-":
                return _wrap(-v, w)
            if e.op == "~":
                return _wrap(~v, w)
            if e.op == "!":
                return 0 if v else 1
            raise AssertionError(e.op)
        if isinstance(e, Binary):
            if e.op == "&&":
                return 1 if (self.eval(e.left, env, run)
                             and self.eval(e.right, env, run)) else 0
            if e.op == "||":
                return 1 if (self.eval(e.left, env, run)
                             or self.eval(e.right, env, run)) else 0
            a = self.eval(e.left, env, run)
            b = self.eval(e.right, env, run)
            if e.op == "+":
                return _wrap(a + b, w)
            if e.op == "-":
                return _wrap(a - b, w)
            if e.op == "*":
                return _wrap(a * b, w)
            if e.op == "==":
                return int(a == b)
            if e.op == "!=":
                return int(a != b)
            if e.op == "<":
                return int(a < b)
            if e.op == "<=":
                return int(a <= b)
            if e.op == ">":
                return int(a > b)
            if e.op == ">=":
                return int(a >= b)
            if e.op == "&":
                return _wrap(a & b, w)
            if e.op == "|":
                return _wrap(a | b, w)
            if e.op == "^":
                return _wrap(a ^ b, w)
            raise AssertionError(e.op)
        if isinstance(e, Conditional):
            return self.eval(e.then if self.eval(e.cond, env, run) else e.els,
                             env, run)
        raise AssertionError(f"oracle cannot evaluate {e!r}")


def oracle_verdicts(source: str, width: int, bound: int) -> set[tuple[str, int]]:
    widths = Widths(char=width, short=width, int_=width, long=width)
    ast = typecheck(parse(SourceUnit("<oracle>", source)), widths)
    return Interpreter(ast, width, bound).run_all()


# --------------------------------------------------------------------------
# Random scalar program generator
# --------------------------------------------------------------------------

class ProgramGen:
    """Seeded generator of small scalar programs: at most three 4-bit
    variables, at most two nondet inputs, and a handful of statements."""

    def __init__(self, seed: int, max_vars: int = 3, max_stmts: int = 8):
        self.rng = random.Random(seed)
        self.vars = ["x", "y", "z"][: self.rng.randint(2, max_vars)]
        self.max_stmts = max_stmts
        self.nondets_left = 2

    def expr(self, depth: int = 0) -> str:
        r = self.rng.random()
        if depth >= 2 or r < 0.45:
            if self.rng.random() < 0.55:
                return self.rng.choice(self.vars)
            return str(self.rng.randint(-7, 7))
        op = self.rng.choice(["+", "-", "*", "+", "-"])
        return f"({self.expr(depth + 1)} {op} {self.expr(depth + 1)})"

    def cond(self, depth: int = 0) -> str:
        r = self.rng.random()
        if depth < 1 and r < 0.25:
            a, b = self.cond(depth + 1), self.cond(depth + 1)
            op = self.rng.choice(["&&", "||"])
            return f"({a} {op} {b})"
        op = self.rng.choice(["<", "<=", "==", "!=", ">", ">="])
        return f"({self.expr(1)} {op} {self.expr(1)})"

    def stmt(self, budget: int, depth: int) -> tuple[str, int]:
        r = self.rng.random()
        v = self.rng.choice(self.vars)
        if budget <= 1 or depth >= 2 or r < 0.40:
            # nondet inputs only at the top level so every run consumes the
            # same input vector shape as the encoder's free variables
            if depth == 0 and self.nondets_left > 0 and self.rng.random() < 0.3:
                self.nondets_left -= 1
                return f"{v} = nondet_int();", 1
            return f"{v} = {self.expr()};", 1
        if r < 0.60:
            body, used = self.block(budget - 1, depth + 1)
            if self.rng.random() < 0.4:
                els, used2 = self.block(budget - 1 - used, depth + 1)
                return (f"if ({self.cond()}) {{\n{body}\n}} else {{\n{els}\n}}",
                        1 + used + used2)
            return f"if ({self.cond()}) {{\n{body}\n}}", 1 + used
        if r < 0.75:
            i = self.rng.choice(self.vars)
            n = self.rng.randint(1, 3)
            body, used = self.block(max(1, budget - 2), depth + 1)
            return (f"{i} = 0;\nwhile ({i} < {n}) {{\n{body}\n{i} = {i} + 1;\n}}",
                    2 + used)
        if r < 0.88:
            return f"assert({self.cond()});", 1
        return f"assume({self.cond()});", 1

    def block(self, budget: int, depth: int) -> tuple[str, int]:
        out = []
        used = 0
        n = self.rng.randint(1, max(1, min(3, budget)))
        for _ in range(n):
            if used >= budget:
                break
            s, u = self.stmt(budget - used, depth)
            out.append(s)
            used += u
        return "\n".join(out), used

    def generate(self) -> str:
        decls = f"int {', '.join(self.vars)};"
        inits = "\n".join(f"{v} = {self.rng.randint(-7, 7)};" for v in self.vars)
        body, _ = self.block(self.max_stmts - 2, 0)
        final = f"assert({self.cond()});"
        return f"int main() {{\n{decls}\n{inits}\n{body}\n{final}\n}}"
