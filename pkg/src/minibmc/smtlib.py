"""SMT-LIB2 emission and the external solver process interface.

Tuples are flattened exactly as for the built-in solver; arrays use the
native theory of arrays.  Emission is deterministic: identical queries
produce byte-identical scripts.  The external side is a generic process
interface — any solver speaking SMT-LIB2 over files/stdin works; solver
specifics are confined to the command template.
"""
from __future__ import annotations

import os
import re
import shlex
import subprocess
import tempfile
from dataclasses import dataclass, field
from fractions import Fraction

from . import terms as T
from .encode import BITVECTOR, INTEGER_REAL
from .errors import Diagnostic, DiagnosticsError, InternalError
from .flatten import flatten_tuples
from .solver import Model
from .terms import Term
from .vcgen import Query, QueryProperty

_SIMPLE = re.compile(r"[A-Za-z~!@$%^&*_+=<>.?/-][A-Za-z0-9~!@$%^&*_+=<>.?/-]*$")


@dataclass
class SmtScript:
    logic: str
    text: str
    name_map: dict[str, Term] = field(default_factory=dict)  # smt name -> var


class _Namer:
    def __init__(self):
        self.by_term: dict[Term, str] = {}
        self.taken: dict[str, Term] = {}

    def name(self, v: Term) -> str:
        hit = self.by_term.get(v)
        if hit is not None:
            return hit
        base = str(v.attr).replace("::", ".").replace("#", ".")
        base = base.replace("$", "_").replace("~", ".").replace("@", ".")
        if not _SIMPLE.match(base):
            base = "v_" + "".join(c if c.isalnum() else "_" for c in base)
        name = base
        n = 1
        while name in self.taken:
            n += 1
            name = f"{base}.{n}"
        self.taken[name] = v
        self.by_term[v] = name
        return name


class Emitter:
    def __init__(self, mode: str, logic: str | None = None):
        self.mode = mode
        self.logic_override = logic
        self.namer = _Namer()
        self.decls: list[str] = []
        self.declared: set[Term] = set()
        self.asserts: list[str] = []
        self.aux_defs: list[str] = []
        self.divrem: dict[tuple[int, int], tuple[str, str]] = {}
        self.nonlinear = False
        self._aux_n = 0

    # ------------------------------------------------------------- sorts
    def sort(self, s: T.Sort) -> str:
        if isinstance(s, T.BoolSort):
            return "Bool"
        if isinstance(s, T.BvSort):
            return f"(_ BitVec {s.width})"
        if isinstance(s, T.IntSort):
            return "Int"
        if isinstance(s, T.RealSort):
            return "Real"
        if isinstance(s, T.ArraySort):
            return f"(Array {self.sort(s.index)} {self.sort(s.element)})"
        raise InternalError(f"no SMT-LIB sort for {s}")

    def declare(self, v: Term):
        if v in self.declared:
            return
        self.declared.add(v)
        self.decls.append(f"(declare-fun {self.namer.name(v)} () {self.sort(v.sort)})")

    def fresh_aux(self, sort: T.Sort, hint: str) -> str:
        self._aux_n += 1
        name = f".{hint}{self._aux_n}"
        self.decls.append(f"(declare-fun {name} () {self.sort(sort)})")
        return name

    # -------------------------------------------------------------- terms
    def emit(self, t: Term) -> str:
        k = t.kind
        if k == T.CONST:
            return self._const(t)
        if k == T.VAR:
            self.declare(t)
            return self.namer.name(t)
        if k == T.NOT:
            return f"(not {self.emit(t.args[0])})"
        if k in (T.AND, T.OR, T.XOR, T.IMPLIES, T.IFF):
            op = {T.AND: "and", T.OR: "or", T.XOR: "xor",
                  T.IMPLIES: "=>", T.IFF: "="}[k]
            return f"({op} {self.emit(t.args[0])} {self.emit(t.args[1])})"
        if k == T.EQ:
            return f"(= {self.emit(t.args[0])} {self.emit(t.args[1])})"
        if k in (T.LT, T.LE):
            return self._relation(t)
        if k == T.ITE:
            g, a, b = (self.emit(x) for x in t.args)
            return f"(ite {g} {a} {b})"
        if k in (T.SELECT, T.STORE):
            op = "select" if k == T.SELECT else "store"
            inner = " ".join(self.emit(x) for x in t.args)
            return f"({op} {inner})"
        if isinstance(t.sort, T.BvSort) or \
                (t.args and isinstance(t.args[0].sort, T.BvSort)):
            return self._bv_term(t)
        return self._numeric_term(t)

    def _const(self, t: Term) -> str:
        if t.sort == T.BOOL_S:
            return "true" if t.attr else "false"
        if isinstance(t.sort, T.BvSort):
            return f"(_ bv{t.attr} {t.sort.width})"
        if isinstance(t.sort, T.IntSort):
            return str(t.attr) if t.attr >= 0 else f"(- {-t.attr})"
        v: Fraction = t.attr
        num = str(abs(v.numerator)) + ".0"
        s = num if v.denominator == 1 else \
            f"(/ {abs(v.numerator)}.0 {v.denominator}.0)"
        return s if v >= 0 else f"(- {s})"

    def _relation(self, t: Term) -> str:
        a, b = t.args
        sa, sb = self.emit(a), self.emit(b)
        if isinstance(a.sort, T.BvSort):
            op = {(T.LT, True): "bvslt", (T.LT, False): "bvult",
                  (T.LE, True): "bvsle", (T.LE, False): "bvule"}[(t.kind, t.attr)]
        else:
            op = "<" if t.kind == T.LT else "<="
        return f"({op} {sa} {sb})"

    def _bv_term(self, t: Term) -> str:
        k = t.kind
        args = [self.emit(x) for x in t.args]
        simple = {T.ADD: "bvadd", T.SUB: "bvsub", T.MUL: "bvmul", T.NEG: "bvneg",
                  T.BVAND: "bvand", T.BVOR: "bvor", T.BVXOR: "bvxor",
                  T.BVNOT: "bvnot", T.SHL: "bvshl", T.LSHR: "bvlshr",
                  T.ASHR: "bvashr", T.CONCAT: "concat"}
        if k in simple:
            return f"({simple[k]} {' '.join(args)})"
        if k == T.DIV:
            return f"({'bvsdiv' if t.attr else 'bvudiv'} {args[0]} {args[1]})"
        if k == T.REM:
            return f"({'bvsrem' if t.attr else 'bvurem'} {args[0]} {args[1]})"
        if k == T.EXTRACT:
            hi, lo = t.attr
            return f"((_ extract {hi} {lo}) {args[0]})"
        if k == T.SEXT:
            return f"((_ sign_extend {t.attr}) {args[0]})"
        if k == T.ZEXT:
            return f"((_ zero_extend {t.attr}) {args[0]})"
        raise InternalError(f"no SMT-LIB rendering for {k}")

    def _numeric_term(self, t: Term) -> str:
        k = t.kind
        if k in (T.ADD, T.SUB, T.MUL):
            a, b = t.args
            if k == T.MUL and not (T.is_const(a) or T.is_const(b)):
                self.nonlinear = True
            op = {T.ADD: "+", T.SUB: "-", T.MUL: "*"}[k]
            return f"({op} {self.emit(a)} {self.emit(b)})"
        if k == T.NEG:
            return f"(- {self.emit(t.args[0])})"
        if k in (T.DIV, T.REM):
            return self._divrem(t)
        if k == T.TO_REAL:
            return f"(to_real {self.emit(t.args[0])})"
        if k == T.TO_INT:
            x = self.emit(t.args[0])
            return (f"(ite (>= {x} 0.0) (to_int {x}) (- (to_int (- {x}))))")
        if k in (T.BVAND, T.BVOR, T.BVXOR, T.BVNOT, T.SHL, T.LSHR, T.ASHR,
                 T.CONCAT, T.EXTRACT, T.SEXT, T.ZEXT):
            raise DiagnosticsError([Diagnostic(
                "unsupported", "bit-level operator reached the integer/real "
                "encoding; use the bit-vector mode")])
        raise InternalError(f"no SMT-LIB rendering for {k}")

    def _divrem(self, t: Term) -> str:
        """C-style truncated division via auxiliary symbols and axioms."""
        if isinstance(t.sort, T.RealSort):
            return f"(/ {self.emit(t.args[0])} {self.emit(t.args[1])})"
        x, y = t.args
        key = (x.serial, y.serial)
        names = self.divrem.get(key)
        if names is None:
            q = self.fresh_aux(T.INT_S, "q")
            r = self.fresh_aux(T.INT_S, "r")
            sx, sy = self.emit(x), self.emit(y)
            self.nonlinear = True
            absr = f"(ite (< {r} 0) (- {r}) {r})"
            absy = f"(ite (< {sy} 0) (- {sy}) {sy})"
            self.aux_defs.append(
                f"(assert (=> (distinct {sy} 0) "
                f"(and (= {sx} (+ (* {q} {sy}) {r})) "
                f"(< {absr} {absy}) "
                f"(or (= {r} 0) (= (< {r} 0) (< {sx} 0))))))")
            names = (q, r)
            self.divrem[key] = names
        return names[0] if t.kind == T.DIV else names[1]

    # ------------------------------------------------------------- script
    def logic_name(self, has_arrays: bool, has_real: bool) -> str:
        if self.logic_override:
            return self.logic_override
        if self.mode == BITVECTOR:
            return "QF_AUFBV"
        if self.nonlinear:
            return "QF_AUFNIRA" if has_real else "QF_AUFNIA"
        return "QF_AUFLIRA" if (has_real or has_arrays) else "QF_LIA"


def emit(q: Query, mode: str, logic: str | None = None,
         goal: Term | None = None, produce_model: bool = True) -> SmtScript:
    """Render a query as SMT-LIB2 text; deterministic for identical inputs."""
    flat = flatten_tuples(q).query
    em = Emitter(mode, logic)
    body: list[str] = []
    for lhs, rhs in flat.defs:
        em.declare(lhs)
        body.append(f"(assert (= {em.namer.name(lhs)} {em.emit(rhs)}))")
    for lvar, clause in flat.literal_defs:
        em.declare(lvar)
        body.append(f"(assert (= {em.namer.name(lvar)} {em.emit(clause)}))")
    body.append(f"(assert {em.emit(goal if goal is not None else flat.goal)})")
    has_arrays = any(isinstance(v.sort, T.ArraySort) for v in em.declared)
    has_real = any(isinstance(v.sort, T.RealSort) for v in em.declared)
    lines = [f"(set-logic {em.logic_name(has_arrays, has_real)})"]
    if produce_model:
        lines.append("(set-option :produce-models true)")
    lines.extend(em.decls)
    lines.extend(em.aux_defs)
    lines.extend(body)
    lines.append("(check-sat)")
    if produce_model:
        lines.append("(get-model)")
    lines.append("(exit)")
    name_map = {name: var for var, name in em.namer.by_term.items()}
    return SmtScript(lines[0], "\n".join(lines) + "\n", name_map)


# --------------------------------------------------------------------------
# External process interface
# --------------------------------------------------------------------------

@dataclass
class ExternalResult:
    status: str  # "sat" | "unsat" | "unknown" | "timeout" | "error"
    model: Model | None = None
    detail: str = ""


def run_external(script: SmtScript, command: str,
                 timeout_s: float | None = None) -> ExternalResult:
    with tempfile.NamedTemporaryFile("w", suffix=".smt2", delete=False) as f:
        f.write(script.text)
        path = f.name
    try:
        argv = shlex.split(command)
        if any("{file}" in a for a in argv):
            argv = [a.replace("{file}", path) for a in argv]
        else:
            argv = argv + [path]
        try:
            proc = subprocess.run(argv, capture_output=True, text=True,
                                  timeout=timeout_s)
        except FileNotFoundError:
            return ExternalResult("error", detail=f"solver not found: {argv[0]}")
        except subprocess.TimeoutExpired:
            return ExternalResult("timeout")
        out = proc.stdout
        verdict = None
        for line in out.splitlines():
            line = line.strip()
            if line in ("sat", "unsat", "unknown"):
                verdict = line
                break
        if verdict is None:
            return ExternalResult(
                "error", detail=f"unparseable solver output: "
                f"{out[:200]!r} {proc.stderr[:200]!r}")
        if verdict != "sat":
            return ExternalResult(verdict)
        model = parse_model(out, script)
        return ExternalResult("sat", model)
    finally:
        os.unlink(path)


# ------------------------------- model parsing ------------------------------

def _tokenize_sexpr(text: str) -> list[str]:
    return re.findall(r"\(|\)|[^\s()]+", text)


def _parse_sexprs(tokens: list[str], i: int = 0):
    out = []
    while i < len(tokens):
        tk = tokens[i]
        if tk == "(":
            inner, i = _parse_sexprs(tokens, i + 1)
            out.append(inner)
        elif tk == ")":
            return out, i + 1
        else:
            out.append(tk)
            i += 1
    return out, i


def _value_of_sexpr(v):
    if isinstance(v, str):
        if v.startswith("#b"):
            return int(v[2:], 2)
        if v.startswith("#x"):
            return int(v[2:], 16)
        if v == "true":
            return True
        if v == "false":
            return False
        if re.fullmatch(r"-?\d+", v):
            return int(v)
        if re.fullmatch(r"-?\d+\.\d*", v):
            return Fraction(v)
        return None
    if isinstance(v, list) and v:
        if v[0] == "_" and len(v) == 3 and str(v[1]).startswith("bv"):
            return int(str(v[1])[2:])
        if v[0] == "-" and len(v) == 2:
            inner = _value_of_sexpr(v[1])
            return -inner if inner is not None else None
        if v[0] == "/" and len(v) == 3:
            a, b = _value_of_sexpr(v[1]), _value_of_sexpr(v[2])
            if a is not None and b is not None:
                return Fraction(a) / Fraction(b)
    return None


def parse_model(output: str, script: SmtScript) -> Model:
    """Read define-fun values back; array and function models are skipped."""
    body = output[output.find("sat") + 3:]
    sexprs, _ = _parse_sexprs(_tokenize_sexpr(body))
    model = Model()

    def walk(node):
        if not isinstance(node, list):
            return
        if node and node[0] == "define-fun" and len(node) >= 5:
            name = node[1]
            value = _value_of_sexpr(node[4])
            var = script.name_map.get(name)
            if var is not None and value is not None:
                model.values[var] = value
                model.structured[str(var.attr)] = value
            return
        for sub in node:
            walk(sub)

    walk(sexprs)
    return model
