"""End-to-end driver wiring the pipeline: parse, typecheck, lower, unroll,
SSA, verification conditions, and one of the decision procedure back-ends."""
from __future__ import annotations

import os
import shutil
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from . import terms as T
from .cex import build_trace
from .encode import BITVECTOR, INTEGER_REAL, EncodingCtx
from .errors import Diagnostic, DiagnosticsError, SourceUnit
from .goto import lower
from .parser import parse
from .report import PropertyResult, VerificationReport
from .smtlib import emit, run_external
from .solver import BuiltinSolver
from .ssa import SsaSystem, execute, format_ssa
from .typecheck import typecheck
from .typeinfo import Widths
from .unroll import UnwindConfig, unroll
from .vcgen import ChecksConfig, Query, generate_safety, introduce_literals

SOLVER_ENV_VAR = "MINIBMC_SOLVER"
_FALLBACK_SOLVERS = ("z3 -smt2", "cvc5 --lang smt2", "cvc4 --lang smt2",
                     "mathsat", "yices-smt2")


@dataclass
class RunConfig:
    path: str = "<input>"
    source: str | None = None
    unwind: int = 1
    unwindset: dict[int, int] = field(default_factory=dict)
    unwinding_assertions: bool = True
    checks: ChecksConfig = field(default_factory=ChecksConfig)
    mode: str = BITVECTOR
    solver: str = "builtin"  # "builtin" | "external" | "auto"
    solver_command: str | None = None
    timeout: float = 3600.0
    jobs: int = 1
    simplify: bool = True
    widths: Widths = field(default_factory=Widths)
    single_query: bool = False
    show_ssa: bool = False
    show_vcs: bool = False
    smt2_out: str | None = None
    dimacs_out: str | None = None
    kv_trace: bool = False


def read_source(cfg: RunConfig) -> SourceUnit:
    if cfg.source is not None:
        return SourceUnit(cfg.path, cfg.source)
    with open(cfg.path, "r", encoding="utf-8") as f:
        return SourceUnit(cfg.path, f.read())


def build_ssa(cfg: RunConfig, out=None) -> SsaSystem:
    """Front half of the pipeline: source to SSA with safety properties."""
    src = read_source(cfg)
    ast = typecheck(parse(src), cfg.widths)
    gp = lower(ast)
    unrolled = unroll(gp, UnwindConfig(cfg.unwind, dict(cfg.unwindset),
                                       cfg.unwinding_assertions))
    ctx = EncodingCtx(cfg.mode, cfg.widths)
    ssa = execute(unrolled, ctx, simplify_enabled=cfg.simplify)
    generate_safety(ssa, cfg.checks)
    if cfg.show_ssa and out is not None:
        print(format_ssa(ssa), file=out)
    if cfg.show_vcs and out is not None:
        for p in ssa.properties:
            print(f"VC {p.index} [{p.kind}] {p.loc}: {p.desc}: "
                  f"{T.pretty(p.claim)}", file=out)
    return ssa


def resolve_solver(cfg: RunConfig) -> tuple[str, str | None]:
    """Pick (kind, command).  Integer/real mode always uses the external
    SMT-LIB2 interface; a bundled linear-arithmetic fallback keeps it usable
    when no full solver is installed."""
    choice = cfg.solver
    if choice == "builtin" and cfg.mode == INTEGER_REAL:
        raise DiagnosticsError([Diagnostic(
            "unsupported", "the built-in solver is bit-vector only; "
            "integer/real mode needs --solver external (or auto)")])
    if choice == "builtin":
        return "builtin", None
    if choice in ("external", "auto"):
        cmd = cfg.solver_command or os.environ.get(SOLVER_ENV_VAR)
        if cmd:
            return "external", cmd
        for cand in _FALLBACK_SOLVERS:
            if shutil.which(cand.split()[0]):
                return "external", cand
        if choice == "auto" and cfg.mode == BITVECTOR:
            return "builtin", None
        if cfg.mode == INTEGER_REAL:
            return "external", f"{sys.executable} -m minibmc.liasolver"
        raise DiagnosticsError([Diagnostic(
            "unsupported", "no external SMT-LIB2 solver found; set "
            f"--solver-command or ${SOLVER_ENV_VAR}")])
    # any other value is a raw command line
    return "external", choice


def verify(cfg: RunConfig, out=None) -> VerificationReport:
    out = out if out is not None else sys.stdout
    t0 = time.monotonic()
    ssa = build_ssa(cfg, out)
    query = introduce_literals(ssa)
    encode_front = time.monotonic() - t0
    kind, command = resolve_solver(cfg)
    if kind == "builtin":
        rep = _verify_builtin(cfg, ssa, query)
    else:
        rep = _verify_external(cfg, ssa, query, command)
    rep.encode_seconds += encode_front
    rep.bound = cfg.unwind
    rep.mode = cfg.mode
    return rep


def _verify_builtin(cfg: RunConfig, ssa: SsaSystem,
                    query: Query) -> VerificationReport:
    rep = VerificationReport(solver_name="builtin")
    solver = BuiltinSolver(query, timeout_s=cfg.timeout).prepare()
    if cfg.dimacs_out:
        with open(cfg.dimacs_out, "w") as f:
            f.write(solver.dimacs())
    if cfg.smt2_out:
        _dump_smt2(cfg, query)
    rep.encode_seconds += solver.encode_seconds
    if cfg.single_query:
        outcome = solver.check_combined()
        rep.decide_seconds += solver.decide_seconds
        violated = {qp.prop.index for qp in outcome.false_literals}
        for qp in query.properties:
            if outcome.verdict == "budget":
                rep.results.append(PropertyResult(qp.prop, "failed", "timeout"))
            elif outcome.verdict == "sat" and qp.prop.index in violated:
                trace = build_trace(outcome.model, ssa, qp.prop)
                rep.results.append(PropertyResult(qp.prop, "violated",
                                                  trace=trace))
            else:
                rep.results.append(PropertyResult(qp.prop, "passed"))
        return rep

    def job(qp):
        return qp, solver.check_property(qp)

    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as ex:
            outcomes = list(ex.map(job, query.properties))
    else:
        outcomes = [job(qp) for qp in query.properties]
    for qp, outcome in outcomes:
        if outcome.verdict == "unsat":
            rep.results.append(PropertyResult(qp.prop, "passed"))
        elif outcome.verdict == "sat":
            trace = build_trace(outcome.model, ssa, qp.prop)
            rep.results.append(PropertyResult(qp.prop, "violated", trace=trace))
        else:
            rep.results.append(PropertyResult(qp.prop, "failed", "timeout"))
    rep.decide_seconds += solver.decide_seconds
    rep.results.sort(key=lambda r: r.prop.index)
    return rep


def _verify_external(cfg: RunConfig, ssa: SsaSystem, query: Query,
                     command: str) -> VerificationReport:
    rep = VerificationReport(solver_name=command)
    if cfg.smt2_out:
        _dump_smt2(cfg, query)

    def decide(goal) -> tuple[str, object]:
        t0 = time.monotonic()
        script = emit(query, cfg.mode, goal=goal)
        t1 = time.monotonic()
        res = run_external(script, command, cfg.timeout)
        rep.encode_seconds += t1 - t0
        rep.decide_seconds += time.monotonic() - t1
        return res.status, res

    if cfg.single_query:
        status, res = decide(None)
        for qp in query.properties:
            if status == "unsat":
                rep.results.append(PropertyResult(qp.prop, "passed"))
            elif status == "sat":
                # without per-literal values, re-check each property
                st2, r2 = decide(T.mk_not(qp.literal))
                if st2 == "sat":
                    trace = build_trace(r2.model, ssa, qp.prop) if r2.model \
                        else None
                    rep.results.append(PropertyResult(qp.prop, "violated",
                                                      trace=trace))
                else:
                    rep.results.append(PropertyResult(qp.prop, "passed"))
            else:
                rep.results.append(PropertyResult(qp.prop, "failed", status))
        return rep
    for qp in query.properties:
        status, res = decide(T.mk_not(qp.literal))
        if status == "unsat":
            rep.results.append(PropertyResult(qp.prop, "passed"))
        elif status == "sat":
            trace = build_trace(res.model, ssa, qp.prop) if res.model else None
            rep.results.append(PropertyResult(qp.prop, "violated", trace=trace))
        else:
            rep.results.append(PropertyResult(qp.prop, "failed", status))
    return rep


def _dump_smt2(cfg: RunConfig, query: Query):
    script = emit(query, cfg.mode)
    with open(cfg.smt2_out, "w") as f:
        f.write(script.text)
