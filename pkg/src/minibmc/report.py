"""Verification report: per-property verdicts in source order plus summary."""
from __future__ import annotations

from dataclasses import dataclass, field

from .cex import Trace, render_trace, render_trace_kv
from .ssa import SsaProperty

EXIT_OK = 0
EXIT_VIOLATED = 10
EXIT_USAGE = 1
EXIT_ERROR = 2


@dataclass
class PropertyResult:
    prop: SsaProperty
    status: str  # "passed" | "violated" | "failed"
    reason: str = ""  # for failed: timeout / unknown / solver error
    trace: Trace | None = None

    @property
    def name(self) -> str:
        return f"property {self.prop.index} [{self.prop.kind}]"


@dataclass
class VerificationReport:
    results: list[PropertyResult] = field(default_factory=list)
    encode_seconds: float = 0.0
    decide_seconds: float = 0.0
    bound: int = 1
    mode: str = "bitvector"
    solver_name: str = "builtin"

    @property
    def passed(self) -> int:
        return sum(r.status == "passed" for r in self.results)

    @property
    def violated(self) -> int:
        return sum(r.status == "violated" for r in self.results)

    @property
    def failed(self) -> int:
        return sum(r.status == "failed" for r in self.results)

    @property
    def exit_code(self) -> int:
        if self.violated:
            return EXIT_VIOLATED
        if self.failed:
            return EXIT_ERROR
        return EXIT_OK

    def violated_props(self) -> list[SsaProperty]:
        return [r.prop for r in self.results if r.status == "violated"]


def render_report(rep: VerificationReport, show_traces: bool = True,
                  kv_trace: bool = False) -> str:
    lines: list[str] = []
    for r in rep.results:
        p = r.prop
        status = r.status.upper() if r.status != "failed" \
            else f"FAILED ({r.reason})"
        lines.append(f"[{p.index}] {p.loc} {p.kind}: {p.desc}: {status}")
        if r.trace is not None and show_traces:
            body = render_trace_kv(r.trace) if kv_trace else render_trace(r.trace)
            lines.extend("  " + l for l in body.splitlines())
    lines.append("")
    lines.append(f"** Results: {rep.passed} passed, {rep.violated} violated, "
                 f"{rep.failed} failed (bound {rep.bound}, {rep.mode}, "
                 f"solver {rep.solver_name})")
    lines.append(f"** Encoding: {rep.encode_seconds:.3f}s  "
                 f"Decision procedure: {rep.decide_seconds:.3f}s")
    lines.append("VERIFICATION FAILED" if rep.violated
                 else ("VERIFICATION INCONCLUSIVE" if rep.failed
                       else "VERIFICATION SUCCESSFUL"))
    return "\n".join(lines)
