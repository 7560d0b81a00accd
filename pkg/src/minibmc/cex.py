"""Source-level counterexample traces from satisfying models.

A trace replays exactly one program path: only assignments whose path guard
holds in the model are shown, in original program order, with values printed
in the declared type's notation.  Reads that fell outside an array's bounds
are marked, since their value is nondeterministic by construction.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from . import terms as T
from .errors import InternalError, SourceLoc
from .evalterm import eval_term
from .solver import Model
from .ssa import SsaProperty, SsaSystem
from .typeinfo import TypeInfo


@dataclass
class TraceStep:
    loc: SourceLoc
    text: str
    var: str
    value: str
    guard_true: bool = True
    nondet: bool = False
    oob_read: bool = False


@dataclass
class Trace:
    steps: list[TraceStep]
    violated: SsaProperty
    final_lines: list[str] = field(default_factory=list)


def format_value(raw, ty: TypeInfo | None, ssa: SsaSystem | None = None) -> str:
    if isinstance(raw, dict) and ty is not None and ty.kind == "pointer":
        obj = ssa.object_by_id(raw.get("o", 0)) if ssa else None
        if raw.get("o", 0) == 0:
            return "NULL"
        name = obj.name.rsplit("::", 1)[-1] if obj else f"object#{raw.get('o')}"
        return f"&{name} + {_as_signed(raw.get('i', 0), 32)}"
    if isinstance(raw, dict):
        if ty is not None and ty.kind == "array":
            inner = ", ".join(f"[{i}]={format_value(v, ty.element, ssa)}"
                              for i, v in sorted(raw.items()))
            return "{" + inner + "}"
        if ty is not None and ty.kind in ("structure", "union"):
            fields = dict(ty.fields)
            inner = ", ".join(
                f".{n}={format_value(v, fields.get(n), ssa)}"
                for n, v in raw.items())
            return "{" + inner + "}"
        return "{" + ", ".join(f"{k}={v}" for k, v in raw.items()) + "}"
    if ty is None:
        return str(raw)
    if ty.kind == "bool":
        return "TRUE" if raw else "FALSE"
    if ty.kind == "fixedbv":
        if isinstance(raw, Fraction):
            return str(float(raw))
        return str(_as_signed(raw, ty.width) / (1 << ty.fraction_bits))
    if ty.kind in ("signedbv", "enumeration") and isinstance(raw, int):
        return str(_as_signed(raw, ty.width))
    return str(raw)


def _as_signed(raw: int, width: int) -> int:
    if raw < 0 or width <= 0:
        return raw
    return raw - (1 << width) if raw >> (width - 1) & 1 else raw


def _guard_holds(guard: T.Term, model: Model) -> bool:
    try:
        return bool(eval_term(guard, model.values))
    except InternalError:
        return True


def _input_steps(model: Model, ssa: SsaSystem) -> list[TraceStep]:
    """Free initial values (uninitialized variables) referenced by the system."""
    used: set[str] = set()
    roots = [eq.rhs for eq in ssa.constraints] + \
            [p.claim for p in ssa.properties] + \
            [p.guard for p in ssa.properties]
    for v in T.free_vars(*roots):
        name = str(v.attr)
        base, _, ver = name.rpartition("#")
        if ver == "0" and not base.rsplit("::", 1)[-1].startswith("$"):
            used.add(base)
    steps = []
    for base in sorted(used):
        name = f"{base}#0"
        raw = model.structured.get(name)
        if raw is None:
            continue
        ty = ssa.var_types.get(base)
        short = base.rsplit("::", 1)[-1]
        steps.append(TraceStep(SourceLoc(), f"input {short}", short,
                               format_value(raw, ty, ssa), nondet=True))
    return steps


def build_trace(model: Model, ssa: SsaSystem, violated: SsaProperty) -> Trace:
    steps: list[TraceStep] = _input_steps(model, ssa)
    oob_locs = _oob_read_locations(model, ssa)
    for eq in ssa.constraints:
        if eq.kind not in ("assign", "nondet"):
            continue
        if not _guard_holds(eq.guard, model):
            continue
        name = f"{eq.lhs.base}#{eq.lhs.version}"
        raw = model.structured.get(name)
        ty = ssa.var_types.get(eq.lhs.base)
        value = _step_value(eq, raw, ty, model, ssa)
        steps.append(TraceStep(
            eq.loc, eq.source_text or f"{eq.lhs.display()} = ...",
            eq.lhs.base.rsplit("::", 1)[-1], value,
            nondet=(eq.kind == "nondet"),
            oob_read=(eq.loc.line, eq.loc.col) in oob_locs))
    final = [f"violated property ({violated.kind}): {violated.desc}",
             f"  at {violated.loc}"]
    if violated.kind == "same-object" and violated.aux:
        final.extend(_same_object_details(model, ssa, violated))
    return Trace(steps, violated, final)


def _step_value(eq, raw, ty, model: Model, ssa: SsaSystem) -> str:
    if isinstance(raw, dict) and eq.rhs.kind == T.STORE and ty is not None \
            and ty.kind == "array":
        base_arr = eq.rhs.args[0]
        if base_arr.kind == T.VAR:
            prev = model.structured.get(base_arr.attr)
            if isinstance(prev, dict):
                changed = {i: v for i, v in raw.items() if prev.get(i) != v}
                if len(changed) == 1:
                    i, v = next(iter(changed.items()))
                    return f"[{i}] := {format_value(v, ty.element, ssa)}"
    return format_value(raw, ty, ssa)


def _oob_read_locations(model: Model, ssa: SsaSystem) -> set[tuple[int, int]]:
    out: set[tuple[int, int]] = set()
    for site in ssa.sites.array:
        if site.is_store or not _guard_holds(site.guard, model):
            continue
        try:
            idx = eval_term(site.index, model.values)
        except InternalError:
            continue
        width = site.index.sort.width if isinstance(site.index.sort, T.BvSort) else 0
        idx = _as_signed(idx, width) if width else idx
        if not 0 <= idx < site.length:
            out.add((site.loc.line, site.loc.col))
    return out


def _same_object_details(model: Model, ssa: SsaSystem,
                         prop: SsaProperty) -> list[str]:
    lines = []
    idx_term = prop.aux.get("index")
    extents: dict = prop.aux.get("extents", {})
    if idx_term is not None:
        try:
            idx = eval_term(idx_term, model.values)
            width = idx_term.sort.width if isinstance(idx_term.sort, T.BvSort) else 0
            idx = _as_signed(idx, width) if width else idx
            for name, extent in extents.items():
                lines.append(f"  offset index {idx} on a {extent}-element "
                             f"object `{name}'")
        except InternalError:
            pass
    return lines


def render_trace(trace: Trace) -> str:
    lines = ["Counterexample trace:"]
    for i, s in enumerate(trace.steps, start=1):
        marks = ""
        if s.nondet:
            marks += "  (nondet input)"
        if s.oob_read:
            marks += "  (* reads out of bounds: nondeterministic value)"
        lines.append(f"  step {i}  {s.loc}  {s.text}  --> {s.value}{marks}")
    lines.extend(trace.final_lines)
    return "\n".join(lines)


def render_trace_kv(trace: Trace) -> str:
    """Line-oriented key/value records for machine consumption."""
    lines = []
    for i, s in enumerate(trace.steps, start=1):
        lines.append(f"step={i} line={s.loc.line} col={s.loc.col} "
                     f"var={s.var} value={s.value!r} nondet={int(s.nondet)} "
                     f"oob={int(s.oob_read)}")
    v = trace.violated
    lines.append(f"violated=1 kind={v.kind} line={v.loc.line} desc={v.desc!r}")
    return "\n".join(lines)
