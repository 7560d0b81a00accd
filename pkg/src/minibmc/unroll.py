"""Loop unrolling to a user-supplied bound with unwinding assertions.

Each loop body is duplicated up to k times; after the last copy the loop
condition is re-evaluated once more and asserted false (when unwinding
assertions are enabled), so an insufficient bound shows up as a violated
property instead of silently truncating behaviour.  An assumption with the
same condition always follows, cutting the truncated deeper paths.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .errors import InternalError
from .goto import GotoProgram, Instr, LoopInfo


@dataclass
class UnwindConfig:
    bound: int = 1
    overrides: dict[int, int] = field(default_factory=dict)
    unwinding_assertions: bool = True

    def __post_init__(self):
        if self.bound < 1:
            raise ValueError("unwind bound must be >= 1")
        for b in self.overrides.values():
            if b < 1:
                raise ValueError("per-loop bounds must be >= 1")

    def bound_for(self, loop_id: int) -> int:
        return self.overrides.get(loop_id, self.bound)


def _clone_list(instrs: list[Instr]) -> list[Instr]:
    mapping: dict[int, Instr] = {}
    clones: list[Instr] = []
    for ins in instrs:
        c = Instr(ins.kind, ins.loc, lhs=ins.lhs, rhs=ins.rhs, cond=ins.cond,
                  desc=ins.desc, prop_kind=ins.prop_kind, guard=ins.guard,
                  target=ins.target, symbol=ins.symbol, ty=ins.ty,
                  source_text=ins.source_text)
        mapping[id(ins)] = c
        clones.append(c)
    for c in clones:
        if c.target is not None and id(c.target) in mapping:
            c.target = mapping[id(c.target)]
    return clones


def unroll(gp: GotoProgram, cfg: UnwindConfig) -> GotoProgram:
    if not gp.loops:
        return GotoProgram(gp.instructions, [], gp.symbols)
    index = {id(ins): i for i, ins in enumerate(gp.instructions)}
    loops = sorted(gp.loops, key=lambda lp: index[id(lp.start)])

    def expand(lo: int, hi: int) -> list[Instr]:
        in_region = [lp for lp in loops
                     if lo <= index[id(lp.start)] and index[id(lp.back)] < hi]
        outer = [lp for lp in in_region if not any(
            q is not lp
            and index[id(q.start)] <= index[id(lp.start)]
            and index[id(q.back)] >= index[id(lp.back)]
            for q in in_region)]
        by_start = {index[id(lp.start)]: lp for lp in outer}
        out: list[Instr] = []
        i = lo
        while i < hi:
            lp = by_start.get(i)
            if lp is None:
                out.append(gp.instructions[i])
                i += 1
                continue
            back_i = index[id(lp.back)]
            body = expand(i, back_i)
            out.extend(_expand_loop(lp, body, cfg))
            i = back_i + 1
        return out

    def _expand_loop(lp: LoopInfo, body: list[Instr], cfg: UnwindConfig) -> list[Instr]:
        # the exit test keeps its identity through inner expansion
        exit_pos = None
        for pos, ins in enumerate(body):
            if ins is lp.exit:
                exit_pos = pos
                break
        if exit_pos is None:
            raise InternalError("loop without an exit test")
        out: list[Instr] = []
        k = cfg.bound_for(lp.loop_id)
        for _ in range(k):
            out.extend(_clone_list(body))
        tail = _clone_list(body[:exit_pos + 1])
        exit_clone = tail.pop()
        guard = exit_clone.guard  # the negated loop condition
        out.extend(tail)
        if cfg.unwinding_assertions:
            out.append(Instr("assert", lp.loc, cond=guard,
                             desc=f"unwinding assertion loop {lp.loop_id}",
                             prop_kind="unwinding",
                             source_text=f"unwinding assertion loop {lp.loop_id}"))
        out.append(Instr("assume", lp.loc, cond=guard,
                         desc=f"unwinding assumption loop {lp.loop_id}",
                         source_text=f"unwinding assumption loop {lp.loop_id}"))
        return out

    instrs = expand(0, len(gp.instructions))
    return GotoProgram(instrs, [], gp.symbols)
