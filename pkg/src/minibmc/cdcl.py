"""CDCL SAT core: watched literals, first-UIP learning, VSIDS decisions,
phase saving and Luby restarts.  Sound and complete; a wall-clock budget
turns long runs into a distinct "budget" verdict instead of an answer.
"""
from __future__ import annotations

import time
from heapq import heappop, heappush

SAT = "sat"
UNSAT = "unsat"
BUDGET = "budget"


def _luby(x: int) -> int:
    size, seq = 1, 0
    while size < x + 1:
        seq += 1
        size = 2 * size + 1
    while size - 1 != x:
        size = (size - 1) // 2
        seq -= 1
        x = x % size
    return 1 << seq


class SatSolver:
    def __init__(self, nvars: int, clauses: list[list[int]],
                 deadline: float | None = None):
        self.nvars = nvars
        self.deadline = deadline
        self.clauses: list[list[int]] = []
        self.watches: dict[int, list[int]] = {}
        self.assign: list[int] = [0] * (nvars + 1)  # 0 unknown, 1 true, -1 false
        self.level: list[int] = [0] * (nvars + 1)
        self.reason: list[int] = [-1] * (nvars + 1)
        self.trail: list[int] = []
        self.trail_lim: list[int] = []
        self.qhead = 0
        self.activity: list[float] = [0.0] * (nvars + 1)
        self.var_inc = 1.0
        self.saved_phase: list[bool] = [False] * (nvars + 1)
        self.heap: list[tuple[float, int]] = []
        self.ok = True
        self._props = 0
        for c in clauses:
            if not self._add_clause(list(c)):
                self.ok = False
                break
        for v in range(1, nvars + 1):
            heappush(self.heap, (-self.activity[v], v))

    # ------------------------------------------------------------ clauses
    def _add_clause(self, c: list[int]) -> bool:
        c = list(dict.fromkeys(c))
        if any(-l in c for l in c):
            return True  # tautology
        if not c:
            return False
        if len(c) == 1:
            return self._enqueue(c[0], -1)
        idx = len(self.clauses)
        self.clauses.append(c)
        self.watches.setdefault(c[0], []).append(idx)
        self.watches.setdefault(c[1], []).append(idx)
        return True

    def _value(self, lit: int) -> int:
        v = self.assign[abs(lit)]
        return v if lit > 0 else -v

    def _enqueue(self, lit: int, reason: int) -> bool:
        val = self._value(lit)
        if val == 1:
            return True
        if val == -1:
            return False
        v = abs(lit)
        self.assign[v] = 1 if lit > 0 else -1
        self.level[v] = len(self.trail_lim)
        self.reason[v] = reason
        self.trail.append(lit)
        return True

    # ---------------------------------------------------------- propagate
    def _propagate(self) -> int:
        """Returns the index of a conflicting clause or -1."""
        while self.qhead < len(self.trail):
            lit = self.trail[self.qhead]
            self.qhead += 1
            self._props += 1
            neg = -lit
            watchlist = self.watches.get(neg)
            if not watchlist:
                continue
            i = 0
            while i < len(watchlist):
                ci = watchlist[i]
                c = self.clauses[ci]
                if c[0] == neg:
                    c[0], c[1] = c[1], c[0]
                first = c[0]
                if self._value(first) == 1:
                    i += 1
                    continue
                moved = False
                for j in range(2, len(c)):
                    if self._value(c[j]) != -1:
                        c[1], c[j] = c[j], c[1]
                        self.watches.setdefault(c[1], []).append(ci)
                        watchlist[i] = watchlist[-1]
                        watchlist.pop()
                        moved = True
                        break
                if moved:
                    continue
                if not self._enqueue(first, ci):
                    return ci
                i += 1
        return -1

    # ------------------------------------------------------------ analyze
    def _bump(self, v: int):
        self.activity[v] += self.var_inc
        if self.activity[v] > 1e100:
            for u in range(1, self.nvars + 1):
                self.activity[u] *= 1e-100
            self.var_inc *= 1e-100
        heappush(self.heap, (-self.activity[v], v))

    def _analyze(self, confl: int) -> tuple[list[int], int]:
        """First-UIP clause learning by resolution along the trail."""
        learnt: list[int] = []
        seen = [False] * (self.nvars + 1)
        counter = 0
        idx = len(self.trail) - 1
        cur_level = len(self.trail_lim)
        c_lits: list[int] = list(self.clauses[confl])
        while True:
            for q in c_lits:
                v = abs(q)
                if not seen[v] and self.level[v] > 0:
                    seen[v] = True
                    self._bump(v)
                    if self.level[v] >= cur_level:
                        counter += 1
                    else:
                        learnt.append(q)
            while not seen[abs(self.trail[idx])]:
                idx -= 1
            p = self.trail[idx]
            v = abs(p)
            seen[v] = False
            idx -= 1
            counter -= 1
            if counter == 0:
                learnt.insert(0, -p)
                break
            c_lits = [q for q in self.clauses[self.reason[v]] if q != p]
        if len(learnt) == 1:
            return learnt, 0
        second = max(range(1, len(learnt)),
                     key=lambda i: self.level[abs(learnt[i])])
        learnt[1], learnt[second] = learnt[second], learnt[1]
        return learnt, self.level[abs(learnt[1])]

    def _backjump(self, level: int):
        while len(self.trail_lim) > level:
            lim = self.trail_lim.pop()
            for lit in self.trail[lim:]:
                v = abs(lit)
                self.saved_phase[v] = lit > 0
                self.assign[v] = 0
                self.reason[v] = -1
                heappush(self.heap, (-self.activity[v], v))
            del self.trail[lim:]
        self.qhead = len(self.trail)

    def _decide(self) -> int:
        while self.heap:
            _, v = heappop(self.heap)
            if self.assign[v] == 0:
                return v if self.saved_phase[v] else -v
        for v in range(1, self.nvars + 1):
            if self.assign[v] == 0:
                return v if self.saved_phase[v] else -v
        return 0

    # -------------------------------------------------------------- solve
    def solve(self, assumptions: tuple[int, ...] = ()) -> tuple[str, list[int]]:
        if not self.ok:
            return UNSAT, []
        for lit in assumptions:
            if not self._enqueue(lit, -1):
                return UNSAT, []
        if self._propagate() != -1:
            return UNSAT, []
        conflicts = 0
        restart_n = 1
        restart_lim = 64 * _luby(restart_n)
        while True:
            if self.deadline is not None and self._props % 1024 == 0 \
                    and time.monotonic() > self.deadline:
                return BUDGET, []
            confl = self._propagate()
            if confl != -1:
                conflicts += 1
                if not self.trail_lim:
                    return UNSAT, []
                learnt, bt = self._analyze(confl)
                self._backjump(bt)
                self.var_inc /= 0.95
                if len(learnt) == 1:
                    if not self._enqueue(learnt[0], -1):
                        return UNSAT, []
                else:
                    idx = len(self.clauses)
                    self.clauses.append(learnt)
                    self.watches.setdefault(learnt[0], []).append(idx)
                    self.watches.setdefault(learnt[1], []).append(idx)
                    self._enqueue(learnt[0], idx)
                if conflicts >= restart_lim:
                    conflicts = 0
                    restart_n += 1
                    restart_lim = 64 * _luby(restart_n)
                    self._backjump(0)
                continue
            lit = self._decide()
            if lit == 0:
                model = [0] * (self.nvars + 1)
                for v in range(1, self.nvars + 1):
                    model[v] = 1 if self.assign[v] == 1 else -1
                return SAT, model
            self.trail_lim.append(len(self.trail))
            self._enqueue(lit, -1)


def solve_cnf(nvars: int, clauses: list[list[int]],
              assumptions: tuple[int, ...] = (),
              timeout_s: float | None = None) -> tuple[str, list[int]]:
    deadline = time.monotonic() + timeout_s if timeout_s else None
    solver = SatSolver(nvars, [list(c) for c in clauses], deadline)
    return solver.solve(assumptions)
