"""Eager array reduction over statically sized arrays.

Every select over a store chain expands with ite on index equality; an
array variable becomes one variable per element.  A select whose index can
fall outside the array yields a cached free variable (one per distinct
array/index pair), reproducing the free-variable rule for out-of-bounds
reads while staying consistent across repeated occurrences.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import terms as T
from .simplify import _rebuild
from .terms import Term
from .vcgen import Query, QueryProperty

# Reduced values: Term for scalars, list (length = array length) for arrays,
# recursively for arrays of arrays.
ArrVal = "Term | list[ArrVal]"


@dataclass
class ReduceResult:
    query: Query
    expansion: dict[Term, object] = field(default_factory=dict)  # var -> ArrVal
    oob_reads: dict[tuple[int, int], Term] = field(default_factory=dict)


class _Reducer:
    def __init__(self):
        self.memo: dict[Term, object] = {}
        self.expansion: dict[Term, object] = {}
        self.oob: dict[tuple[int, int], Term] = {}
        self._oob_n = 0

    def elements_of_var(self, v: Term) -> object:
        out = self._elements(v.attr, v.sort)
        self.expansion[v] = out
        return out

    def _elements(self, name: str, sort: T.Sort) -> object:
        if not isinstance(sort, T.ArraySort):
            return T.mk_var(name, sort)
        return [self._elements(f"{name}@{i}", sort.element)
                for i in range(sort.length)]

    def rw(self, t: Term) -> object:
        hit = self.memo.get(t)
        if hit is not None:
            return hit
        out = self._rw(t)
        self.memo[t] = out
        return out

    def _rw(self, t: Term) -> object:
        k = t.kind
        arrayish = isinstance(t.sort, T.ArraySort) or \
            any(isinstance(a.sort, T.ArraySort) for a in t.args)
        if not arrayish:
            if not t.args:
                return t
            args = tuple(self.rw(a) for a in t.args)
            return _rebuild(t, args)
        if k == T.VAR:
            return self.elements_of_var(t)
        if k == T.STORE:
            arr = self.rw(t.args[0])
            idx = self.rw(t.args[1])
            val = self.rw(t.args[2])
            length = t.sort.length
            if T.is_const(idx):
                j = idx.attr
                if 0 <= j < length:
                    out = list(arr)
                    out[j] = val
                    return out
                return arr  # write outside the modeled elements
            out = []
            for j in range(length):
                cond = T.mk_eq(idx, T.mk_const(idx.sort, j))
                out.append(self._ite(cond, val, arr[j]))
            return out
        if k == T.SELECT:
            arr = self.rw(t.args[0])
            idx = self.rw(t.args[1])
            length = t.args[0].sort.length
            if T.is_const(idx):
                j = idx.attr
                if 0 <= j < length:
                    return arr[j]
                return self._oob_read(t.args[0], t.args[1], t.sort)
            acc = self._oob_read(t.args[0], t.args[1], t.sort)
            for j in range(length):
                cond = T.mk_eq(idx, T.mk_const(idx.sort, j))
                acc = self._ite(cond, arr[j], acc)
            return acc
        if k == T.ITE:
            g = self.rw(t.args[0])
            a, b = self.rw(t.args[1]), self.rw(t.args[2])
            return self._ite(g, a, b)
        if k == T.EQ:
            a, b = self.rw(t.args[0]), self.rw(t.args[1])
            return self._conj_eq(a, b)
        raise AssertionError(f"array-sorted {k}")

    def _ite(self, g: Term, a, b):
        if isinstance(a, list):
            return [self._ite(g, x, y) for x, y in zip(a, b)]
        return T.mk_ite(g, a, b)

    def _conj_eq(self, a, b) -> Term:
        if isinstance(a, list):
            return T.mk_and(*[self._conj_eq(x, y) for x, y in zip(a, b)])
        return T.mk_eq(a, b)

    def _oob_read(self, arr: Term, idx: Term, elem_sort: T.Sort) -> object:
        key = (arr.serial, idx.serial)
        hit = self.oob.get(key)
        if hit is None:
            self._oob_n += 1
            hit = self._elements(f"$oob{self._oob_n}", elem_sort)
            self.oob[key] = hit
        return hit

    def reduced_defs(self, lhs: Term, rhs: object) -> list[tuple[Term, Term]]:
        flat_lhs = self.elements_of_var(lhs) \
            if isinstance(lhs.sort, T.ArraySort) else lhs
        out: list[tuple[Term, Term]] = []

        def walk(l, r):
            if isinstance(l, list):
                for x, y in zip(l, r):
                    walk(x, y)
            else:
                out.append((l, r))

        walk(flat_lhs, rhs)
        return out


def reduce_arrays(q: Query) -> ReduceResult:
    red = _Reducer()
    defs: list[tuple[Term, Term]] = []
    for lhs, rhs in q.defs:
        defs.extend(red.reduced_defs(lhs, red.rw(rhs)))
    literal_defs = [(lit, red.rw(clause)) for lit, clause in q.literal_defs]
    goal = red.rw(q.goal)
    out = Query(defs, literal_defs, goal,
                [QueryProperty(p.prop, p.literal) for p in q.properties], q.ssa)
    return ReduceResult(out, red.expansion, red.oob)
