"""Tuple elimination: each tuple variable becomes one variable per field.

A tuple store w' = store(w, f, v) turns into w'.f = v plus w'.j = w.j for
every other field j; nested tuples and arrays of tuples flatten recursively
(arrays of tuples become one array per leaf field).
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import terms as T
from .terms import Term
from .vcgen import Query, QueryProperty

# A flattened value is a Term for scalar/bool/leaf-array sorts, or a dict
# field-name -> flattened value for tuple-shaped sorts.
FlatVal = "Term | dict[str, FlatVal]"


def _is_tuple_shaped(sort: T.Sort) -> bool:
    if isinstance(sort, T.TupleSort):
        return True
    if isinstance(sort, T.ArraySort):
        return _is_tuple_shaped(sort.element)
    return False


def _component_sort(sort: T.Sort, fld: str) -> T.Sort:
    if isinstance(sort, T.TupleSort):
        return sort.field_sort(fld)
    assert isinstance(sort, T.ArraySort)
    return T.ArraySort(sort.index, _component_sort(sort.element, fld), sort.length)


def _fields_of(sort: T.Sort) -> tuple[tuple[str, T.Sort], ...]:
    if isinstance(sort, T.TupleSort):
        return sort.fields
    assert isinstance(sort, T.ArraySort)
    return _fields_of(sort.element)


@dataclass
class FlattenResult:
    query: Query
    expansion: dict[Term, object] = field(default_factory=dict)  # var -> FlatVal


class _Flattener:
    def __init__(self):
        self.memo: dict[Term, object] = {}
        self.expansion: dict[Term, object] = {}

    def flat_var(self, v: Term) -> object:
        assert v.kind == T.VAR
        out = self._components(v.attr, v.sort)
        self.expansion[v] = out
        return out

    def _components(self, name: str, sort: T.Sort) -> object:
        if not _is_tuple_shaped(sort):
            return T.mk_var(name, sort)
        return {f: self._components(f"{name}${f}", _component_sort(sort, f))
                for f, _ in _fields_of(sort)}

    def rw(self, t: Term) -> object:
        hit = self.memo.get(t)
        if hit is not None:
            return hit
        out = self._rw(t)
        self.memo[t] = out
        return out

    def _rw(self, t: Term) -> object:
        k = t.kind
        if not _is_tuple_shaped(t.sort) and \
                all(not _is_tuple_shaped(a.sort) for a in t.args):
            if not t.args:
                return t
            args = tuple(self.rw(a) for a in t.args)
            from .simplify import _rebuild
            return _rebuild(t, args)
        if k == T.VAR:
            return self.flat_var(t)
        if k == T.MKTUP:
            return {f: self.rw(v) for v, (f, _) in zip(t.args, t.sort.fields)}
        if k == T.TSEL:
            return self.rw(t.args[0])[t.attr]
        if k == T.TSTORE:
            base = dict(self.rw(t.args[0]))
            base[t.attr] = self.rw(t.args[1])
            return base
        if k == T.ITE:
            g = self.rw(t.args[0])
            a, b = self.rw(t.args[1]), self.rw(t.args[2])
            return self._zip(a, b, lambda x, y: T.mk_ite(g, x, y))
        if k == T.EQ:
            a, b = self.rw(t.args[0]), self.rw(t.args[1])
            return self._conj_eq(a, b)
        if k == T.SELECT:
            arr = self.rw(t.args[0])
            idx = self.rw(t.args[1])
            return self._map(arr, lambda x: T.mk_select(x, idx))
        if k == T.STORE:
            arr = self.rw(t.args[0])
            idx = self.rw(t.args[1])
            val = self.rw(t.args[2])
            return self._zip(arr, val, lambda x, v: T.mk_store(x, idx, v))
        raise AssertionError(f"tuple-shaped {k}")

    def _zip(self, a, b, f):
        if isinstance(a, dict):
            return {k: self._zip(a[k], b[k], f) for k in a}
        return f(a, b)

    def _map(self, a, f):
        if isinstance(a, dict):
            return {k: self._map(v, f) for k, v in a.items()}
        return f(a)

    def _conj_eq(self, a, b) -> Term:
        if isinstance(a, dict):
            return T.mk_and(*[self._conj_eq(a[k], b[k]) for k in a])
        return T.mk_eq(a, b)

    def flat_defs(self, lhs: Term, rhs: object) -> list[tuple[Term, Term]]:
        flat_lhs = self.flat_var(lhs) if _is_tuple_shaped(lhs.sort) else lhs
        out: list[tuple[Term, Term]] = []

        def walk(l, r):
            if isinstance(l, dict):
                for k in l:
                    walk(l[k], r[k])
            else:
                out.append((l, r))

        walk(flat_lhs, rhs)
        return out


def flatten_tuples(q: Query) -> FlattenResult:
    fl = _Flattener()
    defs: list[tuple[Term, Term]] = []
    for lhs, rhs in q.defs:
        defs.extend(fl.flat_defs(lhs, fl.rw(rhs)))
    literal_defs = [(lit, fl.rw(clause)) for lit, clause in q.literal_defs]
    goal = fl.rw(q.goal)
    out = Query(defs, literal_defs, goal,
                [QueryProperty(p.prop, p.literal) for p in q.properties], q.ssa)
    return FlattenResult(out, fl.expansion)
