"""Automatic safety properties, definition literals, and the final query.

One fresh boolean literal abbreviates each property clause through a
biconditional; the goal is the disjunction of the negated literals, so the
conjunction of all constraints with the goal is satisfiable exactly when
some property can be violated within the bound.  Accesses that are provably
safe after simplification generate no verification condition at all.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from . import terms as T
from .encode import EncodingCtx
from .overflow import overflow_predicates, unsigned_overflow_predicates
from .simplify import simplify
from .ssa import INVALID_OBJECT, NULL_OBJECT, SsaProperty, SsaSystem
from .terms import Term

PROPERTY_KINDS = (
    "array-lower-bound", "array-upper-bound", "overflow", "underflow",
    "div-by-zero", "same-object", "invalid-pointer", "unwinding",
    "user-assertion",
)

_KIND_RANK = {k: i for i, k in enumerate(PROPERTY_KINDS)}


@dataclass
class ChecksConfig:
    bounds: bool = True
    div_by_zero: bool = True
    pointer: bool = True
    signed_overflow: bool = False
    strict_unsigned: bool = False


class _Gen:
    def __init__(self, ssa: SsaSystem, checks: ChecksConfig):
        self.ssa = ssa
        self.ctx: EncodingCtx = ssa.ctx
        self.checks = checks
        self.seen: set[tuple] = set()
        self.index = max((p.index for p in ssa.properties), default=0)

    def add(self, kind: str, guard: Term, claim: Term, desc: str, loc,
            aux: dict | None = None):
        claim = simplify(claim)
        guard = simplify(guard)
        if claim is T.TRUE or guard is T.FALSE:
            return  # statically safe: no VC
        key = (kind, loc.line, loc.col, claim, guard)
        if key in self.seen:
            return
        self.seen.add(key)
        self.index += 1
        self.ssa.properties.append(SsaProperty(
            kind, guard, claim, T.mk_and(*self.ssa.assumptions), desc, loc,
            self.index, aux or {}))

    def run(self):
        s = self.ssa.sites
        if self.checks.bounds:
            for site in s.array:
                what = "array" if not site.is_store else "array"
                self.add("array-lower-bound", site.guard,
                         T.mk_ge(site.index, _zero(site.index), signed=True),
                         f"{what} `{site.array_name}' lower bound", site.loc)
                self.add("array-upper-bound", site.guard,
                         T.mk_lt(site.index, _const_like(site.index, site.length),
                                 signed=True),
                         f"{what} `{site.array_name}' upper bound", site.loc)
        if self.checks.div_by_zero:
            for site in s.div:
                self.add("div-by-zero", site.guard,
                         T.mk_ne(site.divisor, _zero(site.divisor)),
                         "division by zero", site.loc)
        if self.checks.signed_overflow:
            for site in s.signed_arith:
                preds = overflow_predicates(self.ctx, site.op, site.x, site.y,
                                            site.ty)
                self.add("overflow", site.guard, T.mk_not(preds["overflow"]),
                         f"arithmetic overflow on {site.op}", site.loc)
                self.add("underflow", site.guard, T.mk_not(preds["underflow"]),
                         f"arithmetic underflow on {site.op}", site.loc)
        if self.checks.strict_unsigned:
            for site in s.unsigned_arith:
                preds = unsigned_overflow_predicates(site.op, site.x, site.y,
                                                     site.ty.width)
                self.add("overflow", site.guard, T.mk_not(preds["overflow"]),
                         f"unsigned wraparound on {site.op}", site.loc)
                self.add("underflow", site.guard, T.mk_not(preds["underflow"]),
                         f"unsigned wraparound on {site.op}", site.loc)
        if self.checks.pointer:
            for site in s.deref:
                self._deref_properties(site)
            for site in s.same_object:
                self.add("same-object", site.guard,
                         T.mk_eq(site.left.object, site.right.object),
                         "pointers compare within one object", site.loc)

    def _deref_properties(self, site):
        o = site.pointer.object
        i = site.pointer.index
        self.add("invalid-pointer", site.guard,
                 T.mk_and(T.mk_ne(o, self.ctx.object_id(INVALID_OBJECT)),
                          T.mk_ne(o, self.ctx.object_id(NULL_OBJECT))),
                 "pointer is neither NULL nor invalid", site.loc)
        claim = T.FALSE
        names = []
        extents = {}
        for obj, extent in site.candidates:
            names.append(obj.name.rsplit("::", 1)[-1])
            extents[obj.name.rsplit("::", 1)[-1]] = extent
            within = T.mk_and(
                T.mk_eq(o, self.ctx.object_id(obj.oid)),
                T.mk_ge(i, _zero(i), signed=True),
                T.mk_lt(i, _const_like(i, extent), signed=True))
            claim = T.mk_or(claim, within)
        desc = "dereference stays within object " + \
            (" or ".join(f"`{n}' (size {extents[n]})" for n in names)
             if names else "(no object)")
        self.add("same-object", site.guard, claim, desc, site.loc,
                 aux={"index": i, "extents": extents})


def _zero(like: Term) -> Term:
    return T.mk_const(like.sort, 0)


def _const_like(like: Term, value: int) -> Term:
    return T.mk_const(like.sort, value)


def generate_safety(ssa: SsaSystem, checks: ChecksConfig) -> SsaSystem:
    """Append automatic safety properties to the SSA system (in place)."""
    _Gen(ssa, checks).run()
    ssa.properties.sort(key=lambda p: (p.loc.line, _KIND_RANK.get(p.kind, 9),
                                       p.loc.col, p.index))
    for n, p in enumerate(ssa.properties, start=1):
        p.index = n
    return ssa


# --------------------------------------------------------------------------
# Definition literals and the query
# --------------------------------------------------------------------------

@dataclass
class QueryProperty:
    prop: SsaProperty
    literal: Term

    @property
    def name(self) -> str:
        return f"l{self.prop.index - 1}"


@dataclass
class Query:
    defs: list[tuple[Term, Term]]
    literal_defs: list[tuple[Term, Term]]
    goal: Term
    properties: list[QueryProperty]
    ssa: SsaSystem = field(repr=False, default=None)

    def all_formulas(self) -> list[Term]:
        out = [T.mk_eq(lhs, rhs) if lhs.sort != T.BOOL_S else T.mk_iff(lhs, rhs)
               for lhs, rhs in self.defs]
        out += [T.mk_iff(l, c) for l, c in self.literal_defs]
        out.append(self.goal)
        return out

    def term_stats(self) -> tuple[int, int]:
        """(distinct nodes, distinct non-constant nodes) over the encoding."""
        roots = [rhs for _, rhs in self.defs] + \
                [c for _, c in self.literal_defs] + [self.goal]
        total = T.count_distinct(*roots, include_consts=True)
        nonconst = T.count_distinct(*roots, include_consts=False)
        return total, nonconst


def introduce_literals(ssa: SsaSystem) -> Query:
    """One fresh literal per property clause; goal is the negated disjunction."""
    defs = [(eq.lhs_term, eq.rhs) for eq in ssa.constraints]
    props: list[QueryProperty] = []
    literal_defs: list[tuple[Term, Term]] = []
    negs: list[Term] = []
    for p in ssa.properties:
        lit = T.mk_var(f"$l#{p.index - 1}", T.BOOL_S)
        props.append(QueryProperty(p, lit))
        literal_defs.append((lit, p.clause()))
        negs.append(T.mk_not(lit))
    goal = T.mk_or(*negs) if negs else T.FALSE
    return Query(defs, literal_defs, goal, props, ssa)
