"""Type descriptions for the analyzed C subset.

Scalar kinds follow the front-end taxonomy: bool, signedbv, unsignedbv,
fixedbv and pointer, plus the composite kinds array, structure, union and
enumeration.  Floating types are mapped to fixed-point (fixedbv).
"""
from __future__ import annotations

from dataclasses import dataclass, field

SCALAR_KINDS = frozenset({"bool", "signedbv", "unsignedbv", "fixedbv", "enumeration"})
COMPOSITE_KINDS = frozenset({"array", "structure", "union"})


@dataclass(frozen=True)
class TypeInfo:
    kind: str
    width: int = 0
    fraction_bits: int = 0
    element: "TypeInfo | None" = None  # array element / pointer target
    length: int = 0  # array element count
    fields: tuple[tuple[str, "TypeInfo"], ...] = ()
    tag: str = ""  # struct/union/enum tag

    def __post_init__(self) -> None:
        if self.kind in ("signedbv", "unsignedbv", "fixedbv") and self.width <= 0:
            raise ValueError(f"{self.kind} needs a positive width")
        if self.kind == "fixedbv" and not (0 < self.fraction_bits < self.width):
            raise ValueError("fixedbv fraction bits must be in (0, width)")
        if self.kind == "array" and self.length <= 0:
            raise ValueError("statically sized array needs length > 0")
        names = [n for n, _ in self.fields]
        if len(names) != len(set(names)):
            raise ValueError(f"duplicate field name in {self.tag or self.kind}")

    # -- predicates ---------------------------------------------------------
    @property
    def is_scalar(self) -> bool:
        return self.kind in SCALAR_KINDS

    @property
    def is_integer(self) -> bool:
        return self.kind in ("signedbv", "unsignedbv", "enumeration", "bool")

    @property
    def is_signed(self) -> bool:
        return self.kind in ("signedbv", "fixedbv", "enumeration")

    @property
    def is_pointer(self) -> bool:
        return self.kind == "pointer"

    @property
    def is_array(self) -> bool:
        return self.kind == "array"

    def field_type(self, name: str) -> "TypeInfo":
        for n, t in self.fields:
            if n == name:
                return t
        raise KeyError(name)

    def field_index(self, name: str) -> int:
        for i, (n, _) in enumerate(self.fields):
            if n == name:
                return i
        raise KeyError(name)

    def bit_width(self) -> int:
        """Storage width in bits; used to pick a union's widest member."""
        if self.kind in ("bool",):
            return 1
        if self.kind in ("signedbv", "unsignedbv", "fixedbv", "enumeration"):
            return self.width
        if self.kind == "array":
            assert self.element is not None
            return self.length * self.element.bit_width()
        if self.kind == "structure":
            return sum(t.bit_width() for _, t in self.fields)
        if self.kind == "union":
            return max(t.bit_width() for _, t in self.fields)
        raise ValueError(f"no storage width for {self.kind}")

    def __str__(self) -> str:
        k = self.kind
        if k == "bool":
            return "_Bool"
        if k == "signedbv":
            return f"signedbv[{self.width}]"
        if k == "unsignedbv":
            return f"unsignedbv[{self.width}]"
        if k == "fixedbv":
            return f"fixedbv[{self.width},{self.fraction_bits}]"
        if k == "pointer":
            return f"{self.element}*"
        if k == "array":
            return f"{self.element}[{self.length}]"
        if k == "enumeration":
            return f"enum {self.tag}"
        return f"{k} {self.tag}"


BOOL = TypeInfo("bool", width=1)


@dataclass(frozen=True)
class Widths:
    """Configurable scalar widths (embedded ILP32/LP64 defaults)."""

    char: int = 8
    short: int = 16
    int_: int = 32
    long: int = 64
    float_width: int = 32
    float_fraction: int = 16
    double_width: int = 64
    double_fraction: int = 32
    enum: int = 32
    object_id: int = 16  # symbolic object identifiers for pointers

    def signed(self, width: int) -> TypeInfo:
        return TypeInfo("signedbv", width=width)

    def unsigned(self, width: int) -> TypeInfo:
        return TypeInfo("unsignedbv", width=width)

    def int_type(self) -> TypeInfo:
        return self.signed(self.int_)

    def float_type(self) -> TypeInfo:
        return TypeInfo("fixedbv", width=self.float_width, fraction_bits=self.float_fraction)

    def double_type(self) -> TypeInfo:
        return TypeInfo("fixedbv", width=self.double_width, fraction_bits=self.double_fraction)

    def enum_type(self, tag: str) -> TypeInfo:
        return TypeInfo("enumeration", width=self.enum, tag=tag)

    def basic(self, name: str, unsigned: bool = False) -> TypeInfo:
        width = {
            "char": self.char,
            "short": self.short,
            "int": self.int_,
            "long": self.long,
        }[name]
        return self.unsigned(width) if unsigned else self.signed(width)


def pointer_to(target: TypeInfo) -> TypeInfo:
    return TypeInfo("pointer", element=target)


def array_of(element: TypeInfo, length: int) -> TypeInfo:
    return TypeInfo("array", element=element, length=length)


def union_widest_member(t: TypeInfo) -> TypeInfo:
    """The member type whose layout a union shares (widest, first wins ties)."""
    assert t.kind == "union"
    best_name, best = t.fields[0]
    for _, ft in t.fields[1:]:
        if ft.bit_width() > best.bit_width():
            best = ft
    return best
