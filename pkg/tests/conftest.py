import pytest

from minibmc.errors import SourceUnit
from minibmc.goto import lower
from minibmc.parser import parse
from minibmc.pipeline import RunConfig, verify
from minibmc.ssa import execute
from minibmc.typecheck import typecheck
from minibmc.typeinfo import Widths
from minibmc.unroll import UnwindConfig, unroll


def parse_src(source: str, widths: Widths | None = None):
    return typecheck(parse(SourceUnit("<test>", source)), widths)


def ssa_of(source: str, bound: int = 1, widths: Widths | None = None,
           ctx=None, simplify_enabled: bool = True):
    ast = parse_src(source, widths)
    gp = unroll(lower(ast), UnwindConfig(bound))
    return execute(gp, ctx, simplify_enabled=simplify_enabled)


def run_verify(source: str, bound: int = 1, **kw) -> "VerificationReport":
    cfg = RunConfig(path="<test>", source=source, unwind=bound,
                    solver=kw.pop("solver", "builtin"), **kw)
    return verify(cfg)


@pytest.fixture
def tiny_widths():
    return Widths(char=4, short=4, int_=4, long=4)
