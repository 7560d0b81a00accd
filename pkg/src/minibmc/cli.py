"""Command-line driver.

Exit codes: 0 all properties hold up to the bound, 10 at least one property
violated, 1 usage or front-end diagnostics, 2 internal or solver failure.
"""
from __future__ import annotations

import argparse
import sys

from .encode import BITVECTOR, INTEGER_REAL
from .errors import DiagnosticsError, InternalError
from .pipeline import RunConfig, verify
from .report import EXIT_ERROR, EXIT_USAGE, render_report
from .typeinfo import Widths
from .vcgen import ChecksConfig


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="minibmc",
        description="Bounded model checker for a C subset: unrolls to a "
                    "bound, encodes constraints and properties over "
                    "bit-vectors/arrays/tuples (or integers/reals), and "
                    "decides them with the built-in solver or an external "
                    "SMT-LIB2 solver.")
    p.add_argument("file", help="preprocessed C source file")
    p.add_argument("--unwind", type=int, default=1, metavar="K",
                   help="loop unwinding bound (default 1)")
    p.add_argument("--unwindset", default="", metavar="ID:K[,ID:K...]",
                   help="per-loop bounds, loop ids in lowering order from 1")
    p.add_argument("--no-unwinding-assertions", action="store_true",
                   help="do not assert that loop bounds suffice")
    p.add_argument("--overflow-check", action="store_true",
                   help="generate signed arithmetic overflow/underflow VCs")
    p.add_argument("--strict-unsigned-overflow", action="store_true",
                   help="flag unsigned wraparound too (it is legal C)")
    p.add_argument("--no-bounds-check", action="store_true")
    p.add_argument("--no-div-by-zero-check", action="store_true")
    p.add_argument("--no-pointer-check", action="store_true")
    p.add_argument("--bounds-check", action="store_true",
                   help="accepted for compatibility (default on)")
    p.add_argument("--div-by-zero-check", action="store_true",
                   help="accepted for compatibility (default on)")
    p.add_argument("--pointer-check", action="store_true",
                   help="accepted for compatibility (default on)")
    p.add_argument("--int-encoding", action="store_true",
                   help="model scalars as mathematical integers/reals "
                        "instead of bit-vectors")
    p.add_argument("--solver", default="auto", metavar="WHICH",
                   help="builtin | auto | external | <command line> "
                        "(default auto)")
    p.add_argument("--solver-command", default=None, metavar="CMD",
                   help="external solver command (SMT-LIB2 on a file; "
                        "use {file} placeholder if needed)")
    p.add_argument("--timeout", type=float, default=3600.0, metavar="S",
                   help="per-property decision budget in seconds")
    p.add_argument("--jobs", type=int, default=1,
                   help="solve properties concurrently")
    p.add_argument("--single-query", action="store_true",
                   help="decide all properties in one satisfiability query")
    p.add_argument("--no-simplify", action="store_true",
                   help="disable constant folding and forward substitution")
    p.add_argument("--show-ssa", action="store_true",
                   help="dump the SSA equation system")
    p.add_argument("--show-vcs", action="store_true",
                   help="dump the property list, one line per VC")
    p.add_argument("--smt2", default=None, metavar="FILE",
                   help="write the SMT-LIB2 encoding to FILE")
    p.add_argument("--dimacs", default=None, metavar="FILE",
                   help="write the CNF of the built-in solver to FILE")
    p.add_argument("--kv-trace", action="store_true",
                   help="machine-readable key/value trace records")
    p.add_argument("--no-traces", action="store_true",
                   help="suppress counterexample traces")
    p.add_argument("--int-width", type=int, default=32)
    p.add_argument("--char-width", type=int, default=8)
    p.add_argument("--short-width", type=int, default=16)
    p.add_argument("--long-width", type=int, default=64)
    return p


def parse_unwindset(text: str) -> dict[int, int]:
    out: dict[int, int] = {}
    if not text:
        return out
    for part in text.split(","):
        loop_id, _, bound = part.partition(":")
        out[int(loop_id)] = int(bound)
    return out


def config_from_args(args) -> RunConfig:
    checks = ChecksConfig(
        bounds=not args.no_bounds_check,
        div_by_zero=not args.no_div_by_zero_check,
        pointer=not args.no_pointer_check,
        signed_overflow=args.overflow_check,
        strict_unsigned=args.strict_unsigned_overflow,
    )
    widths = Widths(char=args.char_width, short=args.short_width,
                    int_=args.int_width, long=args.long_width)
    return RunConfig(
        path=args.file,
        unwind=args.unwind,
        unwindset=parse_unwindset(args.unwindset),
        unwinding_assertions=not args.no_unwinding_assertions,
        checks=checks,
        mode=INTEGER_REAL if args.int_encoding else BITVECTOR,
        solver=args.solver,
        solver_command=args.solver_command,
        timeout=args.timeout,
        jobs=args.jobs,
        simplify=not args.no_simplify,
        widths=widths,
        single_query=args.single_query,
        show_ssa=args.show_ssa,
        show_vcs=args.show_vcs,
        smt2_out=args.smt2,
        dimacs_out=args.dimacs,
        kv_trace=args.kv_trace,
    )


def main(argv: list[str] | None = None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else 0
    try:
        cfg = config_from_args(args)
        if cfg.unwind < 1:
            print("error: --unwind must be >= 1", file=sys.stderr)
            return EXIT_USAGE
        rep = verify(cfg)
        print(render_report(rep, show_traces=not args.no_traces,
                            kv_trace=args.kv_trace))
        return rep.exit_code
    except DiagnosticsError as e:
        for d in e.diagnostics:
            print(str(d), file=sys.stderr)
        return EXIT_USAGE
    except FileNotFoundError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_USAGE
    except InternalError as e:
        print(f"internal error: {e}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
