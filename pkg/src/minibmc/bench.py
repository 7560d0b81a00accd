"""Desk-scale parametric benchmarks and the scaling report.

Generates sorting/summing style programs parameterized by N, verifies them
with the built-in solver, and writes a CSV of per-run measurements plus a
figure of encoding size against N next to it.
"""
from __future__ import annotations

import argparse
import csv
import sys
import time
from dataclasses import dataclass

from .pipeline import RunConfig, build_ssa, verify
from .vcgen import introduce_literals


def bubble_sort_src(n: int) -> str:
    """Sort N nondet chars, then assert the result is ordered."""
    return f"""
int main() {{
  char a[{n}];
  int i, j;
  char t;
  for (i = 0; i < {n}; i++)
    a[i] = nondet_char();
  for (i = 0; i < {n - 1}; i++)
    for (j = 0; j < {n - 1} - i; j++)
      if (a[j] > a[j+1]) {{
        t = a[j];
        a[j] = a[j+1];
        a[j+1] = t;
      }}
  for (i = 0; i < {n - 1}; i++)
    assert(a[i] <= a[i+1]);
}}
"""


def sum_array_src(n: int) -> str:
    """Fill an array with known values and assert the running total."""
    total = n * (n - 1) // 2
    return f"""
int main() {{
  int a[{n}];
  int i, sum;
  for (i = 0; i < {n}; i++)
    a[i] = i;
  sum = 0;
  for (i = 0; i < {n}; i++)
    sum = sum + a[i];
  assert(sum == {total});
}}
"""


FAMILIES = {
    "bubble": bubble_sort_src,
    "sum": sum_array_src,
}


@dataclass
class BenchRow:
    family: str
    n: int
    ssa_vars: int
    properties: int
    encode_seconds: float
    decide_seconds: float
    verdict: str


def run_family(family: str, ns: list[int], timeout: float = 120.0) -> list[BenchRow]:
    rows: list[BenchRow] = []
    gen = FAMILIES[family]
    for n in ns:
        cfg = RunConfig(path=f"{family}_{n}.c", source=gen(n), unwind=n,
                        solver="builtin", timeout=timeout)
        ssa = build_ssa(cfg)
        nvars = ssa.var_count()
        nprops = len(introduce_literals(ssa).properties)
        t0 = time.monotonic()
        rep = verify(cfg)
        wall = time.monotonic() - t0
        verdict = ("clean" if rep.exit_code == 0
                   else "violated" if rep.exit_code == 10 else "failed")
        rows.append(BenchRow(family, n, nvars, nprops,
                             rep.encode_seconds, rep.decide_seconds, verdict))
        print(f"{family} N={n}: vars={nvars} props={nprops} "
              f"verdict={verdict} wall={wall:.2f}s", file=sys.stderr)
    return rows


def write_csv(rows: list[BenchRow], path: str):
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(["family", "n", "ssa_vars", "properties",
                    "encode_seconds", "decide_seconds", "verdict"])
        for r in rows:
            w.writerow([r.family, r.n, r.ssa_vars, r.properties,
                        f"{r.encode_seconds:.4f}", f"{r.decide_seconds:.4f}",
                        r.verdict])


def write_figure(rows: list[BenchRow], path: str):
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(9, 3.5))
    for family in sorted({r.family for r in rows}):
        fam = sorted((r for r in rows if r.family == family), key=lambda r: r.n)
        ns = [r.n for r in fam]
        ax1.plot(ns, [r.ssa_vars for r in fam], marker="o", label=family)
        ax2.plot(ns, [r.encode_seconds + r.decide_seconds for r in fam],
                 marker="o", label=family)
    ax1.set_xlabel("N")
    ax1.set_ylabel("SSA variables")
    ax1.set_title("encoding size")
    ax2.set_xlabel("N")
    ax2.set_ylabel("seconds")
    ax2.set_title("verification time")
    for ax in (ax1, ax2):
        ax.legend()
        ax.grid(True, alpha=0.3)
    fig.tight_layout()
    fig.savefig(path, dpi=120)
    plt.close(fig)


def main(argv: list[str] | None = None) -> int:
    p = argparse.ArgumentParser(
        prog="minibmc-bench",
        description="Run the parametric benchmark families and write a CSV "
                    "plus a scaling figure.")
    p.add_argument("--families", default="bubble,sum",
                   help="comma-separated subset of: " + ",".join(FAMILIES))
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--min-n", type=int, default=2)
    p.add_argument("--csv", default="bench.csv")
    p.add_argument("--figure", default="bench.png")
    p.add_argument("--timeout", type=float, default=120.0)
    args = p.parse_args(argv)
    rows: list[BenchRow] = []
    ns = list(range(args.min_n, args.max_n + 1))
    for family in args.families.split(","):
        family = family.strip()
        if family not in FAMILIES:
            print(f"unknown family {family!r}", file=sys.stderr)
            return 1
        rows.extend(run_family(family, ns, args.timeout))
    write_csv(rows, args.csv)
    write_figure(rows, args.figure)
    print(f"wrote {args.csv} and {args.figure}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
