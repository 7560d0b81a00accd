"""Shared program sources used across the test suite."""

FIG2 = """int main() {
int a[2], i, x;
if (x==0)
  a[i]=0;
else
  a[i+2]=1;
assert(a[i+1]==1);
}
"""

FIG5 = """int main() {
  int a[2], i, x, *p;
  p=a;
  if (x==0)
    a[i]=0;
  else
    a[i+2]=1;
  assert(*(p+2)==1);
}
"""

FIG6 = """struct x {
  int a[2];
  char b;
} y;
int main(void) {
  struct x *p;
  p=&y;
  p->a[1]=1;
  p->b='c';
  assert(p->a[1]==1);
  assert(p->b=='c');
}
"""

EQ5 = """int main() {
  int a, b;
  a = nondet_int();
  b = nondet_int();
  assume(a > 0 && b > 0);
  assert(a + b > 0);
}
"""

# constant-index loop in the style of a table-driven checksum: everything
# folds to constants, so the encoding needs stores only
CRC_STYLE = """int main() {
  unsigned char it[16] = {0, 3, 6, 5, 12, 15, 10, 9, 11, 8, 13, 14, 7, 4, 1, 2};
  unsigned char rc[16];
  int j;
  for (j = 0; j < 16; j++) {
    rc[j] = (unsigned char)((it[j & 15] << 4) | it[j >> 4]);
  }
  assert(rc[1] == ((3 << 4) | 0));
}
"""

TRIVIAL_OK = """int main() {
  assert(1);
}
"""

WHILE_UNWIND = """int main() {
  int i;
  while (i < 10)
    i = i + 1;
  assert(1);
}
"""

STRAIGHT_LINE = """int main() {
  int x;
  x = 1;
  x = x + 1;
  assert(x == 2);
}
"""

SAME_JOIN = """int main() {
  int c, y;
  c = nondet_int();
  if (c) y = 1; else y = 1;
  assert(y == 1);
}
"""


def regression_corpus() -> dict[str, tuple[str, int, int]]:
    """name -> (source, unwind bound, expected exit code)."""
    return {
        "fig2": (FIG2, 1, 10),
        "fig5": (FIG5, 1, 10),
        "fig6": (FIG6, 1, 0),
        "trivial_ok": (TRIVIAL_OK, 1, 0),
        "straight_line": (STRAIGHT_LINE, 1, 0),
        "same_join": (SAME_JOIN, 1, 0),
        "crc_style": (CRC_STYLE, 16, 0),
        "while_unwind": (WHILE_UNWIND, 2, 10),
    }
