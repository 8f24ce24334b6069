"""Print the nonzero structure constants of a builtin law as a table.

    python3 scripts/constants_table.py multiplicative --p 3 --m 1
"""

import argparse

from hsfield.formal_group import BUILTINS, fgl_builtin, fgl_truncate, structure_constants


def fmt(i):
    return "(" + ",".join(map(str, i)) + ")"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("name", choices=BUILTINS)
    ap.add_argument("--p", type=int, default=2)
    ap.add_argument("--m", type=int, default=1)
    ap.add_argument("--e", type=int, default=1, help="dimension of the additive law")
    args = ap.parse_args()
    g = fgl_truncate(fgl_builtin(args.name, args.p, args.e), args.m)
    sc = structure_constants(g)
    rows = sc.nonzero()
    width = max(len(fmt(i)) for i in g.indices())
    print(f"{'i':>{width}} {'j':>{width}} {'k':>{width}}  c")
    for i, j, k, c in rows:
        print(f"{fmt(i):>{width}} {fmt(j):>{width}} {fmt(k):>{width}}  {c}")
    print(f"# {len(rows)} nonzero constants, p^(me) = {len(g.indices())}")


if __name__ == "__main__":
    main()
