"""Dimensions of the GL3(F_p)-spans of f and S(f) inside the principal series.

dim <G S(f)> should be the Weyl dimension of (a0+p-1, a1, a2-p+1).

    python3 scripts/span_dimensions.py --p 11 --triple 6,3,0
"""
import argparse

from gl3fl import finite_group as fg


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=11)
    ap.add_argument("--triple", default="6,3,0")
    args = ap.parse_args()
    p = args.p
    a2, a1, a0 = (int(x) for x in args.triple.split(","))
    chi = (a2, a1, a0)
    f = fg.canonical_eigenvector(p, chi, (a1, a2, a0), anchor=fg.s1(p))
    Sf = fg.op_S(a2, a1, a0, p).apply(f)
    print(f"flag space dim        {fg.flag_space(p).dim}")
    print(f"dim <G f>             {fg.submodule_dim([f])}")
    print(f"dim <G S(f)>          {fg.submodule_dim([Sf])}")
    print(f"Weyl dim of target    {fg.weyl_dimension((a0 + p - 1, a1, a2 - p + 1))}")


if __name__ == "__main__":
    main()
