"""kappa residue for every generic triple with a0 = 0, next to the closed form.

    python3 scripts/kappa_table.py --p 13
"""
import argparse

from gl3fl.combinatorics import is_generic
from gl3fl.padic_ps import compute_kappa, default_chi, jacobi_kappas, kappa_expected


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=11)
    ap.add_argument("--precision", type=int, default=12)
    args = ap.parse_args()
    p = args.p
    triples = [(a2, a1, 0) for a2 in range(p) for a1 in range(a2) if is_generic(a2, a1, 0, p)]
    print(f"{'triple':>12} {'kappa':>6} {'formula':>8} {'jacobi':>7}")
    for t in triples:
        K = compute_kappa(t, default_chi(*t, p), args.precision)
        J = jacobi_kappas(*t, p, args.precision)
        print(f"{str(t):>12} {K.residue:>6} {kappa_expected(*t, p):>8} {'ok' if J.ok else 'BAD':>7}")


if __name__ == "__main__":
    main()
