"""Constant in S' Pi = c S for every unit t, against (-1)^(a-b) (b-c)/(a-b) t.

    python3 scripts/lgc_sweep.py --p 11 --triple 6,3,0
"""
import argparse
import time

from gl3fl.padic_ps import lgc_demo


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=11)
    ap.add_argument("--triple", default="6,3,0")
    ap.add_argument("--precision", type=int, default=12)
    args = ap.parse_args()
    a, b, c = (int(x) for x in args.triple.split(","))
    print(f"p={args.p} (a,b,c)=({a},{b},{c}) N={args.precision}")
    print(f"{'t':>3} {'constant':>9} {'predicted':>9} {'kappa':>6} {'ok':>4} {'sec':>6}")
    for t in range(1, args.p):
        t0 = time.perf_counter()
        r = lgc_demo(a, b, c, t, args.p, args.precision)
        print(f"{t:>3} {r.constant_residue:>9} {r.expected_residue:>9} {r.kappa.residue:>6} "
              f"{'yes' if r.ok else 'NO':>4} {time.perf_counter() - t0:>6.1f}")


if __name__ == "__main__":
    main()
