"""Which residual filtration constants keep a diagonal module in its Case.

Runs the full Breuil-to-FL pipeline on every constant vector over F_p and
compares the outcome with constants_admissible.

    python3 scripts/case_admissibility.py --p 7
"""
import argparse
import itertools
from collections import Counter

from gl3fl import breuil as br
from gl3fl.scalars import Fq


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--p", type=int, default=11)
    ap.add_argument("--triple", default="6,3,0")
    args = ap.parse_args()
    p = args.p
    triple = tuple(int(x) for x in args.triple.split(","))
    F = Fq(p)
    alphas = (2, 3, 5)
    for shape in (br.CASE_A, br.CASE_B, br.CASE_C):
        _, unknowns = br.shape_template(shape, triple, p)
        tally = Counter()
        for consts in itertools.product(range(p), repeat=len(unknowns)):
            try:
                fl = br.breuil_to_fl(br.diagonal_case_module(shape, triple, p, alphas, consts))
                works = fl == br.expected_case_fl(shape, alphas, F)
            except (ArithmeticError, ValueError):
                works = False
            tally[(br.constants_admissible(shape, consts, F), works)] += 1
        print(f"Case {shape}: {len(unknowns)} constants, "
              f"admissible&works={tally[(True, True)]} rejected&fails={tally[(False, False)]} "
              f"mismatches={tally[(True, False)] + tally[(False, True)]}")


if __name__ == "__main__":
    main()
