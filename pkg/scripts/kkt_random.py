#!/usr/bin/env python3
"""Certify optimal and suboptimal points of random convex programs and tally the certificate kinds."""

import argparse
import random
from collections import Counter

from supdiff.generators import rand_program
from supdiff.optimality import Refutation, is_optimal, kkt_certify, oracle_solve, slater_point, verify_certificate


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = random.Random(args.seed)
    kinds, errors = Counter(), 0
    for i in range(args.count):
        prog = rand_program(rng)
        _, xstar = oracle_solve(prog)
        x0 = slater_point(prog)
        points = [x0] + ([xstar, tuple((a + b) / 2 for a, b in zip(xstar, x0))] if xstar else [])
        for x in points:
            cert = kkt_certify(prog, x)
            kinds[type(cert).__name__] += 1
            if not verify_certificate(prog, x, cert) or isinstance(cert, Refutation) == is_optimal(prog, x):
                errors += 1
                print(f"program {i}: wrong verdict at {x}")
    for name, k in sorted(kinds.items()):
        print(f"{name:>16}: {k}")
    print(f"{errors} errors")
    raise SystemExit(1 if errors else 0)


if __name__ == "__main__":
    main()
