#!/usr/bin/env python3
"""Compare every normal-cone and subdifferential formula with the oracles on random families."""

import argparse
import random
import time
from collections import Counter

from supdiff import polykernel as pk
from supdiff.generators import rand_family
from supdiff.suprema import (
    HypothesisError,
    continuity_hypothesis_family,
    normal_cone_dom,
    normal_cone_dom_mainfc,
    normal_cone_dom_parameterfree,
    normal_cone_split,
    oracle_normal_cone_dom,
    oracle_subdifferential,
    subdifferential_brondsted,
    subdifferential_refdem16,
    subdifferential_split,
    subdifferential_sup,
)


def check(F, x):
    """Yield (formula, agrees) pairs for one instance."""
    N = oracle_normal_cone_dom(F, x)
    S = oracle_subdifferential(F, x)
    yield "normal_cone_dom", pk.set_equal(normal_cone_dom(F, x, 1).set, N)
    yield "parameterfree", pk.set_equal(normal_cone_dom_parameterfree(F, x, 1).set, N)
    yield "mainfc", pk.set_equal(normal_cone_dom_mainfc(F, x).set, N)
    yield "subdiff_sup", pk.set_equal(subdifferential_sup(F, x).set, S)
    yield "refdem16", pk.set_equal(subdifferential_refdem16(F, x).set, S)
    if continuity_hypothesis_family(F):
        yield "normal_cone_split", pk.set_equal(normal_cone_split(F, x, 1)[3].set, N)
        yield "subdiff_split", pk.set_equal(subdifferential_split(F, x)[3].set, S)
    try:
        yield "brondsted", pk.set_equal(subdifferential_brondsted(F, x).set, S)
    except HypothesisError:
        pass


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--count", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--improper", type=float, default=0.2, help="fraction of families with improper entries")
    args = ap.parse_args()

    rng = random.Random(args.seed)
    ran, bad = Counter(), Counter()
    start = time.perf_counter()
    for i in range(args.count):
        F, x = rand_family(rng, improper=rng.random() < args.improper)
        for name, ok in check(F, x):
            ran[name] += 1
            if not ok:
                bad[name] += 1
                print(f"mismatch: instance {i}, formula {name}")
    for name in sorted(ran):
        print(f"{name:>18}: {ran[name] - bad[name]}/{ran[name]} agree")
    print(f"{time.perf_counter() - start:.1f}s")
    raise SystemExit(1 if bad else 0)


if __name__ == "__main__":
    main()
