#!/usr/bin/env python3
"""Sweep the truncated family f_t(x) = t(x - 1), t = 0..T, over points and ε.

For each (x, ε) prints the active set, the weighted inactive set B and the
normal cone, with and without the closure hint along +1.
"""

import argparse
from fractions import Fraction

from supdiff import polykernel as pk
from supdiff.convexfn import Affine
from supdiff.suprema import FunctionFamily, component_sets, normal_cone_dom_proper, subdifferential_sup


def fmt(P):
    if P.is_empty():
        return "empty"
    lo = min(v[0] for v in P.vertices)
    hi = max(v[0] for v in P.vertices)
    left = "-inf" if any(r[0] < 0 for r in P.rays) else str(lo)
    right = "+inf" if any(r[0] > 0 for r in P.rays) else str(hi)
    return f"[{left}, {right}]"


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--top", type=int, default=10, help="largest index T")
    ap.add_argument("--points", default="0,1/2,1")
    ap.add_argument("--eps", default="1,1/2,1/10")
    args = ap.parse_args()

    plain = FunctionFamily({t: Affine([t], t) for t in range(args.top + 1)}, 1)
    hinted = FunctionFamily(plain.entries, 1, ([1],))
    points = [Fraction(p) for p in args.points.split(",")]
    epss = [Fraction(e) for e in args.eps.split(",")]
    print(f"{'x':>5} {'eps':>5} {'active':>12} {'B':>14} {'N':>10} {'N hinted':>10}  subdiff")
    for x in points:
        sub = subdifferential_sup(plain, [x]).set
        for e in epss:
            comps = component_sets(plain, [x], e)
            n_plain = normal_cone_dom_proper(plain, [x], e).set
            n_hint = normal_cone_dom_proper(hinted, [x], e).set
            active = ",".join(str(t) for t in comps.active)
            print(f"{str(x):>5} {str(e):>5} {active:>12} {fmt(comps.B):>14} {fmt(n_plain):>10} {fmt(n_hint):>10}  {fmt(sub)}")
    assert pk.set_equal(normal_cone_dom_proper(plain, [0], 1).set, pk.origin(1))


if __name__ == "__main__":
    main()
