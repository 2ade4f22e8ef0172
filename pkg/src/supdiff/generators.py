"""Seeded random instances for property tests and experiment scripts.

Coefficients are small integers so that exact arithmetic stays cheap; domains
are half-spaces placed so that the chosen base point lies in them (sometimes
on the boundary, which is where normal cones become interesting).
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from . import polykernel as pk
from .convexfn import Affine, ImproperNegInf, Indicator, MaxAffine, Restricted
from .optimality import ConvexProgram
from .suprema import FunctionFamily


@dataclass
class GenConfig:
    coef: int = 2
    max_pieces: int = 3
    max_domain_rows: int = 2
    boundary_prob: float = 0.5


def rand_vec(rng: random.Random, n: int, lo: int = -2, hi: int = 2, nonzero: bool = False) -> tuple:
    while True:
        v = tuple(Fraction(rng.randint(lo, hi)) for _ in range(n))
        if not nonzero or any(v):
            return v


def rand_point(rng: random.Random, n: int) -> tuple:
    return rand_vec(rng, n, -1, 1)


def rand_hrep_polyhedron(rng: random.Random, n: int, m: int) -> pk.Polyhedron:
    rows = [(rand_vec(rng, n, nonzero=True), Fraction(rng.randint(-1, 3))) for _ in range(m)]
    return pk.from_hrep(rows, n)


def rand_nonempty_polyhedron(rng: random.Random, n: int, max_rows: int = 4) -> pk.Polyhedron:
    while True:
        P = rand_hrep_polyhedron(rng, n, rng.randint(0, max_rows))
        if not P.is_empty():
            return P


def rand_bounded_polyhedron(rng: random.Random, n: int, max_points: int = 3) -> pk.Polyhedron:
    return pk.from_vrep([rand_vec(rng, n) for _ in range(rng.randint(1, max_points))], [], n)


def rand_domain(rng: random.Random, n: int, x: tuple, cfg: GenConfig = GenConfig()) -> pk.Polyhedron:
    """Half-spaces a.y <= a.x + s with s in {0, 1, 2}; x always belongs."""
    rows = []
    for _ in range(rng.randint(1, cfg.max_domain_rows)):
        a = rand_vec(rng, n, -cfg.coef, cfg.coef, nonzero=True)
        slack = 0 if rng.random() < cfg.boundary_prob else rng.randint(1, 2)
        rows.append((a, pk.dot(a, x) + slack))
    return pk.from_hrep(rows, n)


def rand_pieces(rng: random.Random, n: int, k: int, cfg: GenConfig = GenConfig()) -> list:
    return [(rand_vec(rng, n, -cfg.coef, cfg.coef), Fraction(rng.randint(-2, 2))) for _ in range(k)]


def rand_proper_function(rng: random.Random, n: int, x: tuple, cfg: GenConfig = GenConfig()):
    kind = rng.choice(["affine", "affine", "max_affine", "max_affine", "restricted", "indicator"])
    if kind == "affine":
        a, b = rand_pieces(rng, n, 1, cfg)[0]
        return Affine(a, b)
    if kind == "max_affine":
        return MaxAffine(rand_pieces(rng, n, rng.randint(1, cfg.max_pieces), cfg))
    if kind == "restricted":
        return Restricted(rand_pieces(rng, n, rng.randint(0, cfg.max_pieces), cfg), rand_domain(rng, n, x, cfg))
    return Indicator(rand_domain(rng, n, x, cfg))


def rand_family(
    rng: random.Random,
    n: int | None = None,
    size: int | None = None,
    improper: bool = False,
    cfg: GenConfig = GenConfig(),
):
    """A family with x ∈ dom f.  With ``improper`` at least one entry is improper."""
    n = n or rng.randint(1, 3)
    size = size or rng.randint(1, 8)
    x = rand_point(rng, n)
    entries = {}
    for i in range(size):
        entries[f"t{i}"] = rand_proper_function(rng, n, x, cfg)
    if improper:
        k = rng.randint(1, max(1, size // 2))
        for i in rng.sample(range(size), k):
            entries[f"t{i}"] = ImproperNegInf(rand_domain(rng, n, x, cfg))
    return FunctionFamily(entries, n), x


def rand_max_affine_family(rng: random.Random, n: int, m: int):
    x = rand_point(rng, n)
    entries = {f"t{i}": Affine(*rand_pieces(rng, n, 1)[0]) for i in range(m)}
    return FunctionFamily(entries, n), x


def rand_program(rng: random.Random, n: int | None = None):
    """Program with a box, 1-3 random constraints with 0 strictly feasible, and a random objective."""
    n = n or rng.randint(1, 3)
    entries = {}
    for i in range(n):
        e = [0] * n
        e[i] = 1
        entries[f"box+{i}"] = Affine(e, 3)
        e = [0] * n
        e[i] = -1
        entries[f"box-{i}"] = Affine(e, 3)
    for i in range(rng.randint(1, 3)):
        k = rng.randint(1, 2)
        pieces = [(rand_vec(rng, n), Fraction(rng.randint(1, 3))) for _ in range(k)]
        entries[f"c{i}"] = Affine(*pieces[0]) if k == 1 else MaxAffine(pieces)
    kind = rng.choice(["affine", "max_affine", "restricted"])
    pieces = rand_pieces(rng, n, 1 if kind == "affine" else rng.randint(1, 3))
    if kind == "affine":
        f0 = Affine(*pieces[0])
    elif kind == "max_affine":
        f0 = MaxAffine(pieces)
    else:
        a = rand_vec(rng, n, nonzero=True)
        f0 = Restricted(pieces, pk.from_hrep([(a, rng.randint(1, 2))], n))
    return ConvexProgram(f0, FunctionFamily(entries, n))
