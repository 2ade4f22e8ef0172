"""Polyhedral lsc convex functions with exact ε-subdifferentials.

Every proper variant is ``x ↦ max_i (<a_i, x> - b_i) + I_D(x)``; an empty
piece list stands for the zero function.  ε-subdifferentials come from the
epigraph of the conjugate,

    epi f* = co{(a_i, b_i)} + cone{(0, 1)} + epi σ_D,

cut by ``r <= <g, x> - f(x) + ε`` and projected onto the ``g`` coordinates.
The membership oracle instead solves the conjugate LP directly (Fenchel–Young),
so the two routes share no code beyond the LP and the kernel.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import product
from typing import Iterable, Sequence, Union

from . import polykernel as pk
from .lp import UNBOUNDED, linprog
from .polykernel import INF, NEG_INF, Polyhedron, dot, vec

Piece = tuple  # (a: Vec, b: Fraction), meaning <a, x> - b


def _pieces(raw: Iterable) -> tuple:
    out = []
    for p in raw:
        a, b = p
        out.append((vec(a), Fraction(b)))
    return tuple(out)


def _check_piece_dims(pieces, dim):
    for a, _ in pieces:
        if len(a) != dim:
            raise ValueError(f"piece slope {a} has dimension {len(a)}, expected {dim}")


@dataclass(frozen=True)
class Affine:
    a: tuple
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", vec(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    @property
    def dim(self) -> int:
        return len(self.a)


@dataclass(frozen=True)
class MaxAffine:
    pieces: tuple

    def __post_init__(self):
        ps = _pieces(self.pieces)
        if not ps:
            raise ValueError("MaxAffine needs at least one piece")
        _check_piece_dims(ps, len(ps[0][0]))
        object.__setattr__(self, "pieces", ps)

    @property
    def dim(self) -> int:
        return len(self.pieces[0][0])


@dataclass(frozen=True)
class Restricted:
    pieces: tuple
    domain: Polyhedron

    def __post_init__(self):
        ps = _pieces(self.pieces)
        _check_piece_dims(ps, self.domain.dim)
        if self.domain.is_empty():
            raise ValueError("Restricted requires a nonempty domain")
        object.__setattr__(self, "pieces", ps)

    @property
    def dim(self) -> int:
        return self.domain.dim


@dataclass(frozen=True)
class Indicator:
    domain: Polyhedron

    @property
    def dim(self) -> int:
        return self.domain.dim


@dataclass(frozen=True)
class ImproperNegInf:
    domain: Polyhedron

    def __post_init__(self):
        if self.domain.is_empty():
            raise ValueError("ImproperNegInf requires a nonempty domain")

    @property
    def dim(self) -> int:
        return self.domain.dim


ConvexFunction = Union[Affine, MaxAffine, Restricted, Indicator, ImproperNegInf]


def pieces_of(f: ConvexFunction) -> tuple:
    """Affine pieces of a proper variant; the zero function gives one zero piece."""
    if isinstance(f, Affine):
        return ((f.a, f.b),)
    if isinstance(f, MaxAffine):
        return f.pieces
    if isinstance(f, Restricted):
        if f.pieces:
            return f.pieces
    elif not isinstance(f, Indicator):
        raise ValueError("improper function has no affine pieces")
    zero = tuple(Fraction(0) for _ in range(f.dim))
    return ((zero, Fraction(0)),)


def domain(f: ConvexFunction) -> Polyhedron:
    if isinstance(f, (Affine, MaxAffine)):
        return pk.whole_space(f.dim)
    return f.domain


def is_proper(f: ConvexFunction) -> bool:
    if isinstance(f, ImproperNegInf):
        return False
    if isinstance(f, Indicator):
        return not f.domain.is_empty()
    return True


def evaluate(f: ConvexFunction, x: Sequence):
    x = vec(x)
    if len(x) != f.dim:
        raise ValueError(f"point has dimension {len(x)}, expected {f.dim}")
    if not isinstance(f, (Affine, MaxAffine)) and not pk.contains_point(f.domain, x):
        return INF
    if isinstance(f, ImproperNegInf):
        return NEG_INF
    return max(dot(a, x) - b for a, b in pieces_of(f))


def conjugate_epigraph(f: ConvexFunction) -> Polyhedron:
    """epi f* as a polyhedron in dimension n+1 (coordinates (g, r))."""
    n = f.dim
    up = tuple(Fraction(0) for _ in range(n)) + (Fraction(1),)
    base = pk.from_vrep([a + (b,) for a, b in pieces_of(f)], [up], n + 1, _internal=True)
    if isinstance(f, (Affine, MaxAffine)):
        return base
    verts, rays = f.domain.gens_raw()
    # epi σ_D = {(u, r) : <u, v> - r <= 0 for vertices v, <u, ρ> <= 0 for rays ρ}
    rows = [(v + (Fraction(-1),), Fraction(0)) for v in verts]
    rows += [(r + (Fraction(0),), Fraction(0)) for r in rays]
    epi_sigma = pk.from_hrep(rows, n + 1, _internal=True)
    return pk.minkowski_sum(base, epi_sigma)


@lru_cache(maxsize=8192)
def _eps_subdiff_cached(f: ConvexFunction, x: tuple, eps: Fraction) -> Polyhedron:
    n = f.dim
    if isinstance(f, ImproperNegInf):
        return pk.empty(n, _internal=True)
    fx = evaluate(f, x)
    if fx == INF:
        return pk.empty(n, _internal=True)
    if isinstance(f, Affine):
        return pk.point(f.a)
    epi = conjugate_epigraph(f)
    # r - <g, x> <= eps - f(x)
    cut = pk.from_hrep([(tuple(-xi for xi in x) + (Fraction(1),), eps - fx)], n + 1, _internal=True)
    return pk.project_last(pk.intersect(epi, cut))


def eps_subdifferential(f: ConvexFunction, x: Sequence, eps) -> Polyhedron:
    eps = Fraction(eps)
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    x = vec(x)
    if len(x) != f.dim:
        raise ValueError(f"point has dimension {len(x)}, expected {f.dim}")
    return _eps_subdiff_cached(f, x, eps)


def eps_subdifferential_scaled(f: ConvexFunction, alpha, x: Sequence, eps) -> Polyhedron:
    """∂_ε(αf)(x) = α ∂_{ε/α} f(x)."""
    alpha = Fraction(alpha)
    if alpha <= 0:
        raise ValueError("alpha must be positive")
    return pk.scale(eps_subdifferential(f, x, Fraction(eps) / alpha), alpha)


def conjugate_value(f: ConvexFunction, g: Sequence):
    """f*(g) by the LP  max <g, y> - z  s.t.  <a_i, y> - b_i <= z,  y ∈ D."""
    if not is_proper(f):
        raise ValueError("conjugate of improper function not supported")
    g = vec(g)
    A, rhs = [], []
    for a, b in pieces_of(f):
        A.append(list(a) + [-1])
        rhs.append(b)
    if not isinstance(f, (Affine, MaxAffine)):
        for a, b in f.domain.hrep_raw():
            A.append(list(a) + [0])
            rhs.append(b)
    res = linprog(list(g) + [-1], A, rhs, maximize=True)
    if res.status == UNBOUNDED:
        return INF
    return res.value


def subgradient_membership(f: ConvexFunction, x: Sequence, eps, g: Sequence) -> bool:
    """Fenchel–Young test  f*(g) + f(x) - <g, x> <= ε."""
    fx = evaluate(f, x)
    if fx in (INF, NEG_INF):
        raise ValueError("membership needs f(x) finite")
    fstar = conjugate_value(f, g)
    if fstar == INF:
        return False
    return fstar + fx - dot(g, vec(x)) <= Fraction(eps)


def floor_max(f: ConvexFunction, c) -> ConvexFunction:
    """max{f, c} for a proper variant and a constant c."""
    c = Fraction(c)
    zero = tuple(Fraction(0) for _ in range(f.dim))
    ps = pieces_of(f) + ((zero, -c),)
    if isinstance(f, (Affine, MaxAffine)):
        return MaxAffine(ps)
    return Restricted(ps, f.domain)


def weighted_sum(fs: Sequence[ConvexFunction], weights: Sequence) -> ConvexFunction:
    """Σ λ_t f_t for proper variants and λ_t >= 0, with 0·(+∞) = +∞.

    Zero weights drop the pieces but keep the domain restriction.
    """
    if not fs:
        raise ValueError("weighted sum of no functions")
    n = fs[0].dim
    lists = []
    doms = []
    for f, w in zip(fs, weights):
        w = Fraction(w)
        if w < 0:
            raise ValueError("weights must be nonnegative")
        if not is_proper(f):
            raise ValueError("weighted sum of improper functions not supported")
        if not isinstance(f, (Affine, MaxAffine)):
            doms.append(f.domain)
        if w:
            lists.append([(tuple(w * ai for ai in a), w * b) for a, b in pieces_of(f)])
    zero = tuple(Fraction(0) for _ in range(n))
    combined = set()
    for combo in product(*lists):
        a = zero
        b = Fraction(0)
        for pa, pb in combo:
            a = tuple(x + y for x, y in zip(a, pa))
            b += pb
        combined.add((a, b))
    ps = tuple(sorted(combined))
    if not doms:
        return MaxAffine(ps)
    return Restricted(ps, pk.intersect_all(doms, n))
