"""Exact polyhedra with lazily synchronised V- and H-representations.

A :class:`Polyhedron` stores whichever representation it was built from and
computes the other on demand with an integer double-description routine.
Operations that only need generators (sums, hulls, projections, recession
cones) work on the raw generators; canonical minimal forms are produced only
when a caller asks for ``vertices``/``rays``/``inequalities``.

All coordinates are :class:`fractions.Fraction`.  Extended reals are
represented by ``Fraction`` for finite values and ``math.inf``/``-math.inf``.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce
from typing import Iterable, Sequence

Vec = tuple  # tuple[Fraction, ...]

INF = math.inf
NEG_INF = -math.inf

HARD_DIM_CAP = 6


def max_dim() -> int:
    """Dimension cap for user-facing polyhedra; ``SUPDIFF_MAX_DIM`` may lower it."""
    raw = os.environ.get("SUPDIFF_MAX_DIM")
    if raw is None:
        return HARD_DIM_CAP
    try:
        val = int(raw)
    except ValueError:
        return HARD_DIM_CAP
    return max(1, min(val, HARD_DIM_CAP))


def ext_add(a, b):
    """Extended-real addition with (+inf) + (-inf) = +inf."""
    if a == INF or b == INF:
        return INF
    if a == NEG_INF or b == NEG_INF:
        return NEG_INF
    return a + b


# ---------------------------------------------------------------------------
# vector helpers


def vec(xs: Iterable) -> Vec:
    return tuple(Fraction(x) for x in xs)


def dot(a: Sequence, b: Sequence):
    return sum((x * y for x, y in zip(a, b)), Fraction(0))


def _int_row(row: Sequence[Fraction]) -> list[int]:
    den = reduce(math.lcm, (Fraction(v).denominator for v in row), 1)
    return [int(Fraction(v) * den) for v in row]


def _primitive(v: Sequence[int]) -> list[int]:
    g = reduce(math.gcd, v, 0)
    if g > 1:
        return [x // g for x in v]
    return list(v)


def primitive(v: Sequence) -> Vec:
    """Scale a nonzero rational vector to a primitive integer vector (same direction)."""
    return tuple(Fraction(x) for x in _primitive(_int_row(v)))


def _idot(a, b) -> int:
    return sum(x * y for x, y in zip(a, b))


# ---------------------------------------------------------------------------
# double description


def _cone_generators(rows: Sequence[Sequence[int]], d: int):
    """Generators of the cone ``{y : r.y <= 0 for r in rows}`` in Z^d.

    Returns ``(lineality, rays)``: a basis of the lineality space and the
    extreme rays modulo it.  Incremental Motzkin double description with the
    combinatorial adjacency test on zero sets (bitmasks over processed rows).
    """
    lin = [[1 if i == j else 0 for i in range(d)] for j in range(d)]
    rays: list[list[int]] = []
    zs: list[int] = []
    for k, a in enumerate(rows):
        bit = 1 << k
        if not any(a):
            zs = [z | bit for z in zs]
            continue
        piv = next((i for i, l in enumerate(lin) if _idot(a, l)), None)
        if piv is not None:
            l = lin.pop(piv)
            al = _idot(a, l)
            if al > 0:
                l = [-x for x in l]
                al = -al
            new_lin = []
            for li in lin:
                c = _idot(a, li)
                if c:
                    li = _primitive([al * x - c * y for x, y in zip(li, l)])
                new_lin.append(li)
            lin = new_lin
            new_rays = []
            for r in rays:
                c = _idot(a, r)
                if c:
                    r = _primitive([-al * x + c * y for x, y in zip(r, l)])
                new_rays.append(r)
            rays = new_rays
            zs = [z | bit for z in zs]
            rays.append(_primitive(l))
            zs.append(bit - 1)
            continue
        vals = [_idot(a, r) for r in rays]
        pos = [i for i, v in enumerate(vals) if v > 0]
        neg = [i for i, v in enumerate(vals) if v < 0]
        if not pos:
            for i, v in enumerate(vals):
                if v == 0:
                    zs[i] |= bit
            continue
        need = d - len(lin) - 2
        added_rays = []
        added_zs = []
        for p in pos:
            for q in neg:
                common = zs[p] & zs[q]
                if bin(common).count("1") < need:
                    continue
                adjacent = True
                for i in range(len(rays)):
                    if i != p and i != q and (zs[i] & common) == common:
                        adjacent = False
                        break
                if not adjacent:
                    continue
                vp, vq = vals[p], -vals[q]
                new = _primitive([vp * x + vq * y for x, y in zip(rays[q], rays[p])])
                added_rays.append(new)
                added_zs.append(common | bit)
        kept_rays = []
        kept_zs = []
        for i, v in enumerate(vals):
            if v < 0:
                kept_rays.append(rays[i])
                kept_zs.append(zs[i])
            elif v == 0:
                kept_rays.append(rays[i])
                kept_zs.append(zs[i] | bit)
        rays = kept_rays + added_rays
        zs = kept_zs + added_zs
    return lin, rays


def _orth_basis(vectors: Sequence[Sequence[Fraction]]) -> list[list[Fraction]]:
    basis: list[list[Fraction]] = []
    for v in vectors:
        w = [Fraction(x) for x in v]
        for b in basis:
            c = dot(w, b) / dot(b, b)
            if c:
                w = [x - c * y for x, y in zip(w, b)]
        if any(w):
            basis.append(w)
    return basis


def _project_out(v: Sequence[Fraction], obasis) -> list[Fraction]:
    w = list(v)
    for b in obasis:
        c = dot(w, b) / dot(b, b)
        if c:
            w = [x - c * y for x, y in zip(w, b)]
    return w


def _rref_rows(vectors: Sequence[Sequence[Fraction]]) -> list[Vec]:
    """Primitive integer rows of the reduced row echelon basis of span(vectors)."""
    rows = [[Fraction(x) for x in v] for v in vectors]
    out: list[list[Fraction]] = []
    if not rows:
        return []
    ncols = len(rows[0])
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(rows)) if rows[i][c] != 0), None)
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        p = rows[r][c]
        rows[r] = [x / p for x in rows[r]]
        for i in range(len(rows)):
            if i != r and rows[i][c] != 0:
                f = rows[i][c]
                rows[i] = [x - f * y for x, y in zip(rows[i], rows[r])]
        r += 1
        if r == len(rows):
            break
    out = [row for row in rows[:r]]
    return [primitive(row) for row in out]


def _canonical_dirs(dirs, lin_rows, obasis) -> list[Vec]:
    """Project directions off the lineality space, make primitive, dedupe, sort."""
    seen = set()
    for r in dirs:
        w = _project_out(r, obasis)
        if any(w):
            seen.add(primitive(w))
    for l in lin_rows:
        seen.add(l)
        seen.add(tuple(-x for x in l))
    return sorted(seen)


def _hrep_to_vrep(dim: int, ineqs) -> tuple[list[Vec], list[Vec]]:
    """Canonical (vertices, rays) of ``{x : a.x <= b}``; lines appear as +/- rays."""
    rows = [_int_row(list(a) + [-b]) for a, b in ineqs]
    rows.append([0] * dim + [-1])
    lin, rays = _cone_generators(rows, dim + 1)
    verts_raw = []
    dirs = []
    for r in rays:
        t = r[-1]
        if t > 0:
            verts_raw.append(tuple(Fraction(x, t) for x in r[:-1]))
        else:
            dirs.append(tuple(Fraction(x) for x in r[:-1]))
    if not verts_raw:
        return [], []
    lin_x = [[Fraction(x) for x in l[:-1]] for l in lin]
    obasis = _orth_basis(lin_x)
    lin_rows = _rref_rows(lin_x)
    verts = sorted({tuple(_project_out(v, obasis)) for v in verts_raw})
    return verts, _canonical_dirs(dirs, lin_rows, obasis)


def _vrep_to_hrep(dim: int, verts, rays) -> list[tuple[Vec, Fraction]]:
    """Canonical irredundant inequalities of ``conv(verts) + cone(rays)``.

    Equalities are emitted as pairs of opposite inequalities.
    """
    if not verts:
        return [(tuple(Fraction(0) for _ in range(dim)), Fraction(-1))]
    rows = [_int_row(list(v) + [1]) for v in verts] + [_int_row(list(r) + [0]) for r in rays]
    lin, gens = _cone_generators(rows, dim + 1)
    # polar generator (a, c) means a.x + c <= 0, i.e. a.x <= -c
    lin_a = [[Fraction(x) for x in l] for l in lin]
    obasis = _orth_basis(lin_a)
    out = set()
    for l in _rref_rows(lin_a):
        if any(l[:-1]):
            out.add((l[:-1], -l[-1]))
            neg = tuple(-x for x in l)
            out.add((neg[:-1], -neg[-1]))
    for g in gens:
        w = _project_out([Fraction(x) for x in g], obasis)
        if not any(w[:-1]):
            continue
        p = primitive(w)
        out.add((p[:-1], -p[-1]))
    return sorted(out)


# ---------------------------------------------------------------------------
# Polyhedron


class DimensionError(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class Polyhedron:
    """Closed convex polyhedron in Q^dim.

    Build with :func:`from_hrep` / :func:`from_vrep` or the helpers below
    rather than calling the constructor directly.
    """

    dim: int
    _h: tuple | None = None
    _g: tuple | None = None
    _canon_v: tuple | None = field(default=None, repr=False)
    _canon_h: tuple | None = field(default=None, repr=False)

    # -- representations -------------------------------------------------

    def hrep_raw(self) -> tuple:
        if self._h is None:
            object.__setattr__(self, "_h", tuple(self.inequalities))
        return self._h

    def gens_raw(self) -> tuple:
        if self._g is None:
            verts, rays = self._canonical_v()
            object.__setattr__(self, "_g", (tuple(verts), tuple(rays)))
        return self._g

    def _canonical_v(self):
        if self._canon_v is None:
            if self._h is not None:
                cv = _hrep_to_vrep(self.dim, self._h)
            else:
                # minimise generators by a round trip through the inequalities
                cv = _hrep_to_vrep(self.dim, self._canonical_h())
            object.__setattr__(self, "_canon_v", (tuple(cv[0]), tuple(cv[1])))
        return self._canon_v

    def _canonical_h(self):
        if self._canon_h is None:
            if self._g is not None:
                ch = _vrep_to_hrep(self.dim, *self._g)
            else:
                verts, rays = self._canonical_v()
                ch = _vrep_to_hrep(self.dim, verts, rays)
            object.__setattr__(self, "_canon_h", tuple(ch))
        return self._canon_h

    @property
    def vertices(self) -> tuple[Vec, ...]:
        return self._canonical_v()[0]

    @property
    def rays(self) -> tuple[Vec, ...]:
        return self._canonical_v()[1]

    @property
    def inequalities(self) -> tuple[tuple[Vec, Fraction], ...]:
        return self._canonical_h()

    def is_empty(self) -> bool:
        return not self.gens_raw()[0]

    def is_bounded(self) -> bool:
        return not self.is_empty() and not self.gens_raw()[1]

    def __repr__(self) -> str:
        if self.is_empty():
            return f"Polyhedron(dim={self.dim}, empty)"

        def fmt(v):
            return "(" + ", ".join(str(x) for x in v) + ")"

        vs = ", ".join(fmt(v) for v in self.vertices)
        rs = ", ".join(fmt(r) for r in self.rays)
        return f"Polyhedron(dim={self.dim}, vertices=[{vs}], rays=[{rs}])"


def _check_dim(dim: int, internal: bool) -> None:
    if dim < 1:
        raise DimensionError(f"dimension must be positive, got {dim}")
    if not internal and dim > max_dim():
        raise DimensionError(f"dimension {dim} exceeds cap {max_dim()}")


def from_hrep(constraints: Iterable, dim: int, _internal: bool = False) -> Polyhedron:
    """Polyhedron ``{x : normal.x <= offset}`` from (normal, offset) pairs."""
    _check_dim(dim, _internal)
    rows = []
    for a, b in constraints:
        a = vec(a)
        if len(a) != dim:
            raise DimensionError(f"normal {a} has dimension {len(a)}, expected {dim}")
        rows.append((a, Fraction(b)))
    return Polyhedron(dim, _h=tuple(rows))


def from_vrep(vertices: Iterable, rays: Iterable = (), dim: int | None = None, _internal: bool = False) -> Polyhedron:
    verts = [vec(v) for v in vertices]
    rs = [vec(r) for r in rays]
    if dim is None:
        if verts:
            dim = len(verts[0])
        elif rs:
            dim = len(rs[0])
        else:
            raise DimensionError("cannot infer dimension of an empty generator list")
    _check_dim(dim, _internal)
    for v in verts + rs:
        if len(v) != dim:
            raise DimensionError(f"generator {v} has dimension {len(v)}, expected {dim}")
    if not verts:
        return empty(dim, _internal=True)
    rs = [r for r in rs if any(r)]
    return Polyhedron(dim, _g=(tuple(verts), tuple(rs)))


def to_vrep(P: Polyhedron) -> tuple[list[Vec], list[Vec]]:
    return list(P.vertices), list(P.rays)


def to_hrep(P: Polyhedron) -> list[tuple[Vec, Fraction]]:
    return list(P.inequalities)


def empty(dim: int, _internal: bool = False) -> Polyhedron:
    _check_dim(dim, _internal)
    return Polyhedron(dim, _g=((), ()), _h=((tuple(Fraction(0) for _ in range(dim)), Fraction(-1)),))


def point(x: Sequence) -> Polyhedron:
    x = vec(x)
    return Polyhedron(len(x), _g=((x,), ()))


def origin(dim: int) -> Polyhedron:
    return point([0] * dim)


def cone(rays: Iterable, dim: int) -> Polyhedron:
    """Cone generated by ``rays`` with apex at the origin."""
    return from_vrep([[0] * dim], rays, dim, _internal=True)


def whole_space(dim: int) -> Polyhedron:
    return Polyhedron(dim, _h=())


def interval(lo, hi) -> Polyhedron:
    """Closed interval in dimension one; ``None`` bounds mean unbounded."""
    rows = []
    if hi is not None:
        rows.append(((1,), hi))
    if lo is not None:
        rows.append(((-1,), -Fraction(lo)))
    return from_hrep(rows, 1)


# ---------------------------------------------------------------------------
# set operations


def contains_point(P: Polyhedron, x: Sequence) -> bool:
    if len(x) != P.dim:
        raise DimensionError(f"point has dimension {len(x)}, expected {P.dim}")
    return all(dot(a, x) <= b for a, b in P.hrep_raw())


def _contains_dir(P: Polyhedron, r: Sequence) -> bool:
    return all(dot(a, r) <= 0 for a, _ in P.hrep_raw())


def subset(P: Polyhedron, Q: Polyhedron) -> bool:
    """Exact inclusion ``P ⊆ Q``."""
    _same_dim(P, Q)
    verts, rays = P.gens_raw()
    if not verts:
        return True
    return all(contains_point(Q, v) for v in verts) and all(_contains_dir(Q, r) for r in rays)


def set_equal(P: Polyhedron, Q: Polyhedron) -> bool:
    return subset(P, Q) and subset(Q, P)


def _same_dim(P: Polyhedron, Q: Polyhedron) -> None:
    if P.dim != Q.dim:
        raise DimensionError(f"dimension mismatch: {P.dim} vs {Q.dim}")


def minkowski_sum(P: Polyhedron, Q: Polyhedron) -> Polyhedron:
    _same_dim(P, Q)
    pv, pr = P.gens_raw()
    qv, qr = Q.gens_raw()
    if not pv or not qv:
        return empty(P.dim, _internal=True)
    verts = {tuple(a + b for a, b in zip(v, w)) for v in pv for w in qv}
    rays = {primitive(r) for r in pr + qr}
    return Polyhedron(P.dim, _g=(tuple(sorted(verts)), tuple(sorted(rays))))


def hull_union(sets: Sequence[Polyhedron], dim: int | None = None) -> Polyhedron:
    """Closed convex hull of the union; empty members are ignored."""
    if dim is None:
        if not sets:
            raise DimensionError("hull of no sets needs an explicit dimension")
        dim = sets[0].dim
    verts: set = set()
    rays: set = set()
    for S in sets:
        if S.dim != dim:
            raise DimensionError(f"dimension mismatch: {S.dim} vs {dim}")
        sv, sr = S.gens_raw()
        if not sv:
            continue
        verts.update(sv)
        rays.update(primitive(r) for r in sr)
    if not verts:
        return empty(dim, _internal=True)
    return Polyhedron(dim, _g=(tuple(sorted(verts)), tuple(sorted(rays))))


def scale(P: Polyhedron, lam) -> Polyhedron:
    lam = Fraction(lam)
    if lam < 0:
        raise ValueError("scale factor must be nonnegative")
    verts, rays = P.gens_raw()
    if not verts:
        return P
    if lam == 0:
        return origin(P.dim)
    return Polyhedron(P.dim, _g=(tuple(tuple(lam * x for x in v) for v in verts), rays))


def negate(P: Polyhedron) -> Polyhedron:
    verts, rays = P.gens_raw()
    if not verts:
        return P
    return Polyhedron(
        P.dim,
        _g=(tuple(tuple(-x for x in v) for v in verts), tuple(tuple(-x for x in r) for r in rays)),
    )


def recession_cone(P: Polyhedron) -> Polyhedron:
    """Cone of P's rays; the empty set recedes to the origin by convention."""
    verts, rays = P.gens_raw()
    return Polyhedron(P.dim, _g=((tuple(Fraction(0) for _ in range(P.dim)),), rays if verts else ()))


def intersect(P: Polyhedron, Q: Polyhedron) -> Polyhedron:
    _same_dim(P, Q)
    return Polyhedron(P.dim, _h=P.hrep_raw() + Q.hrep_raw())


def intersect_all(sets: Sequence[Polyhedron], dim: int) -> Polyhedron:
    rows: tuple = ()
    for S in sets:
        if S.dim != dim:
            raise DimensionError(f"dimension mismatch: {S.dim} vs {dim}")
        rows += S.hrep_raw()
    return Polyhedron(dim, _h=rows)


def support_value(P: Polyhedron, u: Sequence):
    verts, rays = P.gens_raw()
    if not verts:
        return NEG_INF
    if any(dot(r, u) > 0 for r in rays):
        return INF
    return max(dot(v, u) for v in verts)


def eps_normal_set(P: Polyhedron, x: Sequence, eps) -> Polyhedron:
    """``{g : <g, y - x> <= eps for all y in P}``; empty when x is not in P."""
    eps = Fraction(eps)
    x = vec(x)
    if not contains_point(P, x):
        return empty(P.dim, _internal=True)
    verts, rays = P.gens_raw()
    rows = [(tuple(a - b for a, b in zip(v, x)), eps) for v in verts]
    rows += [(r, Fraction(0)) for r in rays]
    return Polyhedron(P.dim, _h=tuple(rows))


def project_last(P: Polyhedron, k: int = 1) -> Polyhedron:
    """Drop the last ``k`` coordinates (image under the coordinate projection)."""
    verts, rays = P.gens_raw()
    dim = P.dim - k
    if not verts:
        return empty(dim, _internal=True)
    pv = {v[:dim] for v in verts}
    pr = {primitive(r[:dim]) for r in rays if any(r[:dim])}
    return Polyhedron(dim, _g=(tuple(sorted(pv)), tuple(sorted(pr))))


def is_full_dimensional(P: Polyhedron) -> bool:
    """True iff P has nonempty interior."""
    from .lp import linprog

    rows = P.hrep_raw()
    # maximise s subject to a.y + |a|_1 s <= b, s <= 1
    A = [list(a) + [sum(abs(x) for x in a)] for a, _ in rows] + [[0] * P.dim + [1]]
    b = [bb for _, bb in rows] + [1]
    c = [0] * P.dim + [1]
    res = linprog(c, A, b, maximize=True)
    return res.ok and res.value > 0
