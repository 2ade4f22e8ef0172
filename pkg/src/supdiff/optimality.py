"""KKT / Fritz–John certificates for convex programs  min f0  s.t.  f_t <= 0.

A feasible point is certified optimal by one of two exact identities:

* ``NormalConeCase``: θ = g0 + k with g0 ∈ ∂f0(x) and k in the recession cone
  of the hull of the component sets (the normal cone to dom f);
* ``MultiplierCase``: λ g0 + s = θ with λ > 0, g0 ∈ ∂f0(x) and s ∈ ∂f(x);

or refuted by a feasible direction along which f0 strictly decreases.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from . import polykernel as pk
from .convexfn import (
    Affine,
    ConvexFunction,
    domain,
    eps_subdifferential,
    evaluate,
    is_proper,
    pieces_of,
    subgradient_membership,
)
from .lp import INFEASIBLE, UNBOUNDED, linprog
from .polykernel import INF, NEG_INF, dot, vec
from .suprema import (
    FunctionFamily,
    HypothesisError,
    Rho,
    SupremaError,
    component_sets,
    geometric_schedule,
    oracle_normal_cone_dom,
    oracle_subdifferential,
    subdifferential_sup,
    sup_value,
)


@dataclass
class ConvexProgram:
    objective: ConvexFunction
    constraints: FunctionFamily

    def __post_init__(self):
        if not is_proper(self.objective):
            raise ValueError("objective must be proper")
        if self.objective.dim != self.constraints.dim:
            raise ValueError("objective and constraints differ in dimension")

    @property
    def dim(self) -> int:
        return self.constraints.dim


@dataclass
class NormalConeCase:
    witnesses: list  # (eps, g0, k) with g0 + k = 0
    theorem: str = "thmoptb/th1"


@dataclass
class MultiplierCase:
    lam: Fraction
    g0: tuple
    s: tuple
    theorem: str = "thmoptb/th2"


@dataclass
class Refutation:
    direction: tuple
    step: Fraction
    new_point: tuple
    decrease: Fraction
    theorem: str = "thmoptb/refuted"


# ---------------------------------------------------------------------------
# polyhedral data of a program


def _domain_rows(f: ConvexFunction) -> list:
    return list(domain(f).hrep_raw())


def feasible_rows(prog: ConvexProgram) -> list:
    """Inequalities (a, b), a.y <= b, describing {f <= 0} ∩ dom f ∩ dom f0."""
    rows = []
    for f in prog.constraints.entries.values():
        if is_proper(f):
            rows.extend(pieces_of(f))
        rows.extend(_domain_rows(f))
    rows.extend(_domain_rows(prog.objective))
    return rows


def check_feasible(prog: ConvexProgram, x: Sequence) -> bool:
    x = vec(x)
    return sup_value(prog.constraints, x) <= 0 and evaluate(prog.objective, x) < INF


def slater_point(prog: ConvexProgram):
    """A point with f < 0 inside dom f0 (and dom f), or None."""
    n = prog.dim
    A, b = [], []
    for f in prog.constraints.entries.values():
        if is_proper(f):
            for a, bb in pieces_of(f):
                A.append(list(a) + [1])
                b.append(bb)
        for a, bb in _domain_rows(f):
            A.append(list(a) + [0])
            b.append(bb)
    for a, bb in _domain_rows(prog.objective):
        A.append(list(a) + [0])
        b.append(bb)
    A.append([0] * n + [1])
    b.append(1)
    res = linprog([0] * n + [1], A, b, maximize=True)
    if res.ok and res.value > 0:
        return tuple(res.x[:n])
    return None


def _interior_meets(inner_rows, outer_rows, n) -> bool:
    """Does int{inner} meet {outer}?  Margin LP on the inner rows."""
    A, b = [], []
    for a, bb in inner_rows:
        A.append(list(a) + [sum(abs(v) for v in a)])
        b.append(bb)
    for a, bb in outer_rows:
        A.append(list(a) + [0])
        b.append(bb)
    A.append([0] * n + [1])
    b.append(1)
    res = linprog([0] * n + [1], A, b, maximize=True)
    return res.ok and res.value > 0


def continuity_hypothesis(prog: ConvexProgram) -> bool:
    """int(dom f0) ∩ dom f ≠ ∅  or  int(dom f) ∩ dom f0 ≠ ∅."""
    n = prog.dim
    dom_f = [r for f in prog.constraints.entries.values() for r in _domain_rows(f)]
    dom_f0 = _domain_rows(prog.objective)
    return _interior_meets(dom_f0, dom_f, n) or _interior_meets(dom_f, dom_f0, n)


def _check_hypotheses(prog: ConvexProgram, x) -> None:
    if not check_feasible(prog, x):
        raise HypothesisError("feasibility", "point is not feasible")
    if slater_point(prog) is None:
        raise HypothesisError("slater", "Slater condition fails")
    if not continuity_hypothesis(prog):
        raise HypothesisError("continuity", "continuity hypothesis fails")


# ---------------------------------------------------------------------------
# certification


def _normal_cone_case(prog, x, sub0, sched, tag):
    F = prog.constraints
    n = prog.dim
    cones = []
    for e in sched[:2]:
        comps = component_sets(F, x, e, Rho())
        cones.append(pk.recession_cone(pk.hull_union([comps.A, comps.B, comps.C], n)))
    if not pk.set_equal(cones[0], cones[1]):
        raise SupremaError(
            f"normal cone differs between eps={sched[0]} and eps={sched[1]}; formula tripwire"
        )
    meet = pk.intersect(sub0, pk.negate(cones[0]))
    if meet.is_empty():
        return None
    g0 = meet.vertices[0]
    k = tuple(-v for v in g0)
    return NormalConeCase([(sched[0], g0, k), (sched[1], g0, k)], theorem=f"{tag}/th1")


def _multiplier_case(prog, x, sub0, S, tag):
    """Find λ > 0, g0 ∈ ∂f0(x), s ∈ S with λ g0 + s = 0 by one or two LPs."""
    n = prog.dim
    V, R = sub0.gens_raw()
    W, Q = S.gens_raw()
    if not W:
        return None
    nv, nr, nw, nq = len(V), len(R), len(W), len(Q)
    m = nv + nr + nw + nq
    A_eq, b_eq = [], []
    for j in range(n):
        A_eq.append([v[j] for v in V] + [r[j] for r in R] + [w[j] for w in W] + [q[j] for q in Q])
        b_eq.append(0)
    A_eq.append([0] * (nv + nr) + [1] * nw + [0] * nq)
    b_eq.append(1)
    c = [1] * nv + [0] * (m - nv)
    nonneg = list(range(m))
    # λ closest to 1: largest feasible λ <= 1, else smallest feasible λ >= 1
    res = linprog(c, [c], [1], A_eq, b_eq, nonneg=nonneg, maximize=True)
    if not res.ok or res.value <= 0:
        res = linprog(c, [[-1] * nv + [0] * (m - nv)], [-1], A_eq, b_eq, nonneg=nonneg)
        if not res.ok:
            return None
    sol = res.x
    lam = sum(sol[:nv], Fraction(0))
    combo = [Fraction(0)] * n
    for i, v in enumerate(V):
        combo = [c_ + sol[i] * vi for c_, vi in zip(combo, v)]
    for i, r in enumerate(R):
        combo = [c_ + sol[nv + i] * ri for c_, ri in zip(combo, r)]
    g0 = tuple(c_ / lam for c_ in combo)
    s = tuple(-c_ for c_ in combo)
    return MultiplierCase(lam, g0, s, theorem=f"{tag}/th2")


def _refutation(prog, x, sub0, dual_set):
    """Feasible descent direction: min τ, <v,d> <= τ on ∂f0(x), σ_dual(d) <= 0."""
    n = prog.dim
    V, R = sub0.gens_raw()
    W, Q = dual_set.gens_raw() if dual_set is not None else ((), ())
    A, b = [], []
    for v in V:
        A.append(list(v) + [-1])
        b.append(0)
    for r in list(R) + list(Q) + list(W):
        A.append(list(r) + [0])
        b.append(0)
    for j in range(n):
        e = [0] * (n + 1)
        e[j] = 1
        A.append(e)
        b.append(1)
        e = [0] * (n + 1)
        e[j] = -1
        A.append(e)
        b.append(1)
    res = linprog([0] * n + [1], A, b)
    if not res.ok or res.value >= 0:
        return None
    d = tuple(res.x[:n])
    rows = feasible_rows(prog)
    step = Fraction(1)
    for a, bb in rows:
        ad = dot(a, d)
        if ad > 0:
            step = min(step, (bb - dot(a, x)) / ad)
    if step <= 0:
        return None
    f0x = evaluate(prog.objective, x)
    for _ in range(64):
        y = tuple(xi + step * di for xi, di in zip(x, d))
        fy = evaluate(prog.objective, y)
        if fy < f0x and check_feasible(prog, y):
            return Refutation(d, step, y, f0x - fy)
        step /= 2
    return None


def kkt_certify(prog: ConvexProgram, x: Sequence, schedule: Sequence | None = None, tag: str = "thmoptb"):
    x = vec(x)
    sched = [Fraction(e) for e in (schedule or geometric_schedule())]
    _check_hypotheses(prog, x)
    fx = sup_value(prog.constraints, x)
    sub0 = eps_subdifferential(prog.objective, x, 0)
    cert = _normal_cone_case(prog, x, sub0, sched, tag)
    if cert is not None:
        return cert
    if fx < 0:
        return _refutation(prog, x, sub0, oracle_free_normal_cone(prog, x, sched)) or _no_answer()
    S_res = subdifferential_sup(prog.constraints, x, sched)
    if not S_res.stabilized:
        raise SupremaError("schedule exhausted: subdifferential did not stabilise")
    cert = _multiplier_case(prog, x, sub0, S_res.set, tag)
    if cert is not None:
        return cert
    return _refutation(prog, x, sub0, S_res.set) or _no_answer()


def oracle_free_normal_cone(prog: ConvexProgram, x, sched):
    """Normal cone to dom f from the component sets (no oracle involved)."""
    comps = component_sets(prog.constraints, x, sched[0], Rho())
    return pk.recession_cone(pk.hull_union([comps.A, comps.B, comps.C], prog.dim))


def _no_answer():
    raise SupremaError("neither a certificate nor a refutation was found")


def silp_certify(c: Sequence, constraints: FunctionFamily, x: Sequence, schedule: Sequence | None = None):
    """Linear objective <c, x> over affine constraints <a_t, x> - b_t <= 0."""
    for name, f in constraints.entries.items():
        if not isinstance(f, Affine):
            raise SupremaError(f"constraint {name!r} is not affine")
    prog = ConvexProgram(Affine(c, 0), constraints)
    return kkt_certify(prog, x, schedule, tag="silp")


# ---------------------------------------------------------------------------
# oracle and verification


def oracle_solve(prog: ConvexProgram):
    """Exact optimum of the epigraph LP: (value, argmin or None)."""
    n = prog.dim
    A, b = [], []
    for a, bb in pieces_of(prog.objective):
        A.append(list(a) + [-1])
        b.append(bb)
    for a, bb in feasible_rows(prog):
        A.append(list(a) + [0])
        b.append(bb)
    res = linprog([0] * n + [1], A, b)
    if res.status == INFEASIBLE:
        return INF, None
    if res.status == UNBOUNDED:
        return NEG_INF, None
    return res.value, tuple(res.x[:n])


def verify_certificate(prog: ConvexProgram, x: Sequence, cert) -> bool:
    """Re-check a certificate's identity by exact substitution."""
    x = vec(x)
    n = prog.dim
    zero = tuple(Fraction(0) for _ in range(n))
    F = prog.constraints
    if isinstance(cert, NormalConeCase):
        if not cert.witnesses:
            return False
        N = oracle_normal_cone_dom(F, x)
        for _, g0, k in cert.witnesses:
            if tuple(a + b for a, b in zip(g0, k)) != zero:
                return False
            if not subgradient_membership(prog.objective, x, 0, g0):
                return False
            if not pk.contains_point(N, k):
                return False
        return check_feasible(prog, x)
    if isinstance(cert, MultiplierCase):
        if cert.lam <= 0:
            return False
        if tuple(cert.lam * a + b for a, b in zip(cert.g0, cert.s)) != zero:
            return False
        if sup_value(F, x) != 0:
            return False
        return subgradient_membership(prog.objective, x, 0, cert.g0) and pk.contains_point(
            oracle_subdifferential(F, x), cert.s
        )
    if isinstance(cert, Refutation):
        y = tuple(xi + cert.step * di for xi, di in zip(x, cert.direction))
        if y != tuple(cert.new_point):
            return False
        return check_feasible(prog, y) and evaluate(prog.objective, y) < evaluate(prog.objective, x)
    return False


def is_optimal(prog: ConvexProgram, x: Sequence) -> bool:
    """Oracle verdict: x feasible and f0(x) equals the optimal value."""
    x = vec(x)
    if not check_feasible(prog, x):
        return False
    value, _ = oracle_solve(prog)
    return value != NEG_INF and evaluate(prog.objective, x) == value
