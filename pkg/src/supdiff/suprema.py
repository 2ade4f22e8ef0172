"""Normal cones and subdifferentials of pointwise suprema of finite families.

Every formula is evaluated on its own data: ε-active sets, penalization
weights and the three component sets (A: ε-active subdifferentials,
B: weighted subdifferentials of the other proper functions, C: ε-normal sets
of the domains of improper functions).

Formulas that intersect over all ε > 0 are handled in two layers.  The
literal intersection over a finite decreasing schedule is always computed and
reported (``SetResult.literal``).  Because these intersections keep shrinking
for as long as the schedule runs (for |x| at 1 the sets are [1-ε, 1]), the
returned set is the exact ε ↓ 0 limit of the same components:
ε-subdifferentials of the exactly active functions tend to their
subdifferentials, and ε-scaled sets tend to their recession cones.  The
literal intersection must contain that limit; ``stabilized`` records that
the consistency check passed.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence, Union

from . import polykernel as pk
from .convexfn import (
    ConvexFunction,
    Indicator,
    Restricted,
    domain,
    eps_subdifferential,
    eps_subdifferential_scaled,
    evaluate,
    floor_max,
    is_proper,
    pieces_of,
    subgradient_membership,
    weighted_sum,
)
from .lp import linprog
from .polykernel import INF, NEG_INF, Polyhedron, vec


class SupremaError(ValueError):
    """A precondition of a formula failed (domain, scheme or hypothesis)."""


class HypothesisError(SupremaError):
    def __init__(self, hypothesis: str, message: str):
        super().__init__(message)
        self.hypothesis = hypothesis


# ---------------------------------------------------------------------------
# data


@dataclass
class FunctionFamily:
    entries: dict
    dim: int
    closure_hints: tuple = ()

    def __post_init__(self):
        if not self.entries:
            raise ValueError("family needs at least one entry")
        for name, f in self.entries.items():
            if f.dim != self.dim:
                raise ValueError(f"entry {name!r} has dimension {f.dim}, expected {self.dim}")
        hints = tuple(vec(h) for h in self.closure_hints)
        for h in hints:
            if len(h) != self.dim or not any(h):
                raise ValueError(f"closure hint {h} must be a nonzero {self.dim}-vector")
        self.closure_hints = hints
        self.entries = dict(self.entries)

    @property
    def proper_set(self) -> list:
        return [t for t, f in self.entries.items() if is_proper(f)]

    @property
    def improper_set(self) -> list:
        return [t for t, f in self.entries.items() if not is_proper(f)]


@dataclass(frozen=True)
class Rho:
    name = "rho"


@dataclass(frozen=True)
class Unit:
    name = "unit"


@dataclass(frozen=True)
class Custom:
    weights: Mapping
    name = "custom"


WeightScheme = Union[Rho, Unit, Custom]


@dataclass
class SetResult:
    set: Polyhedron
    theorem: str
    eps: tuple = ()
    scheme: str | None = None
    stabilized: bool = True
    schedule_stable: bool | None = None
    certified: str | None = None
    hint_used: bool = False
    literal: Polyhedron | None = None
    notes: list = field(default_factory=list)


@dataclass
class CaratheodoryDecomposition:
    weights: dict
    g: tuple
    eps: Fraction

    @property
    def support(self) -> list:
        return [t for t, w in self.weights.items() if w > 0]


@dataclass
class ComponentSets:
    A: Polyhedron
    B: Polyhedron
    C: Polyhedron
    active: list
    weights: dict
    hint_used: bool = False


def geometric_schedule(depth: int = 8, eps0=1) -> list[Fraction]:
    """ε_k = ε₀ 2^{-k}, k = 0..depth-1."""
    if depth < 2:
        raise ValueError("schedule depth must be at least 2")
    eps0 = Fraction(eps0)
    return [eps0 / 2**k for k in range(depth)]


# ---------------------------------------------------------------------------
# values, active sets, weights


def sup_value(F: FunctionFamily, x: Sequence):
    x = vec(x)
    return max(evaluate(f, x) for f in F.entries.values())


def _finite_value(F: FunctionFamily, x) -> Fraction:
    fx = sup_value(F, x)
    if fx in (INF, NEG_INF):
        raise SupremaError("active set undefined: f(x) is not finite")
    return fx


def active_set(F: FunctionFamily, x: Sequence, eps) -> list:
    """T_ε(x) among proper indices; ε = 0 gives the exactly active set."""
    x = vec(x)
    eps = Fraction(eps)
    fx = _finite_value(F, x)
    return [t for t in F.proper_set if evaluate(F.entries[t], x) >= fx - eps]


def exact_active_set(F: FunctionFamily, x: Sequence) -> list:
    return active_set(F, x, 0)


def rho_weights(F: FunctionFamily, x: Sequence, eps) -> dict:
    x = vec(x)
    eps = Fraction(eps)
    if eps <= 0:
        raise SupremaError("rho weights need eps > 0")
    fx = _finite_value(F, x)
    out = {}
    for t in F.proper_set:
        ft = evaluate(F.entries[t], x)
        out[t] = eps / max(2 * fx - 2 * ft - eps, eps)
    return out


def scheme_weights(F: FunctionFamily, x: Sequence, eps, scheme: WeightScheme, indices=None) -> dict:
    """Weights on ``indices`` (default: proper set), validated against ρ."""
    indices = F.proper_set if indices is None else list(indices)
    if not indices:
        return {}
    rho = rho_weights(F, x, eps)
    if isinstance(scheme, Rho):
        return {t: rho[t] for t in indices}
    if isinstance(scheme, Unit):
        return {t: Fraction(1) for t in indices}
    if isinstance(scheme, Custom):
        out = {}
        problems = []
        for t in indices:
            if t not in scheme.weights:
                problems.append(f"missing weight for index {t!r}")
                continue
            w = Fraction(scheme.weights[t])
            if w <= 0:
                problems.append(f"weight for {t!r} must be positive")
            elif w < rho[t]:
                problems.append(f"weight {w} for {t!r} is below rho = {rho[t]}")
            out[t] = w
        if not problems:
            vals = [out[t] * evaluate(F.entries[t], vec(x)) for t in indices]
            if min(vals) == NEG_INF:
                problems.append("inf of alpha_t f_t(x) is -inf")
        if problems:
            raise SupremaError("invalid weight scheme: " + "; ".join(problems))
        return out
    raise SupremaError(f"unknown weight scheme {scheme!r}")


def _scheme_name(scheme: WeightScheme) -> str:
    return scheme.name


# ---------------------------------------------------------------------------
# helpers


def _in_dom_f(F: FunctionFamily, x) -> bool:
    return all(pk.contains_point(domain(f), x) for f in F.entries.values())


def _require_dom(F: FunctionFamily, x) -> None:
    if not _in_dom_f(F, x):
        raise SupremaError("x is not in dom f")


def _origin(F: FunctionFamily) -> Polyhedron:
    return pk.origin(F.dim)


def _hint_rays(F: FunctionFamily, x, eps, active: Sequence) -> list:
    """Closure hints that apply at (x, ε).

    A hint h is a declared direction along which the subgradients of the
    (infinite) index set escape.  It is attached to the active part only when
    every proper index attaining the largest support value along h is ε-active;
    otherwise the escaping indices are inactive and contribute nothing to A.
    """
    out = []
    if not F.closure_hints:
        return out
    proper = F.proper_set
    if not proper:
        return out
    act = set(active)
    for h in F.closure_hints:
        vals = {t: pk.support_value(eps_subdifferential(F.entries[t], x, eps), h) for t in proper}
        top = max(vals.values())
        if top == NEG_INF:
            continue
        if all(t in act for t, v in vals.items() if v == top):
            out.append(h)
    return out


def _with_rays(P: Polyhedron, rays: Sequence) -> Polyhedron:
    if not rays or P.is_empty():
        return P
    return pk.minkowski_sum(P, pk.cone(rays, P.dim))


def component_sets(F: FunctionFamily, x: Sequence, eps, scheme: WeightScheme = Rho()) -> ComponentSets:
    x = vec(x)
    eps = Fraction(eps)
    if eps <= 0:
        raise SupremaError("component sets need eps > 0")
    n = F.dim
    proper = F.proper_set
    if proper:
        active = active_set(F, x, eps)
    else:
        active = []
    inactive = [t for t in proper if t not in active]
    weights = scheme_weights(F, x, eps, scheme, inactive) if inactive else {}
    A = pk.hull_union([eps_subdifferential(F.entries[t], x, eps) for t in active], n)
    hints = _hint_rays(F, x, eps, active) if active else []
    A = _with_rays(A, hints)
    B = pk.hull_union(
        [eps_subdifferential_scaled(F.entries[t], weights[t], x, eps) for t in inactive], n
    )
    C = pk.hull_union(
        [pk.eps_normal_set(domain(F.entries[t]), x, eps) for t in F.improper_set], n
    )
    return ComponentSets(A, B, C, active, weights, bool(hints))


def _certify(result: SetResult, oracle: Polyhedron) -> SetResult:
    if result.hint_used:
        result.certified = None
        result.notes.append("closure hint used; not certified")
        return result
    result.certified = "equal" if pk.set_equal(result.set, oracle) else "mismatch"
    return result


def _literal_intersection(sets: Sequence[Polyhedron], dim: int):
    """Running intersection over the schedule and whether its last step changed it."""
    running = None
    previous = None
    for S in sets:
        previous = running
        running = S if running is None else pk.intersect(running, S)
    stable = previous is not None and pk.set_equal(previous, running)
    return running, stable


def _check_schedule(schedule) -> list[Fraction]:
    sched = [Fraction(e) for e in schedule]
    if len(sched) < 2:
        raise SupremaError("schedule needs at least two values")
    if any(e <= 0 for e in sched) or any(a <= b for a, b in zip(sched, sched[1:])):
        raise SupremaError("schedule must be strictly decreasing and positive")
    return sched


# ---------------------------------------------------------------------------
# normal cones


def normal_cone_dom_proper(
    F: FunctionFamily, x: Sequence, eps=1, scheme: WeightScheme = Rho(), certify: bool = False
) -> SetResult:
    """Recession cone of the hull of ∂_ε(α_t f_t)(x) over all t (all f_t proper)."""
    x = vec(x)
    if F.improper_set:
        raise SupremaError("family has improper entries; use normal_cone_dom")
    _require_dom(F, x)
    comps = component_sets(F, x, eps, scheme)
    cone = pk.recession_cone(pk.hull_union([comps.A, comps.B], F.dim))
    res = SetResult(cone, "Theo13b/mainfb", (Fraction(eps),), _scheme_name(scheme), hint_used=comps.hint_used)
    if certify:
        _certify(res, oracle_normal_cone_dom(F, x))
    return res


def normal_cone_dom(
    F: FunctionFamily, x: Sequence, eps=1, scheme: WeightScheme = Rho(), certify: bool = False
) -> SetResult:
    """Same formula with the ε-normal sets of improper domains added to the hull."""
    x = vec(x)
    _require_dom(F, x)
    comps = component_sets(F, x, eps, scheme)
    cone = pk.recession_cone(pk.hull_union([comps.A, comps.B, comps.C], F.dim))
    res = SetResult(cone, "Theo13", (Fraction(eps),), _scheme_name(scheme), hint_used=comps.hint_used)
    if certify:
        _certify(res, oracle_normal_cone_dom(F, x))
    return res


def normal_cone_dom_parameterfree(F: FunctionFamily, x: Sequence, eps=1, certify: bool = False) -> SetResult:
    """Weights replaced by the floored functions max{f_t, f(x) - ε} off the active set."""
    x = vec(x)
    eps = Fraction(eps)
    _require_dom(F, x)
    n = F.dim
    parts = []
    hint_used = False
    if F.proper_set:
        fx = _finite_value(F, x)
        active = active_set(F, x, eps)
        parts += [eps_subdifferential(F.entries[t], x, eps) for t in active]
        hints = _hint_rays(F, x, eps, active) if active else []
        hint_used = bool(hints)
        parts += [pk.cone(hints, n)] if hints else []
        for t in F.proper_set:
            if t not in active:
                parts.append(eps_subdifferential(floor_max(F.entries[t], fx - eps), x, eps))
    parts += [pk.eps_normal_set(domain(F.entries[t]), x, eps) for t in F.improper_set]
    cone = pk.recession_cone(pk.hull_union(parts, n))
    res = SetResult(cone, "corThm13a", (eps,), None, hint_used=hint_used)
    if certify:
        _certify(res, oracle_normal_cone_dom(F, x))
    return res


def normal_cone_dom_mainfc(
    F: FunctionFamily,
    x: Sequence,
    schedule: Sequence | None = None,
    scheme: WeightScheme = Rho(),
    certify: bool = False,
) -> SetResult:
    """Cone from the sets K_ε = cl co ∪_t ∂_ε(ε α_t f_t)(x), ε ↓ 0.

    Since K_ε = ε · cl co ∪_t α_t ∂_{1/α_t} f_t(x), the bounded parts shrink
    to the origin and the limit is the hull of the recession cones together
    with the origin.  The literal schedule intersection (with the {θ}
    fallback when it is empty) is reported alongside.
    """
    x = vec(x)
    _require_dom(F, x)
    sched = _check_schedule(schedule or geometric_schedule())
    n = F.dim
    sets = []
    for e in sched:
        w = scheme_weights(F, x, e, scheme) if F.proper_set else {}
        terms = [eps_subdifferential_scaled(F.entries[t], e * w[t], x, e) for t in F.proper_set]
        # improper entries contribute ε N^ε_{dom f_t}(x), which has the same recession cone as N^ε
        terms += [pk.scale(pk.eps_normal_set(domain(F.entries[t]), x, e), e) for t in F.improper_set]
        sets.append(pk.hull_union(terms, n))
    literal, stable = _literal_intersection(sets, n)
    literal_value = literal if not literal.is_empty() else _origin(F)
    limit = pk.hull_union([pk.recession_cone(sets[-1]), _origin(F)], n)
    hint_used = False
    if F.proper_set:
        hints = _hint_rays(F, x, sched[-1], active_set(F, x, sched[-1]))
        if hints:
            hint_used = True
            limit = _with_rays(limit, hints)
    # every K_ε recedes along the limit cone, so a nonempty intersection must too
    consistent = literal.is_empty() or pk.subset(limit, pk.recession_cone(literal)) or hint_used
    res = SetResult(
        limit,
        "Theo13b/mainfc",
        tuple(sched),
        _scheme_name(scheme),
        stabilized=consistent,
        schedule_stable=stable,
        hint_used=hint_used,
        literal=literal_value,
    )
    if literal.is_empty():
        res.notes.append("schedule intersection empty; literal value is {0}")
    if certify:
        _certify(res, oracle_normal_cone_dom(F, x))
    return res


def normal_cone_intersection(domains: Sequence[Polyhedron], x: Sequence, eps=1, certify: bool = False) -> SetResult:
    """Normal cone to ∩ C_t from the recession cone of the hull of ε-normal sets."""
    x = vec(x)
    if not domains:
        raise SupremaError("need at least one set")
    n = domains[0].dim
    for C in domains:
        if not pk.contains_point(C, x):
            raise SupremaError("x is outside one of the sets")
    hull = pk.hull_union([pk.eps_normal_set(C, x, eps) for C in domains], n)
    res = SetResult(pk.recession_cone(hull), "ew", (Fraction(eps),))
    if certify:
        res.certified = "equal" if pk.set_equal(res.set, pk.eps_normal_set(pk.intersect_all(domains, n), x, 0)) else "mismatch"
    return res


def continuity_hypothesis_family(F: FunctionFamily) -> bool:
    """f is continuous somewhere iff ∩ dom f_t has nonempty interior."""
    dom = pk.intersect_all([domain(f) for f in F.entries.values()], F.dim)
    return pk.is_full_dimensional(dom)


def _require_continuity(F: FunctionFamily) -> None:
    if not continuity_hypothesis_family(F):
        raise HypothesisError("continuity", "continuity hypothesis not verified")


def normal_cone_split(
    F: FunctionFamily, x: Sequence, eps=1, scheme: WeightScheme = Rho(), certify: bool = False
):
    """Recession cones of A, B, C separately and their sum."""
    x = vec(x)
    _require_dom(F, x)
    _require_continuity(F)
    comps = component_sets(F, x, eps, scheme)
    parts = [pk.recession_cone(S) for S in (comps.A, comps.B, comps.C)]
    total = pk.minkowski_sum(pk.minkowski_sum(parts[0], parts[1]), parts[2])
    res = SetResult(total, "conecont/f1", (Fraction(eps),), _scheme_name(scheme), hint_used=comps.hint_used)
    if certify:
        _certify(res, oracle_normal_cone_dom(F, x))
    return parts[0], parts[1], parts[2], res


# ---------------------------------------------------------------------------
# subdifferentials


def _empty_result(F: FunctionFamily, theorem: str, sched, note: str) -> SetResult:
    res = SetResult(pk.empty(F.dim), theorem, tuple(sched))
    res.notes.append(note)
    return res


def _active_limit(F: FunctionFamily, x, indices) -> tuple[Polyhedron, bool]:
    """Hull of ∂f_t(x) over the given indices, plus applicable closure hints."""
    n = F.dim
    A0 = pk.hull_union([eps_subdifferential(F.entries[t], x, 0) for t in indices], n)
    hints = _hint_rays(F, x, 0, indices) if indices else []
    return _with_rays(A0, hints), bool(hints)


def _finish(res: SetResult, literal: Polyhedron, stable: bool, certify_with=None) -> SetResult:
    res.literal = literal
    res.schedule_stable = stable
    res.stabilized = res.hint_used or pk.subset(res.set, literal)
    if not res.stabilized:
        res.notes.append("limit set not contained in the schedule intersection")
    if certify_with is not None:
        _certify(res, certify_with())
    return res


def subdifferential_sup(
    F: FunctionFamily,
    x: Sequence,
    schedule: Sequence | None = None,
    scheme: WeightScheme = Rho(),
    exact_active: bool = False,
    certify: bool = False,
) -> SetResult:
    """∂f(x) from cl co(A_ε + ε(B_ε ∪ C_ε ∪ {θ})), ε ↓ 0.

    With ``exact_active`` the active part uses T(x) = {f_t(x) = f(x)} at every
    ε and the remaining proper indices form the weighted part.
    """
    x = vec(x)
    sched = _check_schedule(schedule or geometric_schedule())
    theorem = "olab" if exact_active else "thmsub/FGSubSup"
    fx = sup_value(F, x)
    if fx in (INF, NEG_INF):
        return _empty_result(F, theorem, sched, "f(x) is not finite; subdifferential is empty")
    n = F.dim
    origin = _origin(F)
    exact = exact_active_set(F, x)
    sets = []
    cone_parts = []
    for e in sched:
        if exact_active:
            A = pk.hull_union([eps_subdifferential(F.entries[t], x, e) for t in exact], n)
            rest = [t for t in F.proper_set if t not in exact]
            w = scheme_weights(F, x, e, scheme, rest)
            B = pk.hull_union([eps_subdifferential_scaled(F.entries[t], w[t], x, e) for t in rest], n)
            C = pk.hull_union([pk.eps_normal_set(domain(F.entries[t]), x, e) for t in F.improper_set], n)
        else:
            comps = component_sets(F, x, e, scheme)
            A, B, C = comps.A, comps.B, comps.C
        tail = pk.scale(pk.hull_union([B, C, origin], n), e)
        sets.append(pk.minkowski_sum(A, tail))
        cone_parts = [A, B, C]
    literal, stable = _literal_intersection(sets, n)
    A0, hint_used = _active_limit(F, x, exact)
    cone = pk.hull_union([pk.recession_cone(S) for S in cone_parts] + [origin], n)
    res = SetResult(pk.minkowski_sum(A0, cone), theorem, tuple(sched), _scheme_name(scheme), hint_used=hint_used)
    return _finish(res, literal, stable, (lambda: oracle_subdifferential(F, x)) if certify else None)


def subdifferential_refdem16(
    F: FunctionFamily,
    x: Sequence,
    schedule: Sequence | None = None,
    normal_cone: Polyhedron | None = None,
    certify: bool = False,
) -> SetResult:
    """∂f(x) from cl co(A_ε + N_{dom f}(x)), ε ↓ 0."""
    x = vec(x)
    sched = _check_schedule(schedule or geometric_schedule())
    fx = sup_value(F, x)
    if fx in (INF, NEG_INF):
        return _empty_result(F, "refdem16", sched, "f(x) is not finite; subdifferential is empty")
    n = F.dim
    if normal_cone is None:
        normal_cone = normal_cone_dom(F, x, sched[0]).set
    sets = []
    for e in sched:
        act = active_set(F, x, e)
        A = pk.hull_union([eps_subdifferential(F.entries[t], x, e) for t in act], n)
        A = _with_rays(A, _hint_rays(F, x, e, act))
        sets.append(pk.minkowski_sum(A, normal_cone))
    literal, stable = _literal_intersection(sets, n)
    A0, hint_used = _active_limit(F, x, exact_active_set(F, x))
    res = SetResult(pk.minkowski_sum(A0, normal_cone), "refdem16", tuple(sched), hint_used=hint_used)
    return _finish(res, literal, stable, (lambda: oracle_subdifferential(F, x)) if certify else None)


def brondsted_applicable(F: FunctionFamily, x: Sequence) -> bool:
    x = vec(x)
    fx = sup_value(F, x)
    if fx in (INF, NEG_INF):
        return False
    return all(evaluate(f, x) == fx for f in F.entries.values())


def subdifferential_brondsted(
    F: FunctionFamily, x: Sequence, schedule: Sequence | None = None, certify: bool = False
) -> SetResult:
    """∂f(x) from cl co ∪_t ∂_ε f_t(x) when every f_t(x) = f(x)."""
    x = vec(x)
    sched = _check_schedule(schedule or geometric_schedule())
    if not brondsted_applicable(F, x):
        raise HypothesisError("brondsted", "Brøndsted hypothesis violated: some f_t(x) differs from f(x)")
    n = F.dim
    ts = list(F.entries)
    sets = [pk.hull_union([eps_subdifferential(F.entries[t], x, e) for t in ts], n) for e in sched]
    literal, stable = _literal_intersection(sets, n)
    A0, hint_used = _active_limit(F, x, ts)
    res = SetResult(A0, "bronds/t2", tuple(sched), hint_used=hint_used)
    return _finish(res, literal, stable, (lambda: oracle_subdifferential(F, x)) if certify else None)


def subdifferential_split(
    F: FunctionFamily,
    x: Sequence,
    schedule: Sequence | None = None,
    scheme: WeightScheme = Rho(),
    exact_active: bool = False,
    certify: bool = False,
):
    """∂f(x) as (active part) + (B recession cone) + (C recession cone).

    Returns ``(part_A, part_B, part_C, result)``.  The B cone is the hull of
    the recession cones of cl co B at the two smallest schedule values, which
    is reported as schedule-stable when those two cones agree.
    """
    x = vec(x)
    sched = _check_schedule(schedule or geometric_schedule())
    theorem = "olab" if exact_active else "ola"
    fx = sup_value(F, x)
    if fx in (INF, NEG_INF):
        res = _empty_result(F, theorem, sched, "f(x) is not finite; subdifferential is empty")
        o = _origin(F)
        return o, o, o, res
    _require_continuity(F)
    n = F.dim
    exact = exact_active_set(F, x)
    A_sets, B_cones, C_sets = [], [], []
    for e in sched:
        if exact_active:
            act = exact
        else:
            act = active_set(F, x, e)
        rest = [t for t in F.proper_set if t not in act]
        w = scheme_weights(F, x, e, scheme, rest)
        A = pk.hull_union([eps_subdifferential(F.entries[t], x, e) for t in act], n)
        A_sets.append(_with_rays(A, _hint_rays(F, x, e, act) if act else []))
        B = pk.hull_union([eps_subdifferential_scaled(F.entries[t], w[t], x, e) for t in rest], n)
        B_cones.append(pk.recession_cone(B))
        C_sets.append(pk.hull_union([pk.eps_normal_set(domain(F.entries[t]), x, e) for t in F.improper_set], n))
    A_literal, A_stable = _literal_intersection(A_sets, n)
    part_A, hint_used = _active_limit(F, x, exact)
    part_B = pk.hull_union(B_cones[-2:], n)
    b_stable = pk.set_equal(B_cones[-2], B_cones[-1])
    # C_ε = ε C_1 contains θ, so {θ} ∪ ∩_ε C_ε is exactly the recession cone
    part_C = pk.recession_cone(C_sets[-1])
    C_literal, _ = _literal_intersection(C_sets, n)
    C_literal = pk.hull_union([C_literal, _origin(F)], n)
    total = pk.minkowski_sum(pk.minkowski_sum(part_A, part_B), part_C)
    res = SetResult(total, theorem, tuple(sched), _scheme_name(scheme), hint_used=hint_used)
    res.schedule_stable = A_stable and b_stable
    res.literal = pk.minkowski_sum(pk.minkowski_sum(A_literal, part_B), C_literal)
    res.stabilized = b_stable and (hint_used or (pk.subset(part_A, A_literal) and pk.subset(part_C, C_literal)))
    if certify:
        _certify(res, oracle_subdifferential(F, x))
    return part_A, part_B, part_C, res


# ---------------------------------------------------------------------------
# Carathéodory-type support reduction


def assemble_sup(F: FunctionFamily) -> ConvexFunction:
    """f = sup_t f_t as a single Restricted function (pieces of proper entries,
    domain = ∩ of all entry domains)."""
    n = F.dim
    ps = []
    for f in F.entries.values():
        if is_proper(f):
            ps.extend(pieces_of(f))
    if not ps:
        zero = tuple(Fraction(0) for _ in range(n))
        ps = [(zero, Fraction(0))]
    dom = pk.intersect_all([domain(f) for f in F.entries.values()], n)
    if dom.is_empty():
        raise SupremaError("dom f is empty")
    return Restricted(tuple(sorted(set(ps))), dom)


def caratheodory_decompose(F: FunctionFamily, x: Sequence, eps, g: Sequence) -> CaratheodoryDecomposition:
    """λ in the simplex with |supp λ| ≤ n+1, f_λ(x) ≥ f(x) - ε and g ∈ ∂_ε f_λ(x)."""
    x = vec(x)
    g = vec(g)
    eps = Fraction(eps)
    if F.improper_set:
        raise SupremaError("decomposition needs a family of proper functions")
    fx = _finite_value(F, x)
    if not subgradient_membership(assemble_sup(F), x, eps, g):
        raise SupremaError("not an ε-subgradient")
    names = list(F.entries)
    n = F.dim
    max_support = min(n + 1, len(names))
    for size in range(1, max_support + 1):
        for support in itertools.combinations(names, size):
            lam = _decomposition_lp(F, x, eps, g, fx, support)
            if lam is None:
                continue
            weights = {t: lam.get(t, Fraction(0)) for t in names}
            f_lam = weighted_sum([F.entries[t] for t in names], [weights[t] for t in names])
            if evaluate(f_lam, x) >= fx - eps and subgradient_membership(f_lam, x, eps, g):
                return CaratheodoryDecomposition(weights, g, eps)
    raise SupremaError("no decomposition found with support at most n+1")


def _decomposition_lp(F, x, eps, g, fx, support):
    """Feasibility LP for λ supported on ``support``.

    g = Σ_t (Σ_i μ_{ti} a_{ti} + u_t) with Σ_i μ_{ti} = λ_t, Σ λ_t = 1, μ ≥ 0,
    u_t in the barrier cone of dom f_t with σ_{dom f_t}(u_t) ≤ r_t (dual
    certificate via the domain's generators), and the Fenchel–Young budget
    Σ μ_{ti} b_{ti} + Σ r_t + Σ λ_t f_t(x) - <g, x> ≤ ε.  The conjugate of a
    sum of polyhedral functions is the infimal convolution of the conjugates,
    so this is exactly g ∈ ∂_ε f_λ(x) restricted to the support.
    """
    n = F.dim
    cols = []  # (kind, t, index)
    for t in support:
        f = F.entries[t]
        cols.append(("lam", t, None))
        for i, _ in enumerate(pieces_of(f)):
            cols.append(("mu", t, i))
        if isinstance(f, (Restricted, Indicator)):
            for j in range(n):
                cols.append(("u", t, j))
            cols.append(("r", t, None))
    idx = {c: k for k, c in enumerate(cols)}
    m = len(cols)
    A_eq, b_eq, A_ub, b_ub = [], [], [], []
    # Σ μ a + Σ u = g
    for j in range(n):
        row = [Fraction(0)] * m
        for t in support:
            for i, (a, _) in enumerate(pieces_of(F.entries[t])):
                row[idx[("mu", t, i)]] = a[j]
            if ("u", t, j) in idx:
                row[idx[("u", t, j)]] = Fraction(1)
        A_eq.append(row)
        b_eq.append(g[j])
    for t in support:
        row = [Fraction(0)] * m
        row[idx[("lam", t, None)]] = Fraction(-1)
        for i, _ in enumerate(pieces_of(F.entries[t])):
            row[idx[("mu", t, i)]] = Fraction(1)
        A_eq.append(row)
        b_eq.append(Fraction(0))
    row = [Fraction(0)] * m
    for t in support:
        row[idx[("lam", t, None)]] = Fraction(1)
    A_eq.append(row)
    b_eq.append(Fraction(1))
    vals = {t: evaluate(F.entries[t], x) for t in support}
    # f_λ(x) ≥ f(x) - ε
    row = [Fraction(0)] * m
    for t in support:
        row[idx[("lam", t, None)]] = -vals[t]
    A_ub.append(row)
    b_ub.append(eps - fx)
    # Σ μ b + Σ r + f_λ(x) - <g, x> ≤ ε
    row = [Fraction(0)] * m
    for t in support:
        for i, (_, b) in enumerate(pieces_of(F.entries[t])):
            row[idx[("mu", t, i)]] = b
        row[idx[("lam", t, None)]] = vals[t]
        if ("r", t, None) in idx:
            row[idx[("r", t, None)]] = Fraction(1)
    A_ub.append(row)
    b_ub.append(eps + pk.dot(g, x))
    # σ_D(u_t) ≤ r_t: <u, v> ≤ r for vertices, <u, ρ> ≤ 0 for rays of the domain
    for t in support:
        if ("r", t, None) not in idx:
            continue
        verts, rays = domain(F.entries[t]).gens_raw()
        for v in verts:
            row = [Fraction(0)] * m
            for j in range(n):
                row[idx[("u", t, j)]] = v[j]
            row[idx[("r", t, None)]] = Fraction(-1)
            A_ub.append(row)
            b_ub.append(Fraction(0))
        for r in rays:
            row = [Fraction(0)] * m
            for j in range(n):
                row[idx[("u", t, j)]] = r[j]
            A_ub.append(row)
            b_ub.append(Fraction(0))
    nonneg = [k for k, c in enumerate(cols) if c[0] in ("lam", "mu")]
    res = linprog([0] * m, A_ub, b_ub, A_eq, b_eq, nonneg=nonneg)
    if not res.ok:
        return None
    return {t: res.x[idx[("lam", t, None)]] for t in support}


# ---------------------------------------------------------------------------
# oracles


def oracle_normal_cone_dom(F: FunctionFamily, x: Sequence) -> Polyhedron:
    """N_{dom f}(x) read off the intersected domain directly."""
    x = vec(x)
    dom = pk.intersect_all([domain(f) for f in F.entries.values()], F.dim)
    if not pk.contains_point(dom, x):
        raise SupremaError("x is not in dom f")
    return pk.eps_normal_set(dom, x, 0)


def oracle_subdifferential(F: FunctionFamily, x: Sequence) -> Polyhedron:
    """∂f(x) from the single assembled max-affine-plus-indicator function."""
    x = vec(x)
    fx = sup_value(F, x)
    if fx in (INF, NEG_INF):
        return pk.empty(F.dim)
    return eps_subdifferential(assemble_sup(F), x, 0)
