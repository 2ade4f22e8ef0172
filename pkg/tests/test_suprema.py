import random
from fractions import Fraction as Fr

import pytest
from hypothesis import given
from hypothesis import strategies as st

from supdiff import polykernel as pk
from supdiff.convexfn import (
    Affine,
    ImproperNegInf,
    Indicator,
    Restricted,
    eps_subdifferential,
    evaluate,
    floor_max,
    subgradient_membership,
    weighted_sum,
)
from supdiff.generators import rand_family
from supdiff.suprema import (
    Custom,
    FunctionFamily,
    HypothesisError,
    Rho,
    SupremaError,
    Unit,
    active_set,
    caratheodory_decompose,
    component_sets,
    continuity_hypothesis_family,
    geometric_schedule,
    normal_cone_dom,
    normal_cone_dom_mainfc,
    normal_cone_dom_parameterfree,
    normal_cone_dom_proper,
    normal_cone_intersection,
    normal_cone_split,
    oracle_normal_cone_dom,
    oracle_subdifferential,
    rho_weights,
    subdifferential_brondsted,
    subdifferential_refdem16,
    subdifferential_split,
    subdifferential_sup,
    sup_value,
)

seeds = st.integers(0, 2**32 - 1)

LEFT_OF_ONE = pk.from_hrep([([1], 1)], 1)
LEFT_OF_ZERO = pk.from_hrep([([1], 0)], 1)


def truncated(ts=(0, 1, 2), hints=()):
    return FunctionFamily({t: Affine([t], t) for t in ts}, 1, hints)


def abs_family():
    return FunctionFamily({"+": Affine([1], 0), "-": Affine([-1], 0)}, 1)


def line_and_wall():
    return FunctionFamily({"line": Affine([1], 0), "wall": ImproperNegInf(LEFT_OF_ZERO)}, 1)


def line_and_indicator():
    return FunctionFamily({"line": Affine([1], 0), "ind": Indicator(LEFT_OF_ONE)}, 1)


def eq(P, Q):
    return pk.set_equal(P, Q)


# -- values, active sets and weights -------------------------------------------


def test_sup_value_examples():
    assert sup_value(truncated(), [0]) == 0
    assert sup_value(truncated(), [2]) == 2
    only_improper = FunctionFamily({"w": ImproperNegInf(LEFT_OF_ZERO)}, 1)
    assert sup_value(only_improper, [-1]) == pk.NEG_INF


def test_active_set_examples():
    assert active_set(truncated(), [0], 1) == [0, 1]
    assert active_set(truncated(), [0], 3) == [0, 1, 2]
    assert active_set(truncated(), [1], Fr(1, 100)) == [0, 1, 2]
    with pytest.raises(SupremaError, match="active set undefined"):
        active_set(FunctionFamily({"w": ImproperNegInf(LEFT_OF_ZERO)}, 1), [-1], 1)


def test_rho_examples():
    rho = rho_weights(truncated(range(11)), [0], 1)
    assert rho[2] == Fr(1, 3)
    assert rho[0] == rho[1] == 1
    assert rho[10] == Fr(1, 19)


def test_component_sets_examples():
    comps = component_sets(truncated(), [0], 1, Rho())
    assert eq(comps.A, pk.interval(0, 1))
    assert eq(comps.B, pk.point([Fr(2, 3)]))
    assert comps.C.is_empty()
    comps = component_sets(abs_family(), [0], 1)
    assert comps.B.is_empty() and comps.C.is_empty()
    comps = component_sets(line_and_wall(), [0], 1)
    assert eq(comps.C, pk.from_vrep([[0]], [[1]]))


# -- lemma bounds on the weights -----------------------------------------------


@given(seeds, st.fractions(min_value=Fr(1, 20), max_value=3, max_denominator=20), st.fractions(min_value=0, max_value=3, max_denominator=20))
def test_rho_bounds(seed, eps, delta):
    rng = random.Random(seed)
    F, x = rand_family(rng)
    fx = sup_value(F, x)
    rho = rho_weights(F, x, eps)
    wider = set(active_set(F, x, eps + delta))
    for t, r in rho.items():
        ft = evaluate(F.entries[t], x)
        assert 0 < r <= 1
        assert min(fx, 0) <= r * fx <= r * ft + eps
        if t in wider:
            assert eps / (eps + 2 * delta) <= r <= 1


# -- normal cones -------------------------------------------------------------


def test_normal_cone_examples():
    res = normal_cone_dom_proper(truncated(), [0], 1, Rho())
    assert eq(res.set, pk.origin(1)) and res.theorem == "Theo13b/mainfb"
    assert eq(normal_cone_dom_proper(line_and_indicator(), [1], 1, Unit()).set, pk.from_vrep([[0]], [[1]]))
    assert eq(normal_cone_dom_proper(line_and_indicator(), [0], 1).set, pk.origin(1))
    with pytest.raises(SupremaError, match="use normal_cone_dom"):
        normal_cone_dom_proper(line_and_wall(), [0], 1)
    assert eq(normal_cone_dom(line_and_wall(), [0], 1).set, pk.from_vrep([[0]], [[1]]))
    only = FunctionFamily({"w": ImproperNegInf(pk.interval(0, 1))}, 1)
    assert eq(normal_cone_dom(only, [1], 1).set, pk.from_vrep([[0]], [[1]]))


def test_full_truncation_and_hint():
    F = truncated(range(11))
    res = normal_cone_dom_proper(F, [0], 1, Rho(), certify=True)
    assert eq(res.set, pk.origin(1)) and res.certified == "equal"
    hinted = truncated(range(11), hints=[[1]])
    res = normal_cone_dom_proper(hinted, [1], 1, certify=True)
    assert eq(res.set, pk.from_vrep([[0]], [[1]]))
    assert res.hint_used and res.certified is None
    # the hint escapes through inactive indices at 0, so it is not applied there
    res = normal_cone_dom_proper(hinted, [0], 1)
    assert eq(res.set, pk.origin(1)) and not res.hint_used


def test_unweighted_upper_bound_is_strict_with_hint():
    hinted = truncated(range(11), hints=[[1]])
    unweighted = pk.recession_cone(pk.hull_union([eps_subdifferential(f, [0], 1) for f in hinted.entries.values()]))
    assert pk.subset(normal_cone_dom_proper(hinted, [0], 1).set, unweighted)


def test_mainfc_examples():
    res = normal_cone_dom_mainfc(truncated(), [0])
    assert eq(res.set, pk.origin(1))
    res = normal_cone_dom_mainfc(line_and_indicator(), [1])
    assert eq(res.set, pk.from_vrep([[0]], [[1]])) and res.stabilized
    res = normal_cone_dom_mainfc(FunctionFamily({"a": Affine([1], 0)}, 1), [0])
    assert eq(res.set, pk.origin(1))
    assert eq(res.literal, pk.origin(1)) and res.notes


def test_mainfc_limit_differs_from_literal_intersection():
    # f = x + I_{(-inf, 1]} as a single entry: the sets at 1 are [ε, ∞), whose
    # intersection over every ε > 0 is empty, yet the normal cone is [0, ∞)
    F = FunctionFamily({"f": Restricted([([1], 0)], LEFT_OF_ONE)}, 1)
    res = normal_cone_dom_mainfc(F, [1], geometric_schedule(4))
    assert eq(res.set, pk.from_vrep([[0]], [[1]]))
    assert eq(res.literal, pk.from_vrep([[1]], [[1]]))
    assert res.stabilized


def test_parameterfree_examples():
    assert eq(normal_cone_dom_parameterfree(truncated(), [0], 1).set, pk.origin(1))
    f21 = floor_max(Affine([2], 2), -1)
    assert eq(eps_subdifferential(f21, [0], 1), pk.interval(0, 2))
    F = abs_family()
    assert eq(normal_cone_dom_parameterfree(F, [0], 1).set, normal_cone_dom_proper(F, [0], 1, Unit()).set)


def test_intersection_examples():
    res = normal_cone_intersection([LEFT_OF_ONE, pk.from_hrep([([-1], 0)], 1)], [0], 1)
    assert eq(res.set, pk.from_vrep([[0]], [[-1]]))
    unit = pk.interval(0, 1)
    assert eq(normal_cone_intersection([unit, unit], [Fr(1, 2)], 1).set, pk.origin(1))
    lines = [pk.cone([[1, 1], [-1, -1]], 2), pk.cone([[1, -1], [-1, 1]], 2)]
    res = normal_cone_intersection(lines, [0, 0], 1, certify=True)
    assert eq(res.set, pk.whole_space(2)) and res.certified == "equal"
    with pytest.raises(SupremaError):
        normal_cone_intersection([unit], [2], 1)


def test_split_examples():
    a, b, c, total = normal_cone_split(truncated(), [0], 1)
    for part in (a, b, c, total.set):
        assert eq(part, pk.origin(1))
    a, b, c, total = normal_cone_split(line_and_indicator(), [1], 1)
    assert eq(total.set, pk.from_vrep([[0]], [[1]]))
    two_lines = FunctionFamily({"p": Indicator(pk.interval(0, 1)), "q": Indicator(pk.interval(1, 2))}, 1)
    assert not continuity_hypothesis_family(two_lines)
    with pytest.raises(HypothesisError) as info:
        normal_cone_split(two_lines, [1], 1)
    assert info.value.hypothesis == "continuity"


@given(seeds, st.booleans())
def test_normal_cone_variants_match_oracle(seed, improper):
    rng = random.Random(seed)
    F, x = rand_family(rng, improper=improper)
    oracle = oracle_normal_cone_dom(F, x)
    assert eq(normal_cone_dom(F, x, 1).set, oracle)
    assert eq(normal_cone_dom_parameterfree(F, x, Fr(1, 2)).set, oracle)
    assert eq(normal_cone_dom_mainfc(F, x).set, oracle)
    if continuity_hypothesis_family(F):
        a, b, c, total = normal_cone_split(F, x, 1)
        assert eq(total.set, oracle)
        assert eq(pk.minkowski_sum(pk.minkowski_sum(a, b), c), oracle)


@given(seeds)
def test_eps_and_scheme_invariance(seed):
    rng = random.Random(seed)
    F, x = rand_family(rng)
    ref = normal_cone_dom_proper(F, x, 1).set
    for eps in (Fr(1, 2), Fr(1, 10)):
        assert eq(normal_cone_dom_proper(F, x, eps).set, ref)
        assert eq(normal_cone_dom_proper(F, x, eps, Unit()).set, ref)
        rho = rho_weights(F, x, eps)
        custom = Custom({t: r + Fr(rng.randint(0, 3), rng.randint(1, 3)) for t, r in rho.items()})
        assert eq(normal_cone_dom_proper(F, x, eps, custom).set, ref)


@given(seeds)
def test_unweighted_hull_bounds_normal_cone(seed):
    rng = random.Random(seed)
    F, x = rand_family(rng)
    cone = normal_cone_dom_proper(F, x, 1).set
    unweighted = pk.recession_cone(pk.hull_union([eps_subdifferential(f, x, 1) for f in F.entries.values()], F.dim))
    assert pk.subset(cone, unweighted)


@given(seeds, st.integers(1, 4))
def test_b_cones_grow_as_eps_shrinks(seed, k):
    rng = random.Random(seed)
    F, x = rand_family(rng)
    e2, e1 = Fr(1, 2 ** (k - 1)), Fr(1, 2**k)
    b2 = pk.recession_cone(component_sets(F, x, e2).B)
    b1 = pk.recession_cone(component_sets(F, x, e1).B)
    assert pk.subset(b2, b1)


def test_custom_scheme_validation():
    F = truncated()
    with pytest.raises(SupremaError, match="below rho"):
        normal_cone_dom_proper(F, [0], 1, Custom({0: 1, 1: 1, 2: Fr(1, 10)}))
    with pytest.raises(SupremaError, match="missing weight"):
        normal_cone_dom_proper(F, [0], 1, Custom({0: 1}))


# -- subdifferentials ---------------------------------------------------------


def test_subdifferential_examples():
    res = subdifferential_sup(abs_family(), [0])
    assert eq(res.set, pk.interval(-1, 1)) and res.schedule_stable and res.stabilized
    assert eq(subdifferential_sup(truncated(), [1]).set, pk.interval(0, 2))
    assert eq(subdifferential_sup(line_and_wall(), [0]).set, pk.from_vrep([[1]], [[1]]))
    assert eq(subdifferential_refdem16(abs_family(), [0]).set, pk.interval(-1, 1))
    assert eq(subdifferential_refdem16(line_and_indicator(), [1]).set, pk.from_vrep([[1]], [[1]]))
    assert eq(subdifferential_brondsted(abs_family(), [0]).set, pk.interval(-1, 1))
    assert eq(subdifferential_brondsted(truncated(), [1]).set, pk.interval(0, 2))
    with pytest.raises(HypothesisError) as info:
        subdifferential_brondsted(truncated(), [0])
    assert info.value.hypothesis == "brondsted"


def test_split_subdifferential_examples():
    a, b, c, res = subdifferential_split(abs_family(), [0])
    assert eq(a, pk.interval(-1, 1)) and eq(b, pk.origin(1)) and eq(c, pk.origin(1))
    a, b, c, res = subdifferential_split(line_and_wall(), [0])
    assert eq(a, pk.point([1])) and eq(b, pk.origin(1)) and eq(c, pk.from_vrep([[0]], [[1]]))
    assert eq(res.set, pk.from_vrep([[1]], [[1]]))
    *_, exact = subdifferential_split(abs_family(), [0], exact_active=True)
    assert eq(exact.set, pk.interval(-1, 1))


def test_oracle_examples():
    assert eq(oracle_subdifferential(abs_family(), [0]), pk.interval(-1, 1))
    assert eq(oracle_subdifferential(truncated(), [1]), pk.interval(0, 2))
    assert eq(oracle_subdifferential(FunctionFamily({"a": Affine([3, 4], 1)}, 2), [1, 1]), pk.point([3, 4]))
    assert eq(oracle_normal_cone_dom(truncated(), [0]), pk.origin(1))
    box = FunctionFamily({"box": Indicator(pk.from_vrep([[0, 0], [1, 0], [0, 1], [1, 1]]))}, 2)
    assert eq(oracle_normal_cone_dom(box, [1, 1]), pk.cone([[1, 0], [0, 1]], 2))


def test_subdifferential_outside_domain_is_empty():
    res = subdifferential_sup(line_and_wall(), [1])
    assert res.set.is_empty()


@given(seeds, st.booleans())
def test_subdifferential_formulas_agree(seed, improper):
    rng = random.Random(seed)
    F, x = rand_family(rng, improper=improper)
    oracle = oracle_subdifferential(F, x)
    res = subdifferential_sup(F, x)
    assert eq(res.set, oracle) and res.stabilized
    assert eq(subdifferential_sup(F, x, exact_active=True).set, oracle)
    assert eq(subdifferential_refdem16(F, x).set, oracle)
    if continuity_hypothesis_family(F):
        *_, split = subdifferential_split(F, x)
        assert eq(split.set, oracle)
    try:
        bron = subdifferential_brondsted(F, x)
    except HypothesisError:
        pass
    else:
        assert eq(bron.set, oracle)


# -- Carathéodory ---------------------------------------------------------------


def test_caratheodory_examples():
    F = FunctionFamily({"x": Affine([1], 0), "-x": Affine([-1], 0), "x/2": Affine([Fr(1, 2)], 0)}, 1)
    dec = caratheodory_decompose(F, [0], 0, [0])
    assert dec.weights == {"x": Fr(1, 2), "-x": Fr(1, 2), "x/2": 0}
    assert len(dec.support) <= 2
    dec = caratheodory_decompose(F, [0], 0, [1])
    assert dec.weights == {"x": 1, "-x": 0, "x/2": 0}
    with pytest.raises(SupremaError, match="not an ε-subgradient"):
        caratheodory_decompose(F, [0], 0, [2])
    small = abs_family()
    dec = caratheodory_decompose(small, [0], 0, [Fr(1, 3)])
    assert sum(dec.weights.values()) == 1


@given(seeds)
def test_caratheodory_postconditions(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 2)
    F, x = rand_family(rng, n=n, size=rng.randint(2, 5))
    eps = Fr(rng.randint(0, 4), 2)
    S = oracle_eps_set(F, x, eps)
    g = S.vertices[rng.randrange(len(S.vertices))]
    dec = caratheodory_decompose(F, x, eps, g)
    ts = list(F.entries)
    assert len(dec.support) <= n + 1
    assert sum(dec.weights.values()) == 1 and all(w >= 0 for w in dec.weights.values())
    f_lam = weighted_sum([F.entries[t] for t in ts], [dec.weights[t] for t in ts])
    assert evaluate(f_lam, x) >= sup_value(F, x) - eps
    assert subgradient_membership(f_lam, x, eps, g)


def oracle_eps_set(F, x, eps):
    from supdiff.suprema import assemble_sup

    return eps_subdifferential(assemble_sup(F), x, eps)
