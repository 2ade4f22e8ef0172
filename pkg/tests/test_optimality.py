import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from supdiff import polykernel as pk
from supdiff.convexfn import Affine, Indicator, MaxAffine, evaluate
from supdiff.generators import rand_program
from supdiff.optimality import (
    ConvexProgram,
    MultiplierCase,
    NormalConeCase,
    Refutation,
    check_feasible,
    continuity_hypothesis,
    is_optimal,
    kkt_certify,
    oracle_solve,
    silp_certify,
    slater_point,
    verify_certificate,
)
from supdiff.suprema import FunctionFamily, HypothesisError, SupremaError, sup_value

ABS = MaxAffine([([1], 0), ([-1], 0)])


def abs_program():
    return ConvexProgram(ABS, FunctionFamily({"c": Affine([1], 1)}, 1))


def silp_constraints(ts=(1, 2)):
    return FunctionFamily({t: Affine([t], t) for t in ts}, 1)


def test_feasibility_examples():
    prog = abs_program()
    assert check_feasible(prog, [0])
    assert not check_feasible(prog, [2])
    assert check_feasible(prog, [1])


def test_slater_examples():
    assert slater_point(abs_program()) is not None
    both = ConvexProgram(ABS, FunctionFamily({"p": Affine([1], 0), "m": Affine([-1], 0)}, 1))
    assert slater_point(both) is None
    with pytest.raises(HypothesisError) as info:
        kkt_certify(both, [0])
    assert info.value.hypothesis == "slater"
    box = FunctionFamily({f"{s}{i}": Affine([s if j == i else 0 for j in range(2)], 1) for i in range(2) for s in (1, -1)}, 2)
    x0 = slater_point(ConvexProgram(Affine([0, 0], 0), box))
    assert x0 is not None and sup_value(box, x0) < 0


def test_continuity_examples():
    assert continuity_hypothesis(abs_program())
    segment = pk.from_vrep([[0, 0], [1, 0]])
    full = FunctionFamily({"c": Affine([1, 1], 5)}, 2)
    assert continuity_hypothesis(ConvexProgram(Indicator(segment), full))
    line1 = pk.from_hrep([([0, 1], 0), ([0, -1], 0)], 2)
    line2 = pk.from_hrep([([0, 1], 1), ([0, -1], -1)], 2)
    assert not continuity_hypothesis(ConvexProgram(Indicator(line1), FunctionFamily({"c": Indicator(line2)}, 2)))


def test_kkt_examples():
    cert = kkt_certify(abs_program(), [0])
    assert isinstance(cert, NormalConeCase) and cert.theorem == "thmoptb/th1"
    assert verify_certificate(abs_program(), [0], cert)

    prog = ConvexProgram(Affine([-1], 0), silp_constraints())
    cert = kkt_certify(prog, [1])
    assert isinstance(cert, MultiplierCase) and cert.lam == 1
    assert cert.theorem == "thmoptb/th2"
    assert verify_certificate(prog, [1], cert)

    cert = kkt_certify(prog, [0])
    assert isinstance(cert, Refutation) and cert.direction[0] > 0
    assert verify_certificate(prog, [0], cert)

    with pytest.raises(HypothesisError) as info:
        kkt_certify(prog, [2])
    assert info.value.hypothesis == "feasibility"


def test_silp_examples():
    cert = silp_certify([-1], silp_constraints(), [1])
    assert isinstance(cert, MultiplierCase) and cert.lam == 1 and cert.theorem == "silp/th2"
    cert = silp_certify([1], silp_constraints(), [1])
    assert isinstance(cert, Refutation) and cert.direction[0] < 0
    for x in ([0], [1], [-3]):
        assert isinstance(silp_certify([0], silp_constraints(), x), (NormalConeCase, MultiplierCase))
    bad = FunctionFamily({"m": MaxAffine([([1], 0), ([2], 0)])}, 1)
    with pytest.raises(SupremaError, match="not affine"):
        silp_certify([1], bad, [0])


def test_oracle_solve_examples():
    assert oracle_solve(abs_program()) == (0, (0,))
    value, argmin = oracle_solve(ConvexProgram(Affine([-1], 0), silp_constraints()))
    assert value == -1 and argmin == (1,)
    value, _ = oracle_solve(ConvexProgram(Affine([1], 0), silp_constraints()))
    assert value == pk.NEG_INF
    infeasible = ConvexProgram(ABS, FunctionFamily({"a": Affine([1], -1), "b": Affine([-1], -1)}, 1))
    assert oracle_solve(infeasible)[0] == pk.INF


def test_tampered_certificates_are_rejected():
    prog = ConvexProgram(Affine([-1], 0), silp_constraints())
    cert = kkt_certify(prog, [1])
    assert not verify_certificate(prog, [1], MultiplierCase(cert.lam * 2, cert.g0, cert.s))
    ref = kkt_certify(prog, [0])
    assert not verify_certificate(prog, [0], Refutation(ref.direction, ref.step * 100, ref.new_point, ref.decrease))


@given(st.integers(0, 2**32 - 1))
def test_random_programs(seed):
    rng = random.Random(seed)
    prog = rand_program(rng)
    value, xstar = oracle_solve(prog)
    assert value != pk.INF
    points = []
    if xstar is not None:
        points.append(xstar)
    x0 = slater_point(prog)
    points.append(x0)
    for x in points:
        cert = kkt_certify(prog, x)
        assert verify_certificate(prog, x, cert)
        assert isinstance(cert, Refutation) != is_optimal(prog, x)
        if isinstance(cert, Refutation):
            assert evaluate(prog.objective, cert.new_point) < evaluate(prog.objective, x)
        if isinstance(cert, MultiplierCase):
            assert sup_value(prog.constraints, x) == 0
