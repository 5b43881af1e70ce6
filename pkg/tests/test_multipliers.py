import itertools

import pytest

from marginal.errors import MembershipError
from marginal.functions import PWLConvexFunction, subdifferential
from marginal.geometry import (
    SUPERSET, EQUAL, HPolyhedron, full_space, is_subset, minkowski_sum, origin,
    same_set, set_relation, singleton,
)
from marginal.instances import qualified_instances
from marginal.multipliers import (
    HATTED, STANDARD, LagrangianSpec, MultiplierPolyhedron, lagrangian_partial,
    lagrangian_subdifferential, lambda0_set, lambda_inf_set, lambda_set, partial_x_lagrangian_union,
)
from marginal.functions import AffineFunctional
from marginal.program import ParametricProgram
from marginal.rational import Q

from conftest import abs_sum, example_program, interval


def test_lambda0_examples(ex42):
    assert same_set(lambda0_set(ex42, (0,), (0,)).set, interval(0, None))
    inactive = ParametricProgram(1, 1, abs_sum(), [PWLConvexFunction.affine((0, 1), -1)] * 2)
    assert same_set(lambda0_set(inactive, (0,), (0,)).set, singleton((0, 0)))
    eq = ParametricProgram(1, 1, abs_sum(), (), (AffineFunctional((0,), (1,), 0),))
    assert same_set(lambda0_set(eq, (0,), (0,)).set, full_space(1))
    with pytest.raises(MembershipError):
        lambda0_set(ex42, (0,), (1,))


def test_lagrangian_subdifferential_examples(ex42):
    spec = LagrangianSpec(ex42, STANDARD, ((0,), (0,)))
    for lam in (0, Q(1, 2), 3):
        r = lagrangian_subdifferential(spec, (lam,))
        shifted = minkowski_sum(subdifferential(abs_sum(), (0, 0)), singleton((0, lam)))
        assert r.qualified and same_set(r.set, shifted)
    free = example_program(g=None)
    r = lagrangian_subdifferential(LagrangianSpec(free, STANDARD, ((0,), (0,))), ())
    assert same_set(r.set, subdifferential(abs_sum(), (0, 0)))
    r = lagrangian_subdifferential(LagrangianSpec(ex42, HATTED, ((0,), (0,))), (0,))
    assert same_set(r.set, origin(2))
    with pytest.raises(MembershipError):
        lagrangian_subdifferential(spec, (-1,))


def test_lambda_examples(ex42):
    assert same_set(lambda_set(ex42, (0,), (0,)).set, interval(0, 1))
    free = example_program(g=None)
    L = lambda_set(free, (0,), (0,))
    assert L.set.dim == 0 and not L.is_empty()
    abs_y = ParametricProgram(1, 1, PWLConvexFunction(2, [((0, 1), 0), ((0, -1), 0)]),
                              [PWLConvexFunction.affine((0, 1))])
    assert same_set(lambda_set(abs_y, (0,), (0,)).set, interval(0, 1))


def test_lambda_inf_examples(ex42):
    assert same_set(lambda_inf_set(ex42, (0,), (0,)).set, interval(0, 0))
    half = PWLConvexFunction(2, abs_sum().pieces, HPolyhedron(2, [((0, 1), 0)]))
    P = ParametricProgram(1, 1, half, [PWLConvexFunction.affine((0, 1))])
    assert same_set(lambda_inf_set(P, (0,), (0,)).set, interval(0, 0))
    L = lambda_inf_set(example_program(g=None), (0,), (0,))
    assert L.set.dim == 0 and not L.is_empty()


def test_union_examples(ex42):
    spec = LagrangianSpec(ex42, STANDARD, ((0,), (0,)))
    assert same_set(partial_x_lagrangian_union(spec, lambda_set(ex42, (0,), (0,))), interval(-1, 1))
    vertex = MultiplierPolyhedron(1, 0, interval(1, 1), "Lambda")
    direct = lagrangian_partial(spec, (1,), "x")
    assert same_set(partial_x_lagrangian_union(spec, vertex), direct)
    hatted = LagrangianSpec(ex42, HATTED, ((0,), (0,)))
    assert same_set(partial_x_lagrangian_union(hatted, lambda_inf_set(ex42, (0,), (0,))), interval(0, 0))


INSTANCES = qualified_instances(40, seed=900)


def samples(M: MultiplierPolyhedron):
    """Vertices and a few points pushed out along rays and lines."""
    V = M.set.v
    out = [tuple(p) for p in V.points]
    for p, d in itertools.product(V.points, V.rays + V.lines):
        for t in (Q(1, 2), 2):
            out.append(tuple(a + t * b for a, b in zip(p, d)))
    for p, q in itertools.combinations(V.points, 2):
        out.append(tuple((a + b) / 2 for a, b in zip(p, q)))
    return out


def stationary(spec, lm):
    zero = (Q(0),) * spec.program.ny
    return lagrangian_partial(spec, lm, "y").contains(zero)


@pytest.mark.parametrize("kind, builder", [(STANDARD, lambda_set), (HATTED, lambda_inf_set)])
def test_vertex_certification(kind, builder):
    for P, xbar, ybar, _ in INSTANCES:
        spec = LagrangianSpec(P, kind, (xbar, ybar))
        L, L0 = builder(P, xbar, ybar), lambda0_set(P, xbar, ybar)
        assert is_subset(L.set, L0.set)
        for lm in samples(L):
            assert stationary(spec, lm)
        for lm in samples(L0):
            assert stationary(spec, lm) == L.contains(lm)


def test_dropping_a_row_of_C_never_enlarges_lambda():
    checked = 0
    for P, xbar, ybar, _ in INSTANCES:
        for r in range(len(P.C.ineqs)):
            rows = P.C.ineqs[:r] + P.C.ineqs[r + 1:]
            bigger = ParametricProgram(P.nx, P.ny, P.phi, P.gs, P.hs, HPolyhedron(P.dim, rows, P.C.eqs))
            rel = set_relation(lambda_set(P, xbar, ybar).set, lambda_set(bigger, xbar, ybar).set)
            assert rel in (EQUAL, SUPERSET)
            checked += 1
    assert checked


def test_dropping_a_row_can_shrink_lambda():
    # phi = y, g = -y, C = {y >= 0}: Λ = [0, 1] with C and {1} without it
    phi = PWLConvexFunction.affine((0, 1))
    g = PWLConvexFunction.affine((0, -1))
    with_c = ParametricProgram(1, 1, phi, [g], (), HPolyhedron(2, [((0, -1), 0)]))
    without = ParametricProgram(1, 1, phi, [g])
    assert same_set(lambda_set(with_c, (0,), (0,)).set, interval(0, 1))
    assert same_set(lambda_set(without, (0,), (0,)).set, interval(1, 1))


def test_zero_multiplier_gives_subdifferential_of_phi():
    for P, xbar, ybar, _ in INSTANCES:
        if P.C.ineqs:
            continue
        spec = LagrangianSpec(P, STANDARD, (xbar, ybar))
        zero = (Q(0),) * (P.m + P.k)
        assert same_set(lagrangian_partial(spec, zero), subdifferential(P.phi, xbar + ybar))
