"""Center of M2(alpha, beta): generators, the D^t dependency and brute-force comparison."""

import pytest

from app.errors import HypothesisError, ParameterError
from app.linalg import rank
from app.ncalgebra import (
    AlgebraParams,
    NCPoly,
    center_generators,
    center_matches_generators,
    central_space,
    dependency_coefficient,
    dependency_relation,
    det_power_expand,
    exponent_lemma_solutions,
    is_central,
    products_up_to,
    quantum_determinant,
    same_span,
)


def test_center_generators_for_2_3():
    p = AlgebraParams(2, 3, 1, 1)
    gens = center_generators(p)
    assert [str(g) for g in gens] == [
        "X11^6",
        "X12^6",
        "X21^6",
        "X22^6",
        "X11^6*X22^6",
        "X12^6*X21^6",
    ]
    assert all(is_central(g, p) for g in gens)


def test_center_needs_equal_orders():
    p = AlgebraParams(4, 12, 1, 1)
    assert (p.t1, p.t2) == (3, 6)
    with pytest.raises(HypothesisError, match="t1=3, t2=6"):
        center_generators(p)


def test_center_rejects_degenerate_regimes():
    with pytest.raises(HypothesisError):
        center_generators(AlgebraParams(5, 5, 2, 2))


@pytest.mark.parametrize("point, t", [((2, 3, 1, 1), 6), ((3, 5, 1, 1), 15)])
def test_det_power_dependency(point, t):
    p = AlgebraParams(*point)
    assert p.t1 == p.t2 == t
    expanded = det_power_expand(t, p)
    assert len(expanded) == 2
    assert expanded == dependency_relation(p)
    assert expanded.coefficient((0, t, t, 0)) == dependency_coefficient(t, p)
    assert expanded.coefficient((t, 0, 0, t)) == 1


def test_dependency_coefficient_for_2_3():
    assert dependency_coefficient(6, AlgebraParams(2, 3, 1, 1)) == -1


def test_det_power_expand_needs_positive_power():
    p = AlgebraParams(2, 3, 1, 1)
    assert det_power_expand(1, p) == quantum_determinant(p)
    with pytest.raises(ParameterError):
        det_power_expand(0, p)


@pytest.mark.parametrize("point", [(2, 3, 1, 1), (3, 5, 1, 1), (3, 4, 1, 1), (10, 10, 1, 3)])
def test_exponent_lemma_solutions_are_multiples_of_t(point):
    p = AlgebraParams(*point)
    t = p.t1
    solutions = exponent_lemma_solutions(p)
    assert solutions == [(k * t, k * t) for k in range(p.l // t)]


def test_central_space_rejects_negative_cap():
    with pytest.raises(ParameterError):
        central_space(AlgebraParams(2, 3), -1)


def test_central_space_below_first_generator_is_scalars():
    p = AlgebraParams(2, 3, 1, 1)
    space = central_space(p, 5)
    assert len(space) == 1
    assert space[0] == NCPoly.constant(p.field_order)


def test_central_space_matches_generators_2_3_cap_12():
    p = AlgebraParams(2, 3, 1, 1)
    space = central_space(p, 12)
    products = products_up_to(center_generators(p), 12, p)
    # t = l: the degree-12 generators repeat products of the l-th powers
    assert len(products) == 17
    assert rank(dict(f.terms) for f in products) == 15
    assert len(space) == 15
    assert same_span(space, products)


@pytest.mark.slow
def test_central_space_matches_generators_2_5_cap_10():
    assert center_matches_generators(AlgebraParams(2, 5, 1, 1), 10)


def test_same_span_detects_difference():
    L = 6
    a = [NCPoly.monomial(L, (1, 0, 0, 0)), NCPoly.monomial(L, (0, 1, 0, 0))]
    b = [a[0] + a[1], a[0] - a[1]]
    assert same_span(a, b)
    assert not same_span(a, b[:1])
