"""Tests for the PBW rewriting engine, the quantum determinant and the power identities."""

import random
from itertools import product

import pytest

import app.ncalgebra as ncalgebra
from app.errors import FieldMismatchError, ParameterError
from app.ncalgebra import (
    AlgebraParams,
    NCPoly,
    commutator,
    generators,
    identity_failures,
    is_central,
    is_normal_generator,
    multiply,
    multiply_all,
    normal_scalar,
    power_commutation_x22_x11k,
    power_commutation_x22k_x11,
    quantum_determinant,
    quantum_determinant_alt,
    word,
)
from app.scalars import RootExp, embed
from app.settings import NORMAL_FORM_CACHE_SIZE

POINTS = [
    (2, 3, 1, 1),
    (3, 4, 2, 3),
    (4, 6, 3, 5),
    (5, 7, 2, 3),
    (6, 9, 5, 4),
    (3, 9, 1, 2),
    (4, 12, 1, 1),
    (5, 3, 4, 2),
    (7, 4, 3, 1),
    (2, 6, 1, 5),
]


@pytest.fixture
def p():
    return AlgebraParams(2, 3, 1, 1)


def test_params_derived_orders():
    p = AlgebraParams(4, 12, 1, 1)
    assert (p.l, p.s1, p.s2) == (12, 3, 1)
    assert str(p.alpha_root) == "zeta(12)^3"
    assert str(p.beta_root) == "zeta(12)^1"
    assert (p.t1, p.t2, p.l1, p.l2) == (3, 6, 6, 6)
    assert p.regime == "generic"
    assert p.label == "(4,12,1,1)"


@pytest.mark.parametrize(
    "args, regime",
    [
        ((4, 4, 1, 3), "alpha-beta-inverse"),
        ((5, 5, 2, 2), "alpha-equals-beta"),
        ((2, 3), "generic"),
    ],
)
def test_regimes(args, regime):
    assert AlgebraParams(*args).regime == regime


@pytest.mark.parametrize("args", [(4, 6, 2, 1), (4, 6, 1, 3), (0, 3, 1, 1)])
def test_invalid_params_rejected(args):
    with pytest.raises(ParameterError):
        AlgebraParams(*args)


def test_coprimality_message_names_the_constraint():
    with pytest.raises(ParameterError, match="k1 must be coprime to m"):
        AlgebraParams(4, 6, 2, 1)


def test_field_order_must_be_a_multiple_of_l():
    assert AlgebraParams(2, 3, field_order=12).field_order == 12
    with pytest.raises(ParameterError):
        AlgebraParams(2, 3, field_order=9)


def test_swapped_params(p):
    q = p.swapped()
    assert (q.m, q.n, q.k1, q.k2) == (3, 2, 1, 1)
    assert q.alpha_root == p.beta_root
    assert q.beta_root == p.alpha_root


def test_defining_relations(p):
    L = p.field_order
    alpha, beta = p.alpha, p.beta
    assert word(p, ("X12", 1), ("X11", 1)) == NCPoly.monomial(L, (1, 1, 0, 0), alpha)
    assert word(p, ("X21", 1), ("X11", 1)) == NCPoly.monomial(L, (1, 0, 1, 0), beta)
    assert word(p, ("X21", 1), ("X12", 1)) == NCPoly.monomial(L, (0, 1, 1, 0), beta / alpha)
    assert word(p, ("X22", 1), ("X21", 1)) == NCPoly.monomial(L, (0, 0, 1, 1), alpha)
    assert word(p, ("X22", 1), ("X12", 1)) == NCPoly.monomial(L, (0, 1, 0, 1), beta)
    assert word(p, ("X22", 1), ("X11", 1)) == NCPoly(
        L, {(1, 0, 0, 1): 1, (0, 1, 1, 0): beta - p.alpha_inv}
    )


def test_ordered_words_are_already_normal(p):
    assert word(p, ("X11", 2), ("X12", 1), ("X22", 3)) == NCPoly.monomial(
        p.field_order, (2, 1, 0, 3)
    )


@pytest.mark.parametrize("point", POINTS[:4])
def test_multiplication_is_associative(point):
    p = AlgebraParams(*point)
    g = generators(p)
    f = g["X22"] + g["X12"].scale(p.alpha)
    h = multiply(g["X22"], g["X21"], p) - g["X11"]
    k = g["X11"] + g["X22"]
    assert multiply(multiply(f, h, p), k, p) == multiply(f, multiply(h, k, p), p)
    assert multiply_all([f, h, k], p) == multiply(f, multiply(h, k, p), p)


def random_poly(rng: random.Random, p: AlgebraParams, max_degree: int = 2) -> NCPoly:
    L = p.field_order
    monos = [e for e in product(range(max_degree + 1), repeat=4) if sum(e) <= max_degree]
    terms = {}
    for mono in rng.sample(monos, 3):
        terms[mono] = embed(RootExp(L, rng.randrange(L))) * rng.choice([-2, -1, 1, 3])
    return NCPoly(L, terms)


@pytest.mark.parametrize("point", POINTS)
def test_multiplication_is_associative_on_random_triples(point):
    p = AlgebraParams(*point)
    rng = random.Random(sum(point))
    for _ in range(2):
        f, h, k = (random_poly(rng, p) for _ in range(3))
        assert multiply(multiply(f, h, p), k, p) == multiply(f, multiply(h, k, p), p)


def test_rewriting_caches_are_bounded():
    assert ncalgebra._normal_form.cache_info().maxsize == NORMAL_FORM_CACHE_SIZE
    assert ncalgebra._monomial_product.cache_info().maxsize == NORMAL_FORM_CACHE_SIZE
    p = AlgebraParams(2, 3, 1, 1)
    g = generators(p)
    multiply(g["X22"], g["X11"], p)
    info = ncalgebra._monomial_product.cache_info()
    assert 0 < info.currsize <= info.maxsize


def test_multiply_rejects_foreign_field(p):
    f = NCPoly.generator("X11", 12)
    with pytest.raises(FieldMismatchError):
        multiply(f, f, p)


def test_str_of_polynomials(p):
    g = generators(p)
    assert str(g["X11"]) == "X11"
    assert str(NCPoly.constant(p.field_order)) == "1"
    assert str(NCPoly(p.field_order)) == "0"
    assert str(quantum_determinant(p)) == "X11*X22 + X12*X21"


@pytest.mark.parametrize("point", POINTS)
def test_quantum_determinant_two_forms_agree(point):
    p = AlgebraParams(*point)
    assert quantum_determinant_alt(p) == quantum_determinant(p)


@pytest.mark.parametrize("point", POINTS)
def test_quantum_determinant_commutation(point):
    p = AlgebraParams(*point)
    D, g = quantum_determinant(p), generators(p)
    assert commutator(D, g["X11"], p).is_zero()
    assert commutator(D, g["X22"], p).is_zero()
    assert normal_scalar(D, g["X12"], p) == p.alpha_inv * p.beta
    assert normal_scalar(D, g["X21"], p) == p.alpha / p.beta


@pytest.mark.parametrize("name", ["X12", "X21", "D"])
def test_normal_elements(p, name):
    assert is_normal_generator(name, p)


def test_x11_is_not_normal(p):
    assert not is_normal_generator(generators(p)["X11"], p)
    with pytest.raises(ParameterError):
        is_normal_generator("X33", p)


def test_determinant_is_central_only_when_alpha_equals_beta():
    p = AlgebraParams(5, 5, 2, 2)
    assert is_central(quantum_determinant(p), p)
    assert not is_central(quantum_determinant(AlgebraParams(2, 3)), AlgebraParams(2, 3))


@pytest.mark.parametrize("point", POINTS)
def test_power_identities_hold_up_to_twelve(point):
    assert identity_failures(AlgebraParams(*point), 12) == []


def test_power_identity_closed_forms_k2(p):
    ab2 = embed((p.alpha_root * p.beta_root) ** 2)
    expected = NCPoly(
        p.field_order, {(1, 0, 0, 2): 1, (0, 1, 1, 1): p.alpha_inv * (ab2 - 1)}
    )
    assert power_commutation_x22k_x11(2, p) == expected
    assert word(p, ("X22", 2), ("X11", 1)) == expected
    assert word(p, ("X22", 1), ("X11", 3)) == power_commutation_x22_x11k(3, p)
