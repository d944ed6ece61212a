"""Tests for cyclotomic arithmetic, scalar literals and reduction modulo a prime."""

import random
from fractions import Fraction

import pytest

from app.errors import FieldMismatchError, ParameterError, ZeroInversionError
from app.scalars import (
    CycloElem,
    RootExp,
    ScalarMatrix,
    cyclotomic_polynomial,
    embed,
    parse_scalar,
    prime_reduction,
    root_order,
)


@pytest.mark.parametrize(
    "L, coeffs",
    [
        (1, (-1, 1)),
        (2, (1, 1)),
        (4, (1, 0, 1)),
        (6, (1, -1, 1)),
        (12, (1, 0, -1, 0, 1)),
    ],
)
def test_cyclotomic_polynomial(L, coeffs):
    assert cyclotomic_polynomial(L) == coeffs


def test_cyclotomic_polynomial_rejects_nonpositive_order():
    with pytest.raises(ParameterError):
        cyclotomic_polynomial(0)


def test_root_exp_reduces_exponent_and_reports_order():
    r = RootExp(6, -1)
    assert r.e == 5
    assert root_order(RootExp(12, 3)) == 4
    assert root_order(RootExp(12, 0)) == 1
    assert (RootExp(12, 5) * RootExp(12, 7)).is_one()
    assert str(RootExp(12, 1)) == "zeta(12)^1"


def test_root_exp_lift_keeps_the_root():
    assert RootExp(3, 1).lift(6) == RootExp(6, 2)
    with pytest.raises(FieldMismatchError):
        RootExp(4, 1).lift(6)


def test_primitive_sixth_root_arithmetic():
    z = embed(RootExp(6, 1))
    assert z**6 == 1
    assert z**3 == -1
    assert z**2 - z + 1 == 0
    assert sum((z**i for i in range(6)), CycloElem.zero(6)) == 0
    assert z * z.inverse() == 1
    assert z**-1 == embed(RootExp(6, 5))


def test_gaussian_integers():
    i = CycloElem.from_coeffs(4, [0, 1])
    assert i * i == -1
    assert (1 + i) * (1 - i) == 2
    assert (3 + 4 * i) / (3 + 4 * i) == 1
    assert str(i) == "cyclo(4)[0,1]"
    assert i.coordinates() == ["0", "1"]


def random_element(rng: random.Random, L: int) -> CycloElem:
    coeffs = [Fraction(rng.randint(-4, 4), rng.randint(1, 3)) for _ in range(L)]
    return CycloElem.from_coeffs(L, coeffs)


@pytest.mark.parametrize("L", [4, 6, 12])
@pytest.mark.parametrize("seed", range(5))
def test_field_axioms_on_random_triples(L, seed):
    rng = random.Random(seed)
    x, y, z = (random_element(rng, L) for _ in range(3))
    assert (x * y) * z == x * (y * z)
    assert (x + y) + z == x + (y + z)
    assert x * (y + z) == x * y + x * z
    assert (x + y) * z == x * z + y * z
    assert x * y == y * x
    for e in (x, y, z):
        if e != 0:
            assert e * e.inverse() == CycloElem.one(L)
            assert (x * e) / e == x


def test_rational_elements_print_plainly():
    half = CycloElem.rational(6, Fraction(1, 2))
    assert str(half) == "1/2"
    assert half.is_rational()
    assert str(CycloElem.zero(6)) == "0"


def test_mixed_fields_are_rejected():
    with pytest.raises(FieldMismatchError):
        embed(RootExp(6, 1)) + embed(RootExp(4, 1))


def test_zero_has_no_inverse():
    with pytest.raises(ZeroInversionError):
        CycloElem.zero(6).inverse()


def test_lift_embeds_subfield():
    w = embed(RootExp(3, 1))
    assert w.lift(6) == embed(RootExp(6, 2))
    assert w.lift(12) == embed(RootExp(12, 4))


@pytest.mark.parametrize(
    "text, order",
    [("zeta(6)^5", 6), ("zeta(12)", 12), ("cyclo(4)[1,2]", 4), ("-3/2", 1), ("7", 1)],
)
def test_parse_scalar_orders(text, order):
    assert parse_scalar(text).order == order


def test_parse_scalar_values():
    assert parse_scalar("zeta(3)^1").to_elem(6) == embed(RootExp(6, 2))
    assert parse_scalar("zeta(6)^-1").to_elem(6) == embed(RootExp(6, 5))
    assert parse_scalar("-3/2").to_elem(6) == Fraction(-3, 2)
    assert parse_scalar("cyclo(4)[0,1]").to_elem(4) == embed(RootExp(4, 1))


@pytest.mark.parametrize("text", ["zeta(0)^1", "cyclo(4)[]", "cyclo(4)[a]", "pi", "zeta6"])
def test_parse_scalar_rejects_bad_literals(text):
    with pytest.raises(ParameterError):
        parse_scalar(text)


def test_literal_needs_compatible_field():
    with pytest.raises(FieldMismatchError):
        parse_scalar("zeta(4)^1").to_elem(6)


def test_scalar_matrix_products_and_rank():
    L = 6
    z = embed(RootExp(L, 1))
    M = ScalarMatrix.from_entries(2, 2, L, {(0, 1): z, (1, 0): 1})
    assert (M @ ScalarMatrix.identity(2, L)) == M
    assert M.power(2) == ScalarMatrix.from_entries(2, 2, L, {(0, 0): z, (1, 1): z})
    assert M.is_invertible()
    assert M.rank() == 2
    singular = ScalarMatrix.from_entries(2, 2, L, {(0, 0): 1, (1, 0): z})
    assert singular.rank() == 1
    assert not singular.is_invertible()
    assert (M - M).is_zero()
    assert M.direct_sum(singular).rank() == 3


def test_prime_reduction_is_a_ring_map():
    red = prime_reduction(12, floor=1000)
    assert red.prime > 1000
    assert red.prime % 12 == 1
    z = embed(RootExp(12, 1))
    one = red(CycloElem.one(12))
    assert red(z) ** 12 == one
    assert red(z) ** 6 != one
    assert red(z) ** 4 != one
    a, b = 2 + z, z**5 - Fraction(1, 3)
    assert red(a * b) == red(a) * red(b)
    assert red(a + b) == red(a) + red(b)
