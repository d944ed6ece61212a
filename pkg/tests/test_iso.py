"""Isomorphism criteria against the intertwiner oracle."""

import pytest

from app.errors import ParameterError
from app.iso import (
    are_isomorphic,
    criteria,
    criteria_V1,
    criteria_V2,
    criteria_V3,
    cross_validate,
    explicit_isomorphism,
    intertwiner_space,
    intertwining_defect,
    oracle_verdict,
    root_grid,
    v2_shift_candidates,
)
from app.ncalgebra import AlgebraParams
from app.reps import ParamTuple, build, direct_sum, swap_transpose
from app.scalars import CycloElem, RootExp, embed


@pytest.fixture
def p():
    return AlgebraParams(2, 3, 1, 1)


def tuple_of(family, p, *exps):
    return ParamTuple(family, tuple(embed(RootExp(p.field_order, e)) for e in exps))


def test_v3_shift_by_alpha_inverse_beta(p):
    # alpha^-1 beta = zeta_6^5, so lambda2 = (alpha^-1 beta)^-1 = zeta_6^1
    mu, lam = tuple_of("V3", p, 0, 0), tuple_of("V3", p, 0, 1)
    assert criteria_V3(mu, lam, p) == 1
    assert criteria(mu, lam, p) == (0, 1)
    verdict = are_isomorphic(build(p, mu), build(p, lam))
    assert verdict.isomorphic
    assert verdict.method == "criteria"
    assert verdict.shift == (0, 1)


def test_v3_non_isomorphic_pair(p):
    mu = tuple_of("V3", p, 0, 0)
    lam = ParamTuple("V3", (CycloElem.one(6), CycloElem.rational(6, 2)))
    assert criteria_V3(mu, lam, p) is None
    oracle = oracle_verdict(build(p, mu), build(p, lam))
    assert not oracle.isomorphic
    assert oracle.dimension == 0


@pytest.mark.parametrize(
    "family, mu_exps, lam_exps",
    [
        ("V1", (0, 0, 0, 0), (0, 0, 0, 0)),
        ("V1", (1, 0, 2, 1), (1, 0, 2, 1)),
        ("V2", (0, 0, 0), (0, 0, 0)),
        ("V2", (1, 2, 0), (1, 2, 0)),
        ("V3", (0, 1), (0, 1)),
    ],
)
def test_every_module_is_isomorphic_to_itself(p, family, mu_exps, lam_exps):
    mu, lam = tuple_of(family, p, *mu_exps), tuple_of(family, p, *lam_exps)
    assert criteria(mu, lam, p) == (0, 0)
    rA, rB = build(p, mu), build(p, lam)
    space = intertwiner_space(rA, rB)
    assert space.dimension == 1
    assert space.method == "binomial"
    assert oracle_verdict(rA, rB).isomorphic


@pytest.mark.parametrize(
    "point, family, mu_exps, lam_exps, shift",
    [
        ((2, 3, 1, 1), "V3", (0, 0), (0, 1), (0, 1)),
        ((2, 3, 1, 1), "V3", (1, 2), (3, 5), (0, 3)),
        ((2, 3, 1, 1), "V1", (0, 0, 0, 0), (0, 0, 5, 5), (0, 5)),
        ((2, 3, 1, 1), "V1", (0, 0, 0, 0), (1, 2, 5, 1), (2, 1)),
        ((4, 12, 1, 1), "V1", (0, 0, 0, 0), (1, 1, 6, 2), (1, 1)),
        ((2, 3, 1, 1), "V2", (0, 0, 0), (0, 0, 1), (0, 1)),
        ((2, 6, 1, 1), "V2", (0, 0, 0), (1, 1, 2), (3, 1)),
    ],
)
def test_explicit_isomorphism_intertwines(point, family, mu_exps, lam_exps, shift):
    q = AlgebraParams(*point)
    mu, lam = tuple_of(family, q, *mu_exps), tuple_of(family, q, *lam_exps)
    assert criteria(mu, lam, q) == shift
    phi = explicit_isomorphism(family, mu, lam, shift, q)
    rA, rB = build(q, mu), build(q, lam)
    assert intertwining_defect(rA, rB, phi) == []
    assert phi.is_invertible()
    assert oracle_verdict(rA, rB).isomorphic


def test_v1_criteria_finds_shift_for_twisted_parameters(p):
    # lambda4 = mu4 (alpha^-1 beta)^-1 and lambda3 = mu3 (alpha^-1 beta)^-1 give v = 1
    mu, lam = tuple_of("V1", p, 0, 0, 0, 0), tuple_of("V1", p, 0, 0, 1, 1)
    assert criteria_V1(mu, lam, p) == (0, 1)


def test_v2_shift_candidates():
    assert v2_shift_candidates(AlgebraParams(2, 3, 1, 1)) == [0]
    p = AlgebraParams(2, 6, 1, 1)
    assert (p.t1, p.l1) == (3, 6)
    assert v2_shift_candidates(p) == [0, 3]


def test_criteria_reject_mixed_families(p):
    with pytest.raises(ParameterError):
        criteria_V2(tuple_of("V2", p, 0, 0, 0), tuple_of("V3", p, 0, 0), p)


def test_intertwiners_between_different_dimensions(p):
    q = AlgebraParams(2, 6, 1, 1)
    one = CycloElem.one(q.field_order)
    rA = build(q, ParamTuple("V1", (one,) * 4))
    rB = build(q, ParamTuple("V3", (one,) * 2))
    verdict = are_isomorphic(rA, rB)
    assert not verdict.isomorphic
    assert verdict.method == "dimension"
    assert intertwiner_space(rA, rB).dimension == 0


def test_intertwiners_need_same_algebra(p):
    q = AlgebraParams(3, 2, 1, 1)
    rA = build(p, tuple_of("V3", p, 0, 0))
    rB = build(q, ParamTuple("V3", (CycloElem.one(6),) * 2))
    with pytest.raises(ParameterError):
        intertwiner_space(rA, rB)


def test_cross_family_modules_are_never_isomorphic(p):
    one = CycloElem.one(p.field_order)
    v1 = build(p, ParamTuple("V1", (one,) * 4))
    v2 = build(p, ParamTuple("V2", (one,) * 3))
    v3 = build(p, ParamTuple("V3", (one,) * 2))
    for rA, rB in ((v1, v2), (v1, v3), (v2, v3)):
        verdict = are_isomorphic(rA, rB)
        assert verdict.method == "oracle"
        assert not verdict.isomorphic


def test_oracle_on_non_simple_module_has_larger_hom_space():
    q = AlgebraParams(2, 6, 1, 1)
    r = build(q, ParamTuple("V3", (CycloElem.one(q.field_order),) * 2))
    twice = direct_sum(r, r)
    assert intertwiner_space(twice, twice).dimension == 4


def test_twisted_modules_go_to_the_oracle(p):
    r = build(p, tuple_of("V2", p, 0, 0, 0))
    s = swap_transpose(r)
    verdict = are_isomorphic(s, s)
    assert verdict.method == "oracle"
    assert verdict.isomorphic
    back = swap_transpose(s)
    assert are_isomorphic(r, back).method == "criteria"


def test_root_grid_shape(p):
    q, grid = root_grid("V3", p)
    assert q.field_order == 12
    assert len(grid) == 16
    assert all(t.family == "V3" for t in grid)


def test_cross_validate_v3_grid(p):
    q, grid = root_grid("V3", p)
    report = cross_validate(q, grid)
    assert report.pairs == 256
    assert report.agreements == 256
    assert report.disagreements == []
    assert report.schur_violations == []
    assert report.cross_family_pairs == 2
    assert report.cross_family_isomorphic == []
    assert report.equivalence
    assert len(report.partition) == 4
    assert report.ok


def test_cross_validate_small_point():
    q, grid = root_grid("V1", AlgebraParams(8, 8, 1, 3))
    report = cross_validate(q, grid)
    assert report.pairs == 256
    assert report.ok


def test_cross_validate_needs_a_grid(p):
    with pytest.raises(ParameterError):
        cross_validate(p, [])


@pytest.mark.slow
@pytest.mark.parametrize("family", ["V1", "V2"])
def test_cross_validate_full_grids(p, family):
    q, grid = root_grid(family, p)
    report = cross_validate(q, grid)
    assert report.pairs == len(grid) ** 2 >= 200
    assert report.ok
