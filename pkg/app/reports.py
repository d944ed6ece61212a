"""Assemble command results from the engine modules."""

from app.errors import HypothesisError, InvariantViolation, ParameterError
from app.iso import (
    are_isomorphic,
    cross_validate,
    explicit_isomorphism,
    intertwining_defect,
    oracle_verdict,
    root_grid,
)
from app.linalg import rank
from app.logger import logger
from app.models import (
    AlgebraSummary,
    CenterReport,
    CenterSummary,
    ClassificationReport,
    CrossValidationReport,
    FamilyDimension,
    IsoReport,
    MaximalDimension,
    MenuEntry,
    PiDegreeReport,
    PiDegreeSummary,
    RepReport,
    RunConfig,
    TorsionMenu,
)
from app.ncalgebra import (
    AlgebraParams,
    center_generators,
    central_space,
    dependency_relation,
    exponent_lemma_solutions,
    identity_failures,
    products_up_to,
    same_span,
)
from app.pidegree import (
    FACTOR_FAMILIES,
    dimension_menu,
    factor_pi_degree,
    maximal_dimension_branch,
    menu_entries,
    pi_degree,
)
from app.reps import (
    ParamTuple,
    annihilator_profile,
    build,
    burnside_dimension,
    eigen_mismatches,
    session_params,
    verify_relations,
    write_matrix_dump,
)
from app.scalars import parse_scalar

IDENTITY_K_MAX = 12


def pideg_summary(p: AlgebraParams) -> PiDegreeSummary:
    result = pi_degree(p)
    return PiDegreeSummary(
        regime=result.regime,
        value=result.value,
        snf=result.snf,
        closed=result.closed,
        special=result.special,
        invariant_factors=list(result.invariant_factors),
    )


def pidegree_report(p: AlgebraParams) -> PiDegreeReport:
    summary = pideg_summary(p)
    swapped = pi_degree(p.swapped()).value
    if swapped != summary.value:
        raise InvariantViolation(f"Point {p.label}: swapped PI degree {swapped} != {summary.value}")
    return PiDegreeReport(params=AlgebraSummary.of(p), pideg=summary, swapped_pideg=swapped)


def center_summary(p: AlgebraParams) -> CenterSummary:
    try:
        gens = center_generators(p)
    except HypothesisError:
        return CenterSummary(hypothesis=False, generators=[], polynomial_algebra=False)
    return CenterSummary(
        hypothesis=True, generators=[str(g) for g in gens], polynomial_algebra=p.t1 == p.l
    )


def center_report(p: AlgebraParams, deg_cap: int) -> CenterReport:
    failures = [f"{name} (k={k})" for name, k in identity_failures(p, IDENTITY_K_MAX)]
    if failures:
        raise InvariantViolation(f"Point {p.label}: commutation identities fail: {failures}")
    space = central_space(p, deg_cap)
    base = dict(
        params=AlgebraSummary.of(p),
        deg_cap=deg_cap,
        central_space_dim=len(space),
        identity_failures=failures,
    )
    try:
        gens = center_generators(p)
    except HypothesisError as exc:
        return CenterReport(
            **base,
            hypothesis=False,
            reason=str(exc),
            generators=[],
            polynomial_algebra=False,
            lemma_solutions=[],
        )
    products = products_up_to(gens, deg_cap, p)
    match = same_span(space, products)
    if not match:
        raise InvariantViolation(
            f"Point {p.label}: central elements up to degree {deg_cap} differ from the "
            f"span of generator products"
        )
    return CenterReport(
        **base,
        hypothesis=True,
        t=p.t1,
        generators=[str(g) for g in gens],
        polynomial_algebra=p.t1 == p.l,
        dependency_relation=f"D^{p.t1} = {dependency_relation(p)}",
        lemma_solutions=[list(s) for s in exponent_lemma_solutions(p)],
        generated_span_dim=rank(dict(f.terms) for f in products),
        brute_force_match=match,
    )


def classification_report(p: AlgebraParams) -> ClassificationReport:
    summary = pideg_summary(p)
    if summary.snf is not None and summary.snf != summary.closed:
        raise InvariantViolation(f"Point {p.label}: snf and closed form disagree")
    if p.ab_is_one:
        families, simple_dimensions = [], sorted({1, p.m})
    else:
        families = [
            FamilyDimension(family="V1", dimension=p.l1 * p.l2),
            FamilyDimension(family="V2", dimension=p.l1 * p.l2),
            FamilyDimension(family="V3", dimension=p.t1 * p.l2),
        ]
        simple_dimensions = None
    t = p.t1 * p.t2
    maximal = MaximalDimension(
        branch=maximal_dimension_branch(p),
        l=p.l,
        t1t2=t,
        l_divides_t1t2=t % p.l == 0,
        l_proper_divisor=t % p.l == 0 and t != p.l,
    )
    menus = [
        TorsionMenu(
            family=family,
            pideg=factor_pi_degree(p, family),
            dimensions=dimension_menu(p, family),
            entries=[
                MenuEntry(dimension=e.dimension, condition=e.condition)
                for e in menu_entries(p, family)
            ],
        )
        for family in FACTOR_FAMILIES
    ]
    logger.info(f"Point {p.label}: classified, pideg {summary.value}, branch {maximal.branch}")
    return ClassificationReport(
        params=AlgebraSummary.of(p),
        pideg=summary,
        center=center_summary(p),
        families=families,
        simple_dimensions=simple_dimensions,
        maximal_dimension=maximal,
        torsion_menus=menus,
    )


def _default_mu(family: str) -> list[str]:
    return ["1"] * {"V1": 4, "V2": 3, "V3": 2}[family]


def rep_report(config: RunConfig) -> RepReport:
    family = config.require_family()
    texts = config.mu or _default_mu(family)
    literals = [parse_scalar(text) for text in texts]
    p = session_params(config.algebra(), literals)
    mu = ParamTuple.from_literals(family, literals, p.field_order)
    r = build(p, mu)
    report = RepReport(
        params=AlgebraSummary.of(p),
        family=family,
        mu=texts,
        action=config.action,
        dimension=r.dim,
        ranges=list(r.ranges),
    )
    if config.action in ("verify", "simple"):
        report.violations = verify_relations(r)
        report.eigen_mismatches = eigen_mismatches(r)
        if report.violations or report.eigen_mismatches:
            raise InvariantViolation(
                f"Point {p.label}: {family} fails {report.violations + report.eigen_mismatches}"
            )
    if config.action == "simple":
        report.burnside_dimension = burnside_dimension(r)
        report.simple = report.burnside_dimension == r.dim**2
    if config.action == "profile":
        report.profile = annihilator_profile(r)
    if config.action == "build" and config.out:
        write_matrix_dump(r, config.out)
        report.dump = config.out
    return report


def iso_report(config: RunConfig) -> IsoReport:
    family = config.require_family()
    if not config.mu or not config.lam:
        raise ParameterError("--mu and --lam are required for iso")
    mu_lit, lam_lit = config.mu_literals(), config.lam_literals()
    p = session_params(config.algebra(), mu_lit, lam_lit)
    mu = ParamTuple.from_literals(family, mu_lit, p.field_order)
    lam = ParamTuple.from_literals(family, lam_lit, p.field_order)
    rA, rB = build(p, mu), build(p, lam)

    verdict = are_isomorphic(rA, rB)
    oracle = oracle_verdict(rA, rB)
    explicit_ok = None
    if verdict.shift is not None:
        phi = explicit_isomorphism(family, mu, lam, verdict.shift, p)
        explicit_ok = not intertwining_defect(rA, rB, phi) and phi.is_invertible()
    agree = verdict.isomorphic == oracle.isomorphic
    if not agree or explicit_ok is False:
        raise InvariantViolation(
            f"Point {p.label}: criteria says {verdict.isomorphic}, oracle says "
            f"{oracle.isomorphic}, explicit map valid: {explicit_ok}"
        )
    return IsoReport(
        params=AlgebraSummary.of(p),
        family=family,
        mu=config.mu,
        lam=config.lam,
        isomorphic=verdict.isomorphic,
        shift=list(verdict.shift) if verdict.shift is not None else None,
        oracle_isomorphic=oracle.isomorphic,
        intertwiner_dimension=oracle.dimension,
        explicit_map_valid=explicit_ok,
        agree=agree,
    )


def cross_validation_report(config: RunConfig) -> CrossValidationReport:
    family = config.require_family()
    p, grid = root_grid(family, config.algebra())
    report = cross_validate(p, grid)
    result = CrossValidationReport(
        params=AlgebraSummary.of(p),
        family=family,
        grid_size=len(grid),
        pairs=report.pairs,
        agreements=report.agreements,
        disagreements=[list(pair) for pair in report.disagreements],
        schur_violations=[list(pair) for pair in report.schur_violations],
        cross_family_pairs=report.cross_family_pairs,
        cross_family_isomorphic=report.cross_family_isomorphic,
        classes=len(report.partition),
        partition=report.partition,
        criteria_partition=report.criteria_partition,
        equivalence=report.equivalence,
        ok=report.ok,
    )
    if not report.ok:
        raise InvariantViolation(f"Point {p.label}: {family} cross-validation failed")
    return result
