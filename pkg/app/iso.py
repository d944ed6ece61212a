"""Isomorphism of simple modules: parameter criteria against an intertwiner oracle.

The oracle only sees matrices. It solves A_g T = T B_g for the four
generators; T maps coordinates of the first module to the second (row i of
T is the image of basis vector i).
"""

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from itertools import product
from math import lcm

from app.errors import ParameterError, ReductionError
from app.linalg import EchelonBasis
from app.logger import logger
from app.ncalgebra import GENERATOR_NAMES, AlgebraParams
from app.reps import ParamTuple, Representation, ab_power, ainv_b_power, build, root_power
from app.scalars import CycloElem, RootExp, ScalarMatrix, embed, prime_reduction

# Criteria ------------------------------------------------------------------------------------


def _pair(mu: ParamTuple, lam: ParamTuple, family: str) -> None:
    for t in (mu, lam):
        if t.family != family:
            raise ParameterError(f"{family} criteria got a {t.family} tuple")


def criteria_V1(mu: ParamTuple, lam: ParamTuple, p: AlgebraParams) -> tuple[int, int] | None:
    """First (u, v) with 0 <= u < l1, 0 <= v < l2 satisfying all four conditions."""
    _pair(mu, lam, "V1")
    (m1, m2, m3, m4), (x1, x2, x3, x4) = mu.mu, lam.mu
    l1, l2 = p.l1, p.l2
    m1_pow, x1_pow = m1**l1, x1**l1
    m2_pow, x2_pow = m2**l2, x2**l2
    for u in range(l1):
        if m2_pow != x2_pow * root_power(p, 0, -u * l2):
            continue
        for v in range(l2):
            if (
                m4 == x4 * ainv_b_power(p, v)
                and m3 == x3 * ab_power(p, -u) * ainv_b_power(p, v)
                and m1_pow == x1_pow * root_power(p, 0, v * l1)
            ):
                return u, v
    return None


def v2_shift_candidates(p: AlgebraParams) -> list[int]:
    """u ranges over 0 and t1 only (t1 only when it is a valid index)."""
    return [0, p.t1] if p.t1 < p.l1 else [0]


def criteria_V2(mu: ParamTuple, lam: ParamTuple, p: AlgebraParams) -> tuple[int, int] | None:
    _pair(mu, lam, "V2")
    (m1, m2, m3), (x1, x2, x3) = mu.mu, lam.mu
    l1, l2 = p.l1, p.l2
    m1_pow, x1_pow = m1**l1, x1**l1
    m2_pow, x2_pow = m2**l2, x2**l2
    for u in v2_shift_candidates(p):
        if m2_pow != x2_pow * root_power(p, u * l2):
            continue
        for v in range(l2):
            if (
                m3 == x3 * ab_power(p, u) * ainv_b_power(p, v)
                and m1_pow == x1_pow * root_power(p, -v * l1)
            ):
                return u, v
    return None


def criteria_V3(mu: ParamTuple, lam: ParamTuple, p: AlgebraParams) -> int | None:
    _pair(mu, lam, "V3")
    (m1, m2), (x1, x2) = mu.mu, lam.mu
    l2 = p.l2
    if m1**l2 != x1**l2:
        return None
    for v in range(l2):
        if m2 == x2 * ainv_b_power(p, v):
            return v
    return None


def criteria(mu: ParamTuple, lam: ParamTuple, p: AlgebraParams) -> tuple[int, int] | None:
    """Shift (u, v) for any family; V3 shifts are reported as (0, v)."""
    if mu.family == "V1":
        return criteria_V1(mu, lam, p)
    if mu.family == "V2":
        return criteria_V2(mu, lam, p)
    v = criteria_V3(mu, lam, p)
    return None if v is None else (0, v)


def explicit_isomorphism(
    family: str, mu: ParamTuple, lam: ParamTuple, shift: tuple[int, int], p: AlgebraParams
) -> ScalarMatrix:
    """The diagonal-times-shift map V(mu) -> V(lambda) for a criteria shift (u, v)."""
    u, v = shift
    l1, l2 = p.l1, p.l2
    r1 = p.t1 if family == "V3" else l1
    L = p.field_order
    entries = {}
    for a in range(r1):
        for b in range(l2):
            target_b = (b + v) % l2
            source = a * l2 + b
            if family == "V1":
                x1, x2 = mu.mu[0], mu.mu[1]
                y1, y2 = lam.mu[0], lam.mu[1]
                target_a = (a + u) % l1
                coeff = (y1 / x1) ** a * (y2 / x2) ** b * root_power(p, 0, a * v)
                if b >= l2 - v:
                    coeff = coeff * root_power(p, 0, -target_a * l2)
            elif family == "V2":
                x1, x2 = mu.mu[0], mu.mu[1]
                y1, y2 = lam.mu[0], lam.mu[1]
                target_a = (a + u) % l1
                coeff = (y1 / x1) ** a * (y2 / x2 * root_power(p, u)) ** b
                if a >= l1 - u:
                    coeff = coeff * root_power(p, -target_b * l1)
            elif family == "V3":
                target_a = a
                coeff = (lam.mu[0] / mu.mu[0]) ** b
            else:
                raise ParameterError(f"no explicit isomorphism for family {family!r}")
            entries[(source, target_a * l2 + target_b)] = coeff
    d = r1 * l2
    return ScalarMatrix.from_entries(d, d, L, entries)


# Oracle --------------------------------------------------------------------------------------


@dataclass
class IntertwinerSpace:
    dimension: int
    basis: list[ScalarMatrix]
    method: str


def intertwining_defect(rA: Representation, rB: Representation, T: ScalarMatrix) -> list[str]:
    """Generators g with A_g T != T B_g."""
    return [
        name
        for name in GENERATOR_NAMES
        if not (rA.matrices[name] @ T - T @ rB.matrices[name]).is_zero()
    ]


def _equations(rA: Representation, rB: Representation) -> dict[tuple, dict]:
    """Rows of A_g T - T B_g = 0 in the unknowns T[(i, j)]."""
    d = rA.dim
    equations: dict[tuple, dict] = {}
    for name in GENERATOR_NAMES:
        A, B = rA.matrices[name], rB.matrices[name]
        for (i, k), value in A.entries():
            for j in range(d):
                row = equations.setdefault((name, i, j), {})
                key = (k, j)
                row[key] = row[key] + value if key in row else value
        for (k, j), value in B.entries():
            for i in range(d):
                row = equations.setdefault((name, i, j), {})
                key = (i, k)
                row[key] = row[key] - value if key in row else -value
    return {key: {u: c for u, c in row.items() if c} for key, row in equations.items()}


class _WeightedUnionFind:
    """Solves systems whose equations have one or two terms: x = w * root per component."""

    def __init__(self, one: CycloElem):
        self.one = one
        self.parent: dict = {}
        self.weight: dict = {}
        self.dead: set = set()

    def find(self, x):
        if x not in self.parent:
            self.parent[x], self.weight[x] = x, self.one
            return x, self.one
        path = []
        while self.parent[x] != x:
            path.append(x)
            x = self.parent[x]
        root, acc = x, self.one
        for node in reversed(path):
            acc = self.weight[node] * acc
            self.parent[node], self.weight[node] = root, acc
        return root, (self.weight[path[0]] if path else self.one)

    def kill(self, x) -> None:
        self.dead.add(self.find(x)[0])

    def relate(self, x, y, ratio: CycloElem) -> None:
        """Impose x = ratio * y."""
        rx, wx = self.find(x)
        ry, wy = self.find(y)
        if rx == ry:
            if wx != ratio * wy:
                self.dead.add(rx)
            return
        self.parent[rx] = ry
        self.weight[rx] = ratio * wy / wx
        if rx in self.dead:
            self.dead.discard(rx)
            self.dead.add(ry)

    def components(self, variables: Iterable) -> list[dict]:
        groups: dict = {}
        for x in variables:
            root, w = self.find(x)
            groups.setdefault(root, {})[x] = w
        return [groups[root] for root in sorted(groups) if root not in self.dead]


def _solve_binomial(equations, variables, one) -> list[dict]:
    uf = _WeightedUnionFind(one)
    for row in equations.values():
        if len(row) == 1:
            (x,) = row
            uf.kill(x)
        elif len(row) == 2:
            (x, a), (y, b) = sorted(row.items())
            uf.relate(x, y, -b / a)
    return uf.components(variables)


def _modular_nullity(equations, variables, L: int) -> int | None:
    try:
        red = prime_reduction(L)
        basis = EchelonBasis()
        for row in equations.values():
            basis.insert({k: red(c) for k, c in row.items()})
    except ReductionError:
        return None
    return len(variables) - basis.rank


def intertwiner_space(rA: Representation, rB: Representation) -> IntertwinerSpace:
    """Exact solution space of A_g T = T B_g for all generators."""
    if rA.params != rB.params:
        raise ParameterError("intertwiners need representations of the same algebra")
    if rA.dim != rB.dim:
        return IntertwinerSpace(0, [], "dimension")
    d, L = rA.dim, rA.L
    one = CycloElem.one(L)
    variables = [(i, j) for i in range(d) for j in range(d)]
    equations = _equations(rA, rB)

    if all(len(row) <= 2 for row in equations.values()):
        solutions = _solve_binomial(equations, variables, one)
        method = "binomial"
    else:
        if _modular_nullity(equations, variables, L) == 0:
            return IntertwinerSpace(0, [], "modular")
        basis = EchelonBasis()
        for row in equations.values():
            basis.insert(row)
        solutions = basis.nullspace(variables, one)
        method = "exact"
    matrices = [ScalarMatrix.from_entries(d, d, L, sol) for sol in solutions]
    return IntertwinerSpace(len(matrices), matrices, method)


@dataclass
class IsoVerdict:
    isomorphic: bool
    method: str
    shift: tuple[int, int] | None = None
    intertwiner: ScalarMatrix | None = None
    reason: str = ""
    dimension: int = 0


def oracle_verdict(rA: Representation, rB: Representation) -> IsoVerdict:
    space = intertwiner_space(rA, rB)
    if space.method == "dimension":
        return IsoVerdict(False, "dimension", reason=f"dimensions {rA.dim} != {rB.dim}")
    for T in space.basis:
        if T.is_invertible():
            return IsoVerdict(
                True, "oracle", intertwiner=T, reason="invertible intertwiner",
                dimension=space.dimension,
            )
    return IsoVerdict(
        False, "oracle", reason=f"intertwiner space of dimension {space.dimension}",
        dimension=space.dimension,
    )


def are_isomorphic(rA: Representation, rB: Representation) -> IsoVerdict:
    """Criteria for same-family modules built from parameters; the oracle otherwise."""
    if rA.dim != rB.dim:
        return IsoVerdict(False, "dimension", reason=f"dimensions {rA.dim} != {rB.dim}")
    same_family = (
        rA.family == rB.family
        and rA.family in ("V1", "V2", "V3")
        and rA.params == rB.params
        and not (rA.twisted or rB.twisted)
    )
    if not same_family:
        return oracle_verdict(rA, rB)
    mu, lam = ParamTuple(rA.family, rA.mu), ParamTuple(rB.family, rB.mu)
    shift = criteria(mu, lam, rA.params)
    if shift is None:
        return IsoVerdict(False, "criteria", reason="no shift satisfies the criteria")
    return IsoVerdict(True, "criteria", shift=shift, reason=f"shift {shift}")


# Cross-validation ------------------------------------------------------------------------------


def root_grid(
    family: str, p: AlgebraParams, exponents: Sequence[int] | None = None, field_order: int = 0
) -> tuple[AlgebraParams, list[ParamTuple]]:
    """All tuples of roots zeta_L^e, e in ``exponents``, over L = 2l by default."""
    size = {"V1": 4, "V2": 3, "V3": 2}[family]
    if exponents is None:
        exponents = {"V1": (0, 1), "V2": (0, 1, 2), "V3": (0, 1, 2, 3)}[family]
    L = lcm(p.field_order, field_order or 2 * p.l)
    q = p.with_field(L)
    grid = [
        ParamTuple(family, tuple(embed(RootExp(L, e)) for e in exps))
        for exps in product(exponents, repeat=size)
    ]
    return q, grid


def _partition(n: int, related) -> list[list[int]]:
    classes: list[list[int]] = []
    for i in range(n):
        for cls in classes:
            if related(cls[0], i):
                cls.append(i)
                break
        else:
            classes.append([i])
    return classes


@dataclass
class CrossValidation:
    family: str
    pairs: int = 0
    agreements: int = 0
    disagreements: list[tuple[int, int]] = field(default_factory=list)
    schur_violations: list[tuple[int, int]] = field(default_factory=list)
    cross_family_pairs: int = 0
    cross_family_isomorphic: list[str] = field(default_factory=list)
    partition: list[list[int]] = field(default_factory=list)
    criteria_partition: list[list[int]] = field(default_factory=list)
    equivalence: bool = True

    @property
    def ok(self) -> bool:
        return (
            not self.disagreements
            and not self.schur_violations
            and not self.cross_family_isomorphic
            and self.equivalence
            and self.partition == self.criteria_partition
        )


def cross_validate(p: AlgebraParams, grid: Sequence[ParamTuple]) -> CrossValidation:
    """Criteria verdict against the oracle on every ordered pair of the grid."""
    if not grid:
        raise ParameterError("cross-validation needs a non-empty grid")
    family = grid[0].family
    reps = [build(p, mu) for mu in grid]
    n = len(reps)
    report = CrossValidation(family)
    oracle = [[False] * n for _ in range(n)]
    by_criteria = [[False] * n for _ in range(n)]

    for i, j in product(range(n), repeat=2):
        space = intertwiner_space(reps[i], reps[j])
        invertible = [T for T in space.basis if T.is_invertible()]
        if space.dimension > 1 or (space.dimension == 1 and not invertible):
            report.schur_violations.append((i, j))
        oracle[i][j] = bool(invertible)
        by_criteria[i][j] = criteria(grid[i], grid[j], p) is not None
        report.pairs += 1
        if oracle[i][j] == by_criteria[i][j]:
            report.agreements += 1
        else:
            report.disagreements.append((i, j))
            logger.warning(f"Point {p.label}: criteria and oracle disagree on pair {i},{j}")

    report.equivalence = all(oracle[i][i] for i in range(n)) and all(
        oracle[i][j] == oracle[j][i]
        and all(oracle[i][k] for k in range(n) if oracle[i][j] and oracle[j][k])
        for i, j in product(range(n), repeat=2)
    )
    report.partition = _partition(n, lambda i, j: oracle[i][j])
    report.criteria_partition = _partition(n, lambda i, j: by_criteria[i][j])

    one = CycloElem.one(p.field_order)
    for other in ("V1", "V2", "V3"):
        if other == family:
            continue
        rep = build(p, ParamTuple(other, (one,) * {"V1": 4, "V2": 3, "V3": 2}[other]))
        report.cross_family_pairs += 1
        if oracle_verdict(reps[0], rep).isomorphic:
            report.cross_family_isomorphic.append(other)
    return report
