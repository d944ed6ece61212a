"""PI degree of M2(alpha, beta) and of its torsion factor algebras.

The generic value comes from the Smith normal form of the skew-symmetric
integer matrix H with q_ij = g^H_ij; a closed form in the orders
t1 = ord(alpha beta), t2 = ord(alpha / beta) is evaluated independently and
the two must agree.
"""

from dataclasses import dataclass
from itertools import combinations
from math import gcd

from sympy.polys.domains import ZZ
from sympy.polys.matrices import DomainMatrix
from sympy.polys.matrices.normalforms import invariant_factors

from app.errors import HypothesisError, InvariantViolation, ParameterError
from app.logger import logger
from app.ncalgebra import AlgebraParams
from app.scalars import root_order

FACTOR_FAMILIES = ("X12-torsion", "X21-torsion", "D-torsion")


@dataclass(frozen=True)
class IntMatrix:
    rows: tuple[tuple[int, ...], ...]

    @classmethod
    def of(cls, rows) -> "IntMatrix":
        return cls(tuple(tuple(int(v) for v in row) for row in rows))

    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.rows[0]) if self.rows else 0

    @property
    def is_skew_symmetric(self) -> bool:
        r, c = self.shape
        return r == c and all(
            self.rows[i][j] == -self.rows[j][i] for i in range(r) for j in range(r)
        )

    def to_domain(self) -> DomainMatrix:
        return DomainMatrix([[ZZ(v) for v in row] for row in self.rows], self.shape, ZZ)

    def minor(self, rows: tuple[int, ...], cols: tuple[int, ...]) -> int:
        sub = [[ZZ(self.rows[i][j]) for j in cols] for i in rows]
        return int(DomainMatrix(sub, (len(rows), len(cols)), ZZ).det())

    def det(self) -> int:
        r, c = self.shape
        if r != c:
            raise ParameterError(f"determinant of a non-square {r}x{c} matrix")
        return int(self.to_domain().det())

    def tolist(self) -> list[list[int]]:
        return [list(row) for row in self.rows]


@dataclass(frozen=True)
class SNFResult:
    factors: tuple[int, ...]

    @property
    def rank(self) -> int:
        return len(self.factors)


@dataclass(frozen=True)
class PiDegreeResult:
    regime: str
    value: int
    closed: int
    snf: int | None = None
    special: int | None = None
    invariant_factors: tuple[int, ...] = ()


def determinantal_divisors(M: IntMatrix) -> list[int]:
    """gcd of all k x k minors for k = 1.. until it vanishes."""
    r, c = M.shape
    divisors = []
    for k in range(1, min(r, c) + 1):
        g = 0
        for rows in combinations(range(r), k):
            for cols in combinations(range(c), k):
                g = gcd(g, M.minor(rows, cols))
        if g == 0:
            break
        divisors.append(g)
    return divisors


def smith_normal_form(M: IntMatrix) -> SNFResult:
    """Nonzero invariant factors d1 | d2 | ... of M.

    Checked against the determinantal divisors: d1 ... dk = gcd of the k x k minors.
    """
    raw = invariant_factors(M.to_domain())
    factors = tuple(sorted(abs(int(f)) for f in raw if int(f) != 0))

    expected, previous = [], 1
    for divisor in determinantal_divisors(M):
        expected.append(divisor // previous)
        previous = divisor
    if list(factors) != expected:
        raise InvariantViolation(
            f"Smith normal form {factors} disagrees with determinantal divisors {expected}"
        )
    if any(b % a for a, b in zip(factors, factors[1:])):
        raise InvariantViolation(f"invariant factors {factors} do not form a divisibility chain")
    return SNFResult(factors)


def build_H(p: AlgebraParams) -> IntMatrix:
    """Skew-symmetric integer matrix of the quantum affine space behind M2(alpha, beta)."""
    if p.ab_is_one:
        raise HypothesisError(f"build_H needs alpha*beta != 1; {p.label} has alpha*beta = 1")
    A, B = p.s1 * p.k1, p.s2 * p.k2
    return IntMatrix.of(
        [
            [0, -A, -B, 0],
            [A, 0, A - B, -B],
            [B, -A + B, 0, -A],
            [0, B, A, 0],
        ]
    )


def factor_matrix(p: AlgebraParams, family: str) -> IntMatrix:
    """Integer matrix of the quantum affine space a torsion factor algebra reduces to."""
    A, B = p.s1 * p.k1, p.s2 * p.k2
    if family == "X12-torsion":
        return IntMatrix.of([[0, -B, 0], [B, 0, -A], [0, A, 0]])
    if family == "X21-torsion":
        return IntMatrix.of([[0, -A, 0], [A, 0, -B], [0, B, 0]])
    if family == "D-torsion":
        return IntMatrix.of(
            [
                [0, -A, -B, -A - B],
                [A, 0, A - B, -B],
                [B, B - A, 0, -A],
                [A + B, B, A, 0],
            ]
        )
    raise ParameterError(f"unknown torsion family {family!r}; use one of {FACTOR_FAMILIES}")


def _pairs_pi_degree(snf: SNFResult, l: int) -> int:  # noqa: E741
    """prod over factor pairs (h, h) of l / gcd(h, l)."""
    result = 1
    for h in snf.factors[::2]:
        result *= l // gcd(h, l)
    return result


def pi_degree_special(p: AlgebraParams) -> int:
    """ord(alpha), valid when alpha*beta = 1 or alpha = beta."""
    if not (p.ab_is_one or p.alpha_eq_beta):
        raise HypothesisError(
            f"pi_degree_special needs alpha*beta = 1 or alpha = beta; {p.label} is generic"
        )
    return root_order(p.alpha_root)


def pi_degree_closed(p: AlgebraParams) -> int:
    t = p.t1 * p.t2
    return t if t % p.n == 0 else 2 * t


def pi_degree_snf(p: AlgebraParams) -> int:
    if p.ab_is_one or p.alpha_eq_beta:
        return pi_degree_special(p)
    return _snf_details(p)[0]


def _snf_details(p: AlgebraParams) -> tuple[int, SNFResult]:
    H = build_H(p)
    if not H.is_skew_symmetric:
        raise InvariantViolation(f"Point {p.label}: H is not skew-symmetric")
    snf = smith_normal_form(H)
    if snf.rank != 4 or snf.factors[0] != snf.factors[1] or snf.factors[2] != snf.factors[3]:
        raise InvariantViolation(f"Point {p.label}: invariant factors {snf.factors} not paired")
    h1, h2 = snf.factors[0], snf.factors[2]
    if gcd(h1, p.l) != 1:
        raise InvariantViolation(f"Point {p.label}: gcd(h1, l) = gcd({h1}, {p.l}) != 1")
    A, B = p.s1 * p.k1, p.s2 * p.k2
    if h1 * h2 != abs(A * A - B * B):
        raise InvariantViolation(f"Point {p.label}: h1*h2 = {h1 * h2} != |{A}^2 - {B}^2|")
    return _pairs_pi_degree(snf, p.l), snf


def pi_degree(p: AlgebraParams) -> PiDegreeResult:
    """PI degree with the regime it was computed in; closed form always cross-checked."""
    closed = pi_degree_closed(p)
    if p.ab_is_one or p.alpha_eq_beta:
        special = pi_degree_special(p)
        if special != closed:
            raise InvariantViolation(
                f"Point {p.label}: special value {special} != closed form {closed}"
            )
        return PiDegreeResult(p.regime, special, closed, special=special)

    snf_value, snf = _snf_details(p)
    if snf_value != closed:
        raise InvariantViolation(f"Point {p.label}: snf {snf_value} != closed form {closed}")
    logger.debug(f"Point {p.label}: pideg {snf_value} from invariant factors {snf.factors}")
    return PiDegreeResult(p.regime, snf_value, closed, snf=snf_value, invariant_factors=snf.factors)


def factor_pi_degree(p: AlgebraParams, family: str) -> int:
    M = factor_matrix(p, family)
    snf = smith_normal_form(M)
    if snf.rank != 2:
        raise InvariantViolation(f"Point {p.label}: {family} matrix has rank {snf.rank}, not 2")
    h1 = snf.factors[0]
    if gcd(h1, p.l) != 1:
        raise InvariantViolation(f"Point {p.label}: {family} has gcd(h1, l) = gcd({h1}, {p.l})")
    return _pairs_pi_degree(snf, p.l)


@dataclass(frozen=True)
class MenuEntry:
    dimension: int
    condition: str


def menu_entries(p: AlgebraParams, family: str) -> list[MenuEntry]:
    """Possible dimensions of simple modules killed by X12, X21 or D, with when they occur."""
    l, ord_a, ord_b = factor_pi_degree(p, family), p.m, p.n
    if family == "X12-torsion":
        return [
            MenuEntry(l, "X11, X21, X22 invertible"),
            MenuEntry(ord_b, "X11, X21 invertible, X22 zero"),
            MenuEntry(ord_a, "X21, X22 invertible, X11 zero"),
            MenuEntry(1, "otherwise"),
        ]
    if family == "X21-torsion":
        return [
            MenuEntry(l, "X11, X12, X22 invertible"),
            MenuEntry(ord_a, "X11, X12 invertible, X22 zero"),
            MenuEntry(ord_b, "X12, X22 invertible, X11 zero"),
            MenuEntry(1, "otherwise"),
        ]
    return [
        MenuEntry(l, "X12, X21 invertible"),
        MenuEntry(ord_b, "X12 zero, X11, X21 invertible; or X21 zero, X12, X22 invertible"),
        MenuEntry(ord_a, "X12 zero, X21, X22 invertible; or X21 zero, X11, X12 invertible"),
        MenuEntry(1, "otherwise"),
    ]


def dimension_menu(p: AlgebraParams, family: str) -> list[int]:
    """Distinct possible dimensions, largest first."""
    return sorted({e.dimension for e in menu_entries(p, family)}, reverse=True)


def maximal_dimension_branch(p: AlgebraParams) -> str:
    """Which statement on maximal-dimensional simples applies: l against t1*t2."""
    t = p.t1 * p.t2
    if t == p.l:
        return "boundary"
    return "proper-divisor" if t % p.l == 0 else "non-divisor"
