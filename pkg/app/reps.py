"""Matrix representations of M2(alpha, beta): the three torsionfree simple families.

Right-module convention: basis vectors are rows, e(a,b) * X is row idx(a,b)
of the matrix of X, and the matrix of a product XY is A_X @ A_Y. The basis
index is idx(a,b) = a * (second range) + b.
"""

import json
from collections.abc import Callable, Iterable, Mapping
from dataclasses import dataclass, field, replace
from math import lcm

from app.errors import ParameterError, ReductionError
from app.linalg import span_closure
from app.logger import logger
from app.ncalgebra import GENERATOR_NAMES, AlgebraParams
from app.scalars import CycloElem, ScalarLiteral, ScalarMatrix, embed, prime_reduction

FAMILY_SIZES = {"V1": 4, "V2": 3, "V3": 2}


@dataclass(frozen=True)
class ParamTuple:
    family: str
    mu: tuple[CycloElem, ...]

    def __post_init__(self) -> None:
        if self.family not in FAMILY_SIZES:
            raise ParameterError(f"unknown family {self.family!r}; use V1, V2 or V3")
        expected = FAMILY_SIZES[self.family]
        if len(self.mu) != expected:
            raise ParameterError(
                f"{self.family} needs {expected} mu values, got {len(self.mu)}"
            )
        for i, value in enumerate(self.mu, start=1):
            if not value:
                raise ParameterError(f"mu{i} must be nonzero")

    @classmethod
    def from_literals(
        cls, family: str, literals: Iterable[ScalarLiteral], L: int
    ) -> "ParamTuple":
        return cls(family, tuple(lit.to_elem(L) for lit in literals))


def session_params(p: AlgebraParams, *literal_groups: Iterable[ScalarLiteral]) -> AlgebraParams:
    """p over the smallest field holding alpha, beta and every literal given."""
    L = p.l
    for group in literal_groups:
        for lit in group:
            L = lcm(L, lit.order)
    return p.with_field(lcm(L, p.field_order))


@dataclass(frozen=True, eq=False)
class Representation:
    family: str
    params: AlgebraParams
    mu: tuple[CycloElem, ...]
    matrices: Mapping[str, ScalarMatrix]
    ranges: tuple[int, int] | None = None
    twisted: bool = False
    _products: dict = field(default_factory=dict, repr=False)

    @property
    def dim(self) -> int:
        return self.matrices["X11"].rows

    @property
    def L(self) -> int:
        return self.params.field_order

    def index(self, a: int, b: int) -> int:
        return a * self.ranges[1] + b

    def label(self, i: int) -> str:
        if self.ranges is None:
            return f"e{i}"
        return f"e({i // self.ranges[1]},{i % self.ranges[1]})"

    def word(self, *names: str) -> ScalarMatrix:
        """Matrix of a product of generators (and D)."""
        if names not in self._products:
            result = ScalarMatrix.identity(self.dim, self.L)
            for name in names:
                result = result @ self.matrix(name)
            self._products[names] = result
        return self._products[names]

    def matrix(self, name: str) -> ScalarMatrix:
        if name == "D":
            if ("D",) not in self._products:
                p = self.params
                self._products[("D",)] = self.word("X11", "X22") - self.word(
                    "X12", "X21"
                ).scale(p.alpha_inv)
            return self._products[("D",)]
        return self.matrices[name]


def root_power(p: AlgebraParams, alpha_exp: int = 0, beta_exp: int = 0) -> CycloElem:
    return embed(p.alpha_root**alpha_exp * p.beta_root**beta_exp)


def ab_power(p: AlgebraParams, k: int) -> CycloElem:
    """(alpha beta)^k."""
    return root_power(p, k, k)


def ainv_b_power(p: AlgebraParams, k: int) -> CycloElem:
    """(alpha^-1 beta)^k."""
    return root_power(p, -k, k)


def _assemble(
    family: str,
    p: AlgebraParams,
    mu: ParamTuple,
    ranges: tuple[int, int],
    actions: dict[str, Callable[[int, int], tuple[tuple[int, int], CycloElem] | None]],
) -> Representation:
    r1, r2 = ranges
    d = r1 * r2
    matrices = {}
    for name in GENERATOR_NAMES:
        entries = {}
        for a in range(r1):
            for b in range(r2):
                image = actions[name](a, b)
                if image is not None:
                    (ta, tb), coeff = image
                    entries[(a * r2 + b, ta * r2 + tb)] = coeff
        matrices[name] = ScalarMatrix.from_entries(d, d, p.field_order, entries)
    logger.debug(f"Point {p.label}: built {family} of dimension {d}")
    return Representation(family, p, mu.mu, matrices, ranges)


def _check_mu(family: str, p: AlgebraParams, mu: ParamTuple) -> None:
    if mu.family != family:
        raise ParameterError(f"expected a {family} parameter tuple, got {mu.family}")
    for value in mu.mu:
        if value.L != p.field_order:
            raise ParameterError(
                f"mu lives in Q(zeta_{value.L}) but the algebra uses L={p.field_order}"
            )


def build_V1(p: AlgebraParams, mu: ParamTuple) -> Representation:
    """X11-torsionfree family, dimension l1*l2."""
    if p.ab_is_one:
        raise ParameterError(f"V1 needs alpha*beta != 1; {p.label} has alpha*beta = 1")
    _check_mu("V1", p, mu)
    mu1, mu2, mu3, mu4 = mu.mu
    l1, l2 = p.l1, p.l2
    beta = p.beta

    def x11(a, b):
        return ((a + 1) % l1, b), mu1 * beta**b

    def x12(a, b):
        if b != 0:
            return (a, b - 1), mu3 / mu2 * ainv_b_power(p, b) * ab_power(p, -a)
        return (a, l2 - 1), mu3 / mu2 * root_power(p, 0, a * l2) * ab_power(p, -a)

    def x21(a, b):
        if b != l2 - 1:
            return (a, b + 1), mu2
        return (a, 0), mu2 * root_power(p, 0, -a * l2)

    def x22(a, b):
        coeff = root_power(p, -b) / mu1 * (mu4 + beta * ab_power(p, -a) * mu3)
        return ((a - 1) % l1, b), coeff

    return _assemble("V1", p, mu, (l1, l2), {"X11": x11, "X12": x12, "X21": x21, "X22": x22})


def build_V2(p: AlgebraParams, mu: ParamTuple) -> Representation:
    """X11-torsion, X22-torsionfree family, dimension l1*l2."""
    if p.ab_is_one:
        raise ParameterError(f"V2 needs alpha*beta != 1; {p.label} has alpha*beta = 1")
    _check_mu("V2", p, mu)
    mu1, mu2, mu3 = mu.mu
    l1, l2 = p.l1, p.l2

    def x11(a, b):
        if a == 0:
            return None
        coeff = mu3 / mu1 * p.alpha_inv * ainv_b_power(p, b) * (ab_power(p, a) - 1)
        return (a - 1, b), coeff

    def x12(a, b):
        return (a, (b - 1) % l2), mu3 / mu2 * root_power(p, 0, a) * ainv_b_power(p, b)

    def x21(a, b):
        return (a, (b + 1) % l2), mu2 * root_power(p, a)

    def x22(a, b):
        if a != l1 - 1:
            return (a + 1, b), mu1
        return (0, b), mu1 * root_power(p, -b * l1)

    return _assemble("V2", p, mu, (l1, l2), {"X11": x11, "X12": x12, "X21": x21, "X22": x22})


def build_V3(p: AlgebraParams, mu: ParamTuple) -> Representation:
    """X11- and X22-torsion family, dimension t1*l2."""
    if p.ab_is_one:
        raise ParameterError(f"V3 needs alpha*beta != 1; {p.label} has alpha*beta = 1")
    _check_mu("V3", p, mu)
    mu1, mu2 = mu.mu
    t1, l2 = p.t1, p.l2

    def x11(a, b):
        if a == 0:
            return None
        return (a - 1, b), mu2 * p.alpha_inv * ainv_b_power(p, b) * (ab_power(p, a) - 1)

    def x12(a, b):
        return (a, (b - 1) % l2), mu2 / mu1 * root_power(p, 0, a) * ainv_b_power(p, b)

    def x21(a, b):
        return (a, (b + 1) % l2), mu1 * root_power(p, a)

    def x22(a, b):
        if a == t1 - 1:
            return None
        return (a + 1, b), CycloElem.one(p.field_order)

    return _assemble("V3", p, mu, (t1, l2), {"X11": x11, "X12": x12, "X21": x21, "X22": x22})


BUILDERS = {"V1": build_V1, "V2": build_V2, "V3": build_V3}


def build(p: AlgebraParams, mu: ParamTuple) -> Representation:
    return BUILDERS[mu.family](p, mu)


def representation_from_matrices(
    p: AlgebraParams, matrices: Mapping[str, ScalarMatrix], family: str = "custom"
) -> Representation:
    missing = [name for name in GENERATOR_NAMES if name not in matrices]
    if missing:
        raise ParameterError(f"missing matrices for {', '.join(missing)}")
    d = matrices["X11"].rows
    for name in GENERATOR_NAMES:
        M = matrices[name]
        if (M.rows, M.cols) != (d, d):
            raise ParameterError(f"{name} is {M.rows}x{M.cols}, expected {d}x{d}")
        if M.L != p.field_order:
            raise ParameterError(f"{name} lives over L={M.L}, the algebra over {p.field_order}")
    return Representation(family, p, (), {name: matrices[name] for name in GENERATOR_NAMES})


def direct_sum(first: Representation, second: Representation) -> Representation:
    if first.params != second.params:
        raise ParameterError("direct sum needs representations of the same algebra")
    matrices = {
        name: first.matrices[name].direct_sum(second.matrices[name]) for name in GENERATOR_NAMES
    }
    return Representation(f"{first.family}+{second.family}", first.params, (), matrices)


def perturb(
    r: Representation, name: str = "X11", i: int = 0, j: int = 0, delta=1
) -> Representation:
    """Copy of r with ``delta`` added to one entry of one generator matrix."""
    M = r.matrices[name]
    matrices = dict(r.matrices)
    matrices[name] = M.with_entry(i, j, M.get(i, j) + delta)
    return replace(r, family=f"{r.family}~", matrices=matrices, _products={})


def swap_transpose(r: Representation) -> Representation:
    """Pull back along X12 <-> X21 (X11, X22 fixed): a module over M2(beta, alpha)."""
    matrices = {
        "X11": r.matrices["X11"],
        "X12": r.matrices["X21"],
        "X21": r.matrices["X12"],
        "X22": r.matrices["X22"],
    }
    return replace(
        r, params=r.params.swapped(), matrices=matrices, twisted=not r.twisted, _products={}
    )


# Checks ------------------------------------------------------------------------------------------


def relation_residues(r: Representation) -> dict[str, ScalarMatrix]:
    """Each defining relation (and the D identities) as a matrix that must vanish."""
    p = r.params
    w = r.word
    D = r.matrix("D")
    return {
        "X12*X11 = alpha*X11*X12": w("X12", "X11") - w("X11", "X12").scale(p.alpha),
        "X21*X11 = beta*X11*X21": w("X21", "X11") - w("X11", "X21").scale(p.beta),
        "X21*X12 = beta*alpha^-1*X12*X21": (
            w("X21", "X12") - w("X12", "X21").scale(p.beta * p.alpha_inv)
        ),
        "X22*X21 = alpha*X21*X22": w("X22", "X21") - w("X21", "X22").scale(p.alpha),
        "X22*X12 = beta*X12*X22": w("X22", "X12") - w("X12", "X22").scale(p.beta),
        "X22*X11 - X11*X22 = (beta - alpha^-1)*X12*X21": (
            w("X22", "X11") - w("X11", "X22") - w("X12", "X21").scale(p.branch_scalar)
        ),
        "D = X22*X11 - beta*X12*X21": D - (w("X22", "X11") - w("X12", "X21").scale(p.beta)),
        "D*X11 = X11*D": D @ r.matrices["X11"] - r.matrices["X11"] @ D,
        "D*X22 = X22*D": D @ r.matrices["X22"] - r.matrices["X22"] @ D,
        "D*X12 = alpha^-1*beta*X12*D": (
            D @ r.matrices["X12"] - (r.matrices["X12"] @ D).scale(p.alpha_inv * p.beta)
        ),
        "D*X21 = alpha*beta^-1*X21*D": (
            D @ r.matrices["X21"] - (r.matrices["X21"] @ D).scale(p.alpha / p.beta)
        ),
    }


def verify_relations(r: Representation) -> list[str]:
    """Names of the violated relations; empty when r is a module."""
    return [name for name, residue in relation_residues(r).items() if not residue.is_zero()]


def expected_eigenvalues(r: Representation, a: int, b: int) -> dict[tuple[str, ...], CycloElem]:
    p, mu, l2 = r.params, r.mu, r.params.l2
    if r.family == "V1":
        mu1, mu2, mu3, mu4 = mu
        return {
            ("X12", "X21"): mu3 * ainv_b_power(p, b) * ab_power(p, -a),
            ("D",): mu4 * ainv_b_power(p, b),
            ("X21",) * l2: mu2**l2 * root_power(p, 0, -a * l2),
        }
    if r.family == "V2":
        mu1, mu2, mu3 = mu
        return {
            ("X12", "X21"): mu3 * ab_power(p, a) * ainv_b_power(p, b),
            ("D",): -mu3 * p.alpha_inv * ainv_b_power(p, b),
            ("X21",) * l2: mu2**l2 * root_power(p, a * l2),
        }
    if r.family == "V3":
        mu1, mu2 = mu
        return {
            ("X12", "X21"): mu2 * ab_power(p, a) * ainv_b_power(p, b),
            ("D",): -mu2 * p.alpha_inv * ainv_b_power(p, b),
            ("X21",) * l2: mu1**l2 * root_power(p, a * l2),
        }
    raise ParameterError(f"no eigenvalue formulas for family {r.family!r}")


def eigen_mismatches(r: Representation) -> list[str]:
    """Basis vectors that are not eigenvectors with the predicted eigenvalues."""
    mismatches = []
    r1, r2 = r.ranges
    for a in range(r1):
        for b in range(r2):
            i = r.index(a, b)
            for names, value in expected_eigenvalues(r, a, b).items():
                M = r.matrix("D") if names == ("D",) else r.word(*names)
                if M.row(i) != {i: value}:
                    op = f"X21^{len(names)}" if len(names) > 2 else "*".join(names)
                    mismatches.append(f"{op} at {r.label(i)}")
    return mismatches


def classify_operator(M: ScalarMatrix) -> str:
    if M.is_zero():
        return "zero"
    return "invertible" if M.is_invertible() else "neither"


def annihilator_profile(r: Representation) -> dict[str, str]:
    """zero / invertible / neither for X11^l1, X22^l1, X12, X21 and D."""
    l1 = r.params.l1
    return {
        "X11^l1": classify_operator(r.matrices["X11"].power(l1)),
        "X22^l1": classify_operator(r.matrices["X22"].power(l1)),
        "X12": classify_operator(r.matrices["X12"]),
        "X21": classify_operator(r.matrices["X21"]),
        "D": classify_operator(r.matrix("D")),
    }


def burnside_dimension(r: Representation) -> int:
    """Dimension of the unital algebra generated by the four action matrices.

    Full rank modulo a prime p = 1 (mod L) already proves dimension d^2;
    anything short of that is settled over Q(zeta_L).
    """
    d = r.dim
    gens = [r.matrices[name] for name in GENERATOR_NAMES]
    try:
        red = prime_reduction(r.L)
        one = red.field(1)
        modular = span_closure(
            {i: {i: one} for i in range(d)}, [M.map_entries(red) for M in gens], ceiling=d * d
        )
        if modular == d * d:
            return modular
        logger.debug(f"Point {r.params.label}: modular span {modular} < {d * d}, going exact")
    except ReductionError as exc:
        logger.debug(f"Point {r.params.label}: {exc}, going exact")
    identity = ScalarMatrix.identity(d, r.L)
    return span_closure(identity.sparse_rows(), [M.sparse_rows() for M in gens], ceiling=d * d)


def is_absolutely_simple(r: Representation) -> bool:
    return burnside_dimension(r) == r.dim**2


# Dump ---------------------------------------------------------------------------------------------


def matrix_dump(r: Representation) -> dict:
    """Exact matrices: each nonzero entry as [i, j, rational coordinates]."""
    p = r.params
    return {
        "field_order": r.L,
        "family": r.family,
        "params": {"m": p.m, "n": p.n, "k1": p.k1, "k2": p.k2},
        "mu": [str(v) for v in r.mu],
        "dimension": r.dim,
        "matrices": {
            name: [[i, j, value.coordinates()] for (i, j), value in r.matrices[name].entries()]
            for name in GENERATOR_NAMES
        },
    }


def write_matrix_dump(r: Representation, path: str) -> None:
    with open(path, "w") as handle:
        handle.write(json.dumps(matrix_dump(r), indent=2) + "\n")
