"""PBW normal-form arithmetic in the two-parameter quantum matrix algebra M2(alpha, beta).

Generators are X11 < X12 < X21 < X22 (PBW order). Products are normalized by
rewriting the leftmost out-of-order pair of adjacent syllables; five of the
six defining relations only rescale, the sixth

    X22 X11 -> X11 X22 + (beta - alpha^-1) X12 X21

is the one branching rule.
"""

from collections.abc import Iterable, Mapping
from dataclasses import dataclass, replace
from functools import cached_property, lru_cache
from itertools import product
from math import gcd
from types import MappingProxyType
from typing import NamedTuple

from app.errors import FieldMismatchError, HypothesisError, InvariantViolation, ParameterError
from app.linalg import EchelonBasis
from app.logger import logger
from app.scalars import CycloElem, RootExp, embed, root_order
from app.settings import NORMAL_FORM_CACHE_SIZE

X11, X12, X21, X22 = range(4)
GENERATOR_NAMES = ("X11", "X12", "X21", "X22")


@dataclass(frozen=True)
class AlgebraParams:
    """Parameters (m, n, k1, k2): alpha = zeta_m^k1, beta = zeta_n^k2.

    Everything scalar lives in Q(zeta_L) with L = ``field_order``, a multiple
    of l = lcm(m, n) (defaults to l).
    """

    m: int
    n: int
    k1: int = 1
    k2: int = 1
    field_order: int = 0

    def __post_init__(self) -> None:
        if self.m < 1 or self.n < 1:
            raise ParameterError(f"m and n must be positive, got m={self.m}, n={self.n}")
        if gcd(self.k1, self.m) != 1:
            raise ParameterError(f"k1 must be coprime to m (gcd(k1, m) = 1), got k1={self.k1}")
        if gcd(self.k2, self.n) != 1:
            raise ParameterError(f"k2 must be coprime to n (gcd(k2, n) = 1), got k2={self.k2}")
        if self.field_order == 0:
            object.__setattr__(self, "field_order", self.l)
        elif self.field_order % self.l:
            raise ParameterError(
                f"field order {self.field_order} is not a multiple of l = lcm(m, n) = {self.l}"
            )

    @property
    def l(self) -> int:  # noqa: E743
        return self.m * self.n // gcd(self.m, self.n)

    @property
    def s1(self) -> int:
        return self.n // gcd(self.m, self.n)

    @property
    def s2(self) -> int:
        return self.m // gcd(self.m, self.n)

    @property
    def label(self) -> str:
        return f"({self.m},{self.n},{self.k1},{self.k2})"

    def g_power(self, e: int) -> RootExp:
        """g^e for the generator g = zeta_l, written over the field order."""
        return RootExp(self.field_order, e * (self.field_order // self.l))

    @cached_property
    def alpha_root(self) -> RootExp:
        return self.g_power(self.s1 * self.k1)

    @cached_property
    def beta_root(self) -> RootExp:
        return self.g_power(self.s2 * self.k2)

    @cached_property
    def alpha(self) -> CycloElem:
        return embed(self.alpha_root)

    @cached_property
    def beta(self) -> CycloElem:
        return embed(self.beta_root)

    @cached_property
    def alpha_inv(self) -> CycloElem:
        return embed(self.alpha_root.inverse())

    @cached_property
    def branch_scalar(self) -> CycloElem:
        """beta - alpha^-1, the X12 X21 coefficient of X22 X11 - X11 X22."""
        return self.beta - self.alpha_inv

    @property
    def t1(self) -> int:
        return root_order(self.alpha_root * self.beta_root)

    @property
    def t2(self) -> int:
        return root_order(self.alpha_root / self.beta_root)

    @property
    def l1(self) -> int:
        return self.t1 if (self.t1 * self.t2) % self.n == 0 else 2 * self.t1

    @property
    def l2(self) -> int:
        return self.t2

    @property
    def ab_is_one(self) -> bool:
        return (self.alpha_root * self.beta_root).is_one()

    @property
    def alpha_eq_beta(self) -> bool:
        return self.alpha_root == self.beta_root

    @property
    def alpha_eq_beta_inv(self) -> bool:
        return self.ab_is_one

    @property
    def regime(self) -> str:
        if self.ab_is_one:
            return "alpha-beta-inverse"
        if self.alpha_eq_beta:
            return "alpha-equals-beta"
        return "generic"

    def with_field(self, field_order: int) -> "AlgebraParams":
        return replace(self, field_order=field_order)

    def swapped(self) -> "AlgebraParams":
        """Parameters of M2(beta, alpha)."""
        return AlgebraParams(self.n, self.m, self.k2, self.k1, self.field_order)


class PBWMonomial(NamedTuple):
    """X11^a X12^b X21^c X22^d."""

    a: int = 0
    b: int = 0
    c: int = 0
    d: int = 0

    @property
    def degree(self) -> int:
        return self.a + self.b + self.c + self.d

    def __str__(self) -> str:
        parts = []
        for name, exp in zip(GENERATOR_NAMES, self):
            if exp == 1:
                parts.append(name)
            elif exp > 1:
                parts.append(f"{name}^{exp}")
        return "*".join(parts) or "1"


def _sort_key(mono: PBWMonomial) -> tuple:
    return (mono.degree, tuple(-e for e in mono))


class NCPoly:
    """Finitely supported map from PBW monomials to nonzero scalars of one field."""

    __slots__ = ("L", "_terms")

    def __init__(self, L: int, terms: Mapping[PBWMonomial, CycloElem] | None = None):
        self.L = L
        kept: dict[PBWMonomial, CycloElem] = {}
        for mono, coeff in (terms or {}).items():
            if not isinstance(coeff, CycloElem):
                coeff = CycloElem.rational(L, coeff)
            elif coeff.L != L:
                raise FieldMismatchError(f"NCPoly over L={L} got a coefficient over L={coeff.L}")
            if coeff:
                kept[PBWMonomial(*mono)] = coeff
        self._terms = kept

    @classmethod
    def constant(cls, L: int, value=1) -> "NCPoly":
        return cls(L, {PBWMonomial(): value})

    @classmethod
    def monomial(cls, L: int, mono: Iterable[int], coeff=1) -> "NCPoly":
        return cls(L, {PBWMonomial(*mono): coeff})

    @classmethod
    def generator(cls, name: str, L: int) -> "NCPoly":
        exps = [0, 0, 0, 0]
        exps[GENERATOR_NAMES.index(name)] = 1
        return cls.monomial(L, exps)

    @property
    def terms(self) -> Mapping[PBWMonomial, CycloElem]:
        return MappingProxyType(self._terms)

    def items(self) -> list[tuple[PBWMonomial, CycloElem]]:
        return sorted(self._terms.items(), key=lambda kv: _sort_key(kv[0]))

    def coefficient(self, mono: Iterable[int]) -> CycloElem:
        return self._terms.get(PBWMonomial(*mono), CycloElem.zero(self.L))

    def is_zero(self) -> bool:
        return not self._terms

    def __len__(self) -> int:
        return len(self._terms)

    @property
    def degree(self) -> int:
        return max((m.degree for m in self._terms), default=0)

    def is_homogeneous(self) -> bool:
        return len({m.degree for m in self._terms}) <= 1

    def _check(self, other: "NCPoly") -> None:
        if other.L != self.L:
            raise FieldMismatchError(f"NCPoly over L={self.L} combined with L={other.L}")

    def __add__(self, other: "NCPoly") -> "NCPoly":
        self._check(other)
        acc = dict(self._terms)
        for mono, coeff in other._terms.items():
            acc[mono] = acc[mono] + coeff if mono in acc else coeff
        return NCPoly(self.L, acc)

    def __sub__(self, other: "NCPoly") -> "NCPoly":
        return self + other.scale(-1)

    def __neg__(self) -> "NCPoly":
        return self.scale(-1)

    def scale(self, c) -> "NCPoly":
        return NCPoly(self.L, {m: v * c for m, v in self._terms.items()})

    def __eq__(self, other) -> bool:
        if not isinstance(other, NCPoly):
            return NotImplemented
        return self.L == other.L and self._terms == other._terms

    def __hash__(self) -> int:
        return hash((self.L, frozenset(self._terms.items())))

    def __str__(self) -> str:
        if not self._terms:
            return "0"
        parts = []
        for mono, coeff in self.items():
            if mono.degree == 0:
                parts.append(str(coeff))
            elif coeff == 1:
                parts.append(str(mono))
            elif coeff == -1:
                parts.append(f"-{mono}")
            elif coeff.is_rational():
                parts.append(f"{coeff}*{mono}")
            else:
                parts.append(f"({coeff})*{mono}")
        return " + ".join(parts)

    def __repr__(self) -> str:
        return f"NCPoly({self})"


# Rewriting ----------------------------------------------------------------------------------

Word = tuple[tuple[int, int], ...]


def _merge(word: Iterable[tuple[int, int]]) -> Word:
    merged: list[tuple[int, int]] = []
    for gen, exp in word:
        if exp == 0:
            continue
        if merged and merged[-1][0] == gen:
            merged[-1] = (gen, merged[-1][1] + exp)
        else:
            merged.append((gen, exp))
    return tuple(merged)


def _swap_root(p: AlgebraParams, later: int, earlier: int) -> RootExp:
    """lambda with X_later X_earlier = lambda X_earlier X_later (monomial relations)."""
    alpha, beta = p.alpha_root, p.beta_root
    table = {
        (X12, X11): alpha,
        (X21, X11): beta,
        (X21, X12): beta / alpha,
        (X22, X21): alpha,
        (X22, X12): beta,
    }
    return table[(later, earlier)]


def _accumulate(acc: dict, terms, scale: CycloElem) -> None:
    for mono, coeff in terms:
        value = coeff * scale
        acc[mono] = acc[mono] + value if mono in acc else value


@lru_cache(maxsize=NORMAL_FORM_CACHE_SIZE)
def _normal_form(word: Word, p: AlgebraParams) -> tuple[tuple[PBWMonomial, CycloElem], ...]:
    for i in range(len(word) - 1):
        (later, x), (earlier, y) = word[i], word[i + 1]
        if later > earlier:
            break
    else:
        exps = [0, 0, 0, 0]
        for gen, exp in word:
            exps[gen] += exp
        return ((PBWMonomial(*exps), CycloElem.one(p.field_order)),)

    head, tail = word[:i], word[i + 2 :]
    if (later, earlier) == (X22, X11):
        # X22^x X11^y = X22^(x-1) (X11 X22 + c X12 X21) X11^(y-1)
        left = head + ((X22, x - 1),)
        right = ((X11, y - 1),) + tail
        acc: dict[PBWMonomial, CycloElem] = {}
        one = CycloElem.one(p.field_order)
        _accumulate(acc, _normal_form(_merge(left + ((X11, 1), (X22, 1)) + right), p), one)
        _accumulate(
            acc,
            _normal_form(_merge(left + ((X12, 1), (X21, 1)) + right), p),
            p.branch_scalar,
        )
        return tuple((m, c) for m, c in acc.items() if c)

    scale = embed(_swap_root(p, later, earlier) ** (x * y))
    swapped = _normal_form(_merge(head + ((earlier, y), (later, x)) + tail), p)
    return tuple((m, c * scale) for m, c in swapped)


def _syllables(mono: PBWMonomial) -> Word:
    return tuple((gen, exp) for gen, exp in enumerate(mono) if exp)


@lru_cache(maxsize=NORMAL_FORM_CACHE_SIZE)
def _monomial_product(left: PBWMonomial, right: PBWMonomial, p: AlgebraParams):
    return _normal_form(_merge(_syllables(left) + _syllables(right)), p)


def _check_field(f: NCPoly, p: AlgebraParams) -> None:
    if f.L != p.field_order:
        raise FieldMismatchError(
            f"element over L={f.L} used with an algebra over L={p.field_order}"
        )


def multiply(f: NCPoly, g: NCPoly, p: AlgebraParams) -> NCPoly:
    """PBW normal form of f * g."""
    _check_field(f, p)
    _check_field(g, p)
    acc: dict[PBWMonomial, CycloElem] = {}
    for m1, c1 in f.terms.items():
        for m2, c2 in g.terms.items():
            _accumulate(acc, _monomial_product(m1, m2, p), c1 * c2)
    return NCPoly(p.field_order, acc)


def multiply_all(factors: Iterable[NCPoly], p: AlgebraParams) -> NCPoly:
    result = NCPoly.constant(p.field_order)
    for factor in factors:
        result = multiply(result, factor, p)
    return result


def power(f: NCPoly, k: int, p: AlgebraParams) -> NCPoly:
    return multiply_all([f] * k, p)


def generators(p: AlgebraParams) -> dict[str, NCPoly]:
    return {name: NCPoly.generator(name, p.field_order) for name in GENERATOR_NAMES}


def word(p: AlgebraParams, *syllables: tuple[str, int]) -> NCPoly:
    """Normal form of a product of generator powers, e.g. word(p, ("X22", 2), ("X11", 1))."""
    raw = _merge((GENERATOR_NAMES.index(name), exp) for name, exp in syllables)
    return NCPoly(p.field_order, dict(_normal_form(raw, p)))


# Quantum determinant and normal elements ----------------------------------------------------------


def quantum_determinant(p: AlgebraParams) -> NCPoly:
    """D = X11 X22 - alpha^-1 X12 X21."""
    return NCPoly(p.field_order, {(1, 0, 0, 1): 1, (0, 1, 1, 0): -p.alpha_inv})


def quantum_determinant_alt(p: AlgebraParams) -> NCPoly:
    """Normal form of X22 X11 - beta X12 X21; equals :func:`quantum_determinant`."""
    return word(p, ("X22", 1), ("X11", 1)) - word(p, ("X12", 1), ("X21", 1)).scale(p.beta)


def commutator(f: NCPoly, g: NCPoly, p: AlgebraParams) -> NCPoly:
    return multiply(f, g, p) - multiply(g, f, p)


def is_central(f: NCPoly, p: AlgebraParams) -> bool:
    return all(commutator(f, x, p).is_zero() for x in generators(p).values())


def normal_scalar(x: NCPoly, g: NCPoly, p: AlgebraParams) -> CycloElem | None:
    """c with x*g = c*g*x, or None when x*g is not a multiple of g*x."""
    left, right = multiply(x, g, p), multiply(g, x, p)
    if right.is_zero():
        return CycloElem.zero(p.field_order) if left.is_zero() else None
    mono, coeff = next(iter(right.terms.items()))
    c = left.coefficient(mono) / coeff
    return c if left == right.scale(c) else None


def normal_elements(p: AlgebraParams) -> dict[str, NCPoly]:
    gens = generators(p)
    return {"X12": gens["X12"], "X21": gens["X21"], "D": quantum_determinant(p)}


def is_normal_generator(x: str | NCPoly, p: AlgebraParams) -> bool:
    """x * X_g is a scalar multiple of X_g * x for each generator X_g."""
    if isinstance(x, str):
        try:
            x = normal_elements(p)[x]
        except KeyError as exc:
            raise ParameterError(f"unknown normal element {x!r}; use X12, X21 or D") from exc
    return all(normal_scalar(x, g, p) is not None for g in generators(p).values())


# Commutation identities --------------------------------------------------------------------------


def power_commutation_x22k_x11(k: int, p: AlgebraParams) -> NCPoly:
    """X11 X22^k + alpha^-1 [(alpha beta)^k - 1] X12 X21 X22^(k-1)."""
    ab = p.alpha_root * p.beta_root
    coeff = p.alpha_inv * (embed(ab**k) - 1)
    return NCPoly(p.field_order, {(1, 0, 0, k): 1, (0, 1, 1, k - 1): coeff})


def power_commutation_x22_x11k(k: int, p: AlgebraParams) -> NCPoly:
    """X11^k X22 + beta [1 - (alpha beta)^-k] X12 X21 X11^(k-1), normalized."""
    ab = p.alpha_root * p.beta_root
    coeff = p.beta * (1 - embed(ab ** (-k)))
    tail = word(p, ("X12", 1), ("X21", 1), ("X11", k - 1)).scale(coeff)
    return NCPoly.monomial(p.field_order, (k, 0, 0, 1)) + tail


def identity_failures(p: AlgebraParams, k_max: int = 12) -> list[tuple[str, int]]:
    """Exponents k <= k_max for which either X22/X11 power identity fails."""
    failures = []
    for k in range(1, k_max + 1):
        if word(p, ("X22", k), ("X11", 1)) != power_commutation_x22k_x11(k, p):
            failures.append(("X22^k*X11", k))
        if word(p, ("X22", 1), ("X11", k)) != power_commutation_x22_x11k(k, p):
            failures.append(("X22*X11^k", k))
    return failures


def det_power_expand(k: int, p: AlgebraParams) -> NCPoly:
    """Normal form of D^k."""
    if k < 1:
        raise ParameterError(f"det_power_expand needs k >= 1, got {k}")
    return power(quantum_determinant(p), k, p)


def dependency_coefficient(k: int, p: AlgebraParams) -> CycloElem:
    """(-1)^k alpha^(-k(k+1)/2) beta^(k(k-1)/2), the X12^k X21^k coefficient of D^k."""
    root = p.alpha_root ** (-(k * (k + 1) // 2)) * p.beta_root ** (k * (k - 1) // 2)
    value = embed(root)
    return value if k % 2 == 0 else -value


# Center -----------------------------------------------------------------------------------------


def _require_center_hypothesis(p: AlgebraParams) -> int:
    if p.ab_is_one or p.alpha_eq_beta:
        raise HypothesisError(
            f"center description needs alpha*beta^(+-1) != 1; {p.label} is {p.regime}"
        )
    if p.t1 != p.t2:
        raise HypothesisError(
            f"center description needs ord(alpha*beta) = ord(alpha/beta); "
            f"{p.label} has t1={p.t1}, t2={p.t2}"
        )
    return p.t1


def dependency_relation(p: AlgebraParams) -> NCPoly:
    """X11^t X22^t + c X12^t X21^t, which D^t equals when t1 = t2 = t."""
    t = _require_center_hypothesis(p)
    return NCPoly(p.field_order, {(t, 0, 0, t): 1, (0, t, t, 0): dependency_coefficient(t, p)})


def exponent_lemma_solutions(p: AlgebraParams) -> list[tuple[int, int]]:
    """All (a, b) in [0, l)^2 with alpha^a beta^b = 1 = alpha^b beta^a.

    Each solution is checked to be (kt, kt) mod l for one k.
    """
    t = _require_center_hypothesis(p)
    alpha, beta = p.alpha_root, p.beta_root
    solutions = []
    for a, b in product(range(p.l), repeat=2):
        if (alpha**a * beta**b).is_one() and (alpha**b * beta**a).is_one():
            if a != b or a % t:
                raise InvariantViolation(
                    f"Point {p.label}: solution ({a},{b}) is not of the form (kt, kt) with t={t}"
                )
            solutions.append((a, b))
    return solutions


def center_generators(p: AlgebraParams) -> list[NCPoly]:
    """X11^l, X12^l, X21^l, X22^l, X11^t X22^t, X12^t X21^t (each checked central)."""
    t = _require_center_hypothesis(p)
    l, L = p.l, p.field_order
    gens = [
        NCPoly.monomial(L, (l, 0, 0, 0)),
        NCPoly.monomial(L, (0, l, 0, 0)),
        NCPoly.monomial(L, (0, 0, l, 0)),
        NCPoly.monomial(L, (0, 0, 0, l)),
        NCPoly.monomial(L, (t, 0, 0, t)),
        NCPoly.monomial(L, (0, t, t, 0)),
    ]
    for g in gens:
        if not is_central(g, p):
            raise InvariantViolation(f"Point {p.label}: {g} is not central")
    return gens


def monomials_up_to(deg_cap: int) -> list[PBWMonomial]:
    return sorted(
        (PBWMonomial(*e) for e in product(range(deg_cap + 1), repeat=4) if sum(e) <= deg_cap),
        key=_sort_key,
    )


def _diagonal_scalar(mono: PBWMonomial, g: NCPoly, p: AlgebraParams) -> CycloElem:
    x = NCPoly.monomial(p.field_order, mono)
    left, right = multiply(g, x, p), multiply(x, g, p)
    (m_left, c_left), = left.terms.items()
    (m_right, c_right), = right.terms.items()
    if m_left != m_right:
        raise InvariantViolation(f"{g} does not act diagonally on {mono}")
    return c_left / c_right


def central_space(p: AlgebraParams, deg_cap: int) -> list[NCPoly]:
    """Basis of the central elements of total degree <= deg_cap.

    Conjugation by X12 and X21 is diagonal on PBW monomials, so only monomials
    fixed by both are kept; commutation with X11 and X22 is then an exact
    linear system over the survivors.
    """
    if deg_cap < 0:
        raise ParameterError(f"deg_cap must be non-negative, got {deg_cap}")
    gens = generators(p)
    candidates = [
        mono
        for mono in monomials_up_to(deg_cap)
        if _diagonal_scalar(mono, gens["X12"], p) == 1
        and _diagonal_scalar(mono, gens["X21"], p) == 1
    ]
    logger.debug(f"Point {p.label}: {len(candidates)} diagonal-central monomials up to {deg_cap}")

    equations: dict[tuple[str, PBWMonomial], dict[PBWMonomial, CycloElem]] = {}
    for mono in candidates:
        x = NCPoly.monomial(p.field_order, mono)
        for name in ("X11", "X22"):
            for out, coeff in commutator(gens[name], x, p).terms.items():
                equations.setdefault((name, out), {})[mono] = coeff
    basis = EchelonBasis()
    for row in equations.values():
        basis.insert(row)
    solutions = basis.nullspace(candidates, CycloElem.one(p.field_order))
    return [NCPoly(p.field_order, vec) for vec in solutions]


def products_up_to(gens: list[NCPoly], deg_cap: int, p: AlgebraParams) -> list[NCPoly]:
    """All products g_i1 ... g_ik (i1 <= ... <= ik) of total degree <= deg_cap, with 1."""
    results = [NCPoly.constant(p.field_order)]

    def extend(start: int, current: NCPoly, degree: int) -> None:
        for i in range(start, len(gens)):
            d = gens[i].degree
            if d == 0 or degree + d > deg_cap:
                continue
            nxt = multiply(current, gens[i], p)
            results.append(nxt)
            extend(i, nxt, degree + d)

    extend(0, results[0], 0)
    return results


def same_span(first: list[NCPoly], second: list[NCPoly]) -> bool:
    """Exact equality of the linear spans of two families of NCPoly."""
    a, b, both = EchelonBasis(), EchelonBasis(), EchelonBasis()
    for f in first:
        a.insert(dict(f.terms))
        both.insert(dict(f.terms))
    for f in second:
        b.insert(dict(f.terms))
        both.insert(dict(f.terms))
    return a.rank == b.rank == both.rank


def center_matches_generators(p: AlgebraParams, deg_cap: int) -> bool:
    """Degree-bounded center equals the span of bounded products of the generators."""
    return same_span(central_space(p, deg_cap), products_up_to(center_generators(p), deg_cap, p))
