"""Exact arithmetic in cyclotomic fields Q(zeta_L) and roots-of-unity bookkeeping.

Elements of Q(zeta_L) are polynomials in zeta reduced modulo the L-th
cyclotomic polynomial, with rational coefficients held as sympy ``QQ``
elements and manipulated with sympy's dense univariate routines.
"""

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property, lru_cache
from math import gcd

from sympy import GF, divisors
from sympy.ntheory import isprime, primitive_root
from sympy.polys.densearith import (
    dup_add,
    dup_exquo,
    dup_mul,
    dup_mul_ground,
    dup_neg,
    dup_rem,
    dup_sub,
)
from sympy.polys.domains import QQ, ZZ
from sympy.polys.euclidtools import dup_invert
from sympy.polys.polyerrors import NotInvertible

from app.errors import (
    FieldMismatchError,
    InvariantViolation,
    ParameterError,
    ReductionError,
    ZeroInversionError,
)
from app.linalg import rank
from app.settings import MODULAR_PRIME_FLOOR


@lru_cache(maxsize=None)
def _cyclotomic_dup(L: int) -> tuple:
    poly = [ZZ(1)] + [ZZ(0)] * (L - 1) + [ZZ(-1)]
    for d in divisors(L)[:-1]:
        poly = dup_exquo(poly, list(_cyclotomic_dup(d)), ZZ)
    return tuple(poly)


def cyclotomic_polynomial(L: int) -> tuple[int, ...]:
    """Coefficients of Phi_L, constant term first.

    Obtained by dividing x^L - 1 exactly by Phi_d for every proper divisor d of L.
    """
    if L < 1:
        raise ParameterError(f"cyclotomic order must be positive, got {L}")
    return tuple(int(c) for c in reversed(_cyclotomic_dup(L)))


@lru_cache(maxsize=None)
def _modulus(L: int) -> tuple:
    return tuple(QQ(int(c)) for c in _cyclotomic_dup(L))


def field_degree(L: int) -> int:
    """phi(L), the degree of Q(zeta_L) over Q."""
    return len(_modulus(L)) - 1


@lru_cache(maxsize=None)
def _zeta_power(L: int, e: int) -> tuple:
    monomial = [QQ(1)] + [QQ(0)] * e
    return tuple(dup_rem(monomial, list(_modulus(L)), QQ))


def _qq(value):
    if isinstance(value, str):
        value = Fraction(value)
    if isinstance(value, Fraction):
        return QQ(value.numerator, value.denominator)
    if isinstance(value, int):
        return QQ(value)
    return QQ.convert(value)


def _format_rational(q) -> str:
    num, den = int(q.numerator), int(q.denominator)
    return str(num) if den == 1 else f"{num}/{den}"


@dataclass(frozen=True)
class RootExp:
    """The root of unity zeta_L^e, kept as its exponent."""

    L: int
    e: int = 0

    def __post_init__(self) -> None:
        if self.L < 1:
            raise ParameterError(f"root of unity order must be positive, got {self.L}")
        object.__setattr__(self, "e", self.e % self.L)

    def _check(self, other: "RootExp") -> None:
        if other.L != self.L:
            raise FieldMismatchError(f"roots of unity over L={self.L} and L={other.L}")

    def __mul__(self, other: "RootExp") -> "RootExp":
        if not isinstance(other, RootExp):
            return NotImplemented
        self._check(other)
        return RootExp(self.L, self.e + other.e)

    def __truediv__(self, other: "RootExp") -> "RootExp":
        if not isinstance(other, RootExp):
            return NotImplemented
        self._check(other)
        return RootExp(self.L, self.e - other.e)

    def __pow__(self, k: int) -> "RootExp":
        return RootExp(self.L, self.e * k)

    def inverse(self) -> "RootExp":
        return RootExp(self.L, -self.e)

    @property
    def order(self) -> int:
        return root_order(self)

    def is_one(self) -> bool:
        return self.e == 0

    def lift(self, L: int) -> "RootExp":
        """Same root written over a multiple L of the current order."""
        if L % self.L:
            raise FieldMismatchError(f"cannot lift a root over L={self.L} to L={L}")
        return RootExp(L, self.e * (L // self.L))

    def embed(self) -> "CycloElem":
        return embed(self)

    def __str__(self) -> str:
        return f"zeta({self.L})^{self.e}"


def root_order(r: RootExp) -> int:
    """Multiplicative order of zeta_L^e."""
    return r.L // gcd(r.e, r.L)


class CycloElem:
    """Exact element of Q(zeta_L).

    ``rep`` is the reduced dense representative, leading coefficient first and
    without leading zeros (the zero element has an empty ``rep``). Instances
    are immutable.
    """

    __slots__ = ("L", "rep")

    def __init__(self, L: int, rep=()):
        self.L = L
        self.rep = tuple(rep)

    @classmethod
    def zero(cls, L: int) -> "CycloElem":
        return cls(L)

    @classmethod
    def one(cls, L: int) -> "CycloElem":
        return cls(L, (QQ(1),))

    @classmethod
    def rational(cls, L: int, value) -> "CycloElem":
        q = _qq(value)
        return cls(L, (q,) if q != 0 else ())

    @classmethod
    def from_coeffs(cls, L: int, coeffs) -> "CycloElem":
        """Element sum(c_i zeta^i) for coefficients given constant term first."""
        dense = [_qq(c) for c in reversed(list(coeffs))]
        while dense and dense[0] == 0:
            dense.pop(0)
        return cls(L, dup_rem(dense, list(_modulus(L)), QQ))

    @property
    def coeffs(self) -> tuple:
        """Coordinates in the basis zeta^i, 0 <= i < phi(L)."""
        low_first = list(reversed(self.rep))
        return tuple(low_first + [QQ(0)] * (field_degree(self.L) - len(low_first)))

    def is_rational(self) -> bool:
        return len(self.rep) <= 1

    def _coerce(self, other) -> "CycloElem | None":
        if isinstance(other, CycloElem):
            if other.L != self.L:
                raise FieldMismatchError(
                    f"mixed cyclotomic fields: L={self.L} and L={other.L}"
                )
            return other
        if isinstance(other, (int, Fraction)):
            return CycloElem.rational(self.L, other)
        return None

    def __add__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CycloElem(self.L, dup_add(list(self.rep), list(other.rep), QQ))

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return CycloElem(self.L, dup_sub(list(self.rep), list(other.rep), QQ))

    def __rsub__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other - self

    def __neg__(self) -> "CycloElem":
        return CycloElem(self.L, dup_neg(list(self.rep), QQ))

    def __mul__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        if not self.rep or not other.rep:
            return CycloElem(self.L)
        if len(other.rep) == 1:
            return CycloElem(self.L, dup_mul_ground(list(self.rep), other.rep[0], QQ))
        if len(self.rep) == 1:
            return CycloElem(self.L, dup_mul_ground(list(other.rep), self.rep[0], QQ))
        product = dup_mul(list(self.rep), list(other.rep), QQ)
        return CycloElem(self.L, dup_rem(product, list(_modulus(self.L)), QQ))

    __rmul__ = __mul__

    def inverse(self) -> "CycloElem":
        if not self.rep:
            raise ZeroInversionError(f"inversion of zero in Q(zeta_{self.L})")
        if len(self.rep) == 1:
            return CycloElem(self.L, (QQ(1) / self.rep[0],))
        try:
            inv = dup_invert(list(self.rep), list(_modulus(self.L)), QQ)
        except NotInvertible as exc:
            raise InvariantViolation(f"Phi_{self.L} is not irreducible over QQ?") from exc
        return CycloElem(self.L, inv)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other):
        other = self._coerce(other)
        if other is None:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, k: int) -> "CycloElem":
        if k < 0:
            return self.inverse() ** (-k)
        result = CycloElem.one(self.L)
        base = self
        while k:
            if k & 1:
                result = result * base
            k >>= 1
            if k:
                base = base * base
        return result

    def __eq__(self, other) -> bool:
        if isinstance(other, CycloElem):
            return self.L == other.L and self.rep == other.rep
        if isinstance(other, (int, Fraction)):
            return self.rep == CycloElem.rational(self.L, other).rep
        return NotImplemented

    def __hash__(self) -> int:
        if not self.rep:
            return 0
        if len(self.rep) == 1:
            return hash(Fraction(int(self.rep[0].numerator), int(self.rep[0].denominator)))
        return hash((self.L, self.rep))

    def __bool__(self) -> bool:
        return bool(self.rep)

    def lift(self, L: int) -> "CycloElem":
        """Image of this element in Q(zeta_L) for a multiple L of its order."""
        if L == self.L:
            return self
        if L % self.L:
            raise FieldMismatchError(f"Q(zeta_{self.L}) is not a subfield of Q(zeta_{L})")
        step = L // self.L
        total = CycloElem.zero(L)
        for i, c in enumerate(self.coeffs):
            if c != 0:
                total = total + embed(RootExp(L, i * step)) * CycloElem(L, (c,))
        return total

    def coordinates(self) -> list[str]:
        """Rational coordinates as strings, constant term first."""
        return [_format_rational(c) for c in self.coeffs]

    def __str__(self) -> str:
        if not self.rep:
            return "0"
        if len(self.rep) == 1:
            return _format_rational(self.rep[0])
        return f"cyclo({self.L})[{','.join(self.coordinates())}]"

    def __repr__(self) -> str:
        return f"CycloElem({self})"


def embed(r: RootExp) -> CycloElem:
    """zeta_L^e as an element of Q(zeta_L)."""
    return CycloElem(r.L, _zeta_power(r.L, r.e))


# Literals ------------------------------------------------------------------------------------

_ROOT_RE = re.compile(r"^zeta\((\d+)\)(?:\^(-?\d+))?$")
_VECTOR_RE = re.compile(r"^cyclo\((\d+)\)\[([^\]]*)\]$")
_RATIONAL_RE = re.compile(r"^-?\d+(?:/\d+)?$")


@dataclass(frozen=True)
class ScalarLiteral:
    """A parsed scalar from the command line or a config file.

    ``order`` is the cyclotomic order the literal needs; rationals need 1.
    """

    text: str
    order: int
    root: RootExp | None = None
    coeffs: tuple[Fraction, ...] = ()

    def to_elem(self, L: int) -> CycloElem:
        if L % self.order:
            raise FieldMismatchError(f"literal {self.text!r} needs L divisible by {self.order}")
        if self.root is not None:
            return embed(self.root.lift(L))
        return CycloElem.from_coeffs(self.order, self.coeffs).lift(L)


def parse_scalar(text: str) -> ScalarLiteral:
    """Parse ``zeta(L)^e``, ``cyclo(L)[c0,c1,...]`` or a rational like ``-3/2``."""
    raw = text.strip().replace(" ", "")
    if match := _ROOT_RE.match(raw):
        L = int(match.group(1))
        if L < 1:
            raise ParameterError(f"invalid root of unity literal {text!r}: order must be >= 1")
        e = int(match.group(2)) if match.group(2) is not None else 1
        return ScalarLiteral(text=raw, order=L, root=RootExp(L, e))
    if match := _VECTOR_RE.match(raw):
        L = int(match.group(1))
        if L < 1:
            raise ParameterError(f"invalid cyclotomic literal {text!r}: order must be >= 1")
        parts = [p for p in match.group(2).split(",") if p]
        if not parts or not all(_RATIONAL_RE.match(p) for p in parts):
            raise ParameterError(f"invalid cyclotomic literal {text!r}: expected rationals")
        return ScalarLiteral(text=raw, order=L, coeffs=tuple(Fraction(p) for p in parts))
    if _RATIONAL_RE.match(raw):
        value = Fraction(raw)
        return ScalarLiteral(text=raw, order=1, coeffs=(value,))
    raise ParameterError(
        f"invalid scalar literal {text!r}: use zeta(L)^e, cyclo(L)[c0,...] or a rational"
    )


# Matrices ------------------------------------------------------------------------------------


class ScalarMatrix:
    """Sparse matrix with entries in one field Q(zeta_L).

    Rows act on the left: for the right action of an algebra on row vectors,
    the matrix of a product XY is the product of the matrices of X and Y.
    """

    __slots__ = ("rows", "cols", "L", "_data")

    def __init__(self, rows: int, cols: int, L: int, data=None):
        self.rows = rows
        self.cols = cols
        self.L = L
        clean: dict[int, dict[int, CycloElem]] = {}
        for i, row in (data or {}).items():
            kept = {}
            for j, value in row.items():
                if isinstance(value, (int, Fraction)):
                    value = CycloElem.rational(L, value)
                elif value.L != L:
                    raise FieldMismatchError(f"matrix over L={L} got an entry over L={value.L}")
                if value:
                    kept[j] = value
            if kept:
                clean[i] = kept
        self._data = clean

    @classmethod
    def from_entries(cls, rows: int, cols: int, L: int, entries) -> "ScalarMatrix":
        data: dict[int, dict[int, CycloElem]] = {}
        for (i, j), value in entries.items():
            data.setdefault(i, {})[j] = value
        return cls(rows, cols, L, data)

    @classmethod
    def zero(cls, rows: int, cols: int, L: int) -> "ScalarMatrix":
        return cls(rows, cols, L)

    @classmethod
    def identity(cls, d: int, L: int) -> "ScalarMatrix":
        one = CycloElem.one(L)
        return cls(d, d, L, {i: {i: one} for i in range(d)})

    def get(self, i: int, j: int) -> CycloElem:
        return self._data.get(i, {}).get(j, CycloElem.zero(self.L))

    def row(self, i: int) -> dict[int, CycloElem]:
        return dict(self._data.get(i, {}))

    def entries(self):
        """Nonzero entries as ((i, j), value), row-major."""
        for i in sorted(self._data):
            row = self._data[i]
            for j in sorted(row):
                yield (i, j), row[j]

    def sparse_rows(self) -> dict[int, dict[int, CycloElem]]:
        return {i: dict(row) for i, row in self._data.items()}

    def map_entries(self, fn) -> dict[int, dict[int, object]]:
        """Row dicts with ``fn`` applied entrywise (e.g. reduction modulo a prime)."""
        return {i: {j: fn(v) for j, v in row.items()} for i, row in self._data.items()}

    @property
    def nnz(self) -> int:
        return sum(len(row) for row in self._data.values())

    def is_zero(self) -> bool:
        return not self._data

    def _check(self, other: "ScalarMatrix") -> None:
        if other.L != self.L:
            raise FieldMismatchError(f"matrices over L={self.L} and L={other.L}")

    def __matmul__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        self._check(other)
        if self.cols != other.rows:
            raise ParameterError(
                f"shape mismatch {self.rows}x{self.cols} @ {other.rows}x{other.cols}"
            )
        product: dict[int, dict[int, CycloElem]] = {}
        for i, row in self._data.items():
            acc: dict[int, CycloElem] = {}
            for k, a in row.items():
                for j, b in other._data.get(k, {}).items():
                    term = a * b
                    acc[j] = acc[j] + term if j in acc else term
            product[i] = acc
        return ScalarMatrix(self.rows, other.cols, self.L, product)

    def _combine(self, other: "ScalarMatrix", sign: int) -> "ScalarMatrix":
        self._check(other)
        if (self.rows, self.cols) != (other.rows, other.cols):
            raise ParameterError("shape mismatch in matrix addition")
        data = self.sparse_rows()
        for (i, j), value in other.entries():
            row = data.setdefault(i, {})
            term = value if sign > 0 else -value
            row[j] = row[j] + term if j in row else term
        return ScalarMatrix(self.rows, self.cols, self.L, data)

    def __add__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        return self._combine(other, 1)

    def __sub__(self, other: "ScalarMatrix") -> "ScalarMatrix":
        return self._combine(other, -1)

    def __neg__(self) -> "ScalarMatrix":
        return self.scale(-1)

    def scale(self, c) -> "ScalarMatrix":
        return ScalarMatrix(
            self.rows, self.cols, self.L,
            {i: {j: v * c for j, v in row.items()} for i, row in self._data.items()},
        )

    def power(self, k: int) -> "ScalarMatrix":
        if self.rows != self.cols:
            raise ParameterError("power of a non-square matrix")
        result = ScalarMatrix.identity(self.rows, self.L)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def rank(self) -> int:
        return rank(self._data.values())

    def is_invertible(self) -> bool:
        return self.rows == self.cols and self.rank() == self.rows

    def direct_sum(self, other: "ScalarMatrix") -> "ScalarMatrix":
        self._check(other)
        data = self.sparse_rows()
        for (i, j), value in other.entries():
            data.setdefault(self.rows + i, {})[self.cols + j] = value
        return ScalarMatrix(self.rows + other.rows, self.cols + other.cols, self.L, data)

    def with_entry(self, i: int, j: int, value) -> "ScalarMatrix":
        data = self.sparse_rows()
        data.setdefault(i, {})[j] = value
        return ScalarMatrix(self.rows, self.cols, self.L, data)

    def __eq__(self, other) -> bool:
        if not isinstance(other, ScalarMatrix):
            return NotImplemented
        return (self.rows, self.cols, self.L, self._data) == (
            other.rows, other.cols, other.L, other._data
        )

    __hash__ = None

    def __repr__(self) -> str:
        return f"ScalarMatrix({self.rows}x{self.cols}, L={self.L}, nnz={self.nnz})"


# Reduction modulo a prime ---------------------------------------------------------------------


@dataclass(frozen=True)
class PrimeReduction:
    """Ring map Z[1/N][zeta_L] -> GF(p) sending zeta_L to a primitive L-th root mod p.

    Requires p = 1 (mod L). Used for rank certificates: a rank computed
    mod p never exceeds the rank over Q(zeta_L).
    """

    L: int
    prime: int
    root: int

    @cached_property
    def field(self):
        return GF(self.prime)

    @cached_property
    def _root_powers(self) -> tuple[int, ...]:
        return tuple(pow(self.root, i, self.prime) for i in range(field_degree(self.L)))

    def __call__(self, x: CycloElem):
        if x.L != self.L:
            raise FieldMismatchError(f"reduction for L={self.L} applied to L={x.L}")
        p = self.prime
        total = 0
        for c, power in zip(x.coeffs, self._root_powers):
            if c == 0:
                continue
            num, den = int(c.numerator), int(c.denominator)
            if den % p == 0:
                raise ReductionError(f"denominator {den} vanishes modulo {p}")
            total += num * pow(den, -1, p) * power
        return self.field(total % p)


@lru_cache(maxsize=None)
def prime_reduction(L: int, floor: int = MODULAR_PRIME_FLOOR) -> PrimeReduction:
    """First prime p = 1 (mod L) above ``floor`` with its image of zeta_L."""
    p = floor - floor % L + 1
    while p <= floor or not isprime(p):
        p += L
    root = pow(int(primitive_root(p)), (p - 1) // L, p)
    return PrimeReduction(L=L, prime=p, root=root)
