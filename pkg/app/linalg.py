"""Sparse exact linear algebra.

Works over any exact field whose elements support ``+ - * /``, unary minus
and comparison with ``0``: cyclotomic elements for exact answers, sympy
finite-field elements for modular certificates.

Vectors are dicts from sortable coordinates to nonzero field elements;
matrices are dicts of row index to sparse row.
"""

from collections import deque
from collections.abc import Hashable, Iterable, Mapping
from typing import Any

SparseVector = dict[Hashable, Any]
SparseRows = dict[int, dict[int, Any]]


def sparse_matmul(
    left: Mapping[int, Mapping[int, Any]], right: Mapping[int, Mapping[int, Any]]
) -> SparseRows:
    """Product of two sparse matrices given as row dicts."""
    product: SparseRows = {}
    for i, row in left.items():
        acc: dict[int, Any] = {}
        for k, a in row.items():
            target = right.get(k)
            if not target:
                continue
            for j, b in target.items():
                term = a * b
                current = acc.get(j)
                acc[j] = term if current is None else current + term
        acc = {j: v for j, v in acc.items() if v != 0}
        if acc:
            product[i] = acc
    return product


def flatten(rows: Mapping[int, Mapping[int, Any]]) -> SparseVector:
    """Matrix as a vector indexed by (row, col)."""
    return {(i, j): v for i, row in rows.items() for j, v in row.items()}


class EchelonBasis:
    """Incrementally built row-echelon basis.

    Each stored row is normalized to 1 at its pivot, the smallest coordinate
    it holds. Rows are not fully reduced; back substitution happens in
    :meth:`nullspace`.
    """

    def __init__(self) -> None:
        self._rows: dict[Hashable, SparseVector] = {}

    @property
    def rank(self) -> int:
        return len(self._rows)

    @property
    def pivots(self) -> list[Hashable]:
        return sorted(self._rows)

    def reduce(self, vector: Mapping[Hashable, Any]) -> SparseVector:
        """Residue of ``vector`` whose leading coordinate is not a pivot."""
        residue = {k: c for k, c in vector.items() if c != 0}
        while residue:
            lead = min(residue)
            row = self._rows.get(lead)
            if row is None:
                break
            factor = residue[lead]
            for key, coeff in row.items():
                term = factor * coeff
                current = residue.get(key)
                value = -term if current is None else current - term
                if value == 0:
                    residue.pop(key, None)
                else:
                    residue[key] = value
        return residue

    def insert(self, vector: Mapping[Hashable, Any]) -> bool:
        """Add ``vector`` to the span. Returns False when it was already in it."""
        residue = self.reduce(vector)
        if not residue:
            return False
        lead = min(residue)
        scale = residue[lead]
        self._rows[lead] = {k: c / scale for k, c in residue.items()}
        return True

    def contains(self, vector: Mapping[Hashable, Any]) -> bool:
        return not self.reduce(vector)

    def nullspace(self, unknowns: Iterable[Hashable], one: Any) -> list[SparseVector]:
        """Basis of the solutions of the stored rows read as homogeneous equations.

        ``unknowns`` lists the variables; coordinates that only appear in the
        rows are added to it. One basis vector per free variable.
        """
        variables = set(unknowns)
        for row in self._rows.values():
            variables.update(row)
        free = sorted(v for v in variables if v not in self._rows)

        solved: dict[Hashable, SparseVector] = {}
        for pivot in sorted(self._rows, reverse=True):
            expr: SparseVector = {}
            for key, coeff in self._rows[pivot].items():
                if key == pivot:
                    continue
                source = solved[key] if key in self._rows else {key: one}
                for var, c in source.items():
                    term = coeff * c
                    current = expr.get(var)
                    value = -term if current is None else current - term
                    if value == 0:
                        expr.pop(var, None)
                    else:
                        expr[var] = value
            solved[pivot] = expr

        basis = []
        for var in free:
            vec: SparseVector = {var: one}
            for pivot, expr in solved.items():
                c = expr.get(var)
                if c is not None:
                    vec[pivot] = c
            basis.append(vec)
        return basis


def rank(rows: Iterable[Mapping[Hashable, Any]]) -> int:
    basis = EchelonBasis()
    for row in rows:
        basis.insert(row)
    return basis.rank


def span_closure(
    identity: Mapping[int, Mapping[int, Any]],
    generators: list[Mapping[int, Mapping[int, Any]]],
    ceiling: int | None = None,
) -> int:
    """Dimension of the unital algebra generated by ``generators``.

    Breadth-first over words, seeded with the identity; a word is extended
    only when it enlarged the span, so the loop stops once the span is closed
    under right multiplication by every generator. Stops early at ``ceiling``.
    """
    basis = EchelonBasis()
    basis.insert(flatten(identity))
    queue = deque([identity])
    while queue:
        word = queue.popleft()
        for gen in generators:
            product = sparse_matmul(word, gen)
            if basis.insert(flatten(product)):
                if ceiling is not None and basis.rank >= ceiling:
                    return basis.rank
                queue.append(product)
    return basis.rank
