"""Finite relations and matrix-property checks on them.

A matrix M with n rows speaks about n-ary relations: M is read as a rule
"whenever the left columns, instantiated by a function from M's variables
into the carrier (star to basepoint), all belong to the relation, so does
the instantiated right column".  The strict variant instantiates each row
through its own function, which is what heterogeneous relations between
several carriers need.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import PointednessError, ResourceLimitError
from .matrices import STAR, ExtendedMatrix, MatrixSet
from .algebras import (FinitePartialAlgebra, index_tuple, is_closed_subset,
                       power, restrict, satisfies_matrix_equations)


@dataclass(frozen=True)
class FinitePointedSet:
    """Carrier 0..size-1; basepoint is an element index or None."""

    size: int
    basepoint: int | None = None

    def __post_init__(self) -> None:
        if self.size < 0:
            raise ValueError("negative carrier size")
        if self.basepoint is not None and not 0 <= self.basepoint < self.size:
            raise ValueError("basepoint outside carrier")

    @property
    def pointed(self) -> bool:
        return self.basepoint is not None


@dataclass(frozen=True)
class FiniteRelation:
    """Tuples over a list of component carriers."""

    components: tuple[FinitePointedSet, ...]
    tuples: frozenset

    def __post_init__(self) -> None:
        if not self.components:
            raise ValueError("relation needs at least one component")
        for t in self.tuples:
            if len(t) != len(self.components):
                raise ValueError(f"tuple {t} does not match arity {len(self.components)}")
            for value, comp in zip(t, self.components):
                if not 0 <= value < comp.size:
                    raise ValueError(f"tuple {t} outside carriers")

    @property
    def arity(self) -> int:
        return len(self.components)


def _row_image(matrix: ExtendedMatrix, assignments) -> list[tuple[int, ...]]:
    """Columns of the matrix under per-row variable assignments; entry j of
    column c is row j's function applied to M[j][c]."""
    cols = []
    for c in range(matrix.m + 1):
        cols.append(tuple(assignments[r](matrix.rows[r][c]) for r in range(matrix.n)))
    return cols


def is_M_closed_relation(matrix: ExtendedMatrix, carrier: FinitePointedSet,
                         relation) -> bool:
    """Closure under a single function for all rows: the homogeneous
    reading, all components equal to the carrier."""
    if matrix.pointed and not carrier.pointed:
        raise PointednessError("pointed matrix needs a pointed carrier")
    tuples = set(relation.tuples if isinstance(relation, FiniteRelation) else relation)
    for t in tuples:
        if len(t) != matrix.n:
            raise ValueError(f"tuple {t} does not match the matrix's {matrix.n} rows")
    for values in itertools.product(range(carrier.size), repeat=matrix.k):
        def apply(entry: int) -> int:
            return carrier.basepoint if entry == STAR else values[entry - 1]
        assignments = [apply] * matrix.n
        cols = _row_image(matrix, assignments)
        if all(c in tuples for c in cols[: matrix.m]) and cols[matrix.m] not in tuples:
            return False
    return True


def is_strictly_M_closed_relation(matrix: ExtendedMatrix, relation: FiniteRelation) -> bool:
    """Closure under one function per row; components may differ."""
    if relation.arity != matrix.n:
        raise ValueError("relation arity must match the matrix's row count")
    if matrix.pointed and not all(c.pointed for c in relation.components):
        raise PointednessError("pointed matrix needs pointed components")
    per_row = []
    for comp in relation.components[: matrix.n]:
        per_row.append(list(itertools.product(range(comp.size), repeat=matrix.k)))
    for combo in itertools.product(*per_row):
        assignments = []
        for r, values in enumerate(combo):
            base = relation.components[r].basepoint
            assignments.append(
                lambda e, values=values, base=base: base if e == STAR else values[e - 1])
        cols = _row_image(matrix, assignments)
        if all(c in relation.tuples for c in cols[: matrix.m]) \
                and cols[matrix.m] not in relation.tuples:
            return False
    return True


def is_difunctional(relation: FiniteRelation) -> bool:
    """a R b, c R b, c R d together force a R d."""
    if relation.arity != 2:
        raise ValueError("difunctionality is about binary relations")
    pairs = relation.tuples
    for (a, b) in pairs:
        for (c, b2) in pairs:
            if b2 != b:
                continue
            for (c2, d) in pairs:
                if c2 == c and (a, d) not in pairs:
                    return False
    return True


def closed_subsets_are_S_closed(mats: MatrixSet, algebra: FinitePartialAlgebra,
                                arity: int, cap: int = 2 ** 20,
                                closed_only: bool = True) -> bool:
    """Do all closed subsets of the arity-fold power, read as relations on
    the algebra's carrier, satisfy every matrix of the list?

    The algebra must satisfy the list's row equations.  With
    closed_only=False the subsets considered are instead all subalgebra
    subsets (induced structure satisfies the equations), closed or not;
    that weaker filter admits counterexamples.  Raises ResourceLimitError
    when there are more than cap subsets to scan.
    """
    if mats.pointed != algebra.pointed:
        raise PointednessError("matrix list and algebra must share pointedness")
    for mat in mats:
        if mat.n != arity:
            raise ValueError("every matrix must have as many rows as the relation arity")
    if not satisfies_matrix_equations(algebra, mats):
        raise ValueError("algebra does not satisfy the list's row equations")
    cube = power(algebra, arity)
    if 2 ** cube.size > cap:
        raise ResourceLimitError(f"2^{cube.size} subsets exceed the cap {cap}")
    carrier = FinitePointedSet(algebra.size, 0 if algebra.pointed else None)
    for bits in range(2 ** cube.size):
        subset = [e for e in range(cube.size) if bits >> e & 1]
        if closed_only:
            if not is_closed_subset(cube, subset):
                continue
        else:
            if algebra.pointed and (not subset or subset[0] != 0):
                continue
            if subset:  # the empty relation has no structure to violate
                induced, _ = restrict(cube, subset)
                if not satisfies_matrix_equations(induced, mats):
                    continue
        tuples = {index_tuple(e, algebra.size, arity) for e in subset}
        for mat in mats:
            if not is_M_closed_relation(mat, carrier, tuples):
                return False
    return True
