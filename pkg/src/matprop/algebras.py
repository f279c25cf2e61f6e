"""Finite partial algebras induced by a matrix list.

A matrix list S induces one operation symbol p<i> of arity m_i per member
(and a basepoint constant 0 in pointed mode).  Each matrix row demands one
existence equation: applying p<i> to the row's left entries must be defined
and equal the right entry, under every assignment of the row's variables.

Carriers are the dense index sets 0..size-1; in pointed mode element 0 is
the basepoint.  Operation tables are dicts from argument tuples to values;
absence means undefined.  Evaluation is strict: an application is defined
only when all arguments are and the table has the tuple.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .errors import PointednessError
from .matrices import STAR, ExtendedMatrix, MatrixSet
from .terms import App, Term, Var, ZERO


@dataclass(frozen=True)
class InducedSignature:
    """Arities of p0, p1, ... plus the pointedness flag."""

    arities: tuple[int, ...]
    pointed: bool

    @classmethod
    def of_set(cls, mats: MatrixSet) -> "InducedSignature":
        return cls(tuple(m.m for m in mats), mats.pointed)


@dataclass(frozen=True)
class FinitePartialAlgebra:
    """Carrier 0..size-1 with one partial table per operation.

    Tables must not be mutated after construction.  Pointed algebras have
    size >= 1 and basepoint 0.
    """

    size: int
    signature: InducedSignature
    tables: tuple[dict, ...]

    def __post_init__(self) -> None:
        if self.size < 0:
            raise ValueError("negative carrier size")
        if self.pointed and self.size < 1:
            raise ValueError("pointed algebra needs the basepoint element")
        if len(self.tables) != len(self.signature.arities):
            raise ValueError("one table per operation required")
        for arity, table in zip(self.signature.arities, self.tables):
            for args, value in table.items():
                if len(args) != arity:
                    raise ValueError(f"table key {args} does not match arity {arity}")
                if not all(0 <= a < self.size for a in args) or not 0 <= value < self.size:
                    raise ValueError(f"table entry {args} -> {value} out of carrier range")

    @property
    def pointed(self) -> bool:
        return self.signature.pointed

    @property
    def arities(self) -> tuple[int, ...]:
        return self.signature.arities


def eval_term(algebra: FinitePartialAlgebra, term: Term, env: dict[int, int]):
    """Strict evaluation; returns the element or None for undefined.

    env maps y-indices to carrier elements.  Unbound variables, arity or
    index mismatches are programmer errors and raise ValueError, distinct
    from the in-band None.
    """
    value, _, _ = _eval_memo(algebra, term, env)
    return value


def _eval_memo(algebra: FinitePartialAlgebra, term: Term, env: dict[int, int]):
    """Returns (value, memo, order); memo is keyed by node identity."""
    memo: dict[int, int | None] = {}

    def ev(t: Term):
        if id(t) in memo:
            return memo[id(t)]
        if isinstance(t, Var):
            if t.index not in env:
                raise ValueError(f"unbound variable y{t.index}")
            v = env[t.index]
            if not 0 <= v < algebra.size:
                raise ValueError(f"environment value {v} outside carrier")
        elif isinstance(t, App):
            if not 0 <= t.op < len(algebra.tables):
                raise ValueError(f"operation p{t.op} not in signature")
            if len(t.args) != algebra.arities[t.op]:
                raise ValueError(f"p{t.op} expects {algebra.arities[t.op]} arguments")
            vals = [ev(a) for a in t.args]
            v = None if any(x is None for x in vals) else algebra.tables[t.op].get(tuple(vals))
        else:
            if not algebra.pointed:
                raise ValueError("constant 0 needs a pointed algebra")
            v = 0
        memo[id(t)] = v
        return v

    value = ev(term)
    return value, memo, None


def eval_term_traced(algebra: FinitePartialAlgebra, term: Term, env: dict[int, int]):
    """Like eval_term but locates failures: returns (value, path, subterm)
    where path is the argument-index route from the root to the
    leftmost-innermost undefined application (None when defined)."""
    value, memo, _ = _eval_memo(algebra, term, env)
    if value is not None:
        return value, None, None
    path: list[int] = []
    t = term
    while True:
        assert isinstance(t, App)  # only applications can be undefined
        for idx, a in enumerate(t.args):
            if memo[id(a)] is None:
                path.append(idx)
                t = a
                break
        else:
            return None, tuple(path), t


def satisfies_existence_eq(algebra: FinitePartialAlgebra, lhs: Term, rhs: Term,
                           num_vars: int) -> bool:
    """True iff both sides are defined and equal under every environment of
    y1..y<num_vars> over the carrier."""
    for values in itertools.product(range(algebra.size), repeat=num_vars):
        env = {i + 1: v for i, v in enumerate(values)}
        left = eval_term(algebra, lhs, env)
        if left is None:
            return False
        if left != eval_term(algebra, rhs, env):
            return False
    return True


def _entry_term(entry: int) -> Term:
    return ZERO if entry == STAR else Var(entry)


def row_equation(op_index: int, matrix: ExtendedMatrix, row_index: int):
    """The demanded equation of one row, as (lhs, rhs, num_vars) with the
    matrix variables x1..xk read as y1..yk."""
    row = matrix.rows[row_index]
    lhs = App(op_index, tuple(_entry_term(e) for e in row[: matrix.m]))
    return lhs, _entry_term(row[matrix.m]), matrix.k


def satisfies_matrix_equations(algebra: FinitePartialAlgebra, mats: MatrixSet) -> bool:
    """True iff every row equation of every member holds in the algebra."""
    for i, mat in enumerate(mats):
        for r in range(mat.n):
            lhs, rhs, num_vars = row_equation(i, mat, r)
            if not satisfies_existence_eq(algebra, lhs, rhs, num_vars):
                return False
    return True


@dataclass(frozen=True)
class Demand:
    """Where a forced instance came from: matrix, row (0-based), and the
    environment as the value tuple for x1..xk."""

    matrix: int
    row: int
    env: tuple[int, ...]


@dataclass(frozen=True)
class Consistent:
    tables: tuple[dict, ...]


@dataclass(frozen=True)
class Conflict:
    """Two demands force different values on the same operation tuple."""

    op: int
    args: tuple[int, ...]
    value1: int
    value2: int
    first: Demand
    second: Demand


def forced_instances(mats: MatrixSet, carrier_size: int):
    """All operation instances demanded by the row equations over the given
    carrier, scanned in deterministic order (matrix, row, environment).

    Returns Consistent(tables) or the first Conflict.
    """
    if mats.pointed and carrier_size < 1:
        raise ValueError("pointed carrier needs the basepoint element")
    tables: list[dict] = [{} for _ in mats]
    firsts: list[dict] = [{} for _ in mats]
    for i, mat in enumerate(mats):
        for r, row in enumerate(mat.rows):
            for env in itertools.product(range(carrier_size), repeat=mat.k):
                image = tuple(0 if e == STAR else env[e - 1] for e in row)
                args, value = image[: mat.m], image[mat.m]
                known = tables[i].get(args)
                if known is None:
                    tables[i][args] = value
                    firsts[i][args] = Demand(i, r, env)
                elif known != value:
                    return Conflict(i, args, known, value, firsts[i][args], Demand(i, r, env))
    return Consistent(tuple(tables))


def free_algebra(mats: MatrixSet, carrier_size: int) -> FinitePartialAlgebra:
    """The algebra whose tables hold exactly the forced instances.

    On Conflict the demands cannot coexist on two or more elements, so the
    one-element total algebra (the only model) is returned instead.
    """
    signature = InducedSignature.of_set(mats)
    result = forced_instances(mats, carrier_size)
    if isinstance(result, Conflict):
        tables = tuple({(0,) * a: 0} for a in signature.arities)
        return FinitePartialAlgebra(1, signature, tables)
    return FinitePartialAlgebra(carrier_size, signature, result.tables)


def product(left: FinitePartialAlgebra, right: FinitePartialAlgebra) -> FinitePartialAlgebra:
    """Componentwise product; element (a, b) is encoded as a * right.size + b,
    so the pointed basepoint pair lands on 0.  An instance is defined iff
    both components are."""
    if left.signature != right.signature:
        raise ValueError("product needs a common signature")
    size = left.size * right.size
    tables = []
    for op, arity in enumerate(left.arities):
        table = {}
        for (largs, lval) in left.tables[op].items():
            for (rargs, rval) in right.tables[op].items():
                args = tuple(la * right.size + ra for la, ra in zip(largs, rargs))
                table[args] = lval * right.size + rval
        tables.append(table)
    return FinitePartialAlgebra(size, left.signature, tuple(tables))


def tuple_index(values: tuple[int, ...], size: int) -> int:
    """Encode a tuple over 0..size-1 as a dense index, first position most
    significant."""
    idx = 0
    for v in values:
        idx = idx * size + v
    return idx


def index_tuple(idx: int, size: int, length: int) -> tuple[int, ...]:
    out = []
    for _ in range(length):
        idx, v = divmod(idx, size)
        out.append(v)
    return tuple(reversed(out))


def power(algebra: FinitePartialAlgebra, exponent: int) -> FinitePartialAlgebra:
    """The exponent-fold product with tuple encoding per tuple_index."""
    if exponent < 1:
        raise ValueError("power needs exponent >= 1")
    result = algebra
    for _ in range(exponent - 1):
        result = product(result, algebra)
    return result


def is_closed_subset(algebra: FinitePartialAlgebra, subset) -> bool:
    """True iff the subset contains the basepoint (pointed case) and no
    defined instance with arguments inside escapes it."""
    inside = set(subset)
    if algebra.pointed and 0 not in inside:
        return False
    for table in algebra.tables:
        for args, value in table.items():
            if all(a in inside for a in args) and value not in inside:
                return False
    return True


def restrict(algebra: FinitePartialAlgebra, subset):
    """The induced structure on a subset: instances whose arguments and
    value all lie inside.  Returns (subalgebra, old_to_new map).  Elements
    are renumbered in ascending order; pointed subsets must contain 0."""
    elems = sorted(set(subset))
    if algebra.pointed and (not elems or elems[0] != 0):
        raise ValueError("pointed subset must contain the basepoint")
    if not all(0 <= e < algebra.size for e in elems):
        raise ValueError("subset element outside carrier")
    renum = {old: new for new, old in enumerate(elems)}
    tables = []
    for table in algebra.tables:
        sub = {}
        for args, value in table.items():
            if all(a in renum for a in args) and value in renum:
                sub[tuple(renum[a] for a in args)] = renum[value]
        tables.append(sub)
    return FinitePartialAlgebra(len(elems), algebra.signature, tuple(tables)), renum


def is_closed_homomorphism(mapping, source: FinitePartialAlgebra,
                           target: FinitePartialAlgebra) -> tuple[bool, bool]:
    """(is_hom, is_closed) for the carrier map given as a sequence.

    Hom: basepoint to basepoint (pointed) and every defined instance is
    preserved with the mapped value.  Closed additionally reflects
    definedness: target defined on mapped arguments forces source defined.
    """
    if source.signature != target.signature:
        raise ValueError("homomorphism needs a common signature")
    f = list(mapping)
    if len(f) != source.size or not all(0 <= v < target.size for v in f):
        raise ValueError("mapping must send the whole carrier into the target")
    is_hom = not (source.pointed and f[0] != 0)
    if is_hom:
        for op, table in enumerate(source.tables):
            for args, value in table.items():
                if target.tables[op].get(tuple(f[a] for a in args)) != f[value]:
                    is_hom = False
                    break
            if not is_hom:
                break
    is_closed = is_hom
    if is_closed:
        for op, arity in enumerate(source.arities):
            for args in itertools.product(range(source.size), repeat=arity):
                if args not in source.tables[op] and \
                        tuple(f[a] for a in args) in target.tables[op]:
                    is_closed = False
                    break
            if not is_closed:
                break
    return is_hom, is_closed
