"""Proof certificates for positive decisions.

A certificate for (S, N) is a partial term q over y1..ym (m = N's left
width) built from S's operations such that, for every row of N, evaluating
q at the row's left entries is defined and equals the row's right entry.
Validity is checked once and for all in the algebra of instances forced by
S on N's entry alphabet: a row that checks there transports along the
unique map extending any assignment of the alphabet, so it checks in every
algebra; and that algebra itself witnesses any failure.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import PointednessError
from .matrices import STAR, ExtendedMatrix, MatrixSet, entry_to_str
from .algebras import (FinitePartialAlgebra, eval_term, eval_term_traced,
                       free_algebra)
from .engine import (DerivationTableau, Derived, OriginalLeft, StarColumn,
                     is_trivial_set)
from .terms import App, Term, Var, ZERO, format_term_shared, validate_term


@dataclass(frozen=True)
class Certificate:
    """A candidate term plus where it came from: "extracted",
    "user_supplied" or "searched"."""

    term: Term
    source: str


@dataclass(frozen=True)
class CheckOutcome:
    """Valid, or invalid at a 1-based row with a reason.

    reason "undefined" carries the argument-index path from the root to
    the leftmost-innermost undefined application plus that subterm;
    reason "wrong_value" carries got/expected as entry strings.  degenerate
    marks the immediate Valid for a trivial matrix list.
    """

    status: str
    row: int | None = None
    reason: str | None = None
    path: tuple[int, ...] | None = None
    subterm: Term | None = None
    got: str | None = None
    expected: str | None = None
    degenerate: bool = False

    @property
    def valid(self) -> bool:
        return self.status == "valid"

    def to_json_dict(self) -> dict:
        out = {"status": self.status, "row": self.row, "reason": self.reason,
               "path": list(self.path) if self.path is not None else None}
        if self.reason == "undefined" and self.subterm is not None:
            out["subterm"] = format_term_shared(self.subterm)
        if self.reason == "wrong_value":
            out["got"] = self.got
            out["expected"] = self.expected
        if self.degenerate:
            out["degenerate"] = True
        return out


def extract_term(tableau: DerivationTableau, mats: MatrixSet,
                 target: ExtendedMatrix) -> Certificate:
    """Read a certificate off the tableau's provenance records.

    Seed columns become variables (or the constant), derived columns become
    applications over their parents' terms, sharing subterms along shared
    parents.  Degenerate situations need no tableau: a trivial pointed list
    certifies with 0, a trivial non-pointed one with y1 (left width > 0) or
    with a member that has no left columns.  Raises ValueError when the
    target's right column was never derived (the implication fails).
    """
    if is_trivial_set(mats):
        if mats.pointed:
            return Certificate(ZERO, "extracted")
        if target.m > 0:
            return Certificate(Var(1), "extracted")
        for i, mat in enumerate(mats):
            if mat.m == 0:
                return Certificate(App(i, ()), "extracted")
        raise ValueError("no certificate: target has no left columns and "
                         "no member of the list is left-column-free")
    if not target.pointed and target.m == 0:
        raise ValueError("no certificate: implication does not hold")
    goal = target.right_column()
    position = tableau.position(goal)
    if position is None:
        raise ValueError("no certificate: right column was not derived")

    terms: dict[int, Term] = {}

    def term_at(pos: int) -> Term:
        got = terms.get(pos)
        if got is None:
            prov = tableau.provenance[pos]
            if isinstance(prov, OriginalLeft):
                got = Var(prov.j)
            elif isinstance(prov, StarColumn):
                got = ZERO
            else:
                assert isinstance(prov, Derived)
                got = App(prov.matrix_index, tuple(term_at(p) for p in prov.parents))
            terms[pos] = got
        return got

    return Certificate(term_at(position), "extracted")


def _element_of(entry: int, pointed: bool) -> int:
    """Carrier element of the checking algebra for one matrix entry."""
    return entry if pointed else entry - 1


def _entry_of(element: int, pointed: bool) -> str:
    return entry_to_str(element if pointed else element + 1)


def checking_algebra(mats: MatrixSet, target: ExtendedMatrix) -> FinitePartialAlgebra:
    """The forced-instance algebra on the target's entry alphabet."""
    size = target.k + 1 if target.pointed else target.k
    return free_algebra(mats, size)


def check_certificate(mats: MatrixSet, target: ExtendedMatrix, term: Term) -> CheckOutcome:
    """Evaluate the term row by row in the checking algebra.

    Row indices in the outcome are 1-based.  A trivial matrix list
    validates immediately (every model has at most one element)."""
    if mats.pointed != target.pointed:
        raise PointednessError("matrix list and target must share pointedness")
    validate_term(term, [m.m for m in mats], mats.pointed, max_var=target.m)
    if is_trivial_set(mats):
        return CheckOutcome("valid", degenerate=True)
    algebra = checking_algebra(mats, target)
    pointed = target.pointed
    for r, row in enumerate(target.rows, start=1):
        env = {j + 1: _element_of(row[j], pointed) for j in range(target.m)}
        expected = _element_of(row[target.m], pointed)
        value, path, subterm = eval_term_traced(algebra, term, env)
        if value is None:
            return CheckOutcome("invalid", row=r, reason="undefined",
                                path=path, subterm=subterm)
        if value != expected:
            return CheckOutcome("invalid", row=r, reason="wrong_value",
                                got=_entry_of(value, pointed),
                                expected=_entry_of(expected, pointed))
    return CheckOutcome("valid")


def search_term(mats: MatrixSet, target: ExtendedMatrix,
                max_nodes: int = 15) -> Certificate | None:
    """Brute-force hunt for a certificate, by tree node count then by
    (operation index, argument order).

    Only a term's row-value vector in the checking algebra matters for
    validity, so later terms repeating an earlier vector are skipped; the
    kept representative is the enumeration-first (hence minimal) one, and
    every vector reachable within the bound is reached through
    representatives.  Sound: the winner is re-checked before returning.
    Incomplete only in the bound: returns None when no term of at most
    max_nodes nodes certifies.
    """
    if mats.pointed != target.pointed:
        raise PointednessError("matrix list and target must share pointedness")

    def finish(term: Term) -> Certificate | None:
        out = check_certificate(mats, target, term)
        return Certificate(term, "searched") if out.valid else None

    if is_trivial_set(mats):
        # Any well-formed term validates; return the enumeration-first one.
        if target.m >= 1:
            return finish(Var(1))
        if mats.pointed:
            return finish(ZERO)
        for op, mat in enumerate(mats):
            if mat.m == 0:
                return finish(App(op, ()))
        return None

    algebra = checking_algebra(mats, target)
    pointed = target.pointed
    n = target.n
    envs = [{j + 1: _element_of(row[j], pointed) for j in range(target.m)}
            for row in target.rows]
    goal = tuple(_element_of(row[target.m], pointed) for row in target.rows)

    def vector_of(term: Term):
        vals = tuple(eval_term(algebra, term, env) for env in envs)
        return None if any(v is None for v in vals) else vals

    seen: dict[tuple, Term] = {}
    by_size: dict[int, list[tuple[tuple, Term]]] = {}

    def consider(size: int, term: Term, vector) -> bool:
        if vector in seen:
            return False
        seen[vector] = term
        by_size.setdefault(size, []).append((vector, term))
        return vector == goal

    for size in range(1, max_nodes + 1):
        if size == 1:
            leaves: list[Term] = [Var(j) for j in range(1, target.m + 1)]
            if pointed:
                leaves.append(ZERO)
            leaves.extend(App(op, ()) for op, mat in enumerate(mats) if mat.m == 0)
            for leaf in leaves:
                vector = vector_of(leaf)
                if vector is not None and consider(1, leaf, vector):
                    return finish(leaf)
            continue
        for op, mat in enumerate(mats):
            arity = mat.m
            if arity == 0:
                continue
            for sizes in _compositions(size - 1, arity):
                pools = [by_size.get(s, []) for s in sizes]
                if any(not pool for pool in pools):
                    continue
                for picks in itertools.product(*pools):
                    args = tuple(p[1] for p in picks)
                    rows = []
                    for r in range(n):
                        rows.append(algebra.tables[op].get(tuple(p[0][r] for p in picks)))
                    if any(v is None for v in rows):
                        continue
                    term = App(op, args)
                    if consider(size, term, tuple(rows)):
                        return finish(term)
    return None


def _compositions(total: int, parts: int):
    """Ordered splits of total into the given number of positive parts,
    lexicographically."""
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest
