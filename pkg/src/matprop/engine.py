"""Column-saturation decision procedure.

Whether every relation satisfying the properties of a matrix list S also
satisfies the property of a target matrix N reduces to a reachability
question on columns over N's entry alphabet: starting from N's left
columns (plus the all-star column in pointed mode), repeatedly stack rows
of a member of S, instantiated by functions into the alphabet, so that
the stacked left columns are all present; the stacked right column is
then derivable.  The implication holds iff N's right column shows up.

Each derived column records how it arose, which is what certificate
extraction consumes.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field

from .errors import PointednessError, ResourceLimitError
from .matrices import Column, ExtendedMatrix, MatrixSet, STAR, entry_to_str, is_anti_trivial
from .algebras import Conflict, forced_instances

DEFAULT_MAX_CANDIDATES = 10_000_000


@dataclass(frozen=True)
class OriginalLeft:
    """Seed column: left column j (1-based) of the target matrix."""

    j: int


@dataclass(frozen=True)
class StarColumn:
    """Seed column: the all-star column (pointed mode only)."""


@dataclass(frozen=True)
class Derived:
    """Column obtained by stacking instantiated rows of S[matrix_index];
    parents are tableau positions of the left columns used, in order."""

    matrix_index: int
    parents: tuple[int, ...]


Provenance = OriginalLeft | StarColumn | Derived


@dataclass
class DerivationTableau:
    """Ordered, duplicate-free column list with provenance.

    The first entries are the distinct left columns of the target in order
    (repeats keep their first occurrence only), then the all-star column in
    pointed mode when new, then derived columns in discovery order.
    First provenance wins and is never rewritten.
    """

    pointed: bool
    k: int
    columns: list[Column] = field(default_factory=list)
    provenance: list[Provenance] = field(default_factory=list)
    _index: dict[Column, int] = field(default_factory=dict)

    def __len__(self) -> int:
        return len(self.columns)

    def __contains__(self, column: Column) -> bool:
        return column in self._index

    def position(self, column: Column):
        return self._index.get(column)

    def add(self, column: Column, provenance: Provenance) -> bool:
        """Append unless present; returns True when appended."""
        if column in self._index:
            return False
        self._index[column] = len(self.columns)
        self.columns.append(column)
        self.provenance.append(provenance)
        return True

    def bound(self, n: int) -> int:
        """Number of possible columns: alphabet size to the n."""
        alphabet = self.k + 1 if self.pointed else self.k
        return alphabet ** n


def seed_tableau(target: ExtendedMatrix) -> DerivationTableau:
    tableau = DerivationTableau(target.pointed, target.k)
    for j in range(target.m):
        tableau.add(target.left_column(j), OriginalLeft(j + 1))
    if target.pointed:
        tableau.add((STAR,) * target.n, StarColumn())
    return tableau


def is_trivial_matrix(matrix: ExtendedMatrix) -> bool:
    """True iff only relations with at most one element (through the
    basepoint, in pointed mode) can satisfy the matrix's property.

    Equivalent to the row demands clashing on a two-element carrier: a
    clash rules out every larger algebra, and without one the forced
    tables themselves form a two-element model.
    """
    mats = MatrixSet((matrix,), matrix.pointed)
    return isinstance(forced_instances(mats, 2), Conflict)


def is_trivial_set(mats: MatrixSet) -> bool:
    """True iff the joint property of the list is trivial (clash on a
    two-element carrier).  The empty list is non-trivial."""
    return isinstance(forced_instances(mats, 2), Conflict)


def _interpretation_vectors(matrix: ExtendedMatrix, alphabet: list[int]) -> list[tuple[int, ...]]:
    """All images of single rows under functions from the matrix's variables
    into the alphabet (star pinned to star), sorted lexicographically."""
    vectors = set()
    for row in matrix.rows:
        for env in itertools.product(alphabet, repeat=matrix.k):
            vectors.add(tuple(STAR if e == STAR else env[e - 1] for e in row))
    return sorted(vectors)


def saturate(mats: MatrixSet, target: ExtendedMatrix, *, full: bool = False,
             max_candidates: int = DEFAULT_MAX_CANDIDATES) -> DerivationTableau:
    """Close the seed columns of the target under row stacking.

    Callers must rule out trivial matrix lists first (the degenerate
    branches of decide); the procedure itself does not re-check.  By
    default it stops as soon as the target's right column is derived;
    full=True always runs to the fixpoint, which is order-independent.

    Raises ResourceLimitError after max_candidates complete candidate
    stacks in one call.
    """
    if mats.pointed != target.pointed:
        raise PointednessError("matrix list and target must share pointedness")
    n = target.n
    tableau = seed_tableau(target)
    goal = target.right_column()
    if not full and goal in tableau:
        return tableau
    alphabet = list(range(0 if target.pointed else 1, target.k + 1))
    vectors = [_interpretation_vectors(m, alphabet) for m in mats]
    candidates = 0

    def expand(mat_idx: int) -> bool:
        """One pass over one matrix; returns True when a column was added
        or the goal was reached (early exit)."""
        nonlocal candidates
        vecs = vectors[mat_idx]
        width = mats[mat_idx].m
        added = False
        chosen: list[tuple[int, ...]] = []

        def viable(vec) -> bool:
            depth = len(chosen)
            for j in range(width):
                prefix = tuple(ch[j] for ch in chosen) + (vec[j],)
                if prefix not in prefix_sets[depth + 1]:
                    return False
            return True

        def rec() -> bool:
            nonlocal candidates, added
            if len(chosen) == n:
                candidates += 1
                if candidates > max_candidates:
                    raise ResourceLimitError(
                        f"saturation exceeded {max_candidates} candidate stacks")
                right = tuple(ch[width] for ch in chosen)
                if right not in tableau:
                    parents = tuple(
                        tableau.position(tuple(ch[j] for ch in chosen)) for j in range(width))
                    tableau.add(right, Derived(mat_idx, parents))
                    for length in range(n + 1):
                        prefix_sets[length].add(right[:length])
                    added = True
                    assert len(tableau) <= tableau.bound(n), "tableau outgrew its bound"
                    if not full and right == goal:
                        return True
                return False
            for vec in vecs:
                if viable(vec):
                    chosen.append(vec)
                    if rec():
                        return True
                    chosen.pop()
            return False

        prefix_sets = [{c[:length] for c in tableau.columns} for length in range(n + 1)]
        return rec() or added

    while True:
        changed = False
        for mat_idx in range(len(mats)):
            if expand(mat_idx):
                if not full and goal in tableau:
                    return tableau
                changed = True
        if not changed:
            break
    assert len(tableau) <= tableau.bound(n), "tableau outgrew its bound"
    return tableau


@dataclass
class DecisionReport:
    """Outcome of decide: verdict "holds" / "does_not_hold", mode
    "pointed" / "non_pointed", the tableau, which degenerate branch (if
    any) applied, and the S indices used in derivations."""

    verdict: str
    mode: str
    tableau: DerivationTableau
    degenerate: str = "none"
    used_matrices: tuple[int, ...] = ()

    @property
    def holds(self) -> bool:
        return self.verdict == "holds"

    def to_json_dict(self, include_tableau: bool = True) -> dict:
        out = {
            "verdict": self.verdict,
            "mode": self.mode,
            "degenerate": self.degenerate,
            "used_matrices": list(self.used_matrices),
        }
        if include_tableau:
            cols = []
            for column, prov in zip(self.tableau.columns, self.tableau.provenance):
                if isinstance(prov, OriginalLeft):
                    pd = {"type": "original", "j": prov.j}
                elif isinstance(prov, StarColumn):
                    pd = {"type": "star"}
                else:
                    pd = {"type": "derived", "matrix": prov.matrix_index,
                          "parents": list(prov.parents)}
                cols.append({"entries": [entry_to_str(e) for e in column], "provenance": pd})
            out["columns"] = cols
        return out


def decide(mats: MatrixSet, target: ExtendedMatrix, *, full_saturation: bool = False,
           max_candidates: int = DEFAULT_MAX_CANDIDATES) -> DecisionReport:
    """Does every relation satisfying all of mats also satisfy the target?

    Degenerate branches, in order: a non-pointed target with no left
    columns holds iff some member of mats has no left columns
    (m_zero_case); a trivial mats makes everything hold (trivial_S);
    otherwise the saturation verdict is membership of the target's right
    column in the tableau.  An anti-trivial target is flagged as such; its
    right column already sits in the seed.
    """
    if mats.pointed != target.pointed:
        raise PointednessError("matrix list and target must share pointedness")
    mode = "pointed" if target.pointed else "non_pointed"
    if not target.pointed and target.m == 0:
        holds = any(m.m == 0 for m in mats)
        return DecisionReport("holds" if holds else "does_not_hold", mode,
                              seed_tableau(target), "m_zero_case")
    if is_trivial_set(mats):
        return DecisionReport("holds", mode, seed_tableau(target), "trivial_S")
    tableau = saturate(mats, target, full=full_saturation, max_candidates=max_candidates)
    holds = target.right_column() in tableau
    used = sorted({p.matrix_index for p in tableau.provenance if isinstance(p, Derived)})
    degenerate = "anti_trivial_N" if is_anti_trivial(target) else "none"
    return DecisionReport("holds" if holds else "does_not_hold", mode, tableau,
                          degenerate, tuple(used))
