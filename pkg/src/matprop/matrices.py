"""Extended matrices of variables with a distinguished right column.

An extended matrix is an n x (m+1) grid whose entries are either variables
x1..xk or, in pointed mode, the basepoint symbol '*'.  The first m columns
are the "left" columns, the last one is the "right" column.  Entries are
stored as plain ints: 0 encodes '*', j >= 1 encodes xj.  Columns are tuples
of entry ints, read top to bottom.

Matrices are written in a small bracket syntax::

    [x1 * | x1 ; x1 x1 | *]

Rows are separated by ';', the right column by '|', entries by whitespace.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import MatrixSyntaxError, PointednessError

STAR = 0

#: Column type alias: entries of one column, top row first.
Column = tuple[int, ...]


def entry_to_str(entry: int) -> str:
    return "*" if entry == STAR else f"x{entry}"


@dataclass(frozen=True)
class ExtendedMatrix:
    """An n x (m+1) matrix of entries with a pointedness flag.

    rows holds n tuples of length m+1 each.  Invariants checked on
    construction: at least one row, all rows the same length >= 1, '*'
    only in pointed mode, and variable indices dense (every index 1..k
    occurs, where k is the largest index).  m = 0 is allowed even though
    the surface syntax cannot express it.
    """

    rows: tuple[tuple[int, ...], ...]
    pointed: bool

    def __post_init__(self) -> None:
        if not self.rows:
            raise ValueError("matrix needs at least one row")
        width = len(self.rows[0])
        if width < 1:
            raise ValueError("rows need at least the right entry")
        seen: set[int] = set()
        for row in self.rows:
            if len(row) != width:
                raise ValueError("ragged rows: all rows must have the same length")
            for entry in row:
                if entry < 0:
                    raise ValueError(f"bad entry code {entry}")
                if entry == STAR and not self.pointed:
                    raise PointednessError("'*' entry in a non-pointed matrix")
                if entry != STAR:
                    seen.add(entry)
        k = max(seen, default=0)
        if seen != set(range(1, k + 1)):
            missing = sorted(set(range(1, k + 1)) - seen)
            raise ValueError(f"variable indices not dense: missing x{missing[0]}")

    @property
    def n(self) -> int:
        return len(self.rows)

    @property
    def m(self) -> int:
        return len(self.rows[0]) - 1

    @property
    def k(self) -> int:
        return max((e for row in self.rows for e in row), default=0)

    def left_column(self, j: int) -> Column:
        """Column j (0-based, 0 <= j < m) as a tuple, top row first."""
        if not 0 <= j < self.m:
            raise ValueError(f"no left column {j}")
        return tuple(row[j] for row in self.rows)

    def left_columns(self) -> list[Column]:
        return [self.left_column(j) for j in range(self.m)]

    def right_column(self) -> Column:
        return tuple(row[self.m] for row in self.rows)

    def with_pointed(self) -> "ExtendedMatrix":
        """The same entries with the pointed flag forced on."""
        if self.pointed:
            return self
        return ExtendedMatrix(self.rows, True)


@dataclass(frozen=True)
class MatrixSet:
    """A finite list of matrices sharing one pointedness flag.

    Order matters: operation symbol p<i> in terms refers to position i here.
    """

    matrices: tuple[ExtendedMatrix, ...]
    pointed: bool

    def __post_init__(self) -> None:
        for mat in self.matrices:
            if mat.pointed != self.pointed:
                raise PointednessError("matrix set mixes pointed and non-pointed members")

    def __len__(self) -> int:
        return len(self.matrices)

    def __iter__(self):
        return iter(self.matrices)

    def __getitem__(self, i: int) -> ExtendedMatrix:
        return self.matrices[i]


def matrix_set(matrices, pointed: bool | None = None) -> MatrixSet:
    """Build a MatrixSet, lifting members to pointed mode when needed.

    With pointed=None the flag is inferred: pointed iff any member is.
    Lifting a non-pointed matrix only flips its flag; entries are untouched.
    A pointed member under pointed=False is an error.
    """
    mats = tuple(matrices)
    if pointed is None:
        pointed = any(m.pointed for m in mats)
    if pointed:
        mats = tuple(m.with_pointed() for m in mats)
    else:
        for m in mats:
            if m.pointed:
                raise PointednessError("cannot demote a pointed matrix to non-pointed mode")
    return MatrixSet(mats, pointed)


def _tokenize(text: str):
    """Yield (kind, value, pos) tokens for the bracket syntax."""
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "[];|*":
            yield c, c, i
            i += 1
            continue
        if c == "x":
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise MatrixSyntaxError("'x' must be followed by digits", i)
            yield "var", int(text[i + 1:j]), i
            i = j
            continue
        raise MatrixSyntaxError(f"unexpected character {c!r}", i)


def parse_matrix(text: str, pointed: bool | None = None) -> ExtendedMatrix:
    """Parse the bracket syntax into an ExtendedMatrix.

    pointed=None infers the flag from the entries: pointed iff some '*'
    occurs.  pointed=False rejects '*'.  pointed=True forces the flag even
    without '*'.  Variable indices are renumbered to the dense range 1..k
    (in order of first occurrence) unless they already are exactly 1..k,
    in which case the input is kept verbatim.
    """
    tokens = list(_tokenize(text))
    if not tokens or tokens[0][0] != "[":
        raise MatrixSyntaxError("matrix must start with '['", tokens[0][2] if tokens else 0)
    if tokens[-1][0] != "]":
        raise MatrixSyntaxError("matrix must end with ']'", tokens[-1][2])
    body = tokens[1:-1]

    rows: list[list[int]] = []
    current: list[int] = []
    bar_at: int | None = None
    row_start = tokens[0][2]

    def close_row(pos: int) -> None:
        nonlocal current, bar_at
        if bar_at is None:
            raise MatrixSyntaxError("row has no '|'", pos)
        if bar_at == 0:
            raise MatrixSyntaxError("row needs at least one left entry", pos)
        if len(current) != bar_at + 1:
            raise MatrixSyntaxError("row needs exactly one right entry", pos)
        rows.append(current)
        current = []
        bar_at = None

    for kind, value, pos in body:
        if kind == "var":
            current.append(value)
            if value == 0:
                raise MatrixSyntaxError("variable indices start at x1", pos)
        elif kind == "*":
            current.append(STAR)
        elif kind == "|":
            if bar_at is not None:
                raise MatrixSyntaxError("second '|' in one row", pos)
            bar_at = len(current)
        elif kind == ";":
            close_row(pos)
            row_start = pos
        else:
            raise MatrixSyntaxError(f"unexpected {kind!r} inside matrix", pos)
    if not body and not rows:
        raise MatrixSyntaxError("empty matrix", row_start)
    close_row(tokens[-1][2])

    has_star = any(e == STAR for row in rows for e in row)
    if pointed is None:
        pointed = has_star
    elif not pointed and has_star:
        raise PointednessError("'*' not allowed in non-pointed mode")

    # Renumber only when the variable set is not already dense 1..k.
    distinct: list[int] = []
    for row in rows:
        for e in row:
            if e != STAR and e not in distinct:
                distinct.append(e)
    if set(distinct) != set(range(1, len(distinct) + 1)):
        remap = {old: new for new, old in enumerate(distinct, start=1)}
        rows = [[STAR if e == STAR else remap[e] for e in row] for row in rows]

    try:
        return ExtendedMatrix(tuple(tuple(row) for row in rows), pointed)
    except ValueError as exc:
        raise MatrixSyntaxError(str(exc), tokens[-1][2]) from exc


def format_matrix(mat: ExtendedMatrix) -> str:
    """Render in the bracket syntax, e.g. "[x1 * | x1 ; x1 x1 | *]"."""
    parts = []
    for row in mat.rows:
        left = " ".join(entry_to_str(e) for e in row[: mat.m])
        right = entry_to_str(row[mat.m])
        parts.append(f"{left} | {right}" if mat.m else f"| {right}")
    return "[" + " ; ".join(parts) + "]"


_BUILTINS: dict[str, str] = {
    "mal": "[x1 x2 x2 | x1 ; x2 x2 x1 | x1]",
    "maj": "[x1 x1 x2 | x1 ; x1 x2 x1 | x1 ; x2 x1 x1 | x1]",
    "ari": "[x1 x2 x2 | x1 ; x2 x2 x1 | x1 ; x1 x2 x1 | x1]",
    "uni": "[x1 * | x1 ; * x1 | x1]",
    "struni": "[x1 * * | x1 ; x2 x2 x1 | x1]",
    "struni2": "[x1 x1 * | x1 ; * * x1 | x1 ; x1 * x1 | *]",
    "sub": "[x1 * | x1 ; x1 x1 | *]",
    "p3": "[x1 x1 x1 | x1 ; x1 x1 * | * ; * x1 x1 | *]",
    "q4": "[x1 * * * | x1 ; x1 x1 x2 x2 | * ; x1 x2 x1 x2 | *]",
    "edge3": "[x2 x2 x1 x1 | x1 ; x2 x1 x2 x1 | x1 ; x1 x1 x1 x2 | x1]",
    "cube3": "[x1 x1 x1 x2 x2 | x1 ; x1 x2 x2 x1 x1 | x1 ; x2 x1 x2 x1 x2 | x1]",
}


def builtin_names() -> list[str]:
    return list(_BUILTINS)


def builtin_matrix(name: str) -> ExtendedMatrix:
    """Look up a named matrix: mal, maj, ari, uni, struni, struni2, sub,
    p3, q4, edge3, cube3."""
    try:
        text = _BUILTINS[name]
    except KeyError:
        raise KeyError(f"unknown builtin matrix {name!r}; known: {', '.join(_BUILTINS)}") from None
    return parse_matrix(text)


def is_anti_trivial(mat: ExtendedMatrix) -> bool:
    """True when every relation (of matching arity) satisfies the property.

    Pointed: the right column is all '*' or repeats a left column.
    Non-pointed: the right column repeats a left column.
    """
    right = mat.right_column()
    if mat.pointed and all(e == STAR for e in right):
        return True
    return right in mat.left_columns()
