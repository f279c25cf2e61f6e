"""Partial terms over an operation list: variables y1.., constant 0, and
applications p0(..), p1(..) indexed into an ordered list of operations.

Terms are immutable and may share subterm objects, so a term is really a
DAG; helpers here are memoized on node identity to stay linear in the DAG
size even when the unfolded tree is huge.

Surface syntax::

    term := 'y' digits | '0' | 'p' digits '(' term (',' term)* ')'

with optional whitespace between tokens.  y-indices are 1-based, p-indices
0-based.  A let-sharing output form ("let t0 = ...; ...") is emitted for
DAGs but never parsed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import TermSyntaxError


@dataclass(frozen=True, repr=False)
class Term:
    def __repr__(self) -> str:
        return format_term_shared(self)


@dataclass(frozen=True, repr=False)
class Var(Term):
    """Variable y<index>, index >= 1."""

    index: int


@dataclass(frozen=True, repr=False)
class Zero(Term):
    """The basepoint constant; only meaningful in pointed mode."""


@dataclass(frozen=True, repr=False)
class App(Term):
    """Application of operation p<op> to argument terms."""

    op: int
    args: tuple[Term, ...]


ZERO = Zero()


def tree_size(term: Term) -> int:
    """Node count of the unfolded tree (shared nodes counted every time)."""
    sizes: dict[int, int] = {}

    def size(t: Term) -> int:
        got = sizes.get(id(t))
        if got is None:
            got = 1 + sum(size(a) for a in t.args) if isinstance(t, App) else 1
            sizes[id(t)] = got
        return got

    return size(term)


def term_vars(term: Term) -> set[int]:
    """Indices of the y-variables occurring in the term."""
    out: set[int] = set()
    seen: set[int] = set()
    stack = [term]
    while stack:
        t = stack.pop()
        if id(t) in seen:
            continue
        seen.add(id(t))
        if isinstance(t, Var):
            out.add(t.index)
        elif isinstance(t, App):
            stack.extend(t.args)
    return out


def uses_zero(term: Term) -> bool:
    seen: set[int] = set()
    stack = [term]
    while stack:
        t = stack.pop()
        if id(t) in seen:
            continue
        seen.add(id(t))
        if isinstance(t, Zero):
            return True
        if isinstance(t, App):
            stack.extend(t.args)
    return False


def validate_term(term: Term, arities, pointed: bool, max_var: int | None = None) -> None:
    """Raise ValueError unless the term fits the operation list and mode.

    arities: arity of p0, p1, ... in order.  max_var bounds the allowed
    y-indices when given.
    """
    arities = list(arities)
    seen: set[int] = set()
    stack = [term]
    while stack:
        t = stack.pop()
        if id(t) in seen:
            continue
        seen.add(id(t))
        if isinstance(t, Var):
            if t.index < 1:
                raise ValueError(f"variable index {t.index} out of range")
            if max_var is not None and t.index > max_var:
                raise ValueError(f"variable y{t.index} out of range (only y1..y{max_var})")
        elif isinstance(t, Zero):
            if not pointed:
                raise ValueError("constant 0 not available in non-pointed mode")
        elif isinstance(t, App):
            if not 0 <= t.op < len(arities):
                raise ValueError(f"operation p{t.op} out of range (only p0..p{len(arities) - 1})")
            if len(t.args) != arities[t.op]:
                raise ValueError(
                    f"p{t.op} expects {arities[t.op]} arguments, got {len(t.args)}"
                )
            stack.extend(t.args)


def _tokenize(text: str):
    i = 0
    while i < len(text):
        c = text[i]
        if c.isspace():
            i += 1
            continue
        if c in "(),":
            yield c, c, i
            i += 1
            continue
        if c == "0":
            yield "zero", 0, i
            i += 1
            continue
        if c in "yp":
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            if j == i + 1:
                raise TermSyntaxError(f"{c!r} must be followed by digits", i)
            yield ("var" if c == "y" else "op"), int(text[i + 1:j]), i
            i = j
            continue
        raise TermSyntaxError(f"unexpected character {c!r}", i)


def parse_term(text: str, arities=None, pointed: bool | None = None,
               max_var: int | None = None) -> Term:
    """Parse the surface syntax.  Optional checks: arities pins each p<i>'s
    argument count and index range, pointed=False rejects '0', max_var
    bounds y-indices."""
    tokens = list(_tokenize(text))
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else ("end", None, len(text))

    def take(kind: str):
        nonlocal pos
        got = peek()
        if got[0] != kind:
            raise TermSyntaxError(f"expected {kind!r}, got {got[0]!r}", got[2])
        pos += 1
        return got

    def term() -> Term:
        nonlocal pos
        kind, value, at = peek()
        if kind == "var":
            pos += 1
            if value < 1:
                raise TermSyntaxError("variable indices start at y1", at)
            if max_var is not None and value > max_var:
                raise TermSyntaxError(f"variable y{value} out of range (only y1..y{max_var})", at)
            return Var(value)
        if kind == "zero":
            pos += 1
            if pointed is False:
                raise TermSyntaxError("constant 0 not allowed in non-pointed mode", at)
            return ZERO
        if kind == "op":
            pos += 1
            if arities is not None and not 0 <= value < len(arities):
                raise TermSyntaxError(f"unknown operation p{value}", at)
            take("(")
            args = [term()]
            while peek()[0] == ",":
                take(",")
                args.append(term())
            take(")")
            if arities is not None and len(args) != arities[value]:
                raise TermSyntaxError(
                    f"p{value} expects {arities[value]} arguments, got {len(args)}", at)
            return App(value, tuple(args))
        raise TermSyntaxError(f"expected a term, got {kind!r}", at)

    result = term()
    kind, _, at = peek()
    if kind != "end":
        raise TermSyntaxError(f"trailing input {kind!r}", at)
    return result


DEFAULT_FORMAT_CAP = 10_000


def format_term(term: Term, max_nodes: int = DEFAULT_FORMAT_CAP) -> str:
    """Fully expanded rendering, e.g. "p0(y2, p0(y3, y1, y2), y3)".

    Raises ValueError when the unfolded tree exceeds max_nodes; the shared
    form below has no such limit.
    """
    if tree_size(term) > max_nodes:
        raise ValueError(
            f"term tree has more than {max_nodes} nodes; use format_term_shared")

    def render(t: Term) -> str:
        if isinstance(t, Var):
            return f"y{t.index}"
        if isinstance(t, Zero):
            return "0"
        assert isinstance(t, App)
        return f"p{t.op}(" + ", ".join(render(a) for a in t.args) + ")"

    return render(term)


def format_term_shared(term: Term) -> str:
    """Let-sharing rendering: nodes referenced more than once become
    "let t<i> = ..." bindings (in dependency order), the final expression
    comes last.  Linear in the DAG size."""
    refs: dict[int, int] = {}
    order: list[Term] = []

    def walk(t: Term) -> None:
        refs[id(t)] = refs.get(id(t), 0) + 1
        if refs[id(t)] == 1:
            if isinstance(t, App):
                for a in t.args:
                    walk(a)
            order.append(t)

    walk(term)

    names: dict[int, str] = {}
    bindings: list[str] = []

    def render(t: Term, top: bool = False) -> str:
        name = names.get(id(t))
        if name is not None and not top:
            return name
        if isinstance(t, Var):
            return f"y{t.index}"
        if isinstance(t, Zero):
            return "0"
        assert isinstance(t, App)
        return f"p{t.op}(" + ", ".join(render(a) for a in t.args) + ")"

    for t in order:
        if isinstance(t, App) and refs[id(t)] > 1 and t is not term:
            names[id(t)] = f"t{len(bindings)}"
            bindings.append(f"let {names[id(t)]} = {render(t, top=True)}")

    body = render(term, top=True)
    return "; ".join(bindings + [body])


def substitute_vars(term: Term, mapping: dict[int, Term]) -> Term:
    """Replace each variable y<i> by mapping[i] (missing indices stay).
    Shared nodes are rewritten once, preserving the DAG shape."""
    memo: dict[int, Term] = {}

    def rewrite(t: Term) -> Term:
        got = memo.get(id(t))
        if got is None:
            if isinstance(t, Var):
                got = mapping.get(t.index, t)
            elif isinstance(t, App):
                got = App(t.op, tuple(rewrite(a) for a in t.args))
            else:
                got = t
            memo[id(t)] = got
        return got

    return rewrite(term)


def substitute_ops(term: Term, replacements) -> Term:
    """Replace each application p<i>(a1..am) by replacements[i] with its
    y1..ym substituted by the (rewritten) arguments.  Used to compose
    certificates across an intermediate operation list."""
    replacements = list(replacements)
    memo: dict[int, Term] = {}

    def rewrite(t: Term) -> Term:
        got = memo.get(id(t))
        if got is None:
            if isinstance(t, App):
                args = [rewrite(a) for a in t.args]
                body = replacements[t.op]
                got = substitute_vars(body, {j + 1: arg for j, arg in enumerate(args)})
            else:
                got = t
            memo[id(t)] = got
        return got

    return rewrite(term)
