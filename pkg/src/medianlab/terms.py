"""Lattice terms: parsing, rendering, evaluation, symmetrization, identities.

Grammar (whitespace-insensitive)::

    expr  := meet ('v' meet)*
    meet  := atom ('^' atom)*
    atom  := var | '(' expr ')' | 'MeetSym' '(' expr ')' | 'JoinSym' '(' expr ')'
    var   := 'x' DIGITS | 'x' | 'y' | 'z'

``x``, ``y``, ``z`` are aliases of ``x1``, ``x2``, ``x3``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from itertools import permutations
from typing import NamedTuple, Sequence, Union

import numpy as np

from .errors import ArityTooLarge, TermSyntaxError, UnboundVariable
from .lattice import FiniteLattice

S3 = tuple(permutations((1, 2, 3)))


@dataclass(frozen=True)
class Var:
    index: int

    @property
    def arity(self) -> int:
        return self.index


@dataclass(frozen=True)
class Meet:
    left: "Term"
    right: "Term"

    @property
    def arity(self) -> int:
        return max(self.left.arity, self.right.arity)


@dataclass(frozen=True)
class Join:
    left: "Term"
    right: "Term"

    @property
    def arity(self) -> int:
        return max(self.left.arity, self.right.arity)


Term = Union[Var, Meet, Join]


# -- parsing and rendering ------------------------------------------------

_ALIASES = {"x": 1, "y": 2, "z": 3}


def _tokenize(text: str) -> list[tuple[str, object, int]]:
    tokens = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif text.startswith("MeetSym", i) or text.startswith("JoinSym", i):
            tokens.append(("sym", text[i:i + 7], i))
            i += 7
        elif ch in "^v()":
            tokens.append((ch, ch, i))
            i += 1
        elif ch in _ALIASES:
            j = i + 1
            while j < len(text) and text[j].isdigit():
                j += 1
            if j > i + 1:
                if ch != "x":
                    raise TermSyntaxError(f"unexpected digits after {ch!r}", i + 1)
                index = int(text[i + 1:j])
                if index < 1:
                    raise TermSyntaxError("variable indices start at 1", i)
            else:
                index = _ALIASES[ch]
            tokens.append(("var", index, i))
            i = j
        else:
            raise TermSyntaxError(f"unexpected character {ch!r}", i)
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.pos = 0

    def peek(self):
        return self.tokens[self.pos]

    def expect(self, kind: str):
        tok = self.peek()
        if tok[0] != kind:
            want = "end of input" if kind == "end" else repr(kind)
            raise TermSyntaxError(f"expected {want}", tok[2])
        self.pos += 1
        return tok

    def expr(self) -> Term:
        node = self.meet()
        while self.peek()[0] == "v":
            self.pos += 1
            node = Join(node, self.meet())
        return node

    def meet(self) -> Term:
        node = self.atom()
        while self.peek()[0] == "^":
            self.pos += 1
            node = Meet(node, self.atom())
        return node

    def atom(self) -> Term:
        kind, value, at = self.peek()
        if kind == "var":
            self.pos += 1
            return Var(value)
        if kind == "(":
            self.pos += 1
            node = self.expr()
            self.expect(")")
            return node
        if kind == "sym":
            self.pos += 1
            self.expect("(")
            inner = self.expr()
            self.expect(")")
            return meet_symmetrization(inner) if value == "MeetSym" else join_symmetrization(inner)
        what = "end of input" if kind == "end" else repr(value)
        raise TermSyntaxError(f"unexpected {what}", at)


def parse_term(text: str) -> Term:
    parser = _Parser(text)
    node = parser.expr()
    parser.expect("end")
    return node


def render_term(t: Term) -> str:
    """Fully parenthesised rendering; ``parse_term`` inverts it."""
    if isinstance(t, Var):
        return f"x{t.index}"
    op = "^" if isinstance(t, Meet) else "v"
    return f"({render_term(t.left)} {op} {render_term(t.right)})"


# -- permutation and symmetrization ---------------------------------------


def permute(t: Term, sigma: Sequence[int]) -> Term:
    """Substitute ``x_i -> x_sigma(i)``; ``sigma[i-1]`` holds ``sigma(i)``."""
    if isinstance(t, Var):
        if t.index > len(sigma):
            return t
        return Var(sigma[t.index - 1])
    return type(t)(permute(t.left, sigma), permute(t.right, sigma))


def _symmetrize(t: Term, node) -> Term:
    if t.arity > 3:
        raise ArityTooLarge(f"symmetrization is ternary; term has arity {t.arity}", arity=t.arity)
    return reduce(node, (permute(t, s) for s in S3))


def meet_symmetrization(t: Term) -> Term:
    return _symmetrize(t, Meet)


def join_symmetrization(t: Term) -> Term:
    return _symmetrize(t, Join)


# -- evaluation -------------------------------------------------------------


def evaluate(t: Term, L: FiniteLattice, assignment: Sequence[int]) -> int:
    if isinstance(t, Var):
        if t.index > len(assignment):
            raise UnboundVariable(f"x{t.index} has no value", variable=t.index)
        return int(assignment[t.index - 1])
    a = evaluate(t.left, L, assignment)
    b = evaluate(t.right, L, assignment)
    return L.meet(a, b) if isinstance(t, Meet) else L.join(a, b)


def term_table(t: Term, L: FiniteLattice, arity: int | None = None) -> np.ndarray:
    """Values of ``t`` on every assignment, as an array of shape ``(n,) * arity``."""
    k = t.arity if arity is None else arity
    if t.arity > k:
        raise UnboundVariable(f"term uses x{t.arity} but arity is {k}", variable=t.arity)
    n = L.n
    cache: dict[Term, np.ndarray] = {}

    def go(s: Term) -> np.ndarray:
        hit = cache.get(s)
        if hit is not None:
            return hit
        if isinstance(s, Var):
            shape = [1] * k
            shape[s.index - 1] = n
            out = np.broadcast_to(np.arange(n).reshape(shape), (n,) * k)
        elif isinstance(s, Meet):
            out = L.meet_table[go(s.left), go(s.right)]
        else:
            out = L.join_table[go(s.left), go(s.right)]
        cache[s] = out
        return out

    return np.array(go(t))


class Verdict(NamedTuple):
    holds: bool
    witness: tuple[int, ...] | None

    def __bool__(self) -> bool:
        return self.holds


def _compare(L: FiniteLattice, s: Term, t: Term, relation) -> Verdict:
    k = max(s.arity, t.arity)
    if k > 3:
        raise ArityTooLarge(f"identity checks are limited to ternary terms; got arity {k}", arity=k)
    a, b = term_table(s, L, k), term_table(t, L, k)
    bad = ~relation(a, b)
    if not bad.any():
        return Verdict(True, None)
    return Verdict(False, tuple(int(i) for i in np.argwhere(bad)[0]))


def holds_identity(L: FiniteLattice, s: Term, t: Term) -> Verdict:
    """Exhaustive check of ``s = t``; the witness is the first failure in lexicographic order."""
    return _compare(L, s, t, lambda a, b: a == b)


def holds_inequality(L: FiniteLattice, s: Term, t: Term) -> Verdict:
    """Exhaustive check of ``s <= t``."""
    return _compare(L, s, t, lambda a, b: L.leq_table[a, b])


def is_symmetric_on(L: FiniteLattice, t: Term) -> bool:
    """Whether the ternary function induced by ``t`` on ``L`` ignores argument order."""
    table = term_table(t, L, 3)
    return all(np.array_equal(table, table.transpose([s - 1 for s in p])) for p in S3)


# -- named terms --------------------------------------------------------------

X, Y, Z = Var(1), Var(2), Var(3)

LOWER_MEDIAN = Join(Join(Meet(X, Y), Meet(X, Z)), Meet(Y, Z))
UPPER_MEDIAN = Meet(Meet(Join(X, Y), Join(X, Z)), Join(Y, Z))
N5_UPPER = join_symmetrization(Meet(X, Join(Z, Meet(X, Y))))
N5_LOWER = meet_symmetrization(Join(X, Meet(Y, Join(X, Z))))

NAMED_TERMS = {
    "m": LOWER_MEDIAN,
    "M": UPPER_MEDIAN,
    "n5_upper": N5_UPPER,
    "n5_lower": N5_LOWER,
}


def modular_by_symmetric_identity(L: FiniteLattice) -> bool:
    """Modularity tested through the symmetric inequality ``n5_upper <= n5_lower``."""
    return holds_inequality(L, N5_UPPER, N5_LOWER).holds
