"""Justification terms, formulas, the ASCII parser/printer and the star translation.

Only five formula constructors are stored: ``Bottom``, ``Atom``, ``And``,
``Implies`` and ``Just``.  Negation, disjunction, equivalence and ``top`` are
constructor functions that expand into that core.  ``Boxed`` is the extra
propositional atom produced by :func:`star`; a formula containing ``Boxed`` but
no ``Just`` is a star formula.

Surface grammar (whitespace is ignored)::

    formula := imp ('<->' formula)?
    imp     := or ('->' imp)?
    or      := and ('|' and)*
    and     := unary ('&' unary)*
    unary   := '~' unary | term ':' unary | primary
    primary := pN | 'bot' | 'top' | '(' formula ')' | '{' term ':' formula '}'
    term    := xN | cN | '[' term '.' term ']' | '[' term '+' term ']'
             | '!' term | '?' term

The braced form is the star atom and is only accepted when parsing star
formulas.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, fields
from typing import Iterable, Iterator, Union


_FIELD_NAMES: dict[type, tuple[str, ...]] = {}


class _Node:
    """Structural equality with a cached hash; formulas are used as dict keys a lot."""

    __slots__ = ("_h",)

    def _key(self) -> tuple:
        cls = type(self)
        names = _FIELD_NAMES.get(cls)
        if names is None:
            names = _FIELD_NAMES[cls] = tuple(f.name for f in fields(self) if f.name != "_h")
        return tuple(getattr(self, n) for n in names)

    def __eq__(self, other):
        if self is other:
            return True
        if type(self) is not type(other):
            return NotImplemented
        if hash(self) != hash(other):
            return False
        return self._key() == other._key()

    def __hash__(self):
        try:
            return self._h
        except AttributeError:
            h = hash((type(self).__name__,) + self._key())
            object.__setattr__(self, "_h", h)
            return h

    def __str__(self):
        if isinstance(self, Term):
            return print_term(self)
        return print_formula(self)


# --------------------------------------------------------------------- terms


class Term(_Node):
    __slots__ = ()


@dataclass(frozen=True, eq=False, slots=True)
class Var(Term):
    index: int


@dataclass(frozen=True, eq=False, slots=True)
class Const(Term):
    index: int


@dataclass(frozen=True, eq=False, slots=True)
class App(Term):
    left: Term
    right: Term


@dataclass(frozen=True, eq=False, slots=True)
class Sum(Term):
    left: Term
    right: Term


@dataclass(frozen=True, eq=False, slots=True)
class Bang(Term):
    inner: Term


@dataclass(frozen=True, eq=False, slots=True)
class Query(Term):
    inner: Term


# ------------------------------------------------------------------ formulas


class Formula(_Node):
    __slots__ = ()


@dataclass(frozen=True, eq=False, slots=True)
class Bottom(Formula):
    pass


@dataclass(frozen=True, eq=False, slots=True)
class Atom(Formula):
    index: int


@dataclass(frozen=True, eq=False, slots=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False, slots=True)
class Implies(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True, eq=False, slots=True)
class Just(Formula):
    term: Term
    body: Formula


@dataclass(frozen=True, eq=False, slots=True)
class Boxed(Formula):
    """The propositional variable standing for ``term:body`` after translation."""

    body: Formula
    term: Term


BOT = Bottom()

# A plain star atom is an ordinary atom; the translation is the identity on them.
Plain = Atom
StarAtom = Union[Atom, Boxed]


def neg(f: Formula) -> Formula:
    return Implies(f, BOT)


def top() -> Formula:
    return Implies(BOT, BOT)


def iff(a: Formula, b: Formula) -> Formula:
    return And(Implies(a, b), Implies(b, a))


def disj(a: Formula, b: Formula) -> Formula:
    return And(Implies(Implies(a, b), b), Implies(Implies(b, a), a))


# ------------------------------------------------------------------- printing

_IMP, _AND, _UNARY = 1, 2, 3


def print_term(t: Term) -> str:
    if isinstance(t, Var):
        return f"x{t.index}"
    if isinstance(t, Const):
        return f"c{t.index}"
    if isinstance(t, App):
        return f"[{print_term(t.left)}.{print_term(t.right)}]"
    if isinstance(t, Sum):
        return f"[{print_term(t.left)}+{print_term(t.right)}]"
    if isinstance(t, Bang):
        return "!" + print_term(t.inner)
    if isinstance(t, Query):
        return "?" + print_term(t.inner)
    raise TypeError(f"not a justification term: {t!r}")


def _level(f: Formula) -> int:
    if isinstance(f, Implies):
        return _IMP
    if isinstance(f, And):
        return _AND
    return _UNARY


def _wrap(f: Formula, min_level: int) -> str:
    s = print_formula(f)
    return f"({s})" if _level(f) < min_level else s


def print_formula(f: Formula) -> str:
    """Render with the fewest parentheses that still parse back to ``f``."""
    if isinstance(f, Bottom):
        return "bot"
    if isinstance(f, Atom):
        return f"p{f.index}"
    if isinstance(f, Implies):
        return f"{_wrap(f.left, _AND)} -> {_wrap(f.right, _IMP)}"
    if isinstance(f, And):
        return f"{_wrap(f.left, _AND)} & {_wrap(f.right, _UNARY)}"
    if isinstance(f, Just):
        return f"{print_term(f.term)}:{_wrap(f.body, _UNARY)}"
    if isinstance(f, Boxed):
        return "{" + f"{print_term(f.term)}:{print_formula(f.body)}" + "}"
    raise TypeError(f"not a formula: {f!r}")


# -------------------------------------------------------------------- parsing


class ParseError(ValueError):
    """Syntax error; ``offset`` is a byte offset into the UTF-8 encoded input."""

    def __init__(self, text: str, pos: int, expected: Iterable[str], found: str):
        self.offset = len(text[:pos].encode("utf-8"))
        self.expected = frozenset(expected)
        self.found = found
        want = ", ".join(sorted(self.expected))
        super().__init__(f"at byte {self.offset}: expected {want}; found {found}")


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<sym><->|->|[&|~()\[\].+!?:{}])|(?P<word>[A-Za-z_][A-Za-z_0-9]*)|(?P<bad>\S))"
)
_NAMED_RE = re.compile(r"([pxc])([0-9]+)$")


@dataclass
class _Tok:
    kind: str  # 'atom', 'var', 'const', 'bot', 'top', a symbol, or 'eof'
    text: str
    pos: int
    index: int = 0


def _tokenize(text: str) -> list[_Tok]:
    toks = []
    pos = 0
    while text[pos:].strip():
        m = _TOKEN_RE.match(text, pos)
        start = m.start(m.lastgroup)
        word = m.group(m.lastgroup)
        if m.lastgroup == "sym":
            toks.append(_Tok(word, word, start))
        elif m.lastgroup == "word" and word in ("bot", "top"):
            toks.append(_Tok(word, word, start))
        elif m.lastgroup == "word":
            nm = _NAMED_RE.match(word)
            if nm is None or nm.group(2).startswith("0"):
                raise ParseError(text, start, {"pN", "xN", "cN", "bot", "top"}, repr(word))
            kind = {"p": "atom", "x": "var", "c": "const"}[nm.group(1)]
            toks.append(_Tok(kind, word, start, int(nm.group(2))))
        else:
            raise ParseError(text, start, {"token"}, repr(word))
        pos = m.end()
    toks.append(_Tok("eof", "", len(text)))
    return toks


_TERM_START = {"var", "const", "[", "!", "?"}


class _Parser:
    def __init__(self, text: str, star: bool):
        self.text = text
        self.star = star
        self.toks = _tokenize(text)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def fail(self, expected) -> ParseError:
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        return ParseError(self.text, t.pos, expected, found)

    def expect(self, kind: str) -> _Tok:
        if self.tok.kind != kind:
            raise self.fail({repr(kind)})
        t = self.tok
        self.i += 1
        return t

    def formula(self) -> Formula:
        left = self.imp()
        if self.tok.kind == "<->":
            self.i += 1
            return iff(left, self.formula())
        return left

    def imp(self) -> Formula:
        left = self.disj()
        if self.tok.kind == "->":
            self.i += 1
            return Implies(left, self.imp())
        return left

    def disj(self) -> Formula:
        left = self.conj()
        while self.tok.kind == "|":
            self.i += 1
            left = disj(left, self.conj())
        return left

    def conj(self) -> Formula:
        left = self.unary()
        while self.tok.kind == "&":
            self.i += 1
            left = And(left, self.unary())
        return left

    def unary(self) -> Formula:
        kind = self.tok.kind
        if kind == "~":
            self.i += 1
            return neg(self.unary())
        if kind in _TERM_START:
            t = self.term()
            self.expect(":")
            return Just(t, self.unary())
        return self.primary()

    def primary(self) -> Formula:
        t = self.tok
        if t.kind == "atom":
            self.i += 1
            return Atom(t.index)
        if t.kind == "bot":
            self.i += 1
            return BOT
        if t.kind == "top":
            self.i += 1
            return top()
        if t.kind == "(":
            self.i += 1
            f = self.formula()
            self.expect(")")
            return f
        if t.kind == "{" and self.star:
            self.i += 1
            term = self.term()
            self.expect(":")
            body = self.formula()
            self.expect("}")
            return Boxed(body, term)
        expected = {"pN", "bot", "top", "'('", "'~'", "xN", "cN", "'['", "'!'", "'?'"}
        if self.star:
            expected.add("'{'")
        raise self.fail(expected)

    def term(self) -> Term:
        t = self.tok
        if t.kind == "var":
            self.i += 1
            return Var(t.index)
        if t.kind == "const":
            self.i += 1
            return Const(t.index)
        if t.kind == "!":
            self.i += 1
            return Bang(self.term())
        if t.kind == "?":
            self.i += 1
            return Query(self.term())
        if t.kind == "[":
            self.i += 1
            left = self.term()
            op = self.tok.kind
            if op not in (".", "+"):
                raise self.fail({"'.'", "'+'"})
            self.i += 1
            right = self.term()
            self.expect("]")
            return App(left, right) if op == "." else Sum(left, right)
        raise self.fail({"xN", "cN", "'['", "'!'", "'?'"})

    def finish(self):
        if self.tok.kind != "eof":
            raise self.fail({"end of input"})


def parse_formula(text: str) -> Formula:
    """Parse one justification-logic formula."""
    p = _Parser(text, star=False)
    f = p.formula()
    p.finish()
    return f


def parse_star_formula(text: str) -> Formula:
    """Parse a propositional formula whose atoms may be braced star atoms ``{t:phi}``."""
    p = _Parser(text, star=True)
    f = p.formula()
    p.finish()
    return f


def parse_term(text: str) -> Term:
    p = _Parser(text, star=False)
    t = p.term()
    p.finish()
    return t


def parse_term_prefix(text: str) -> tuple[Term, str]:
    """Parse a term at the start of ``text`` and return it with the unparsed remainder."""
    p = _Parser(text, star=False)
    t = p.term()
    return t, text[p.tok.pos:]


def parse_lines(text: str) -> list[Formula]:
    """One formula per non-blank line; ``#`` starts a comment."""
    out = []
    for line in text.splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(parse_formula(line))
    return out


# ---------------------------------------------------------- star translation


def star(f: Formula) -> Formula:
    if isinstance(f, (Bottom, Atom)):
        return f
    if isinstance(f, And):
        return And(star(f.left), star(f.right))
    if isinstance(f, Implies):
        return Implies(star(f.left), star(f.right))
    if isinstance(f, Just):
        return Boxed(f.body, f.term)
    raise TypeError(f"not a justification formula: {f!r}")


def unstar(f: Formula) -> Formula:
    if isinstance(f, (Bottom, Atom)):
        return f
    if isinstance(f, And):
        return And(unstar(f.left), unstar(f.right))
    if isinstance(f, Implies):
        return Implies(unstar(f.left), unstar(f.right))
    if isinstance(f, Boxed):
        return Just(f.term, f.body)
    raise TypeError(f"not a star formula: {f!r}")


# ------------------------------------------------------------------- helpers


def immediate_subformulas(f: Formula) -> tuple[Formula, ...]:
    if isinstance(f, (And, Implies)):
        return (f.left, f.right)
    if isinstance(f, Just):
        return (f.body,)
    return ()


def subformula_closure(fs: Iterable[Formula]) -> set[Formula]:
    seen: set[Formula] = set()
    stack = list(fs)
    while stack:
        f = stack.pop()
        if f in seen:
            continue
        seen.add(f)
        stack.extend(immediate_subformulas(f))
    return seen


def justification_pairs(fs: Iterable[Formula]) -> set[tuple[Term, Formula]]:
    """Every ``(t, phi)`` with ``t:phi`` a subformula of some member of ``fs``."""
    return {(f.term, f.body) for f in subformula_closure(fs) if isinstance(f, Just)}


def star_atoms(f: Formula) -> set[Formula]:
    """Atoms of a star formula, boxed ones included (not descending into boxes)."""
    out: set[Formula] = set()
    stack = [f]
    while stack:
        g = stack.pop()
        if isinstance(g, (Atom, Boxed)):
            out.add(g)
        elif isinstance(g, (And, Implies)):
            stack.append(g.left)
            stack.append(g.right)
        elif isinstance(g, Just):
            raise TypeError("star_atoms expects a star formula")
    return out


def atom_sort_key(a: Formula) -> tuple:
    if isinstance(a, Atom):
        return (0, a.index, "")
    return (1, 0, print_formula(a))


def is_star_formula(f: Formula) -> bool:
    return not any(isinstance(g, Just) for g in _walk(f))


def is_propositional(f: Formula) -> bool:
    return all(isinstance(g, (Bottom, Atom, And, Implies)) for g in _walk(f))


def _walk(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        if isinstance(g, (And, Implies)):
            stack.append(g.left)
            stack.append(g.right)
        # bodies of boxed atoms are opaque: do not descend


def depth(f: Formula) -> int:
    if isinstance(f, (And, Implies)):
        return 1 + max(depth(f.left), depth(f.right))
    if isinstance(f, Just):
        return 1 + depth(f.body)
    return 0


def term_size(t: Term) -> int:
    if isinstance(t, (App, Sum)):
        return 1 + term_size(t.left) + term_size(t.right)
    if isinstance(t, (Bang, Query)):
        return 1 + term_size(t.inner)
    return 1
