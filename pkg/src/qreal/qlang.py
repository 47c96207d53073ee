"""The statement language: AST, recursive-descent parser, pretty-printer.

Grammar (whitespace insignificant between tokens)::

    formula  = iff
    iff      = impl { "<->" impl }              (chains fold left)
    impl     = or [ "->" impl ]                 (right-associative)
    or       = and { "|" and }
    and      = unary { "&" unary }
    unary    = "~" unary | primary
    primary  = atom | equal | com | "(" formula ")"
    atom     = ident "in" "{" number { "," number } "}"
    equal    = "[" ident "=" ident "]"
    com      = "com" "(" ident "," ident { "," ident } ")"

Identifiers are ``[A-Za-z][A-Za-z0-9_]*``; ``in`` and ``com`` are reserved.
Numbers are decimal with optional sign, fraction and exponent.  ``->`` is
the Sasaki hook.  Parsing stops at the first error with a byte offset; the
printer emits the canonical form (minimal parentheses, shortest
round-trippable numbers), so ``parse(unparse(f))`` reproduces ``f``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Union

from .errors import ParseError

_IDENT_RE = re.compile(r"[A-Za-z][A-Za-z0-9_]*")
_NUMBER_RE = re.compile(r"[+-]?(?:\d+(?:\.\d*)?|\.\d+)(?:[eE][+-]?\d+)?")
_KEYWORDS = {"in", "com"}


def _canonical_values(values) -> tuple[float, ...]:
    vals = sorted({float(v) + 0.0 for v in values})
    if not vals:
        raise ValueError("atom value set must be nonempty")
    if not all(math.isfinite(v) for v in vals):
        raise ValueError("atom values must be finite")
    return tuple(vals)


def _check_ident(name: str) -> str:
    if not _IDENT_RE.fullmatch(name) or name in _KEYWORDS:
        raise ValueError(f"invalid observable identifier {name!r}")
    return name


@dataclass(frozen=True)
class Atom:
    """``A in {v1, ...}``: the observable's value lies in a finite set."""

    obs_id: str
    values: tuple[float, ...]

    def __post_init__(self):
        _check_ident(self.obs_id)
        object.__setattr__(self, "values", _canonical_values(self.values))


@dataclass(frozen=True)
class Not:
    operand: "Formula"


@dataclass(frozen=True)
class And:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Or:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Sasaki:
    """The conditional ``->`` (Sasaki hook)."""

    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Iff:
    left: "Formula"
    right: "Formula"


@dataclass(frozen=True)
class Equal:
    """``[A = B]``: the two observables have identical values."""

    left_id: str
    right_id: str

    def __post_init__(self):
        _check_ident(self.left_id)
        _check_ident(self.right_id)


@dataclass(frozen=True)
class Com:
    """``com(A, B, ...)``: the observables are jointly determinate."""

    obs_ids: tuple[str, ...]

    def __post_init__(self):
        object.__setattr__(self, "obs_ids", tuple(self.obs_ids))
        if len(self.obs_ids) < 2:
            raise ValueError("com requires at least two observables")
        for name in self.obs_ids:
            _check_ident(name)


Formula = Union[Atom, Not, And, Or, Sasaki, Iff, Equal, Com]


@dataclass(frozen=True)
class _Token:
    kind: str  # "ident", "number", "end", or the literal symbol
    text: str
    pos: int  # character offset into the source


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        if text.startswith("<->", i):
            tokens.append(_Token("<->", "<->", i))
            i += 3
            continue
        if text.startswith("->", i):
            tokens.append(_Token("->", "->", i))
            i += 2
            continue
        m = _NUMBER_RE.match(text, i)
        if m:
            tokens.append(_Token("number", m.group(), i))
            i = m.end()
            continue
        m = _IDENT_RE.match(text, i)
        if m:
            word = m.group()
            tokens.append(_Token(word if word in _KEYWORDS else "ident", word, i))
            i = m.end()
            continue
        if ch in "(){}[],=~&|":
            tokens.append(_Token(ch, ch, i))
            i += 1
            continue
        raise ParseError(_byte_offset(text, i), "a token", repr(ch))
    tokens.append(_Token("end", "end of input", n))
    return tokens


def _byte_offset(text: str, char_pos: int) -> int:
    return len(text[:char_pos].encode("utf-8"))


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self) -> _Token:
        return self.tokens[self.index]

    def advance(self) -> _Token:
        tok = self.tokens[self.index]
        self.index += 1
        return tok

    def fail(self, expected: str):
        tok = self.peek()
        found = "end of input" if tok.kind == "end" else tok.text
        raise ParseError(_byte_offset(self.text, tok.pos), expected, found)

    def expect(self, kind: str, expected: str) -> _Token:
        if self.peek().kind != kind:
            self.fail(expected)
        return self.advance()

    def parse_formula(self) -> Formula:
        node = self.parse_iff()
        if self.peek().kind != "end":
            self.fail("end of input")
        return node

    def parse_iff(self) -> Formula:
        node = self.parse_impl()
        while self.peek().kind == "<->":
            self.advance()
            node = Iff(node, self.parse_impl())
        return node

    def parse_impl(self) -> Formula:
        node = self.parse_or()
        if self.peek().kind == "->":
            self.advance()
            return Sasaki(node, self.parse_impl())
        return node

    def parse_or(self) -> Formula:
        node = self.parse_and()
        while self.peek().kind == "|":
            self.advance()
            node = Or(node, self.parse_and())
        return node

    def parse_and(self) -> Formula:
        node = self.parse_unary()
        while self.peek().kind == "&":
            self.advance()
            node = And(node, self.parse_unary())
        return node

    def parse_unary(self) -> Formula:
        if self.peek().kind == "~":
            self.advance()
            return Not(self.parse_unary())
        return self.parse_primary()

    def parse_primary(self) -> Formula:
        kind = self.peek().kind
        if kind == "(":
            self.advance()
            node = self.parse_iff()
            self.expect(")", ")")
            return node
        if kind == "[":
            return self.parse_equal()
        if kind == "com":
            return self.parse_com()
        if kind == "ident":
            return self.parse_atom()
        self.fail("a formula")

    def parse_atom(self) -> Formula:
        name = self.expect("ident", "an identifier").text
        self.expect("in", "in")
        self.expect("{", "{")
        values = [self.parse_number()]
        while self.peek().kind == ",":
            self.advance()
            values.append(self.parse_number())
        self.expect("}", "}")
        return Atom(name, tuple(values))

    def parse_number(self) -> float:
        tok = self.expect("number", "a number")
        value = float(tok.text)
        if not math.isfinite(value):
            raise ParseError(_byte_offset(self.text, tok.pos), "a finite number", tok.text)
        return value

    def parse_equal(self) -> Formula:
        self.expect("[", "[")
        left = self.expect("ident", "an identifier").text
        self.expect("=", "=")
        right = self.expect("ident", "an identifier").text
        self.expect("]", "]")
        return Equal(left, right)

    def parse_com(self) -> Formula:
        self.expect("com", "com")
        self.expect("(", "(")
        names = [self.expect("ident", "an identifier").text]
        self.expect(",", ",")
        names.append(self.expect("ident", "an identifier").text)
        while self.peek().kind == ",":
            self.advance()
            names.append(self.expect("ident", "an identifier").text)
        self.expect(")", ")")
        return Com(tuple(names))


def parse(text: str) -> Formula:
    """Parse a formula, raising :class:`ParseError` on the first failure."""
    return _Parser(text).parse_formula()


def format_number(value: float) -> str:
    """Shortest decimal that round-trips through ``float``."""
    s = repr(float(value))
    return s[:-2] if s.endswith(".0") else s


_PREC = {Iff: 1, Sasaki: 2, Or: 3, And: 4, Not: 5}


def unparse(formula: Formula) -> str:
    """Canonical text with minimal parentheses; inverse of :func:`parse`."""
    return _render(formula, 0)


def _render(node: Formula, min_prec: int) -> str:
    if isinstance(node, Atom):
        return f"{node.obs_id} in {{{', '.join(format_number(v) for v in node.values)}}}"
    if isinstance(node, Equal):
        return f"[{node.left_id} = {node.right_id}]"
    if isinstance(node, Com):
        return f"com({', '.join(node.obs_ids)})"
    if isinstance(node, Not):
        return _wrap(f"~{_render(node.operand, 5)}", 5, min_prec)
    prec = _PREC[type(node)]
    symbol = {Iff: "<->", Sasaki: "->", Or: "|", And: "&"}[type(node)]
    if isinstance(node, Sasaki):  # right-associative
        text = f"{_render(node.left, prec + 1)} {symbol} {_render(node.right, prec)}"
    else:  # left-associative chains
        text = f"{_render(node.left, prec)} {symbol} {_render(node.right, prec + 1)}"
    return _wrap(text, prec, min_prec)


def _wrap(text: str, prec: int, min_prec: int) -> str:
    return f"({text})" if prec < min_prec else text


def observable_ids(formula: Formula) -> tuple[str, ...]:
    """All observable identifiers mentioned, in first-appearance order."""
    seen: dict[str, None] = {}

    def walk(node: Formula):
        if isinstance(node, Atom):
            seen.setdefault(node.obs_id)
        elif isinstance(node, Equal):
            seen.setdefault(node.left_id)
            seen.setdefault(node.right_id)
        elif isinstance(node, Com):
            for name in node.obs_ids:
                seen.setdefault(name)
        elif isinstance(node, Not):
            walk(node.operand)
        else:
            walk(node.left)
            walk(node.right)

    walk(formula)
    return tuple(seen)
