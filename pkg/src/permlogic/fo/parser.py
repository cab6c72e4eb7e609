"""Recursive-descent parser for sentence files.

Grammar, loosest binding first::

    iff     := imp ("<->" imp)*
    imp     := or ("->" imp)?
    or      := and ("|" and)*
    and     := unary ("&" unary)*
    unary   := "!" unary | ("A" | "E") var "." iff | primary
    primary := "(" iff ")" | "true" | "false" | var ("<P" | "<V" | "=") var

A quantifier body extends as far right as possible.  ``#`` starts a
comment that runs to the end of the line.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .syntax import (
    FALSE,
    TRUE,
    And,
    Atom,
    Exists,
    Forall,
    Formula,
    Not,
    Or,
    free_variables,
    iff,
    implies,
)

KEYWORDS = {"true", "false"}

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<comment>\#[^\n]*)
  | (?P<op><->|->|<P|<V|[=!&|().])
  | (?P<quant>[AE])(?![A-Za-z0-9_])
  | (?P<var>[a-z][a-z0-9_]*)
    """,
    re.VERBOSE,
)


class ParseError(ValueError):
    def __init__(self, message: str, position: int | None = None, expected=()):
        self.position = position
        self.expected = tuple(expected)
        detail = message
        if position is not None:
            detail += f" at offset {position}"
        if expected:
            detail += f" (expected {', '.join(self.expected)})"
        super().__init__(detail)


class UnboundVariableError(ParseError):
    def __init__(self, names):
        self.names = tuple(sorted(names))
        super().__init__(f"free variables {', '.join(self.names)}; a sentence must bind every variable")


@dataclass
class Token:
    kind: str
    text: str
    pos: int


def tokenize(text: str) -> list[Token]:
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind not in ("ws", "comment"):
            word = m.group()
            if kind == "var" and word in KEYWORDS:
                kind = "const"
            tokens.append(Token(kind, word, pos))
        pos = m.end()
    tokens.append(Token("eof", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def advance(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text: str) -> None:
        if not self.accept(text):
            self.fail([repr(text)])

    def fail(self, expected):
        t = self.tok
        found = "end of input" if t.kind == "eof" else repr(t.text)
        raise ParseError(f"unexpected {found}", t.pos, expected)

    def parse(self) -> Formula:
        f = self.iff()
        if self.tok.kind != "eof":
            self.fail(["'&'", "'|'", "'->'", "'<->'", "end of input"])
        return f

    def iff(self) -> Formula:
        f = self.imp()
        while self.accept("<->"):
            f = iff(f, self.imp())
        return f

    def imp(self) -> Formula:
        f = self.or_()
        if self.accept("->"):
            return implies(f, self.imp())
        return f

    def or_(self) -> Formula:
        f = self.and_()
        while self.accept("|"):
            f = Or(f, self.and_())
        return f

    def and_(self) -> Formula:
        f = self.unary()
        while self.accept("&"):
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        if self.accept("!"):
            return Not(self.unary())
        if self.tok.kind == "quant":
            q = self.advance().text
            if self.tok.kind != "var":
                self.fail(["variable"])
            var = self.advance().text
            self.expect(".")
            body = self.iff()
            return Forall(var, body) if q == "A" else Exists(var, body)
        return self.primary()

    def primary(self) -> Formula:
        if self.accept("("):
            f = self.iff()
            self.expect(")")
            return f
        if self.tok.kind == "const":
            return TRUE if self.advance().text == "true" else FALSE
        if self.tok.kind == "var":
            left = self.advance().text
            t = self.tok
            if t.kind == "op" and t.text in ("<P", "<V", "="):
                self.advance()
                if self.tok.kind != "var":
                    self.fail(["variable"])
                return Atom(left, t.text, self.advance().text)
            self.fail(["'<P'", "'<V'", "'='"])
        self.fail(["'('", "'!'", "'A'", "'E'", "variable", "'true'", "'false'"])


def parse_formula(text: str) -> Formula:
    """Parse text that may leave variables free."""
    return _Parser(text).parse()


def parse(text: str) -> Formula:
    """Parse a closed sentence; free variables are an error."""
    f = parse_formula(text)
    free = free_variables(f)
    if free:
        raise UnboundVariableError(free)
    return f


def load_sentence(path) -> Formula:
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())
