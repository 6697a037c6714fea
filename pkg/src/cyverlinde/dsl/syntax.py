"""Lexer, parser and arity checker for cobordism words.

Grammar::

    expr := term { "." term }
    term := atom { "#" atom }
    atom := GENERATOR | "(" expr ")"

``f . g`` is ``f`` after ``g``; ``#`` is disjoint union.  A chain
``a . b . c`` is built as ``Compose(a, Compose(b, c))``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Union

ARITY: dict[str, tuple[int, int]] = {
    "Y1": (2, 1),
    "Y2": (2, 1),
    "coY1": (1, 2),
    "coY2": (1, 2),
    "i1": (0, 1),
    "i2": (0, 1),
    "ci1": (1, 0),
    "ci2": (1, 0),
    "Psi": (1, 1),
    "PsiBar": (1, 1),
    "K": (1, 1),
    "Id": (1, 1),
    "P": (2, 2),
}

GENERATORS = tuple(ARITY)


class DSLError(ValueError):
    def __init__(self, message: str, pos: int | None = None):
        self.pos = pos
        super().__init__(message if pos is None else f"{message} (at position {pos})")


class LexError(DSLError):
    pass


class ParseError(DSLError):
    pass


class ArityError(DSLError):
    pass


@dataclass(frozen=True)
class Gen:
    name: str
    pos: int = 0

    def __str__(self):
        return self.name


@dataclass(frozen=True)
class Compose:
    left: "Expr"
    right: "Expr"
    pos: int = 0

    def __str__(self):
        left = str(self.left) if isinstance(self.left, Gen) else f"({self.left})"
        right = f"({self.right})" if isinstance(self.right, Tensor) else str(self.right)
        return f"{left} . {right}"


@dataclass(frozen=True)
class Tensor:
    left: "Expr"
    right: "Expr"
    pos: int = 0

    def __str__(self):
        left = str(self.left) if not isinstance(self.left, Compose) else f"({self.left})"
        right = str(self.right) if isinstance(self.right, Gen) else f"({self.right})"
        return f"{left} # {right}"


Expr = Union[Gen, Compose, Tensor]


def structurally_equal(a: Expr, b: Expr) -> bool:
    """Equality ignoring source positions."""
    if type(a) is not type(b):
        return False
    if isinstance(a, Gen):
        return a.name == b.name
    return structurally_equal(a.left, b.left) and structurally_equal(a.right, b.right)


@dataclass(frozen=True)
class Token:
    kind: str  # GEN, DOT, HASH, LPAREN, RPAREN, EOF
    text: str
    pos: int


_PUNCT = {".": "DOT", "#": "HASH", "(": "LPAREN", ")": "RPAREN"}


def tokenize(text: str) -> list[Token]:
    tokens, pos = [], 0
    while pos < len(text):
        ch = text[pos]
        if ch.isspace():
            pos += 1
        elif ch in _PUNCT:
            tokens.append(Token(_PUNCT[ch], ch, pos))
            pos += 1
        elif ch.isalpha():
            start = pos
            while pos < len(text) and (text[pos].isalnum() or text[pos] == "_"):
                pos += 1
            word = text[start:pos]
            if word not in ARITY:
                raise LexError(f"unknown generator {word!r}", start)
            tokens.append(Token("GEN", word, start))
        else:
            raise LexError(f"unexpected character {ch!r}", pos)
    tokens.append(Token("EOF", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.i = 0

    def peek(self) -> Token:
        return self.tokens[self.i]

    def take(self) -> Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expr(self) -> Expr:
        terms = [self.term()]
        ops = []
        while self.peek().kind == "DOT":
            ops.append(self.take().pos)
            terms.append(self.term())
        out = terms[-1]
        for t, p in zip(reversed(terms[:-1]), reversed(ops)):
            out = Compose(t, out, p)
        return out

    def term(self) -> Expr:
        out = self.atom()
        while self.peek().kind == "HASH":
            p = self.take().pos
            out = Tensor(out, self.atom(), p)
        return out

    def atom(self) -> Expr:
        tok = self.take()
        if tok.kind == "GEN":
            return Gen(tok.text, tok.pos)
        if tok.kind == "LPAREN":
            inner = self.expr()
            close = self.take()
            if close.kind != "RPAREN":
                where = "end of input" if close.kind == "EOF" else repr(close.text)
                raise ParseError(f"expected ')' to close '(' at {tok.pos}, found {where}", close.pos)
            return inner
        if tok.kind == "EOF":
            raise ParseError("unexpected end of input", tok.pos)
        raise ParseError(f"unexpected {tok.text!r}", tok.pos)


def parse(text: str) -> Expr:
    p = _Parser(tokenize(text))
    if p.peek().kind == "EOF":
        raise ParseError("empty expression", 0)
    out = p.expr()
    tail = p.peek()
    if tail.kind != "EOF":
        raise ParseError(f"unexpected {tail.text!r}", tail.pos)
    return out


def typecheck(expr: Expr) -> tuple[int, int]:
    """Return ``(inputs, outputs)`` or raise ArityError at the offending Compose."""
    if isinstance(expr, Gen):
        return ARITY[expr.name]
    a_in, a_out = typecheck(expr.left)
    b_in, b_out = typecheck(expr.right)
    if isinstance(expr, Tensor):
        return a_in + b_in, a_out + b_out
    if b_out != a_in:
        raise ArityError(
            f"cannot compose {expr.left} ({a_in}->{a_out}) after {expr.right} ({b_in}->{b_out})",
            expr.pos,
        )
    return b_in, a_out


def as_expr(e: Expr | str) -> Expr:
    return parse(e) if isinstance(e, str) else e
