"""Expression AST, parser, and pretty-printer for vector-field components.

The grammar is deliberately small: real literals, declared state variables
and parameters, ``+ - * / ^`` with unary minus, parentheses, and the
convenience functions ``sin``, ``cos``, ``exp``.  Precedence from loose to
tight: ``+,-`` < ``*,/`` < unary ``-`` < ``^``; the additive and
multiplicative operators associate left, ``^`` associates right, and the
exponent position accepts a leading unary minus (``x^-2``).
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import ParseError

FUNCTIONS = ("sin", "cos", "exp")


@dataclass(frozen=True)
class Expr:
    pass


@dataclass(frozen=True)
class Literal(Expr):
    value: float


@dataclass(frozen=True)
class Var(Expr):
    name: str
    index: int


@dataclass(frozen=True)
class Param(Expr):
    name: str
    index: int


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class BinOp(Expr):
    op: str  # one of "+", "-", "*", "/", "^"
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Call(Expr):
    func: str
    arg: Expr


_TOKEN_RE = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^(),]))"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # "num", "ident", "op", "end"
    text: str
    line: int
    column: int


def _tokenize(text: str, line_offset: int = 1) -> list[_Token]:
    tokens: list[_Token] = []
    for lineno, line in enumerate(text.split("\n"), start=line_offset):
        pos = 0
        while pos < len(line):
            if line[pos].isspace():
                pos += 1
                continue
            m = _TOKEN_RE.match(line, pos)
            if m is None or m.start() != pos:
                raise ParseError(
                    f"unexpected character {line[pos]!r}", lineno, pos + 1
                )
            kind = m.lastgroup
            tok_start = m.start(kind)
            tokens.append(_Token(kind, m.group(kind), lineno, tok_start + 1))
            pos = m.end()
    tokens.append(_Token("end", "", line_offset + text.count("\n"), len(text) + 1))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token], states: dict[str, int],
                 params: dict[str, int]):
        self.tokens = tokens
        self.pos = 0
        self.states = states
        self.params = params

    def peek(self) -> _Token:
        return self.tokens[self.pos]

    def advance(self) -> _Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def expect_op(self, op: str) -> _Token:
        tok = self.peek()
        if tok.kind != "op" or tok.text != op:
            raise ParseError(
                f"expected {op!r} but found {tok.text or 'end of input'!r}",
                tok.line, tok.column,
            )
        return self.advance()

    def parse(self) -> Expr:
        e = self.expr()
        tok = self.peek()
        if tok.kind != "end":
            msg = "unbalanced parenthesis" if tok.text == ")" else (
                f"unexpected token {tok.text!r}"
            )
            raise ParseError(msg, tok.line, tok.column)
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.peek().kind == "op" and self.peek().text in "+-":
            op = self.advance().text
            e = BinOp(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.unary()
        while self.peek().kind == "op" and self.peek().text in "*/":
            op = self.advance().text
            e = BinOp(op, e, self.unary())
        return e

    def unary(self) -> Expr:
        tok = self.peek()
        if tok.kind == "op" and tok.text == "-":
            self.advance()
            return Neg(self.unary())
        return self.power()

    def power(self) -> Expr:
        base = self.atom()
        tok = self.peek()
        if tok.kind == "op" and tok.text == "^":
            self.advance()
            return BinOp("^", base, self.unary())
        return base

    def atom(self) -> Expr:
        tok = self.advance()
        if tok.kind == "num":
            return Literal(float(tok.text))
        if tok.kind == "ident":
            name = tok.text
            if name in FUNCTIONS:
                self.expect_op("(")
                self.advance()
                arg = self.expr()
                closing = self.peek()
                if closing.kind != "op" or closing.text != ")":
                    raise ParseError(
                        "unbalanced parenthesis", closing.line, closing.column
                    )
                self.advance()
                return Call(name, arg)
            if name in self.states:
                return Var(name, self.states[name])
            if name in self.params:
                return Param(name, self.params[name])
            raise ParseError(f"undeclared identifier {name!r}", tok.line, tok.column)
        if tok.kind == "op" and tok.text == "(":
            e = self.expr()
            closing = self.peek()
            if closing.kind != "op" or closing.text != ")":
                raise ParseError("unbalanced parenthesis", closing.line, closing.column)
            self.advance()
            return e
        if tok.kind == "end":
            raise ParseError("unexpected end of input", tok.line, tok.column)
        raise ParseError(f"unexpected token {tok.text!r}", tok.line, tok.column)


def parse_expression(text: str, states, params=(), line_offset: int = 1) -> Expr:
    """Parse a single expression over the declared state/parameter names."""
    state_map = {name: i for i, name in enumerate(states)}
    param_map = {name: i for i, name in enumerate(params)}
    for name in state_map:
        if name in FUNCTIONS:
            raise ParseError(f"{name!r} is a reserved function name")
    for name in param_map:
        if name in FUNCTIONS or name in state_map:
            raise ParseError(f"duplicate or reserved name {name!r}")
    tokens = _tokenize(text, line_offset)
    return _Parser(tokens, state_map, param_map).parse()


# --- pretty-printer --------------------------------------------------------

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _fmt_literal(v: float) -> str:
    if v != v or v in (float("inf"), float("-inf")):
        raise ValueError(f"cannot print non-finite literal {v}")
    if v == 0.0:
        return "0.0"
    if v.is_integer() and abs(v) < 1e16:
        return str(int(v))
    return repr(v)


def _print(e: Expr, ctx: int) -> str:
    if isinstance(e, Literal):
        if e.value < 0.0:
            raise ValueError("negative literals are represented as Neg(Literal)")
        return _fmt_literal(e.value)
    if isinstance(e, (Var, Param)):
        return e.name
    if isinstance(e, Call):
        return f"{e.func}({_print(e.arg, _PREC_ADD)})"
    if isinstance(e, Neg):
        s = "-" + _print(e.operand, _PREC_POW)
        return f"({s})" if ctx > _PREC_NEG else s
    assert isinstance(e, BinOp)
    if e.op in "+-":
        prec, ls, rs = _PREC_ADD, _PREC_ADD, _PREC_ADD + 1
        s = f"{_print(e.left, ls)} {e.op} {_print(e.right, rs)}"
    elif e.op in "*/":
        prec, ls, rs = _PREC_MUL, _PREC_MUL, _PREC_MUL + 1
        s = f"{_print(e.left, ls)}{e.op}{_print(e.right, rs)}"
    else:  # "^" is right-associative and its exponent admits unary minus
        prec, ls, rs = _PREC_POW, _PREC_ATOM, _PREC_NEG
        s = f"{_print(e.left, ls)}^{_print(e.right, rs)}"
    return f"({s})" if ctx > prec else s


def pretty(e: Expr) -> str:
    """Render the expression with the minimal parentheses needed so that
    re-parsing reproduces the tree exactly."""
    return _print(e, _PREC_ADD)
