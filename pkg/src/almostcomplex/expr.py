"""A small complex-expression language over real coordinates.

Grammar (whitespace insignificant)::

    expr   := term (('+'|'-') term)*
    term   := factor (('*'|'/') factor)*
    factor := atom ('^' integer)? | '-' factor
    atom   := number | 'I' | ident | func '(' expr ')' | '(' expr ')'
    ident  := 'x'digits | 'z'digits | 'zbar'digits
    func   := exp | sin | cos | re | im | conj | abs2

``x_k`` is the k-th real coordinate (1-based).  The complex shorthands use
the fixed pairing ``z_k = x_{2k-1} + I*x_{2k}`` and ``zbar_k = conj(z_k)``.
Exponents may carry a leading minus sign (``x1^-2``).

Evaluation produces :class:`~almostcomplex.jet.ScalarJet` values with exact
first and second derivatives.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Optional, Union

import numpy as np

from .errors import EvaluationError, ParseError
from .jet import ScalarField, ScalarJet, coordinate_jet

__all__ = [
    "Expr", "Num", "Imag", "Var", "ZVar", "BinOp", "Neg", "Pow", "Call",
    "FUNCTIONS", "parse", "pretty", "eval_jet", "conj_expr",
]

FUNCTIONS = ("exp", "sin", "cos", "re", "im", "conj", "abs2")


class Expr:
    """Base class of the AST.  Nodes are frozen dataclasses."""

    def field(self, dim: int) -> ScalarField:
        check_dimension(self, dim)
        node = self
        return ScalarField(dim, lambda p, order: _eval(node, p, order), label=pretty(self))

    def __str__(self) -> str:
        return pretty(self)


@dataclass(frozen=True)
class Num(Expr):
    value: float


@dataclass(frozen=True)
class Imag(Expr):
    pass


@dataclass(frozen=True)
class Var(Expr):
    index: int  # 1-based real coordinate


@dataclass(frozen=True)
class ZVar(Expr):
    index: int  # 1-based complex coordinate
    bar: bool = False


@dataclass(frozen=True)
class BinOp(Expr):
    op: str
    left: Expr
    right: Expr


@dataclass(frozen=True)
class Neg(Expr):
    operand: Expr


@dataclass(frozen=True)
class Pow(Expr):
    base: Expr
    exponent: int


@dataclass(frozen=True)
class Call(Expr):
    func: str
    arg: Expr


# -- tokenizer ---------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:"
    r"(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z0-9_]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)
_IDENT = re.compile(r"(zbar|z|x)(\d+)$")


@dataclass(frozen=True)
class _Tok:
    kind: str  # num | ident | op | end
    text: str
    pos: int


def _tokenize(src: str):
    pos, toks = 0, []
    n = len(src)
    while pos < n:
        if src[pos:].strip() == "":
            break
        m = _TOKEN.match(src, pos)
        if m is None or m.end() == pos:
            start = pos + (len(src[pos:]) - len(src[pos:].lstrip()))
            raise ParseError(f"unexpected character {src[start]!r}", _byte_offset(src, start),
                             ("number", "identifier", "operator"), src)
        kind = m.lastgroup
        toks.append(_Tok(kind, m.group(kind), m.start(kind)))
        pos = m.end()
    toks.append(_Tok("end", "", len(src)))
    return toks


def _byte_offset(src: str, char_pos: int) -> int:
    return len(src[:char_pos].encode("utf-8"))


class _Parser:
    def __init__(self, src: str, dim: int, aliases: Mapping[str, int]):
        self.src = src
        self.dim = dim
        self.aliases = dict(aliases)
        self.toks = _tokenize(src)
        self.i = 0

    @property
    def tok(self) -> _Tok:
        return self.toks[self.i]

    def error(self, message, expected=()):
        t = self.tok
        found = "end of input" if t.kind == "end" else repr(t.text)
        raise ParseError(f"{message}, found {found}", _byte_offset(self.src, t.pos), expected, self.src)

    def accept(self, text) -> bool:
        if self.tok.kind == "op" and self.tok.text == text:
            self.i += 1
            return True
        return False

    def expect(self, text):
        if not self.accept(text):
            self.error("syntax error", (repr(text),))

    def parse(self) -> Expr:
        e = self.expr()
        if self.tok.kind != "end":
            self.error("trailing input", ("'+'", "'-'", "'*'", "'/'", "'^'", "end of input"))
        return e

    def expr(self) -> Expr:
        e = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.tok.text
            self.i += 1
            e = BinOp(op, e, self.term())
        return e

    def term(self) -> Expr:
        e = self.factor()
        while self.tok.kind == "op" and self.tok.text in "*/":
            op = self.tok.text
            self.i += 1
            e = BinOp(op, e, self.factor())
        return e

    def factor(self) -> Expr:
        if self.accept("-"):
            return Neg(self.factor())
        base = self.atom()
        if self.accept("^"):
            sign = -1 if self.accept("-") else 1
            t = self.tok
            if t.kind != "num" or not t.text.isdigit():
                self.error("integer exponent required", ("integer",))
            self.i += 1
            return Pow(base, sign * int(t.text))
        return base

    def atom(self) -> Expr:
        t = self.tok
        if t.kind == "num":
            self.i += 1
            return Num(float(t.text))
        if t.kind == "op" and t.text == "(":
            self.i += 1
            e = self.expr()
            self.expect(")")
            return e
        if t.kind == "ident":
            self.i += 1
            name = t.text
            if name in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(name, arg)
            if name == "I":
                return Imag()
            if name in self.aliases:
                return Var(self.aliases[name])
            m = _IDENT.match(name)
            if m is None:
                self.i -= 1
                self.error("unknown identifier", ("x<k>", "z<k>", "zbar<k>", "I") + FUNCTIONS)
            kind, k = m.group(1), int(m.group(2))
            limit = self.dim if kind == "x" else self.dim // 2
            if not 1 <= k <= limit:
                self.i -= 1
                self.error(f"variable index out of range (ambient dimension {self.dim})")
            if kind == "x":
                return Var(k)
            return ZVar(k, bar=(kind == "zbar"))
        self.error("syntax error", ("number", "identifier", "'('", "'-'"))


def parse(source: str, ambient_dim: int, aliases: Optional[Mapping[str, int]] = None) -> Expr:
    """Parse ``source`` into an AST for the ambient space R^ambient_dim.

    ``aliases`` maps extra identifier names to 1-based real coordinates
    (e.g. ``{"u": 1, "v": 2}`` for surface parametrisations).
    """
    if ambient_dim < 2 or ambient_dim % 2:
        raise ValueError("ambient dimension must be even and at least 2")
    return _Parser(source, ambient_dim, aliases or {}).parse()


def check_dimension(e: Expr, dim: int) -> None:
    for node in _walk(e):
        if isinstance(node, Var) and not 1 <= node.index <= dim:
            raise ValueError(f"x{node.index} outside ambient dimension {dim}")
        if isinstance(node, ZVar) and not 1 <= node.index <= dim // 2:
            raise ValueError(f"z{node.index} outside ambient dimension {dim}")


def _walk(e: Expr):
    yield e
    if isinstance(e, BinOp):
        yield from _walk(e.left)
        yield from _walk(e.right)
    elif isinstance(e, (Neg, Call)):
        yield from _walk(e.operand if isinstance(e, Neg) else e.arg)
    elif isinstance(e, Pow):
        yield from _walk(e.base)


# -- printing ----------------------------------------------------------------

def pretty(e: Expr) -> str:
    """Canonical, fully parenthesised text that parses back to the same tree."""
    if isinstance(e, Num):
        return repr(float(e.value))
    if isinstance(e, Imag):
        return "I"
    if isinstance(e, Var):
        return f"x{e.index}"
    if isinstance(e, ZVar):
        return f"{'zbar' if e.bar else 'z'}{e.index}"
    if isinstance(e, BinOp):
        return f"({pretty(e.left)} {e.op} {pretty(e.right)})"
    if isinstance(e, Neg):
        return f"-{pretty(e.operand)}"
    if isinstance(e, Pow):
        base = pretty(e.base)
        if isinstance(e.base, (Neg, Pow)) or (isinstance(e.base, Num) and e.base.value < 0):
            base = f"({base})"
        return f"{base}^{e.exponent}"
    if isinstance(e, Call):
        return f"{e.func}({pretty(e.arg)})"
    raise TypeError(f"not an expression node: {e!r}")


def conj_expr(e: Expr) -> Expr:
    return Call("conj", e)


# -- evaluation --------------------------------------------------------------

def eval_jet(e: Expr, p, order: int = 2) -> ScalarJet:
    """Value, gradient and Hessian of ``e`` at the real point ``p``."""
    p = np.asarray(p, dtype=float)
    check_dimension(e, len(p))
    return _eval(e, p, order)


def _eval(e: Expr, p: np.ndarray, order: int) -> ScalarJet:
    if isinstance(e, Num):
        return ScalarJet.constant(e.value, len(p), order)
    if isinstance(e, Imag):
        return ScalarJet.constant(1j, len(p), order)
    if isinstance(e, Var):
        return coordinate_jet(p, e.index - 1, order)
    if isinstance(e, ZVar):
        k = 2 * (e.index - 1)
        im = coordinate_jet(p, k + 1, order) * 1j
        return coordinate_jet(p, k, order) + (-im if e.bar else im)
    if isinstance(e, BinOp):
        a, b = _eval(e.left, p, order), _eval(e.right, p, order)
        if e.op == "+":
            return a + b
        if e.op == "-":
            return a - b
        if e.op == "*":
            return a * b
        try:
            return a / b
        except EvaluationError as exc:
            raise EvaluationError(str(exc), pretty(e)) from None
    if isinstance(e, Neg):
        return -_eval(e.operand, p, order)
    if isinstance(e, Pow):
        try:
            return _eval(e.base, p, order).ipow(e.exponent)
        except EvaluationError as exc:
            raise EvaluationError(str(exc), pretty(e)) from None
    if isinstance(e, Call):
        a = _eval(e.arg, p, order)
        if e.func == "exp":
            return a.exp()
        if e.func == "sin":
            return a.sin()
        if e.func == "cos":
            return a.cos()
        if e.func == "re":
            return a.real
        if e.func == "im":
            return a.imag
        if e.func == "conj":
            return a.conj()
        if e.func == "abs2":
            return a.abs2()
    raise TypeError(f"not an expression node: {e!r}")


ExprLike = Union[str, Expr]
