"""Integrand expressions: parsing, evaluation, symbolic differentiation.

The accepted language covers exactly the integrand corpus: arithmetic,
``exp``, ``ln``, and the truncated power helper ``plus`` with
``plus(u) = max(u, 0)``, so ``plus(x-0.6)^7`` is the usual (x-0.6)_+^7.

Grammar (whitespace insignificant, ``^`` right-associative, unary minus
binds looser than ``^``)::

    expr  := term (('+'|'-') term)*
    term  := unary (('*'|'/') unary)*
    unary := '-' unary | power
    power := atom ('^' unary)?
    atom  := NUMBER | 'x' | '(' expr ')' | ('exp'|'ln'|'plus') '(' expr ')'

Numeric literals are decimal with an optional exponent and are kept as exact
`Fraction` values, so evaluation under any precision context converts them
at full precision.  Exponents must fold to a constant at parse time; only
integer exponents are differentiable.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Union

from .scalars import DOUBLE


class ExprError(Exception):
    """Base class for all expression errors."""


@dataclass
class SourceSpan:
    """Byte offsets (start, end) of a source fragment."""

    start: int
    end: int


class ExprSyntaxError(ExprError):
    def __init__(self, message: str, span: SourceSpan):
        super().__init__(f"{message} (at bytes {span.start}..{span.end})")
        self.message = message
        self.span = span


class UnknownIdentifierError(ExprSyntaxError):
    def __init__(self, name: str, span: SourceSpan):
        super().__init__(f"unknown identifier {name!r}", span)
        self.name = name


class DomainError(ExprError, ArithmeticError):
    """Evaluation left the function's domain; carries the abscissa."""

    def __init__(self, message: str, abscissa):
        super().__init__(f"{message} (at x = {abscissa})")
        self.message = message
        self.abscissa = abscissa


class NotDifferentiable(ExprError):
    pass


# --------------------------------------------------------------------------
# Expression nodes


@dataclass(frozen=True)
class Constant:
    value: Fraction
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True)
class Variable:
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True)
class Add:
    left: "ExprNode"
    right: "ExprNode"
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True)
class Sub:
    left: "ExprNode"
    right: "ExprNode"
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True)
class Mul:
    left: "ExprNode"
    right: "ExprNode"
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True)
class Div:
    left: "ExprNode"
    right: "ExprNode"
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True)
class Neg:
    child: "ExprNode"
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True)
class Pow:
    base: "ExprNode"
    exponent: Fraction
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True)
class Exp:
    child: "ExprNode"
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True)
class Ln:
    child: "ExprNode"
    span: Optional[SourceSpan] = field(default=None, compare=False)


@dataclass(frozen=True)
class Plus:
    child: "ExprNode"
    span: Optional[SourceSpan] = field(default=None, compare=False)


ExprNode = Union[Constant, Variable, Add, Sub, Mul, Div, Neg, Pow, Exp, Ln, Plus]

_FOLD_POW_LIMIT = 512  # don't fold astronomically large constant powers


# Smart constructors: fold literal-only subtrees exactly (and nothing else).


def _mk_neg(c, span=None):
    if isinstance(c, Constant):
        return Constant(-c.value, span)
    return Neg(c, span)


def _mk_add(l, r, span=None):
    if isinstance(l, Constant) and isinstance(r, Constant):
        return Constant(l.value + r.value, span)
    return Add(l, r, span)


def _mk_sub(l, r, span=None):
    if isinstance(l, Constant) and isinstance(r, Constant):
        return Constant(l.value - r.value, span)
    return Sub(l, r, span)


def _mk_mul(l, r, span=None):
    if isinstance(l, Constant) and isinstance(r, Constant):
        return Constant(l.value * r.value, span)
    return Mul(l, r, span)


def _mk_div(l, r, span=None):
    if isinstance(l, Constant) and isinstance(r, Constant) and r.value != 0:
        return Constant(l.value / r.value, span)
    return Div(l, r, span)


def _mk_pow(base, exponent: Fraction, span=None):
    if (
        isinstance(base, Constant)
        and exponent.denominator == 1
        and abs(exponent.numerator) <= _FOLD_POW_LIMIT
        and not (base.value == 0 and exponent < 0)
    ):
        return Constant(base.value ** int(exponent), span)
    return Pow(base, exponent, span)


def _mk_plus(c, span=None):
    if isinstance(c, Constant):
        return Constant(max(c.value, Fraction(0)), span)
    return Plus(c, span)


# --------------------------------------------------------------------------
# Lexer / parser

_TOKEN_RE = re.compile(
    r"\s*(?:(?P<number>\d+(?:\.\d+)?(?:[eE][+-]?\d+)?|\.\d+(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)

_FUNCTIONS = {"exp": Exp, "ln": Ln, "plus": Plus}


@dataclass
class _Token:
    kind: str  # 'number' | 'ident' | one of '+-*/^()' | 'eof'
    text: str
    span: SourceSpan


def _tokenize(text: str) -> list[_Token]:
    tokens = []
    pos = 0
    byte_pos = 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            stripped = text[pos:].lstrip()
            if not stripped:
                break
            bad_at = len(text) - len(stripped)
            start = len(text[:bad_at].encode())
            raise ExprSyntaxError(
                f"unexpected character {stripped[0]!r}",
                SourceSpan(start, start + len(stripped[0].encode())),
            )
        start = byte_pos + len(text[pos : m.start(m.lastgroup)].encode())
        end = start + len(m.group(m.lastgroup).encode())
        kind = m.lastgroup if m.lastgroup != "op" else m.group("op")
        tokens.append(_Token(kind, m.group(m.lastgroup), SourceSpan(start, end)))
        byte_pos += len(text[pos : m.end()].encode())
        pos = m.end()
    tokens.append(_Token("eof", "", SourceSpan(byte_pos, byte_pos)))
    return tokens


class _Parser:
    def __init__(self, tokens: list[_Token]):
        self.tokens = tokens
        self.i = 0

    @property
    def cur(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.cur
        self.i += 1
        return tok

    def expect(self, kind: str, what: str) -> _Token:
        if self.cur.kind != kind:
            found = repr(self.cur.text) if self.cur.kind != "eof" else "end of input"
            raise ExprSyntaxError(f"expected {what} but found {found}", self.cur.span)
        return self.advance()

    def parse_expr(self):
        node = self.parse_term()
        while self.cur.kind in ("+", "-"):
            op = self.advance()
            rhs = self.parse_term()
            mk = _mk_add if op.kind == "+" else _mk_sub
            node = mk(node, rhs, SourceSpan(_span_of(node).start, _span_of(rhs).end))
        return node

    def parse_term(self):
        node = self.parse_unary()
        while self.cur.kind in ("*", "/"):
            op = self.advance()
            rhs = self.parse_unary()
            mk = _mk_mul if op.kind == "*" else _mk_div
            node = mk(node, rhs, SourceSpan(_span_of(node).start, _span_of(rhs).end))
        return node

    def parse_unary(self):
        if self.cur.kind == "-":
            op = self.advance()
            child = self.parse_unary()
            return _mk_neg(child, SourceSpan(op.span.start, _span_of(child).end))
        return self.parse_power()

    def parse_power(self):
        base = self.parse_atom()
        if self.cur.kind != "^":
            return base
        self.advance()
        exponent = self.parse_unary()
        if not isinstance(exponent, Constant):
            raise ExprSyntaxError(
                "exponent must be a constant", _span_of(exponent) or self.cur.span
            )
        return _mk_pow(
            base, exponent.value, SourceSpan(_span_of(base).start, _span_of(exponent).end)
        )

    def parse_atom(self):
        tok = self.cur
        if tok.kind == "number":
            self.advance()
            return Constant(Fraction(tok.text), tok.span)
        if tok.kind == "ident":
            self.advance()
            if tok.text == "x":
                return Variable(tok.span)
            if tok.text in _FUNCTIONS:
                self.expect("(", f"'(' after {tok.text!r}")
                arg = self.parse_expr()
                close = self.expect(")", "')'")
                span = SourceSpan(tok.span.start, close.span.end)
                if tok.text == "plus":
                    return _mk_plus(arg, span)
                return _FUNCTIONS[tok.text](arg, span)
            raise UnknownIdentifierError(tok.text, tok.span)
        if tok.kind == "(":
            self.advance()
            node = self.parse_expr()
            self.expect(")", "')'")
            return node
        found = repr(tok.text) if tok.kind != "eof" else "end of input"
        raise ExprSyntaxError(f"expected a number, 'x', '(' or a function but found {found}", tok.span)


def _span_of(node) -> Optional[SourceSpan]:
    return getattr(node, "span", None)


def parse(text: str) -> ExprNode:
    """Parse expression text into a folded tree; raises ExprSyntaxError."""
    parser = _Parser(_tokenize(text))
    node = parser.parse_expr()
    if parser.cur.kind != "eof":
        raise ExprSyntaxError(
            f"unexpected trailing input {parser.cur.text!r}", parser.cur.span
        )
    return node


# --------------------------------------------------------------------------
# Evaluation


def evaluate(node: ExprNode, x, ctx=DOUBLE):
    """Evaluate at abscissa x under the given precision context."""
    xv = ctx.const(x)
    return _eval(node, xv, ctx, {})


def _eval(node, x, ctx, cache):
    # derivative trees share subtrees heavily (quotient rules reuse the
    # denominator), so memoize per node object for one abscissa
    key = id(node)
    hit = cache.get(key)
    if hit is not None:
        return hit
    value = _eval_node(node, x, ctx, cache)
    cache[key] = value
    return value


def _eval_node(node, x, ctx, cache):
    if isinstance(node, Constant):
        return ctx.const(node.value)
    if isinstance(node, Variable):
        return x
    if isinstance(node, Add):
        return _eval(node.left, x, ctx, cache) + _eval(node.right, x, ctx, cache)
    if isinstance(node, Sub):
        return _eval(node.left, x, ctx, cache) - _eval(node.right, x, ctx, cache)
    if isinstance(node, Mul):
        return _eval(node.left, x, ctx, cache) * _eval(node.right, x, ctx, cache)
    if isinstance(node, Div):
        num = _eval(node.left, x, ctx, cache)
        den = _eval(node.right, x, ctx, cache)
        if den == 0:
            raise DomainError("division by zero", x)
        return num / den
    if isinstance(node, Neg):
        return -_eval(node.child, x, ctx, cache)
    if isinstance(node, Pow):
        return _eval_pow(node, x, ctx, cache)
    if isinstance(node, Exp):
        v = _eval(node.child, x, ctx, cache)
        try:
            return ctx.exp(v)
        except OverflowError:
            raise DomainError("exp overflow", x) from None
    if isinstance(node, Ln):
        v = _eval(node.child, x, ctx, cache)
        if v <= 0:
            raise DomainError("ln of a non-positive argument", x)
        return ctx.ln(v)
    if isinstance(node, Plus):
        v = _eval(node.child, x, ctx, cache)
        return v if v > 0 else ctx.const(0)
    raise TypeError(f"not an expression node: {node!r}")


def _eval_pow(node: Pow, x, ctx, cache):
    base = _eval(node.base, x, ctx, cache)
    k = node.exponent
    if k.denominator == 1:
        n = int(k)
        if n < 0 and base == 0:
            raise DomainError("zero raised to a negative power", x)
        try:
            return base ** n
        except OverflowError:
            raise DomainError("power overflow", x) from None
    # fractional exponent: defined for positive bases only
    if base == 0:
        if k > 0:
            return ctx.const(0)
        raise DomainError("zero raised to a negative power", x)
    if base < 0:
        raise DomainError("fractional power of a negative base", x)
    try:
        return ctx.exp(ctx.const(k) * ctx.ln(base))
    except OverflowError:
        raise DomainError("power overflow", x) from None


def as_integrand(node: ExprNode, ctx=DOUBLE):
    """Bind a tree to a context, yielding a plain scalar -> scalar callable."""
    return lambda x: _eval(node, ctx.const(x), ctx, {})


# --------------------------------------------------------------------------
# Differentiation

_ONE = Constant(Fraction(1))
_ZERO = Constant(Fraction(0))


def differentiate(node: ExprNode) -> ExprNode:
    """Symbolic x-derivative.

    Truncated powers follow plus(u)^k -> k*plus(u)^(k-1)*u' for integer
    k >= 2; differentiating plus(u)^1 or a bare plus(u) raises
    NotDifferentiable, as does any non-integer exponent.
    """
    if isinstance(node, Constant):
        return _ZERO
    if isinstance(node, Variable):
        return _ONE
    if isinstance(node, Add):
        return _mk_add(differentiate(node.left), differentiate(node.right))
    if isinstance(node, Sub):
        return _mk_sub(differentiate(node.left), differentiate(node.right))
    if isinstance(node, Neg):
        return _mk_neg(differentiate(node.child))
    if isinstance(node, Mul):
        return _mk_add(
            _mk_mul(differentiate(node.left), node.right),
            _mk_mul(node.left, differentiate(node.right)),
        )
    if isinstance(node, Div):
        num = _mk_sub(
            _mk_mul(differentiate(node.left), node.right),
            _mk_mul(node.left, differentiate(node.right)),
        )
        return _mk_div(num, _mk_pow(node.right, Fraction(2)))
    if isinstance(node, Pow):
        return _diff_pow(node)
    if isinstance(node, Exp):
        return _mk_mul(Exp(node.child), differentiate(node.child))
    if isinstance(node, Ln):
        return _mk_div(differentiate(node.child), node.child)
    if isinstance(node, Plus):
        raise NotDifferentiable(
            "plus(...) is differentiable only inside an integer power >= 2"
        )
    raise TypeError(f"not an expression node: {node!r}")


def _diff_pow(node: Pow) -> ExprNode:
    k = node.exponent
    if k.denominator != 1:
        raise NotDifferentiable(f"non-integer exponent {k} is not differentiable")
    n = int(k)
    if n == 0:
        return _ZERO
    if isinstance(node.base, Plus):
        if n < 2:
            raise NotDifferentiable(
                f"plus(...)^{n} is not differentiable (integer exponent >= 2 required)"
            )
        inner = differentiate(node.base.child)
    else:
        inner = differentiate(node.base)
    return _mk_mul(
        Constant(Fraction(n)), _mk_mul(_mk_pow(node.base, Fraction(n - 1)), inner)
    )


# --------------------------------------------------------------------------
# Printing

_PREC_ADD, _PREC_MUL, _PREC_NEG, _PREC_POW, _PREC_ATOM = 1, 2, 3, 4, 5


def _prec(node) -> int:
    if isinstance(node, (Add, Sub)):
        return _PREC_ADD
    if isinstance(node, (Mul, Div)):
        return _PREC_MUL
    if isinstance(node, Neg):
        return _PREC_NEG
    if isinstance(node, Pow):
        return _PREC_POW
    # Constants are atomic: _const_text self-parenthesizes negatives/fractions
    return _PREC_ATOM


def _const_text(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator) if value >= 0 else f"({value.numerator})"
    return f"({value.numerator}/{value.denominator})"


def to_text(node: ExprNode) -> str:
    """Canonical text form; parsing it back rebuilds an equal tree."""
    if isinstance(node, Constant):
        return _const_text(node.value)
    if isinstance(node, Variable):
        return "x"
    if isinstance(node, (Add, Sub)):
        op = "+" if isinstance(node, Add) else "-"
        left = _wrap(node.left, _PREC_ADD)
        right = _wrap(node.right, _PREC_ADD + 1)
        return f"{left}{op}{right}"
    if isinstance(node, (Mul, Div)):
        op = "*" if isinstance(node, Mul) else "/"
        left = _wrap(node.left, _PREC_MUL)
        right = _wrap(node.right, _PREC_MUL + 1)
        return f"{left}{op}{right}"
    if isinstance(node, Neg):
        return "-" + _wrap(node.child, _PREC_NEG)
    if isinstance(node, Pow):
        base = _wrap(node.base, _PREC_ATOM)
        return f"{base}^{_const_text(node.exponent)}"
    if isinstance(node, Exp):
        return f"exp({to_text(node.child)})"
    if isinstance(node, Ln):
        return f"ln({to_text(node.child)})"
    if isinstance(node, Plus):
        return f"plus({to_text(node.child)})"
    raise TypeError(f"not an expression node: {node!r}")


def _wrap(node, min_prec: int) -> str:
    text = to_text(node)
    return f"({text})" if _prec(node) < min_prec else text
