"""A tiny language of total functions and functionals.

    n -> n * n + 1                      type 1
    f -> f(0) + f(1)                    type 2
    x -> x(x(0))                        type 2
    n -> if n = 0 then 5 else succ(n)   type 1

Expressions are built from natural literals, the bound variable, ``succ``,
``+``, ``*``, application of a function-valued binder, and ``if a = b then
c else d``.  There is no recursion, so everything that parses is total.
The level follows from how the binder is used: applied means type 2.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .kk import TotalFn1, TotalFn2


class ExprError(ValueError):
    pass


_TOKEN = re.compile(r"\s*(?:(\d+)|(->|[()+*=])|([A-Za-z_][A-Za-z_0-9]*))")
_KEYWORDS = {"if", "then", "else", "succ"}


def _tokenize(text):
    pos, out = 0, []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            raise ExprError(f"unexpected character {text[pos]!r} at {pos}")
        num, sym, name = m.groups()
        out.append(("num", int(num)) if num else ("sym", sym) if sym else ("name", name))
        pos = m.end()
    return out


@dataclass(frozen=True)
class Num:
    value: int


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Succ:
    arg: object


@dataclass(frozen=True)
class BinOp:
    op: str
    left: object
    right: object


@dataclass(frozen=True)
class Apply:
    arg: object


@dataclass(frozen=True)
class IfEq:
    left: object
    right: object
    then: object
    other: object


@dataclass(frozen=True)
class FnExpr:
    binder: str
    body: object
    level: int
    source: str


class _Parser:
    def __init__(self, tokens, binder):
        self.toks = tokens
        self.i = 0
        self.binder = binder
        self.applied = False
        self.bare = False

    def peek(self):
        return self.toks[self.i] if self.i < len(self.toks) else (None, None)

    def take(self, kind=None, value=None):
        tok = self.peek()
        if tok[0] is None or (kind and tok[0] != kind) or (value is not None and tok[1] != value):
            want = value or kind or "token"
            raise ExprError(f"expected {want!r}, found {tok[1]!r}")
        self.i += 1
        return tok

    def expr(self):
        node = self.term()
        while self.peek() == ("sym", "+"):
            self.take()
            node = BinOp("+", node, self.term())
        return node

    def term(self):
        node = self.atom()
        while self.peek() == ("sym", "*"):
            self.take()
            node = BinOp("*", node, self.atom())
        return node

    def atom(self):
        kind, val = self.peek()
        if kind == "num":
            self.take()
            return Num(val)
        if (kind, val) == ("sym", "("):
            self.take()
            node = self.expr()
            self.take("sym", ")")
            return node
        if kind == "name":
            if val == "if":
                self.take()
                left = self.expr()
                self.take("sym", "=")
                right = self.expr()
                self.take("name", "then")
                then = self.expr()
                self.take("name", "else")
                return IfEq(left, right, then, self.expr())
            if val == "succ":
                self.take()
                self.take("sym", "(")
                node = self.expr()
                self.take("sym", ")")
                return Succ(node)
            if val == self.binder:
                self.take()
                if self.peek() == ("sym", "("):
                    self.take()
                    node = self.expr()
                    self.take("sym", ")")
                    self.applied = True
                    return Apply(node)
                self.bare = True
                return Var()
            raise ExprError(f"unknown name {val!r}")
        raise ExprError(f"unexpected token {val!r}")


def parse_expr(text: str) -> FnExpr:
    tokens = _tokenize(text)
    if len(tokens) < 3 or tokens[0][0] != "name" or tokens[1] != ("sym", "->"):
        raise ExprError(f"expected 'var -> body', got {text!r}")
    binder = tokens[0][1]
    if binder in _KEYWORDS:
        raise ExprError(f"{binder!r} cannot be a variable")
    p = _Parser(tokens[2:], binder)
    body = p.expr()
    if p.i != len(p.toks):
        raise ExprError(f"trailing input after expression: {p.toks[p.i][1]!r}")
    if p.applied and p.bare:
        raise ExprError(f"{binder!r} is used both as a number and as a function")
    return FnExpr(binder, body, 2 if p.applied else 1, text.strip())


def _compile(node):
    if isinstance(node, Num):
        v = node.value
        return lambda env: v
    if isinstance(node, Var):
        return lambda env: env
    if isinstance(node, Succ):
        a = _compile(node.arg)
        return lambda env: a(env) + 1
    if isinstance(node, BinOp):
        a, b = _compile(node.left), _compile(node.right)
        if node.op == "+":
            return lambda env: a(env) + b(env)
        return lambda env: a(env) * b(env)
    if isinstance(node, Apply):
        a = _compile(node.arg)
        return lambda env: env(a(env))
    if isinstance(node, IfEq):
        l, r = _compile(node.left), _compile(node.right)
        t, o = _compile(node.then), _compile(node.other)
        return lambda env: t(env) if l(env) == r(env) else o(env)
    raise TypeError(node)


def compile_expr(e: FnExpr):
    body = _compile(e.body)
    if e.level == 1:
        return TotalFn1(body, name=e.source)
    return TotalFn2(body, name=e.source)


def parse_fn1(text: str) -> TotalFn1:
    e = parse_expr(text)
    if e.level != 1:
        raise ExprError(f"{text!r} is a functional, expected a type-1 function")
    return compile_expr(e)


def parse_fn2(text: str) -> TotalFn2:
    e = parse_expr(text)
    if e.level == 1:
        # a body that never applies its argument is a constant functional
        body = _compile(e.body)
        if _is_closed(e.body):
            return TotalFn2(lambda f: body(f), name=e.source)
        raise ExprError(f"{text!r} is a type-1 function, expected a functional")
    return compile_expr(e)


def _is_closed(node) -> bool:
    if isinstance(node, Num):
        return True
    if isinstance(node, (Var, Apply)):
        return False
    if isinstance(node, Succ):
        return _is_closed(node.arg)
    if isinstance(node, BinOp):
        return _is_closed(node.left) and _is_closed(node.right)
    if isinstance(node, IfEq):
        return all(_is_closed(c) for c in (node.left, node.right, node.then, node.other))
    return False
