"""Arithmetic expression evaluation for the calculator tool.

Grammar: decimal literals, + - * / % ^, unary minus, parentheses. ^ is
right-associative and binds tighter than unary minus, so -2^2 = -4 and
2^-3 parses. Division is exact real division.
"""
from __future__ import annotations

from ..errors import ExpressionError

__all__ = ["evaluate", "render_number"]

_OPERATORS = set("+-*/%^()")


def _tokenize(text: str) -> list[str]:
    tokens: list[str] = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch.isspace():
            i += 1
        elif ch in _OPERATORS:
            tokens.append(ch)
            i += 1
        elif ch.isdigit() or ch == ".":
            j = i
            seen_dot = False
            while j < len(text) and (text[j].isdigit() or (text[j] == "." and not seen_dot)):
                seen_dot = seen_dot or text[j] == "."
                j += 1
            literal = text[i:j]
            if literal == ".":
                raise ExpressionError("lone '.' is not a number")
            tokens.append(literal)
            i = j
        else:
            raise ExpressionError(f"unexpected character {ch!r}")
    return tokens


class _Parser:
    def __init__(self, tokens: list[str]):
        self.tokens = tokens
        self.at = 0

    def peek(self) -> str | None:
        return self.tokens[self.at] if self.at < len(self.tokens) else None

    def take(self) -> str:
        token = self.peek()
        if token is None:
            raise ExpressionError("unexpected end of expression")
        self.at += 1
        return token

    def parse(self) -> float:
        value = self.expr()
        if self.peek() is not None:
            raise ExpressionError(f"trailing input at {self.peek()!r}")
        return value

    def expr(self) -> float:
        value = self.term()
        while self.peek() in ("+", "-"):
            if self.take() == "+":
                value += self.term()
            else:
                value -= self.term()
        return value

    def term(self) -> float:
        value = self.unary()
        while self.peek() in ("*", "/", "%"):
            op = self.take()
            rhs = self.unary()
            if op == "*":
                value *= rhs
            elif rhs == 0:
                raise ExpressionError("division by zero")
            elif op == "/":
                value /= rhs
            else:
                value %= rhs
        return value

    def unary(self) -> float:
        if self.peek() == "-":
            self.take()
            return -self.unary()
        return self.power()

    def power(self) -> float:
        base = self.atom()
        if self.peek() == "^":
            self.take()
            exponent = self.unary()
            try:
                result = base**exponent
            except (ZeroDivisionError, OverflowError) as exc:
                raise ExpressionError(f"cannot raise {base} to {exponent}") from exc
            if isinstance(result, complex):
                raise ExpressionError("fractional power of a negative base")
            return result
        return base

    def atom(self) -> float:
        token = self.take()
        if token == "(":
            value = self.expr()
            if self.take() != ")":
                raise ExpressionError("expected ')'")
            return value
        if token in _OPERATORS:
            raise ExpressionError(f"unexpected {token!r}")
        return float(token)


def evaluate(text: str) -> float:
    tokens = _tokenize(text)
    if not tokens:
        raise ExpressionError("empty expression")
    return _Parser(tokens).parse()


def render_number(value: float) -> str:
    return f"{value:.12g}"
