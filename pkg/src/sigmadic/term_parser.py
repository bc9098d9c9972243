"""Textual grammar for difference-analytic terms.

    term := sum
    sum  := prod (('+' | '-') prod)*
    prod := atom ('*' atom)*
    atom := INT | 'p' | 'x' | 's^'INT'(' term ')' | 's(' term ')'
          | 'Q(' term ',' term ')' | NAME '(' term (',' term)* ')'
          | '(' term ')'

`x` is the solver variable, `p` the prime of the ambient ring (it
parses to the ordinary integer constant), `s` the Frobenius lift, and
`Q` the total quotient.  Any other NAME refers to a separated series
supplied in the environment and applies it to m_x + n_y arguments,
X block first.  `x`, `p`, `s` and `Q` are reserved and cannot name
series.

Errors carry a 1-based column and the set of token kinds that would
have been accepted.  The printer emits the canonical spelling:
left-associated chains print without parentheses, any right operand of
equal precedence is parenthesized, and sigma powers print as `s(...)`
for power 1 and `s^j(...)` otherwise.  parse(print(t)) reproduces t
node for node.
"""

from __future__ import annotations

import dataclasses
from dataclasses import dataclass
from typing import Optional

from .errors import ParseError
from .hensel import Add, Apply, Const, Mul, Quot, Sigma, Slot, Sub, Term, Var
from .series import SeparatedSeries
from .witt import RingDesc, WittNum

_ATOM_EXPECTED = frozenset(
    {"integer", "'p'", "'x'", "'s'", "'Q'", "series name", "'('"}
)


@dataclass(frozen=True)
class _Token:
    kind: str  # 'int', 'name', or the literal punctuation
    text: str
    pos: int  # 1-based column


def _lex(text: str) -> list[_Token]:
    out: list[_Token] = []
    i = 0
    n = len(text)
    while i < n:
        ch = text[i]
        if ch.isspace():
            i += 1
            continue
        pos = i + 1
        if ch.isdigit():
            j = i
            while j < n and text[j].isdigit():
                j += 1
            out.append(_Token("int", text[i:j], pos))
            i = j
            continue
        if ch.isalpha() or ch == "_":
            j = i
            while j < n and (text[j].isalnum() or text[j] == "_"):
                j += 1
            out.append(_Token("name", text[i:j], pos))
            i = j
            continue
        if ch in "+-*(),^":
            out.append(_Token(ch, ch, pos))
            i += 1
            continue
        raise ParseError(
            f"unexpected character {ch!r}", pos, {"a term token"}
        )
    out.append(_Token("end", "", n + 1))
    return out


class _Parser:
    def __init__(self, text: str, ring: RingDesc, series_env: dict[str, SeparatedSeries]):
        self.text = text
        self.ring = ring
        self.env = series_env
        self.tokens = _lex(text)
        self.i = 0

    def peek(self) -> _Token:
        return self.tokens[self.i]

    def advance(self) -> _Token:
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, kind: str) -> _Token:
        tok = self.peek()
        if tok.kind != kind:
            raise ParseError(
                f"expected {kind!r}, found {tok.text or 'end of input'!r}",
                tok.pos,
                {f"'{kind}'"},
            )
        return self.advance()

    def parse(self) -> Term:
        term = self.sum()
        tok = self.peek()
        if tok.kind != "end":
            raise ParseError(
                f"unexpected {tok.text!r} after a complete term",
                tok.pos,
                {"'+'", "'-'", "'*'", "end of input"},
            )
        return term

    def sum(self) -> Term:
        left = self.prod()
        while self.peek().kind in ("+", "-"):
            op = self.advance()
            right = self.prod()
            span = (left.span[0] if left.span else op.pos, right.span[1] if right.span else op.pos)
            left = Add(left, right, span) if op.kind == "+" else Sub(left, right, span)
        return left

    def prod(self) -> Term:
        left = self.atom()
        while self.peek().kind == "*":
            op = self.advance()
            right = self.atom()
            span = (left.span[0] if left.span else op.pos, right.span[1] if right.span else op.pos)
            left = Mul(left, right, span)
        return left

    def atom(self) -> Term:
        tok = self.peek()
        if tok.kind == "int":
            self.advance()
            value = self.ring.element(int(tok.text))
            return Const(value, (tok.pos, tok.pos + len(tok.text)))
        if tok.kind == "(":
            self.advance()
            inner = self.sum()
            close = self.expect(")")
            return dataclasses.replace(inner, span=(tok.pos, close.pos + 1))
        if tok.kind == "name":
            return self.name_atom()
        raise ParseError(
            f"expected a term, found {tok.text or 'end of input'!r}",
            tok.pos,
            _ATOM_EXPECTED,
        )

    def name_atom(self) -> Term:
        tok = self.advance()
        name = tok.text
        if name == "x":
            return Var((tok.pos, tok.pos + 1))
        if name == "p":
            return Const(self.ring.element(self.ring.p), (tok.pos, tok.pos + 1))
        if name == "s":
            power = 1
            if self.peek().kind == "^":
                self.advance()
                ptok = self.expect("int")
                power = int(ptok.text)
            self.expect("(")
            inner = self.sum()
            close = self.expect(")")
            return Sigma(power, inner, (tok.pos, close.pos + 1))
        if name == "Q":
            self.expect("(")
            num = self.sum()
            self.expect(",")
            den = self.sum()
            close = self.expect(")")
            return Quot(num, den, (tok.pos, close.pos + 1))
        series = self.env.get(name)
        if series is None:
            raise ParseError(
                f"unknown series {name!r}", tok.pos, {"series name"}
            )
        self.expect("(")
        args = [self.sum()]
        while self.peek().kind == ",":
            self.advance()
            args.append(self.sum())
        close = self.expect(")")
        try:
            return Apply(name, series, tuple(args), (tok.pos, close.pos + 1))
        except ValueError as exc:
            raise ParseError(str(exc), tok.pos, {"argument list"}) from None


def parse_term(
    text: str,
    ring: RingDesc,
    series_env: Optional[dict[str, SeparatedSeries]] = None,
) -> Term:
    """Parse the textual grammar into a Term over the given ring."""
    return _Parser(text, ring, series_env or {}).parse()


# ---------------------------------------------------------------------------
# Canonical printing.


def _const_text(value: WittNum) -> str:
    coeffs = value.coeffs
    if all(c == 0 for c in coeffs[1:]):
        return str(coeffs[0])
    return value.digits_text()


def format_term(term: Term) -> str:
    """The canonical spelling; inverse of parse_term on its image."""
    if isinstance(term, Const):
        return _const_text(term.value)
    if isinstance(term, Var):
        return "x"
    if isinstance(term, Slot):
        if term.index == 0:
            return "x"
        return "s(x)" if term.index == 1 else f"s^{term.index}(x)"
    if isinstance(term, (Add, Sub)):
        op = "+" if isinstance(term, Add) else "-"
        left = format_term(term.left)
        right = format_term(term.right)
        if isinstance(term.right, (Add, Sub)):
            right = f"({right})"
        return f"{left} {op} {right}"
    if isinstance(term, Mul):
        left = format_term(term.left)
        right = format_term(term.right)
        if isinstance(term.left, (Add, Sub)):
            left = f"({left})"
        if isinstance(term.right, (Add, Sub, Mul)):
            right = f"({right})"
        return f"{left}*{right}"
    if isinstance(term, Quot):
        return f"Q({format_term(term.num)}, {format_term(term.den)})"
    if isinstance(term, Sigma):
        inner = format_term(term.arg)
        return f"s({inner})" if term.power == 1 else f"s^{term.power}({inner})"
    if isinstance(term, Apply):
        args = ", ".join(format_term(a) for a in term.args)
        return f"{term.name}({args})"
    raise TypeError(f"unknown term node {term!r}")
