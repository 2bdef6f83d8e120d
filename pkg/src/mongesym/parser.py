"""Parser for the expression grammar.

    expr     := term (('+'|'-') term)*
    term     := factor ('*' factor)*
    factor   := base ('^' exponent)?
    base     := rationalLiteral | coordinate | '(' expr ')'
              | 'exp' '(' expr ')' | 'ln' '(' expr ')'
    exponent := rationalLiteral | '(' rationalLiteral ')'

Whitespace is insignificant.  A leading unary minus is accepted as a
convenience superset ("-x" parses like "-1*x"); printed output always stays
inside the grammar above and re-parses to the identical canonical form.

Rational powers are kept exact: integer powers are expanded, fractional
powers of polynomials become power atoms, and a fractional power of a bare
rational literal must itself be rational (8^(1/3) parses to 2, 2^(1/3) is
rejected).
"""

from __future__ import annotations

from fractions import Fraction

from .charts import Chart
from .expr import Expr, ExprError, NonRationalPowerError, ExpAtom, LnAtom, ONE_MONO


class ParseError(ExprError):
    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (at position {position})")
        self.position = position


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.pos = 0

    def skip_ws(self):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1

    def peek(self):
        self.skip_ws()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch: str):
        if self.peek() != ch:
            raise ParseError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def at_end(self) -> bool:
        return self.peek() == ""

    def read_integer(self) -> int:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and self.text[self.pos] == "-":
            self.pos += 1
        digits = self.pos
        while self.pos < len(self.text) and self.text[self.pos].isdigit():
            self.pos += 1
        if self.pos == digits:
            raise ParseError("expected an integer", start)
        return int(self.text[start:self.pos])

    def read_rational(self) -> Fraction:
        num = self.read_integer()
        save = self.pos
        self.skip_ws()
        if self.pos < len(self.text) and self.text[self.pos] == "/":
            self.pos += 1
            start = self.pos
            den_start = self.pos
            while self.pos < len(self.text) and self.text[self.pos].isdigit():
                self.pos += 1
            if self.pos == den_start:
                raise ParseError("expected a positive integer denominator", start)
            den = int(self.text[den_start:self.pos])
            if den == 0:
                raise ParseError("zero denominator", start)
            return Fraction(num, den)
        self.pos = save
        return Fraction(num)

    def read_name(self) -> str:
        self.skip_ws()
        start = self.pos
        if self.pos < len(self.text) and (self.text[self.pos].isalpha() or self.text[self.pos] == "_"):
            self.pos += 1
            while self.pos < len(self.text) and (
                self.text[self.pos].isalnum() or self.text[self.pos] == "_"
            ):
                self.pos += 1
        if self.pos == start:
            raise ParseError("expected an identifier", start)
        return self.text[start:self.pos]


class _Parser:
    def __init__(self, text: str, chart: Chart):
        self.s = _Scanner(text)
        self.chart = chart

    def parse(self) -> Expr:
        e = self.expr()
        if not self.s.at_end():
            raise ParseError(f"unexpected {self.s.peek()!r}", self.s.pos)
        return e

    def expr(self) -> Expr:
        ch = self.s.peek()
        negate = False
        if ch == "-" and not self._starts_number():
            self.s.expect("-")
            negate = True
        elif ch == "+":
            self.s.expect("+")
        e = self.term()
        if negate:
            e = -e
        while True:
            ch = self.s.peek()
            if ch == "+":
                self.s.expect("+")
                e = e + self.term()
            elif ch == "-":
                self.s.expect("-")
                e = e - self.term()
            else:
                return e

    def _starts_number(self) -> bool:
        self.s.skip_ws()
        p = self.s.pos
        t = self.s.text
        if p < len(t) and t[p] == "-":
            p += 1
        return p < len(t) and t[p].isdigit()

    def term(self) -> Expr:
        e = self.factor()
        while self.s.peek() == "*":
            self.s.expect("*")
            e = e * self.factor()
        return e

    def factor(self) -> Expr:
        base = self.base()
        if self.s.peek() == "^":
            self.s.expect("^")
            q = self.exponent()
            try:
                return base ** q
            except NonRationalPowerError:
                raise ParseError(
                    f"non-rational literal power {base}^({q})", self.s.pos) from None
            except ExprError as exc:
                raise ParseError(str(exc), self.s.pos) from None
        return base

    def exponent(self) -> Fraction:
        if self.s.peek() == "(":
            self.s.expect("(")
            q = self.s.read_rational()
            self.s.expect(")")
            return q
        return self.s.read_rational()

    def base(self) -> Expr:
        ch = self.s.peek()
        if ch == "(":
            self.s.expect("(")
            e = self.expr()
            self.s.expect(")")
            return e
        if ch.isdigit() or ch == "-":
            return Expr.constant(self.chart, self.s.read_rational())
        pos = self.s.pos
        name = self.s.read_name()
        if name in ("exp", "ln"):
            self.s.expect("(")
            arg = self.expr()
            self.s.expect(")")
            try:
                poly = arg.as_poly()
            except ExprError:
                raise ParseError(
                    f"{name} argument must be polynomial", pos) from None
            atom = ExpAtom(poly) if name == "exp" else LnAtom(poly)
            return Expr.from_raw(self.chart, [(Fraction(1), ONE_MONO, (atom,))])
        if name not in self.chart:
            raise ParseError(f"unknown identifier {name!r} in chart {self.chart.name}", pos)
        return Expr.coordinate(self.chart, name)


def parse(text: str, chart: Chart) -> Expr:
    """Parse text into a canonical expression on the given chart."""
    return _Parser(text, chart).parse()
