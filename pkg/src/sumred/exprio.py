"""Expression text format: a small arithmetic grammar and a canonical printer.

Grammar (whitespace insensitive):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := ('+' | '-')* base ('^' exponent)?
    base   := INT | NAME | '(' expr ')'
    exponent := INT | '-' INT | '(' '-'? INT ')'

NAME resolves against the tower's parameters and generators. The printer
emits descending powers at every level with the convention that
parse(format(v)) == v, which together with the reduced canonical form of
values makes printed strings usable as equality certificates.
"""

from __future__ import annotations

import math
import re
from fractions import Fraction

from .algebra import RatFunc, drop, frac_at, lift, poly_gcd
from .errors import ParseError


def _dropped(v):
    """Strip every trivial top level off a value."""
    if isinstance(v, Fraction):
        return v
    while True:
        below = drop(v)
        if below is None:
            return v
        v = below

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|([-+*/^()]))")

_ATOM_DEN = re.compile(r"(?:\d+|[A-Za-z_][A-Za-z0-9_]*(?:\^\d+)?)\Z")


def parse_expression(tower, text):
    """Parse text into a value at the tower's full depth."""
    return _Parser(tower, text).run()


class _Parser:
    def __init__(self, tower, text):
        self.tower = tower
        self.text = text
        self.pos = 0
        self.tok = None
        self.tok_pos = 0
        self._advance()

    def run(self):
        v = self._expr()
        if self.tok is not None:
            raise ParseError(f"unexpected {self.tok!r}", position=self.tok_pos + 1)
        return v

    def _advance(self):
        m = _TOKEN.match(self.text, self.pos)
        if m is None:
            rest = self.text[self.pos:].lstrip()
            if rest:
                raise ParseError(f"bad character {rest[0]!r}",
                                 position=self.pos + 1)
            self.tok = None
            self.tok_pos = len(self.text)
            return
        self.tok_pos = m.start(m.lastindex)
        self.tok = m.group(m.lastindex)
        self.pos = m.end()

    def _expect(self, what):
        raise ParseError(f"expected {what}, found "
                         + (f"{self.tok!r}" if self.tok is not None else "end of input"),
                         position=self.tok_pos + 1)

    def _expr(self):
        v = self._term()
        while self.tok in ("+", "-"):
            op = self.tok
            self._advance()
            w = self._term()
            v = v + w if op == "+" else v - w
        return v

    def _term(self):
        v = self._factor()
        while self.tok in ("*", "/"):
            op = self.tok
            pos = self.tok_pos
            self._advance()
            w = self._factor()
            if op == "*":
                v = v * w
            else:
                if _is_zero(w):
                    raise ParseError("division by zero", position=pos + 1)
                v = v / w
        return v

    def _factor(self):
        sign = 1
        while self.tok in ("+", "-"):
            if self.tok == "-":
                sign = -sign
            self._advance()
        v = self._base()
        if self.tok == "^":
            pos = self.tok_pos
            self._advance()
            n = self._exponent()
            if n < 0 and _is_zero(v):
                raise ParseError("zero raised to a negative power", position=pos + 1)
            v = v ** n
        return v if sign > 0 else -v

    def _base(self):
        tok = self.tok
        if tok is None:
            self._expect("a value")
        if tok == "(":
            self._advance()
            v = self._expr()
            if self.tok != ")":
                self._expect("')'")
            self._advance()
            return v
        if tok.isdigit():
            self._advance()
            return frac_at(Fraction(int(tok)), self.tower.full_depth)
        if tok[0].isalpha() or tok[0] == "_":
            try:
                var = self.tower.var(tok)
            except KeyError:
                raise ParseError(f"unknown variable {tok!r}",
                                 position=self.tok_pos + 1) from None
            self._advance()
            return lift(var, self.tower.full_depth) if not isinstance(var, Fraction) else var
        self._expect("a value")

    def _exponent(self):
        neg = False
        closing = False
        if self.tok == "(":
            closing = True
            self._advance()
        if self.tok == "-":
            neg = True
            self._advance()
        if self.tok is None or not self.tok.isdigit():
            self._expect("an integer exponent")
        n = int(self.tok)
        self._advance()
        if closing:
            if self.tok != ")":
                self._expect("')'")
            self._advance()
        return -n if neg else n


def _is_zero(v):
    if isinstance(v, Fraction):
        return not v
    return v.is_zero()


# ---------------------------------------------------------------------------
# canonical printing
# ---------------------------------------------------------------------------


def format_value(tower, v):
    """Canonical text for a value; parse_expression inverts it exactly."""
    s, _kind = _fmt(v, _names_by_depth(tower))
    return s


def format_poly(tower, p, depth):
    """Canonical text for a bare polynomial in the depth-level variable."""
    if p.is_zero():
        return "0"
    s, _kind = _fmt_poly(p, depth, _names_by_depth(tower))
    return s


def _names_by_depth(tower):
    names = [None]
    names.extend(tower.params)
    names.extend(g.name for g in tower.gens)
    return names


# kinds order the need for parentheses: an ATOM never needs them, a PROD
# needs them only under '/' or '^', a SUM under any product, NEG under products
_ATOM, _NEG, _PROD, _SUM = 0, 1, 2, 3


def _fmt(v, names):
    if isinstance(v, Fraction):
        return _fmt_fraction(v)
    if v.den.is_one():
        return _fmt_poly(v.num, v.depth, names)
    num, den = _cleared_pair(v.num, v.den, v.depth)
    n_s, n_k = _fmt_poly(num, v.depth, names)
    d_s, _d_k = _fmt_poly(den, v.depth, names)
    neg = False
    if n_k == _NEG:
        neg = True
        n_s = n_s[1:]
    elif n_k >= _SUM:
        n_s = f"({n_s})"
    if not _ATOM_DEN.match(d_s):
        d_s = f"({d_s})"
    if neg:
        return f"-{n_s}/{d_s}", _NEG
    return f"{n_s}/{d_s}", _PROD


def _fmt_fraction(q):
    if q.denominator == 1:
        s = str(q.numerator)
        return s, (_NEG if q < 0 else _ATOM)
    s = f"{abs(q.numerator)}/{q.denominator}"
    if q < 0:
        return "-" + s, _NEG
    return s, _PROD


def _fmt_poly(p, depth, names):
    if p.is_zero():
        return "0", _ATOM
    name = names[depth]
    terms = []
    for j in range(p.degree(), -1, -1):
        c = p.coeffs[j]
        if _is_zero(c):
            continue
        terms.append(_fmt_term(c, name, j, names))
    out = terms[0][0]
    for t, _k in terms[1:]:
        if t.startswith("-"):
            out += " - " + t[1:]
        else:
            out += " + " + t
    if len(terms) > 1:
        return out, _SUM
    return out, terms[0][1]


def _fmt_term(c, name, j, names):
    if j == 0:
        return _fmt(c, names)
    mono = name if j == 1 else f"{name}^{j}"
    head, tail = _coeff_parts(c, names)
    s = f"{head}{mono}{tail}"
    if head.startswith("-"):
        return s, _NEG
    return s, (_PROD if (head or tail) else _ATOM)


def _cleared_pair(num, den, depth):
    """Rescale num/den for display so den has no fractional coefficients;
    at the bottom level also clear num's rational content. Value-preserving."""
    if depth == 1 or isinstance(den.coeffs[0], Fraction):
        L = 1
        for c in den.coeffs:
            L = math.lcm(L, c.denominator)
        for c in num.coeffs:
            L = math.lcm(L, c.denominator)
        if L != 1:
            s = Fraction(L)
            return num.scale(s), den.scale(s)
        return num, den
    common = None
    for c in den.coeffs:
        if isinstance(c, Fraction) or c.den.is_one():
            continue
        if common is None:
            common = c.den
        else:
            common = common.exact_div(poly_gcd(common, c.den)) * c.den
    if common is not None:
        s = RatFunc(common, common ** 0, depth - 1, _trusted=True)
        return num.scale(s), den.scale(s)
    return num, den


def _coeff_parts(c, names):
    """Split a coefficient around its monomial: returns (prefix, suffix) so a
    term prints as prefix + monomial + suffix, e.g. 1/2 -> ("", "/2")."""
    c = _dropped(c)
    if isinstance(c, Fraction):
        a, b = c.numerator, c.denominator
        tail = "" if b == 1 else f"/{b}"
        if a == 1:
            return "", tail
        if a == -1:
            return "-", tail
        return f"{a}*", tail
    if c.den.is_one():
        if c.is_one():
            return "", ""
        if _is_minus_one(c):
            return "-", ""
        s, k = _fmt_poly(c.num, c.depth, names)
        if k >= _SUM:
            s = f"({s})"
        return f"{s}*", ""
    num, den = _cleared_pair(c.num, c.den, c.depth)
    n_s, n_k = _fmt_poly(num, c.depth, names)
    d_s, _d_k = _fmt_poly(den, c.depth, names)
    if not _ATOM_DEN.match(d_s):
        d_s = f"({d_s})"
    tail = f"/{d_s}"
    if n_s == "1":
        return "", tail
    if n_s == "-1":
        return "-", tail
    if n_k >= _SUM:
        n_s = f"({n_s})"
    return f"{n_s}*", tail


def _is_one(v):
    if isinstance(v, Fraction):
        return v == 1
    return v.is_one()


def _is_minus_one(v):
    if isinstance(v, Fraction):
        return v == -1
    return (-v).is_one()
