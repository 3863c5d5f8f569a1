"""Exact dense polynomial and rational-function arithmetic.

Values live in a chain of univariate rational-function fields built over Q:
a value of depth 0 is a Fraction, a value of depth d >= 1 is a RatFunc whose
numerator and denominator are Poly objects with coefficients of depth d - 1.
One Poly never mixes coefficient depths.

Every RatFunc is kept in reduced canonical form: gcd(num, den) = 1 and den
monic, recursively at every depth. Rational content therefore migrates into
the top-level numerator, which makes equal values structurally equal; tests
compare results by == on purpose.

Polynomials are dense tuples, lowest degree first, with no trailing zero.
The zero polynomial is the empty tuple; degree() reports -1 for it (standing
in for degree minus infinity).
"""

from __future__ import annotations

import math
import os
from fractions import Fraction

from .errors import IntegerLimitError

F0 = Fraction(0)
F1 = Fraction(1)

# Optional bit-size cap on integers appearing in bottom-level coefficients.
# None disables the guard entirely (the default).
_INT_CAP = None


def set_int_cap(bits):
    """Set or clear the integer bit-size cap. bits=None disables it."""
    global _INT_CAP
    if bits is not None:
        bits = int(bits)
        if bits <= 0:
            raise ValueError("integer cap must be positive")
    _INT_CAP = bits


def load_int_cap_from_env(env="SUMRED_MAX_INT_BITS"):
    raw = os.environ.get(env)
    set_int_cap(int(raw) if raw else None)


load_int_cap_from_env()


def _guard(fr):
    if _INT_CAP is not None:
        if fr.numerator.bit_length() > _INT_CAP or fr.denominator.bit_length() > _INT_CAP:
            raise IntegerLimitError(
                f"integer exceeds configured cap of {_INT_CAP} bits")
    return fr


class Poly:
    """Dense univariate polynomial; see the module docstring for conventions."""

    __slots__ = ("coeffs",)

    def __init__(self, coeffs=()):
        coeffs = tuple(coeffs)
        n = len(coeffs)
        while n and _is_zero_val(coeffs[n - 1]):
            n -= 1
        coeffs = coeffs[:n]
        if _INT_CAP is not None and coeffs and isinstance(coeffs[0], Fraction):
            for c in coeffs:
                _guard(c)
        self.coeffs = coeffs

    # -- inspection ------------------------------------------------------

    def is_zero(self):
        return not self.coeffs

    def degree(self):
        return len(self.coeffs) - 1

    def lc(self):
        if not self.coeffs:
            raise ValueError("zero polynomial has no leading coefficient")
        return self.coeffs[-1]

    def coeff(self, i, depth_below=None):
        if 0 <= i < len(self.coeffs):
            return self.coeffs[i]
        if depth_below is None:
            if not self.coeffs:
                raise ValueError("coefficient depth unknown for zero Poly")
            return _zero_like(self.coeffs[0])
        return zero_at(depth_below)

    def is_one(self):
        return len(self.coeffs) == 1 and _is_one_val(self.coeffs[0])

    # -- ring operations -------------------------------------------------

    def __add__(self, other):
        a, b = self.coeffs, other.coeffs
        if not a:
            return other
        if not b:
            return self
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for i, c in enumerate(b):
            out[i] = out[i] + c
        return Poly(out)

    def __sub__(self, other):
        a, b = self.coeffs, other.coeffs
        if not b:
            return self
        if not a:
            return -other
        out = list(a) + [_zero_like(a[0])] * (len(b) - len(a))
        for i, c in enumerate(b):
            out[i] = out[i] - c
        return Poly(out)

    def __neg__(self):
        return Poly(tuple(-c for c in self.coeffs))

    def __mul__(self, other):
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return _P_ZERO
        if len(a) == 1:
            c = a[0]
            return Poly(tuple(c * x for x in b))
        if len(b) == 1:
            c = b[0]
            return Poly(tuple(x * c for x in a))
        zero = _zero_like(a[0])
        out = [zero] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if _is_zero_val(ca):
                continue
            for j, cb in enumerate(b):
                out[i + j] = out[i + j] + ca * cb
        return Poly(out)

    def scale(self, c):
        """Multiply by a scalar of the coefficient depth."""
        if _is_zero_val(c):
            return _P_ZERO
        if _is_one_val(c):
            return self
        return Poly(tuple(x * c for x in self.coeffs))

    def shift_up(self, k):
        """Multiply by the variable to the k-th power."""
        if not self.coeffs or k == 0:
            return self
        zero = _zero_like(self.coeffs[0])
        return Poly((zero,) * k + self.coeffs)

    def __pow__(self, n):
        if n < 0:
            raise ValueError("negative power of a Poly")
        if n == 0:
            if not self.coeffs:
                raise ValueError("0**0 of unknown depth")
            return Poly((_one_like(self.coeffs[0]),))
        result = self
        for _ in range(n - 1):
            result = result * self
        return result

    # -- euclidean structure ----------------------------------------------

    def divmod(self, other):
        """Exact-field long division: self = q*other + r with deg r < deg other."""
        if other.is_zero():
            raise ZeroDivisionError("polynomial division by zero")
        a = list(self.coeffs)
        b = other.coeffs
        db = len(b) - 1
        if len(a) - 1 < db:
            return _P_ZERO, self
        inv_lc = _inv_val(b[-1])
        q = [_zero_like(b[-1])] * (len(a) - db)
        for i in range(len(a) - 1, db - 1, -1):
            c = a[i]
            if _is_zero_val(c):
                continue
            c = c * inv_lc
            q[i - db] = c
            for j in range(db + 1):
                a[i - db + j] = a[i - db + j] - c * b[j]
        return Poly(q), Poly(a[:db])

    def __mod__(self, other):
        return self.divmod(other)[1]

    def exact_div(self, other):
        q, r = self.divmod(other)
        if not r.is_zero():
            raise ValueError("polynomial division was not exact")
        return q

    def monic(self):
        """Return (leading coefficient, self made monic)."""
        c = self.lc()
        if _is_one_val(c):
            return c, self
        return c, self.scale(_inv_val(c))

    def deriv(self):
        cs = self.coeffs
        if len(cs) <= 1:
            return _P_ZERO
        return Poly(tuple(cs[i] * _int_like(i, cs[0]) for i in range(1, len(cs))))

    def eval(self, point):
        """Horner evaluation at a value of the coefficient depth."""
        if not self.coeffs:
            return _zero_like(point)
        acc = self.coeffs[-1]
        for c in reversed(self.coeffs[:-1]):
            acc = acc * point + c
        return acc

    def compose_linear(self, a):
        """Substitute (variable + a) for the variable; a has coefficient depth."""
        if not self.coeffs:
            return self
        out = []
        for c in reversed(self.coeffs):
            # out := out * (t + a) + c
            nxt = [_zero_like(c)] + out
            for i, o in enumerate(out):
                nxt[i] = nxt[i] + o * a
            if nxt:
                nxt[0] = nxt[0] + c
            else:
                nxt = [c]
            out = nxt
        return Poly(out)

    def map_coeffs(self, fn):
        return Poly(tuple(fn(c) for c in self.coeffs))

    # -- comparison --------------------------------------------------------

    def __eq__(self, other):
        return isinstance(other, Poly) and self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __repr__(self):
        return f"Poly({list(self.coeffs)!r})"


_P_ZERO = Poly(())


class RatFunc:
    """Reduced rational function num/den over the depth-below coefficients."""

    __slots__ = ("num", "den", "depth")

    def __init__(self, num, den, depth, _trusted=False):
        if not _trusted:
            num, den = _reduce_pair(num, den)
        self.num = num
        self.den = den
        self.depth = depth

    @staticmethod
    def from_poly(p, depth):
        return RatFunc(p, _one_poly(depth - 1), depth, _trusted=True)

    # -- inspection ------------------------------------------------------

    def is_zero(self):
        return self.num.is_zero()

    def is_one(self):
        return self.num.is_one() and self.den.is_one()

    def is_poly(self):
        return self.den.is_one()

    # -- field operations --------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            if other.depth != self.depth:
                raise TypeError("mixed-depth RatFunc arithmetic; lift explicitly")
            return other
        if isinstance(other, (int, Fraction)):
            return frac_at(Fraction(other), self.depth)
        return NotImplemented

    def __add__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.num.is_zero():
            return other
        if other.num.is_zero():
            return self
        if self.den == other.den:
            return RatFunc(self.num + other.num, self.den, self.depth)
        num = self.num * other.den + other.num * self.den
        return RatFunc(num, self.den * other.den, self.depth)

    __radd__ = __add__

    def __sub__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return RatFunc(-self.num, self.den, self.depth, _trusted=True)

    def __mul__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.num.is_zero() or other.num.is_zero():
            return zero_at(self.depth)
        # cross-cancel first to keep intermediate products small
        n1, d2 = _cancel(self.num, other.den)
        n2, d1 = _cancel(other.num, self.den)
        return RatFunc(n1 * n2, d1 * d2, self.depth)

    __rmul__ = __mul__

    def inv(self):
        if self.num.is_zero():
            raise ZeroDivisionError("inverse of zero")
        return RatFunc(self.den, self.num, self.depth)

    def __truediv__(self, other):
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inv()

    def __rtruediv__(self, other):
        return self.inv() * other

    def __pow__(self, n):
        if n == 0:
            return one_at(self.depth)
        base = self if n > 0 else self.inv()
        out = base
        for _ in range(abs(n) - 1):
            out = out * base
        return out

    # -- comparison --------------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = frac_at(Fraction(other), self.depth)
        return (isinstance(other, RatFunc) and self.depth == other.depth
                and self.num == other.num and self.den == other.den)

    def __hash__(self):
        return hash((self.num, self.den))

    def __repr__(self):
        return f"RatFunc({self.num!r}, {self.den!r}, depth={self.depth})"


# ---------------------------------------------------------------------------
# value helpers (Fraction at depth 0, RatFunc above)
# ---------------------------------------------------------------------------


def _is_zero_val(v):
    if isinstance(v, Fraction):
        return not v
    return v.num.is_zero()


def _is_one_val(v):
    if isinstance(v, Fraction):
        return v == 1
    return v.is_one()


def _zero_like(v):
    if isinstance(v, Fraction):
        return F0
    return zero_at(v.depth)


def _one_like(v):
    if isinstance(v, Fraction):
        return F1
    return one_at(v.depth)


def _int_like(n, v):
    if isinstance(v, Fraction):
        return Fraction(n)
    return frac_at(Fraction(n), v.depth)


def _inv_val(v):
    if isinstance(v, Fraction):
        return 1 / v
    return v.inv()


def vdepth(v):
    return 0 if isinstance(v, Fraction) else v.depth


_ZERO_CACHE = {}
_ONE_CACHE = {}


def zero_at(depth):
    if depth == 0:
        return F0
    v = _ZERO_CACHE.get(depth)
    if v is None:
        v = RatFunc(_P_ZERO, _one_poly(depth - 1), depth, _trusted=True)
        _ZERO_CACHE[depth] = v
    return v


def one_at(depth):
    if depth == 0:
        return F1
    v = _ONE_CACHE.get(depth)
    if v is None:
        v = RatFunc(_one_poly(depth - 1), _one_poly(depth - 1), depth, _trusted=True)
        _ONE_CACHE[depth] = v
    return v


def _one_poly(coeff_depth):
    return Poly((one_at(coeff_depth),))


def frac_at(fr, depth):
    """Embed a Fraction as a value of the given depth."""
    _guard(fr)
    v = fr
    for d in range(1, depth + 1):
        v = RatFunc(Poly((v,)), _one_poly(d - 1), d, _trusted=True)
    return v


def lift(v, depth):
    """Embed a value into a greater or equal depth."""
    d = vdepth(v)
    if d > depth:
        raise ValueError("cannot lift downward")
    for dd in range(d + 1, depth + 1):
        v = RatFunc(Poly((v,)), _one_poly(dd - 1), dd, _trusted=True)
    return v


def drop(v):
    """Strip one depth from a value that does not involve its top variable.

    Returns None when the value genuinely uses the top variable.
    """
    if isinstance(v, Fraction):
        return None
    if not v.den.is_one() or v.num.degree() > 0:
        return None
    if v.num.is_zero():
        return zero_at(v.depth - 1)
    return v.num.coeffs[0]


def as_fraction(v):
    """Return the Fraction a constant value represents, or None."""
    while not isinstance(v, Fraction):
        v = drop(v)
        if v is None:
            return None
    return v


def value_sort_key(v):
    """A total order on same-depth values, used only to pin choices."""
    if isinstance(v, Fraction):
        return (0, v)
    return (1, v.num.degree(), v.den.degree(),
            tuple(value_sort_key(c) for c in v.num.coeffs),
            tuple(value_sort_key(c) for c in v.den.coeffs))


def poly_sort_key(p):
    """Graded order on polynomials: degree first, then coefficient sequence."""
    return (p.degree(), tuple(value_sort_key(c) for c in p.coeffs))


# ---------------------------------------------------------------------------
# normalization and gcd
# ---------------------------------------------------------------------------


def _reduce_pair(num, den):
    """Reduce num/den to canonical form: coprime, den monic."""
    if den.is_zero():
        raise ZeroDivisionError("zero denominator")
    if num.is_zero():
        return _P_ZERO, Poly((_one_like(den.lc()),))
    if not den.is_one():
        g = poly_gcd(num, den)
        if g.degree() > 0:
            num = num.exact_div(g)
            den = den.exact_div(g)
        lc = den.lc()
        if not _is_one_val(lc):
            inv = _inv_val(lc)
            num = num.scale(inv)
            den = den.scale(inv)
    return num, den


def _cancel(num, den):
    """Divide out gcd(num, den); no monic adjustment."""
    if den.is_one() or num.is_zero():
        return num, den
    g = poly_gcd(num, den)
    if g.degree() > 0:
        return num.exact_div(g), den.exact_div(g)
    return num, den


def poly_gcd(a, b):
    """Monic gcd over the coefficient field."""
    if a.is_zero():
        return b.monic()[1] if not b.is_zero() else b
    if b.is_zero():
        return a.monic()[1]
    if isinstance(a.coeffs[0], Fraction):
        return _qpoly_gcd(a, b)
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()[1]


def poly_xgcd(a, b):
    """Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic (or zero)."""
    zero_c = _zero_like(a.coeffs[0]) if a.coeffs else (
        _zero_like(b.coeffs[0]) if b.coeffs else F0)
    one_c = _one_like(zero_c)
    r0, r1 = a, b
    s0, s1 = Poly((one_c,)), _P_ZERO
    t0, t1 = _P_ZERO, Poly((one_c,))
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    lc, g = r0.monic()
    if _is_one_val(lc):
        return g, s0, t0
    inv = _inv_val(lc)
    return g, s0.scale(inv), t0.scale(inv)


def _qpoly_gcd(a, b):
    """gcd for Fraction-coefficient polynomials via integer subresultant PRS."""
    za = _to_zpoly(a.coeffs)
    zb = _to_zpoly(b.coeffs)
    g = _zpoly_gcd(za, zb)
    # make monic over Q
    lead = g[-1]
    return Poly(tuple(Fraction(c, lead) for c in g))


def _to_zpoly(coeffs):
    den = math.lcm(*(c.denominator for c in coeffs))
    return [c.numerator * (den // c.denominator) for c in coeffs]


def _zpoly_content(a):
    g = 0
    for c in a:
        g = math.gcd(g, c)
        if g == 1:
            break
    return g or 1


def _zpoly_primitive(a):
    g = _zpoly_content(a)
    if g != 1:
        a = [c // g for c in a]
    if a[-1] < 0:
        a = [-c for c in a]
    return a


def _zpoly_prem(a, b):
    """Pseudo-remainder of integer coefficient lists (dense, low first)."""
    a = list(a)
    db = len(b) - 1
    lb = b[-1]
    while len(a) - 1 >= db and any(a):
        da = len(a) - 1
        if a[-1] == 0:
            a.pop()
            continue
        la = a[-1]
        a = [c * lb for c in a]
        shift = da - db
        for j in range(db + 1):
            a[shift + j] -= la * b[j]
        while a and a[-1] == 0:
            a.pop()
        if not a:
            break
    return a


def _zpoly_gcd(a, b):
    a = [c for c in a]
    b = [c for c in b]
    while a and a[-1] == 0:
        a.pop()
    while b and b[-1] == 0:
        b.pop()
    if not a:
        return _zpoly_primitive(b) if b else [0]
    if not b:
        return _zpoly_primitive(a)
    if len(a) < len(b):
        a, b = b, a
    a = _zpoly_primitive(a)
    b = _zpoly_primitive(b)
    while True:
        r = _zpoly_prem(a, b)
        if not r:
            return b
        if len(r) == 1:
            return [1]
        a, b = b, _zpoly_primitive(r)


# ---------------------------------------------------------------------------
# square roots (exact; used by the quadratic factor splitter)
# ---------------------------------------------------------------------------


def vsqrt(v):
    """Exact square root of a value, or None when v is not a square."""
    if isinstance(v, Fraction):
        if v < 0:
            return None
        rn = math.isqrt(v.numerator)
        rd = math.isqrt(v.denominator)
        if rn * rn == v.numerator and rd * rd == v.denominator:
            return Fraction(rn, rd)
        return None
    sn = poly_sqrt(v.num)
    if sn is None:
        return None
    sd = poly_sqrt(v.den)
    if sd is None:
        return None
    return RatFunc(sn, sd, v.depth)


def poly_sqrt(p):
    """Exact square root of a polynomial, or None."""
    if p.is_zero():
        return p
    d = p.degree()
    if d % 2:
        return None
    m = d // 2
    slc = vsqrt(p.lc())
    if slc is None:
        return None
    zero = _zero_like(p.lc())
    s = [zero] * (m + 1)
    s[m] = slc
    two_lc = slc + slc
    for k in range(d - 1, m - 1, -1):
        # coefficient of t^k in s*s must equal p_k; only s[k-m] is unknown
        acc = p.coeff(k)
        total = zero
        for i in range(k - m + 1, m + 1):
            j = k - i
            if 0 <= j <= m and j != k - m:
                total = total + s[i] * s[j]
        s[k - m] = (acc - total) * _inv_val(two_lc)
    cand = Poly(s)
    if cand * cand == p:
        return cand
    return None


def _sqrt_val(v):
    return vsqrt(v)


# ---------------------------------------------------------------------------
# partial-fraction building blocks
# ---------------------------------------------------------------------------


def coprime_split(num, moduli):
    """Split a proper fraction over pairwise-coprime moduli.

    num / (m_0 * m_1 * ... * m_{s-1}) = sum A_k / m_k with deg A_k < deg m_k.
    Requires deg num < sum deg m_k. Returns the list [A_0, ..., A_{s-1}].
    """
    mods = list(moduli)
    if sum(q.degree() for q in mods) <= num.degree():
        raise ValueError("input fraction was not proper")
    out = []
    rest = num
    for idx in range(len(mods) - 1):
        q = mods[idx]
        r = mods[idx + 1]
        for extra in mods[idx + 2:]:
            r = r * extra
        g, s, _t = poly_xgcd(r, q)
        if not (g.degree() == 0 and not g.is_zero()):
            raise ValueError("moduli are not pairwise coprime")
        # s*r = 1 mod q, so the q-part of rest/(q*r) is (rest*s mod q)/q
        a = (rest * s) % q
        out.append(a)
        rest = (rest - a * r).exact_div(q)
    out.append(rest)
    return out


def modular_residue(num, cofactor, modulus):
    """(num * cofactor^{-1}) mod modulus, for cofactor coprime to modulus."""
    if cofactor.is_one():
        return num % modulus
    red = cofactor % modulus if cofactor.degree() >= modulus.degree() else cofactor
    g, s, _t = poly_xgcd(red, modulus)
    if g.degree() != 0:
        raise ValueError("cofactor shares a factor with the modulus")
    return (num * s) % modulus


def padic_expand(a, q):
    """q-adic digits of a polynomial: a = sum digits[j] * q^j, deg digits[j] < deg q."""
    digits = []
    while not a.is_zero():
        quo, rem = a.divmod(q)
        digits.append(rem)
        a = quo
    return digits
