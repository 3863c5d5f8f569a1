"""Complete reduction of tower elements into a difference plus a remainder.

For a value f the reduction produces (g, r) with f = shift(g) - g + r and r
canonical: f is a difference of a tower element exactly when r is zero, and
equal remainders certify that two inputs differ by a difference. The zero
test and the equality test for indefinite nested sums both ride on this.

A ReductionContext carries the mutable session state: the representative
sets that pin shift classes, the per-level reduction pairs and echelon
bases, and memo tables. Results are deterministic for a fixed tower, seed
list and shift window; reusing one context across calls keeps earlier
choices (and therefore earlier answers) stable.

The split into a polynomial part and a proper part is preserved by the
shift, so the two reduce independently:

 * proper parts: the denominator factors into shifted representative
   powers, a partial-fraction pass isolates each one, and a telescoping
   chain moves every factor to shift zero. What stays is not a difference
   unless it cancels completely.
 * polynomial parts: coefficient-wise reduction below the level (the
   auxiliary pass), then elimination of the summable residue against an
   echelon basis whose rows are exact differences with known remainders.
"""

from __future__ import annotations

from fractions import Fraction

from .algebra import (
    Poly,
    RatFunc,
    coprime_split,
    frac_at,
    lift,
    one_at,
    vdepth,
    zero_at,
)
from .effbasis import coordinate_of, leading_coordinate
from .errors import InvalidTowerError, SummationError
from .sigmafactor import factor_monic, shift_equivalence


class ReductionContext:
    """Session state for reductions over one tower."""

    def __init__(self, tower, se_window=None, fast_path=None):
        self.tower = tower
        self.se_window = tower.se_window if se_window is None else int(se_window)
        self.fast_path = tower.ring_fast_path if fast_path is None else fast_path
        if self.fast_path not in ("auto", "on", "off"):
            raise ValueError(f"fast_path must be auto, on or off, not {self.fast_path!r}")
        self.reps = {level: list(tower.gens[level - 1].seed_reps)
                     for level in range(1, tower.nlevels + 1)}
        self.notes = []
        self._factor_cache = {}
        self._classify_cache = {}
        self._first = {}
        self._second = {}
        self._echelon = {}
        self._memo = {}

    # -- shift-class bookkeeping -------------------------------------------

    def factor(self, p, depth):
        """Monic irreducible factorization, cached."""
        key = (depth, p)
        hit = self._factor_cache.get(key)
        if hit is None:
            level = depth - self.tower.nparams
            hit = factor_monic(self.tower, p, depth, self.reps[level],
                               self.se_window)
            self._factor_cache[key] = hit
        return hit

    def classify_den(self, den, depth):
        """Factor den and name each irreducible as (representative, shift, mult).

        Unmatched irreducibles become new representatives at shift zero, in
        the deterministic order the factorization lists them.
        """
        key = (depth, den)
        hit = self._classify_cache.get(key)
        if hit is not None:
            return hit
        level = depth - self.tower.nparams
        reps = self.reps[level]
        out = []
        for irr, mult in self.factor(den, depth):
            placed = False
            for rep in reps:
                k = shift_equivalence(self.tower, rep, irr, depth,
                                      self.se_window)
                if k is not None:
                    out.append((rep, k, mult))
                    placed = True
                    break
            if not placed:
                reps.append(irr)
                self.notes.append(("new-representative", level, irr))
                out.append((irr, 0, mult))
        out.sort(key=_component_key)
        out = tuple(out)
        self._classify_cache[key] = out
        return out

    # -- per-level reduction data -------------------------------------------

    def first_pair(self, level):
        """(g, v) with increment = shift(g) - g + v, v the canonical residue."""
        hit = self._first.get(level)
        if hit is None:
            depth = self.tower.depth_of_level(level)
            a = self.tower.gens[level - 1].delta
            hit = complete_reduction(self, a, depth - 1)
            self._first[level] = hit
        return hit

    def second_pair(self, level):
        """Pivot coordinate of the level's residue; validates the level."""
        hit = self._second.get(level)
        if hit is None:
            _g, v = self.first_pair(level)
            if _is_zero(v):
                name = self.tower.gens[level - 1].name
                raise InvalidTowerError(
                    f"increment of {name!r} is a difference of elements "
                    f"below it; the tower level is redundant")
            hit = leading_coordinate(self, v, self.tower.depth_of_level(level) - 1)
            self._second[level] = hit
        return hit

    def echelon_entry(self, level, i):
        """The i-th echelon pair (w, b): both polynomials in the level
        variable, b of degree exactly i, with shift(w) - w = b."""
        depth = self.tower.depth_of_level(level)
        below = depth - 1
        rows = self._echelon.get(level)
        if rows is None:
            g_t, v = self.first_pair(level)
            self.second_pair(level)
            w0 = Poly((-g_t, one_at(below)))
            rows = [(w0, Poly((v,)))]
            self._echelon[level] = rows
        g_t, v = self._first[level]
        while len(rows) <= i:
            j = len(rows)
            inv = frac_at(Fraction(1, j + 1), below)
            a = Poly((zero_at(below),) * j + (-g_t, inv))
            mono_v = Poly((zero_at(below),) * j + (v,))
            wtil = self.delta_poly(a, depth) - mono_v
            if wtil.degree() >= j:
                raise AssertionError("echelon extension degree did not drop")
            q, r = auxiliary_reduction(self, wtil, depth)
            rows.append((a - q, mono_v + r))
        return rows[i]

    def delta_poly(self, p, depth):
        return self.tower.sigma_poly(p, depth, 1) - p

    def memo(self, depth):
        table = self._memo.get(depth)
        if table is None:
            table = {}
            self._memo[depth] = table
        return table


def _component_key(comp):
    from .algebra import poly_sort_key

    rep, shift, _mult = comp
    return (rep.degree(), poly_sort_key(rep), shift)


# ---------------------------------------------------------------------------
# proper part
# ---------------------------------------------------------------------------


def reduce_proper(ctx, f, depth):
    """Reduce a proper fraction; returns (g, r) as values at the same depth.

    Every denominator factor is moved to shift zero through a telescoping
    chain; the recombined shift-zero leftovers form the remainder.
    """
    zero = zero_at(depth)
    if f.num.is_zero():
        return zero, zero
    comps = ctx.classify_den(f.den, depth)
    moduli = [ctx.tower.sigma_poly(rep ** mult, depth, shift)
              for rep, shift, mult in comps]
    pieces = coprime_split(f.num, moduli)
    g = zero
    r = zero
    tower = ctx.tower
    for (rep, shift, mult), num, modulus in zip(comps, pieces, moduli):
        if num.is_zero():
            continue
        repm = rep ** mult if shift != 0 else modulus
        if shift == 0:
            r = r + RatFunc(num, repm, depth, _trusted=True)
            continue
        if shift > 0:
            cur_num = num
            cur_den = tower.sigma_poly(repm, depth, shift - 1)
            for _i in range(shift):
                cur_num = tower.sigma_poly(cur_num, depth, -1)
                g = g + RatFunc(cur_num, cur_den, depth, _trusted=True)
                cur_den = tower.sigma_poly(cur_den, depth, -1)
            r = r + RatFunc(cur_num, repm, depth, _trusted=True)
        else:
            cur_num = num
            cur_den = modulus
            for _i in range(-shift):
                g = g - RatFunc(cur_num, cur_den, depth, _trusted=True)
                cur_num = tower.sigma_poly(cur_num, depth, 1)
                cur_den = tower.sigma_poly(cur_den, depth, 1)
            r = r + RatFunc(cur_num, repm, depth, _trusted=True)
    return g, r


# ---------------------------------------------------------------------------
# polynomial part
# ---------------------------------------------------------------------------


def auxiliary_reduction(ctx, p, depth):
    """Coefficient-wise reduction of a polynomial in the level variable.

    Returns polynomials (q, r) with p = shift(q) - q + r and every
    coefficient of r a canonical remainder one level below.
    """
    below = depth - 1
    q = Poly(())
    r = Poly(())
    work = p
    while not work.is_zero():
        d = work.degree()
        gd, rd = complete_reduction(ctx, work.lc(), below)
        pad = (zero_at(below),) * d
        mono_g = Poly(pad + (gd,))
        mono_r = Poly(pad + (rd,))
        work = work - ctx.delta_poly(mono_g, depth) - mono_r
        if work.degree() >= d:
            raise AssertionError("auxiliary reduction degree did not drop")
        q = q + mono_g
        r = r + mono_r
    return q, r


def reduce_polynomial(ctx, p, depth):
    """Reduce a polynomial part; returns (q, v) polynomials with
    p = shift(q) - q + v and v a canonical remainder."""
    q, v = auxiliary_reduction(ctx, p, depth)
    if v.is_zero():
        return q, v
    level = depth - ctx.tower.nparams
    element, c = ctx.second_pair(level)
    below = depth - 1
    for j in range(v.degree(), -1, -1):
        cj = v.coeff(j, below)
        ctil = coordinate_of(ctx, element, cj, below)
        if _is_zero(ctil):
            continue
        ratio = lift(_div(ctil, c), below)
        w_j, b_j = ctx.echelon_entry(level, j)
        v = v - b_j.scale(ratio)
        q = q + w_j.scale(ratio)
    return q, v


# ---------------------------------------------------------------------------
# the complete reduction
# ---------------------------------------------------------------------------


def complete_reduction(ctx, f, depth=None):
    """Split f into (g, r): f = shift(g) - g + r with r canonical.

    f is a difference of a tower element iff r is zero; r is C-linear in f,
    and two values have equal remainders iff they differ by a difference.
    """
    if depth is None:
        depth = vdepth(f)
    npar = ctx.tower.nparams
    if isinstance(f, Fraction) or depth <= npar:
        return (_zero_like_value(f, depth), f)
    table = ctx.memo(depth)
    hit = table.get(f)
    if hit is not None:
        return hit
    poly, proper = ctx.tower.split_poly_proper(f)
    if (ctx.fast_path == "on" and depth - npar >= 2
            and not proper.num.is_zero()):
        raise SummationError(
            "input leaves the polynomial ring above level 1 but the ring "
            "fast path is forced on")
    if poly.is_zero():
        g_poly, v_poly = Poly(()), Poly(())
    else:
        g_poly, v_poly = reduce_polynomial(ctx, poly, depth)
    g2, r2 = reduce_proper(ctx, proper, depth)
    one = Poly((one_at(depth - 1),))
    g = RatFunc(g_poly, one, depth, _trusted=True) + g2
    r = RatFunc(v_poly, one, depth, _trusted=True) + r2
    result = (g, r)
    table[f] = result
    return result


def _zero_like_value(f, depth):
    if isinstance(f, Fraction):
        return Fraction(0)
    return zero_at(depth)


def _is_zero(v):
    if isinstance(v, Fraction):
        return not v
    return v.is_zero()


def _div(a, b):
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a / b
    if isinstance(a, Fraction):
        return b.inv() * a
    return a / b
