"""Towers of nested-sum generators over a constant field.

A tower fixes a constant field C = Q(params) and a list of generators
t_1, ..., t_n. The shift automorphism acts as the identity on C and sends
t_i to t_i + a_i, where the increment a_i only involves generators below
level i. Values are the algebra-module chain: depth 1..nparams are the
parameters, depth nparams+i is generator i, so a value of depth
nparams + i lives in C(t_1, ..., t_i).

The increment of a level-1 generator always lies in C, so its k-fold shift
collapses to a single substitution t -> t + k*a. Higher levels iterate
single shifts, with the powers of (t + a) cached per level and direction.
"""

from __future__ import annotations

import re
from fractions import Fraction

from .algebra import (
    Poly,
    RatFunc,
    drop,
    lift,
    one_at,
    vdepth,
    zero_at,
)
from .errors import InvalidTowerError

_NAME_OK = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")


class Generator:
    """One tower level: a name, its shift increment, optional seed factors.

    seed_reps are monic polynomials in this generator (coefficients from the
    field below) that pre-populate the level's representative set for
    shift-equivalence classification, pinning which shifted copy of a factor
    counts as the class representative.
    """

    __slots__ = ("name", "delta", "seed_reps")

    def __init__(self, name, delta, seed_reps=()):
        self.name = name
        self.delta = delta
        self.seed_reps = tuple(seed_reps)


class TowerSpec:
    """Immutable description of a tower plus the shift automorphism."""

    def __init__(self, gens, params=(), se_window=20, ring_fast_path="auto"):
        self.params = tuple(params)
        self.se_window = int(se_window)
        if ring_fast_path not in ("auto", "on", "off"):
            raise InvalidTowerError(
                f"ring_fast_path must be auto, on or off, not {ring_fast_path!r}")
        self.ring_fast_path = ring_fast_path
        if self.se_window < 1:
            raise InvalidTowerError("se_window must be at least 1")

        seen = set()
        for name in self.params:
            if not _NAME_OK.match(name):
                raise InvalidTowerError(f"bad parameter name {name!r}")
            if name in seen:
                raise InvalidTowerError(f"duplicate name {name!r}")
            seen.add(name)

        self.nparams = len(self.params)
        fixed = []
        for i, gen in enumerate(gens):
            level = i + 1
            if not _NAME_OK.match(gen.name):
                raise InvalidTowerError(f"bad generator name {gen.name!r}")
            if gen.name in seen:
                raise InvalidTowerError(f"duplicate name {gen.name!r}")
            seen.add(gen.name)
            home = self.nparams + level - 1
            delta = gen.delta
            if vdepth(delta) > home:
                delta = self._try_drop_to(delta, home)
                if delta is None:
                    raise InvalidTowerError(
                        f"increment of {gen.name!r} uses {gen.name!r} or a "
                        f"higher generator")
            delta = lift(delta, home)
            if _value_is_zero(delta):
                raise InvalidTowerError(
                    f"increment of {gen.name!r} is zero; drop the level instead")
            seeds = []
            for rep in gen.seed_reps:
                rep = self._check_seed(rep, gen.name, home)
                seeds.append(rep)
            fixed.append(Generator(gen.name, delta, seeds))
        self.gens = tuple(fixed)
        self.nlevels = len(self.gens)
        self.full_depth = self.nparams + self.nlevels
        self._by_name = {name: d + 1 for d, name in enumerate(self.params)}
        for i, gen in enumerate(self.gens):
            self._by_name[gen.name] = self.nparams + i + 1
        self._pows = {}

    @staticmethod
    def _try_drop_to(v, depth):
        while vdepth(v) > depth:
            v = drop(v)
            if v is None:
                return None
        return v

    @staticmethod
    def _check_seed(rep, gname, home):
        if not isinstance(rep, Poly):
            raise InvalidTowerError(f"seed for {gname!r} must be a polynomial")
        if rep.degree() < 1:
            raise InvalidTowerError(f"seed for {gname!r} must be nonconstant")
        lc = rep.lc()
        if not _value_is_one(lc):
            raise InvalidTowerError(f"seed for {gname!r} must be monic")
        for c in rep.coeffs:
            if vdepth(c) != home:
                raise InvalidTowerError(
                    f"seed for {gname!r} has coefficients at the wrong level")
        return rep

    # -- naming and depths -------------------------------------------------

    def depth_of_level(self, level):
        if not 1 <= level <= self.nlevels:
            raise ValueError(f"no generator level {level}")
        return self.nparams + level

    def level_of_depth(self, depth):
        return depth - self.nparams

    def depth_of_name(self, name):
        d = self._by_name.get(name)
        if d is None:
            raise KeyError(f"unknown variable {name!r}")
        return d

    def var(self, name):
        """The named variable as a value at its own depth."""
        d = self.depth_of_name(name)
        t = Poly((zero_at(d - 1), one_at(d - 1)))
        return RatFunc(t, Poly((one_at(d - 1),)), d, _trusted=True)

    def gen_var(self, level):
        return self.var(self.gens[level - 1].name)

    def delta_of_level(self, level):
        """Shift increment of generator `level`, at depth one below it."""
        return self.gens[level - 1].delta

    # -- automorphism --------------------------------------------------------

    def sigma(self, v, k=1):
        """Apply the shift k times (k may be negative)."""
        if k == 0 or isinstance(v, Fraction):
            return v
        d = v.depth
        if d <= self.nparams:
            return v
        num = self.sigma_poly(v.num, d, k)
        den = self.sigma_poly(v.den, d, k)
        # an automorphism preserves coprimality and keeps the denominator monic
        return RatFunc(num, den, d, _trusted=True)

    def sigma_poly(self, p, depth, k=1):
        """Shift a polynomial in the depth-level variable, coefficients below."""
        if k == 0 or p.is_zero() or depth <= self.nparams:
            return p
        level = depth - self.nparams
        if level == 1:
            if p.degree() == 0:
                return p
            if abs(k) == 1:
                return self._step(p, depth, k, coeffs_fixed=True)
            a = self.gens[0].delta
            return p.compose_linear(a * k)
        step = 1 if k > 0 else -1
        for _ in range(abs(k)):
            p = self._step(p, depth, step, coeffs_fixed=False)
        return p

    def _step(self, p, depth, direction, coeffs_fixed):
        if coeffs_fixed:
            coeffs = p.coeffs
        else:
            coeffs = [self.sigma(c, direction) for c in p.coeffs]
        if len(coeffs) == 1:
            return Poly(coeffs)
        pows = self._pow_list(depth, direction, len(coeffs) - 1)
        out = pows[0].scale(coeffs[0])
        for j in range(1, len(coeffs)):
            c = coeffs[j]
            if _value_is_zero(c):
                continue
            out = out + pows[j].scale(c)
        return out

    def _pow_list(self, depth, direction, upto):
        key = (depth, direction)
        pows = self._pows.get(key)
        if pows is None:
            level = depth - self.nparams
            a = self.gens[level - 1].delta
            shift = a if direction > 0 else -self.sigma(a, -1)
            below = depth - 1
            base = Poly((shift, one_at(below)))
            pows = [Poly((one_at(below),)), base]
            self._pows[key] = pows
        while len(pows) <= upto:
            pows.append(pows[-1] * pows[1])
        return pows

    def delta(self, v):
        """Forward difference: shift of v minus v."""
        return self.sigma(v) - v

    # -- structure tests -----------------------------------------------------

    def level(self, v):
        """Smallest generator level whose field contains v (0 for constants)."""
        while True:
            below = drop(v)
            if below is None:
                break
            v = below
        return max(0, vdepth(v) - self.nparams)

    def is_ring_element(self, v):
        """True when v is polynomial in every generator (params stay free)."""
        if isinstance(v, Fraction):
            return True
        if v.depth <= self.nparams:
            return True
        if not v.den.is_one():
            return False
        return all(self.is_ring_element(c) for c in v.num.coeffs)

    def poly_increments_above_level_one(self):
        """True when every increment above level 1 is polynomial."""
        return all(self.is_ring_element(g.delta) for g in self.gens[1:])

    def split_poly_proper(self, v):
        """v = polynomial part + proper part at its own depth."""
        q, r = v.num.divmod(v.den)
        proper = RatFunc(r, v.den, v.depth, _trusted=True)
        return q, proper

    def lift_to_top(self, v):
        return lift(v, self.full_depth)


def _value_is_zero(v):
    if isinstance(v, Fraction):
        return not v
    return v.is_zero()


def _value_is_one(v):
    if isinstance(v, Fraction):
        return v == 1
    return v.is_one()
