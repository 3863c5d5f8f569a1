"""Summation problems built on top of the reduction engine.

telescope decides summability of one element.  parameterized_telescope
finds every constant combination of several elements that telescopes at
once, which covers creative telescoping when the constant field carries
a free parameter.  sigma_check certifies that an increment opens a
genuine new summation level.  well_generate rebuilds a tower so that
every increment is its own remainder, and depth_reduce pushes an element
through that rebuild, which can lower the nesting depth of the answer.
"""

from collections import namedtuple
from fractions import Fraction

from .algebra import RatFunc, as_fraction, drop, lift, one_at, vdepth, zero_at
from .effbasis import expand_remainder
from .errors import InvalidTowerError
from .reduction import ReductionContext, complete_reduction
from .tower import Generator, TowerSpec

TelescopeResult = namedtuple("TelescopeResult", ["g", "r", "summable"])

SigmaCheckResult = namedtuple(
    "SigmaCheckResult", ["is_sigma_monomial", "g", "remainder"])

BasisRow = namedtuple("BasisRow", ["coeffs", "certificate"])

DepthReduceResult = namedtuple(
    "DepthReduceResult",
    ["iso", "g", "r", "summable", "depth_before", "depth_after"])


class ParamTelescopeBasis:
    """Rows (c_1, ..., c_m, g) with c_1*f_1 + ... + c_m*f_m = delta(g)."""

    def __init__(self, rows):
        self.rows = tuple(rows)

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)

    def __getitem__(self, i):
        return self.rows[i]

    def __repr__(self):
        return f"ParamTelescopeBasis({list(self.rows)!r})"


class IsomorphismMap:
    """Field map between two towers, fixed by images of the generators."""

    def __init__(self, source, target, images):
        self.source = source
        self.target = target
        self.images = tuple(images)

    def apply(self, v):
        return substitute(self.source, v, self.images, self.target)


def telescope(ctx, f):
    """Sigma-pair of f together with the summability verdict."""
    g, r = complete_reduction(ctx, ctx.tower.lift_to_top(f))
    return TelescopeResult(g, r, _is_zero(r))


def sigma_check(ctx, a, level=None):
    """Decide whether increment a opens a new level above `level`."""
    tower = ctx.tower
    if level is None:
        level = tower.nlevels
    if not 0 <= level <= tower.nlevels:
        raise ValueError(f"no tower level {level}")
    depth = tower.nparams + level
    a = _at_depth(a, depth)
    g, r = complete_reduction(ctx, a, depth)
    return SigmaCheckResult(not _is_zero(r), g, r)


def _at_depth(v, depth):
    """Coerce v to exactly `depth`, erroring if higher variables appear."""
    while not isinstance(v, Fraction) and vdepth(v) > depth:
        below = drop(v)
        if below is None:
            raise InvalidTowerError(
                "increment uses generators at or above the requested level")
        v = below
    return lift(v, depth)


def parameterized_telescope(ctx, fs):
    """Basis of all (c_1, ..., c_m, g) with sum of c_l*f_l equal delta(g)."""
    tower = ctx.tower
    fs = [tower.lift_to_top(f) for f in fs]
    if not fs:
        raise ValueError("need at least one input element")
    pairs = [complete_reduction(ctx, f) for f in fs]
    coords = [expand_remainder(ctx, r, tower.full_depth) for _g, r in pairs]
    elements = sorted({e for c in coords for e in c},
                      key=lambda e: e.sort_key())
    m = len(fs)
    rows = [[_cnorm(ctx, c.get(e)) for c in coords] for e in elements]
    out = [BasisRow((_czero(ctx),) * m, lift(Fraction(1), tower.full_depth))]
    for vec in nullspace_basis(rows, m, _czero(ctx), _cone(ctx)):
        w = zero_at(tower.full_depth)
        for c, (g, _r) in zip(vec, pairs):
            if not _is_zero(c):
                w = w + lift(c, tower.full_depth) * g
        out.append(BasisRow(vec, w))
    return ParamTelescopeBasis(out)


def substitute(source, v, images, target):
    """Map v through generator images, identity on constants and params."""
    td = target.full_depth
    npar = source.nparams

    def vimg(u, depth):
        if isinstance(u, Fraction) or depth <= npar:
            return lift(u, td)
        if isinstance(u, RatFunc):
            return pimg(u.num, depth) / pimg(u.den, depth)
        return pimg(u, depth)

    def pimg(p, depth):
        img = images[source.level_of_depth(depth) - 1]
        acc = zero_at(td)
        for c in reversed(p.coeffs):
            acc = acc * img + vimg(c, depth - 1)
        return acc

    return vimg(v, vdepth(v))


def well_generate(ctx):
    """Rebuild the tower so that every increment is its own remainder."""
    src = ctx.tower
    carried = {lv: tuple(ctx.reps.get(lv, ()))
               for lv in range(1, src.nlevels + 1)}
    used = {g.name for g in src.gens} | set(src.params)
    fixed = []
    gparts = []
    renamed = 0
    for i, old in enumerate(src.gens, start=1):
        prefix = _spec_with(src, ctx, fixed, carried)
        step = ReductionContext(prefix)
        imgs = [lift(prefix.gen_var(j), prefix.full_depth)
                + lift(gparts[j - 1], prefix.full_depth)
                for j in range(1, i)]
        b = substitute(src, old.delta, imgs, prefix)
        g, r = complete_reduction(step, b)
        if _is_zero(r):
            raise InvalidTowerError(
                f"increment of {old.name!r} telescopes below its level; "
                f"the level is redundant")
        for lv, reps in step.reps.items():
            carried[lv] = tuple(reps)
        if _is_zero(g):
            name = old.name
        else:
            renamed += 1
            name = _fresh_name(f"u{renamed}", used)
        used.add(name)
        fixed.append((name, r))
        gparts.append(g)
    final = _spec_with(src, ctx, fixed, carried)
    images = [lift(final.gen_var(i), final.full_depth)
              + lift(gparts[i - 1], final.full_depth)
              for i in range(1, src.nlevels + 1)]
    return final, IsomorphismMap(src, final, images)


def depth_reduce(ctx, f):
    """Reduce f after transporting it into the well generated tower."""
    tower = ctx.tower
    f = tower.lift_to_top(f)
    new_spec, iso = well_generate(ctx)
    image = iso.apply(f)
    nctx = ReductionContext(new_spec)
    g, r = complete_reduction(nctx, image)
    before = nesting_depth(tower, f)
    after = max(nesting_depth(new_spec, g), nesting_depth(new_spec, r))
    return DepthReduceResult(iso, g, r, _is_zero(r), before, after)


def nesting_depth(tower, v):
    """Length of the deepest increment chain reachable from v."""
    memo = {}

    def gen_depth(level):
        if level not in memo:
            memo[level] = 1 + expr_depth(tower.gens[level - 1].delta)
        return memo[level]

    def expr_depth(u):
        return max((gen_depth(i) for i in _levels_used(tower, u)), default=0)

    return expr_depth(v)


def _levels_used(tower, v):
    """Set of levels whose generator actually appears in v."""
    npar = tower.nparams
    out = set()

    def walk(u, depth):
        if isinstance(u, Fraction) or depth <= npar:
            return
        if isinstance(u, RatFunc):
            wpoly(u.num, depth)
            wpoly(u.den, depth)
        else:
            wpoly(u, depth)

    def wpoly(p, depth):
        if p.degree() > 0:
            out.add(depth - npar)
        for c in p.coeffs:
            walk(c, depth - 1)

    walk(v, vdepth(v))
    return out


def _spec_with(src, ctx, fixed, carried):
    gens = tuple(Generator(name, delta, seed_reps=carried.get(lv, ()))
                 for lv, (name, delta) in enumerate(fixed, start=1))
    return TowerSpec(gens, params=src.params,
                     se_window=ctx.se_window, ring_fast_path=ctx.fast_path)


def _fresh_name(base, used):
    name = base
    while name in used:
        name += "_"
    return name


def nullspace_basis(rows, m, zero, one):
    """Solution basis, first nonzero entry 1, ordered by pivot column."""
    mat = [list(r) for r in rows]
    pivots = []
    r = 0
    for col in range(m):
        piv = next((i for i in range(r, len(mat))
                    if not _is_zero(mat[i][col])), None)
        if piv is None:
            continue
        mat[r], mat[piv] = mat[piv], mat[r]
        inv = _cinv(mat[r][col])
        mat[r] = [e * inv for e in mat[r]]
        for i in range(len(mat)):
            if i != r and not _is_zero(mat[i][col]):
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
    out = []
    for j in range(m):
        if j in pivots:
            continue
        vec = [zero] * m
        vec[j] = one
        for i, pc in enumerate(pivots):
            vec[pc] = -mat[i][j]
        lead = next(k for k in range(m) if not _is_zero(vec[k]))
        inv = _cinv(vec[lead])
        out.append(tuple(e * inv for e in vec))
    out.sort(key=lambda v: next(k for k in range(m) if not _is_zero(v[k])))
    return out


def _czero(ctx):
    n = ctx.tower.nparams
    return Fraction(0) if n == 0 else zero_at(n)


def _cone(ctx):
    n = ctx.tower.nparams
    return Fraction(1) if n == 0 else one_at(n)


def _cnorm(ctx, v):
    if v is None:
        return _czero(ctx)
    n = ctx.tower.nparams
    if n == 0:
        return v if isinstance(v, Fraction) else as_fraction(v)
    return lift(v, n)


def _cinv(v):
    if isinstance(v, Fraction):
        return Fraction(1) / v
    return v.inv()


def _is_zero(v):
    if isinstance(v, Fraction):
        return v == 0
    return v.is_zero()
