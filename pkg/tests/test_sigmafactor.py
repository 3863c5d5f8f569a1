"""Shift classes, squarefree splitting, and denominator factorization."""

import random
from fractions import Fraction

import pytest

from sumred.algebra import Poly, one_at, poly_gcd, poly_sort_key, zero_at
from sumred.errors import UnsupportedFactorizationError
from sumred.sigmafactor import (factor_monic, shift_equivalence,
                                squarefree_decomposition)

from conftest import H_TOWER, Q_TOWER, parse


def _q(*coeffs):
    return Poly(tuple(Fraction(c) for c in coeffs))


T1 = Poly((zero_at(1), one_at(1)))


def _by_rep(pairs):
    return sorted(pairs, key=lambda fm: poly_sort_key(fm[0]))


def _lin2(const_text):
    return Poly((parse(Q_TOWER, const_text), one_at(1)))


def test_shift_equivalence_is_exact_at_the_bottom_level():
    p = _q(1, 1, 1)
    for k in (-25, -3, 1, 7, 40):
        q = Q_TOWER.sigma_poly(p, 1, k)
        # the exponent is solved from coefficients, not scanned: a tiny
        # window still finds shifts far outside it
        assert shift_equivalence(Q_TOWER, p, q, 1, 2) == k
    assert shift_equivalence(Q_TOWER, p, p, 1, 20) == 0
    assert shift_equivalence(Q_TOWER, p, _q(1, 0, 1), 1, 20) is None
    assert shift_equivalence(Q_TOWER, p, _q(1, 1), 1, 20) is None


def test_shift_equivalence_scans_a_window_above_the_bottom():
    q = H_TOWER.sigma_poly(T1, 2, 2)
    assert shift_equivalence(H_TOWER, T1, q, 2, 20) == 2
    assert shift_equivalence(H_TOWER, T1, q, 2, 1) is None
    back = H_TOWER.sigma_poly(T1, 2, -3)
    assert shift_equivalence(H_TOWER, T1, back, 2, 5) == -3
    shifted_by_x = _lin2("x")
    assert shift_equivalence(H_TOWER, T1, shifted_by_x, 2, 20) is None


def test_squarefree_decomposition_reconstructs():
    rng = random.Random(401)
    pool = [_q(1, 1), _q(-2, 1), _q(3, 0, 1), _q(1, 1, 1), _q(-1, 2, 1)]
    for _ in range(60):
        chosen = rng.sample(range(len(pool)), rng.randint(1, 3))
        powers = [rng.randint(1, 3) for _ in chosen]
        p = _q(1)
        for i, m in zip(chosen, powers):
            p = p * pool[i] ** m
        parts = squarefree_decomposition(p)
        rebuilt = _q(1)
        for fac, mult in parts:
            rebuilt = rebuilt * fac ** mult
            assert poly_gcd(fac, fac.deriv()).degree() == 0
        assert rebuilt == p
        for i, (a, _) in enumerate(parts):
            for b, _ in parts[i + 1:]:
                assert poly_gcd(a, b).degree() == 0


def test_squarefree_input_passes_through():
    p = _q(1, 1) * _q(3, 0, 1)
    assert squarefree_decomposition(p) == [(p, 1)]


def test_factor_monic_bottom_level():
    p = _q(2, 1) ** 2 * _q(3, 1)
    facs = factor_monic(Q_TOWER, p, 1, [], 20)
    assert facs == [(_q(2, 1), 2), (_q(3, 1), 1)]
    # irreducible quadratics come out of the general fallback
    p2 = _q(1, 1, 1) * _q(2, 0, 1)
    facs2 = factor_monic(Q_TOWER, p2, 1, [], 20)
    assert facs2 == _by_rep([(_q(1, 1, 1), 1), (_q(2, 0, 1), 1)])


def test_factor_monic_uses_seeded_representatives():
    rep = _q(1, 0, 1)
    p = Q_TOWER.sigma_poly(rep, 1, 2) * Q_TOWER.sigma_poly(rep, 1, -1)
    facs = factor_monic(Q_TOWER, p, 1, [rep], 20)
    rebuilt = _q(1)
    for fac, mult in facs:
        rebuilt = rebuilt * fac ** mult
    assert rebuilt == p
    assert sorted(m for _f, m in facs) == [1, 1]


def test_factor_monic_level_two_quadratics():
    g = _lin2("-1/x") * _lin2("1/x")
    facs = factor_monic(H_TOWER, g, 2, [], 20)
    assert facs == _by_rep([(_lin2("-1/x"), 1), (_lin2("1/x"), 1)])
    h = _lin2("x") * _lin2("2*x")
    fh = factor_monic(H_TOWER, h, 2, [], 20)
    assert fh == _by_rep([(_lin2("x"), 1), (_lin2("2*x"), 1)])
    irr = Poly((parse(Q_TOWER, "-x"), zero_at(1), one_at(1)))
    assert factor_monic(H_TOWER, irr, 2, [], 20) == [(irr, 1)]


def test_factor_monic_level_two_cubic_with_covering_rep():
    p = T1 * H_TOWER.sigma_poly(T1, 2, 1) * H_TOWER.sigma_poly(T1, 2, -1)
    facs = factor_monic(H_TOWER, p, 2, [T1], 20)
    rebuilt = Poly((one_at(1),))
    for fac, mult in facs:
        rebuilt = rebuilt * fac ** mult
    assert rebuilt == p
    assert len(facs) == 3


def test_factor_monic_rejects_uncovered_cubic_above_bottom():
    cubic = Poly((parse(Q_TOWER, "-x"), zero_at(1), zero_at(1), one_at(1)))
    with pytest.raises(UnsupportedFactorizationError):
        factor_monic(H_TOWER, cubic, 2, [], 20)
