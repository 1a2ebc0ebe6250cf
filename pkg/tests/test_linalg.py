import random
from fractions import Fraction

import numpy as np
import pytest

from prolie import linalg as la
from prolie.scalars import GQ, gq


def _rand_matrix(rng, n, span=4, imag=False):
    def entry():
        re = Fraction(rng.randint(-span, span), rng.randint(1, 3))
        im = Fraction(rng.randint(-span, span), rng.randint(1, 3)) if imag else 0
        return GQ(re, im)

    return [[entry() for _ in range(n)] for _ in range(n)]


def test_rref_canonical_and_rank():
    a = la.mat([[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    red, pivots = la.rref(a)
    assert pivots == [0, 1]
    assert red == la.mat([[1, 0, 1], [0, 1, 1]])
    assert la.rank(a) == 2
    # same row space, different presentation -> same rref
    b = la.mat([[0, 1, 1], [1, 3, 4]])
    assert la.rref(b)[0] == red


def test_solve_and_kernel():
    a = la.mat([[1, 2], [3, 4]])
    x = la.solve(a, [gq(5), gq(11)])
    assert la.mat_vec(a, x) == [gq(5), gq(11)]
    assert la.solve(la.mat([[1, 1], [1, 1]]), [gq(0), gq(1)]) is None
    k = la.kernel(la.mat([[1, 2, 3]]))
    assert len(k) == 2
    for v in k:
        assert la.mat_vec(la.mat([[1, 2, 3]]), v) == [gq(0)]


def test_inverse_roundtrip():
    rng = random.Random(7)
    for _ in range(10):
        a = _rand_matrix(rng, 4, imag=True)
        inv = la.inverse(a)
        if inv is None:
            continue
        assert la.mat_eq(la.mat_mul(a, inv), la.eye(4))


def test_char_poly_matches_faddeev_oracle():
    rng = random.Random(11)
    for n in (1, 2, 3, 5, 6):
        for _ in range(6):
            a = _rand_matrix(rng, n, imag=(n % 2 == 0))
            assert la.char_poly(a) == la.char_poly_faddeev(a)


def test_char_poly_matches_numpy_on_floats():
    rng = random.Random(3)
    a = _rand_matrix(rng, 5)
    p = la.char_poly(a)
    num = np.poly(la.to_complex_array(a))  # descending, monic
    got = np.array([complex(c) for c in reversed(p)])
    assert np.allclose(num, got, atol=1e-8)


def test_poly_divmod_gcd():
    # (x-1)^2 (x+2) against (x-1)(x-3)
    x1 = [gq(-1), gq(1)]
    p = la.poly_mul(la.poly_mul(x1, x1), [gq(2), gq(1)])
    q = la.poly_mul(x1, [gq(-3), gq(1)])
    g = la.poly_gcd(p, q)
    assert g == x1
    quo, rem = la.poly_divmod(p, x1)
    assert rem == [gq(0)]
    assert la.poly_mul(quo, x1) == p


def test_yun_squarefree():
    x = [gq(0), gq(1)]
    f1 = [gq(-1), gq(1)]          # x - 1
    f2 = [gq(1), gq(1)]           # x + 1
    p = la.poly_mul(la.poly_mul(f1, f1), la.poly_mul(la.poly_mul(f2, f2), f2))
    dec = la.yun_squarefree(p)
    assert dec == [(f1, 2), (f2, 3)]
    rebuilt = [gq(1)]
    for f, k in dec:
        for _ in range(k):
            rebuilt = la.poly_mul(rebuilt, f)
    assert rebuilt == la.poly_monic(p)


def test_certified_roots_exact_and_multiplicity():
    # x^2 (x^2 + 1) (x - 1/2)^2
    x = [gq(0), gq(1)]
    p = la.poly_mul(la.poly_mul(x, x), [gq(1), gq(0), gq(1)])
    half = [gq(Fraction(-1, 2)), gq(1)]
    p = la.poly_mul(p, la.poly_mul(half, half))
    roots = la.certified_roots(p)
    by_exact = {str(e.exact): e for e in roots if e.exact is not None}
    assert by_exact["0"].multiplicity == 2
    assert by_exact["1/2"].multiplicity == 2
    assert by_exact["i"].multiplicity == 1
    assert by_exact["-i"].multiplicity == 1
    assert sum(e.multiplicity for e in roots) == 6


def test_certified_roots_irrational_radius():
    # x^2 - 2: roots +-sqrt(2), not Gaussian rational
    p = [gq(-2), gq(0), gq(1)]
    roots = la.certified_roots(p)
    assert sum(e.multiplicity for e in roots) == 2
    vals = sorted(e.value.real for e in roots)
    assert abs(vals[0] + 2 ** 0.5) < 1e-9
    assert abs(vals[1] - 2 ** 0.5) < 1e-9
    for e in roots:
        if e.exact is None:
            assert 0 < e.radius < 1e-8


def test_certified_roots_cover_true_roots():
    # random exact polynomials: every true root (from numpy on the exact
    # coefficients) lies inside a reported disk of matching total count
    rng = random.Random(23)
    for _ in range(10):
        deg = rng.randint(2, 6)
        p = [gq(rng.randint(-5, 5), rng.randint(-2, 2)) for _ in range(deg)] + [gq(1)]
        entries = la.certified_roots(p)
        assert sum(e.multiplicity for e in entries) == deg
        for z in np.roots([complex(c) for c in reversed(p)]):
            dist = min(abs(z - e.value) - (e.radius + 1e-7) for e in entries)
            assert dist <= 0


def test_deflate_root():
    p = la.poly_mul([gq(-2), gq(1)], [gq(5), gq(3)])
    q = la.deflate_root(p, gq(2))
    assert q == [gq(5), gq(3)]
    with pytest.raises(ValueError):
        la.deflate_root(p, gq(7))


def test_symmetric_signature():
    assert la.symmetric_signature(la.mat([[2, 0], [0, -3]])) == (1, 1, 0)
    assert la.symmetric_signature(la.mat([[0, 1], [1, 0]])) == (1, 1, 0)
    assert la.symmetric_signature(la.mat([[0, 0], [0, 0]])) == (0, 0, 2)
    a = la.mat([[2, 1, 0], [1, 2, 0], [0, 0, 0]])
    assert la.symmetric_signature(a) == (2, 0, 1)


def test_signature_matches_numpy_eigs():
    rng = random.Random(5)
    for _ in range(10):
        n = rng.randint(2, 5)
        b = [[Fraction(rng.randint(-4, 4)) for _ in range(n)] for _ in range(n)]
        sym = [[GQ(b[i][j] + b[j][i]) for j in range(n)] for i in range(n)]
        pos, neg, zero = la.symmetric_signature(sym)
        eigs = np.linalg.eigvalsh(la.to_real_array(sym))
        assert pos == int(np.sum(eigs > 1e-9))
        assert neg == int(np.sum(eigs < -1e-9))
        assert zero == int(np.sum(np.abs(eigs) <= 1e-9))


def test_integer_diagonal_form_and_kernel():
    a = [[2, 4, 4], [-6, 6, 12], [10, 4, 16]]
    d, l, r, rk = la.integer_diagonal_form(a)
    ar = np.array(a)
    lr = np.array(l)
    rr = np.array(r)
    prod = lr @ ar @ rr
    assert np.array_equal(prod, np.array(d))
    assert abs(round(float(np.linalg.det(lr)))) == 1
    assert abs(round(float(np.linalg.det(rr)))) == 1
    # kernel of a rank-deficient matrix
    b = [[1, 2], [2, 4], [3, 6]]
    kern = la.integer_left_kernel(b)
    assert len(kern) == 2
    for c in kern:
        assert all(v == 0 for v in (np.array(c) @ np.array(b)))


def test_char_poly_scaling_covariance():
    # p_{sx}(lambda) = s^n p_x(lambda/s): coefficient k scales by s^(n-k)
    rng = random.Random(9)
    a = _rand_matrix(rng, 4)
    s = GQ(Fraction(3, 2))
    p = la.char_poly(a)
    ps = la.char_poly(la.mat_scale(a, s))
    n = 4
    spow = [GQ(1)]
    for _ in range(n):
        spow.append(spow[-1] * s)
    assert ps == [spow[n - k] * p[k] for k in range(n + 1)]
