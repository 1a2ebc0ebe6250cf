import cmath
import math
import random
from fractions import Fraction

import numpy as np
import pytest

from prolie import builders as bld
from prolie import linalg as la
from prolie import spectral as sp
from prolie.algebra import LieAlgebra
from prolie.scalars import GQ, gq

TWO_PI = 2 * math.pi


def test_spectrum_zero_matrix():
    rep = sp.spectrum(la.zeros(4, 4))
    assert len(rep.entries) == 1
    e = rep.entries[0]
    assert e.exact == GQ(0) and e.multiplicity == 4


def test_spectrum_ad_u_motion():
    alg = bld.motion_plane()
    rep = sp.spectrum_of_ad(alg.basis_element("U"))
    exact = {str(e.exact): e.multiplicity for e in rep.entries}
    assert exact == {"0": 1, "i": 1, "-i": 1}


def test_spectrum_blockwise_matches_plain():
    rng = random.Random(5)
    alg = bld.direct_sum(bld.motion_plane(), bld.heisenberg())
    assert alg.ideal_prefixes == (3, 6)
    x = bld.random_element(alg, rng)
    m = alg.ad_matrix(x)
    rep_block = sp.spectrum(m, alg.ideal_prefixes)
    rep_plain = sp.spectrum(m)
    assert rep_block.char_poly == rep_plain.char_poly
    a = [(e.value, e.multiplicity, e.error_radius) for e in rep_block.entries]
    b = [(e.value, e.multiplicity, e.error_radius) for e in rep_plain.entries]
    assert sp.match_value_multisets(a, b)


def test_exp_regular_trivial_and_motion():
    alg = bld.motion_plane()
    assert sp.is_exp_regular(alg.zero()).status == sp.REGULAR
    assert sp.is_exp_regular(alg.basis_element("U")).status == sp.REGULAR


def test_exp_regular_two_pi_exact_path():
    alg = bld.motion_plane()
    u = alg.basis_element("U")
    v = sp.is_exp_regular(u, two_pi_scale=True)  # the element 2*pi*U
    assert v.status == sp.SINGULAR and v.exact
    assert v.offending_integer == 1
    assert abs(v.offending_eigenvalue - complex(0, TWO_PI)) < 1e-12
    # half of it is regular: eigenvalues +-pi*i
    half = u.scale(Fraction(1, 2))
    assert sp.is_exp_regular(half, two_pi_scale=True).status == sp.REGULAR


def test_exp_regular_float_near_two_pi():
    alg = bld.motion_plane()
    c = Fraction(TWO_PI).limit_denominator(10**12)
    x = alg.basis_element("U").scale(c)
    v = sp.is_exp_regular(x, tol=1e-9)
    assert v.status == sp.SINGULAR and v.offending_integer == 1


def test_roots_abelian_and_heisenberg():
    for alg in (bld.abelian(3), bld.heisenberg(), bld.filiform(4)):
        roots = sp.roots_solvable(alg)
        assert len(roots) == alg.dim
        assert all(r.exact for r in roots)
        assert all(not any(v for v in r.values) for r in roots)


def test_roots_affine_line():
    alg = bld.affine_line()
    roots = sp.roots_solvable(alg)
    vals = sorted(str(r.values[0]) + "|" + str(r.values[1]) for r in roots)
    # roots are 0 and the coordinate functional dual to e1
    assert vals == ["0|0", "1|0"]


def test_roots_motion_plane_exact():
    alg = bld.motion_plane()
    roots = sp.roots_solvable(alg)
    assert all(r.exact for r in roots)
    us = sorted(str(r.values[0]) for r in roots)  # values on U
    assert us == ["-i", "0", "i"]
    for r in roots:
        assert not r.values[1] and not r.values[2]  # vanish on P, Q


def test_roots_not_solvable_raises():
    with pytest.raises(sp.NotSolvableError):
        sp.roots_solvable(bld.sl2_rotation())


def test_roots_match_ad_spectrum_exact_algebras():
    rng = random.Random(19)
    for alg in (bld.motion_plane(), bld.oscillator(), bld.heisenberg()):
        roots = sp.roots_solvable(alg)
        for _ in range(10):
            x = bld.random_element(alg, rng)
            rep = sp.spectrum_of_ad(x)
            got = [(complex(r.value_on(x)), 1, r.residual) for r in roots]
            want = [(e.value, e.multiplicity, e.error_radius) for e in rep.entries]
            assert sp.match_value_multisets(got, want)


def test_roots_float_fallback_irrational_eigenvalues():
    # abelian plane acted on by [[0,1],[-1,1]]: eigenvalues (1 +- i sqrt 3)/2
    alg = bld.semidirect_product(
        bld.abelian(1, prefix="d"), bld.abelian(2), {"d0": [[0, 1], [-1, 1]]}
    )
    roots = sp.roots_solvable(alg)
    assert len(roots) == 3
    # the irrational pair comes back as certified floats; the quotient block
    # keeps its zero root exact
    inexact = [r for r in roots if not r.exact]
    assert len(inexact) == 2 and all(r.residual < 1e-9 for r in roots)
    want = sorted([complex(0.5, 3 ** 0.5 / 2), complex(0.5, -(3 ** 0.5) / 2), 0j], key=lambda z: z.imag)
    got = sorted((complex(r.values[2]) for r in roots), key=lambda z: z.imag)
    assert all(abs(a - b) < 1e-9 for a, b in zip(got, want))
    rng = random.Random(2)
    for _ in range(10):
        x = bld.random_element(alg, rng)
        rep = sp.spectrum_of_ad(x)
        got = [(complex(r.value_on(x)), 1, r.residual + 1e-7) for r in roots]
        want = [(e.value, e.multiplicity, e.error_radius) for e in rep.entries]
        assert sp.match_value_multisets(got, want)


def test_sc_abelian_heisenberg_true():
    assert sp.satisfies_SC(bld.abelian(4)).verdict == sp.TRUE
    assert sp.satisfies_SC(bld.heisenberg()).verdict == sp.TRUE
    assert sp.satisfies_SC(bld.affine_line()).verdict == sp.TRUE


def test_sc_motion_false_with_witness():
    res = sp.satisfies_SC(bld.motion_plane())
    assert res.verdict == sp.FALSE
    assert res.witness is not None
    # the witness root takes value +-i on U and vanishes on P, Q
    assert str(res.witness.values[0]) in ("i", "-i")
    assert not res.witness.values[1] and not res.witness.values[2]


def test_sc_oscillator_false():
    assert sp.satisfies_SC(bld.oscillator()).verdict == sp.FALSE


def test_sc_not_solvable_is_false_with_note():
    res = sp.satisfies_SC(bld.sl2_rotation())
    assert res.verdict == sp.FALSE
    assert "solvab" in res.note


def test_sc_downward_closure_on_quotients():
    # quotients of an algebra passing the test also pass it
    alg = bld.direct_sum(bld.heisenberg(), bld.affine_line())
    assert sp.satisfies_SC(alg).verdict == sp.TRUE
    from prolie import structure as st

    for ideal in st.derived_series(alg)[1:]:
        quot, _ = alg.quotient(ideal)
        assert sp.satisfies_SC(quot).verdict == sp.TRUE


def test_kappa_identity_and_rotation():
    alg = bld.motion_plane()
    k0 = sp.kappa(alg.zero())
    assert np.allclose(k0, np.eye(3), atol=1e-13)
    u = alg.basis_element("U")
    ok, smin = sp.kappa_invertible(u)
    assert ok
    two_pi_u = u.scale(Fraction(TWO_PI).limit_denominator(10**12))
    k = sp.kappa(two_pi_u)
    s = np.linalg.svd(k, compute_uv=False)
    assert s[-1] < 1e-10 and s[-2] < 1e-10 and s[-3] > 0.1  # rank deficit 2


def test_kappa_agrees_with_regularity_on_samples():
    rng = random.Random(11)
    algs = [bld.motion_plane(), bld.heisenberg(), bld.sl2_acting_on_plane()]
    for alg in algs:
        for _ in range(15):
            x = bld.random_element(alg, rng)
            verdict = sp.is_exp_regular(x)
            if verdict.status == sp.UNCERTAIN:
                continue
            ok, _ = sp.kappa_invertible(x)
            assert ok == (verdict.status == sp.REGULAR)


def test_phi1_matches_eigenvalue_formula():
    # oracle: phi1 on a diagonalizable matrix acts by (e^z - 1)/z per eigenvalue
    d = np.diag([0.0, 1.0, -2.0, 3.5])
    out = sp.phi1(d)
    for i, z in enumerate([0.0, 1.0, -2.0, 3.5]):
        want = 1.0 if z == 0 else (math.exp(z) - 1.0) / z
        assert abs(out[i, i] - want) < 1e-13


def test_beta_identity_at_zero():
    d = np.diag([2.0, 3.0])
    assert np.allclose(sp.beta_operator(d, 0.0), np.eye(2), atol=1e-15)
    assert np.allclose(sp.beta_operator(np.zeros((3, 3)), 0.7), np.eye(3), atol=1e-15)


def test_beta_kills_resonant_coordinate():
    n_max = 16
    d = np.diag([2j * math.pi * n for n in range(1, n_max + 1)])
    for n in range(1, n_max + 1):
        b = sp.beta_operator(d, 1.0 / n)
        e_n = np.zeros(n_max)
        e_n[n - 1] = 1.0
        assert np.linalg.norm(b @ e_n) < 1e-12


def test_beta_invertible_for_real_diagonal():
    d = np.diag(np.arange(1.0, 17.0))
    for t in np.linspace(-1, 1, 9):
        b = sp.beta_operator(d, float(t))
        s = np.linalg.svd(b, compute_uv=False)
        assert s[-1] > 1e-8


def test_beta_eigenvector_formula():
    rng = np.random.default_rng(4)
    d = rng.normal(size=(4, 4))
    lam, vecs = np.linalg.eig(d)
    t = 0.63
    b = sp.beta_operator(d, t)
    for i in range(4):
        z = t * lam[i]
        factor = (np.exp(z) - 1.0) / z if abs(z) > 1e-12 else 1.0
        assert np.allclose(b @ vecs[:, i], factor * vecs[:, i], atol=1e-10)


def test_beta_polynomial_exact_nilpotent():
    dm = la.mat([[0, 1, 0], [0, 0, 1], [0, 0, 0]])
    coeffs = sp.beta_polynomial(dm)
    assert len(coeffs) == 3  # 1, D/2, D^2/6
    assert coeffs[1] == la.mat_scale(la.mat_mul(dm, la.eye(3)), GQ(Fraction(1, 2)))
    # evaluate at t and compare with the numeric operator
    t = 0.37
    num = sp.beta_operator(la.to_real_array(dm), t)
    val = np.zeros((3, 3))
    for k, c in enumerate(coeffs):
        val = val + (t ** k) * la.to_real_array(c)
    assert np.allclose(num, val, atol=1e-12)


def test_semidirect_exp_values():
    d = np.diag([2j * math.pi * n for n in range(1, 17)])
    v = np.zeros(16, dtype=complex)
    v[2] = 1.5
    w, t = sp.semidirect_exp(v, 0.0, d)
    assert np.allclose(w, v) and t == 0.0
    # (e_n, 1/n) is outside the image
    e5 = np.zeros(16)
    e5[4] = 1.0
    inside, residual = sp.exp_image_membership(e5, 1.0 / 5.0, d)
    assert not inside and residual > 0.9


def test_log_certificate_motion():
    alg = bld.motion_plane()
    u = alg.basis_element("U")
    p = alg.basis_element("P")
    # real word: unique logarithm
    cert = sp.log_certificate([p, u.scale(Fraction(1, 3))], alg)
    assert cert.status == sp.EXISTS_UNIQUE
    # exp(2 pi U): character value lands exactly on 2*pi*i
    cert2 = sp.log_certificate([u], alg, two_pi=[True])
    assert cert2.status == sp.INCONCLUSIVE and cert2.k in (1, -1) and cert2.exact


def test_log_certificate_heisenberg_any_word():
    alg = bld.heisenberg()
    rng = random.Random(8)
    factors = [bld.random_element(alg, rng) for _ in range(4)]
    cert = sp.log_certificate(factors, alg)
    assert cert.status == sp.EXISTS_UNIQUE and cert.exact
