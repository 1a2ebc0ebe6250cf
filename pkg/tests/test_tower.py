import math
import random
from fractions import Fraction

import numpy as np
import pytest

from prolie import builders as bld
from prolie import linalg as la
from prolie import saito as sd
from prolie import spectral as sp
from prolie import structure as st
from prolie import tower as tw
from prolie.algebra import Subspace
from prolie.scalars import GQ


def _series_sl2_u(n):
    # current algebra over the rotation sl2 with the rotation derivation
    base = bld.sl2_rotation()
    act = la.to_real_array(base.ad_matrix(base.basis_element("U")))
    return tw.make_series_tower(
        base, n, adjoin="U", action=[[int(v) for v in row] for row in act]
    )


def test_series_tower_abelian_base():
    t = tw.make_series_tower(bld.abelian(2), 3)
    t.validate()
    for alg in t.levels:
        assert not alg.table  # nilpotent of the trivial kind: all brackets vanish
    assert [a.dim for a in t.levels] == [2, 4, 6]


def test_series_tower_shapes_and_connectors():
    t = _series_sl2_u(4)
    t.validate()
    assert [a.dim for a in t.levels] == [4, 7, 10, 13]
    for alg in t.levels:
        assert alg.validate().valid
    # coherent element: t-coordinate of U, mapped consistently
    comps = [alg.basis_element("U") for alg in t.levels]
    coh = tw.CoherentElement(t, tuple(comps))
    assert coh.is_coherent()
    s = coh.bracket_with(coh)
    assert all(c.is_zero() for c in s.components)


def test_series_tower_spectrum_contains_i_every_level():
    t = _series_sl2_u(4)
    for alg in t.levels:
        rep = sp.spectrum_of_ad(alg.basis_element("U"))
        vals = {str(e.exact) for e in rep.entries if e.exact is not None}
        assert "i" in vals and "-i" in vals


def test_series_tower_sc_false_every_level():
    t = _series_sl2_u(3)
    for alg in t.levels:
        assert st.is_solvable(alg)
        assert sp.satisfies_SC(alg).verdict == "false"


def test_series_tower_saito_exhausts_with_truncation_flag():
    for n in (4, 8):
        t = _series_sl2_u(n)
        alg = t.levels[-1]
        res = sd.is_exponential_saito(alg)
        assert res.verdict == sd.UNCERTAIN
        assert "truncation" in res.note
        assert res.outcome is not None and res.outcome.truncation_artifact
        # the chain stayed nonzero until the cutoff starved it
        assert res.outcome.last_nonzero is not None
        assert res.outcome.depth >= 2


def test_series_tower_over_motion_base_sees_genuine_mot2():
    # base with an honestly commuting rotation pair: at truncation 2 the
    # vanishing of [P@1, Q@1] is visible within the cutoff, so the detector
    # certifies a genuine plane-motion subalgebra of the level
    base = bld.motion_plane()
    act = la.to_real_array(base.ad_matrix(base.basis_element("U")))
    t = tw.make_series_tower(
        base, 2, adjoin="U", action=[[int(v) for v in row] for row in act]
    )
    res = sd.is_exponential_saito(t.levels[1])
    assert res.verdict == sd.FALSE
    assert res.outcome.kind == sd.MOT2
    assert not res.outcome.truncation_artifact


def test_coherence_of_brackets_and_sums():
    t = _series_sl2_u(3)
    rng = random.Random(5)
    tops = [bld.random_element(t.levels[-1], rng) for _ in range(2)]
    seqs = []
    for top in tops:
        comps = [top]
        for conn in reversed(t.connectors):
            comps.append(conn.apply(comps[-1]))
        seqs.append(tw.CoherentElement(t, tuple(reversed(comps))))
    a, b = seqs
    assert a.is_coherent() and b.is_coherent()
    assert (a + b).is_coherent()
    assert a.bracket_with(b).is_coherent()


def test_product_tower_abelian():
    t = tw.make_product_tower([bld.abelian(2) for _ in range(3)])
    t.validate()
    assert [a.dim for a in t.levels] == [2, 4, 6]
    rep = tw.local_exponentiality_probe(t)
    assert rep.infimum is None
    assert not rep.non_locally_exponential_at_truncation
    assert "no singular points" in rep.note


def test_resonance_tower_structure():
    t = tw.resonance_tower(3)
    t.validate()
    assert [a.dim for a in t.levels] == [11, 16, 21]
    for alg in t.levels:
        assert alg.validate().valid


def test_resonance_tower_witness_eigenvalue_exact():
    t = tw.resonance_tower(4)
    top = t.levels[-1]
    for w in t.singular_witnesses[3]:
        v = sp.is_exp_regular(w.element, two_pi_scale=True)
        assert v.status == sp.SINGULAR and v.exact
        assert v.offending_integer == 1
        # float cross-check: ad(2*pi*y) has an eigenvalue within 1e-9 of 2*pi*i
        adf = la.to_complex_array(top.ad_matrix(w.element)) * (2 * math.pi)
        eig = np.linalg.eigvals(adf)
        assert np.min(np.abs(eig - 2j * math.pi)) < 1e-9


def test_resonance_tower_probe_norms_shrink():
    t = tw.resonance_tower(5)
    rep = tw.local_exponentiality_probe(t, norm_budget=4.0)
    norms = [n for n in rep.min_norm_per_level if n is not None]
    assert len(norms) == 5
    assert all(a > b for a, b in zip(norms, norms[1:]))
    want = [2 * math.pi * math.sqrt(2) / n for n in range(1, 6)]
    assert all(abs(a - b) < 1e-9 for a, b in zip(norms, want))
    assert rep.non_locally_exponential_at_truncation
    # soundness: each hit re-verifies as singular
    for h in rep.hits:
        assert h.exact and h.k == 1


def test_factor_alone_is_exponential():
    # a single scaled-plane factor passes both exponentiality tests
    f = tw.scaled_plane_factor(GQ(1, 3))
    assert sp.satisfies_SC(f).verdict == "true"
    assert sd.is_exponential_saito(f).verdict == sd.TRUE


def test_probe_scan_finds_scaled_singular_points_without_witnesses():
    # motion-plane factors: the basis direction U rescales onto 2*pi*i
    t = tw.make_product_tower([bld.motion_plane() for _ in range(3)])
    rep = tw.local_exponentiality_probe(t, norm_budget=10.0)
    norms = [n for n in rep.min_norm_per_level if n is not None]
    assert norms and all(abs(n - 2 * math.pi) < 1e-6 for n in norms)
    # constant norms: no shrinking sequence, so no failure verdict
    assert not rep.non_locally_exponential_at_truncation


def test_smoothness_resonance_tower():
    t = tw.resonance_tower(4)
    rep = tw.smoothness_check(t)
    assert all(c == (1, 0) for c in rep.per_level)  # one complex-type simple head
    assert rep.stabilized and rep.extrapolated_smooth
    assert "extrapolation" in rep.note


def test_smoothness_solvable_tower():
    t = _series_sl2_u(3)
    rep = tw.smoothness_check(t)
    assert all(c == (0, 0) for c in rep.per_level)
    assert rep.stabilized and rep.extrapolated_smooth


def test_smoothness_sl2_and_so3_products():
    t_sl2 = tw.make_product_tower([bld.sl2_rotation() for _ in range(4)])
    rep = tw.smoothness_check(t_sl2)
    assert [c for c in rep.per_level] == [(0, k) for k in range(1, 5)]
    assert rep.stabilized  # non-sl2 count is constantly zero
    t_so3 = tw.make_product_tower([bld.so3() for _ in range(4)])
    rep2 = tw.smoothness_check(t_so3)
    assert [c for c in rep2.per_level] == [(k, 0) for k in range(1, 5)]
    assert not rep2.stabilized and not rep2.extrapolated_smooth


def test_exponential_ideal_check_resonance():
    t = tw.resonance_tower(3)
    rep = tw.exponential_ideal_check(t, 2)
    assert rep.codimension == 11
    assert rep.kernel_dim == 10
    assert rep.sc["verdict"] == "true"
    assert rep.saito is not None and rep.saito["verdict"] == "true"


def test_exponential_ideal_check_motion_kernel_fails():
    t = tw.make_product_tower([bld.motion_plane() for _ in range(3)])
    rep = tw.exponential_ideal_check(t, 2)
    assert rep.sc["verdict"] == "false"
    assert rep.saito["verdict"] == "false"
    assert rep.saito["outcome"]["kind"] == sd.MOT2


def test_exponential_ideal_trivial_level():
    t = tw.resonance_tower(2)
    rep = tw.exponential_ideal_check(t, 0)
    assert rep.kernel_dim == 0 and rep.sc["verdict"] == "true"


def test_functoriality_of_verdicts_down_the_tower():
    # verdicts at level j are implied by level j+1 (quotient stability)
    t = _series_sl2_u(3)
    sc = [sp.satisfies_SC(alg).verdict for alg in t.levels]
    for low, high in zip(sc, sc[1:]):
        if high == "true":
            assert low == "true"
    t2 = tw.make_product_tower([bld.heisenberg() for _ in range(3)])
    sc2 = [sp.satisfies_SC(alg).verdict for alg in t2.levels]
    assert sc2 == ["true"] * 3
    smooth = tw.smoothness_check(t2)
    assert all(c == (0, 0) for c in smooth.per_level)
