"""Finite truncations of projective limits of Lie algebras.

A tower is a chain of algebras with surjective connecting homomorphisms,
coarsest level first.  The constructors cover the two families the analysis
suites need: series truncations base (x) t*R[t]/(t^(k+1)) with an optional
adjoined outer derivation, and growing direct products with an optional
semisimple head acting on every factor.  Basis orders are chosen so that the
natural ideals occupy coordinate prefixes; spectral code then works on small
diagonal blocks no matter how large the level is.

Every "for all levels" statement about the projective limit is only ever
verified through the built levels, and the reports say so.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Optional, Sequence

import numpy as np

from . import linalg as la
from . import structure as st
from .algebra import Element, LieAlgebra, Morphism, ShapeError, Subspace
from .builders import real_matrix_of_complex, realify, sl2_standard
from .scalars import GQ, ONE, ZERO
from .spectral import (
    REGULAR,
    SINGULAR,
    TWO_PI,
    RegularityVerdict,
    is_exp_regular,
    satisfies_SC,
    spectrum_of_ad,
)


@dataclass(frozen=True)
class SingularWitness:
    """A certified singular candidate attached to a tower level."""

    factor: Optional[int]  # 1-based factor index when known
    element: Element       # exact element y; the singular point is 2*pi*y
    description: str = ""


class Tower:
    """Chain of algebras with surjective connecting homomorphisms."""

    def __init__(
        self,
        levels: Sequence[LieAlgebra],
        connectors: Sequence[Morphism],
        singular_witnesses: Optional[dict[int, list[SingularWitness]]] = None,
    ):
        if len(connectors) != max(0, len(levels) - 1):
            raise ShapeError("need one connector per adjacent pair of levels")
        self.levels = list(levels)
        self.connectors = list(connectors)
        self.singular_witnesses = singular_witnesses or {}
        for j, c in enumerate(self.connectors):
            if c.source is not self.levels[j + 1] or c.target is not self.levels[j]:
                raise ShapeError(f"connector {j} does not join levels {j + 1} -> {j}")

    def validate(self) -> None:
        for j, c in enumerate(self.connectors):
            if not c.is_homomorphism():
                raise ShapeError(f"connector {j} is not a homomorphism")
            if not c.is_surjective():
                raise ShapeError(f"connector {j} is not surjective")

    def connector_to_base(self, level: int) -> Morphism:
        """Composite morphism level -> 0."""
        if level == 0:
            alg = self.levels[0]
            return Morphism(alg, alg, la.eye(alg.dim))
        m = self.connectors[0]
        for j in range(1, level):
            m = m.compose(self.connectors[j])
        return m

    def __len__(self) -> int:
        return len(self.levels)


@dataclass(frozen=True)
class CoherentElement:
    tower: Tower
    components: tuple[Element, ...]

    def is_coherent(self) -> bool:
        for j, c in enumerate(self.tower.connectors):
            mapped = c.apply(self.components[j + 1])
            if mapped.coeffs != self.components[j].coeffs:
                return False
        return True

    def bracket_with(self, other: "CoherentElement") -> "CoherentElement":
        from .algebra import bracket

        return CoherentElement(
            self.tower,
            tuple(bracket(a, b) for a, b in zip(self.components, other.components)),
        )

    def __add__(self, other: "CoherentElement") -> "CoherentElement":
        return CoherentElement(
            self.tower,
            tuple(a + b for a, b in zip(self.components, other.components)),
        )


# ---------------------------------------------------------------------------
# series towers: base (x) t R[t] / (t^(k+1)), optionally with an outer element
# ---------------------------------------------------------------------------

def make_series_tower(
    base: LieAlgebra,
    n_levels: int,
    *,
    adjoin: Optional[str] = None,
    action: Optional[Sequence[Sequence]] = None,
) -> Tower:
    """Tower of truncated polynomial current algebras over ``base``.

    Level k has basis x (x) t^d for d = 1..k (highest degree first, so the
    high-degree tails sit in prefix ideals), plus the optional adjoined
    element acting degreewise through the given derivation matrix of the
    base.  Connectors drop the top degree.
    """
    if n_levels < 1:
        raise ValueError("need at least one level")
    act = la.mat(action) if action is not None else None
    if (adjoin is None) != (act is None):
        raise ValueError("adjoined element and action matrix come together")
    if act is not None:
        _check_derivation(base, act)
    levels = [_series_level(base, k, adjoin, act) for k in range(1, n_levels + 1)]
    connectors = []
    for k in range(1, n_levels):
        src, tgt = levels[k], levels[k - 1]
        m = la.zeros(tgt.dim, src.dim)
        # source basis: degree k+1 block first, then the rest in target order
        for i in range(tgt.dim):
            m[i][i + base.dim] = ONE
        connectors.append(Morphism(src, tgt, m))
    return Tower(levels, connectors)


def _series_level(base, k, adjoin, act):
    b = base.dim
    labels = []
    degrees = []
    for d in range(k, 0, -1):
        for lbl in base.labels:
            labels.append(f"{lbl}@{d}")
            degrees.append(d)
    if adjoin is not None:
        labels.append(adjoin)
        degrees.append(0)
    table: dict[tuple[int, int], dict[int, GQ]] = {}

    def index(d, j):  # degree d, base index j
        return (k - d) * b + j

    for (i, j), row in base.table.items():
        for d1 in range(1, k + 1):
            for d2 in range(1, k + 1):
                if d1 + d2 > k:
                    continue
                a_idx = index(d1, i)
                b_idx = index(d2, j)
                dst = {index(d1 + d2, t): c for t, c in row.items()}
                key = (a_idx, b_idx)
                cur = table.setdefault(key, {})
                for t, c in dst.items():
                    cur[t] = cur.get(t, ZERO) + c
    if adjoin is not None:
        u_idx = k * b
        for d in range(1, k + 1):
            for j in range(b):
                col = {index(d, t): act[t][j] for t in range(b) if act[t][j]}
                if col:
                    table[(u_idx, index(d, j))] = col
    prefixes = [b * d for d in range(1, k + 1)]
    return LieAlgebra(
        labels,
        table,
        degrees=degrees,
        truncation=k,
        ideal_prefixes=prefixes,
    )


def _check_derivation(base, act):
    for (i, j), row in base.table.items():
        ei = base.basis_element(i).coeffs
        ej = base.basis_element(j).coeffs
        lhs = [ZERO] * base.dim
        for t, c in row.items():
            lhs = [a + c * act[r][t] for r, a in enumerate(lhs)]
        mi = la.mat_vec(act, ei)
        mj = la.mat_vec(act, ej)
        rhs = [
            a + b
            for a, b in zip(
                base.bracket_coords(tuple(mi), ej),
                base.bracket_coords(ei, tuple(mj)),
            )
        ]
        if lhs != rhs:
            raise ShapeError("adjoined action is not a derivation of the base")


# ---------------------------------------------------------------------------
# product towers: growing direct products with an optional acting head
# ---------------------------------------------------------------------------

def scaled_plane_factor(mu: GQ, tag: str = "") -> LieAlgebra:
    """The real form of C^2 with a one-parameter scaling by exp(t*mu).

    Five-dimensional solvable algebra: translations (v1, v2 over C, stored
    as real pairs) and a generator t with [t, v] = mu * v complex-linearly.
    """
    d = real_matrix_of_complex([[mu, GQ(0)], [GQ(0), mu]])
    labels = [f"v1r{tag}", f"v1i{tag}", f"v2r{tag}", f"v2i{tag}", f"t{tag}"]
    table: dict[tuple[int, int], dict[int, GQ]] = {}
    for j in range(4):
        col = {r: d[r][j] for r in range(4) if d[r][j]}
        if col:
            table[(4, j)] = col
    return LieAlgebra(labels, table)


def sl2_complex_head() -> LieAlgebra:
    """sl2(C) as a six-dimensional real algebra."""
    return realify(sl2_standard())


def sl2_complex_rep_on_plane() -> dict[str, list[list[GQ]]]:
    """Canonical action of the realified sl2(C) on the real form of C^2.

    The plane coordinates are (Re v1, Im v1, Re v2, Im v2); the fifth factor
    coordinate (the scaling generator) is annihilated.
    """
    base = {
        "H": [[GQ(1), GQ(0)], [GQ(0), GQ(-1)]],
        "E": [[GQ(0), GQ(1)], [GQ(0), GQ(0)]],
        "F": [[GQ(0), GQ(0)], [GQ(1), GQ(0)]],
    }
    out: dict[str, list[list[GQ]]] = {}
    for lbl, m in base.items():
        out[lbl] = _pad5(real_matrix_of_complex(m))
        mi = [[GQ(0, 1) * c for c in row] for row in m]
        out[f"{lbl}_i"] = _pad5(real_matrix_of_complex(mi))
    return out


def _pad5(m4):
    out = la.zeros(5, 5)
    for i in range(4):
        for j in range(4):
            out[i][j] = m4[i][j]
    return out


def make_product_tower(
    factors: Sequence[LieAlgebra],
    *,
    head: Optional[LieAlgebra] = None,
    head_reps: Optional[Sequence[dict]] = None,
    witnesses: Optional[Sequence[Optional[Sequence[GQ]]]] = None,
) -> Tower:
    """Tower whose level k is the product of the first k factors.

    ``head_reps[n]`` gives the action of each head basis label on factor n;
    the head then acts diagonally on every level.  ``witnesses`` may attach
    per factor one exact coefficient vector (factor coordinates followed by
    head coordinates) for an element y whose 2*pi multiple is a singular
    point; the probe re-verifies them.  Connectors drop the last factor.
    """
    n = len(factors)
    if n == 0:
        raise ValueError("need at least one factor")
    if head is not None and (head_reps is None or len(head_reps) != n):
        raise ValueError("need one head action per factor")
    levels = []
    for k in range(1, n + 1):
        levels.append(_product_level(factors[:k], head, head_reps[:k] if head_reps else None, k))
    connectors = []
    for k in range(1, n):
        src, tgt = levels[k], levels[k - 1]
        drop_start = sum(f.dim for f in factors[:k])
        drop_dim = factors[k].dim
        m = la.zeros(tgt.dim, src.dim)
        for i in range(drop_start):
            m[i][i] = ONE
        for i in range(drop_start, tgt.dim):
            m[i][i + drop_dim] = ONE
        connectors.append(Morphism(src, tgt, m))
    witness_map: dict[int, list[SingularWitness]] = {}
    if witnesses is not None:
        for k in range(1, n + 1):
            level = levels[k - 1]
            entries = []
            offs = 0
            for fi in range(k):
                w = witnesses[fi]
                if w is not None:
                    coeffs = [ZERO] * level.dim
                    fdim = factors[fi].dim
                    for j in range(fdim):
                        coeffs[offs + j] = GQ.of(w[j])
                    if head is not None:
                        hstart = sum(f.dim for f in factors[:k])
                        for j in range(head.dim):
                            coeffs[hstart + j] = GQ.of(w[fdim + j])
                    entries.append(SingularWitness(fi + 1, level.element(coeffs)))
                offs += factors[fi].dim
            witness_map[k - 1] = entries
    return Tower(levels, connectors, witness_map)


def _product_level(factors, head, head_reps, k):
    labels = []
    degrees = None
    table: dict[tuple[int, int], dict[int, GQ]] = {}
    off = 0
    prefixes = []
    for n, f in enumerate(factors, start=1):
        labels.extend(f"{lbl}#{n}" for lbl in f.labels)
        for (i, j), row in f.table.items():
            table[(i + off, j + off)] = {t + off: c for t, c in row.items()}
        off += f.dim
        prefixes.append(off)
    if head is not None:
        hoff = off
        labels.extend(head.labels)
        for (i, j), row in head.table.items():
            table[(i + hoff, j + hoff)] = {t + hoff: c for t, c in row.items()}
        foff = 0
        for f, rep in zip(factors, head_reps):
            for hj, hlbl in enumerate(head.labels):
                m = rep[hlbl]
                for j in range(f.dim):
                    col = {foff + t: m[t][j] for t in range(f.dim) if m[t][j]}
                    if col:
                        table[(hoff + hj, foff + j)] = col
            foff += f.dim
        prefixes.append(hoff + head.dim)
    return LieAlgebra(labels, table, ideal_prefixes=prefixes)


def resonance_tower(n_factors: int) -> Tower:
    """Product tower of complex planes scaled by 1 + n*i under an sl2(C) head.

    Factor n alone is exponential (its root values stay off the imaginary
    axis), but combining its scaling generator with the head's Cartan
    element produces the eigenvalue 2*pi*i at norm shrinking like 1/n, which
    is the obstruction the probe is meant to exhibit.
    """
    factors = []
    witnesses = []
    head = sl2_complex_head()
    reps = []
    for n in range(1, n_factors + 1):
        mu = GQ(1, n)
        factors.append(scaled_plane_factor(mu))
        reps.append(sl2_complex_rep_on_plane())
        # ad(c*t + theta*H) scales the first plane coordinate by c*mu + theta,
        # which hits the unit imaginary for c = 1/Im(mu), theta = -Re(mu)/Im(mu);
        # the 2*pi factor is applied by the probe's exact scaling path
        coeffs = [ZERO] * (5 + head.dim)
        coeffs[4] = GQ(Fraction(1, n))
        coeffs[5 + head.index_of("H")] = GQ(Fraction(-1, n))
        witnesses.append(coeffs)
    return make_product_tower(factors, head=head, head_reps=reps, witnesses=witnesses)


# ---------------------------------------------------------------------------
# smoothness across levels
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmoothnessReport:
    per_level: tuple[tuple[int, int], ...]  # (non_sl2_count, sl2_count)
    stabilized: bool
    verdict_at_truncation: bool
    extrapolated_smooth: bool
    note: str

    def to_dict(self) -> dict:
        return {
            "per_level": [
                {"non_sl2_simple_count": a, "sl2_count": b} for a, b in self.per_level
            ],
            "stabilized": self.stabilized,
            "verdict_at_truncation": self.verdict_at_truncation,
            "extrapolated_smooth": self.extrapolated_smooth,
            "note": self.note,
        }


def smoothness_check(tower: Tower) -> SmoothnessReport:
    """Count simple factors per level that are not the split 3-dimensional one.

    At any finite truncation the count is finite, so the truncation verdict
    is trivially positive; the meaningful output is whether the count
    stabilizes across the top levels, and the report states explicitly that
    any claim about the full limit is an extrapolation.
    """
    counts = []
    for alg in tower.levels:
        rad, levi = st.levi_decomposition(alg)
        if levi.dim == 0:
            counts.append((0, 0))
            continue
        levi_alg, _ = alg.subalgebra(levi)
        non_sl2 = sl2 = 0
        for ideal in st.simple_ideals(levi_alg):
            if st.is_sl2R(levi_alg, ideal):
                sl2 += 1
            else:
                non_sl2 += 1
        counts.append((non_sl2, sl2))
    tail = [c[0] for c in counts[-3:]]
    stabilized = len(set(tail)) == 1  # constant over the last three levels
    return SmoothnessReport(
        tuple(counts),
        stabilized,
        True,
        stabilized,
        "verified through level %d; the claim about the full limit is an extrapolation"
        % len(tower.levels),
    )


# ---------------------------------------------------------------------------
# local-exponentiality probe
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ProbeHit:
    level: int
    factor: Optional[int]
    norm: float
    eigenvalue: complex
    k: int
    exact: bool
    element_str: str

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "factor": self.factor,
            "norm": self.norm,
            "eigenvalue": {"re": self.eigenvalue.real, "im": self.eigenvalue.imag},
            "k": self.k,
            "exact": self.exact,
            "element": self.element_str,
        }


@dataclass(frozen=True)
class ProbeReport:
    hits: tuple[ProbeHit, ...]
    min_norm_per_level: tuple[Optional[float], ...]
    infimum: Optional[float]
    non_locally_exponential_at_truncation: bool
    note: str

    def to_dict(self) -> dict:
        return {
            "hits": [h.to_dict() for h in self.hits],
            "min_norm_per_level": list(self.min_norm_per_level),
            "infimum": self.infimum,
            "non_locally_exponential_at_truncation": self.non_locally_exponential_at_truncation,
            "note": self.note,
        }


def local_exponentiality_probe(
    tower: Tower,
    norm_budget: float = 1.0,
    tol: float = 1e-9,
    rng: Optional[random.Random] = None,
    extra_candidates: int = 4,
) -> ProbeReport:
    """Hunt for singular points of small norm on every level.

    Candidates come from the tower's registered witness family plus a seeded
    scan of basis directions and small random combinations; every candidate
    direction is scaled onto the resonant sphere using its exact spectrum.
    A sequence of singular points whose norms shrink below the budget across
    levels certifies failure of local exponentiality at truncation scale.
    """
    rng = rng or random.Random(0)
    hits: list[ProbeHit] = []
    min_norms: list[Optional[float]] = []
    for li, alg in enumerate(tower.levels):
        best: Optional[ProbeHit] = None
        for w in tower.singular_witnesses.get(li, []):
            hit = _verify_two_pi_witness(alg, w, li, tol)
            if hit and (best is None or hit.norm < best.norm):
                hits.append(hit)
                if best is None or hit.norm < best.norm:
                    best = hit
        if best is None:
            for cand, factor in _scan_candidates(alg, rng, extra_candidates):
                hit = _scaled_singular_from_spectrum(alg, cand, factor, li, tol)
                if hit is not None and (best is None or hit.norm < best.norm):
                    best = hit
            if best is not None:
                hits.append(best)
        min_norms.append(best.norm if best else None)
    found = [n for n in min_norms if n is not None]
    decreasing = all(
        a > b for a, b in zip(found, found[1:])
    ) and len(found) >= min(3, len(tower.levels))
    verdict = bool(found) and decreasing and min(found) < norm_budget
    if not found:
        note = "no singular points located at any level"
    elif verdict:
        note = (
            "singular points with shrinking norms found through level "
            f"{len(tower.levels)}; not locally exponential at truncation scale"
        )
    else:
        note = "singular points exist but their norms do not shrink below the budget"
    return ProbeReport(tuple(hits), tuple(min_norms), min(found) if found else None, verdict, note)


def _verify_two_pi_witness(alg, witness: SingularWitness, level: int, tol: float):
    y = witness.element
    verdict = is_exp_regular(y, tol, two_pi_scale=True)
    if verdict.status != SINGULAR:
        return None
    norm = TWO_PI * y.norm_float()
    # independent float check on the scaled operator
    adf = la.to_complex_array(alg.ad_matrix(y)) * TWO_PI
    eig = np.linalg.eigvals(adf)
    target = complex(0.0, TWO_PI * verdict.offending_integer)
    dist = float(np.min(np.abs(eig - target)))
    if dist > max(tol, 1e-9):
        return None
    return ProbeHit(
        level,
        witness.factor,
        norm,
        verdict.offending_eigenvalue,
        verdict.offending_integer,
        verdict.exact,
        str(y),
    )


def _scan_candidates(alg, rng, extra):
    for i in range(alg.dim):
        yield alg.basis_element(i), None
    from .builders import random_element

    for _ in range(extra):
        yield random_element(alg, rng, span=2), None


def _scaled_singular_from_spectrum(alg, cand, factor, level, tol):
    if cand.is_zero():
        return None
    rep = spectrum_of_ad(cand)
    best = None
    for e in rep.entries:
        lam = e.value
        if abs(lam.imag) < 1e-12:
            continue
        if e.exact is not None:
            if e.exact.re:
                continue
            # scale exactly: (2*pi / im) * cand, checked on the exact path
            im = e.exact.im
            y = cand.scale(GQ(1 / im))
            verdict = is_exp_regular(y, tol, two_pi_scale=True)
            if verdict.status == SINGULAR:
                norm = TWO_PI * y.norm_float()
                hit = ProbeHit(
                    level, factor, norm, verdict.offending_eigenvalue,
                    verdict.offending_integer, True, str(y),
                )
                if best is None or hit.norm < best.norm:
                    best = hit
            continue
        if abs(lam.real) > tol:
            continue
        scale = TWO_PI / abs(lam.imag)
        y = cand.scale(GQ(Fraction(scale).limit_denominator(10**12)))
        verdict = is_exp_regular(y, tol)
        if verdict.status == SINGULAR:
            hit = ProbeHit(
                level, factor, y.norm_float(), verdict.offending_eigenvalue,
                verdict.offending_integer, False, str(y),
            )
            if best is None or hit.norm < best.norm:
                best = hit
    return best


# ---------------------------------------------------------------------------
# finite-codimension kernel ideals
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class KernelIdealReport:
    level: int
    codimension: int
    kernel_dim: int
    sc: dict
    saito: Optional[dict]

    def to_dict(self) -> dict:
        return {
            "level": self.level,
            "codimension": self.codimension,
            "kernel_dim": self.kernel_dim,
            "sc": self.sc,
            **({"saito": self.saito} if self.saito else {}),
        }


def exponential_ideal_check(tower: Tower, level: int) -> KernelIdealReport:
    """Test the kernel of the connector to level 0 for everywhere-regular spectra.

    The kernel is a finite-codimension ideal of the chosen level; restricting
    the bracket makes it an algebra in its own right, on which the spectral
    condition (and, when solvable, the rotation-pair detector) runs.
    """
    from . import saito as sdet

    alg = tower.levels[level]
    conn = tower.connector_to_base(level)
    kern = conn.kernel_subspace()
    codim = tower.levels[0].dim
    if kern.dim == 0:
        return KernelIdealReport(
            level, codim, 0, {"verdict": "true", "note": "zero ideal"}, None
        )
    sub, _ = alg.subalgebra(kern)
    sc = satisfies_SC(sub)
    saito_dict = None
    if st.is_solvable(sub):
        saito_dict = sdet.is_exponential_saito(sub).to_dict()
    return KernelIdealReport(level, codim, kern.dim, sc.to_dict(), saito_dict)
