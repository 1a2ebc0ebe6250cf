"""Rotation-pair testing device for exponentiality of solvable algebras.

A triple (U, P, Q) with [U,P] = Q and [U,Q] = -P forces the eigenvalue i on
ad U, so its presence obstructs everywhere-regular spectra.  The detector
finds such triples from the roots, then runs the classical recursion
P <- [Z,P], Q <- [Z,Q], Z <- [P,Q] until it exhibits either the plane-motion
algebra (Z = 0) or the oscillator algebra (Z central), which are exactly the
two minimal obstructions inside finite-dimensional solvable algebras.

On graded truncations of power-series algebras the recursion can be starved
by the cutoff: Z vanishes only because its lowest possible degree exceeds
the truncation.  That case is detected by degree bookkeeping and reported as
an exhaustion artifact rather than a verdict.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

import numpy as np

from . import linalg as la
from .algebra import Element, LieAlgebra, Subspace, bracket
from .scalars import GQ, I, ONE, ZERO
from .spectral import Root, roots_solvable

MOT2 = "mot2"
OSC = "osc"
EXHAUSTED = "exhausted"

TRUE = "true"
FALSE = "false"
UNCERTAIN = "uncertain"


@dataclass(frozen=True)
class RotationTriple:
    u: Element
    p: Element
    q: Element
    exact: bool
    note: str = ""

    def verify(self) -> bool:
        if self.p.is_zero() and self.q.is_zero():
            return False
        return (
            bracket(self.u, self.p).coeffs == self.q.coeffs
            and bracket(self.u, self.q).coeffs == (-self.p).coeffs
        )


@dataclass(frozen=True)
class SaitoOutcome:
    kind: str  # mot2 | osc | exhausted
    depth: int
    subalgebra: Optional[Subspace] = None
    last_nonzero: Optional[Element] = None
    truncation_artifact: bool = False
    note: str = ""

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "depth": self.depth,
            "subalgebra_dim": self.subalgebra.dim if self.subalgebra else None,
            "truncation_artifact": self.truncation_artifact,
            **({"note": self.note} if self.note else {}),
        }


@dataclass(frozen=True)
class SaitoResult:
    verdict: str  # true | false | uncertain
    outcome: Optional[SaitoOutcome] = None
    triple: Optional[RotationTriple] = None
    note: str = ""

    def to_dict(self) -> dict:
        d: dict = {"verdict": self.verdict}
        if self.outcome is not None:
            d["outcome"] = self.outcome.to_dict()
        if self.note:
            d["note"] = self.note
        return d


# ---------------------------------------------------------------------------
# locating rotation triples
# ---------------------------------------------------------------------------

def find_rotation_triple(
    alg: LieAlgebra, roots: Optional[list[Root]] = None
) -> Optional[RotationTriple]:
    """A triple with [U,P] = Q, [U,Q] = -P, or None when no root allows one.

    A root admits a triple exactly when its value set meets the imaginary
    axis away from zero; U is solved from alpha(U) = i and P, Q are the real
    and negated imaginary parts of an exact i-eigenvector of ad U.  When the
    root is known only in floats the candidate is reconstructed rationally
    and returned non-exact unless the relations verify exactly.
    """
    if roots is None:
        roots = roots_solvable(alg)
    candidate: Optional[RotationTriple] = None
    for root in roots:
        if root.exact:
            u = _solve_unit_imaginary_exact(alg, root)
            if u is None:
                continue
            triple = _triple_from_exact_u(alg, u)
            if triple is not None:
                return triple
        else:
            got = _triple_from_float_root(alg, root)
            if got is None:
                continue
            if got.exact:
                return got
            candidate = candidate or got
    return candidate


def _solve_unit_imaginary_exact(alg: LieAlgebra, root: Root) -> Optional[Element]:
    re_row = [GQ(v.re) for v in root.values]
    im_row = [GQ(v.im) for v in root.values]
    sol = la.solve([re_row, im_row], [ZERO, ONE])
    if sol is None:
        return None
    return alg.element(sol)


def _triple_from_exact_u(alg: LieAlgebra, u: Element) -> Optional[RotationTriple]:
    ad = alg.ad_matrix(u)
    shifted = [
        [ad[r][c] - (I if r == c else ZERO) for c in range(alg.dim)]
        for r in range(alg.dim)
    ]
    kern = la.kernel(shifted)
    if not kern:
        return None
    w = _prefer_low_degree(alg, kern)
    p = alg.element([GQ(c.re) for c in w])
    q = alg.element([GQ(-c.im) for c in w])
    triple = RotationTriple(u, p, q, exact=True)
    return triple if triple.verify() else None


def _prefer_low_degree(alg: LieAlgebra, kern):
    """On graded algebras, take the eigenvector reaching the lowest degree.

    Low-degree pairs keep the recursion alive longest before the truncation
    cutoff starves it, which is what the exhaustion reports are about.
    """
    if alg.degrees is None or len(kern) == 1:
        return kern[0]

    def min_deg(vec):
        degs = [alg.degrees[i] for i, c in enumerate(vec) if c]
        return min(degs) if degs else len(alg.degrees)

    return min(kern, key=min_deg)


def _triple_from_float_root(alg: LieAlgebra, root: Root) -> Optional[RotationTriple]:
    vals = np.array(root.values_complex())
    m = np.vstack([vals.real, vals.imag])
    target = np.array([0.0, 1.0])
    t, *_ = np.linalg.lstsq(m, target, rcond=None)
    if np.linalg.norm(m @ t - target) > 1e-7:
        return None
    u_exact = alg.element([GQ(Fraction(float(c)).limit_denominator(10**6)) for c in t])
    got = _triple_from_exact_u(alg, u_exact)
    if got is not None:
        return got
    # numeric eigenvector of the rational U near the eigenvalue i
    adf = la.to_complex_array(alg.ad_matrix(u_exact))
    lam, vecs = np.linalg.eig(adf)
    idx = int(np.argmin(np.abs(lam - 1j)))
    if abs(lam[idx] - 1j) > 1e-6:
        return None
    w = vecs[:, idx]
    scale = max(1.0, float(np.max(np.abs(w))))
    p = alg.element(
        [GQ(Fraction(float(c.real / scale)).limit_denominator(10**6)) for c in w]
    )
    q = alg.element(
        [GQ(Fraction(float(-c.imag / scale)).limit_denominator(10**6)) for c in w]
    )
    triple = RotationTriple(u_exact, p, q, exact=True)
    if triple.verify():
        return triple
    return RotationTriple(
        u_exact, p, q, exact=False,
        note="rational reconstruction failed the exact relation check",
    )


# ---------------------------------------------------------------------------
# the recursion
# ---------------------------------------------------------------------------

def saito_recursion(triple: RotationTriple, max_depth: int) -> SaitoOutcome:
    """Iterate the testing recursion on an exact rotation triple."""
    if not triple.exact:
        return SaitoOutcome(
            EXHAUSTED, 0, note="triple is not exact; recursion not attempted"
        )
    if not triple.verify():
        return SaitoOutcome(EXHAUSTED, 0, note="triple fails the rotation relations")
    alg = triple.u.algebra
    u, p, q = triple.u, triple.p, triple.q
    truncation = alg.truncation
    last_nonzero: Optional[Element] = None
    for depth in range(1, max_depth + 1):
        if not (
            bracket(u, p).coeffs == q.coeffs
            and bracket(u, q).coeffs == (-p).coeffs
            and bracket(u, bracket(p, q)).is_zero()
        ):
            return SaitoOutcome(
                EXHAUSTED, depth, last_nonzero=last_nonzero,
                note="rotation relations degenerated; triple abandoned",
            )
        z = bracket(p, q)
        if z.is_zero():
            # the bracket adds grading degrees, so min degrees of the pair
            # bound the lowest degree the vanished bracket could occupy
            deg_bound = _sum_min_degrees(p, q)
            if truncation is not None and deg_bound is not None and deg_bound > truncation:
                return SaitoOutcome(
                    EXHAUSTED,
                    depth,
                    last_nonzero=last_nonzero,
                    truncation_artifact=True,
                    note=(
                        "the bracket [P,Q] can only live beyond the truncation "
                        f"degree ({deg_bound} > {truncation}); in the untruncated "
                        "algebra it need not vanish"
                    ),
                )
            span = Subspace.span(alg, [u, p, q])
            if span.dim != 3:
                return SaitoOutcome(
                    EXHAUSTED, depth, last_nonzero=last_nonzero,
                    note="degenerate span at a vanishing bracket",
                )
            note = ""
            if truncation is not None:
                note = "relations certified in the truncated algebra"
            return SaitoOutcome(MOT2, depth, span, note=note)
        last_nonzero = z
        zp = bracket(z, p)
        zq = bracket(z, q)
        if zp.is_zero() and zq.is_zero():
            deg_bound = _sum_min_degrees(z, p if not p.is_zero() else q)
            if truncation is not None and deg_bound is not None and deg_bound > truncation:
                return SaitoOutcome(
                    EXHAUSTED,
                    depth,
                    last_nonzero=z,
                    truncation_artifact=True,
                    note=(
                        "centrality of [P,Q] cannot be told apart from the "
                        f"truncation cutoff ({deg_bound} > {truncation})"
                    ),
                )
            span = Subspace.span(alg, [u, p, q, z])
            if span.dim == 4:
                note = "relations certified in the truncated algebra" if truncation is not None else ""
                return SaitoOutcome(OSC, depth, span, last_nonzero=z, note=note)
            return SaitoOutcome(
                EXHAUSTED, depth, last_nonzero=z,
                note="central bracket lies inside the rotation span",
            )
        if zp.is_zero() or zq.is_zero():
            return SaitoOutcome(
                EXHAUSTED, depth, last_nonzero=z,
                note="recursion degenerated to a single direction",
            )
        p, q = zp, zq
    return SaitoOutcome(
        EXHAUSTED,
        max_depth,
        last_nonzero=last_nonzero,
        note="depth budget exhausted before classification",
    )


def _sum_min_degrees(p: Element, q: Element) -> Optional[int]:
    pd = p.min_degree()
    qd = q.min_degree()
    if pd is None or qd is None:
        return None
    return pd + qd


# ---------------------------------------------------------------------------
# the exponentiality verdict
# ---------------------------------------------------------------------------

def is_exponential_saito(
    alg: LieAlgebra,
    max_depth: Optional[int] = None,
    roots: Optional[list[Root]] = None,
) -> SaitoResult:
    """Exponentiality of a solvable algebra via the forbidden subalgebras.

    False exactly when some rotation triple certifies a plane-motion or
    oscillator subalgebra; true when no root admits a rotation triple at
    all.  Exhaustion or inexact candidates yield an explicit uncertain
    verdict, never a silent one.
    """
    from . import structure as st

    if not st.is_solvable(alg):
        raise ValueError("the testing device applies to solvable algebras")
    if roots is None:
        roots = roots_solvable(alg)
    if max_depth is None:
        length = st.derived_length(alg) or alg.dim
        max_depth = length + 2
    stalled: list[SaitoOutcome] = []
    saw_candidate = False
    for root in roots:
        triple = _triple_for_root(alg, root)
        if triple is None:
            continue
        saw_candidate = True
        if not triple.exact:
            stalled.append(
                SaitoOutcome(EXHAUSTED, 0, note="only a non-exact triple was found")
            )
            continue
        outcome = saito_recursion(triple, max_depth)
        if outcome.kind in (MOT2, OSC):
            return SaitoResult(FALSE, outcome, triple)
        stalled.append(outcome)
    if not saw_candidate:
        return SaitoResult(TRUE, note="no root admits a rotation triple")
    artifact = any(o.truncation_artifact for o in stalled)
    return SaitoResult(
        UNCERTAIN,
        stalled[0] if stalled else None,
        note=(
            "rotation triples exist but every recursion exhausted"
            + (" (truncation artifact)" if artifact else "")
        ),
    )


def _triple_for_root(alg: LieAlgebra, root: Root) -> Optional[RotationTriple]:
    if root.exact:
        u = _solve_unit_imaginary_exact(alg, root)
        if u is None:
            return None
        return _triple_from_exact_u(alg, u)
    return _triple_from_float_root(alg, root)
