"""Spectra of ad-operators and the exponential-map criteria built on them.

The heart of the module is :func:`spectrum`: an exact characteristic
polynomial followed by certified numeric roots.  On top of it sit the
regularity test against 2*pi*i*Z, the all-elements spectral condition for
solvable algebras via their roots, the averaged-exponential operators
kappa(x) and beta(t), and the additive character certificate for logarithms
of exponential words.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence, Union

import numpy as np

from . import linalg as la
from .algebra import Element, LieAlgebra, Subspace
from .scalars import GQ, ONE, ZERO

TWO_PI = 2.0 * math.pi

REGULAR = "regular"
SINGULAR = "singular"
UNCERTAIN = "uncertain"


# ---------------------------------------------------------------------------
# spectra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralEntry:
    value: complex
    multiplicity: int
    error_radius: float
    exact: Optional[GQ] = None

    def to_dict(self) -> dict:
        d = {
            "re": self.value.real,
            "im": self.value.imag,
            "multiplicity": self.multiplicity,
            "error_radius": self.error_radius,
        }
        if self.exact is not None:
            d["exact"] = str(self.exact)
        return d


@dataclass(frozen=True)
class SpectrumReport:
    entries: tuple[SpectralEntry, ...]
    char_poly: tuple[GQ, ...]  # ascending, monic

    @property
    def dim(self) -> int:
        return len(self.char_poly) - 1

    def total_multiplicity(self) -> int:
        return sum(e.multiplicity for e in self.entries)

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [e.to_dict() for e in self.entries],
            "char_poly": [str(c) for c in self.char_poly],
        }


def spectrum(
    matrix: Sequence[Sequence[GQ]],
    block_prefixes: Optional[Sequence[int]] = None,
) -> SpectrumReport:
    """Eigenvalues with multiplicities and certified radii.

    ``block_prefixes`` may list nested invariant coordinate prefixes (the
    matrix must vanish below each diagonal block); the characteristic
    polynomial then factors blockwise, which keeps the numeric root finding
    on small, well-conditioned polynomials.
    """
    n = len(matrix)
    blocks = _diagonal_blocks(matrix, block_prefixes) if block_prefixes else None
    if blocks is None:
        blocks = [[list(row) for row in matrix]] if n else []
    entries: list[SpectralEntry] = []
    poly: list[GQ] = [ONE]
    for b in blocks:
        p = la.char_poly(b)
        poly = la.poly_mul(poly, p)
        for r in la.certified_roots(p):
            entries.append(SpectralEntry(r.value, r.multiplicity, r.radius, r.exact))
    return SpectrumReport(tuple(_merge_entries(entries)), tuple(poly))


def _diagonal_blocks(matrix, prefixes):
    n = len(matrix)
    bounds = [0] + sorted({p for p in prefixes if 0 < p <= n})
    if bounds[-1] != n:
        bounds.append(n)
    # entries below each block must vanish or the prefixes are not invariant
    for e in bounds[1:-1]:
        for i in range(e, n):
            for j in range(e):
                if matrix[i][j]:
                    return None
    return [
        [[matrix[i][j] for j in range(s, e)] for i in range(s, e)]
        for s, e in zip(bounds, bounds[1:])
    ]


def _merge_entries(entries):
    merged: dict[GQ, SpectralEntry] = {}
    rest = []
    for e in entries:
        if e.exact is not None:
            prev = merged.get(e.exact)
            if prev:
                merged[e.exact] = SpectralEntry(
                    e.value, prev.multiplicity + e.multiplicity, 0.0, e.exact
                )
            else:
                merged[e.exact] = e
        else:
            rest.append(e)
    out = list(merged.values()) + rest
    out.sort(key=lambda s: (s.value.real, s.value.imag))
    return out


def spectrum_of_ad(x: Element) -> SpectrumReport:
    alg = x.algebra
    return spectrum(alg.ad_matrix(x), alg.ideal_prefixes)


# ---------------------------------------------------------------------------
# exp-regularity
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegularityVerdict:
    status: str  # regular | singular | uncertain
    offending_eigenvalue: Optional[complex] = None
    offending_integer: Optional[int] = None
    exact: bool = False
    note: str = ""

    def to_dict(self) -> dict:
        d: dict = {"status": self.status, "exact": self.exact}
        if self.offending_eigenvalue is not None:
            d["eigenvalue"] = {
                "re": self.offending_eigenvalue.real,
                "im": self.offending_eigenvalue.imag,
            }
        if self.offending_integer is not None:
            d["k"] = self.offending_integer
        if self.note:
            d["note"] = self.note
        return d


def is_exp_regular(
    x: Element, tol: float = 1e-9, *, two_pi_scale: bool = False
) -> RegularityVerdict:
    """Does Spec(ad x) meet 2*pi*i*Z only in 0?

    With ``two_pi_scale`` the element is read as 2*pi times its exact
    coefficients; membership of the scaled eigenvalues in 2*pi*i*Z then
    reduces to exact membership of the unscaled ones in i*Z, so the verdict
    carries an exactness certificate.
    """
    if two_pi_scale:
        return _regularity_exact_two_pi(x)
    rep = spectrum_of_ad(x)
    return regularity_from_entries(rep.entries, tol)


def regularity_from_entries(
    entries: Sequence[SpectralEntry], tol: float
) -> RegularityVerdict:
    uncertain: Optional[SpectralEntry] = None
    for e in entries:
        lam = e.value
        k = round(lam.imag / TWO_PI)
        if k == 0:
            continue
        dist = abs(lam - complex(0.0, TWO_PI * k))
        if dist <= tol:
            return RegularityVerdict(SINGULAR, lam, int(k))
        if dist <= tol + e.error_radius:
            uncertain = e
    if uncertain is not None:
        k = round(uncertain.value.imag / TWO_PI)
        return RegularityVerdict(
            UNCERTAIN,
            uncertain.value,
            int(k),
            note="eigenvalue within error radius of 2*pi*i*Z but not provably on it",
        )
    return RegularityVerdict(REGULAR)


def _regularity_exact_two_pi(x: Element) -> RegularityVerdict:
    alg = x.algebra
    p = list(spectrum(alg.ad_matrix(x), alg.ideal_prefixes).char_poly)
    bound = la.cauchy_root_bound(p)
    kmax = int(math.floor(bound + 1))
    for k in range(1, kmax + 1):
        for s in (1, -1):
            if not la.poly_eval(p, GQ(0, s * k)):
                return RegularityVerdict(
                    SINGULAR,
                    complex(0.0, TWO_PI * s * k),
                    s * k,
                    exact=True,
                    note="exact: i*k is an eigenvalue of the unscaled operator",
                )
    return RegularityVerdict(
        REGULAR,
        exact=True,
        note="exact: no eigenvalue of the unscaled operator lies in i*Z away from 0",
    )


# ---------------------------------------------------------------------------
# roots of solvable algebras (constructive triangularization)
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Root:
    """Weight functional of a one-dimensional quotient in an ideal flag.

    ``values`` holds the value on each basis vector: Gaussian rationals when
    the whole extraction stayed exact, complex floats otherwise (then
    ``residual`` bounds the numeric defect of the flag relations).
    """

    values: tuple
    exact: bool
    flag_small: tuple  # rows spanning the smaller flag ideal (complexified)
    flag_large: tuple
    residual: float = 0.0

    def value_on(self, x: Element) -> Union[GQ, complex]:
        if self.exact:
            acc = ZERO
            for c, v in zip(x.coeffs, self.values):
                if c:
                    acc = acc + v * c
            return acc
        acc = 0j
        for c, v in zip(x.coeffs, self.values):
            if c:
                acc += complex(v) * complex(c)
        return acc

    def values_complex(self) -> list[complex]:
        return [complex(v) for v in self.values]

    def to_dict(self) -> dict:
        if self.exact:
            vals = [str(v) for v in self.values]
        else:
            vals = [{"re": complex(v).real, "im": complex(v).imag} for v in self.values]
        return {"values": vals, "exact": self.exact, "residual": self.residual}


class NotSolvableError(ValueError):
    pass


def roots_solvable(alg: LieAlgebra) -> list[Root]:
    """All dim-many roots via iterated common-eigenvector extraction.

    Works on the complexified adjoint representation.  Each extraction walks
    a flag of subalgebras adapted to the derived series, refining a joint
    eigenspace one generator at a time; eigenvalues are taken exactly when
    they are Gaussian rational and the computation degrades to certified
    floats otherwise.  When the algebra carries an invariant coordinate-
    prefix chain the extraction runs independently on each small quotient
    block, which keeps large truncated algebras cheap.
    """
    from . import structure as st

    cached = alg._cache.get("roots")
    if cached is not None:
        return list(cached)
    if not st.is_solvable(alg):
        raise NotSolvableError("algebra is not solvable")
    n = alg.dim
    if n == 0:
        return []
    gens = _adapted_generators(alg)  # innermost first; columns in e-basis
    gmat = la.transpose(gens)  # g_j = sum_i gmat[i][j] e_i
    gmat_inv_t = la.inverse(la.transpose(gmat))
    if gmat_inv_t is None:
        raise AssertionError("adapted generators do not form a basis")
    ads = [alg.ad_matrix(alg.basis_element(i)) for i in range(n)]
    bounds = _verified_block_bounds(alg, ads)
    roots: list[Root] = []
    for s, e in zip(bounds, bounds[1:]):
        block_ops = [[row[s:e] for row in m[s:e]] for m in ads]
        block_lifts = [
            [ONE if c == s + r else ZERO for c in range(n)] for r in range(e - s)
        ]
        prefix_rows = [
            tuple(ONE if c == r else ZERO for c in range(n)) for r in range(s)
        ]
        roots.extend(
            _roots_on_module(
                alg, gmat, gmat_inv_t, ads, block_ops, block_lifts, prefix_rows
            )
        )
    alg._cache["roots"] = tuple(roots)
    return roots


def _verified_block_bounds(alg, ads):
    n = alg.dim
    if not alg.ideal_prefixes:
        return [0, n]
    bounds = [0] + sorted({p for p in alg.ideal_prefixes if 0 < p <= n})
    if bounds[-1] != n:
        bounds.append(n)
    for m in ads:
        for e in bounds[1:-1]:
            for i in range(e, n):
                for j in range(e):
                    if m[i][j]:
                        return [0, n]
    return bounds


def _roots_on_module(alg, gmat, gmat_inv_t, ads, e_ops, lifts, prefix_rows):
    """Triangularize one g-module given by matrices of the basis action."""
    n = alg.dim
    m_dim = len(lifts)
    exact_mode = True
    chain_rows: list = list(prefix_rows)
    roots: list[Root] = []
    while len(chain_rows) < len(prefix_rows) + m_dim:
        found = _common_eigenvector_exact(e_ops, gmat) if exact_mode else None
        if found is None:
            if exact_mode:
                exact_mode = False
                e_ops = [np.array([[complex(c) for c in row] for row in m]) for m in e_ops]
                lifts = np.array([[complex(c) for c in row] for row in lifts])
            vec, gen_weights = _common_eigenvector_float(e_ops, gmat)
        else:
            vec, gen_weights = found
        # weights on the original basis: alpha(e) solves (G^T) alpha = w
        if exact_mode:
            weights = la.mat_vec(gmat_inv_t, gen_weights)
            for i, op in enumerate(e_ops):
                img = la.mat_vec(op, vec)
                if img != [weights[i] * c for c in vec]:
                    raise AssertionError("extracted vector is not a joint eigenvector")
            lift_row = _combine_exact(lifts, vec)
        else:
            ginv = np.array([[complex(c) for c in row] for row in gmat_inv_t])
            weights = list(ginv @ np.array(gen_weights, dtype=complex))
            lift_row = list(np.asarray(vec, dtype=complex) @ np.asarray(lifts))
        chain_rows.append(tuple(lift_row))
        residual = 0.0
        if not exact_mode:
            residual = _flag_residual(ads, chain_rows, weights)
        roots.append(
            Root(
                tuple(weights),
                exact_mode,
                tuple(chain_rows[:-1]),
                tuple(chain_rows),
                residual,
            )
        )
        e_ops, lifts = _quotient_ops(e_ops, lifts, vec, exact_mode)
    return roots


def _adapted_generators(alg) -> list[list[GQ]]:
    """Basis vectors ordered along a refinement of the derived series.

    Returned innermost first, so every prefix spans an ideal of the span of
    the next prefix; that is exactly what the eigenvector refinement needs.
    """
    from . import structure as st

    chain = st.derived_series(alg)  # g = D^0 > D^1 > ... > 0
    gens: list[list[GQ]] = []
    seen = Subspace.zero(alg)
    for sub in reversed(chain):  # innermost first
        for row in sub.rows:
            if not seen.contains(row):
                gens.append(list(row))
                seen = seen.sum_with(Subspace(alg, [list(row)]))
    # complete to a basis of g (derived chain starts at g, so already full)
    for i in range(alg.dim):
        v = alg.basis_element(i).coeffs
        if not seen.contains(v):
            gens.append(list(v))
            seen = seen.sum_with(Subspace(alg, [list(v)]))
    return gens


def _common_eigenvector_exact(e_ops, gmat):
    """Joint eigenvector over Q(i), or None when a step needs irrationals."""
    m = len(e_ops[0]) if e_ops else 0
    n = len(gmat)
    ngen = len(gmat[0]) if n else 0
    w_rows = la.eye(m)
    gen_weights = [ZERO] * ngen
    for j in range(ngen):
        op = _gen_op_exact(e_ops, gmat, j, m)
        restricted = _restrict_exact(op, w_rows)
        if restricted is None:
            raise AssertionError("joint eigenspace is not invariant")
        r, red = restricted
        lam = _pick_exact_eigenvalue(r)
        if lam is None:
            return None
        gen_weights[j] = lam
        shifted = la.mat_sub(r, la.mat_scale(la.eye(len(r)), lam))
        kern = la.kernel(shifted)
        if not kern:
            raise AssertionError("exact eigenvalue without eigenvector")
        # kernel coordinates are relative to the reduced basis of the space
        w_rows = [_combine_exact(red, k) for k in kern]
    vec = list(w_rows[0])
    return vec, gen_weights


def _gen_op_exact(e_ops, gmat, j, m):
    op = la.zeros(m, m)
    for i in range(len(gmat)):
        c = gmat[i][j]
        if c:
            op = la.mat_add(op, la.mat_scale(e_ops[i], c))
    return op


def _restrict_exact(op, w_rows):
    """Matrix of op on span(w_rows) in the rref basis, plus that basis."""
    red, pivots = la.rref([list(r) for r in w_rows])
    cols = []
    for r in red:
        img = la.mat_vec(op, list(r))
        coords = _coords_in(red, pivots, img)
        if coords is None:
            return None
        cols.append(coords)
    return la.transpose(cols), red


def _coords_in(red, pivots, vec):
    out = [ZERO] * len(red)
    v = list(vec)
    for r, piv in enumerate(pivots):
        f = v[piv]
        if f:
            out[r] = f
            v = [a - f * b for a, b in zip(v, red[r])]
    if any(v):
        return None
    return out


def _pick_exact_eigenvalue(r) -> Optional[GQ]:
    for e in la.certified_roots(la.char_poly(r)):
        if e.exact is not None:
            return e.exact
    return None


def _combine_exact(rows, coeffs):
    out = [ZERO] * len(rows[0])
    for f, row in zip(coeffs, rows):
        if f:
            out = [a + f * b for a, b in zip(out, row)]
    return out


def _common_eigenvector_float(e_ops, gmat):
    """Float fallback of the same refinement, with SVD null spaces."""
    ops = [np.asarray(m, dtype=complex) for m in e_ops]
    m = ops[0].shape[0]
    n = len(gmat)
    ngen = len(gmat[0]) if n else 0
    w = np.eye(m, dtype=complex)  # rows: orthonormal basis of the eigenspace
    gen_weights = []
    for j in range(ngen):
        op = sum(complex(gmat[i][j]) * ops[i] for i in range(n))
        r = w.conj() @ op @ w.T  # restriction in the orthonormal basis
        eigvals = np.linalg.eigvals(r)
        lam = sorted(eigvals, key=lambda z: (round(z.real, 9), round(z.imag, 9)))[0]
        shifted = r - lam * np.eye(r.shape[0])
        _, s, vh = np.linalg.svd(shifted)
        tol = max(r.shape) * np.finfo(float).eps * (1 + np.max(s) if len(s) else 1.0)
        null_mask = np.abs(s) <= max(tol, 1e-10)
        k = int(np.sum(null_mask))
        if k == 0:
            null = vh[-1:].conj()
        else:
            null = vh[len(s) - k:].conj()
        gen_weights.append(complex(lam))
        w = null @ w
        # re-orthonormalize
        q, _ = np.linalg.qr(w.conj().T)
        w = q.conj().T
    return w[0], gen_weights


def _quotient_ops(e_ops, lifts, vec, exact):
    if exact:
        m = len(vec)
        piv = next(i for i, c in enumerate(vec) if c)
        inv = ONE / vec[piv]
        keep = [i for i in range(m) if i != piv]

        def project(col):
            f = col[piv] * inv
            return [col[i] - f * vec[i] for i in keep]

        new_ops = []
        for op in e_ops:
            cols = [project([op[i][j] for i in range(m)]) for j in keep]
            new_ops.append(la.transpose(cols))
        new_lifts = [lifts[i] for i in keep]
        return new_ops, new_lifts
    vecf = np.asarray(vec, dtype=complex)
    m = len(vecf)
    piv = int(np.argmax(np.abs(vecf)))
    keep = [i for i in range(m) if i != piv]
    scale = vecf[piv]

    def projectf(col):
        f = col[piv] / scale
        return np.array([col[i] - f * vecf[i] for i in keep])

    new_ops = []
    for op in e_ops:
        cols = [projectf(op[:, j]) for j in keep]
        new_ops.append(np.array(cols).T if cols else np.zeros((0, 0), dtype=complex))
    new_lifts = np.asarray(lifts)[keep]
    return new_ops, new_lifts


def _flag_residual(ads, chain_rows, weights):
    big = np.array([[complex(c) for c in row] for row in chain_rows])
    prev = big[:-1] if len(chain_rows) > 1 else np.zeros((0, big.shape[1]), dtype=complex)
    v = big[-1]
    nv = np.linalg.norm(v)
    if nv:
        v = v / nv
    res = 0.0
    for i, m in enumerate(ads):
        mm = np.array([[complex(c) for c in row] for row in m])
        img = mm @ v - complex(weights[i]) * v
        if prev.shape[0]:
            coef, *_ = np.linalg.lstsq(prev.T, img, rcond=None)
            img = img - prev.T @ coef
        res = max(res, float(np.linalg.norm(img)))
    return res


# ---------------------------------------------------------------------------
# the spectral condition over all elements
# ---------------------------------------------------------------------------

TRUE = "true"
FALSE = "false"


@dataclass(frozen=True)
class SCResult:
    verdict: str  # true | false | uncertain
    witness: Optional[Root] = None
    exact: bool = True
    note: str = ""

    def to_dict(self) -> dict:
        d: dict = {"verdict": self.verdict, "exact": self.exact}
        if self.witness is not None:
            d["witness_root"] = self.witness.to_dict()
        if self.note:
            d["note"] = self.note
        return d


def satisfies_SC(
    alg: LieAlgebra, tol: float = 1e-9, roots: Optional[list[Root]] = None
) -> SCResult:
    """Spec(ad x) meets the imaginary axis only in 0, for every element.

    For solvable algebras the condition is equivalent to every root's value
    set meeting i*R trivially, i.e. the imaginary part of each root being a
    real multiple of its real part.  Non-solvable algebras fail outright:
    algebras with everywhere-regular spectra are solvable, so the condition
    cannot hold.
    """
    from . import structure as st

    if not st.is_solvable(alg):
        return SCResult(
            FALSE,
            note="not solvable: the spectral condition forces solvability",
        )
    if roots is None:
        roots = roots_solvable(alg)
    sure = True
    for root in roots:
        if root.exact:
            verdict = _root_line_ok_exact(root)
            if verdict is False:
                return SCResult(FALSE, witness=root)
        else:
            ok, margin = _root_line_ok_float(root, tol)
            if not ok:
                return SCResult(FALSE, witness=root, exact=False)
            if margin < 10 * tol + root.residual:
                sure = False
    if sure:
        return SCResult(TRUE, exact=all(r.exact for r in roots))
    return SCResult(
        UNCERTAIN,
        exact=False,
        note="a float root is too close to the decision boundary",
    )


def _root_line_ok_exact(root: Root) -> bool:
    re_row = [GQ(v.re) for v in root.values]
    im_row = [GQ(v.im) for v in root.values]
    re_zero = not any(re_row)
    im_zero = not any(im_row)
    if im_zero:
        return True
    if re_zero:
        return False  # value set is exactly the imaginary axis
    return la.rank([re_row, im_row]) == 1


def _root_line_ok_float(root: Root, tol: float):
    vals = np.array(root.values_complex())
    re = vals.real
    im = vals.imag
    scale = max(1.0, float(np.max(np.abs(vals))))
    if np.max(np.abs(im)) <= tol * scale:
        return True, float(np.max(np.abs(im))) / scale
    if np.max(np.abs(re)) <= tol * scale:
        return False, 0.0
    m = np.vstack([re, im])
    s = np.linalg.svd(m, compute_uv=False)
    # rank 1 and not the imaginary axis: fine; rank 2: violation
    if s[1] > tol * scale:
        return False, 0.0
    return True, float(s[0] - s[1]) / scale


# ---------------------------------------------------------------------------
# averaged exponentials: kappa and beta
# ---------------------------------------------------------------------------

def phi1(m: np.ndarray, target_norm: float = 0.25) -> np.ndarray:
    """The entire function (e^z - 1)/z evaluated at a matrix.

    Series with argument halving: phi(2A) = phi(A) (e^A + 1) / 2, with the
    exponential maintained alongside.  Truncation keeps the error far below
    1e-12 for spectral radius up to the tested range.
    """
    a = np.asarray(m, dtype=complex)
    n = a.shape[0]
    if n == 0:
        return a.copy()
    norm = np.linalg.norm(a, 1)
    s = 0
    while norm > target_norm:
        norm /= 2.0
        s += 1
    t = a / (2.0 ** s)
    phi = np.eye(n, dtype=complex)
    term = np.eye(n, dtype=complex)
    for k in range(1, 24):
        term = term @ t / k
        phi = phi + term / (k + 1)
    e = np.eye(n) + t @ phi
    for _ in range(s):
        phi = phi @ (e + np.eye(n)) / 2.0
        e = e @ e
    return phi


def kappa(x: Element) -> np.ndarray:
    """Averaged inverse-exponential operator: phi1 evaluated at -ad x."""
    ad = la.to_complex_array(x.algebra.ad_matrix(x))
    out = phi1(-ad)
    if np.max(np.abs(out.imag)) < 1e-300:
        return out.real
    return out


def kappa_invertible(x: Element, threshold: float = 1e-8) -> tuple[bool, float]:
    k = kappa(x)
    s = np.linalg.svd(k, compute_uv=False)
    smin = float(s[-1]) if len(s) else 1.0
    return smin > threshold, smin


def beta_operator(d: np.ndarray, t: float) -> np.ndarray:
    """beta(t) = integral of e^{s t D} ds over [0, 1] = phi1(t D)."""
    d = np.asarray(d, dtype=complex)
    return phi1(t * d)


def beta_polynomial(d_exact: Sequence[Sequence[GQ]]) -> list[list[list[GQ]]]:
    """For nilpotent D: beta(t) = sum_k t^k D^k / (k+1)! as exact matrices.

    Returns the coefficient matrices of the polynomial in t, constant first.
    """
    n = len(d_exact)
    coeffs = [la.eye(n)]
    power = la.eye(n)
    fact = Fraction(1)
    for k in range(1, n + 2):
        power = la.mat_mul(power, d_exact)
        if la.is_zero_matrix(power):
            return coeffs
        fact *= k + 1
        coeffs.append(la.mat_scale(power, GQ(1 / fact)))
    raise ValueError("operator is not nilpotent")


def semidirect_exp(v: np.ndarray, t: float, d: np.ndarray) -> tuple[np.ndarray, float]:
    """Exponential of the translation part of a one-parameter semidirect group."""
    return beta_operator(d, t) @ np.asarray(v, dtype=complex), t


def exp_image_membership(
    w: np.ndarray, t: float, d: np.ndarray, tol: float = 1e-8
) -> tuple[bool, float]:
    """Is (w, t) in the image, i.e. is beta(t) x = w solvable?"""
    b = beta_operator(d, t)
    w = np.asarray(w, dtype=complex)
    x, *_ = np.linalg.lstsq(b, w, rcond=None)
    residual = float(np.linalg.norm(b @ x - w))
    return residual <= tol * (1.0 + float(np.linalg.norm(w))), residual


# ---------------------------------------------------------------------------
# logarithm certificates for exponential words
# ---------------------------------------------------------------------------

EXISTS_UNIQUE = "exists_unique"
INCONCLUSIVE = "inconclusive"


@dataclass(frozen=True)
class LogCertificate:
    status: str  # exists_unique | inconclusive | uncertain
    witness_root: Optional[Root] = None
    value: Optional[complex] = None
    k: Optional[int] = None
    exact: bool = True
    note: str = ""

    def to_dict(self) -> dict:
        d: dict = {"status": self.status, "exact": self.exact}
        if self.value is not None:
            d["value"] = {"re": self.value.real, "im": self.value.imag}
        if self.k is not None:
            d["k"] = self.k
        if self.witness_root is not None:
            d["witness_root"] = self.witness_root.to_dict()
        if self.note:
            d["note"] = self.note
        return d


def log_certificate(
    factors: Sequence[Element],
    alg: LieAlgebra,
    *,
    two_pi: Optional[Sequence[bool]] = None,
    tol: float = 1e-9,
    roots: Optional[list[Root]] = None,
) -> LogCertificate:
    """Unique-logarithm certificate for a word of exponentials.

    The group element is exp(y_1) ... exp(y_k); each root defines an
    additive character, so its value on the word is the sum of the root
    values.  If no such value lands in 2*pi*i*Z away from zero, a unique
    logarithm exists.  Factors flagged in ``two_pi`` are read as 2*pi times
    their exact coefficients, which keeps the membership test exact.
    """
    if roots is None:
        roots = roots_solvable(alg)  # raises NotSolvableError when unsuitable
    flags = list(two_pi) if two_pi is not None else [False] * len(factors)
    if len(flags) != len(factors):
        raise ValueError("two_pi flags must match the factors")
    uncertain_seen = False
    all_exact = True
    for root in roots:
        if root.exact:
            plain = ZERO
            scaled = ZERO
            for y, f in zip(factors, flags):
                v = root.value_on(y)
                if f:
                    scaled = scaled + v
                else:
                    plain = plain + v
            # plain + 2*pi*scaled in 2*pi*i*Z \ {0} forces plain = 0 (the
            # factor 2*pi is irrational) and scaled = i*k with integer k != 0
            if not plain and not scaled.re and scaled.im and scaled.im.denominator == 1:
                k = int(scaled.im)
                return LogCertificate(
                    INCONCLUSIVE,
                    witness_root=root,
                    value=complex(0.0, TWO_PI * k),
                    k=k,
                    exact=True,
                    note="character value lands in 2*pi*i*Z away from zero",
                )
            continue
        all_exact = False
        total = 0j
        for y, f in zip(factors, flags):
            v = complex(root.value_on(y))
            total += v * TWO_PI if f else v
        k = round(total.imag / TWO_PI)
        if k != 0:
            dist = abs(total - complex(0.0, TWO_PI * k))
            if dist <= tol:
                return LogCertificate(
                    INCONCLUSIVE, witness_root=root, value=total, k=int(k), exact=False
                )
            if dist <= tol + root.residual:
                uncertain_seen = True
    if uncertain_seen:
        return LogCertificate(
            UNCERTAIN, exact=False, note="a float character value is near 2*pi*i*Z"
        )
    return LogCertificate(EXISTS_UNIQUE, exact=all_exact)


# ---------------------------------------------------------------------------
# multiset matching used by the cross-validation suites
# ---------------------------------------------------------------------------

def match_value_multisets(
    a: Sequence[tuple[complex, int, float]],
    b: Sequence[tuple[complex, int, float]],
) -> bool:
    """Greedy matching of (value, multiplicity, radius) multisets."""
    left: list[tuple[complex, float]] = []
    for v, m, r in a:
        left.extend([(complex(v), float(r))] * int(m))
    right: list[tuple[complex, float]] = []
    for v, m, r in b:
        right.extend([(complex(v), float(r))] * int(m))
    if len(left) != len(right):
        return False
    used = [False] * len(right)
    for v, r in left:
        best = None
        best_d = None
        for i, (w, s) in enumerate(right):
            if used[i]:
                continue
            d = abs(v - w)
            if d <= r + s + 1e-9 and (best_d is None or d < best_d):
                best, best_d = i, d
        if best is None:
            return False
        used[best] = True
    return True
