"""Structural analysis: solvability, Killing form, radical, Levi splitting,
simple-ideal decomposition and the three-dimensional signature tests.

Everything here is exact.  The radical comes from Cartan's criterion (the
Killing-orthogonal space of the derived algebra); the Levi factor from the
classical lifting construction along the derived series of the radical; the
simple ideals from splitting the centroid by the Gaussian-rational
eigenvalues of a generic centroid element.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Optional

from . import linalg as la
from .algebra import Element, LieAlgebra, Subspace, bracket
from .scalars import GQ, ONE, ZERO


# ---------------------------------------------------------------------------
# descending series
# ---------------------------------------------------------------------------

def derived_series(alg: LieAlgebra) -> list[Subspace]:
    """g = D^0 >= D^1 = [D^0, D^0] >= ... until stabilization."""
    cached = alg._cache.get("derived_series")
    if cached is not None:
        return list(cached)
    chain = [Subspace.full(alg)]
    while True:
        nxt = chain[-1].bracket_with(chain[-1])
        if nxt == chain[-1]:
            break
        chain.append(nxt)
        if nxt.dim == 0:
            break
    alg._cache["derived_series"] = tuple(chain)
    return chain

def lower_central_series(alg: LieAlgebra) -> list[Subspace]:
    """g = C^1 >= C^2 = [g, C^1] >= ... until stabilization."""
    cached = alg._cache.get("lower_central_series")
    if cached is not None:
        return list(cached)
    full = Subspace.full(alg)
    chain = [full]
    while True:
        nxt = full.bracket_with(chain[-1])
        if nxt == chain[-1]:
            break
        chain.append(nxt)
        if nxt.dim == 0:
            break
    alg._cache["lower_central_series"] = tuple(chain)
    return chain


def is_solvable(alg: LieAlgebra) -> bool:
    return derived_series(alg)[-1].dim == 0


def is_nilpotent(alg: LieAlgebra) -> bool:
    return lower_central_series(alg)[-1].dim == 0


def nilpotency_class(alg: LieAlgebra) -> Optional[int]:
    chain = lower_central_series(alg)
    if chain[-1].dim != 0:
        return None
    return len(chain) - 1


def derived_length(alg: LieAlgebra) -> Optional[int]:
    chain = derived_series(alg)
    if chain[-1].dim != 0:
        return None
    return len(chain) - 1


def subspace_solvable(sub: Subspace) -> bool:
    chain = [sub]
    while True:
        nxt = chain[-1].bracket_with(chain[-1])
        if nxt == chain[-1]:
            return nxt.dim == 0
        if nxt.dim == 0:
            return True
        chain.append(nxt)


# ---------------------------------------------------------------------------
# Killing form
# ---------------------------------------------------------------------------

def killing_form(alg: LieAlgebra) -> list[list[GQ]]:
    """B(e_i, e_j) = trace(ad e_i ad e_j), exact and symmetric."""
    cached = alg._cache.get("killing_form")
    if cached is not None:
        return [list(r) for r in cached]
    n = alg.dim
    ads = [alg.ad_matrix(alg.basis_element(i)) for i in range(n)]
    # sparse trace: tr(A B) = sum_{k,l} A[k][l] B[l][k]
    sparse = []
    for m in ads:
        entries = [
            (k, l, m[k][l]) for k in range(n) for l in range(n) if m[k][l]
        ]
        sparse.append(entries)
    out = la.zeros(n, n)
    for i in range(n):
        mi = ads[i]
        for j in range(i, n):
            acc = ZERO
            for (k, l, v) in sparse[j]:
                w = mi[l][k]
                if w:
                    acc = acc + w * v
            out[i][j] = acc
            out[j][i] = acc
    alg._cache["killing_form"] = tuple(tuple(r) for r in out)
    return out


def killing_on_subspace(alg: LieAlgebra, sub: Subspace) -> list[list[GQ]]:
    b = killing_form(alg)
    rows = sub.rows
    return [
        [
            _bilinear(b, rows[i], rows[j])
            for j in range(sub.dim)
        ]
        for i in range(sub.dim)
    ]


def _bilinear(b, x, y):
    acc = ZERO
    for i, xi in enumerate(x):
        if not xi:
            continue
        row = b[i]
        for j, yj in enumerate(y):
            if yj and row[j]:
                acc = acc + xi * row[j] * yj
    return acc


def killing_signature(alg: LieAlgebra) -> tuple[int, int, int]:
    return la.symmetric_signature(killing_form(alg))


# ---------------------------------------------------------------------------
# radical (Cartan's criterion)
# ---------------------------------------------------------------------------

def radical(alg: LieAlgebra) -> Subspace:
    """Maximal solvable ideal: Killing-orthogonal space of [g, g].

    The result is re-certified: it must be an ideal with terminating derived
    series.
    """
    b = killing_form(alg)
    derived = Subspace.full(alg).bracket_with(Subspace.full(alg))
    if derived.dim == 0:
        return Subspace.full(alg)
    # x in radical iff B(x, d) = 0 for all d in derived
    system = [la.mat_vec(b, list(row)) for row in derived.rows]
    rad = Subspace(alg, la.kernel(system))
    if not rad.is_ideal():
        raise AssertionError("radical candidate is not an ideal")
    if not subspace_solvable(rad):
        raise AssertionError("radical candidate is not solvable")
    return rad


def is_semisimple(alg: LieAlgebra) -> bool:
    if alg.dim == 0:
        return True
    return la.symmetric_signature(killing_form(alg))[2] == 0


# ---------------------------------------------------------------------------
# Levi decomposition
# ---------------------------------------------------------------------------

def levi_decomposition(alg: LieAlgebra) -> tuple[Subspace, Subspace]:
    """(radical, semisimple complement) with both certificates re-verified."""
    rad = radical(alg)
    if rad.dim == alg.dim:
        return rad, Subspace.zero(alg)
    if rad.dim == 0:
        return rad, Subspace.full(alg)
    # fast path: the coordinate complement is often already a subalgebra
    comp = rad.complement()
    if comp.is_subalgebra():
        sub, _ = alg.subalgebra(comp)
        if is_semisimple(sub):
            return rad, comp
    levi_rows = _levi_factor_rows(alg, rad)
    levi = Subspace(alg, levi_rows)
    # certificates
    if levi.dim + rad.dim != alg.dim:
        raise AssertionError("Levi factor does not complement the radical")
    if levi.sum_with(rad).dim != alg.dim:
        raise AssertionError("Levi factor overlaps the radical")
    if not levi.is_subalgebra():
        raise AssertionError("Levi factor is not a subalgebra")
    sub_alg, _ = alg.subalgebra(levi)
    if not is_semisimple(sub_alg):
        raise AssertionError("Levi factor is not semisimple")
    return rad, levi


def _levi_factor_rows(alg: LieAlgebra, rad: Subspace):
    """Classical lifting of a Levi subalgebra along the derived series."""
    derived_rad = rad.bracket_with(rad)
    if derived_rad.dim == 0:
        return _levi_abelian_radical(alg, rad)
    # reduce modulo [r, r]: find a Levi in the quotient, pull back, recurse
    quot, proj = alg.quotient(derived_rad)
    rad_q = Subspace(quot, [la.mat_vec(proj.matrix, list(r)) for r in rad.rows])
    levi_q_rows = _levi_factor_rows(quot, rad_q)
    # preimage of the quotient Levi: its lift spans, together with [r,r],
    # a subalgebra whose radical is [r,r]
    lift_rows = _preimage_rows(proj, levi_q_rows)
    pre = Subspace(alg, list(lift_rows) + list(derived_rad.rows))
    sub_alg, embed = alg.subalgebra(pre)
    sub_rad = Subspace(
        sub_alg,
        [pre.coordinates_of(r) for r in derived_rad.rows],
    )
    inner_rows = _levi_factor_rows(sub_alg, sub_rad)
    # express back in the ambient coordinates
    return [la.mat_vec(embed.matrix, list(r)) for r in inner_rows]


def _preimage_rows(proj, rows):
    out = []
    for r in rows:
        sol = la.solve(proj.matrix, list(r))
        if sol is None:
            raise AssertionError("projection is not surjective")
        out.append(sol)
    return out


def _levi_abelian_radical(alg: LieAlgebra, rad: Subspace):
    """Levi factor when the radical is abelian: one linear solve.

    With complement candidates c_i and corrections a_i in r, closure
    [c_i + a_i, c_j + a_j] = sum mu_ij^k (c_k + a_k) becomes linear because
    [a_i, a_j] = 0; solvability is Whitehead's lemma.
    """
    comp = rad.complement()
    m = comp.dim
    rdim = rad.dim
    quot, proj = alg.quotient(rad)
    comp_lifts = [list(r) for r in comp.rows]
    # structure constants mu of the semisimple quotient in the comp basis
    mu = {}
    defect = {}
    for i in range(m):
        for j in range(i + 1, m):
            br = alg.bracket_coords(tuple(comp_lifts[i]), tuple(comp_lifts[j]))
            img = la.mat_vec(proj.matrix, br)  # coords in quotient = comp order
            mu[(i, j)] = img
            # the part of the bracket lying in the radical
            back = list(br)
            for k in range(m):
                if img[k]:
                    back = [x - img[k] * y for x, y in zip(back, comp_lifts[k])]
            d = rad.coordinates_of(tuple(back))
            if d is None:
                raise AssertionError("bracket defect not in the radical")
            defect[(i, j)] = d
    # unknowns: a_i in rad coordinates (m * rdim); equations per (i, j) pair
    ads = []
    for i in range(m):
        adc = alg.ad_matrix(alg.element(comp_lifts[i]))
        # restrict to rad in its basis: rad rows -> images -> coords
        rows = []
        for r in rad.rows:
            img = la.mat_vec(adc, list(r))
            c = rad.coordinates_of(tuple(img))
            if c is None:
                raise AssertionError("radical is not ad-invariant")
            rows.append(c)
        ads.append(la.transpose(rows))  # column action on coordinates
    nvar = m * rdim
    system = []
    rhs = []
    for (i, j), d in defect.items():
        # d + ad(c_i) a_j - ad(c_j) a_i - sum_k mu_ij^k a_k = 0
        block = la.zeros(rdim, nvar)
        for r in range(rdim):
            for c in range(rdim):
                if ads[i][r][c]:
                    block[r][j * rdim + c] = block[r][j * rdim + c] + ads[i][r][c]
                if ads[j][r][c]:
                    block[r][i * rdim + c] = block[r][i * rdim + c] - ads[j][r][c]
        for k in range(m):
            f = mu[(i, j)][k]
            if f:
                for r in range(rdim):
                    block[r][k * rdim + r] = block[r][k * rdim + r] - f
        system.extend(block)
        rhs.extend([-x for x in d])
    sol = la.solve(system, rhs) if system else [ZERO] * nvar
    if sol is None:
        raise AssertionError("Levi lifting system is inconsistent")
    rows = []
    for i in range(m):
        corr = [ZERO] * alg.dim
        for c in range(rdim):
            f = sol[i * rdim + c]
            if f:
                corr = [x + f * y for x, y in zip(corr, rad.rows[c])]
        rows.append([x + y for x, y in zip(comp_lifts[i], corr)])
    return rows


# ---------------------------------------------------------------------------
# simple ideals of a semisimple algebra
# ---------------------------------------------------------------------------

class NotSemisimpleError(ValueError):
    pass


def centroid(alg: LieAlgebra) -> list[list[list[GQ]]]:
    """Basis of {T : T ad(x) = ad(x) T for all x}, as matrices.

    Computed by intersecting kernels one ad-operator at a time so the
    intermediate systems stay small.
    """
    n = alg.dim
    basis = [la.eye(n * n)[i] for i in range(n * n)]  # flattened T's
    for i in range(n):
        a = alg.ad_matrix(alg.basis_element(i))
        if la.is_zero_matrix(a):
            continue
        # commutator [T, A] applied to each current basis vector
        cols = []
        for v in basis:
            t = [[v[r * n + c] for c in range(n)] for r in range(n)]
            comm = la.mat_sub(la.mat_mul(t, a), la.mat_mul(a, t))
            cols.append([comm[r][c] for r in range(n) for c in range(n)])
        system = la.transpose(cols)  # rows indexed by matrix entry
        combos = la.kernel(system)
        new_basis = []
        for combo in combos:
            vec = [ZERO] * (n * n)
            for idx, f in enumerate(combo):
                if f:
                    vec = [x + f * y for x, y in zip(vec, basis[idx])]
            new_basis.append(vec)
        basis = [list(r) for r in la.rref(new_basis)[0]] if new_basis else []
        if not basis:
            break
    return [
        [[v[r * n + c] for c in range(n)] for r in range(n)] for v in basis
    ]


def simple_ideals(alg: LieAlgebra, rng: Optional[random.Random] = None) -> list[Subspace]:
    """Pairwise Killing-orthogonal simple ideals summing to the input.

    Requires a nondegenerate Killing form.  The decomposition splits a
    generic centroid element by its (provably Gaussian-rational) eigenvalues;
    the randomness only picks the generic element and is retried on the
    finitely many bad draws.
    """
    if alg.dim == 0:
        return []
    if not is_semisimple(alg):
        raise NotSemisimpleError("Killing form is degenerate")
    cent = centroid(alg)
    c = len(cent)
    if c == 1:
        return [Subspace.full(alg)]
    rng = rng or random.Random(0x5EED)
    for _ in range(64):
        coeffs = [GQ(rng.randint(-9, 9)) for _ in range(c)]
        t = la.zeros(alg.dim, alg.dim)
        for cf, m in zip(coeffs, cent):
            if cf:
                t = la.mat_add(t, la.mat_scale(m, cf))
        comps = _split_by_centroid_element(alg, t, c)
        if comps is not None:
            ideals = [Subspace(alg, rows) for rows in comps]
            if _certify_ideals(alg, ideals):
                return ideals
    raise AssertionError("failed to split the centroid with a generic element")


def _split_by_centroid_element(alg, t, centroid_dim):
    """Primary components of a generic centroid element over Q.

    Eigenvalues of centroid elements are Gaussian rationals (the centroid of
    a real simple algebra is R or C); conjugate pairs are folded into their
    rational quadratic so the components live in the real algebra.
    """
    mp = _squarefree_part(la.char_poly(t))
    if la.poly_deg(mp) != centroid_dim:
        return None  # not a generic element
    roots = _exact_roots(mp)
    if roots is None:
        return None
    factors = _rational_factors(roots)
    if factors is None:
        return None
    comps = []
    total = 0
    for poly in factors:
        m = _apply_poly(poly, t, alg.dim)
        rows = la.kernel(m)
        if not rows:
            return None
        comps.append(rows)
        total += len(rows)
    if total != alg.dim:
        return None
    return comps


def _squarefree_part(p):
    mp = [ONE]
    for f, _k in la.yun_squarefree(p):
        mp = la.poly_mul(mp, f)
    return mp


def _exact_roots(p):
    out = []
    for e in la.certified_roots(p):
        if e.exact is None:
            return None
        out.append(e.exact)
    return out


def _rational_factors(roots):
    """Group exact roots into rational linear/quadratic factors."""
    factors = []
    pending = list(roots)
    while pending:
        r = pending.pop()
        if r.is_real():
            factors.append([-r, GQ(1)])
            continue
        conj = r.conjugate()
        if conj not in pending:
            return None
        pending.remove(conj)
        # (x - r)(x - conj r) = x^2 - 2 Re(r) x + |r|^2
        factors.append([GQ(r.norm2()), GQ(-2 * r.re), GQ(1)])
    return factors


def _apply_poly(poly, t, n):
    out = la.mat_scale(la.eye(n), poly[-1])
    for c in reversed(poly[:-1]):
        out = la.mat_mul(out, t)
        out = la.mat_add(out, la.mat_scale(la.eye(n), c))
    return out


def _certify_ideals(alg, ideals):
    b = killing_form(alg)
    for i, u in enumerate(ideals):
        if not u.is_ideal():
            return False
        sub, _ = alg.subalgebra(u)
        if not is_semisimple(sub):
            return False
        if not _component_is_simple(sub):
            return False
        for v in ideals[i + 1:]:
            for x in u.rows:
                for y in v.rows:
                    if _bilinear(b, x, y):
                        return False
            if u.bracket_with(v).dim != 0:
                return False
    return True


def _component_is_simple(sub: LieAlgebra) -> bool:
    """Semisimple and indecomposable, certified through the centroid.

    Centroid R means indecomposable outright.  Centroid of dimension two is
    either the field C (indecomposable) or R x R (splits further): a generic
    element tells them apart by whether its eigenvalues are real.
    """
    cent = centroid(sub)
    if len(cent) == 1:
        return True
    if len(cent) > 2:
        return False
    rng = random.Random(0xC0FFEE)
    for _ in range(16):
        coeffs = [GQ(rng.randint(-9, 9)) for _ in cent]
        t = la.zeros(sub.dim, sub.dim)
        for cf, m in zip(coeffs, cent):
            if cf:
                t = la.mat_add(t, la.mat_scale(m, cf))
        mp = _squarefree_part(la.char_poly(t))
        if la.poly_deg(mp) != 2:
            continue
        roots = _exact_roots(mp)
        if roots is None:
            continue
        if all(r.is_real() for r in roots):
            return False  # R x R: decomposes further
        return True  # complex conjugate pair: centroid is the field C
    return False


# ---------------------------------------------------------------------------
# the signature tests used by the contractibility criterion
# ---------------------------------------------------------------------------

def is_sl2R(alg: LieAlgebra, sub: Optional[Subspace] = None) -> bool:
    """True iff a simple algebra is 3-dimensional of Killing signature (2,1).

    Among the 3-dimensional simple real algebras this signature singles out
    the split one; the definite signature (0,3) is the rotation algebra.
    """
    if sub is not None:
        algebra, _ = alg.subalgebra(sub)
    else:
        algebra = alg
    if algebra.dim != 3:
        return False
    sig = killing_signature(algebra)
    if sig[2] != 0:
        raise NotSemisimpleError("input is not semisimple")
    return sig == (2, 1, 0)


@dataclass(frozen=True)
class ContractibilityResult:
    contractible: bool
    witness: Optional[Subspace]  # first simple ideal violating the test
    simple_dims: tuple[int, ...]
    sl2_count: int


def contractibility_check(alg: LieAlgebra) -> ContractibilityResult:
    """All simple ideals of the Levi factor are split 3-dimensional ones."""
    rad, levi = levi_decomposition(alg)
    if levi.dim == 0:
        return ContractibilityResult(True, None, (), 0)
    levi_alg, embed = alg.subalgebra(levi)
    ideals = simple_ideals(levi_alg)
    dims = tuple(s.dim for s in ideals)
    count = 0
    for s in ideals:
        if is_sl2R(levi_alg, s):
            count += 1
        else:
            witness_rows = [la.mat_vec(embed.matrix, list(r)) for r in s.rows]
            return ContractibilityResult(
                False, Subspace(alg, witness_rows), dims, count
            )
    return ContractibilityResult(True, None, dims, count)
