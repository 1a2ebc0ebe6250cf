"""Exact linear algebra and polynomial kernels over the Gaussian rationals.

Matrices are plain ``list[list[GQ]]`` (rows); polynomials are coefficient
lists in ascending order.  Everything in this module is either exact or, for
the numeric root finder, carries a certified error radius.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Optional, Sequence

import numpy as np

from .scalars import GQ, ONE, ZERO

MatrixG = Sequence[Sequence[GQ]]
Poly = Sequence[GQ]


# ---------------------------------------------------------------------------
# basic matrix operations
# ---------------------------------------------------------------------------

def mat(rows: Iterable[Iterable]) -> list[list[GQ]]:
    return [[GQ.of(v) for v in row] for row in rows]


def eye(n: int) -> list[list[GQ]]:
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def zeros(r: int, c: int) -> list[list[GQ]]:
    return [[ZERO] * c for _ in range(r)]


def mat_add(a: MatrixG, b: MatrixG) -> list[list[GQ]]:
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_sub(a: MatrixG, b: MatrixG) -> list[list[GQ]]:
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def mat_scale(a: MatrixG, s) -> list[list[GQ]]:
    s = GQ.of(s)
    return [[s * x for x in row] for row in a]


def mat_mul(a: MatrixG, b: MatrixG) -> list[list[GQ]]:
    n, k = len(a), len(b)
    m = len(b[0]) if k else 0
    bt = list(zip(*b))
    out = zeros(n, m)
    for i in range(n):
        ai = a[i]
        for j in range(m):
            acc = ZERO
            col = bt[j]
            for t in range(k):
                x = ai[t]
                if x:
                    acc = acc + x * col[t]
            out[i][j] = acc
    return out


def mat_vec(a: MatrixG, v: Sequence[GQ]) -> list[GQ]:
    out = []
    for row in a:
        acc = ZERO
        for x, y in zip(row, v):
            if x and y:
                acc = acc + x * y
        out.append(acc)
    return out


def transpose(a: MatrixG) -> list[list[GQ]]:
    return [list(col) for col in zip(*a)]


def trace(a: MatrixG) -> GQ:
    t = ZERO
    for i in range(len(a)):
        t = t + a[i][i]
    return t


def mat_eq(a: MatrixG, b: MatrixG) -> bool:
    return len(a) == len(b) and all(
        len(ra) == len(rb) and all(x == y for x, y in zip(ra, rb))
        for ra, rb in zip(a, b)
    )


def is_zero_matrix(a: MatrixG) -> bool:
    return all(not x for row in a for x in row)


# ---------------------------------------------------------------------------
# row reduction
# ---------------------------------------------------------------------------

def rref(rows: MatrixG) -> tuple[list[list[GQ]], list[int]]:
    """Reduced row echelon form (canonical) and pivot column indices.

    Zero rows are dropped, so the result is a canonical basis of the row
    space: two subspaces are equal iff their rrefs are equal.
    """
    m = [list(row) for row in rows]
    if not m:
        return [], []
    ncols = len(m[0])
    pivots: list[int] = []
    r = 0
    for c in range(ncols):
        p = next((i for i in range(r, len(m)) if m[i][c]), None)
        if p is None:
            continue
        m[r], m[p] = m[p], m[r]
        inv = ONE / m[r][c]
        m[r] = [inv * x if x else x for x in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [x - f * y if y else x for x, y in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m[:r], pivots


def rank(rows: MatrixG) -> int:
    return len(rref(rows)[0])


def solve(a: MatrixG, b: Sequence[GQ]) -> Optional[list[GQ]]:
    """One solution of A x = b, or None when inconsistent."""
    n = len(a)
    if n == 0:
        return []
    aug = [list(row) + [b[i]] for i, row in enumerate(a)]
    red, pivots = rref(aug)
    ncols = len(a[0])
    if ncols in pivots:
        return None
    x = [ZERO] * ncols
    for r, c in enumerate(pivots):
        x[c] = red[r][ncols]
    return x


def kernel(a: MatrixG) -> list[list[GQ]]:
    """Canonical basis of the right null space of A."""
    if not a:
        return []
    ncols = len(a[0])
    red, pivots = rref(a)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for f in free:
        v = [ZERO] * ncols
        v[f] = ONE
        for r, c in enumerate(pivots):
            v[c] = -red[r][f]
        basis.append(v)
    return basis


def inverse(a: MatrixG) -> Optional[list[list[GQ]]]:
    n = len(a)
    aug = [list(row) + list(eye(n)[i]) for i, row in enumerate(a)]
    red, pivots = rref(aug)
    if pivots != list(range(n)):
        return None
    return [row[n:] for row in red]


# ---------------------------------------------------------------------------
# characteristic polynomial (exact)
# ---------------------------------------------------------------------------

def char_poly(a: MatrixG) -> list[GQ]:
    """Coefficients of det(lambda*I - A), ascending, monic."""
    h = [list(row) for row in a]
    n = len(h)
    if n == 0:
        return [ONE]
    # similarity reduction to upper Hessenberg form with exact pivoting
    for j in range(n - 2):
        p = next((i for i in range(j + 1, n) if h[i][j]), None)
        if p is None:
            continue
        if p != j + 1:
            h[j + 1], h[p] = h[p], h[j + 1]
            for row in h:
                row[j + 1], row[p] = row[p], row[j + 1]
        piv = h[j + 1][j]
        for i in range(j + 2, n):
            if h[i][j]:
                f = h[i][j] / piv
                h[i] = [x - f * y for x, y in zip(h[i], h[j + 1])]
                for row in h:
                    row[j + 1] = row[j + 1] + f * row[i]
    # recurrence for leading principal minors of (lambda*I - H)
    polys: list[list[GQ]] = [[ONE]]
    for k in range(1, n + 1):
        # (lambda - h[k-1][k-1]) * p_{k-1}
        prev = polys[k - 1]
        cur = [ZERO] + list(prev)
        for idx, cf in enumerate(prev):
            cur[idx] = cur[idx] - h[k - 1][k - 1] * cf
        # subtract sum over lower principal blocks
        sub = ONE
        for i in range(1, k):
            sub = sub * h[k - i][k - i - 1]
            if not sub:
                break
            coeff = h[k - 1 - i][k - 1]
            if coeff:
                f = coeff * sub
                lower = polys[k - 1 - i]
                for idx, cf in enumerate(lower):
                    cur[idx] = cur[idx] - f * cf
        polys.append(cur)
    return polys[n]


def char_poly_faddeev(a: MatrixG) -> list[GQ]:
    """Faddeev-LeVerrier characteristic polynomial; O(n^4), used as oracle."""
    n = len(a)
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    m = eye(n)
    for k in range(1, n + 1):
        m = mat_mul(a, m)
        c = -(trace(m) / k)
        coeffs[n - k] = c
        for i in range(n):
            m[i][i] = m[i][i] + c
    return coeffs


# ---------------------------------------------------------------------------
# polynomials over GQ
# ---------------------------------------------------------------------------

def poly_trim(p: Poly) -> list[GQ]:
    q = list(p)
    while len(q) > 1 and not q[-1]:
        q.pop()
    return q


def poly_deg(p: Poly) -> int:
    q = poly_trim(p)
    return -1 if len(q) == 1 and not q[0] else len(q) - 1


def poly_add(p: Poly, q: Poly) -> list[GQ]:
    n = max(len(p), len(q))
    return poly_trim([
        (p[i] if i < len(p) else ZERO) + (q[i] if i < len(q) else ZERO)
        for i in range(n)
    ])


def poly_scale(p: Poly, s) -> list[GQ]:
    s = GQ.of(s)
    return poly_trim([s * c for c in p])


def poly_mul(p: Poly, q: Poly) -> list[GQ]:
    out = [ZERO] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            if b:
                out[i + j] = out[i + j] + a * b
    return poly_trim(out)


def poly_eval(p: Poly, z: GQ) -> GQ:
    acc = ZERO
    for c in reversed(list(p)):
        acc = acc * z + c
    return acc


def poly_eval_complex(p: Poly, z: complex) -> complex:
    acc = 0j
    for c in reversed(list(p)):
        acc = acc * z + complex(c)
    return acc


def poly_deriv(p: Poly) -> list[GQ]:
    if len(p) <= 1:
        return [ZERO]
    return poly_trim([GQ.of(i) * p[i] for i in range(1, len(p))])


def poly_monic(p: Poly) -> list[GQ]:
    q = poly_trim(p)
    lead = q[-1]
    if not lead or lead == 1:
        return q
    return [c / lead for c in q]


def poly_divmod(p: Poly, d: Poly) -> tuple[list[GQ], list[GQ]]:
    p = poly_trim(p)
    d = poly_trim(d)
    if poly_deg(d) < 0:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    deg_d = len(d) - 1
    lead = d[-1]
    quo = [ZERO] * max(1, len(p) - deg_d)
    while len(rem) - 1 >= deg_d and any(c for c in rem):
        rem = poly_trim(rem)
        k = len(rem) - 1 - deg_d
        if k < 0 or not rem[-1]:
            break
        f = rem[-1] / lead
        quo[k] = f
        for i in range(len(d)):
            rem[k + i] = rem[k + i] - f * d[i]
        rem.pop()
    return poly_trim(quo), poly_trim(rem)


def poly_gcd(p: Poly, q: Poly) -> list[GQ]:
    a, b = poly_trim(p), poly_trim(q)
    while poly_deg(b) >= 0:
        _, r = poly_divmod(a, b)
        a, b = b, r
    if poly_deg(a) < 0:
        return [ZERO]
    return poly_monic(a)


def yun_squarefree(p: Poly) -> list[tuple[list[GQ], int]]:
    """Squarefree decomposition p = prod f_k^k (Yun); p monic, deg >= 1."""
    p = poly_monic(p)
    dp = poly_deriv(p)
    g = poly_gcd(p, dp)
    if poly_deg(g) == 0:
        return [(p, 1)]
    c, _ = poly_divmod(p, g)
    w, _ = poly_divmod(dp, g)
    d = poly_add(w, poly_scale(poly_deriv(c), -1))
    out: list[tuple[list[GQ], int]] = []
    i = 1
    while poly_deg(c) > 0:
        a = poly_gcd(c, d)
        if poly_deg(a) > 0:
            out.append((a, i))
        c, _ = poly_divmod(c, a)
        tmp, _ = poly_divmod(d, a)
        d = poly_add(tmp, poly_scale(poly_deriv(c), -1))
        i += 1
    return out


def deflate_root(p: Poly, r: GQ) -> list[GQ]:
    """Exact synthetic division of p by (lambda - r); remainder must vanish."""
    p = poly_trim(p)
    out = [ZERO] * (len(p) - 1)
    acc = ZERO
    for i in range(len(p) - 1, 0, -1):
        acc = p[i] + acc * r
        out[i - 1] = acc
    if p[0] + acc * r:
        raise ValueError("deflation by a non-root")
    return poly_trim(out)


def cauchy_root_bound(p: Poly) -> float:
    q = poly_monic(p)
    if len(q) <= 1:
        return 0.0
    lead = 1.0
    mx = max((abs(complex(c)) for c in q[:-1]), default=0.0)
    return 1.0 + mx / lead


# ---------------------------------------------------------------------------
# rational reconstruction of floats
# ---------------------------------------------------------------------------

def reconstruct_fraction(x: float, max_den: int = 10**8) -> Optional[Fraction]:
    f = Fraction(x).limit_denominator(max_den)
    if abs(float(f) - x) <= 1e-9 * max(1.0, abs(x)) + 1e-12:
        return f
    return None


def reconstruct_gq(z: complex, max_den: int = 10**8) -> Optional[GQ]:
    re = reconstruct_fraction(z.real, max_den)
    im = reconstruct_fraction(z.imag, max_den)
    if re is None or im is None:
        return None
    return GQ(re, im)


# ---------------------------------------------------------------------------
# certified polynomial roots
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RootEntry:
    """One root of an exact polynomial.

    ``exact`` is set when the value was reconstructed as a Gaussian rational
    and verified by exact evaluation (then the radius is zero); otherwise the
    open disk of ``radius`` around ``value`` is certified, via the Weierstrass
    correction bound, to contain ``multiplicity`` true roots.
    """

    value: complex
    multiplicity: int
    radius: float
    exact: Optional[GQ] = None


def _weierstrass_refine(coeffs: np.ndarray, z: np.ndarray, maxit: int = 60):
    """Durand-Kerner sweeps; returns approximations and correction radii."""
    d = len(z)
    if d == 0:
        return z, np.zeros(0)
    for _ in range(maxit):
        w = np.empty(d, dtype=complex)
        for i in range(d):
            diff = z[i] - np.delete(z, i)
            small = np.abs(diff) < 1e-300
            if small.any():
                z[i] += (1e-8 + 1e-8j) * (1 + abs(z[i]))
                diff = z[i] - np.delete(z, i)
            w[i] = np.polyval(coeffs[::-1], z[i]) / np.prod(diff)
        z = z - w
        if np.max(np.abs(w)) < 1e-15 * (1 + np.max(np.abs(z))):
            break
    # recompute corrections at the final iterate for the certificate
    w = np.empty(d, dtype=complex)
    for i in range(d):
        diff = z[i] - np.delete(z, i)
        prod = np.prod(diff) if d > 1 else 1.0
        if prod == 0:
            w[i] = np.inf
        else:
            w[i] = np.polyval(coeffs[::-1], z[i]) / prod
    radii = d * np.abs(w) * (1 + 1e-9) + 1e-250
    return z, radii


def _cluster_disks(z: np.ndarray, radii: np.ndarray) -> list[list[int]]:
    n = len(z)
    parent = list(range(n))

    def find(i):
        while parent[i] != i:
            parent[i] = parent[parent[i]]
            i = parent[i]
        return i

    for i in range(n):
        for j in range(i + 1, n):
            if abs(z[i] - z[j]) <= radii[i] + radii[j]:
                parent[find(i)] = find(j)
    groups: dict[int, list[int]] = {}
    for i in range(n):
        groups.setdefault(find(i), []).append(i)
    return list(groups.values())


def certified_roots(p: Poly, max_exact_den: int = 10**8) -> list[RootEntry]:
    """All roots of the exact polynomial p with multiplicities.

    Exact Gaussian-rational roots are verified by exact evaluation and
    deflated; the rest are located by a simultaneous-iteration solver whose
    Weierstrass disks certify the reported error radii (each connected
    component of disks contains exactly as many roots as disks).
    """
    p = poly_monic(p)
    if poly_deg(p) <= 0:
        return []
    out: list[RootEntry] = []
    # exact zero roots: trailing coefficients
    nzero = next(i for i, c in enumerate(p) if c)
    if nzero:
        out.append(RootEntry(0j, nzero, 0.0, ZERO))
        p = poly_trim(p[nzero:])
    if poly_deg(p) <= 0:
        return out
    for factor, mult in yun_squarefree(p):
        entries = _roots_squarefree(factor, max_exact_den)
        for e in entries:
            out.append(RootEntry(e.value, e.multiplicity * mult, e.radius, e.exact))
    # merge identical exact values
    merged: dict[GQ, RootEntry] = {}
    rest: list[RootEntry] = []
    for e in out:
        if e.exact is not None:
            if e.exact in merged:
                prev = merged[e.exact]
                merged[e.exact] = RootEntry(e.value, prev.multiplicity + e.multiplicity, 0.0, e.exact)
            else:
                merged[e.exact] = e
        else:
            rest.append(e)
    result = list(merged.values()) + rest
    result.sort(key=lambda e: (e.value.real, e.value.imag))
    return result


def _roots_squarefree(f: Poly, max_exact_den: int) -> list[RootEntry]:
    f = poly_monic(f)
    out: list[RootEntry] = []
    deg = poly_deg(f)
    if deg <= 0:
        return out
    # linear factor is exact outright
    if deg == 1:
        out.append(RootEntry(complex(-f[0]), 1, 0.0, -f[0]))
        return out
    coeffs = np.array([complex(c) for c in f])
    approx = np.roots(coeffs[::-1])
    # try exact reconstruction, deflating verified roots
    g = f
    remaining: list[complex] = []
    for z in approx:
        cand = reconstruct_gq(complex(z), max_exact_den)
        if cand is not None and poly_deg(g) > 0 and not poly_eval(g, cand):
            g = deflate_root(g, cand)
            out.append(RootEntry(complex(cand), 1, 0.0, cand))
        else:
            remaining.append(complex(z))
    dg = poly_deg(g)
    if dg <= 0:
        return out
    gco = np.array([complex(c) for c in poly_monic(g)])
    if len(remaining) != dg:
        start = np.roots(gco[::-1])
    else:
        start = np.array(remaining, dtype=complex)
    z, radii = _weierstrass_refine(gco, np.array(start, dtype=complex))
    for group in _cluster_disks(z, radii):
        pts = z[list(group)]
        center = complex(np.mean(pts))
        rad = max(abs(pts[i] - center) + radii[g_] for i, g_ in enumerate(group))
        out.append(RootEntry(center, len(group), float(rad), None))
    return out


# ---------------------------------------------------------------------------
# signature of an exact real symmetric matrix
# ---------------------------------------------------------------------------

def symmetric_signature(a: MatrixG) -> tuple[int, int, int]:
    """(positive, negative, zero) inertia via exact congruence reduction."""
    n = len(a)
    m = [[x.real_fraction() for x in row] for row in mat(a)]
    pos = neg = zero = 0
    idx = list(range(n))

    def swap(i, j):
        m[i], m[j] = m[j], m[i]
        for row in m:
            row[i], row[j] = row[j], row[i]

    k = 0
    while k < n:
        if not m[k][k]:
            p = next((i for i in range(k + 1, n) if m[i][i]), None)
            if p is not None:
                swap(k, p)
            else:
                q = next(
                    ((i, j) for i in range(k, n) for j in range(i + 1, n) if m[i][j]),
                    None,
                )
                if q is None:
                    zero += n - k
                    break
                i, j = q
                # a_ii = a_jj = 0, a_ij != 0: add row/col j into i
                for c in range(n):
                    m[i][c] += m[j][c]
                for r in range(n):
                    m[r][i] += m[r][j]
                if i != k:
                    swap(k, i)
        piv = m[k][k]
        if piv > 0:
            pos += 1
        else:
            neg += 1
        for i in range(k + 1, n):
            if m[i][k]:
                f = m[i][k] / piv
                for c in range(n):
                    m[i][c] -= f * m[k][c]
                for r in range(n):
                    m[r][i] -= f * m[r][k]
        k += 1
    return pos, neg, zero


# ---------------------------------------------------------------------------
# integer diagonalization (Smith-style elimination, no divisibility chain)
# ---------------------------------------------------------------------------

def integer_diagonal_form(a: Sequence[Sequence[int]]):
    """L @ A @ R = D with L, R unimodular and D diagonal.

    Returns (D, L, R, rank).  Entries must be Python ints.  The divisibility
    normalization of the full Smith form is not performed; ranks and kernels
    are all the callers need.
    """
    m = [list(map(int, row)) for row in a]
    rows = len(m)
    cols = len(m[0]) if rows else 0
    L = [[int(i == j) for j in range(rows)] for i in range(rows)]
    R = [[int(i == j) for j in range(cols)] for i in range(cols)]

    def row_op(i, j, q):  # row_i -= q*row_j
        m[i] = [x - q * y for x, y in zip(m[i], m[j])]
        L[i] = [x - q * y for x, y in zip(L[i], L[j])]

    def col_op(i, j, q):  # col_i -= q*col_j
        for r in range(rows):
            m[r][i] -= q * m[r][j]
        for r in range(cols):
            R[r][i] -= q * R[r][j]

    def swap_rows(i, j):
        m[i], m[j] = m[j], m[i]
        L[i], L[j] = L[j], L[i]

    def swap_cols(i, j):
        for r in range(rows):
            m[r][i], m[r][j] = m[r][j], m[r][i]
        for r in range(cols):
            R[r][i], R[r][j] = R[r][j], R[r][i]

    s = 0
    while s < min(rows, cols):
        # locate a pivot of minimal absolute value in the trailing block
        best = None
        for i in range(s, rows):
            for j in range(s, cols):
                if m[i][j] and (best is None or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        if best != (s, s):
            if best[0] != s:
                swap_rows(s, best[0])
            if best[1] != s:
                swap_cols(s, best[1])
        # clear the edging; pivoting keeps values shrinking so this terminates
        dirty = True
        while dirty:
            dirty = False
            for i in range(s + 1, rows):
                if m[i][s]:
                    q = m[i][s] // m[s][s]
                    row_op(i, s, q)
                    if m[i][s]:
                        swap_rows(s, i)
                        dirty = True
            for j in range(s + 1, cols):
                if m[s][j]:
                    q = m[s][j] // m[s][s]
                    col_op(j, s, q)
                    if m[s][j]:
                        swap_cols(s, j)
                        dirty = True
        if m[s][s] < 0:
            m[s] = [-x for x in m[s]]
            L[s] = [-x for x in L[s]]
        s += 1
    return m, L, R, s


def integer_left_kernel(a: Sequence[Sequence[int]]) -> list[list[int]]:
    """Z-basis of {c : c @ A = 0} for an integer matrix A."""
    _, l, _, rk = integer_diagonal_form(a)
    return [l[i] for i in range(rk, len(l))]


# ---------------------------------------------------------------------------
# float conversion
# ---------------------------------------------------------------------------

def to_complex_array(a: MatrixG) -> np.ndarray:
    return np.array([[complex(x) for x in row] for row in a], dtype=complex)


def to_real_array(a: MatrixG) -> np.ndarray:
    return np.array(
        [[float(x.real_fraction()) for x in row] for row in a], dtype=float
    )

