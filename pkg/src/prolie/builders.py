"""Constructors for the standard test algebras and algebra combinations."""

from __future__ import annotations

import random
from fractions import Fraction
from typing import Mapping, Optional, Sequence

from . import linalg as la
from .algebra import LieAlgebra, Morphism, ShapeError
from .scalars import GQ, ONE, ZERO


def abelian(n: int, prefix: str = "a") -> LieAlgebra:
    return LieAlgebra([f"{prefix}{i}" for i in range(n)], {})


def heisenberg() -> LieAlgebra:
    """[P, Q] = Z, Z central (strictly upper triangular 3x3 model)."""
    return LieAlgebra(["P", "Q", "Z"], {(0, 1): {2: ONE}})


def motion_plane() -> LieAlgebra:
    """Euclidean plane motions: [U,P] = Q, [U,Q] = -P, [P,Q] = 0."""
    return LieAlgebra(
        ["U", "P", "Q"],
        {(0, 1): {2: ONE}, (0, 2): {1: -ONE}},
    )


def oscillator() -> LieAlgebra:
    """Central extension of the plane motions: [P,Q] = Z with Z central."""
    return LieAlgebra(
        ["U", "P", "Q", "Z"],
        {(0, 1): {2: ONE}, (0, 2): {1: -ONE}, (1, 2): {3: ONE}},
    )


def affine_line() -> LieAlgebra:
    """Two-dimensional nonabelian algebra [e1, e2] = e2."""
    return LieAlgebra(["e1", "e2"], {(0, 1): {1: ONE}})


def sl2_rotation() -> LieAlgebra:
    """sl2(R) in a rotation-adapted basis P, Q, U.

    The relations are [U,P] = Q, [U,Q] = -P, [P,Q] = -U, realized by
    P = [[0,1],[1,0]]/2, Q = [[1,0],[0,-1]]/2, U = [[0,1],[-1,0]]/2.
    """
    return LieAlgebra(
        ["P", "Q", "U"],
        {(2, 0): {1: ONE}, (2, 1): {0: -ONE}, (0, 1): {2: -ONE}},
    )


def sl2_standard() -> LieAlgebra:
    """sl2 in the H, E, F basis: [H,E]=2E, [H,F]=-2F, [E,F]=H."""
    return LieAlgebra(
        ["H", "E", "F"],
        {(0, 1): {1: GQ(2)}, (0, 2): {2: GQ(-2)}, (1, 2): {0: ONE}},
    )


def so3() -> LieAlgebra:
    """Rotations of R^3: cyclic relations [e1,e2]=e3 etc."""
    return LieAlgebra(
        ["x", "y", "z"],
        {(0, 1): {2: ONE}, (1, 2): {0: ONE}, (2, 0): {1: ONE}},
    )


def filiform(n: int) -> LieAlgebra:
    """Filiform nilpotent algebra of dim n: [e1, e_k] = e_{k+1}."""
    if n < 2:
        raise ValueError("need dim >= 2")
    table = {(0, k): {k + 1: ONE} for k in range(1, n - 1)}
    return LieAlgebra([f"e{i + 1}" for i in range(n)], table)


def direct_sum(a: LieAlgebra, b: LieAlgebra, sep: str = ".") -> LieAlgebra:
    labels = [f"L{sep}{l}" for l in a.labels] + [f"R{sep}{l}" for l in b.labels]
    table: dict[tuple[int, int], dict[int, GQ]] = {}
    for (i, j), row in a.table.items():
        table[(i, j)] = dict(row)
    off = a.dim
    for (i, j), row in b.table.items():
        table[(i + off, j + off)] = {k + off: c for k, c in row.items()}
    return LieAlgebra(labels, table, ideal_prefixes=[a.dim, a.dim + b.dim])


def semidirect_product(
    acting: LieAlgebra,
    module: LieAlgebra,
    rep: Mapping[str, Sequence[Sequence]],
    *,
    check: bool = True,
) -> LieAlgebra:
    """Semidirect sum ``module ⋊ acting``.

    ``rep`` maps each acting basis label to the matrix (module.dim square)
    of its action on the module.  The action must be by derivations and a
    homomorphism on the acting algebra; both are verified exactly unless
    ``check`` is disabled.  Module coordinates come first in the result, so
    the module is an ideal spanned by a prefix of the basis.
    """
    mats = {}
    for lbl in acting.labels:
        if lbl not in rep:
            raise ShapeError(f"missing action matrix for {lbl}")
        m = la.mat(rep[lbl])
        if len(m) != module.dim or any(len(r) != module.dim for r in m):
            raise ShapeError(f"action matrix for {lbl} has wrong shape")
        mats[lbl] = m
    if check:
        _check_representation(acting, module, mats)
    md = module.dim
    labels = list(module.labels) + [
        l if l not in module.labels else f"act_{l}" for l in acting.labels
    ]
    table: dict[tuple[int, int], dict[int, GQ]] = {}
    for (i, j), row in module.table.items():
        table[(i, j)] = dict(row)
    for (i, j), row in acting.table.items():
        table[(i + md, j + md)] = {k + md: c for k, c in row.items()}
    for ai, albl in enumerate(acting.labels):
        m = mats[albl]
        for mj in range(md):
            col = {k: m[k][mj] for k in range(md) if m[k][mj]}
            if col:
                table[(ai + md, mj)] = col
    return LieAlgebra(labels, table, ideal_prefixes=[md, md + acting.dim])


def _check_representation(acting, module, mats):
    mlist = [mats[l] for l in acting.labels]
    # homomorphism: rho([a,b]) = [rho(a), rho(b)]
    for i in range(acting.dim):
        for j in range(i + 1, acting.dim):
            comm = la.mat_sub(la.mat_mul(mlist[i], mlist[j]), la.mat_mul(mlist[j], mlist[i]))
            img = la.zeros(module.dim, module.dim)
            row = acting.table.get((i, j), {})
            for k, c in row.items():
                img = la.mat_add(img, la.mat_scale(mlist[k], c))
            if not la.mat_eq(comm, img):
                raise ShapeError("action is not a Lie algebra homomorphism")
    # derivation property on the module bracket
    for idx, m in enumerate(mlist):
        for (i, j), row in module.table.items():
            ei = module.basis_element(i).coeffs
            ej = module.basis_element(j).coeffs
            lhs = [ZERO] * module.dim
            for k, c in row.items():
                col = [m[r][k] * c for r in range(module.dim)]
                lhs = [a + b for a, b in zip(lhs, col)]
            mi = la.mat_vec(m, ei)
            mj = la.mat_vec(m, ej)
            rhs = [
                a + b
                for a, b in zip(
                    module.bracket_coords(tuple(mi), ej),
                    module.bracket_coords(ei, tuple(mj)),
                )
            ]
            if lhs != rhs:
                raise ShapeError(
                    f"action of {acting.labels[idx]} is not a derivation"
                )


def sl2_acting_on_plane() -> LieAlgebra:
    """sl2(R) acting canonically on R^2 (translations form the radical)."""
    rep = {
        "H": [[1, 0], [0, -1]],
        "E": [[0, 1], [0, 0]],
        "F": [[0, 0], [1, 0]],
    }
    return semidirect_product(sl2_standard(), abelian(2, prefix="t"), rep)


# ---------------------------------------------------------------------------
# realification of complex algebras
# ---------------------------------------------------------------------------

def realify(alg: LieAlgebra) -> LieAlgebra:
    """Real form of doubled dimension of a complex algebra over Q(i).

    Basis order: (z_0, ..., z_{n-1}, i*z_0, ..., i*z_{n-1}).
    """
    n = alg.dim
    labels = list(alg.labels) + [f"{l}_i" for l in alg.labels]
    table: dict[tuple[int, int], dict[int, GQ]] = {}

    def put(i, j, row):
        if i == j:
            return
        dst = table.setdefault((i, j) if i < j else (j, i), {})
        sign = 1 if i < j else -1
        for k, c in row.items():
            c = c if sign == 1 else -c
            v = dst.get(k, ZERO) + c
            if v:
                dst[k] = v
            elif k in dst:
                del dst[k]

    for (i, j), row in alg.table.items():
        re_row = {}
        im_row = {}
        for k, c in row.items():
            if c.re:
                re_row[k] = GQ(c.re)
            if c.im:
                im_row[k] = GQ(c.im)
        # [z_i, z_j] = sum (a + bi) z_k = sum a z_k + b (i z_k)
        put(i, j, {**{k: c for k, c in re_row.items()},
                   **{k + n: c for k, c in im_row.items()}})
        # [z_i, i z_j] = i [z_i, z_j] = sum (-b) z_k + a (i z_k)
        mixed = {k: -c for k, c in im_row.items()}
        mixed.update({k + n: c for k, c in re_row.items()})
        put(i, j + n, mixed)
        put(i + n, j, dict(mixed))
        # [i z_i, i z_j] = -[z_i, z_j]
        put(i + n, j + n, {**{k: -c for k, c in re_row.items()},
                           **{k + n: -c for k, c in im_row.items()}})
    return LieAlgebra(labels, table)


def real_matrix_of_complex(m: Sequence[Sequence[GQ]]) -> list[list[GQ]]:
    """Real 2d x 2d matrix of a complex-linear map on C^d.

    Coordinates are ordered (Re v_0, Im v_0, Re v_1, Im v_1, ...).
    """
    d = len(m)
    out = la.zeros(2 * d, 2 * d)
    for i in range(d):
        for j in range(d):
            c = m[i][j]
            out[2 * i][2 * j] = GQ(c.re)
            out[2 * i][2 * j + 1] = GQ(-c.im)
            out[2 * i + 1][2 * j] = GQ(c.im)
            out[2 * i + 1][2 * j + 1] = GQ(c.re)
    return out


# ---------------------------------------------------------------------------
# seeded random generators used by the property suites
# ---------------------------------------------------------------------------

def random_element(alg: LieAlgebra, rng: random.Random, span: int = 3):
    coeffs = [
        GQ(Fraction(rng.randint(-span, span), rng.randint(1, 2)))
        for _ in range(alg.dim)
    ]
    return alg.element(coeffs)


def random_solvable(rng: random.Random, max_dim: int = 6) -> LieAlgebra:
    """A random solvable algebra with exact rational constants.

    Draws from abelian-by-derivation semidirect products, Borel-type upper
    triangular families, nilpotent algebras and small direct sums; all are
    solvable by construction.
    """
    kind = rng.randrange(5)
    if kind == 0:
        k = rng.randint(1, max_dim - 1)
        d = [[GQ(rng.randint(-2, 2)) for _ in range(k)] for _ in range(k)]
        act = LieAlgebra(["d0"], {})
        return semidirect_product(act, abelian(k), {"d0": d}, check=False)
    if kind == 1:
        return _borel_t3(rng)
    if kind == 2:
        n = rng.randint(2, min(5, max_dim))
        return filiform(max(2, n))
    if kind == 3:
        return heisenberg() if rng.random() < 0.5 else motion_plane()
    a = affine_line()
    k = rng.randint(1, max_dim - 2)
    b = abelian(k)
    return direct_sum(a, b)


def _borel_t3(rng: random.Random) -> LieAlgebra:
    # span{D1, D2, E12, E23, E13} inside upper triangular 3x3
    # D1 = E11 - E22, D2 = E22 - E33
    labels = ["d1", "d2", "x", "y", "z"]  # x=E12, y=E23, z=E13
    table = {
        (0, 2): {2: GQ(2)},   # [d1, x] = 2x
        (0, 3): {3: GQ(-1)},  # [d1, y] = -y
        (0, 4): {4: GQ(1)},   # [d1, z] = z
        (1, 2): {2: GQ(-1)},
        (1, 3): {3: GQ(2)},
        (1, 4): {4: GQ(1)},
        (2, 3): {4: GQ(1)},   # [x, y] = z
    }
    alg = LieAlgebra(labels, table)
    if rng.random() < 0.5:
        return alg
    # scramble by a random rational change of basis
    return change_basis(alg, _random_invertible(rng, alg.dim))


def _random_invertible(rng: random.Random, n: int) -> list[list[GQ]]:
    while True:
        m = [[GQ(rng.randint(-2, 2)) for _ in range(n)] for _ in range(n)]
        if la.inverse(m) is not None:
            return m


def change_basis(alg: LieAlgebra, p: Sequence[Sequence[GQ]]) -> LieAlgebra:
    """Same algebra in the basis f_j = sum_i p[i][j] e_i."""
    inv = la.inverse(p)
    if inv is None:
        raise ValueError("basis change matrix is singular")
    n = alg.dim
    cols = [tuple(p[i][j] for i in range(n)) for j in range(n)]
    table: dict[tuple[int, int], dict[int, GQ]] = {}
    for i in range(n):
        for j in range(i + 1, n):
            br = alg.bracket_coords(cols[i], cols[j])
            coords = la.mat_vec(inv, br)
            row = {k: c for k, c in enumerate(coords) if c}
            if row:
                table[(i, j)] = row
    return LieAlgebra([f"f{i}" for i in range(n)], table)
