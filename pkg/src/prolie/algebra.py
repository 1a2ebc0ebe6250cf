"""Finite-dimensional Lie algebras over the Gaussian rationals.

An algebra is stored sparsely: a table mapping basis pairs (i, j) with i < j
to the coordinates of [e_i, e_j].  Antisymmetry is built into the
representation; the Jacobi identity is checked by :meth:`LieAlgebra.validate`.
All values are immutable after construction and every operation is a pure
function, so instances can be shared freely across threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Mapping, Optional, Sequence, Union

from . import linalg as la
from .scalars import GQ, ONE, ZERO

Coeffs = tuple[GQ, ...]


class ShapeError(ValueError):
    """Structure-constant array does not match the declared basis."""


@dataclass(frozen=True)
class Violation:
    kind: str            # "antisymmetry" | "jacobi" | "self-bracket"
    indices: tuple[int, ...]
    labels: tuple[str, ...]
    defect: tuple[str, ...]  # offending vector, printed exactly


@dataclass(frozen=True)
class ValidationReport:
    valid: bool
    dim: int
    violations: tuple[Violation, ...]

    def to_dict(self) -> dict:
        return {
            "valid": self.valid,
            "dim": self.dim,
            "violations": [
                {"kind": v.kind, "labels": list(v.labels), "defect": list(v.defect)}
                for v in self.violations
            ],
        }


class LieAlgebra:
    """Lie algebra with exact structure constants.

    Parameters
    ----------
    labels:
        basis labels, one per dimension.
    table:
        mapping (i, j) -> {k: coefficient} meaning [e_i, e_j] = sum c_k e_k.
        Either orientation of (i, j) may be supplied; it is normalized to
        i < j with the sign flipped.
    degrees / truncation:
        optional grading metadata used by truncated series algebras: the
        bracket adds degrees, and components beyond ``truncation`` are cut.
    ideal_prefixes:
        optional increasing list of dimensions d such that the span of the
        first d basis vectors is an ideal; lets spectral code work blockwise.
    """

    __slots__ = (
        "labels",
        "dim",
        "table",
        "degrees",
        "truncation",
        "ideal_prefixes",
        "_raw_dense",
        "_index",
        "_cache",
    )

    def __init__(
        self,
        labels: Sequence[str],
        table: Mapping[tuple[int, int], Mapping[int, GQ]],
        *,
        degrees: Optional[Sequence[int]] = None,
        truncation: Optional[int] = None,
        ideal_prefixes: Optional[Sequence[int]] = None,
        _raw_dense=None,
    ):
        self.labels = tuple(labels)
        self.dim = len(self.labels)
        if len(set(self.labels)) != self.dim:
            raise ShapeError("duplicate basis labels")
        norm: dict[tuple[int, int], dict[int, GQ]] = {}
        for (i, j), row in table.items():
            if not (0 <= i < self.dim and 0 <= j < self.dim):
                raise ShapeError(f"bracket index ({i},{j}) out of range")
            if i == j:
                if any(GQ.of(c) for c in row.values()):
                    raise ShapeError(f"nonzero self bracket [{self.labels[i]},{self.labels[i]}]")
                continue
            sign = 1
            if i > j:
                i, j, sign = j, i, -1
            dst = norm.setdefault((i, j), {})
            for k, c in row.items():
                if not (0 <= k < self.dim):
                    raise ShapeError(f"bracket target index {k} out of range")
                c = GQ.of(c) if sign == 1 else -GQ.of(c)
                c = dst.get(k, ZERO) + c
                if c:
                    dst[k] = c
                elif k in dst:
                    del dst[k]
        self.table = {ij: row for ij, row in norm.items() if row}
        self.degrees = tuple(degrees) if degrees is not None else None
        self.truncation = truncation
        self.ideal_prefixes = tuple(ideal_prefixes) if ideal_prefixes else None
        self._raw_dense = _raw_dense
        self._index = {lbl: i for i, lbl in enumerate(self.labels)}
        # memo for derived analyses; the instance itself stays immutable
        self._cache = {}

    # -- construction -----------------------------------------------------
    @classmethod
    def from_dense(cls, labels: Sequence[str], constants) -> "LieAlgebra":
        """Build from a dense c[i][j][k] array; shape is checked here."""
        n = len(labels)
        if len(constants) != n or any(
            len(ci) != n or any(len(cij) != n for cij in ci) for ci in constants
        ):
            raise ShapeError("structure-constant array is not dim^3")
        dense = [
            [[GQ.of(constants[i][j][k]) for k in range(n)] for j in range(n)]
            for i in range(n)
        ]
        table: dict[tuple[int, int], dict[int, GQ]] = {}
        for i in range(n):
            for j in range(i + 1, n):
                row = {k: dense[i][j][k] for k in range(n) if dense[i][j][k]}
                if row:
                    table[(i, j)] = row
        return cls(labels, table, _raw_dense=dense)

    def dense_structure_constants(self) -> list[list[list[GQ]]]:
        n = self.dim
        out = [[[ZERO] * n for _ in range(n)] for _ in range(n)]
        for (i, j), row in self.table.items():
            for k, c in row.items():
                out[i][j][k] = c
                out[j][i][k] = -c
        return out

    # -- elements -----------------------------------------------------------
    def element(self, coeffs: Iterable) -> "Element":
        cs = tuple(GQ.of(c) for c in coeffs)
        if len(cs) != self.dim:
            raise ShapeError(f"element length {len(cs)} != dim {self.dim}")
        return Element(self, cs)

    def zero(self) -> "Element":
        return Element(self, (ZERO,) * self.dim)

    def basis_element(self, key: Union[int, str]) -> "Element":
        i = self._index[key] if isinstance(key, str) else key
        return Element(self, tuple(ONE if k == i else ZERO for k in range(self.dim)))

    def basis(self) -> list["Element"]:
        return [self.basis_element(i) for i in range(self.dim)]

    def index_of(self, label: str) -> int:
        return self._index[label]

    # -- bracket ------------------------------------------------------------
    def bracket_coords(self, x: Coeffs, y: Coeffs) -> Coeffs:
        acc: dict[int, GQ] = {}
        for (i, j), row in self.table.items():
            xi, yj, xj, yi = x[i], y[j], x[j], y[i]
            left = xi * yj if (xi and yj) else None
            right = xj * yi if (xj and yi) else None
            if left is None and right is None:
                continue
            f = left - right if (left is not None and right is not None) else (
                left if right is None else -right
            )
            if f:
                for k, c in row.items():
                    v = acc.get(k, ZERO) + f * c
                    if v:
                        acc[k] = v
                    elif k in acc:
                        del acc[k]
        return tuple(acc.get(k, ZERO) for k in range(self.dim))

    def ad_matrix(self, x: "Element") -> list[list[GQ]]:
        """Exact matrix of y -> [x, y] in the fixed basis."""
        n = self.dim
        m = la.zeros(n, n)
        for (i, j), row in self.table.items():
            xi, xj = x.coeffs[i], x.coeffs[j]
            if xi:
                for k, c in row.items():
                    m[k][j] = m[k][j] + xi * c
            if xj:
                for k, c in row.items():
                    m[k][i] = m[k][i] - xj * c
        return m

    # -- validation ---------------------------------------------------------
    def validate(self) -> ValidationReport:
        """Check antisymmetry (on raw dense input) and the Jacobi identity."""
        violations: list[Violation] = []
        if self._raw_dense is not None:
            n = self.dim
            for i in range(n):
                for j in range(i, n):
                    for k in range(n):
                        a = self._raw_dense[i][j][k]
                        b = self._raw_dense[j][i][k]
                        if a != -b:
                            violations.append(
                                Violation(
                                    "self-bracket" if i == j else "antisymmetry",
                                    (i, j, k),
                                    (self.labels[i], self.labels[j], self.labels[k]),
                                    (str(a), str(b)),
                                )
                            )
        # triples with a repeated index hold automatically in the
        # antisymmetric representation, as do triples touching a basis
        # vector that appears in no bracket; skip both.
        touched = sorted({t for ij in self.table.keys() for t in ij})
        coords = {t: self.basis_element(t).coeffs for t in touched}
        for ia, a in enumerate(touched):
            for ib in range(ia + 1, len(touched)):
                b = touched[ib]
                ab = self.bracket_coords(coords[a], coords[b])
                for c in touched[ib + 1:]:
                    term1 = self.bracket_coords(ab, coords[c])
                    term2 = self.bracket_coords(
                        self.bracket_coords(coords[b], coords[c]), coords[a]
                    )
                    term3 = self.bracket_coords(
                        self.bracket_coords(coords[c], coords[a]), coords[b]
                    )
                    defect = tuple(
                        t1 + t2 + t3 for t1, t2, t3 in zip(term1, term2, term3)
                    )
                    if any(defect):
                        violations.append(
                            Violation(
                                "jacobi",
                                (a, b, c),
                                (self.labels[a], self.labels[b], self.labels[c]),
                                tuple(str(v) for v in defect),
                            )
                        )
        return ValidationReport(not violations, self.dim, tuple(violations))

    # -- derived constructions ------------------------------------------------
    def subalgebra(self, sub: "Subspace") -> tuple["LieAlgebra", "Morphism"]:
        """Restrict the bracket to a subspace closed under it.

        Returns the abstract algebra on the subspace basis together with the
        embedding morphism.
        """
        rows = sub.rows
        m = len(rows)
        table: dict[tuple[int, int], dict[int, GQ]] = {}
        for i in range(m):
            for j in range(i + 1, m):
                br = self.bracket_coords(rows[i], rows[j])
                if not any(br):
                    continue
                coords = sub.coordinates_of(br)
                if coords is None:
                    raise ValueError("subspace is not closed under the bracket")
                row = {k: c for k, c in enumerate(coords) if c}
                if row:
                    table[(i, j)] = row
        labels = [f"s{i}" for i in range(m)]
        alg = LieAlgebra(labels, table)
        emb = Morphism(alg, self, [list(col) for col in zip(*rows)])
        return alg, emb

    def quotient(self, ideal: "Subspace") -> tuple["LieAlgebra", "Morphism"]:
        """Quotient by an ideal; returns the algebra and the projection."""
        red, pivots = (list(ideal.rows), list(ideal.pivots))
        free = [c for c in range(self.dim) if c not in pivots]
        # x mod ideal: each rref row makes e_pivot congruent to minus its
        # free-coordinate tail, so pivot coordinates fold into the free ones
        proj = la.zeros(len(free), self.dim)
        for q, c in enumerate(free):
            proj[q][c] = ONE
            for r, piv in enumerate(pivots):
                proj[q][piv] = -red[r][c]
        table: dict[tuple[int, int], dict[int, GQ]] = {}
        lifts = [self.basis_element(c).coeffs for c in free]
        for i in range(len(free)):
            for j in range(i + 1, len(free)):
                br = self.bracket_coords(lifts[i], lifts[j])
                img = la.mat_vec(proj, br)
                row = {k: c for k, c in enumerate(img) if c}
                if row:
                    table[(i, j)] = row
        labels = [f"q_{self.labels[c]}" for c in free]
        alg = LieAlgebra(labels, table)
        return alg, Morphism(self, alg, proj)

    def __repr__(self) -> str:
        return f"LieAlgebra(dim={self.dim}, labels={list(self.labels)})"


@dataclass(frozen=True)
class Element:
    """Element of a Lie algebra as an exact coefficient vector."""

    algebra: LieAlgebra
    coeffs: Coeffs

    def __add__(self, other: "Element") -> "Element":
        _same(self, other)
        return Element(self.algebra, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "Element") -> "Element":
        _same(self, other)
        return Element(self.algebra, tuple(a - b for a, b in zip(self.coeffs, other.coeffs)))

    def __neg__(self) -> "Element":
        return Element(self.algebra, tuple(-a for a in self.coeffs))

    def scale(self, s) -> "Element":
        s = GQ.of(s)
        return Element(self.algebra, tuple(s * a for a in self.coeffs))

    __rmul__ = scale
    __mul__ = scale

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def norm_float(self) -> float:
        return math.sqrt(sum(float(c.norm2()) for c in self.coeffs))

    def min_degree(self) -> Optional[int]:
        """Smallest grading degree carrying a nonzero coefficient."""
        if self.algebra.degrees is None:
            return None
        degs = [
            self.algebra.degrees[i] for i, c in enumerate(self.coeffs) if c
        ]
        return min(degs) if degs else None

    def __str__(self) -> str:
        terms = []
        for c, lbl in zip(self.coeffs, self.algebra.labels):
            if c:
                terms.append(f"({c})*{lbl}")
        return " + ".join(terms) if terms else "0"


def _same(x: Element, y: Element) -> None:
    if x.algebra is not y.algebra:
        raise ValueError("elements belong to different algebras")


def bracket(x: Element, y: Element) -> Element:
    _same(x, y)
    return Element(x.algebra, x.algebra.bracket_coords(x.coeffs, y.coeffs))


class Subspace:
    """Subspace in reduced row echelon form (canonical, hashable)."""

    __slots__ = ("algebra", "rows", "pivots")

    def __init__(self, algebra: LieAlgebra, rows: Sequence[Sequence[GQ]]):
        red, pivots = la.rref(rows) if rows else ([], [])
        self.algebra = algebra
        self.rows = tuple(tuple(r) for r in red)
        self.pivots = tuple(pivots)

    @classmethod
    def span(cls, algebra: LieAlgebra, vectors: Iterable) -> "Subspace":
        rows = []
        for v in vectors:
            rows.append(list(v.coeffs) if isinstance(v, Element) else [GQ.of(c) for c in v])
        return cls(algebra, rows)

    @classmethod
    def full(cls, algebra: LieAlgebra) -> "Subspace":
        return cls(algebra, la.eye(algebra.dim))

    @classmethod
    def zero(cls, algebra: LieAlgebra) -> "Subspace":
        return cls(algebra, [])

    @property
    def dim(self) -> int:
        return len(self.rows)

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, Subspace)
            and self.algebra is other.algebra
            and self.rows == other.rows
        )

    def __hash__(self) -> int:
        return hash((id(self.algebra), self.rows))

    def coordinates_of(self, coords: Coeffs) -> Optional[list[GQ]]:
        """Coordinates of a vector in the subspace basis, or None."""
        out = [ZERO] * self.dim
        v = list(coords)
        for r, piv in enumerate(self.pivots):
            f = v[piv]
            if f:
                out[r] = f
                v = [a - f * b for a, b in zip(v, self.rows[r])]
        if any(v):
            return None
        return out

    def contains(self, x: Union[Element, Coeffs]) -> bool:
        coords = x.coeffs if isinstance(x, Element) else tuple(x)
        return self.coordinates_of(coords) is not None

    def contains_subspace(self, other: "Subspace") -> bool:
        return all(self.coordinates_of(r) is not None for r in other.rows)

    def vectors(self) -> list[Element]:
        return [self.algebra.element(r) for r in self.rows]

    def sum_with(self, other: "Subspace") -> "Subspace":
        return Subspace(self.algebra, list(self.rows) + list(other.rows))

    def intersect(self, other: "Subspace") -> "Subspace":
        # kernel of [A^T | B^T] gives coefficients of equal combinations
        if self.dim == 0 or other.dim == 0:
            return Subspace.zero(self.algebra)
        a = [list(r) for r in self.rows]
        b = [list(r) for r in other.rows]
        stacked = [list(col_a) + [(-x) for x in col_b] for col_a, col_b in zip(zip(*a), zip(*b))]
        out = []
        for v in la.kernel(stacked):
            comb = [ZERO] * self.algebra.dim
            for i, c in enumerate(v[: self.dim]):
                if c:
                    comb = [acc + c * x for acc, x in zip(comb, a[i])]
            out.append(comb)
        return Subspace(self.algebra, out)

    def bracket_with(self, other: "Subspace") -> "Subspace":
        alg = self.algebra
        rows = []
        for r in self.rows:
            for s in other.rows:
                br = alg.bracket_coords(r, s)
                if any(br):
                    rows.append(br)
        return Subspace(alg, rows)

    def is_subalgebra(self) -> bool:
        return self.contains_subspace(self.bracket_with(self))

    def is_ideal(self) -> bool:
        return self.contains_subspace(Subspace.full(self.algebra).bracket_with(self))

    def complement(self) -> "Subspace":
        free = [c for c in range(self.algebra.dim) if c not in self.pivots]
        return Subspace(self.algebra, [
            [ONE if k == c else ZERO for k in range(self.algebra.dim)] for c in free
        ])

    def __repr__(self) -> str:
        return f"Subspace(dim={self.dim} of {self.algebra.dim})"


class Morphism:
    """Linear map between algebras, columns indexed by source basis."""

    __slots__ = ("source", "target", "matrix")

    def __init__(self, source: LieAlgebra, target: LieAlgebra, matrix: Sequence[Sequence[GQ]]):
        self.source = source
        self.target = target
        self.matrix = tuple(tuple(GQ.of(c) for c in row) for row in matrix)
        if len(self.matrix) != target.dim or any(len(r) != source.dim for r in self.matrix):
            raise ShapeError("morphism matrix shape mismatch")

    def apply(self, x: Element) -> Element:
        if x.algebra is not self.source:
            raise ValueError("element not in the source algebra")
        return self.target.element(la.mat_vec(self.matrix, x.coeffs))

    def compose(self, inner: "Morphism") -> "Morphism":
        """self o inner."""
        if inner.target is not self.source:
            raise ValueError("composition mismatch")
        return Morphism(inner.source, self.target, la.mat_mul(self.matrix, inner.matrix))

    def is_homomorphism(self) -> bool:
        s, t = self.source, self.target
        cols = [
            tuple(self.matrix[r][c] for r in range(t.dim)) for c in range(s.dim)
        ]
        # classify columns so basis brackets of unit images are table lookups
        units: list[Optional[int]] = []
        for col in cols:
            nz = [idx for idx, v in enumerate(col) if v]
            if not nz:
                units.append(-1)  # zero column
            elif len(nz) == 1 and col[nz[0]] == 1:
                units.append(nz[0])
            else:
                units.append(None)
        for i in range(s.dim):
            for j in range(i + 1, s.dim):
                ui, uj = units[i], units[j]
                rhs: dict[int, GQ]
                if ui == -1 or uj == -1 or (ui is not None and ui == uj):
                    rhs = {}
                elif ui is not None and uj is not None:
                    if ui < uj:
                        rhs = dict(t.table.get((ui, uj), {}))
                    else:
                        rhs = {k: -c for k, c in t.table.get((uj, ui), {}).items()}
                else:
                    dense = t.bracket_coords(cols[i], cols[j])
                    rhs = {k: c for k, c in enumerate(dense) if c}
                lhs: dict[int, GQ] = {}
                for k, c in s.table.get((i, j), {}).items():
                    colk = cols[k]
                    for r in range(t.dim):
                        if colk[r]:
                            v = lhs.get(r, ZERO) + c * colk[r]
                            if v:
                                lhs[r] = v
                            elif r in lhs:
                                del lhs[r]
                if lhs != rhs:
                    return False
        return True

    def is_surjective(self) -> bool:
        return la.rank(self.matrix) == self.target.dim

    def kernel_subspace(self) -> Subspace:
        return Subspace(self.source, la.kernel(self.matrix))

    def __repr__(self) -> str:
        return f"Morphism({self.source.dim} -> {self.target.dim})"
