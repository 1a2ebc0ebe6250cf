"""Exact truncated group law on nilpotent algebras and its verifications.

The multiplication comes from the Dynkin presentation of the
Baker-Campbell-Hausdorff series with exact rational coefficients, so on a
nilpotent algebra of class <= the truncation bound every group-law identity
is a strict equality of Gaussian rationals.  The module also houses the
local-group axiom suite, the two-coordinate product on solvable algebras
split along their commutator ideal, and the numeric limit-formula tables
that recover addition and bracket from one-parameter subgroups.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Optional, Sequence

import numpy as np
import scipy.linalg

from . import linalg as la
from .algebra import Element, LieAlgebra, Subspace, bracket
from .scalars import GQ, ZERO


# ---------------------------------------------------------------------------
# Dynkin coefficients
# ---------------------------------------------------------------------------

@lru_cache(maxsize=None)
def dynkin_terms(max_degree: int) -> tuple[tuple[str, Fraction], ...]:
    """All (word, coefficient) pairs of the series through ``max_degree``.

    Words are strings over {'x', 'y'} evaluated as left-nested brackets
    [w0, [w1, [... wk]]].  Each block tuple (r1, s1, ..., rn, sn) with
    r_i + s_i > 0 contributes (-1)^(n-1) / (n * |w| * prod r_i! s_i!) to its
    word; contributions are accumulated per word.
    """
    acc: dict[str, Fraction] = {}

    def blocks(n: int, remaining: int, word: str, denom: int):
        if n == 0:
            if word:
                weight = Fraction(1, denom * len(word))
                acc[word] = acc.get(word, Fraction(0)) + sign * weight
            return
        for r in range(remaining + 1):
            for s in range(remaining - r + 1):
                if r + s == 0:
                    continue
                blocks(
                    n - 1,
                    remaining - r - s,
                    word + "x" * r + "y" * s,
                    denom * math.factorial(r) * math.factorial(s),
                )

    for n in range(1, max_degree + 1):
        sign = Fraction((-1) ** (n - 1), n)
        blocks(n, max_degree, "", 1)
    return tuple(sorted((w, c) for w, c in acc.items() if c))


def _eval_word(word: str, x: Element, y: Element, memo: dict) -> Element:
    """Left-nested bracket of the word, memoized by suffix."""
    if word in memo:
        return memo[word]
    if len(word) == 1:
        val = x if word == "x" else y
    else:
        inner = _eval_word(word[1:], x, y, memo)
        val = bracket(x if word[0] == "x" else y, inner)
    memo[word] = val
    return val


def bch(x: Element, y: Element, class_bound: int) -> Element:
    """Dynkin-series product log(exp x exp y) through ``class_bound``.

    Exact; equals the group law whenever the algebra is nilpotent of class
    at most ``class_bound``.
    """
    if class_bound < 1:
        raise ValueError("class bound must be at least 1")
    if x.algebra is not y.algebra:
        raise ValueError("elements belong to different algebras")
    alg = x.algebra
    memo: dict[str, Element] = {}
    out = alg.zero()
    for word, coeff in dynkin_terms(class_bound):
        term = _eval_word(word, x, y, memo)
        if not term.is_zero():
            out = out + term.scale(GQ(coeff))
    return out


def bch_inverse(x: Element) -> Element:
    return -x


def group_commutator(x: Element, y: Element, class_bound: int) -> Element:
    """x * y * x^{-1} * y^{-1} in the exact group law."""
    a = bch(x, y, class_bound)
    b = bch(a, -x, class_bound)
    return bch(b, -y, class_bound)


# ---------------------------------------------------------------------------
# local-group axioms
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class AxiomReport:
    samples: int
    class_bound: int
    associativity_failures: int
    unit_failures: int
    one_parameter_failures: int
    taylor_failures: int
    counterexample: Optional[str] = None

    @property
    def all_passed(self) -> bool:
        return not (
            self.associativity_failures
            or self.unit_failures
            or self.one_parameter_failures
            or self.taylor_failures
        )

    def to_dict(self) -> dict:
        return {
            "samples": self.samples,
            "class_bound": self.class_bound,
            "associativity_failures": self.associativity_failures,
            "unit_failures": self.unit_failures,
            "one_parameter_failures": self.one_parameter_failures,
            "taylor_failures": self.taylor_failures,
            "all_passed": self.all_passed,
            **({"counterexample": self.counterexample} if self.counterexample else {}),
        }


def check_local_group_axioms(
    alg: LieAlgebra, samples: int, rng, span: int = 3
) -> AxiomReport:
    """Exercise the four local-group axioms on random rational samples.

    Everything is checked by strict equality of exact coefficients: the
    associativity of the truncated series on a nilpotent algebra is a
    theorem, so any failure is an implementation bug, which is exactly what
    this suite is for.
    """
    from . import structure as st

    cls = st.nilpotency_class(alg)
    if cls is None:
        raise ValueError("axiom suite requires a nilpotent algebra")
    cls = max(cls, 1)
    from .builders import random_element

    assoc = unit = onep = taylor = 0
    counterexample = None
    for _ in range(samples):
        x = random_element(alg, rng, span)
        y = random_element(alg, rng, span)
        z = random_element(alg, rng, span)
        left = bch(bch(x, y, cls), z, cls)
        right = bch(x, bch(y, z, cls), cls)
        if left.coeffs != right.coeffs:
            assoc += 1
            counterexample = counterexample or f"associativity at x={x}, y={y}, z={z}"
        if bch(x, alg.zero(), cls).coeffs != x.coeffs or bch(alg.zero(), x, cls).coeffs != x.coeffs:
            unit += 1
            counterexample = counterexample or f"unit at x={x}"
        s = Fraction(rng.randint(-4, 4), 4)
        t = Fraction(rng.randint(-4, 4), 4)
        if bch(x.scale(s), x.scale(t), cls).coeffs != x.scale(s + t).coeffs:
            onep += 1
            counterexample = counterexample or f"one-parameter law at x={x}"
        expected2 = x + y + bracket(x, y).scale(Fraction(1, 2))
        if bch(x, y, 2).coeffs != expected2.coeffs:
            taylor += 1
            counterexample = counterexample or f"second-order form at x={x}, y={y}"
    return AxiomReport(samples, cls, assoc, unit, onep, taylor, counterexample)


# ---------------------------------------------------------------------------
# two-coordinate product on a solvable algebra split along its commutator
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SplitCoordinates:
    """Coordinates (n-part, e-part) along g = n + e with n the commutator ideal."""

    n_part: Element
    e_part: Element


class PhiSplit:
    """Product data for a solvable algebra split as commutator ideal + complement.

    The exact backend needs the whole algebra nilpotent (the correction
    factor is then a finite bracket series); the numeric backend needs a
    faithful matrix representation and works for any split solvable algebra.
    """

    def __init__(
        self,
        alg: LieAlgebra,
        ideal: Optional[Subspace] = None,
        complement: Optional[Subspace] = None,
        matrix_rep: Optional[Sequence[np.ndarray]] = None,
    ):
        from . import structure as st

        self.alg = alg
        full = Subspace.full(alg)
        self.ideal = ideal if ideal is not None else full.bracket_with(full)
        if not self.ideal.is_ideal():
            raise ValueError("n-part must be an ideal")
        if not self.ideal.contains_subspace(full.bracket_with(full)):
            raise ValueError("the quotient by the n-part must be abelian")
        self.complement = complement if complement is not None else self.ideal.complement()
        if self.ideal.dim + self.complement.dim != alg.dim:
            raise ValueError("complement does not complement the ideal")
        if self.ideal.sum_with(self.complement).dim != alg.dim:
            raise ValueError("complement overlaps the ideal")
        self.nilpotent_class = st.nilpotency_class(alg)
        self.matrix_rep = None
        if matrix_rep is not None:
            self.matrix_rep = [np.asarray(m, dtype=float) for m in matrix_rep]
        if self.nilpotent_class is None and self.matrix_rep is None:
            raise ValueError(
                "unsupported algebra: need nilpotency (exact backend) or a "
                "matrix representation (numeric backend)"
            )

    # -- coordinates --------------------------------------------------------
    def split(self, x: Element) -> SplitCoordinates:
        ncoords, ecoords = self._split_coords(x)
        return SplitCoordinates(self._from_n(ncoords), self._from_e(ecoords))

    def _split_coords(self, x):
        rows = list(self.ideal.rows) + list(self.complement.rows)
        sol = la.solve(la.transpose(rows), list(x.coeffs))
        if sol is None:
            raise AssertionError("split basis does not span")
        return sol[: self.ideal.dim], sol[self.ideal.dim:]

    def _from_n(self, coords) -> Element:
        out = [ZERO] * self.alg.dim
        for c, row in zip(coords, self.ideal.rows):
            if c:
                out = [a + c * b for a, b in zip(out, row)]
        return self.alg.element(out)

    def _from_e(self, coords) -> Element:
        out = [ZERO] * self.alg.dim
        for c, row in zip(coords, self.complement.rows):
            if c:
                out = [a + c * b for a, b in zip(out, row)]
        return self.alg.element(out)

    def coords(self, n_part: Element, e_part: Element) -> SplitCoordinates:
        if not self.ideal.contains(n_part):
            raise ValueError("first coordinate is not in the ideal")
        if not self.complement.contains(e_part):
            raise ValueError("second coordinate is not in the complement")
        return SplitCoordinates(n_part, e_part)

    # -- the product ---------------------------------------------------------
    def multiply(self, a: SplitCoordinates, b: SplitCoordinates) -> SplitCoordinates:
        """(x, y)(x', y') = (x * e^{ad y} x' * f(y, y'), y + y')."""
        if self.nilpotent_class is not None:
            return self._multiply_exact(a, b)
        return self._multiply_numeric(a, b)

    def _multiply_exact(self, a, b):
        cls = max(self.nilpotent_class, 1)
        ad_y = self.alg.ad_matrix(a.e_part)
        moved = _exp_ad_exact(ad_y, b.n_part)
        corr = self._f_exact(a.e_part, b.e_part, cls)
        n_out = bch(bch(a.n_part, moved, cls), corr, cls)
        return SplitCoordinates(n_out, a.e_part + b.e_part)

    def _f_exact(self, y: Element, y2: Element, cls: int) -> Element:
        # f(y, y') = log(exp y exp y' exp(y + y')^{-1})
        w = bch(bch(y, y2, cls), -(y + y2), cls)
        if not self.ideal.contains(w):
            raise AssertionError("correction factor fell outside the ideal")
        return w

    def _multiply_numeric(self, a, b):
        rep = self._rep_matrix
        ga = scipy.linalg.expm(rep(a.n_part)) @ scipy.linalg.expm(rep(a.e_part))
        gb = scipy.linalg.expm(rep(b.n_part)) @ scipy.linalg.expm(rep(b.e_part))
        prod = ga @ gb
        e_sum = a.e_part + b.e_part
        n_mat = prod @ scipy.linalg.expm(-rep(e_sum))
        log_n = scipy.linalg.logm(n_mat)
        if np.max(np.abs(np.imag(log_n))) > 1e-9:
            raise ValueError("group element left the principal-logarithm range")
        n_out = self._coords_from_matrix(np.real(log_n))
        return SplitCoordinates(n_out, e_sum)

    def _rep_matrix(self, x: Element) -> np.ndarray:
        acc = np.zeros_like(self.matrix_rep[0])
        for c, m in zip(x.coeffs, self.matrix_rep):
            f = complex(c)
            if f:
                acc = acc + f.real * m
        return acc

    def _coords_from_matrix(self, m: np.ndarray) -> Element:
        cols = np.array([mat.reshape(-1) for mat in self.matrix_rep]).T
        coeffs, *_ = np.linalg.lstsq(cols, np.asarray(m, dtype=float).reshape(-1), rcond=None)
        # snap to rationals: representation coefficients of group logs stay
        # moderate, and the ideal-membership check below guards the result
        exact = [GQ(Fraction(float(c)).limit_denominator(10**9)) for c in coeffs]
        el = self.alg.element(exact)
        if not self.ideal.contains(el):
            raise AssertionError("numeric n-part fell outside the ideal")
        return el

    def inverse(self, a: SplitCoordinates) -> SplitCoordinates:
        """(x, y)^{-1} = (-e^{-ad y}(f(y, -y) * x), -y)."""
        if self.nilpotent_class is None:
            raise NotImplementedError("inverse is provided by the exact backend")
        cls = max(self.nilpotent_class, 1)
        corr = self._f_exact(a.e_part, -a.e_part, cls)
        inner = bch(corr, a.n_part, cls)
        ad_y = self.alg.ad_matrix(a.e_part)
        moved = _exp_ad_exact(la.mat_scale(ad_y, GQ(-1)), inner)
        return SplitCoordinates(-moved, -a.e_part)


def _exp_ad_exact(ad: Sequence[Sequence[GQ]], x: Element) -> Element:
    """e^{ad} x as a terminating exact series (nilpotent ad only)."""
    alg = x.algebra
    out = list(x.coeffs)
    term = list(x.coeffs)
    k = 1
    while True:
        term = la.mat_vec(ad, term)
        if not any(term):
            break
        f = GQ(Fraction(1, math.factorial(k)))
        out = [a + f * b for a, b in zip(out, term)]
        k += 1
        if k > alg.dim + 2:
            raise ValueError("ad operator is not nilpotent")
    return alg.element(out)


# ---------------------------------------------------------------------------
# limit formulas for addition and bracket of one-parameter groups
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class ConvergenceRow:
    n: int
    addition_deviation: float
    commutator_deviation: float


@dataclass(frozen=True)
class ConvergenceTable:
    rows: tuple[ConvergenceRow, ...]

    def to_dict(self) -> dict:
        return {
            "rows": [
                {
                    "n": r.n,
                    "addition_deviation": r.addition_deviation,
                    "commutator_deviation": r.commutator_deviation,
                }
                for r in self.rows
            ]
        }

    def to_csv(self) -> str:
        lines = ["n,addition_deviation,commutator_deviation"]
        for r in self.rows:
            lines.append(f"{r.n},{r.addition_deviation!r},{r.commutator_deviation!r}")
        return "\n".join(lines) + "\n"


def limit_formula_check(
    x: np.ndarray,
    y: np.ndarray,
    n_max: int,
    ns: Optional[Sequence[int]] = None,
) -> ConvergenceTable:
    """Deviation tables for the product and commutator limit formulas.

    For one-parameter groups t -> e^{tX}: the n-th row compares
    (e^{X/n} e^{Y/n})^n with e^{X+Y} and the n^2-th power of the group
    commutator of e^{X/n}, e^{Y/n} with e^{[X,Y]}, in Frobenius norm.
    Defaults to the doubling sequence 1, 2, 4, ..., n_max.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if ns is None:
        ns = []
        n = 1
        while n <= n_max:
            ns.append(n)
            n *= 2
    exy = scipy.linalg.expm(x + y)
    ecomm = scipy.linalg.expm(x @ y - y @ x)
    rows = []
    for n in ns:
        ax = scipy.linalg.expm(x / n)
        ay = scipy.linalg.expm(y / n)
        prod = np.linalg.matrix_power(ax @ ay, n)
        add_dev = float(np.linalg.norm(prod - exy))
        comm = ax @ ay @ scipy.linalg.expm(-x / n) @ scipy.linalg.expm(-y / n)
        comm_pow = np.linalg.matrix_power(comm, n * n)
        comm_dev = float(np.linalg.norm(comm_pow - ecomm))
        rows.append(ConvergenceRow(int(n), add_dev, comm_dev))
    return ConvergenceTable(tuple(rows))


def shipped_matrix_pair(name: str) -> tuple[np.ndarray, np.ndarray]:
    """The two bundled test pairs for the limit-formula tables."""
    if name == "sl2":
        return (
            np.array([[0.0, 1.0], [0.0, 0.0]]),
            np.array([[0.0, 0.0], [1.0, 0.0]]),
        )
    if name == "heisenberg":
        x = np.zeros((3, 3))
        x[0, 1] = 1.0
        y = np.zeros((3, 3))
        y[1, 2] = 1.0
        return x, y
    raise KeyError(f"unknown matrix pair {name!r}")
