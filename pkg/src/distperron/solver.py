"""Solvability of ``D x = 1``: exact (fraction-free elimination), floating
(least squares), and the sufficient spectral criterion.

The criterion: if ``lambda1 > 0 >= lambda2`` and

    1 - <v, 1/sqrt(n)>^2  <  |lambda2| / (lambda1 - lambda2)

then ``D x = 1`` has a solution. It is sufficient, not necessary (C_4 is
solvable while the inequality reads ``0 < 0``).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import scipy.linalg

from .distance_matrix import DistanceMatrix
from .spectral import SPECTRUM_CAP, SpectrumTooLargeError, full_spectrum, perron_eigenpair

__all__ = [
    "SolveReport",
    "Prop1Report",
    "bareiss_echelon",
    "solve_exact",
    "solve_float",
    "prop1_condition",
    "EIG_ZERO_RTOL",
    "FLOAT_RCOND",
]

EIG_ZERO_RTOL = 1e-9
FLOAT_RCOND = 1e-10


@dataclass
class SolveReport:
    n: int
    consistent: bool
    rank_D: int
    rank_aug: int
    invertible: bool
    solution: list | None  # Fractions (exact) or floats
    residual: float | None
    sum_x: Fraction | float | None
    exact: bool

    def to_json(self) -> dict:
        if self.exact:
            sol = None if self.solution is None else [_frac_str(x) for x in self.solution]
            sx = None if self.sum_x is None else _frac_str(self.sum_x)
        else:
            sol = self.solution
            sx = self.sum_x
        return {
            "n": self.n,
            "consistent": "yes" if self.consistent else "no",
            "rank_D": self.rank_D,
            "rank_aug": self.rank_aug,
            "invertible": self.invertible,
            "residual": self.residual,
            "sum_x": sx,
            "solution": sol,
        }


def _frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def bareiss_echelon(m: np.ndarray, ncols: int | None = None):
    """Fraction-free row echelon form over Python integers.

    ``m`` is an object array of ints, reduced in place. Pivots are searched in
    the first ``ncols`` columns only (default: all). Returns the list of
    ``(row, col)`` pivot positions. Every intermediate entry is a minor of
    the input, so the ``//`` divisions are exact.
    """
    rows, cols = m.shape
    ncols = cols if ncols is None else ncols
    prev = 1
    r = 0
    pivots = []
    for c in range(ncols):
        if r == rows:
            break
        nz = np.flatnonzero(m[r:, c] != 0)
        if nz.size == 0:
            continue
        k = r + int(nz[0])
        if k != r:
            m[[r, k]] = m[[k, r]]
        piv = m[r, c]
        if r + 1 < rows:
            below = m[r + 1:, c:c + 1]
            m[r + 1:, c + 1:] = (piv * m[r + 1:, c + 1:] - below * m[r, c + 1:]) // prev
            m[r + 1:, c] = 0
        pivots.append((r, c))
        prev = piv
        r += 1
    return pivots


def _integer_back_substitute(u: np.ndarray, k: int) -> tuple[list[int], int]:
    """Solve a nonsingular fraction-free echelon system ``u[:k, :k] y = u[:k, k]``.

    Returns ``(y, det)`` with the solution equal to ``y / det``; ``det`` is
    the last Bareiss pivot (the determinant up to sign from row swaps). Each
    ``det * x_i`` is an integer by Cramer's rule, so the divisions are exact.
    """
    det = u[k - 1, k - 1]
    y = [0] * k
    for i in range(k - 1, -1, -1):
        acc = det * u[i, k]
        for j in range(i + 1, k):
            if u[i, j]:
                acc -= u[i, j] * y[j]
        y[i] = acc // u[i, i]
    return y, det


def _fractions(num: list[int], den: int) -> list[Fraction]:
    return [Fraction(v, den) for v in num]


def _int_product(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """Exact integer ``a.T @ b`` (int64 when it cannot overflow, else Python ints)."""
    bound = int(np.abs(a).max()) * int(np.abs(b).max()) * a.shape[0]
    if bound < 2**62:
        return a.astype(np.int64).T @ b.astype(np.int64)
    return a.astype(object).T.dot(b.astype(object))


def _min_norm_solution(dints: np.ndarray, aug: np.ndarray, pivots) -> list[Fraction]:
    """Exact minimum-norm solution of a consistent system ``D x = 1``.

    Full rank: back-substitute the eliminated augmented matrix. Otherwise,
    with P the pivot columns, the minimum-norm solution lies in
    range(D) = range(D[:, P]). By symmetry the rows P span the row space, so
    a consistent system reduces to ``D[P, :] x = 1``. Writing
    ``x = D[:, P] z`` gives the nonsingular r x r Gram system
    ``D[:, P].T D[:, P] z = 1``.
    """
    n = dints.shape[0]
    if len(pivots) == n:
        y, det = _integer_back_substitute(aug, n)
        return _fractions(y, det)
    cols = [c for _, c in pivots]
    dp = dints[:, cols]
    r = len(cols)
    gram = np.empty((r, r + 1), dtype=object)
    gram[:, :r] = _int_product(dp, dp).tolist()
    gram[:, r] = 1
    if len(bareiss_echelon(gram, ncols=r)) != r:
        raise ArithmeticError("Gram system is singular; pivot columns not independent")
    y, det = _integer_back_substitute(gram, r)
    xnum = dp.astype(object).dot(np.array(y, dtype=object))
    return _fractions([int(v) for v in xnum], det)


def solve_exact(d: DistanceMatrix) -> SolveReport:
    """Decide ``D x = 1`` exactly.

    When consistent, the reported solution is the exact minimum-norm one
    (unique, rational, and orthogonal to the null space of D).
    """
    if d.integer_view is None:
        raise ValueError("solve_exact needs an integer-valued distance matrix")
    n = d.n
    aug = np.empty((n, n + 1), dtype=object)
    aug[:, :n] = [[int(x) for x in row] for row in d.integer_view.tolist()]
    aug[:, n] = 1
    pivots = bareiss_echelon(aug, ncols=n)
    rank_d = len(pivots)
    rank_aug = rank_d + (1 if any(aug[i, n] != 0 for i in range(rank_d, n)) else 0)
    consistent = rank_aug == rank_d
    if not consistent:
        return SolveReport(n, False, rank_d, rank_aug, False, None, None, None, True)

    x = _min_norm_solution(d.integer_view, aug, pivots)

    # exact substitution check with a common denominator
    den = math.lcm(*(f.denominator for f in x))
    xi = np.array([f.numerator * (den // f.denominator) for f in x], dtype=object)
    if any(v != den for v in d.integer_view.astype(object).dot(xi)):
        raise ArithmeticError("exact solution failed substitution check")
    return SolveReport(n, True, rank_d, rank_aug, rank_d == n, x, 0.0, sum(x, Fraction(0)), True)


def solve_float(d: DistanceMatrix) -> SolveReport:
    """Minimum-norm least squares via complete orthogonal factorization (LAPACK gelsy).

    Declared consistent iff ``||D x - 1|| <= 1e-8 sqrt(n)``; ``rank_aug`` is
    ``rank_D`` or ``rank_D + 1`` accordingly.
    """
    a = np.array(d.entries, dtype=float)
    n = d.n
    ones = np.ones(n)
    x, _, rank, _ = scipy.linalg.lstsq(a, ones, cond=FLOAT_RCOND, lapack_driver="gelsy")
    residual = float(np.linalg.norm(a @ x - ones))
    consistent = residual <= 1e-8 * math.sqrt(n)
    rank = int(rank)
    return SolveReport(
        n, consistent, rank, rank if consistent else rank + 1, rank == n,
        x.tolist() if consistent else None, residual,
        float(x.sum()) if consistent else None, False,
    )


@dataclass
class Prop1Report:
    lambda1: float
    lambda2: float
    hypothesis_ok: bool
    lhs: float
    rhs: float
    condition_holds: bool

    def to_json(self) -> dict:
        return dict(self.__dict__)


def prop1_condition(d: DistanceMatrix, spectrum: np.ndarray | None = None,
                    perron: np.ndarray | None = None, cap: int = SPECTRUM_CAP) -> Prop1Report:
    """Evaluate the spectral sufficient condition for solvability.

    ``spectrum`` (descending) and ``perron`` may be passed in when already
    computed. Eigenvalues within ``1e-9 * lambda1`` of zero count as zero.
    """
    if spectrum is None:
        if d.n > cap:
            raise SpectrumTooLargeError(f"n={d.n} exceeds the full-spectrum cap {cap}; criterion unavailable")
        spectrum = full_spectrum(d, cap)
    if perron is None:
        _, perron, _, _ = perron_eigenpair(d)
    lam1 = float(spectrum[0])
    lam2 = float(spectrum[1]) if len(spectrum) > 1 else 0.0
    if abs(lam2) <= EIG_ZERO_RTOL * abs(lam1):
        lam2 = 0.0
    hyp = lam1 > 0 and lam2 <= 0
    align = float(np.sum(perron)) / math.sqrt(d.n)
    lhs = min(max(1.0 - align * align, 0.0), 1.0)
    rhs = abs(lam2) / (lam1 - lam2) if lam1 > lam2 else math.inf
    return Prop1Report(lam1, lam2, hyp, lhs, rhs, bool(hyp and lhs < rhs))
