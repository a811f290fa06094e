"""Perron eigenpair, full spectrum and the eigenvector bounds for distance matrices.

For unit Perron vector ``v`` of an n-point distance matrix the bounds checked
by :func:`verify_theorem` are::

    min_i v_i >= 1 / (2 sqrt(n))        <v, 1> / sqrt(n) >= 1 / sqrt(2)
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

try:
    import numba as _numba
except ImportError:  # pragma: no cover
    _numba = None

from .distance_matrix import DistanceMatrix, max_row_sum

__all__ = [
    "ConvergenceError",
    "SpectrumTooLargeError",
    "SpectralSummary",
    "TheoremVerdict",
    "DEFAULT_TOL",
    "DEFAULT_MAX_ITER",
    "SPECTRUM_CAP",
    "perron_eigenpair",
    "full_spectrum",
    "jacobi_eigenvalues",
    "analyze",
    "verify_theorem",
    "rayleigh_quotient",
]

DEFAULT_TOL = 1e-10
DEFAULT_MAX_ITER = 200_000
SPECTRUM_CAP = 1500
THEOREM_SLACK = 1e-9


class ConvergenceError(RuntimeError):
    def __init__(self, message: str, residual: float):
        self.residual = residual
        super().__init__(message)


class SpectrumTooLargeError(ValueError):
    pass


def _entries(d) -> np.ndarray:
    return d.entries if isinstance(d, DistanceMatrix) else np.asarray(d, dtype=float)


def perron_eigenpair(d: DistanceMatrix, tol: float = DEFAULT_TOL, max_iter: int = DEFAULT_MAX_ITER):
    """Shifted power iteration for the Perron root.

    Iterates on ``D + sigma I`` with ``sigma`` the maximal row sum, starting
    from the constant unit vector, and stops once ``||Dv - lam v|| <= tol*lam``.

    Returns ``(lambda1, v, residual, iterations)``.
    """
    a = _entries(d)
    n = a.shape[0]
    sigma = max_row_sum(d) if isinstance(d, DistanceMatrix) else float(a.sum(axis=1).max())
    x = np.full(n, 1.0 / math.sqrt(n))
    it = 0
    while True:
        y = a @ x
        lam = float(x @ y)
        res = float(np.linalg.norm(y - lam * x))
        if lam > 0 and res <= tol * lam:
            break
        if it >= max_iter:
            raise ConvergenceError(
                f"power iteration did not converge in {max_iter} iterations (residual {res:.3e})", res)
        z = y + sigma * x
        x = z / np.linalg.norm(z)
        it += 1
    if np.any(x < 0):
        x = np.maximum(x, 0.0)
        x /= np.linalg.norm(x)
        y = a @ x
        lam = float(x @ y)
        res = float(np.linalg.norm(y - lam * x))
    return lam, x, res, it


def _round_robin(n: int) -> list[tuple[np.ndarray, np.ndarray]]:
    """Pairings covering every (p, q) with p < q once, n//2 disjoint pairs per round."""
    m = n + (n % 2)
    players = list(range(m))
    rounds = []
    for _ in range(m - 1):
        ps, qs = [], []
        for k in range(m // 2):
            p, q = players[k], players[m - 1 - k]
            if p < n and q < n:
                ps.append(min(p, q))
                qs.append(max(p, q))
        rounds.append((np.array(ps, dtype=np.intp), np.array(qs, dtype=np.intp)))
        players = [players[0], players[-1]] + players[1:-1]
    return rounds


def _off_norm(a: np.ndarray) -> float:
    # summed directly: ||A||^2 - ||diag||^2 cancels catastrophically near convergence
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def _rotation(app, aqq, apq):
    """Tangent of the angle that annihilates apq (smaller root, numerically stable)."""
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        theta = (aqq - app) / (2.0 * apq)
        t = np.where(np.abs(theta) > 1e150, 0.5 / theta,
                     np.copysign(1.0, theta) / (np.abs(theta) + np.sqrt(theta * theta + 1.0)))
    return np.where(apq != 0, t, 0.0)


def _jacobi_numpy(a: np.ndarray, target: float, max_sweeps: int) -> int:
    rounds = _round_robin(a.shape[0])
    for sweep in range(max_sweeps):
        if _off_norm(a) <= target:
            return sweep
        for p, q in rounds:
            apq = a[p, q]
            if not apq.any():
                continue
            t = _rotation(a[p, p], a[q, q], apq)
            c = 1.0 / np.sqrt(t * t + 1.0)
            s = t * c
            rp, rq = a[p, :], a[q, :]
            a[p, :] = c[:, None] * rp - s[:, None] * rq
            a[q, :] = s[:, None] * rp + c[:, None] * rq
            cp, cq = a[:, p], a[:, q]
            a[:, p] = cp * c - cq * s
            a[:, q] = cp * s + cq * c
            a[p, q] = 0.0
            a[q, p] = 0.0
        a += a.T
        a *= 0.5
    return -1 if _off_norm(a) > target else max_sweeps


def _jacobi_scalar(a, target, max_sweeps):
    n = a.shape[0]
    for sweep in range(max_sweeps):
        off = 0.0
        for i in range(n):
            for j in range(i + 1, n):
                off += 2.0 * a[i, j] * a[i, j]
        if math.sqrt(off) <= target:
            return sweep
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if apq == 0.0:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                if abs(theta) > 1e150:
                    t = 0.5 / theta
                else:
                    t = math.copysign(1.0, theta) / (abs(theta) + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                for k in range(n):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - s * akq
                    a[k, q] = s * akp + c * akq
                for k in range(n):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - s * aqk
                    a[q, k] = s * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
    return -1


if _numba is not None:
    _jacobi_compiled = _numba.njit(cache=True)(_jacobi_scalar)
else:
    _jacobi_compiled = None


def jacobi_eigenvalues(a, rtol: float = 1e-11, max_sweeps: int = 60, backend: str = "auto") -> np.ndarray:
    """Eigenvalues of a symmetric matrix by cyclic Jacobi rotations, descending.

    Rotations continue until the off-diagonal Frobenius norm is below
    ``rtol * ||A||_F``. ``backend="compiled"`` runs the row-cyclic sweep
    under numba; ``"numpy"`` applies round-robin rounds of n//2 commuting
    rotations as array operations. ``"auto"`` prefers the compiled kernel.
    """
    a = np.array(a, dtype=float)
    n = a.shape[0]
    if n == 1:
        return a.diagonal().copy()
    target = rtol * float(np.linalg.norm(a))
    if backend == "auto":
        backend = "compiled" if _jacobi_compiled is not None else "numpy"
    if backend == "compiled":
        if _jacobi_compiled is None:
            raise RuntimeError("numba is not installed; use backend='numpy'")
        sweeps = _jacobi_compiled(a, target, max_sweeps)
    elif backend == "numpy":
        sweeps = _jacobi_numpy(a, target, max_sweeps)
    else:
        raise ValueError(f"unknown backend {backend!r}")
    if sweeps < 0:
        raise ConvergenceError(f"Jacobi did not converge in {max_sweeps} sweeps", _off_norm(a))
    return np.sort(a.diagonal())[::-1].copy()


def full_spectrum(d, cap: int = SPECTRUM_CAP) -> np.ndarray:
    """All eigenvalues of ``d``, sorted descending."""
    a = _entries(d)
    if a.shape[0] > cap:
        raise SpectrumTooLargeError(
            f"n={a.shape[0]} exceeds the full-spectrum cap {cap}; use perron_eigenpair only")
    return jacobi_eigenvalues(a)


@dataclass
class SpectralSummary:
    n: int
    lambda1: float
    lambda2: float | None
    perron: np.ndarray
    min_entry: float
    alignment: float
    residual: float
    iterations: int
    spectrum_complete: bool
    spectrum: np.ndarray | None = None

    @property
    def gap(self) -> float | None:
        """Distance from the Perron root to the next eigenvalue, if known."""
        if self.spectrum is None or self.n < 2:
            return None
        return float(self.spectrum[0] - self.spectrum[1])

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "lambda1": self.lambda1,
            "lambda2": self.lambda2,
            "min_entry": self.min_entry,
            "alignment": self.alignment,
            "residual": self.residual,
            "iterations": self.iterations,
        }


def analyze(d: DistanceMatrix, spectrum: bool = True, tol: float = DEFAULT_TOL,
            max_iter: int = DEFAULT_MAX_ITER, cap: int = SPECTRUM_CAP) -> SpectralSummary:
    """Perron eigenpair plus, when ``n <= cap`` and requested, the Jacobi spectrum."""
    lam, v, res, it = perron_eigenpair(d, tol, max_iter)
    n = v.size
    spec = None
    lam2 = None
    if spectrum and n <= cap:
        spec = full_spectrum(d, cap)
        lam2 = float(spec[1]) if n > 1 else None
    align = min(max(float(v.sum()) / math.sqrt(n), 0.0), 1.0)
    return SpectralSummary(n, lam, lam2, v, float(v.min()), align, res, it, spec is not None, spec)


@dataclass(frozen=True)
class TheoremVerdict:
    n: int
    min_entry_margin: float  # min_i v_i - 1/(2 sqrt n)
    alignment_margin: float  # <v,1>/sqrt(n) - 1/sqrt(2)
    passed: bool


def verify_theorem(s: SpectralSummary) -> TheoremVerdict:
    m1 = s.min_entry - 1.0 / (2.0 * math.sqrt(s.n))
    m2 = s.alignment - 1.0 / math.sqrt(2.0)
    return TheoremVerdict(s.n, m1, m2, m1 >= -THEOREM_SLACK and m2 >= -THEOREM_SLACK)


def rayleigh_quotient(d, a) -> float:
    m = _entries(d)
    a = np.asarray(a, dtype=float)
    aa = float(a @ a)
    if aa == 0.0:
        raise ValueError("Rayleigh quotient of the zero vector is undefined")
    return float(a @ (m @ a)) / aa
