"""Closed forms and roots behind the path, star and sun graph constants.

Path graphs: the Perron vector of P_n is proportional to
``cosh((k - (n+1)/2) * theta)`` for ``k = 1..n``, where ``theta > 0`` solves
``tanh(theta/2) * tanh(n*theta/2) = 1/n``. As ``n -> inf``,
``n*theta/2 -> c`` with ``c * tanh(c) = 1`` and the alignment tends to
``sqrt(2) sinh(c) / (sqrt(c) * sqrt(c + cosh(c) sinh(c)))``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

__all__ = [
    "PathAsymptotics",
    "bisect_newton",
    "solve_c",
    "solve_theta",
    "ruzieh_powers_vector",
    "path_alignment",
    "path_asymptotics",
    "path_limit_constant",
    "sun_limit_constant",
    "star_min_entry_expansion",
    "THETA_BRACKET",
    "C_BRACKET",
]

C_BRACKET = (1.0, 1.5)
THETA_BRACKET = (0.0, 4.0)


def bisect_newton(f: Callable[[float], float], df: Callable[[float], float], lo: float, hi: float,
                  ftol: float = 1e-15, bisect_width: float = 1e-6, max_newton: int = 50) -> float:
    """Root of ``f`` in ``[lo, hi]``: bisection down to a narrow bracket, then Newton.

    ``f(lo)`` and ``f(hi)`` must have opposite signs. Newton steps that leave
    the current bracket fall back to a bisection step.
    """
    flo, fhi = f(lo), f(hi)
    if flo == 0:
        return lo
    if fhi == 0:
        return hi
    if (flo > 0) == (fhi > 0):
        raise ValueError(f"root not bracketed: f({lo})={flo}, f({hi})={fhi}")
    width0 = hi - lo
    while hi - lo > bisect_width * max(width0, abs(hi)):
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if (fm > 0) == (flo > 0):
            lo, flo = mid, fm
        else:
            hi = mid
    x = 0.5 * (lo + hi)
    for _ in range(max_newton):
        fx = f(x)
        if abs(fx) <= ftol:
            break
        if (fx > 0) == (flo > 0):
            lo, flo = x, fx
        else:
            hi = x
        step = fx / df(x)
        nxt = x - step
        if not lo < nxt < hi:
            nxt = 0.5 * (lo + hi)
        if nxt == x:
            break
        x = nxt
    return x


def solve_c() -> float:
    """Positive root of ``c * tanh(c) = 1`` (about 1.19968)."""
    return bisect_newton(
        lambda c: c * math.tanh(c) - 1.0,
        lambda c: math.tanh(c) + c / math.cosh(c) ** 2,
        *C_BRACKET,
    )


def _theta_eq(n: int):
    inv = 1.0 / n

    def f(t):
        return math.tanh(0.5 * t) * math.tanh(0.5 * n * t) - inv

    def df(t):
        a, b = math.tanh(0.5 * t), math.tanh(0.5 * n * t)
        return 0.5 * (1 - a * a) * b + 0.5 * n * a * (1 - b * b)

    return f, df


def solve_theta(n: int) -> float:
    """Positive root of ``tanh(theta/2) tanh(n theta/2) = 1/n``.

    The left side increases from 0 to 1 on ``(0, inf)`` and already exceeds
    1/2 at ``theta = 4``, so ``(0, 4]`` brackets the root for every n >= 2.
    """
    if n < 2:
        raise ValueError(f"theta equation needs n >= 2, got {n}")
    f, df = _theta_eq(n)
    return bisect_newton(f, df, *THETA_BRACKET, bisect_width=1e-9)


def ruzieh_powers_vector(n: int) -> np.ndarray:
    """Unit Perron vector of P_n from the cosh profile."""
    theta = solve_theta(n)
    k = np.arange(1, n + 1, dtype=float)
    v = np.cosh((k - 0.5 * (n + 1)) * theta)
    return v / np.linalg.norm(v)


def path_alignment(n: int) -> float:
    return float(ruzieh_powers_vector(n).sum() / math.sqrt(n))


def path_limit_constant() -> float:
    """Limit of ``<v(P_n), 1/sqrt(n)>``, about 0.98261."""
    c = solve_c()
    return math.sqrt(2.0) * math.sinh(c) / (math.sqrt(c) * math.sqrt(c + math.cosh(c) * math.sinh(c)))


def sun_limit_constant() -> float:
    return math.sqrt(0.5 + 1.0 / math.sqrt(5.0))


def star_min_entry_expansion(leaves: int) -> float:
    """Two-term expansion of the center entry of the star's unit Perron vector."""
    if leaves < 1:
        raise ValueError(f"star needs leaves >= 1, got {leaves}")
    return 1.0 / (2.0 * math.sqrt(leaves)) + (5.0 / 16.0) * leaves ** -1.5


@dataclass(frozen=True)
class PathAsymptotics:
    n: int
    theta: float
    c: float
    limit_constant: float
    finite_alignment: float

    @property
    def scaled_theta(self) -> float:
        """``n * theta / 2``, which tends to ``c``."""
        return self.n * self.theta / 2.0

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "c": self.c,
            "theta": self.theta,
            "limit_constant": self.limit_constant,
            "finite_alignment": self.finite_alignment,
            "sun_limit": sun_limit_constant(),
        }


def path_asymptotics(n: int) -> PathAsymptotics:
    return PathAsymptotics(n, solve_theta(n), solve_c(), path_limit_constant(), path_alignment(n))
