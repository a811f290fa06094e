import math

import numpy as np
import pytest
from scipy.integrate import simpson
from scipy.optimize import brentq

from distperron.asymptotics import (
    THETA_BRACKET, bisect_newton, path_alignment, path_asymptotics, path_limit_constant,
    ruzieh_powers_vector, solve_c, solve_theta, star_min_entry_expansion, sun_limit_constant,
)
from distperron.distance_matrix import graph_distance_matrix
from distperron.graph_core import gen_path, gen_star
from distperron.spectral import perron_eigenpair, rayleigh_quotient


def plain_bisection(f, lo, hi, iters=200):
    for _ in range(iters):
        mid = 0.5 * (lo + hi)
        if (f(mid) > 0) == (f(lo) > 0):
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def test_bisect_newton_basic():
    r = bisect_newton(lambda x: x * x - 2, lambda x: 2 * x, 0, 2)
    assert r == pytest.approx(math.sqrt(2), abs=1e-15)
    with pytest.raises(ValueError):
        bisect_newton(lambda x: x * x + 1, lambda x: 2 * x, -1, 1)
    assert bisect_newton(lambda x: x, lambda x: 1.0, 0, 1) == 0


def test_c_value():
    c = solve_c()
    assert c * math.tanh(c) == pytest.approx(1, abs=1e-15)
    assert c == pytest.approx(plain_bisection(lambda x: x * math.tanh(x) - 1, 1, 1.5), abs=1e-12)
    assert abs(c - 1.19968) < 1e-4  # printed approximation c ~ 1.2


def test_theta_bracket_valid():
    lo, hi = THETA_BRACKET
    for n in [2, 3, 10, 1000, 10**6]:
        f = lambda t: math.tanh(t / 2) * math.tanh(n * t / 2) - 1 / n
        assert f(lo + 1e-12) < 0 < f(hi)


@pytest.mark.parametrize("n", [2, 3, 7, 100, 5000])
def test_theta_against_brentq(n):
    f = lambda t: math.tanh(t / 2) * math.tanh(n * t / 2) - 1 / n
    assert solve_theta(n) == pytest.approx(brentq(f, 1e-14, 4, xtol=1e-15), rel=1e-12)


def test_theta_n3_matches_p3_ratio():
    # end/middle ratio of the P_3 Perron vector is (1 + sqrt 3)/2 = cosh(theta)
    theta = solve_theta(3)
    assert math.cosh(theta) == pytest.approx((1 + math.sqrt(3)) / 2, abs=1e-12)
    assert theta == pytest.approx(0.8314, abs=1e-3)
    _, v, _, _ = perron_eigenpair(graph_distance_matrix(gen_path(3)))
    assert v[0] / v[1] == pytest.approx(math.cosh(theta), abs=1e-8)


def test_theta_scaled_tends_to_c():
    assert abs(10000 * solve_theta(10000) / 2 - solve_c()) <= 0.01
    gaps = [abs(n * solve_theta(n) / 2 - solve_c()) for n in (10, 100, 1000)]
    assert gaps == sorted(gaps, reverse=True)


def test_theta_domain():
    with pytest.raises(ValueError):
        solve_theta(1)


def test_profile_p3_matches_spectral():
    _, v, _, _ = perron_eigenpair(graph_distance_matrix(gen_path(3)))
    assert np.allclose(ruzieh_powers_vector(3), v, atol=1e-8)


@pytest.mark.parametrize("n", [3, 10, 50, 200, 1000])
def test_profile_is_eigenvector(n):
    d = graph_distance_matrix(gen_path(n))
    v = ruzieh_powers_vector(n)
    lam = rayleigh_quotient(d, v)
    assert np.linalg.norm(d.entries @ v - lam * v) <= 1e-6 * lam
    assert np.linalg.norm(v) == pytest.approx(1)


def test_path_limit_constant():
    assert abs(path_limit_constant() - 0.98261) < 5e-5
    c = solve_c()
    # same constant from the continuum profile cosh(2c(t - 1/2)) on [0, 1]
    t = np.linspace(0, 1, 200001)
    prof = np.cosh(2 * c * (t - 0.5))
    mean, mean_sq = simpson(prof, x=t), simpson(prof * prof, x=t)
    assert path_limit_constant() == pytest.approx(mean / math.sqrt(mean_sq), abs=1e-9)


def test_path_alignment_decreases_to_limit():
    vals = [path_alignment(n) for n in (50, 200, 1000)]
    assert vals == sorted(vals, reverse=True)
    assert all(v > path_limit_constant() for v in vals)
    assert abs(path_alignment(4000) - path_limit_constant()) < 1e-3


def test_sun_limit():
    assert sun_limit_constant() == pytest.approx(0.97325, abs=5e-6)


def star_center_exact(leaves):
    # center a, leaves b: lambda a = L b and lambda b = a + 2(L-1) b
    lam = (leaves - 1) + math.sqrt((leaves - 1) ** 2 + leaves)
    b = 1.0
    a = leaves * b / lam
    return a / math.sqrt(a * a + leaves * b * b)


def test_star_expansion():
    assert star_min_entry_expansion(3) == pytest.approx(0.34882, abs=1e-5)
    assert star_center_exact(3) == pytest.approx(0.34934, abs=1e-5)
    _, v, _, _ = perron_eigenpair(graph_distance_matrix(gen_star(100)))
    assert abs(star_min_entry_expansion(100) - v[0]) < 1e-3
    dev = [abs(star_min_entry_expansion(k) / star_center_exact(k) - 1) for k in (100, 1000)]
    assert dev[1] < dev[0]
    with pytest.raises(ValueError):
        star_min_entry_expansion(0)


def test_path_asymptotics_bundle():
    pa = path_asymptotics(100)
    assert pa.scaled_theta == pytest.approx(50 * solve_theta(100))
    js = pa.to_json()
    assert js["n"] == 100 and js["sun_limit"] == sun_limit_constant()


@pytest.mark.parametrize("n", [2, 3, 50, 4000])
def test_root_residuals(n):
    t = solve_theta(n)
    assert abs(math.tanh(t / 2) * math.tanh(n * t / 2) - 1 / n) <= 1e-12
    c = solve_c()
    assert abs(c * math.tanh(c) - 1) <= 1e-12


@pytest.mark.parametrize("leaves", [2, 3, 10, 77])
def test_star_center_is_argmin(leaves):
    _, v, _, _ = perron_eigenpair(graph_distance_matrix(gen_star(leaves)))
    assert int(np.argmin(v)) == 0 and v[0] < v[1:].min()
