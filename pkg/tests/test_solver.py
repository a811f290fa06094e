from fractions import Fraction

import numpy as np
import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from distperron.distance_matrix import graph_distance_matrix, matrix_from_entries, metric_distance_matrix
from distperron.graph_core import from_edges, gen_broom, gen_complete, gen_cycle, gen_erdos_renyi, gen_path, gen_star, gen_sun
from distperron.metric_space import gen_cluster_plus_point
from distperron.solver import bareiss_echelon, prop1_condition, solve_exact, solve_float
from distperron.spectral import SpectrumTooLargeError


def dm(g):
    return graph_distance_matrix(g)


def sympy_verdict(d):
    m = sympy.Matrix(d.integer_view.tolist())
    aug = m.row_join(sympy.ones(d.n, 1))
    return m.rank(), aug.rank()


@pytest.mark.parametrize("n", [2, 3, 6])
def test_complete(n):
    r = solve_exact(dm(gen_complete(n)))
    assert r.consistent and r.invertible
    assert r.solution == [Fraction(1, n - 1)] * n


def test_p3_by_hand():
    r = solve_exact(dm(gen_path(3)))
    assert r.solution == [Fraction(1, 2), 0, Fraction(1, 2)]
    assert r.to_json()["solution"] == ["1/2", "0", "1/2"]
    assert r.sum_x == 1


def test_c4_singular_but_solvable():
    r = solve_exact(dm(gen_cycle(4)))
    assert (r.rank_D, r.rank_aug, r.consistent, r.invertible) == (3, 3, True, False)
    assert r.solution == [Fraction(1, 4)] * 4
    assert r.to_json()["consistent"] == "yes"


def k3_join_independent4():
    # hub triangle {0,1,2}; vertices 3..6 are pairwise non-adjacent and see the whole hub
    edges = [(0, 1), (0, 2), (1, 2)] + [(h, k) for h in range(3) for k in range(3, 7)]
    return from_edges(7, edges)


def test_inconsistent_system():
    d = dm(k3_join_independent4())
    r = solve_exact(d)
    assert not r.consistent and r.solution is None
    assert (r.rank_D, r.rank_aug) == sympy_verdict(d) == (r.rank_D, r.rank_D + 1)
    assert r.to_json()["consistent"] == "no"
    assert not solve_float(d).consistent
    assert not prop1_condition(d).condition_holds


@settings(max_examples=80, deadline=None)
@given(st.integers(2, 14), st.floats(0.15, 1.0), st.integers(0, 2**64 - 1))
def test_exact_verdict_matches_sympy_rank(n, p, seed):
    try:
        d = dm(gen_erdos_renyi(n, p, seed))
    except ValueError:
        return
    r = solve_exact(d)
    rd, ra = sympy_verdict(d)
    assert (r.rank_D, r.rank_aug) == (rd, ra)
    if r.consistent:
        m = sympy.Matrix(d.integer_view.tolist())
        assert list(m * sympy.Matrix(r.solution)) == [1] * n
        assert r.solution == list(m.pinv() * sympy.ones(n, 1))  # minimum-norm oracle


def test_rank_deficient_families_match_sympy():
    # trees and their relatives can be singular; compare a range of brooms and suns
    for g in [gen_broom(3, 3), gen_sun(4), gen_cycle(6), gen_cycle(8), gen_star(5)]:
        d = dm(g)
        r = solve_exact(d)
        assert (r.rank_D, r.rank_aug) == sympy_verdict(d)


def test_bareiss_rank_and_determinant():
    m = np.array([[2, 1, 1], [1, 3, 2], [1, 0, 0]], dtype=object)
    piv = bareiss_echelon(m)
    assert len(piv) == 3
    assert abs(m[2, 2]) == abs(sympy.Matrix([[2, 1, 1], [1, 3, 2], [1, 0, 0]]).det())
    z = np.array([[1, 2], [2, 4]], dtype=object)
    assert len(bareiss_echelon(z)) == 1


def test_bareiss_large_entries_stay_exact():
    a = [[10**30 + i * j for j in range(4)] for i in range(4)]
    m = np.array(a, dtype=object)
    assert len(bareiss_echelon(m)) == sympy.Matrix(a).rank()


def test_exact_requires_integers():
    with pytest.raises(ValueError):
        solve_exact(metric_distance_matrix(gen_cluster_plus_point(2, 0.5)))


def test_float_simple():
    r = solve_float(matrix_from_entries([[0, 1], [1, 0]]))
    assert r.consistent and np.allclose(r.solution, [1, 1]) and r.residual == 0


def test_float_cluster_metric():
    d = metric_distance_matrix(gen_cluster_plus_point(2, 0.5))
    r = solve_float(d)
    assert r.consistent and r.residual <= 1e-8
    assert np.allclose(d.entries @ np.array(r.solution), 1, atol=1e-12)


def test_float_c4_minimum_norm():
    r = solve_float(dm(gen_cycle(4)))
    assert r.consistent and r.rank_D == 3
    assert np.allclose(r.solution, 0.25)


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 30), st.floats(0.1, 1.0), st.integers(0, 2**64 - 1))
def test_float_agrees_with_exact(n, p, seed):
    try:
        d = dm(gen_erdos_renyi(n, p, seed))
    except ValueError:
        return
    e, f = solve_exact(d), solve_float(d)
    assert e.consistent == f.consistent
    if f.consistent:
        assert f.residual <= 1e-8
        assert np.allclose(f.solution, [float(x) for x in e.solution], atol=1e-8)


def test_prop1_k3():
    r = prop1_condition(dm(gen_complete(3)))
    assert r.lambda1 == pytest.approx(2) and r.lambda2 == pytest.approx(-1)
    assert r.lhs == pytest.approx(0, abs=1e-12) and r.rhs == pytest.approx(1 / 3)
    assert r.hypothesis_ok and r.condition_holds


def test_prop1_c4_not_necessary():
    r = prop1_condition(dm(gen_cycle(4)))
    assert r.lambda2 == 0.0 and r.rhs == 0.0 and r.lhs == 0.0
    assert not r.condition_holds
    assert solve_exact(dm(gen_cycle(4))).consistent


def test_prop1_hypothesis_fails_with_positive_lambda2():
    # K_{2,3}: spectrum (3 + sqrt 7, 3 - sqrt 7, -2, -2, -2)
    d = dm(from_edges(5, [(0, 2), (0, 3), (0, 4), (1, 2), (1, 3), (1, 4)]))
    oracle = np.linalg.eigvalsh(d.entries)[::-1]
    r = prop1_condition(d)
    assert r.lambda2 == pytest.approx(oracle[1], abs=1e-10) == pytest.approx(3 - 7 ** 0.5)
    assert not r.hypothesis_ok and not r.condition_holds


def test_prop1_cap():
    with pytest.raises(SpectrumTooLargeError):
        prop1_condition(dm(gen_path(8)), cap=5)


@settings(max_examples=40, deadline=None)
@given(st.integers(3, 30), st.floats(0.1, 1.0), st.integers(0, 2**64 - 1))
def test_prop1_soundness(n, p, seed):
    try:
        d = dm(gen_erdos_renyi(n, p, seed))
    except ValueError:
        return
    if prop1_condition(d).condition_holds:
        assert solve_exact(d).consistent


@pytest.mark.parametrize("g", [k3_join_independent4(), gen_cycle(4), gen_broom(3, 4), gen_sun(5)])
def test_solvability_invariant_under_relabeling(g):
    r = solve_exact(dm(g))
    for seed in range(3):
        perm = np.random.default_rng(seed).permutation(g.n)
        s = solve_exact(dm(g.relabel(perm)))
        assert (s.consistent, s.rank_D) == (r.consistent, r.rank_D)
        if r.consistent:
            assert [s.solution[perm[i]] for i in range(g.n)] == r.solution
