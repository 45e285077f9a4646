import numpy as np
from numpy.testing import assert_allclose
import pytest
from hypothesis import given, settings, strategies as st
from scipy.special import eval_legendre

from lpstat import DegenerateError, Sample, build_score_basis, eval_S, legendre_basis, mid_distribution


def binary(p1, n=1000):
    k = int(round(p1 * n))
    return Sample.from_values([0] * (n - k) + [1] * k)


def test_binary_half():
    b = build_score_basis(binary(0.5), 4)
    assert b.effective_m == 1
    assert_allclose(b.T(1), [-1, 1], atol=1e-14)


def test_binary_fifth():
    b = build_score_basis(binary(0.2), 1)
    assert_allclose(b.T(1), [-0.5, 2.0], atol=1e-13)


@pytest.mark.parametrize("p1", [0.05, 0.3, 0.62, 0.9])
def test_binary_closed_form(p1):
    # T1(0) = -sqrt(p/q), T1(1) = sqrt(q/p) with p = P(X=1), q = 1 - p
    b = build_score_basis(binary(p1), 2)
    q = 1 - p1
    assert_allclose(b.T(1), [-np.sqrt(p1 / q), np.sqrt(q / p1)], rtol=1e-12)


def test_three_point_hand_gram_schmidt():
    b = build_score_basis(Sample.from_values([1, 2, 3]), 4)
    assert b.effective_m == 2
    assert_allclose(b.T(1), [-np.sqrt(1.5), 0, np.sqrt(1.5)], atol=1e-14)
    assert_allclose(b.T(2), [1 / np.sqrt(2), -np.sqrt(2), 1 / np.sqrt(2)], atol=1e-14)


def test_single_point_is_degenerate():
    with pytest.raises(DegenerateError, match="no score functions"):
        build_score_basis(Sample.from_values([3, 3, 3]))


def test_eval_S():
    b = build_score_basis(binary(0.5))
    assert eval_S(b, 1, 0.25) == -1
    assert eval_S(b, 1, 0.75) == 1
    b3 = build_score_basis(Sample.from_values([1, 2, 3]))
    assert_allclose(eval_S(b3, 2, 0.5), -np.sqrt(2))
    with pytest.raises(IndexError):
        eval_S(b3, 3, 0.5)


def test_S_is_step_function_with_jumps_at_cdf():
    s = Sample.from_values([1, 1, 2, 5, 5, 5, 9])
    b = build_score_basis(s, 3)
    jumps = s.cdf[:-1]
    for j in range(1, 4):
        left = eval_S(b, j, jumps - 1e-9)
        at = eval_S(b, j, jumps)
        right = eval_S(b, j, jumps + 1e-9)
        assert_allclose(left, at)
        assert np.all(right != at)


def test_legendre_values():
    lb = legendre_basis(4)
    assert lb.leg(1, 0.5) == 0
    assert_allclose(lb.leg(1, 1.0), np.sqrt(3))
    u = np.linspace(0, 1, 11)
    assert_allclose(lb.leg(1, u), np.sqrt(12) * (u - 0.5))
    for j in range(1, 5):
        assert_allclose(lb.leg(j, u), np.sqrt(2 * j + 1) * eval_legendre(j, 2 * u - 1), atol=1e-13)


def test_legendre_orthonormal_by_quadrature():
    lb = legendre_basis(12)
    x, w = np.polynomial.legendre.leggauss(256)
    u, w = (x + 1) / 2, w / 2
    S = np.column_stack([np.ones_like(u), lb.S(u)])
    assert_allclose(S.T @ (S * w[:, None]), np.eye(13), atol=1e-9)


def test_legendre_integral():
    lb = legendre_basis(5)
    for j in range(1, 6):
        for b in (0.2, 0.7, 1.0):
            x, w = np.polynomial.legendre.leggauss(64)
            u = b * (x + 1) / 2
            assert_allclose(lb.integral(j, b), b / 2 * np.dot(w, lb.leg(j, u)), atol=1e-13)


def _gram(b):
    S = np.column_stack([np.ones(b.support.size), b.table])
    return S.T @ (S * b.probs[:, None])


discrete = st.lists(st.integers(1, 30), min_size=2, max_size=30).map(
    lambda c: np.repeat(np.arange(len(c)) * 1.5, c)
)


@settings(max_examples=150, deadline=None)
@given(discrete, st.integers(1, 10))
def test_orthonormality_property(vals, m):
    b = build_score_basis(Sample.from_values(vals), m)
    assert b.effective_m <= min(m, b.support.size - 1)
    assert_allclose(_gram(b), np.eye(b.effective_m + 1), atol=1e-9)


@settings(max_examples=100, deadline=None)
@given(st.floats(0.01, 0.99))
def test_binary_identity_property(p1):
    s = binary(p1, 10_000)
    b = build_score_basis(s, 1)
    p = s.probs[1]
    q = 1 - p
    assert_allclose(b.T(1), [-np.sqrt(p / q), np.sqrt(q / p)], rtol=1e-10)


def test_full_basis_for_many_support_points():
    s = Sample.from_values(np.arange(30.0))
    b = build_score_basis(s, 29)
    assert b.effective_m == 29
    assert_allclose(_gram(b), np.eye(30), atol=1e-9)


def test_shape_close_to_legendre():
    rng = np.random.default_rng(5)
    s = Sample.from_values(rng.standard_normal(1000))
    b = build_score_basis(s, 4)
    leg = legendre_basis(4).S(mid_distribution(s).fmid)
    assert np.max(np.abs(b.table - leg)) <= 0.15


def test_scores_invariant_to_monotone_transform():
    rng = np.random.default_rng(0)
    x = rng.integers(0, 12, 300).astype(float)
    a = build_score_basis(Sample.from_values(x), 5).data_scores()
    b = build_score_basis(Sample.from_values(np.exp(x / 3) ** 3), 5).data_scores()
    assert_allclose(a, b, atol=1e-9)
