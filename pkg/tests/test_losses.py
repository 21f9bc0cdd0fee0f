import math

import numpy as np
import pytest

from kdgmm import ModelParams, cross_entropy, kd_loss, kd_loss_grad, sigmoid, smooth_label

LOG2 = 0.6931471805599453


def test_sigmoid_center_and_symmetry():
    assert sigmoid(0.0, 1.0) == 0.5
    rng = np.random.default_rng(0)
    for x in rng.normal(scale=5.0, size=50):
        assert sigmoid(x, 1.0) + sigmoid(-x, 1.0) == pytest.approx(1.0, abs=1e-15)


def test_sigmoid_temperature():
    # sigma(2 / 2) = sigma(1), high-precision reference
    assert sigmoid(2.0, 2.0) == pytest.approx(0.73105857863000488, abs=1e-12)


def test_sigmoid_monotone_and_finite():
    x = np.linspace(-1e4, 1e4, 2001)
    y = sigmoid(x, 1.0)
    assert np.all(np.isfinite(y))
    assert np.all(np.diff(y) >= 0)


def test_sigmoid_rejects_bad_temp():
    with pytest.raises(ValueError):
        sigmoid(1.0, 0.0)


def test_cross_entropy_values():
    assert cross_entropy(1.0, 0.5) == pytest.approx(LOG2, abs=1e-15)
    assert cross_entropy(0.0, 0.5) == pytest.approx(LOG2, abs=1e-15)
    # high-precision evaluation of -0.3 log 0.7 - 0.7 log 0.3
    assert cross_entropy(0.3, 0.7) == pytest.approx(0.94978344620977491, abs=1e-12)


def test_cross_entropy_minimal_at_matching_prediction():
    rng = np.random.default_rng(1)
    for p in rng.uniform(0.05, 0.95, size=20):
        base = cross_entropy(p, p)
        for q in rng.uniform(0.01, 0.99, size=20):
            assert cross_entropy(p, q) >= base - 1e-12


def test_cross_entropy_clipping_no_inf():
    assert np.isfinite(cross_entropy(1.0, 0.0))
    assert np.isfinite(cross_entropy(0.0, 1.0))
    x = np.linspace(-1e4, 1e4, 101)
    assert np.all(np.isfinite(cross_entropy(1.0, sigmoid(x))))


def test_cross_entropy_rejects_nan():
    with pytest.raises(ValueError):
        cross_entropy(float("nan"), 0.5)
    with pytest.raises(ValueError):
        cross_entropy(0.5, float("nan"))


def test_smooth_label():
    assert smooth_label(1, 0.0) == 1.0
    assert smooth_label(0, 0.1) == pytest.approx(0.1)
    assert smooth_label(1, 0.25) == pytest.approx(0.75)
    with pytest.raises(ValueError):
        smooth_label(1, 0.5)
    with pytest.raises(ValueError):
        smooth_label(0, -0.01)


def _random_tuples(n, seed):
    rng = np.random.default_rng(seed)
    for _ in range(n):
        yield (
            float(rng.integers(0, 2)),
            float(rng.normal(scale=3.0)),
            float(rng.normal(scale=3.0)),
            ModelParams(
                alpha=1.0, delta=1.0, rho=0.5,
                chi=float(rng.uniform(0, 1)), temp=float(rng.uniform(0.5, 4.0)),
            ),
        )


def test_kd_loss_chi_zero_reduces_to_cross_entropy_exactly():
    for y, p, s, params in _random_tuples(100, seed=2):
        params0 = params.replace(chi=0.0)
        assert kd_loss(y, p, s, params0) == cross_entropy(y, sigmoid(s))


def test_kd_loss_matched_outputs_is_minimum():
    params = ModelParams(alpha=1.0, delta=1.0, rho=0.5, chi=1.0, temp=1.0)
    p = 0.7
    matched = kd_loss(1.0, p, p, params)
    assert matched == pytest.approx(cross_entropy(sigmoid(p), sigmoid(p)), abs=1e-15)
    for s in np.linspace(-3, 3, 41):
        assert kd_loss(1.0, p, s, params) >= matched - 1e-12


def test_kd_loss_mixed_example():
    # 0.5 H(1, sigma(-0.2)) + 0.5 H(sigma(0.4), sigma(-0.2)), high precision
    params = ModelParams(alpha=1.0, delta=1.0, rho=0.5, chi=0.5, temp=1.0)
    assert kd_loss(1.0, 0.4, -0.2, params) == pytest.approx(
        0.75800763539283704, abs=1e-12
    )


def test_kd_loss_convex_in_student_preactivation():
    rng = np.random.default_rng(3)
    for y, p, _, params in _random_tuples(100, seed=4):
        s1, s2 = rng.normal(scale=4.0, size=2)
        mid = kd_loss(y, p, 0.5 * (s1 + s2), params)
        avg = 0.5 * (kd_loss(y, p, s1, params) + kd_loss(y, p, s2, params))
        assert mid <= avg + 1e-12


def test_kd_loss_grad_matches_finite_differences():
    step = 1e-5
    for y, p, s, params in _random_tuples(100, seed=5):
        grad = kd_loss_grad(y, p, s, params)
        fd = (kd_loss(y, p, s + step, params) - kd_loss(y, p, s - step, params)) / (
            2 * step
        )
        assert grad == pytest.approx(fd, rel=1e-6, abs=1e-9)


def test_smoothed_labels_never_stored_only_transformed():
    # transform is pure: applying twice with eps=0 is the identity
    y = np.array([0, 1, 1, 0])
    assert np.array_equal(smooth_label(smooth_label(y, 0.0), 0.0), y.astype(float))
