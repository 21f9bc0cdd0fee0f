import math

import numpy as np
import pytest

from kdgmm import ModelParams, sample_dataset, sample_gmm


def test_shapes_and_rounding():
    p = ModelParams(alpha=2.0, delta=1.0, rho=0.5)
    data = sample_dataset(100, p, seed=7)
    assert data.n_samples == 200
    assert data.inputs.shape == (200, 100)
    assert data.labels.shape == (200,)
    assert data.signal.shape == (100,)
    assert set(np.unique(data.labels)) <= {0, 1}


def test_determinism_byte_identical():
    p = ModelParams(alpha=2.0, delta=1.0, rho=0.5)
    a = sample_dataset(100, p, seed=7)
    b = sample_dataset(100, p, seed=7)
    assert a.inputs.tobytes() == b.inputs.tobytes()
    assert a.labels.tobytes() == b.labels.tobytes()
    assert a.signal.tobytes() == b.signal.tobytes()
    c = sample_dataset(100, p, seed=8)
    assert c.inputs.tobytes() != a.inputs.tobytes()


def test_empty_dataset_error():
    p = ModelParams(alpha=0.001, delta=1.0, rho=0.5)
    with pytest.raises(ValueError, match="empty"):
        sample_dataset(100, p, seed=0)


def test_noiseless_rows_equal_signed_signal():
    data = sample_gmm(50, alpha=2.0, delta=0.0, rho=0.5, seed=3)
    spins = 2.0 * data.labels - 1.0
    expected = spins[:, None] * data.signal[None, :] / math.sqrt(50)
    assert np.allclose(data.inputs, expected, atol=0.0)


def test_gauge_fixed_signal():
    data = sample_gmm(64, alpha=1.0, delta=1.0, rho=0.5, seed=3, gauge=True)
    assert np.all(data.signal == 1.0)


def test_label_fraction_within_binomial_tolerance():
    rho = 0.2
    data = sample_gmm(200, alpha=50.0, delta=1.0, rho=rho, seed=11)
    m = data.n_samples
    frac = data.labels.mean()
    assert abs(frac - rho) <= 4.0 * math.sqrt(rho * (1 - rho) / m)


def test_mean_projection_concentrates_on_signal():
    # rows with y=1 project onto v/|v|^2 at scale 1/sqrt(N)
    n, rho = 100, 0.5
    data = sample_gmm(n, alpha=100.0, delta=1.0, rho=rho, seed=13)
    v = data.signal
    proj = data.inputs @ v / (v @ v)
    ones = data.labels == 1
    m1 = proj[ones].mean()
    expected = 1.0 / math.sqrt(n)
    n1 = ones.sum()
    stderr = 1.0 / math.sqrt((v @ v) * n1)  # noise variance delta=1
    assert m1 == pytest.approx(expected, abs=4 * stderr)
    m0 = proj[~ones].mean()
    assert m0 == pytest.approx(-expected, abs=4 * stderr)
