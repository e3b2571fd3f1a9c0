"""Adam update semantics and convergence."""

import numpy as np
import pytest

from spantag.nn.optim import Adam, AdamConfig
from spantag.nn.params import ParamStore


def single_param_store(value):
    store = ParamStore()
    store.add("w", np.array(value, dtype=np.float64))
    return store


class TestAdam:
    def test_zero_gradient_no_decay_leaves_parameters(self):
        store = single_param_store([1.5, -2.0])
        Adam(AdamConfig(lr=0.1)).step(store)
        assert np.array_equal(store.value("w"), [1.5, -2.0])

    def test_decoupled_decay_shrinks_by_exact_factor(self):
        store = single_param_store([1.5, -2.0])
        cfg = AdamConfig(lr=0.1, l2_beta=0.01)
        Adam(cfg).step(store)
        factor = 1.0 - cfg.lr * cfg.l2_beta
        assert np.allclose(store.value("w"), np.array([1.5, -2.0]) * factor, atol=1e-15)

    def test_gradients_zeroed_after_step(self):
        store = single_param_store([1.0])
        store.accumulate("w", np.array([0.5]))
        Adam(AdamConfig()).step(store)
        assert np.array_equal(store.grad("w"), [0.0])

    def test_nan_gradient_names_parameter(self):
        store = single_param_store([1.0])
        store.accumulate("w", np.array([np.nan]))
        with pytest.raises(FloatingPointError, match="'w'"):
            Adam(AdamConfig()).step(store)

    def test_quadratic_bowl_converges(self):
        store = single_param_store([3.0])
        opt = Adam(AdamConfig(lr=0.1))
        for _ in range(500):
            w = store.value("w")
            store.accumulate("w", 2.0 * w)  # gradient of w^2
            opt.step(store)
        assert abs(float(store.value("w")[0])) < 1e-3
