"""BiLSTM layer: structure, closed forms, gradients, backend parity."""

import numpy as np
import pytest

from gradcheck import assert_grads_close, numerical_grad
from spantag import kernels
from spantag.kernels import fallback
from spantag.nn.lstm import bilstm_backward, bilstm_forward, init_bilstm
from spantag.nn.params import ParamStore, make_rng


def build_store(d_in, hidden, seed=0):
    store = ParamStore()
    init_bilstm(store, "lstm", d_in, hidden, make_rng(seed))
    return store


class TestBiLstmForward:
    def test_single_token_concatenates_both_directions(self):
        store = build_store(4, 3)
        x = make_rng(1).standard_normal((1, 4))
        out, _ = bilstm_forward(x, store, "lstm")
        assert out.shape == (1, 6)
        # both directions see the same single input but use different
        # parameters, so halves generally differ
        assert not np.allclose(out[0, :3], out[0, 3:])

    def test_zero_parameters_give_zero_outputs(self):
        # with all weights and biases zero the cell input g = tanh(0) = 0,
        # so c stays 0 and h = sigmoid(0) * tanh(0) = 0 at every step
        store = ParamStore()
        for d in ("fw", "bw"):
            store.add(f"lstm.{d}.w_x", np.zeros((4, 12)))
            store.add(f"lstm.{d}.w_h", np.zeros((3, 12)))
            store.add(f"lstm.{d}.b", np.zeros(12))
        x = make_rng(2).standard_normal((5, 4))
        out, _ = bilstm_forward(x, store, "lstm")
        assert np.array_equal(out, np.zeros((5, 6)))

    def test_width_mismatch_rejected(self):
        store = build_store(4, 3)
        with pytest.raises(ValueError, match="input width"):
            bilstm_forward(np.zeros((2, 5)), store, "lstm")


class TestBiLstmGradients:
    def test_gradients_match_finite_differences(self):
        rng = np.random.default_rng(4)
        store = build_store(4, 3, seed=7)
        x = rng.standard_normal((3, 4))
        r = rng.standard_normal((3, 6))

        def loss():
            out, _ = bilstm_forward(x, store, "lstm")
            return float((out * r).sum())

        out, cache = bilstm_forward(x, store, "lstm")
        d_x = bilstm_backward(r, cache, store, "lstm")
        assert_grads_close(d_x, numerical_grad(loss, x), label="bilstm d_x")
        for name in store.names():
            assert_grads_close(
                store.grad(name), numerical_grad(loss, store.value(name)), label=name
            )

    def test_gradients_on_random_shapes(self):
        rng = np.random.default_rng(5)
        for trial in range(5):
            n = int(rng.integers(1, 5))
            d_in = int(rng.integers(1, 5))
            hidden = int(rng.integers(1, 4))
            store = build_store(d_in, hidden, seed=trial + 10)
            x = rng.standard_normal((n, d_in))
            r = rng.standard_normal((n, 2 * hidden))

            def loss():
                out, _ = bilstm_forward(x, store, "lstm")
                return float((out * r).sum())

            _, cache = bilstm_forward(x, store, "lstm")
            store.zero_grads()
            d_x = bilstm_backward(r, cache, store, "lstm")
            assert_grads_close(d_x, numerical_grad(loss, x), label=f"d_x trial {trial}")
            for name in store.names():
                assert_grads_close(
                    store.grad(name),
                    numerical_grad(loss, store.value(name)),
                    label=f"{name} trial {trial}",
                )


@pytest.mark.skipif(kernels.BACKEND != "compiled", reason="compiled kernels unavailable")
class TestBackendParity:
    def test_forward_and_backward_agree_with_fallback(self):
        rng = np.random.default_rng(6)
        for _ in range(20):
            n = int(rng.integers(1, 8))
            h = int(rng.integers(1, 6))
            pre = rng.standard_normal((n, 4 * h))
            w_h = rng.standard_normal((h, 4 * h))
            got = kernels.lstm_seq_forward(pre, w_h)
            want = fallback.lstm_seq_forward(pre, w_h)
            for g, w in zip(got, want):
                np.testing.assert_allclose(g, w, rtol=1e-12, atol=1e-13)
            d_h = rng.standard_normal((n, h))
            got_b = kernels.lstm_seq_backward(d_h, w_h, *got)
            want_b = fallback.lstm_seq_backward(d_h, w_h, *want)
            for g, w in zip(got_b, want_b):
                np.testing.assert_allclose(g, w, rtol=1e-12, atol=1e-13)
