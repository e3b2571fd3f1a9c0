"""Pure-numpy LSTM sequence kernels.

Reference implementation of the single-direction recurrence used by the
BiLSTM layer. The compiled extension in ``_lstmc.pyx`` mirrors these
functions; either backend may be selected at import time.

Gate layout inside the width-4h axis is [input | forget | cell | output],
activations already applied in the returned ``gates`` cache. Initial
hidden and cell states are zero.
"""

import numpy as np


def _sigmoid(x):
    return 1.0 / (1.0 + np.exp(-x))


def lstm_seq_forward(pre, w_h):
    """Run the recurrence over ``pre`` = X @ W_x + b, shape (n, 4h).

    Returns (h_out, c, gates, c_tanh), each cached for the backward pass.
    """
    n, four_h = pre.shape
    h = four_h // 4
    h_out = np.empty((n, h))
    c = np.empty((n, h))
    gates = np.empty((n, four_h))
    c_tanh = np.empty((n, h))
    h_prev = np.zeros(h)
    c_prev = np.zeros(h)
    for t in range(n):
        a = pre[t] + h_prev @ w_h
        i = _sigmoid(a[:h])
        f = _sigmoid(a[h : 2 * h])
        g = np.tanh(a[2 * h : 3 * h])
        o = _sigmoid(a[3 * h :])
        c_t = f * c_prev + i * g
        tc = np.tanh(c_t)
        h_t = o * tc
        gates[t, :h] = i
        gates[t, h : 2 * h] = f
        gates[t, 2 * h : 3 * h] = g
        gates[t, 3 * h :] = o
        c[t] = c_t
        c_tanh[t] = tc
        h_out[t] = h_t
        h_prev, c_prev = h_t, c_t
    return h_out, c, gates, c_tanh


def lstm_seq_backward(dh_out, w_h, h_out, c, gates, c_tanh):
    """Backward pass for ``lstm_seq_forward``.

    ``dh_out`` holds the upstream gradient for every step's hidden output.
    Returns (dpre, dw_h); the caller maps dpre back onto X, W_x and b.
    """
    n, h = dh_out.shape
    dpre = np.empty((n, 4 * h))
    dw_h = np.zeros_like(w_h)
    dh_rec = np.zeros(h)
    dc_rec = np.zeros(h)
    for t in range(n - 1, -1, -1):
        i = gates[t, :h]
        f = gates[t, h : 2 * h]
        g = gates[t, 2 * h : 3 * h]
        o = gates[t, 3 * h :]
        tc = c_tanh[t]
        dh = dh_out[t] + dh_rec
        dc = dh * o * (1.0 - tc * tc) + dc_rec
        c_prev = c[t - 1] if t > 0 else np.zeros(h)
        da = np.empty(4 * h)
        da[:h] = dc * g * i * (1.0 - i)
        da[h : 2 * h] = dc * c_prev * f * (1.0 - f)
        da[2 * h : 3 * h] = dc * i * (1.0 - g * g)
        da[3 * h :] = dh * tc * o * (1.0 - o)
        dc_rec = dc * f
        dpre[t] = da
        if t > 0:
            dw_h += np.outer(h_out[t - 1], da)
        dh_rec = w_h @ da
    return dpre, dw_h
