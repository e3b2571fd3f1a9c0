"""Bidirectional LSTM layer built on the sequence kernels.

One direction runs left to right, the other over the reversed input;
per-token outputs are concatenated to shape (n, 2h). Initial states are
zero. Gate layout and recurrence live in ``spantag.kernels``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .. import kernels
from .ops import ensure_finite
from .params import ParamStore, xavier_init

GATES = 4  # input, forget, cell, output


@dataclass(frozen=True)
class BiLstmCache:
    x: np.ndarray
    fw: tuple[np.ndarray, ...]
    bw: tuple[np.ndarray, ...]


def init_bilstm(store: ParamStore, prefix: str, d_in: int, hidden: int, rng) -> None:
    """Register BiLSTM parameters. Biases start at zero except the forget
    gate, which starts at +1."""
    for direction in ("fw", "bw"):
        b = np.zeros(GATES * hidden)
        b[hidden : 2 * hidden] = 1.0
        store.add(f"{prefix}.{direction}.w_x", xavier_init(rng, d_in, GATES * hidden))
        store.add(f"{prefix}.{direction}.w_h", xavier_init(rng, hidden, GATES * hidden))
        store.add(f"{prefix}.{direction}.b", b)


def bilstm_forward(x: np.ndarray, store: ParamStore, prefix: str) -> tuple[np.ndarray, BiLstmCache]:
    if x.ndim != 2 or x.shape[0] < 1:
        raise ValueError(f"bilstm expects a non-empty (n, d) input, got {x.shape}")
    w_x_f = store.value(f"{prefix}.fw.w_x")
    if x.shape[1] != w_x_f.shape[0]:
        raise ValueError(
            f"bilstm input width {x.shape[1]} does not match parameters "
            f"({w_x_f.shape[0]})"
        )
    x_rev = np.ascontiguousarray(x[::-1])

    pre_f = x @ w_x_f + store.value(f"{prefix}.fw.b")
    fw = kernels.lstm_seq_forward(np.ascontiguousarray(pre_f), store.value(f"{prefix}.fw.w_h"))

    pre_b = x_rev @ store.value(f"{prefix}.bw.w_x") + store.value(f"{prefix}.bw.b")
    bw = kernels.lstm_seq_forward(np.ascontiguousarray(pre_b), store.value(f"{prefix}.bw.w_h"))

    out = np.concatenate([fw[0], bw[0][::-1]], axis=1)
    ensure_finite("bilstm output", out)
    return out, BiLstmCache(x=x, fw=fw, bw=bw)


def bilstm_backward(d_out: np.ndarray, cache: BiLstmCache, store: ParamStore, prefix: str) -> np.ndarray:
    """Accumulate parameter gradients into the store; return d_input."""
    hidden = d_out.shape[1] // 2
    d_fw = np.ascontiguousarray(d_out[:, :hidden])
    d_bw = np.ascontiguousarray(d_out[::-1, hidden:])

    x = cache.x
    x_rev = np.ascontiguousarray(x[::-1])

    dpre_f, dw_h_f = kernels.lstm_seq_backward(d_fw, store.value(f"{prefix}.fw.w_h"), *cache.fw)
    dpre_b, dw_h_b = kernels.lstm_seq_backward(d_bw, store.value(f"{prefix}.bw.w_h"), *cache.bw)

    store.accumulate(f"{prefix}.fw.w_x", x.T @ dpre_f)
    store.accumulate(f"{prefix}.fw.w_h", dw_h_f)
    store.accumulate(f"{prefix}.fw.b", dpre_f.sum(axis=0))
    store.accumulate(f"{prefix}.bw.w_x", x_rev.T @ dpre_b)
    store.accumulate(f"{prefix}.bw.w_h", dw_h_b)
    store.accumulate(f"{prefix}.bw.b", dpre_b.sum(axis=0))

    d_x = dpre_f @ store.value(f"{prefix}.fw.w_x").T
    d_x += (dpre_b @ store.value(f"{prefix}.bw.w_x").T)[::-1]
    return d_x
