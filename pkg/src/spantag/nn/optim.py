"""Adam optimizer with decoupled L2 regularization."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .params import ParamStore


@dataclass(frozen=True)
class AdamConfig:
    lr: float = 1e-3
    beta1: float = 0.9
    beta2: float = 0.999
    eps: float = 1e-8
    l2_beta: float = 0.0  # decoupled weight decay coefficient

    def __post_init__(self) -> None:
        if self.lr <= 0 or not (0 <= self.beta1 < 1) or not (0 <= self.beta2 < 1):
            raise ValueError("invalid Adam configuration")
        if self.l2_beta < 0:
            raise ValueError("l2_beta must be >= 0")


class Adam:
    def __init__(self, config: AdamConfig) -> None:
        self.config = config
        self._m: dict[str, np.ndarray] = {}
        self._v: dict[str, np.ndarray] = {}
        self._t = 0

    def step(self, store: ParamStore) -> None:
        """Apply one update from the accumulated gradients, then zero them.

        Decay is decoupled: p <- p - lr * m_hat / (sqrt(v_hat) + eps)
        followed by p <- p * (1 - lr * l2_beta).
        """
        cfg = self.config
        self._t += 1
        t = self._t
        for name in store.names():
            g = store.grad(name)
            if not np.all(np.isfinite(g)):
                raise FloatingPointError(f"non-finite gradient for parameter {name!r}")
            if name not in self._m:
                self._m[name] = np.zeros_like(g)
                self._v[name] = np.zeros_like(g)
            m = self._m[name]
            v = self._v[name]
            m *= cfg.beta1
            m += (1.0 - cfg.beta1) * g
            v *= cfg.beta2
            v += (1.0 - cfg.beta2) * g * g
            m_hat = m / (1.0 - cfg.beta1**t)
            v_hat = v / (1.0 - cfg.beta2**t)
            p = store.value(name)
            p -= cfg.lr * m_hat / (np.sqrt(v_hat) + cfg.eps)
            if cfg.l2_beta:
                p *= 1.0 - cfg.lr * cfg.l2_beta
        store.zero_grads()
