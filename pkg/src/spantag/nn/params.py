"""Named parameter storage and deterministic initialization.

All tensors are float64. Random state comes from a counter-based Philox
generator so that a seed fully determines parameter values and batch
order, bit for bit, across runs.
"""

from __future__ import annotations

import numpy as np


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))


def split_rng(seed: int, n: int) -> list[np.random.Generator]:
    """Independent deterministic streams derived from one seed."""
    children = np.random.SeedSequence(seed).spawn(n)
    return [np.random.Generator(np.random.Philox(c)) for c in children]


class ParamStore:
    """Map from parameter name to (value, gradient accumulator)."""

    def __init__(self) -> None:
        self._values: dict[str, np.ndarray] = {}
        self._grads: dict[str, np.ndarray] = {}

    def add(self, name: str, value: np.ndarray) -> np.ndarray:
        if name in self._values:
            raise ValueError(f"duplicate parameter name {name!r}")
        value = np.asarray(value, dtype=np.float64)
        self._values[name] = value
        self._grads[name] = np.zeros_like(value)
        return value

    def value(self, name: str) -> np.ndarray:
        return self._values[name]

    def grad(self, name: str) -> np.ndarray:
        return self._grads[name]

    def accumulate(self, name: str, grad: np.ndarray) -> None:
        g = self._grads[name]
        if g.shape != np.shape(grad):
            raise ValueError(
                f"gradient shape {np.shape(grad)} does not match parameter "
                f"{name!r} of shape {g.shape}"
            )
        g += grad

    def zero_grads(self) -> None:
        for g in self._grads.values():
            g[...] = 0.0

    def names(self) -> list[str]:
        return sorted(self._values)

    def __contains__(self, name: str) -> bool:
        return name in self._values

    def n_parameters(self) -> int:
        return sum(v.size for v in self._values.values())


def uniform_init(rng: np.random.Generator, shape: tuple[int, ...], bound: float = 0.1) -> np.ndarray:
    return rng.uniform(-bound, bound, size=shape)


def xavier_init(rng: np.random.Generator, fan_in: int, fan_out: int) -> np.ndarray:
    bound = np.sqrt(6.0 / (fan_in + fan_out))
    return rng.uniform(-bound, bound, size=(fan_in, fan_out))
