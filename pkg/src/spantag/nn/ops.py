"""Dense ops with exact analytic gradients: fully connected layer,
embedding lookup, mean pooling, and the two weighted cross-entropy
losses. Forward passes guard against non-finite values."""

from __future__ import annotations

import numpy as np

DEFAULT_LOGIT_CLAMP = 30.0


def ensure_finite(name: str, arr: np.ndarray) -> np.ndarray:
    if not np.all(np.isfinite(arr)):
        raise FloatingPointError(f"non-finite values in {name}")
    return arr


def sigmoid(x):
    return 1.0 / (1.0 + np.exp(-np.asarray(x, dtype=np.float64)))


def fc_forward(x: np.ndarray, w: np.ndarray, b: np.ndarray) -> np.ndarray:
    """y = x @ w + b for x of shape (n, d), w (d, k), b (k,)."""
    if x.ndim != 2 or w.ndim != 2 or x.shape[1] != w.shape[0] or b.shape != (w.shape[1],):
        raise ValueError(
            f"fc shape mismatch: x{x.shape} w{w.shape} b{b.shape}"
        )
    return ensure_finite("fc output", x @ w + b)


def fc_backward(d_y: np.ndarray, x: np.ndarray, w: np.ndarray):
    """Gradients of y = x @ w + b w.r.t. x, w, b."""
    d_x = d_y @ w.T
    d_w = x.T @ d_y
    d_b = d_y.sum(axis=0)
    return d_x, d_w, d_b


def embedding_lookup(ids: np.ndarray, table: np.ndarray) -> np.ndarray:
    ids = np.asarray(ids)
    if ids.size and (ids.min() < 0 or ids.max() >= table.shape[0]):
        raise ValueError(
            f"embedding id out of range [0, {table.shape[0]}): "
            f"min={ids.min()} max={ids.max()}"
        )
    return table[ids]


def embedding_backward(d_out: np.ndarray, ids: np.ndarray, table_shape: tuple[int, int]) -> np.ndarray:
    """Scatter-add row gradients; repeated ids accumulate."""
    grad = np.zeros(table_shape)
    np.add.at(grad, np.asarray(ids), d_out)
    return grad


def mean_pool(x: np.ndarray) -> np.ndarray:
    if x.ndim != 2 or x.shape[0] < 1:
        raise ValueError(f"mean_pool expects a non-empty (n, d) matrix, got {x.shape}")
    return x.mean(axis=0)


def mean_pool_backward(d_out: np.ndarray, n: int) -> np.ndarray:
    return np.tile(d_out / n, (n, 1))


def sigmoid_bce(logit: float, target: int, weight: float = 1.0,
                clamp: float = DEFAULT_LOGIT_CLAMP) -> float:
    """Weighted binary cross entropy on a single logit.

    Computed as weight * (softplus(z) - target * z) with the logit clamped
    to [-clamp, clamp] for stability.
    """
    z = float(np.clip(logit, -clamp, clamp))
    loss = weight * (np.logaddexp(0.0, z) - target * z)
    return float(ensure_finite("sigmoid_bce", np.asarray(loss)))


def sigmoid_bce_grad(logit: float, target: int, weight: float = 1.0,
                     clamp: float = DEFAULT_LOGIT_CLAMP) -> float:
    if abs(logit) >= clamp:
        return 0.0  # clamped region has zero slope
    return float(weight * (sigmoid(logit) - target))


def softmax_ce(logits: np.ndarray, target: int, class_weights: np.ndarray | None = None,
               clamp: float = DEFAULT_LOGIT_CLAMP) -> float:
    """Weighted softmax cross entropy; the weight of the gold class scales
    the per-sample loss."""
    z = np.clip(np.asarray(logits, dtype=np.float64), -clamp, clamp)
    shifted = z - z.max()
    log_probs = shifted - np.log(np.exp(shifted).sum())
    w = 1.0 if class_weights is None else float(class_weights[target])
    return float(ensure_finite("softmax_ce", np.asarray(-w * log_probs[target])))


def softmax_ce_grad(logits: np.ndarray, target: int, class_weights: np.ndarray | None = None,
                    clamp: float = DEFAULT_LOGIT_CLAMP) -> np.ndarray:
    z = np.asarray(logits, dtype=np.float64)
    inside = np.abs(z) < clamp
    zc = np.clip(z, -clamp, clamp)
    shifted = zc - zc.max()
    probs = np.exp(shifted)
    probs /= probs.sum()
    w = 1.0 if class_weights is None else float(class_weights[target])
    grad = w * probs
    grad[target] -= w
    return grad * inside
