"""Pure-numpy implementations of the hot kernels."""

from __future__ import annotations

import numpy as np


def levenshtein_codes(a: np.ndarray, b: np.ndarray) -> int:
    """Row-vectorized edit distance.

    The insertion recurrence cur[j] = min(cur[j], cur[j-1] + 1) is a
    prefix scan: cur[j] = min_k<=j (tmp[k] + (j - k)), computed with a
    cumulative minimum over tmp[k] - k.
    """
    n = len(b)
    prev = np.arange(n + 1, dtype=np.int64)
    idx = np.arange(n + 1, dtype=np.int64)
    for i, ca in enumerate(a, start=1):
        sub = prev[:-1] + (b != ca)
        tmp = np.empty(n + 1, dtype=np.int64)
        tmp[0] = i
        tmp[1:] = np.minimum(prev[1:] + 1, sub)
        prev = np.minimum.accumulate(tmp - idx) + idx
    return int(prev[n])


def _softmax_rows(z: np.ndarray) -> np.ndarray:
    z = z - z.max(axis=1, keepdims=True)
    e = np.exp(z)
    return e / e.sum(axis=1, keepdims=True)


def logreg_loss_grad_impl(
    w: np.ndarray, b: np.ndarray, x: np.ndarray, y: np.ndarray, l2: float
) -> tuple[float, np.ndarray, np.ndarray]:
    n = x.shape[0]
    p = _softmax_rows(x @ w.T + b)
    eps = 1e-300  # guards log against exact zeros
    loss = -np.sum(y * np.log(p + eps)) / n + 0.5 * l2 * np.sum(w * w)
    g = (p - y) / n
    gw = g.T @ x + l2 * w
    gb = g.sum(axis=0)
    return float(loss), gw, gb


def logreg_fit_impl(
    x: np.ndarray, y: np.ndarray, lr: float, l2: float, epochs: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    d = x.shape[1]
    k = y.shape[1]
    w = np.zeros((k, d), dtype=np.float64)
    b = np.zeros(k, dtype=np.float64)
    losses = np.zeros(epochs, dtype=np.float64)
    for ep in range(epochs):
        loss, gw, gb = logreg_loss_grad_impl(w, b, x, y, l2)
        losses[ep] = loss
        w -= lr * gw
        b -= lr * gb
    return w, b, losses
