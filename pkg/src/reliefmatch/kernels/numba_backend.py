"""Numba-jitted implementations of the hot kernels.

Kept in explicit-loop form: numba compiles these to tight machine code,
and `cache=True` persists the compilation across processes.
"""

from __future__ import annotations

import numpy as np
from numba import njit


@njit(cache=True)
def levenshtein_codes(a: np.ndarray, b: np.ndarray) -> int:
    m = a.shape[0]
    n = b.shape[0]
    prev = np.arange(n + 1, dtype=np.int64)
    cur = np.empty(n + 1, dtype=np.int64)
    for i in range(1, m + 1):
        cur[0] = i
        ca = a[i - 1]
        for j in range(1, n + 1):
            cost = 0 if b[j - 1] == ca else 1
            best = prev[j - 1] + cost
            if prev[j] + 1 < best:
                best = prev[j] + 1
            if cur[j - 1] + 1 < best:
                best = cur[j - 1] + 1
            cur[j] = best
        prev, cur = cur, prev
    return prev[n]


@njit(cache=True)
def logreg_loss_grad_impl(w, b, x, y, l2):
    n, d = x.shape
    k = w.shape[0]
    p = x @ w.T
    loss = 0.0
    for i in range(n):
        zmax = p[i, 0] + b[0]
        for c in range(k):
            p[i, c] += b[c]
            if p[i, c] > zmax:
                zmax = p[i, c]
        s = 0.0
        for c in range(k):
            p[i, c] = np.exp(p[i, c] - zmax)
            s += p[i, c]
        for c in range(k):
            p[i, c] /= s
            if y[i, c] != 0.0:
                loss -= y[i, c] * np.log(p[i, c] + 1e-300)
    loss /= n
    for c in range(k):
        for j in range(d):
            loss += 0.5 * l2 * w[c, j] * w[c, j]
    g = (p - y) / n
    gw = g.T @ x + l2 * w
    gb = np.zeros(k, dtype=np.float64)
    for i in range(n):
        for c in range(k):
            gb[c] += g[i, c]
    return loss, gw, gb


@njit(cache=True)
def logreg_fit_impl(x, y, lr, l2, epochs):
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
