"""Numeric hot kernels with a numba fast path and a pure-numpy fallback.

The two inner loops that dominate batch runtime live here:

  * Levenshtein distance (resource-candidate similarity verification
    scans every candidate against the whole lexicon), and
  * the softmax-regression epoch loop used to fit linear classifiers.

The numba backend is used when importable; set ``RELIEFMATCH_NUMBA=0``
(or ``off``/``false``/``no``) to force the numpy fallback. See
``benchmarks/bench_kernels.py`` for a timing comparison.
"""

from __future__ import annotations

import os

import numpy as np


def _want_numba() -> bool:
    flag = os.environ.get("RELIEFMATCH_NUMBA", "").strip().lower()
    return flag not in {"0", "off", "false", "no"}


if _want_numba():
    try:
        from . import numba_backend as _backend

        BACKEND = "numba"
    except ImportError:
        from . import numpy_backend as _backend

        BACKEND = "numpy"
else:
    from . import numpy_backend as _backend

    BACKEND = "numpy"


def encode(s: str) -> np.ndarray:
    """Unicode string to int32 codepoint array."""
    return np.array([ord(c) for c in s], dtype=np.int32)


def levenshtein(a: str, b: str) -> int:
    """Edit distance (insert/delete/substitute, unit costs)."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    return int(_backend.levenshtein_codes(encode(a), encode(b)))


def similarity(a: str, b: str) -> float:
    """Normalized edit similarity: 1 - distance / max(len)."""
    if not a and not b:
        return 1.0
    return 1.0 - levenshtein(a, b) / max(len(a), len(b))


def logreg_fit(
    x: np.ndarray,
    y_onehot: np.ndarray,
    lr: float,
    l2: float,
    epochs: int,
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Fit softmax regression by full-batch gradient descent.

    Starts from zero weights; returns (weights [k, d], bias [k],
    per-epoch losses measured before each update). The L2 penalty
    applies to weights only, so the bias can absorb class priors.
    """
    x = np.ascontiguousarray(x, dtype=np.float64)
    y_onehot = np.ascontiguousarray(y_onehot, dtype=np.float64)
    if x.shape[0] != y_onehot.shape[0]:
        raise ValueError("x and y_onehot row counts differ")
    return _backend.logreg_fit_impl(x, y_onehot, float(lr), float(l2), int(epochs))


def logreg_loss_grad(
    w: np.ndarray,
    b: np.ndarray,
    x: np.ndarray,
    y_onehot: np.ndarray,
    l2: float,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Mean cross-entropy loss (+ 0.5 * l2 * ||w||^2) and its gradients."""
    loss, gw, gb = _backend.logreg_loss_grad_impl(
        np.ascontiguousarray(w, dtype=np.float64),
        np.ascontiguousarray(b, dtype=np.float64),
        np.ascontiguousarray(x, dtype=np.float64),
        np.ascontiguousarray(y_onehot, dtype=np.float64),
        float(l2),
    )
    return float(loss), gw, gb


def warmup() -> None:
    """Trigger JIT compilation so first real use is not billed for it."""
    levenshtein("warm", "worm")
    x = np.eye(3, dtype=np.float64)
    logreg_fit(x, x.copy(), 0.1, 0.0, 1)
