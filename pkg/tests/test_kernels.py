from __future__ import annotations

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from reliefmatch import kernels
from reliefmatch.kernels import numpy_backend


def brute_levenshtein(a: str, b: str) -> int:
    """Textbook DP, independent of both shipped backends."""
    m, n = len(a), len(b)
    d = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        d[i][0] = i
    for j in range(n + 1):
        d[0][j] = j
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            cost = 0 if a[i - 1] == b[j - 1] else 1
            d[i][j] = min(d[i - 1][j] + 1, d[i][j - 1] + 1, d[i - 1][j - 1] + cost)
    return d[m][n]


@pytest.mark.parametrize(
    "a,b,expected",
    [
        ("", "", 0),
        ("a", "", 1),
        ("kitten", "sitting", 3),
        ("helicopter", "helicopters", 1),
        ("tents", "tent", 1),
    ],
)
def test_levenshtein_known_values(a, b, expected):
    assert kernels.levenshtein(a, b) == expected


@given(st.text(alphabet="abcde", max_size=12), st.text(alphabet="abcde", max_size=12))
@settings(max_examples=200)
def test_levenshtein_matches_brute_force(a, b):
    assert kernels.levenshtein(a, b) == brute_levenshtein(a, b)


@given(st.text(alphabet="abcdef", max_size=10), st.text(alphabet="abcdef", max_size=10))
@settings(max_examples=100)
def test_backends_agree(a, b):
    active = kernels.levenshtein(a, b)
    fallback = (
        numpy_backend.levenshtein_codes(kernels.encode(a), kernels.encode(b))
        if a and b
        else max(len(a), len(b)) if (a or b) else 0
    )
    assert active == fallback == brute_levenshtein(a, b)


def test_similarity_normalization():
    assert kernels.similarity("helicopter", "helicopters") == pytest.approx(1 - 1 / 11)
    assert kernels.similarity("", "") == 1.0
    assert kernels.similarity("abc", "abc") == 1.0


def test_logreg_backends_match():
    rng = np.random.default_rng(7)
    x = (rng.random((40, 12)) > 0.5).astype(np.float64)
    y = np.zeros((40, 3))
    y[np.arange(40), rng.integers(0, 3, 40)] = 1.0
    w1, b1, l1 = kernels.logreg_fit(x, y, 0.3, 1e-3, 50)
    w2, b2, l2 = numpy_backend.logreg_fit_impl(x, y, 0.3, 1e-3, 50)
    np.testing.assert_allclose(w1, w2, atol=1e-10)
    np.testing.assert_allclose(b1, b2, atol=1e-10)
    np.testing.assert_allclose(l1, l2, atol=1e-10)


def test_logreg_loss_decreases():
    rng = np.random.default_rng(3)
    x = (rng.random((30, 8)) > 0.5).astype(np.float64)
    y = np.zeros((30, 3))
    y[np.arange(30), rng.integers(0, 3, 30)] = 1.0
    _, _, losses = kernels.logreg_fit(x, y, 0.5, 1e-4, 80)
    assert np.all(np.diff(losses) <= 1e-9)


def test_env_flag_selects_backend(tmp_path):
    import subprocess
    import sys

    code = "import reliefmatch.kernels as k; print(k.BACKEND)"
    out = subprocess.run(
        [sys.executable, "-c", code],
        env={"PATH": "/usr/bin:/bin", "RELIEFMATCH_NUMBA": "0"},
        capture_output=True,
        text=True,
        check=True,
    )
    assert out.stdout.strip() == "numpy"
