"""Shared fixtures and independent oracles.

The oracles here deliberately avoid the package's exact-arithmetic path:
brute-force matrix products in complex float, nested-loop sphere
enumeration, and dense grid searches.
"""

from __future__ import annotations

import itertools
import math

import numpy as np
import pytest

SQRT2 = math.sqrt(2.0)

H_MAT = np.array([[1, 1], [1, -1]], dtype=complex) / SQRT2
S_MAT = np.array([[1, 0], [0, 1j]], dtype=complex)
T_MAT = np.array([[1, 0], [0, np.exp(1j * np.pi / 4)]], dtype=complex)
GATE_MATS = {"H": H_MAT, "S": S_MAT, "T": T_MAT}


def matrix_of_word(tokens) -> np.ndarray:
    """Plain numpy product of H/S/T tokens (no C<k> support)."""
    m = np.eye(2, dtype=complex)
    for tok in tokens:
        m = m @ GATE_MATS[tok]
    return m


def channel_key_of_matrix(m: np.ndarray, digits: int = 9) -> tuple:
    """Projective rounding key of a 2x2 unitary (phase and sign quotient)."""
    det = np.linalg.det(m)
    v = m / np.sqrt(det)
    q = np.array([v[0, 0].real, v[0, 0].imag, v[1, 0].real, v[1, 0].imag])
    for x in q:
        if abs(x) > 1e-9:
            if x < 0:
                q = -q
            break
    return tuple(np.round(q, digits))


def quat_of_matrix(m: np.ndarray) -> np.ndarray:
    det = np.linalg.det(m)
    v = m / np.sqrt(det)
    q = np.array([v[0, 0].real, v[0, 0].imag, v[1, 0].real, v[1, 0].imag])
    for x in q:
        if abs(x) > 1e-9:
            if x < 0:
                q = -q
            break
    return q


def bfs_ma_channels(t_max: int):
    """All Clifford+T channels reachable with at most t_max T gates, by
    brute-force product of MA words; returns {key: (t_count, tokens)}.

    Clifford tails are expanded as products of S/H words.
    """
    cliff_words = _clifford_words()
    out: dict[tuple, tuple[int, tuple[str, ...]]] = {}
    for t in range(t_max + 1):
        for tokens in _ma_words_exactly(t):
            base = matrix_of_word(tokens)
            for cw in cliff_words:
                m = base @ matrix_of_word(cw)
                key = channel_key_of_matrix(m)
                if key not in out:
                    out[key] = (t, tokens + tuple(cw))
    return out


def _ma_words_exactly(t: int):
    if t == 0:
        yield ()
        return
    for lead in (True, False):
        r = t - 1 if lead else t
        for pattern in itertools.product((("H", "T"), ("S", "H", "T")), repeat=r):
            tokens: tuple[str, ...] = ("T",) if lead else ()
            for chunk in pattern:
                tokens = tokens + chunk
            yield tokens


def _clifford_words():
    """24 distinct Clifford channels as S/H words, found by closure."""
    seen = {}
    queue = [()]
    while queue:
        w = queue.pop(0)
        key = channel_key_of_matrix(matrix_of_word(w))
        if key in seen:
            continue
        seen[key] = w
        for g in ("S", "H"):
            queue.append(w + (g,))
    assert len(seen) == 24
    return list(seen.values())


def four_square_oracle(n: int):
    """Nested-loop enumeration of integer 4-square representations of n."""
    sols = []
    b = int(math.isqrt(n))
    for a0 in range(-b, b + 1):
        for a1 in range(-b, b + 1):
            for a2 in range(-b, b + 1):
                for a3 in range(-b, b + 1):
                    if a0 * a0 + a1 * a1 + a2 * a2 + a3 * a3 == n:
                        sols.append((a0, a1, a2, a3))
    return sols


def root2_sphere_oracle(k: int):
    """Nested-loop enumeration of Z[√2]^4 points on the 2^k sphere."""
    from qsynth.rings import ZRoot2

    n = ZRoot2(2**k)
    amax = int(math.isqrt(2**k)) + 1
    bmax = int(math.isqrt(2 ** max(0, k - 1))) + 1
    coords = []
    for a in range(-amax, amax + 1):
        for b in range(-bmax, bmax + 1):
            c = ZRoot2(a, b)
            s = c * c
            if (n - s).sign() >= 0 and (n - s).conj().sign() >= 0:
                coords.append(c)
    sols = []
    for c0 in coords:
        for c1 in coords:
            s01 = c0 * c0 + c1 * c1
            if (n - s01).sign() < 0 or (n - s01).conj().sign() < 0:
                continue
            for c2 in coords:
                s012 = s01 + c2 * c2
                if (n - s012).sign() < 0 or (n - s012).conj().sign() < 0:
                    continue
                for c3 in coords:
                    if s012 + c3 * c3 == n:
                        sols.append((c0, c1, c2, c3))
    return sols


@pytest.fixture
def rng():
    return np.random.default_rng(20240817)
