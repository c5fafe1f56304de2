"""Single-qubit unitary channels as sign-canonical unit quaternions.

A channel is the projective class of U = aI + ibZ − icY + idX, i.e. the
matrix [[a+ib, −c+id], [c+id, a−ib]].  The diamond distance between two
such channels has the closed form √(1 − ⟨q_u, q_v⟩²).
"""

from __future__ import annotations

import math
from typing import Sequence, Union

import numpy as np

from .rings import ZRoot2

CANON_EPS = 1e-12


def _canonical(q: np.ndarray) -> np.ndarray:
    for x in q:
        if abs(x) > CANON_EPS:
            return -q if x < 0 else q
    raise ValueError("zero quaternion cannot be canonicalized")


class UnitaryChannel:
    """Projective SU(2) element; quaternion (a, b, c, d) in float64."""

    __slots__ = ("q",)

    def __init__(self, q: Sequence[float], *, _trusted: bool = False) -> None:
        arr = np.asarray(q, dtype=np.float64)
        if arr.shape != (4,):
            raise ValueError("a channel needs exactly 4 quaternion coordinates")
        if not _trusted:
            n = float(np.dot(arr, arr))
            if abs(n - 1.0) > 1e-9:
                if n < 1e-30:
                    raise ValueError("zero quaternion")
                arr = arr / math.sqrt(n)
            arr = _canonical(arr)
        arr.flags.writeable = False
        object.__setattr__(self, "q", arr)

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("UnitaryChannel is immutable")

    def __repr__(self) -> str:
        return f"UnitaryChannel({tuple(self.q)!r})"

    def __eq__(self, other) -> bool:
        if isinstance(other, UnitaryChannel):
            return bool(np.array_equal(self.q, other.q))
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.q.tobytes())

    def matrix(self) -> np.ndarray:
        a, b, c, d = self.q
        return np.array([[a + 1j * b, -c + 1j * d], [c + 1j * d, a - 1j * b]])

    def is_canonical(self, tol: float = 1e-12) -> bool:
        n = float(np.dot(self.q, self.q))
        if abs(n - 1.0) > tol:
            return False
        for x in self.q:
            if abs(x) > CANON_EPS:
                return x > 0
        return False


IDENTITY = UnitaryChannel([1.0, 0.0, 0.0, 0.0])


def quat_mult(q1: np.ndarray, q2: np.ndarray) -> np.ndarray:
    """Quaternion product matching 2×2 matrix multiplication U1·U2."""
    a1, b1, c1, d1 = q1
    a2, b2, c2, d2 = q2
    return np.array(
        [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 - c1 * d2 + d1 * c2,
            a1 * c2 + c1 * a2 + b1 * d2 - d1 * b2,
            a1 * d2 + d1 * a2 - b1 * c2 + c1 * b2,
        ]
    )


def quat_conj(q: np.ndarray) -> np.ndarray:
    return np.array([q[0], -q[1], -q[2], -q[3]])


def compose(u: UnitaryChannel, v: UnitaryChannel) -> UnitaryChannel:
    """Channel of the product U·V."""
    return UnitaryChannel(quat_mult(u.q, v.q))


def inverse(u: UnitaryChannel) -> UnitaryChannel:
    return UnitaryChannel(quat_conj(u.q))


def diamond_distance(u: UnitaryChannel, v: UnitaryChannel) -> float:
    """√(1 − (|tr U†V|/2)²) = √(1 − ⟨q_u, q_v⟩²), in [0, 1].

    Identical canonical representations give exactly 0; otherwise the closed
    form carries the usual √ε float floor near zero.
    """
    if np.array_equal(u.q, v.q):
        return 0.0
    ip = float(np.dot(u.q, v.q))
    return math.sqrt(max(0.0, 1.0 - min(1.0, ip * ip)))


def overlap_to_distance(overlap_sq: float) -> float:
    """Distance from the squared trace overlap (|tr U†V|/2)²."""
    return math.sqrt(max(0.0, 1.0 - min(1.0, overlap_sq)))


def haar_sample(rng: np.random.Generator) -> UnitaryChannel:
    """Uniform channel: normalized 4-dim Gaussian, sign-canonicalized."""
    while True:
        g = rng.normal(size=4)
        n = float(np.dot(g, g))
        if n > 1e-12:
            return UnitaryChannel(g / math.sqrt(n))


def rz(theta: float) -> UnitaryChannel:
    """Channel of R_z(θ) = exp(−iθZ/2)."""
    return UnitaryChannel([math.cos(theta / 2), -math.sin(theta / 2), 0.0, 0.0])


def rx(theta: float) -> UnitaryChannel:
    return UnitaryChannel([math.cos(theta / 2), 0.0, 0.0, -math.sin(theta / 2)])


class QuaternionPoint:
    """Integer quaternion (α, β, γ, δ) over Z or Z[√2] with α²+β²+γ²+δ² = n."""

    __slots__ = ("coords", "n")

    def __init__(self, coords: Sequence[Union[int, ZRoot2]], n: Union[int, ZRoot2]) -> None:
        cs = tuple(ZRoot2.coerce(c) for c in coords)
        if len(cs) != 4:
            raise ValueError("a quaternion point needs 4 coordinates")
        object.__setattr__(self, "coords", cs)
        object.__setattr__(self, "n", ZRoot2.coerce(n))
        self.validate()

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("QuaternionPoint is immutable")

    def validate(self) -> None:
        total = ZRoot2(0)
        for c in self.coords:
            total = total + c * c
        if total != self.n:
            raise ValueError(f"point {self} does not satisfy its sphere equation")
        if self.n.sign() <= 0 or self.n.conj().sign() <= 0:
            raise ValueError("sphere radius must be totally positive")

    def is_integer(self) -> bool:
        return all(c.b == 0 for c in self.coords)

    def __repr__(self) -> str:
        return f"QuaternionPoint({[str(c) for c in self.coords]}, n={self.n})"

    def __eq__(self, other) -> bool:
        if isinstance(other, QuaternionPoint):
            return self.coords == other.coords and self.n == other.n
        return NotImplemented

    def __hash__(self) -> int:
        return hash((self.coords, self.n))


def channel_from_point(p: QuaternionPoint) -> UnitaryChannel:
    """U(α,β,γ,δ) = (1/√n)·[[α+iβ, −γ+iδ], [γ+iδ, α−iβ]] as a channel."""
    scale = 1.0 / math.sqrt(p.n.to_float())
    return UnitaryChannel([c.to_float() * scale for c in p.coords])


# ---------------------------------------------------------------------------
# text form


def format_channel(u: UnitaryChannel) -> str:
    a, b, c, d = u.q
    return f"q:({a:.17g},{b:.17g},{c:.17g},{d:.17g})"


def parse_channel(s: str) -> UnitaryChannel:
    text = s.strip()
    if not (text.startswith("q:(") and text.endswith(")")):
        raise ValueError(f"malformed channel literal: {s!r}")
    parts = text[3:-1].split(",")
    if len(parts) != 4:
        raise ValueError(f"malformed channel literal: {s!r}")
    return UnitaryChannel([float(p) for p in parts])
