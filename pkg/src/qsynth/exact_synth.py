"""Exact synthesis: recognizing synthesizable channels, canonical forms,
and exact G-counts for Clifford+T and Clifford+V_p.

Clifford+T channels are held as (1/√2^k)[[z, −w̄ζ^m], [w, z̄ζ^m]] with
z, w ∈ Z[ζ8]; Clifford+V_p channels as (1/(√p^k √2^c))[[z, −w̄i^m],
[w, z̄i^m]] with z, w ∈ Z[i].  Both are reduced so that k (and c) are the
least denominator exponents of the matrix.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Optional, Sequence, Union

from .rings import (
    QRoot2,
    ZI,
    ZOmega,
    ZRoot2,
    sqrt2_factor,
    unit_log,
    zroot2_gcd,
)
from .su2 import UnitaryChannel

SQRT2 = math.sqrt(2.0)


class NotUnitaryError(ValueError):
    """Exact unitarity check failed on an input matrix."""


# ---------------------------------------------------------------------------
# Clifford+T exact form


class TUnitary:
    """(1/√2^k)·[[z, −w̄ζ^m], [w, z̄ζ^m]] with |z|² + |w|² = 2^k, det = ζ8^m."""

    __slots__ = ("z", "w", "k", "m")

    def __init__(self, z: ZOmega, w: ZOmega, k: int, m: int) -> None:
        z, w = ZOmega.coerce(z), ZOmega.coerce(w)
        k, m = int(k), int(m) % 8
        if k < 0:
            raise ValueError("denominator exponent must be nonnegative")
        while k > 0 and z.divisible_sqrt2() and w.divisible_sqrt2():
            z, w, k = z.div_sqrt2(), w.div_sqrt2(), k - 1
        total = z.norm_sq() + w.norm_sq()
        if total != ZRoot2(2**k):
            raise NotUnitaryError(f"|z|²+|w|² = {total} ≠ 2^{k}")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "m", m)

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("TUnitary is immutable")

    def __repr__(self) -> str:
        return f"TUnitary(z={self.z!r}, w={self.w!r}, k={self.k}, m={self.m})"

    def mul(self, other: "TUnitary") -> "TUnitary":
        ph = self.z.conj().mul_zeta_pow(self.m), self.w.conj().mul_zeta_pow(self.m)
        z = self.z * other.z - ph[1] * other.w
        w = self.w * other.z + ph[0] * other.w
        return TUnitary(z, w, self.k + other.k, self.m + other.m)

    def inverse(self) -> "TUnitary":
        return TUnitary(
            self.z.conj(), -self.w.mul_zeta_pow(-self.m), self.k, -self.m
        )

    def channel_key(self) -> tuple:
        """Canonical key of the projective class (global ζ8 phases quotiented)."""
        best = None
        for j in range(8):
            cand = (
                self.k,
                self.z.mul_zeta_pow(j).coords(),
                self.w.mul_zeta_pow(j).coords(),
                (self.m + 2 * j) % 8,
            )
            if best is None or cand < best:
                best = cand
        return best

    def same_channel(self, other: "TUnitary") -> bool:
        return self.channel_key() == other.channel_key()

    def matrix(self):
        import numpy as np

        scale = SQRT2 ** (-self.k)
        ph = complex(math.cos(math.pi * self.m / 4), math.sin(math.pi * self.m / 4))
        z, w = self.z.to_complex(), self.w.to_complex()
        return np.array([[z, -w.conjugate() * ph], [w, z.conjugate() * ph]]) * scale

    def to_channel(self) -> UnitaryChannel:
        # divide out the det phase ζ8^m to land in SU(2), then read the quaternion
        half = complex(
            math.cos(math.pi * self.m / 8), -math.sin(math.pi * self.m / 8)
        )
        z = self.z.to_complex() * half
        w = self.w.to_complex() * half
        scale = SQRT2 ** (-self.k)
        return UnitaryChannel(
            [z.real * scale, z.imag * scale, w.real * scale, w.imag * scale]
        )

    def trace_overlap_sq(self) -> QRoot2:
        """Exact (|tr U|/2)² as an element of Q(√2)."""
        t = self.z + self.z.conj().mul_zeta_pow(self.m)
        n = t.norm_sq()
        scale = QRoot2(1) / QRoot2(2 ** (self.k + 2))
        return QRoot2(n.a, n.b) * scale


T_EXACT = TUnitary(ZOmega(1), ZOmega(0), 0, 1)
S_EXACT = TUnitary(ZOmega(1), ZOmega(0), 0, 2)
H_EXACT = TUnitary(ZOmega(1), ZOmega(1), 1, 4)
IDENTITY_T = TUnitary(ZOmega(1), ZOmega(0), 0, 0)


def exact_overlap_t(u: TUnitary, v: TUnitary) -> QRoot2:
    return u.inverse().mul(v).trace_overlap_sq()


# ---------------------------------------------------------------------------
# exact SO(3) representation (used by the normal-form descent)

_SIGMA = (
    (ZOmega(0), ZOmega(1), ZOmega(1), ZOmega(0)),  # X
    (ZOmega(0), ZOmega(0, 0, -1), ZOmega(0, 0, 1), ZOmega(0)),  # Y
    (ZOmega(1), ZOmega(0), ZOmega(0), ZOmega(-1)),  # Z
)


def _mat_mul(a, b):
    return (
        a[0] * b[0] + a[1] * b[2],
        a[0] * b[1] + a[1] * b[3],
        a[2] * b[0] + a[3] * b[2],
        a[2] * b[1] + a[3] * b[3],
    )


def _mat_dag(a):
    return (a[0].conj(), a[2].conj(), a[1].conj(), a[3].conj())


def so3_matrix(u: TUnitary) -> tuple[tuple[tuple[ZRoot2, ...], ...], int]:
    """Exact Bloch rotation of u as (M, s) with R = M/√2^s, fully reduced."""
    zc = u.z.conj().mul_zeta_pow(u.m)
    wc = u.w.conj().mul_zeta_pow(u.m)
    n = (u.z, -u.w.conj().mul_zeta_pow(u.m), u.w, zc)
    nd = _mat_dag(n)
    cols = [_mat_mul(_mat_mul(n, sj), nd) for sj in _SIGMA]
    rows = []
    for si in _SIGMA:
        row = []
        for col in cols:
            prod = _mat_mul(si, col)
            tr = prod[0] + prod[3]
            real = tr.real_part_zroot2()
            if real is None:
                raise ArithmeticError("SO(3) entry came out non-real")
            row.append(real)
        rows.append(row)
    s = 2 * u.k + 2
    while s > 0 and all(x.divisible_sqrt2() for row in rows for x in row):
        rows = [[x.div_sqrt2() for x in row] for row in rows]
        s -= 1
    return tuple(tuple(row) for row in rows), s


_SYLLABLE_BY_ROWS = {
    frozenset({0, 1}): "T",
    frozenset({1, 2}): "HT",
    frozenset({0, 2}): "SHT",
}

_SYLLABLE_INVERSE = {
    "T": T_EXACT.inverse(),
    "HT": T_EXACT.inverse().mul(H_EXACT),
    "SHT": T_EXACT.inverse().mul(H_EXACT).mul(S_EXACT.inverse()),
}

_SYLLABLE_TOKENS = {"T": ("T",), "HT": ("H", "T"), "SHT": ("S", "H", "T")}


def _leading_syllable(m_rows, s: int) -> str:
    odd_rows = frozenset(
        i for i, row in enumerate(m_rows) if any(x.a % 2 for x in row)
    )
    syll = _SYLLABLE_BY_ROWS.get(odd_rows)
    if syll is None:
        raise ArithmeticError(
            f"unexpected parity pattern {sorted(odd_rows)} at denominator exponent {s}"
        )
    return syll


def ma_tokens(u: TUnitary) -> list[str]:
    """Matsumoto–Amano word of the channel of u: T?(HT|SHT)*·C<idx> tokens."""
    tokens: list[str] = []
    cur = u
    m_rows, s = so3_matrix(cur)
    first = True
    while s > 0:
        syll = _leading_syllable(m_rows, s)
        if syll == "T" and not first:
            raise ArithmeticError("T syllable appeared past the leading position")
        tokens.extend(_SYLLABLE_TOKENS[syll])
        cur = _SYLLABLE_INVERSE[syll].mul(cur)
        m_prev_s = s
        m_rows, s = so3_matrix(cur)
        if s != m_prev_s - 1:
            raise ArithmeticError("denominator exponent did not descend by one")
        first = False
    idx = clifford_index_from_so3(m_rows)
    tokens.append(f"C{idx}")
    return tokens


def t_count(u: TUnitary) -> int:
    """Exact T-count: number of T tokens of the normal form."""
    return sum(1 for tok in ma_tokens(u) if tok == "T")


# ---------------------------------------------------------------------------
# Clifford+V_p exact form


class VUnitary:
    """(1/(√p^k √2^c))·[[z, −w̄i^m], [w, z̄i^m]] with z, w ∈ Z[i].

    Stored channel-level: reduction by 1+i twists the global phase by ζ8,
    which is quotiented anyway.  After reduction k is the √p least
    denominator exponent of the matrix, i.e. the V-count.
    """

    __slots__ = ("z", "w", "p", "k", "c", "m")

    def __init__(self, z: ZI, w: ZI, p: int, k: int, c: int, m: int) -> None:
        z, w = ZI.coerce(z), ZI.coerce(w)
        k, c, m = int(k), int(c), int(m) % 4
        if k < 0 or c < 0:
            raise ValueError("denominator exponents must be nonnegative")
        while k >= 2 and z.divisible_int(p) and w.divisible_int(p):
            z, w, k = z.div_int(p), w.div_int(p), k - 2
        while c >= 1 and z.divisible_one_plus_i() and w.divisible_one_plus_i():
            z, w = z.div_one_plus_i(), w.div_one_plus_i()
            c -= 1
            m = (m + 3) % 4
        if z.norm() + w.norm() != p**k * 2**c:
            raise NotUnitaryError(f"|z|²+|w|² ≠ {p}^{k}·2^{c}")
        object.__setattr__(self, "z", z)
        object.__setattr__(self, "w", w)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "k", k)
        object.__setattr__(self, "c", c)
        object.__setattr__(self, "m", m)

    def __setattr__(self, *args):  # pragma: no cover
        raise AttributeError("VUnitary is immutable")

    def __repr__(self) -> str:
        return (
            f"VUnitary(z={self.z!r}, w={self.w!r}, p={self.p}, "
            f"k={self.k}, c={self.c}, m={self.m})"
        )

    def mul(self, other: "VUnitary") -> "VUnitary":
        if self.p != other.p:
            raise ValueError("cannot mix gate-set primes")
        zc = self.z.conj().mul_i_pow(self.m)
        wc = self.w.conj().mul_i_pow(self.m)
        z = self.z * other.z - wc * other.w
        w = self.w * other.z + zc * other.w
        return VUnitary(z, w, self.p, self.k + other.k, self.c + other.c, self.m + other.m)

    def inverse(self) -> "VUnitary":
        return VUnitary(
            self.z.conj(), -self.w.mul_i_pow(-self.m), self.p, self.k, self.c, -self.m
        )

    def channel_key(self) -> tuple:
        best = None
        for j in range(4):
            zj, wj = self.z.mul_i_pow(j), self.w.mul_i_pow(j)
            cand = (self.k, self.c, zj.re, zj.im, wj.re, wj.im, (self.m + 2 * j) % 4)
            if best is None or cand < best:
                best = cand
        return best

    def same_channel(self, other: "VUnitary") -> bool:
        return self.channel_key() == other.channel_key()

    def to_point(self) -> tuple[tuple[int, int, int, int], int]:
        """Integer quaternion (a, b, c, d) and its norm n with the channel
        equal to U(a, b, c, d)/√n."""
        if self.m % 2 == 0:
            zi = self.z.mul_i_pow(-(self.m // 2))
            wi = self.w.mul_i_pow(-(self.m // 2))
            n = self.p**self.k * 2**self.c
        else:
            tw = ZI(1, -1)  # 1−i = √2·ζ8⁻¹
            j = -((self.m - 1) // 2)
            zi = (self.z * tw).mul_i_pow(j)
            wi = (self.w * tw).mul_i_pow(j)
            n = self.p**self.k * 2 ** (self.c + 1)
        return (zi.re, zi.im, wi.re, wi.im), n

    def to_channel(self) -> UnitaryChannel:
        q, n = self.to_point()
        scale = 1.0 / math.sqrt(n)
        return UnitaryChannel([x * scale for x in q])

    def trace_overlap_sq(self) -> QRoot2:
        t = self.z + self.z.conj().mul_i_pow(self.m)
        from fractions import Fraction

        val = Fraction(t.norm(), self.p**self.k * 2**self.c * 4)
        return QRoot2(val)


def exact_overlap_v(u: VUnitary, v: VUnitary) -> QRoot2:
    return u.inverse().mul(v).trace_overlap_sq()


def exact_overlap(u: Union[TUnitary, VUnitary], v: Union[TUnitary, VUnitary]) -> QRoot2:
    """Exact (|tr U†V|/2)² in Q(√2); flavors must match."""
    if isinstance(u, TUnitary) and isinstance(v, TUnitary):
        return exact_overlap_t(u, v)
    if isinstance(u, VUnitary) and isinstance(v, VUnitary):
        if u.p != v.p:
            raise TypeError("gate-set primes differ")
        return exact_overlap_v(u, v)
    raise TypeError("exact_overlap needs two exact unitaries of the same flavor")


# ---------------------------------------------------------------------------
# integer quaternions (Lipschitz order) for V synthesis


def iquat_mult(q1, q2):
    a1, b1, c1, d1 = q1
    a2, b2, c2, d2 = q2
    return (
        a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
        a1 * b2 + b1 * a2 - c1 * d2 + d1 * c2,
        a1 * c2 + c1 * a2 + b1 * d2 - d1 * b2,
        a1 * d2 + d1 * a2 - b1 * c2 + c1 * b2,
    )


def iquat_conj(q):
    return (q[0], -q[1], -q[2], -q[3])


def iquat_norm(q):
    return q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3]


def iquat_primitive(q):
    g = 0
    for x in q:
        g = math.gcd(g, abs(x))
    if g == 0:
        raise ValueError("zero quaternion")
    return tuple(x // g for x in q)


def iquat_canonical(q):
    """Sign-canonical primitive form: first nonzero coordinate positive."""
    q = iquat_primitive(q)
    for x in q:
        if x != 0:
            return tuple(-y for y in q) if x < 0 else q
    raise ValueError("zero quaternion")


PAULI_UNITS = (
    (1, 0, 0, 0), (-1, 0, 0, 0),
    (0, 1, 0, 0), (0, -1, 0, 0),
    (0, 0, 1, 0), (0, 0, -1, 0),
    (0, 0, 0, 1), (0, 0, 0, -1),
)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    for d in range(2, int(math.isqrt(n)) + 1):
        if n % d == 0:
            return False
    return True


@lru_cache(maxsize=None)
def vp_orbit_data(p: int):
    """Representatives of S_Z(p) mod right multiplication by Pauli units.

    Returns (reps, conj_class) where reps[i] is the canonical quaternion of
    class i (0-based) and conj_class[i] is the class of its conjugate — the
    forbidden successor in canonical words.
    """
    if p == 2 or not _is_prime(p):
        raise ValueError(f"V_p needs an odd prime, got {p}")
    solutions = []
    bound = int(math.isqrt(p))
    for a in range(-bound, bound + 1):
        for b in range(-bound, bound + 1):
            for c in range(-bound, bound + 1):
                rem = p - a * a - b * b - c * c
                if rem < 0:
                    continue
                d = int(math.isqrt(rem))
                if d * d == rem:
                    solutions.append((a, b, c, d))
                    if d != 0:
                        solutions.append((a, b, c, -d))
    orbit_key = {}
    for q in solutions:
        members = [iquat_mult(q, u) for u in PAULI_UNITS]
        key = min(members)
        orbit_key[key] = members
    assert len(orbit_key) == p + 1, f"expected {p+1} classes, got {len(orbit_key)}"

    def _canonical_rep(members):
        picks = [m for m in members if m[0] > 0 and m[0] % 2 == 1]
        return min(picks) if picks else min(m for m in members if m > (0, 0, 0, 0))

    reps = sorted(_canonical_rep(mem) for mem in orbit_key.values())
    class_of = {}
    for i, r in enumerate(reps):
        for u in PAULI_UNITS:
            class_of[iquat_mult(r, u)] = i
    conj_class = tuple(class_of[iquat_conj(r)] for r in reps)
    return tuple(reps), conj_class


def vp_gate(p: int, index: int) -> VUnitary:
    """Exact gate for token V<p>:<index> (1-based index)."""
    reps, _ = vp_orbit_data(p)
    a, b, c, d = reps[index - 1]
    return VUnitary(ZI(a, b), ZI(c, d), p, 1, 0, 0)


# ---------------------------------------------------------------------------
# Clifford group tables (shared index space for both gate sets)


@lru_cache(maxsize=1)
def _clifford_tables():
    s_v = VUnitary(ZI(1), ZI(0), 5, 0, 0, 1)
    h_v = VUnitary(ZI(1), ZI(1), 5, 0, 1, 2)
    gens_t = (("S", S_EXACT), ("H", H_EXACT))
    entries = []
    seen = {}
    queue = [("", IDENTITY_T)]
    while queue:
        word, mat = queue.pop(0)
        key = mat.channel_key()
        if key in seen:
            continue
        seen[key] = len(entries)
        entries.append((word, mat))
        for name, g in gens_t:
            queue.append((word + name, mat.mul(g)))
    assert len(entries) == 24, f"Clifford closure produced {len(entries)} channels"

    gate_v = {"S": s_v, "H": h_v}
    id_v = VUnitary(ZI(1), ZI(0), 5, 0, 0, 0)
    table = []
    so3_index = {}
    point_index = {}
    for idx, (word, mat_t) in enumerate(entries):
        mat_v = id_v
        for ch in word:
            mat_v = mat_v.mul(gate_v[ch])
        rows, s = so3_matrix(mat_t)
        assert s == 0
        so3_key = tuple(x.a for row in rows for x in row)
        so3_index[so3_key] = idx
        pt, _ = mat_v.to_point()
        point_index[iquat_canonical(pt)] = idx
        table.append(
            {
                "index": idx,
                "word": word,
                "t": mat_t,
                "v": mat_v,
                "channel": mat_t.to_channel(),
                "point": iquat_canonical(pt),
            }
        )
    return table, so3_index, point_index


def clifford_table():
    """The 24 Clifford channels with exact forms, index-stable."""
    return _clifford_tables()[0]


def clifford_index_from_so3(m_rows) -> int:
    key = tuple(x.a for row in m_rows for x in row)
    idx = _clifford_tables()[1].get(key)
    if idx is None:
        raise ArithmeticError("SO(3) form at exponent 0 is not a Clifford rotation")
    return idx


def clifford_index_from_point(q) -> Optional[int]:
    return _clifford_tables()[2].get(iquat_canonical(q))


def clifford_t(idx: int) -> TUnitary:
    return clifford_table()[idx]["t"]


def clifford_v(idx: int, p: int = 5) -> VUnitary:
    entry = clifford_table()[idx]
    if p == 5:
        return entry["v"]
    gate_v = {
        "S": VUnitary(ZI(1), ZI(0), p, 0, 0, 1),
        "H": VUnitary(ZI(1), ZI(1), p, 0, 1, 2),
    }
    mat = VUnitary(ZI(1), ZI(0), p, 0, 0, 0)
    for ch in entry["word"]:
        mat = mat.mul(gate_v[ch])
    return mat


# ---------------------------------------------------------------------------
# recognition


RatioLike = Sequence[Union[int, ZRoot2]]


def _primitive_ratio(ratio: RatioLike) -> tuple[ZRoot2, ...]:
    coords = tuple(ZRoot2.coerce(c) for c in ratio)
    if len(coords) != 4:
        raise ValueError("a quaternion ratio needs 4 coordinates")
    if not any(coords):
        raise ValueError("zero ratio")
    g = ZRoot2(0)
    for c in coords:
        if c:
            g = c if not g else zroot2_gcd(g, c)
    return tuple(c // g for c in coords)


def _form1_point(ratio: tuple[ZRoot2, ...]):
    """Scale a primitive Z[√2] ratio onto a sphere S_{Z[√2]}(2^k), if possible."""
    n = ZRoot2(0)
    for c in ratio:
        n = n + c * c
    e, rest = sqrt2_factor(n)
    if e % 2 != 0:
        return None
    m = unit_log(rest)
    if m is None or m % 2 != 0:
        return None
    j = -m // 2
    u = ZRoot2(1, 1) ** j if j >= 0 else ZRoot2(-1, 1) ** (-j)
    coords = tuple(c * u for c in ratio)
    return coords, e // 2


def _tunitary_from_szroot2(coords: Sequence[ZRoot2], k: int) -> TUnitary:
    a, b, c, d = coords
    z = ZOmega.from_zroot2(a) + ZOmega(0, 0, 1, 0) * ZOmega.from_zroot2(b)
    w = ZOmega.from_zroot2(c) + ZOmega(0, 0, 1, 0) * ZOmega.from_zroot2(d)
    return TUnitary(z, w, k, 0)


def _t_twist(ratio: tuple[ZRoot2, ...]) -> tuple[ZRoot2, ...]:
    # ratio of U·T⁻¹, with the common cos(π/8) factor cancelled
    a, b, c, d = ratio
    lam = ZRoot2(-1, 1)  # √2 − 1
    return (a - lam * b, b + lam * a, c - lam * d, d + lam * c)


def recognize_t_ratio(ratio: RatioLike) -> Optional[TUnitary]:
    """Recognize the channel with quaternion ratio (α:β:γ:δ) over Z[√2]."""
    prim = _primitive_ratio(ratio)
    hit = _form1_point(prim)
    if hit is not None:
        return _tunitary_from_szroot2(*hit)
    hit = _form1_point(_primitive_ratio(_t_twist(prim)))
    if hit is not None:
        return _tunitary_from_szroot2(*hit).mul(T_EXACT)
    return None


OmegaEntry = tuple[ZOmega, int]


def _omega_entry_in_ring(num: ZOmega, den: int) -> bool:
    # Z[ζ8, 1/√2] = Z[ζ8, 1/2]: the odd part of the denominator must divide
    # the numerator coordinatewise
    odd = den
    while odd % 2 == 0:
        odd //= 2
    return odd == 1 or num.divisible_int(odd)


def recognize_t(matrix) -> Optional[TUnitary]:
    """Recognize an exactly synthesizable Clifford+T channel.

    Accepts a TUnitary (re-reduced), a quaternion ratio over Z[√2]
    (sequence of 4 ints/ZRoot2), or a 2×2 matrix of (ZOmega numerator,
    positive int denominator) pairs.  Returns None when the channel is not
    synthesizable; raises NotUnitaryError on non-unitary matrix input.
    """
    if isinstance(matrix, TUnitary):
        return TUnitary(matrix.z, matrix.w, matrix.k, matrix.m)
    if (
        isinstance(matrix, Sequence)
        and len(matrix) == 4
        and all(isinstance(x, (int, ZRoot2)) for x in matrix)
    ):
        return recognize_t_ratio(matrix)
    entries = [[matrix[i][j] for j in range(2)] for i in range(2)]
    nums = [[ZOmega.coerce(e[0]) for e in row] for row in entries]
    dens = [[int(e[1]) for e in row] for row in entries]
    if any(d <= 0 for row in dens for d in row):
        raise ValueError("entry denominators must be positive")
    # exact unitarity over a common denominator
    big = math.lcm(*(d for row in dens for d in row))
    scaled = [
        [nums[i][j] * (big // dens[i][j]) for j in range(2)] for i in range(2)
    ]
    nmat = (scaled[0][0], scaled[0][1], scaled[1][0], scaled[1][1])
    prod = _mat_mul(_mat_dag(nmat), nmat)
    target = ZOmega(big * big)
    if not (prod[0] == target and prod[3] == target and not prod[1] and not prod[2]):
        raise NotUnitaryError("matrix is not exactly unitary")
    if not all(
        _omega_entry_in_ring(nums[i][j], dens[i][j]) for i in range(2) for j in range(2)
    ):
        return None
    # per entry: strip the odd denominator part, then reduce the dyadic tail
    # value = P/√2^(2e) with P ∈ Z[ζ8]; k is the matrix least exponent
    reduced = []
    for i in range(2):
        for j in range(2):
            den = dens[i][j]
            e2 = 0
            while den % 2 == 0:
                den //= 2
                e2 += 1
            num = nums[i][j].div_int(den) if den > 1 else nums[i][j]
            kk = 2 * e2
            while kk > 0 and num.divisible_sqrt2():
                num = num.div_sqrt2()
                kk -= 1
            reduced.append((num, kk))
    k = max(kk for _, kk in reduced)
    cleared = []
    for num, kk in reduced:
        for _ in range(k - kk):
            num = num.mul_sqrt2()
        cleared.append(num)
    z, w = cleared[0], cleared[2]
    det_num = cleared[0] * cleared[3] - cleared[1] * cleared[2]
    two_k = ZOmega(2**k)
    for m in range(8):
        if det_num == ZOmega(1).mul_zeta_pow(m) * two_k:
            u = TUnitary(z, w, k, m)
            expect01 = -w.conj().mul_zeta_pow(m)
            expect11 = z.conj().mul_zeta_pow(m)
            if cleared[1] != expect01 or cleared[3] != expect11:
                raise NotUnitaryError("matrix does not have unitary column structure")
            return u
    raise NotUnitaryError("determinant is not a power of ζ8")


def recognize_v(matrix, p: int = 5) -> Optional[VUnitary]:
    """Recognize an exactly synthesizable Clifford+V_p channel.

    Accepts a VUnitary, an integer quaternion ratio (4 ints), or a tuple
    (nmat, k, c) with nmat a 2×2 of ZI and the matrix equal to
    nmat/(√p^k·√2^c).  Returns None when not synthesizable.
    """
    if not _is_prime(p) or p == 2:
        raise ValueError(f"V_p needs an odd prime, got {p}")
    if isinstance(matrix, VUnitary):
        return VUnitary(matrix.z, matrix.w, matrix.p, matrix.k, matrix.c, matrix.m)
    if (
        isinstance(matrix, Sequence)
        and len(matrix) == 4
        and all(isinstance(x, int) for x in matrix)
    ):
        q = iquat_primitive(tuple(matrix))
        n = iquat_norm(q)
        a = 0
        while n % p == 0:
            n //= p
            a += 1
        b = 0
        while n % 2 == 0:
            n //= 2
            b += 1
        if n != 1:
            return None
        return VUnitary(ZI(q[0], q[1]), ZI(q[2], q[3]), p, a, b, 0)
    nmat, k, c = matrix
    entries = [ZI.coerce(nmat[i][j]) for i in range(2) for j in range(2)]
    total = entries[0].norm() + entries[2].norm()
    if total != p**k * 2**c or (
        entries[1].norm() + entries[3].norm() != p**k * 2**c
    ):
        raise NotUnitaryError("columns do not have the unitary norm")
    det = entries[0] * entries[3] - entries[1] * entries[2]
    target = p**k * 2**c
    for m in range(4):
        if det == ZI(target).mul_i_pow(m):
            u = VUnitary(entries[0], entries[2], p, k, c, m)
            if entries[1] != -entries[2].conj().mul_i_pow(m) or entries[3] != entries[
                0
            ].conj().mul_i_pow(m):
                raise NotUnitaryError("matrix does not have unitary column structure")
            return u
    raise NotUnitaryError("determinant is not a power of i")


# ---------------------------------------------------------------------------
# V_p synthesis by norm-p left division


def v_count(u: VUnitary) -> int:
    """Exact V-count = √p least denominator exponent of the reduced form."""
    return u.k


def v_tokens(u: VUnitary) -> list[str]:
    """Canonical V-word tokens V<p>:<i> ... C<idx> for the channel of u."""
    p = u.p
    reps, _ = vp_orbit_data(p)
    q, _n = u.to_point()
    q = iquat_primitive(q)
    n = iquat_norm(q)
    tokens: list[str] = []
    while n % p == 0:
        hits = []
        for i, r in enumerate(reps):
            cand = iquat_mult(iquat_conj(r), q)
            if all(x % p == 0 for x in cand):
                hits.append((i, tuple(x // p for x in cand)))
        if len(hits) != 1:
            raise ArithmeticError(
                f"norm-{p} left division found {len(hits)} candidates; "
                "invariant violation"
            )
        i, q = hits[0]
        q = iquat_primitive(q)
        n = iquat_norm(q)
        tokens.append(f"V{p}:{i + 1}")
    if n & (n - 1):
        raise ArithmeticError("residual quaternion norm is not a power of two")
    idx = clifford_index_from_point(q)
    if idx is None:
        raise ArithmeticError("residual quaternion is not a Clifford channel")
    assert len(tokens) == u.k, "division count disagrees with the denominator exponent"
    tokens.append(f"C{idx}")
    return tokens
