"""Integer quaternion points on spheres and the candidate-channel database.

S_Z(n) and S_{Z[√2]}(2^k) are enumerated exactly; the database maps points
to channels with their G-count bounds (2k+1 for Clifford+T levels, k for
Clifford+V_p) and answers nearest-candidate queries through a uniform grid
over the quaternion 3-sphere (4-cube face bucketing).
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
import numpy as np

from .gates import GateSet
from .rings import ZRoot2
from .su2 import QuaternionPoint, UnitaryChannel, channel_from_point, haar_sample

POINT_BUDGET = 10**8


def enumerate_sz(n: int) -> list[QuaternionPoint]:
    """All integer points (α,β,γ,δ) with α²+β²+γ²+δ² = n, duplicate-free."""
    if n < 1:
        raise ValueError("n must be positive")
    points = []
    bound = int(math.isqrt(n))
    for a in range(-bound, bound + 1):
        ra = n - a * a
        ba = int(math.isqrt(ra))
        for b in range(-ba, ba + 1):
            rb = ra - b * b
            bb = int(math.isqrt(rb))
            for c in range(-bb, bb + 1):
                rc = rb - c * c
                d = int(math.isqrt(rc))
                if d * d == rc:
                    points.append(QuaternionPoint((a, b, c, d), n))
                    if d != 0:
                        points.append(QuaternionPoint((a, b, c, -d), n))
    return points


def _bounded_coords(k: int) -> list[ZRoot2]:
    """Elements c ∈ Z[√2] with σ₁(c)² ≤ 2^k and σ₂(c)² ≤ 2^k."""
    n = ZRoot2(2**k)
    amax = int(math.isqrt(2**k)) + 1
    bmax = int(math.isqrt(2 ** max(0, k - 1))) + 1
    out = []
    for a in range(-amax, amax + 1):
        for b in range(-bmax, bmax + 1):
            c = ZRoot2(a, b)
            sq = c * c
            if (n - sq).sign() >= 0 and (n - sq).conj().sign() >= 0:
                out.append(c)
    return out


def enumerate_szroot2(k: int) -> list[QuaternionPoint]:
    """All (α,β,γ,δ) ∈ Z[√2]⁴ with α²+β²+γ²+δ² = 2^k exactly.

    Both real embeddings of the sphere equation hold automatically; the
    search box is driven by the |σᵢ(coord)| ≤ 2^(k/2) bound.  Uses a
    meet-in-the-middle pairing on exact partial sums.
    """
    if k < 0:
        raise ValueError("k must be nonnegative")
    coords = _bounded_coords(k)
    n = ZRoot2(2**k)
    pair_sums: dict[tuple[int, int], list[tuple[ZRoot2, ZRoot2]]] = {}
    for c1 in coords:
        s1 = c1 * c1
        if (n - s1).sign() < 0 or (n - s1).conj().sign() < 0:
            continue
        for c2 in coords:
            s = s1 + c2 * c2
            rem = n - s
            if rem.sign() < 0 or rem.conj().sign() < 0:
                continue
            pair_sums.setdefault((s.a, s.b), []).append((c1, c2))
    points = []
    for (sa, sb), firsts in pair_sums.items():
        rem = n - ZRoot2(sa, sb)
        seconds = pair_sums.get((rem.a, rem.b))
        if not seconds:
            continue
        for c1, c2 in firsts:
            for c3, c4 in seconds:
                points.append(QuaternionPoint((c1, c2, c3, c4), n))
    return points


def _canonical_point_key(p: QuaternionPoint) -> tuple:
    """Exact projective key: sign-normalized ring coordinates."""
    flip = 1
    for c in p.coords:
        s = c.sign()
        if s != 0:
            flip = s
            break
    return tuple((c.a * flip, c.b * flip) for c in p.coords)


@dataclass
class DbLevel:
    level: int
    g_bound: int
    points: list[QuaternionPoint]
    quats: np.ndarray  # (N, 4) canonical channel quaternions


class _FaceGrid:
    """Uniform grid over S³ via 4-cube face bucketing; points are indexed at
    both ±q so queries see the projective double cover."""

    def __init__(self, quats: np.ndarray, edge: float) -> None:
        self.edge = edge
        self.quats = np.vstack([quats, -quats])
        self.src = np.concatenate([np.arange(len(quats)), np.arange(len(quats))])
        self.cells: dict[tuple, list[int]] = {}
        for i, q in enumerate(self.quats):
            self.cells.setdefault(self._cell_of(q), []).append(i)

    def _cell_of(self, q: np.ndarray) -> tuple:
        axis = int(np.argmax(np.abs(q)))
        sign = 1 if q[axis] > 0 else -1
        u = q / (sign * q[axis])
        rest = [u[j] for j in range(4) if j != axis]
        return (axis, sign) + tuple(int(math.floor((x + 1.0) / self.edge)) for x in rest)

    def _cells_in_window(self, axis: int, sign: int, lo: np.ndarray, hi: np.ndarray):
        ranges = [
            range(
                int(math.floor((lo[j] + 1.0) / self.edge)),
                int(math.floor((hi[j] + 1.0) / self.edge)) + 1,
            )
            for j in range(3)
        ]
        for i0 in ranges[0]:
            for i1 in ranges[1]:
                for i2 in ranges[2]:
                    cell = (axis, sign, i0, i1, i2)
                    if cell in self.cells:
                        yield self.cells[cell]

    def candidates_within(self, q: np.ndarray, radius: float) -> list[int]:
        """Indices (into the doubled set) of all points within Euclidean
        `radius` of q — possibly more, never fewer."""
        out: list[int] = []
        maxc = float(np.max(np.abs(q)))
        for axis in range(4):
            for sign in (1, -1):
                f_center = sign * q[axis]
                if f_center < maxc - 2.0 * radius - 1e-12 or f_center < 0.5 - radius:
                    continue
                f_lo = max(0.5, f_center - radius)
                f_hi = min(1.0, f_center + radius)
                if f_lo > f_hi + 1e-12:
                    continue
                rest = [j for j in range(4) if j != axis]
                lo = np.empty(3)
                hi = np.empty(3)
                for t, j in enumerate(rest):
                    corners = [
                        (q[j] - radius) / f_lo,
                        (q[j] - radius) / f_hi,
                        (q[j] + radius) / f_lo,
                        (q[j] + radius) / f_hi,
                    ]
                    lo[t] = max(-1.0, min(corners))
                    hi[t] = min(1.0, max(corners))
                for bucket in self._cells_in_window(axis, sign, lo, hi):
                    out.extend(bucket)
        return out

    def nearest(self, q: np.ndarray) -> tuple[int, float]:
        """Index (into the original set) and diamond distance of the nearest
        stored channel; exact minimum."""
        # seed: grow a window until something is found
        radius = 2.5 * self.edge
        cand: list[int] = []
        while not cand:
            cand = self.candidates_within(q, radius)
            radius *= 2.0
            if radius > 4.0 and not cand:
                raise RuntimeError("empty grid")
        pts = self.quats[cand]
        ips = pts @ q
        best_local = int(np.argmax(ips))
        best_ip = float(ips[best_local])
        # certify: euclid ball that could beat the current best overlap
        bound = math.sqrt(max(0.0, 2.0 - 2.0 * best_ip)) + 1e-9
        cand2 = self.candidates_within(q, bound)
        pts2 = self.quats[cand2]
        ips2 = pts2 @ q
        j = int(np.argmax(ips2))
        if float(ips2[j]) > best_ip:
            best_ip = float(ips2[j])
            best = cand2[j]
        else:
            best = cand[best_local]
        ip = min(1.0, abs(best_ip))
        return int(self.src[best]), math.sqrt(max(0.0, 1.0 - ip * ip))


@dataclass
class PointDatabase:
    gate_set: GateSet
    levels: list[DbLevel] = field(default_factory=list)
    _grids: dict[int, _FaceGrid] = field(default_factory=dict)

    def level_points(self, k: int) -> list[QuaternionPoint]:
        return self.levels[k].points

    def quats_up_to(self, k: int) -> np.ndarray:
        return np.vstack([lvl.quats for lvl in self.levels[: k + 1]])

    def _grid(self, k: int) -> _FaceGrid:
        if k not in self._grids:
            quats = self.quats_up_to(k)
            edge = _tuned_edge(quats)
            self._grids[k] = _FaceGrid(quats, edge)
        return self._grids[k]

    def points_up_to(self, k: int) -> list[QuaternionPoint]:
        out = []
        for lvl in self.levels[: k + 1]:
            out.extend(lvl.points)
        return out


def _tuned_edge(quats: np.ndarray, sample: int = 200) -> float:
    """Cell edge from the median nearest-neighbor gap of a sample."""
    n = len(quats)
    if n < 3:
        return 0.5
    idx = np.linspace(0, n - 1, min(sample, n)).astype(int)
    gaps = []
    for i in idx:
        ips = np.abs(quats @ quats[i])
        ips[i] = -1.0
        top = float(np.max(ips))
        gaps.append(math.sqrt(max(1e-12, 2.0 - 2.0 * min(1.0, top))))
    edge = float(np.median(gaps)) * 4.0
    return float(min(0.5, max(1e-3, edge)))


def _projected_count(gate_set: GateSet, k_max: int) -> float:
    if gate_set.kind == "t":
        return sum(12.0 * 4.0**k for k in range(k_max + 1))
    return sum(10.0 * float(gate_set.p) ** k for k in range(k_max + 1))


def build_db(gate_set: GateSet, k_max: int) -> PointDatabase:
    """Enumerate levels 0..k_max and index the induced channels.

    Channels are deduplicated per level by exact ring form (±point); the
    per-level G-count bound is 2k+1 for Clifford+T and k for Clifford+V_p.
    """
    if _projected_count(gate_set, k_max) > POINT_BUDGET:
        raise MemoryError(
            f"projected point count for {gate_set} up to level {k_max} "
            f"exceeds the {POINT_BUDGET:.0e} budget"
        )
    db = PointDatabase(gate_set)
    for k in range(k_max + 1):
        if gate_set.kind == "t":
            raw = enumerate_szroot2(k)
            g_bound = 2 * k + 1
        else:
            raw = enumerate_sz(gate_set.p**k)
            g_bound = k
        seen: dict[tuple, QuaternionPoint] = {}
        for p in raw:
            key = _canonical_point_key(p)
            if key not in seen:
                seen[key] = p
        points = list(seen.values())
        quats = np.array([channel_from_point(p).q for p in points]).reshape(-1, 4)
        db.levels.append(DbLevel(k, g_bound, points, quats))
    return db


def query_nearest(
    db: PointDatabase, target: UnitaryChannel, level: int
) -> tuple[QuaternionPoint, float]:
    """Exact minimum-distance candidate among levels ≤ level."""
    if not 0 <= level < len(db.levels):
        raise ValueError("level outside the database range")
    grid = db._grid(level)
    idx, dist = grid.nearest(target.q)
    return db.points_up_to(level)[idx], dist


def covering_radius(
    db: PointDatabase, level: int, samples: int, rng: np.random.Generator
) -> float:
    """Monte-Carlo max-of-min diamond distance to the level ≤ level candidates."""
    grid = db._grid(level)
    worst = 0.0
    for _ in range(samples):
        u = haar_sample(rng)
        _, d = grid.nearest(u.q)
        worst = max(worst, d)
    return worst


def uncovered_fraction(
    db: PointDatabase,
    level: int,
    eps: float,
    samples: int,
    rng: np.random.Generator,
) -> float:
    """Fraction of Haar samples farther than eps from every candidate."""
    grid = db._grid(level)
    misses = 0
    for _ in range(samples):
        u = haar_sample(rng)
        _, d = grid.nearest(u.q)
        if d > eps:
            misses += 1
    return misses / samples
