"""Optimal deterministic ε-approximation by exhaustive canonical-word search.

Words are enumerated level by level (level = exact G-count): MA syllable
chains for Clifford+T, canonical V-words for Clifford+V_p, each level closed
with all 24 Cliffords.  Canonical words denote distinct channels, so a level
scan is an exact minimum over that G-count.
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import exact_synth as xs
from .gates import GateSequence, GateSet
from .su2 import UnitaryChannel, quat_conj, quat_mult

MAX_LEVEL_STATES = 20_000_000
DISTANCE_GUARD = 1e-14
# overlaps this close to 1 are exact hits: the closed form cannot resolve
# distances below ~1e-7, while distinct channels at enumerable levels stay
# ≥ ~1e-4 apart, so the snap cannot misclassify
_HIT_IP = 1.0 - 1e-13
_CHUNK = 262_144


def _dist_from_ip(ip: float) -> float:
    if ip >= _HIT_IP:
        return 0.0
    return math.sqrt(max(0.0, 1.0 - min(1.0, ip) ** 2))


class BudgetExhausted(Exception):
    """No word within the budget achieved the target distance."""

    def __init__(
        self,
        best_distance: float,
        best_word: Optional[GateSequence],
        deepest_level: int,
    ):
        super().__init__(
            f"budget exhausted at level {deepest_level}; "
            f"best distance {best_distance:.6g}"
        )
        self.best_distance = best_distance
        self.best_word = best_word
        self.deepest_level = deepest_level


@dataclass
class _Level:
    quats: np.ndarray   # (N, 4) float64 word states before the Clifford tail
    parent: np.ndarray  # (N,) int64 index into previous level (-1 at level 1)
    gate: np.ndarray    # (N,) uint8 syllable/generator id


def _batch_mult(qs: np.ndarray, g: np.ndarray) -> np.ndarray:
    a1, b1, c1, d1 = qs[:, 0], qs[:, 1], qs[:, 2], qs[:, 3]
    a2, b2, c2, d2 = g
    return np.stack(
        [
            a1 * a2 - b1 * b2 - c1 * c2 - d1 * d2,
            a1 * b2 + b1 * a2 - c1 * d2 + d1 * c2,
            a1 * c2 + c1 * a2 + b1 * d2 - d1 * b2,
            a1 * d2 + d1 * a2 - b1 * c2 + c1 * b2,
        ],
        axis=1,
    )


class _Enumerator:
    """Lazy per-gate-set level cache; grown under a lock, then read-only."""

    def __init__(self, gate_set: GateSet) -> None:
        self.gate_set = gate_set
        self.levels: list[_Level] = []
        self._lock = threading.Lock()
        table = xs.clifford_table()
        self.clifford_quats = np.array([e["channel"].q for e in table])
        if gate_set.kind == "t":
            syl = [
                xs.T_EXACT,
                xs.H_EXACT.mul(xs.T_EXACT),
                xs.S_EXACT.mul(xs.H_EXACT).mul(xs.T_EXACT),
            ]
            self.gen_quats = np.array([g.to_channel().q for g in syl])
            self.gate_tokens = [("T",), ("H", "T"), ("S", "H", "T")]
        else:
            p = gate_set.p
            _, conj_class = xs.vp_orbit_data(p)
            self.gen_quats = np.array(
                [xs.vp_gate(p, i + 1).to_channel().q for i in range(p + 1)]
            )
            self.conj_class = conj_class
            self.gate_tokens = [(f"V{p}:{i + 1}",) for i in range(p + 1)]

    def _grow_one(self) -> None:
        t = len(self.levels) + 1
        if t == 1:
            n = len(self.gen_quats)
            self.levels.append(
                _Level(
                    self.gen_quats.copy(),
                    np.full(n, -1, dtype=np.int64),
                    np.arange(n, dtype=np.uint8),
                )
            )
            return
        prev = self.levels[-1]
        n = len(prev.quats)
        if self.gate_set.kind == "t":
            succ = {0: (1, 2), 1: (1, 2), 2: (1, 2)}  # only HT/SHT may follow
            fanout = 2
        else:
            p = self.gate_set.p
            succ = {
                g: tuple(j for j in range(p + 1) if j != self.conj_class[g])
                for g in range(p + 1)
            }
            fanout = p
        total = fanout * n
        if total > MAX_LEVEL_STATES:
            raise MemoryError(f"level {t} would need {total} states")
        quats = np.empty((total, 4))
        parent = np.empty(total, dtype=np.int64)
        gate = np.empty(total, dtype=np.uint8)
        # children stored parent-major so enumeration order is deterministic
        for g_prev, succs in succ.items():
            idx = np.nonzero(prev.gate == g_prev)[0]
            if len(idx) == 0:
                continue
            base = prev.quats[idx]
            for slot, j in enumerate(succs):
                rows = idx * fanout + slot
                quats[rows] = _batch_mult(base, self.gen_quats[j])
                parent[rows] = idx
                gate[rows] = j
        self.levels.append(_Level(quats, parent, gate))

    def ensure(self, t: int) -> None:
        with self._lock:
            while len(self.levels) < t:
                self._grow_one()

    def word_tokens(self, level: int, state: int, cliff: int) -> tuple[str, ...]:
        if level == 0:
            return (f"C{cliff}",)
        chain = []
        lv, st = level, state
        while lv >= 1:
            chain.append(int(self.levels[lv - 1].gate[st]))
            st = int(self.levels[lv - 1].parent[st])
            lv -= 1
        tokens: list[str] = []
        for g in reversed(chain):
            tokens.extend(self.gate_tokens[g])
        tokens.append(f"C{cliff}")
        return tuple(tokens)

    def state_quat(self, level: int, state: int, cliff: int) -> np.ndarray:
        base = (
            np.array([1.0, 0.0, 0.0, 0.0])
            if level == 0
            else self.levels[level - 1].quats[state]
        )
        return quat_mult(base, self.clifford_quats[cliff])


_ENUMERATORS: dict[str, _Enumerator] = {}
_ENUM_LOCK = threading.Lock()


def get_enumerator(gate_set: GateSet) -> _Enumerator:
    key = str(gate_set)
    with _ENUM_LOCK:
        if key not in _ENUMERATORS:
            _ENUMERATORS[key] = _Enumerator(gate_set)
        return _ENUMERATORS[key]


def _rotated_targets(enum: _Enumerator, target: UnitaryChannel) -> np.ndarray:
    # ⟨q_F·q_C, q_U⟩ = ⟨q_F, q_U·q_C†⟩: fold the Clifford tail into the target.
    # Row j, component 0 is then the overlap of Clifford j itself with target.
    return np.array([quat_mult(target.q, quat_conj(c)) for c in enum.clifford_quats])


def _scan_level(enum: _Enumerator, rotated: np.ndarray, t: int) -> tuple[float, int, int]:
    """Best (distance, state, clifford) among words of exact G-count t.

    Exact float ties are resolved toward the lexicographically smallest
    token sequence.
    """
    if t == 0:
        vals = np.abs(rotated[:, 0])
        best_ip = float(np.max(vals))
        ties = np.nonzero(vals == best_ip)[0]
        cliff = int(ties.min())
        return _dist_from_ip(best_ip), -1, cliff
    states = enum.levels[t - 1].quats
    best_ip = -1.0
    for lo in range(0, len(states), _CHUNK):
        dots = np.abs(states[lo : lo + _CHUNK] @ rotated.T)
        m = float(dots.max())
        if m > best_ip:
            best_ip = m
    candidates: list[tuple[tuple[str, ...], int, int]] = []
    for lo in range(0, len(states), _CHUNK):
        dots = np.abs(states[lo : lo + _CHUNK] @ rotated.T)
        for si, cf in zip(*np.nonzero(dots == best_ip)):
            candidates.append(
                (enum.word_tokens(t, lo + int(si), int(cf)), lo + int(si), int(cf))
            )
    candidates.sort()
    _, st, cf = candidates[0]
    return _dist_from_ip(best_ip), st, cf


def best_at_level(
    target: UnitaryChannel, gate_set: GateSet, t: int
) -> tuple[float, GateSequence]:
    """Minimum distance over all canonical words with g_count ≤ t, with a
    witness word; monotone nonincreasing in t."""
    enum = get_enumerator(gate_set)
    enum.ensure(t)
    rotated = _rotated_targets(enum, target)
    best_d = math.inf
    best_word: Optional[GateSequence] = None
    for lvl in range(t + 1):
        d, st, cf = _scan_level(enum, rotated, lvl)
        if d < best_d - 1e-18:
            best_d = d
            best_word = GateSequence(gate_set, enum.word_tokens(lvl, st, cf))
    assert best_word is not None
    return best_d, best_word


def gcount_approx(
    target: UnitaryChannel, gate_set: GateSet, eps: float, budget: int
) -> tuple[int, GateSequence]:
    """Exact minimal G-count t ≤ budget with a witness word within eps.

    The threshold accepts d ≤ eps + 1e-14, matching the d(U,V) ≤ ε
    convention.  Raises BudgetExhausted with the best capped distance when
    no level succeeds (including when a level would exceed the state guard).
    """
    if not 0.0 < eps <= 1.0:
        raise ValueError("eps must be in (0, 1]")
    if budget < 0:
        raise ValueError("budget must be nonnegative")
    enum = get_enumerator(gate_set)
    rotated = _rotated_targets(enum, target)
    best_d, best_word = math.inf, None
    deepest = -1
    for t in range(budget + 1):
        try:
            if t > 0:
                enum.ensure(t)
        except MemoryError:
            break
        d, st, cf = _scan_level(enum, rotated, t)
        deepest = t
        if d < best_d - 1e-18:
            best_d = d
            best_word = GateSequence(gate_set, enum.word_tokens(t, st, cf))
        if best_d <= eps + DISTANCE_GUARD:
            return t, best_word
    raise BudgetExhausted(best_d, best_word, deepest)


def channels_within(
    gate_set: GateSet, target: UnitaryChannel, t: int, radius: float
) -> list[tuple[float, GateSequence, UnitaryChannel]]:
    """All canonical-word channels with g_count ≤ t within `radius` of the
    target, sorted by (distance, word); feeds probabilistic synthesis."""
    enum = get_enumerator(gate_set)
    enum.ensure(t)
    rotated = _rotated_targets(enum, target)
    min_ip = math.sqrt(max(0.0, 1.0 - min(1.0, radius) ** 2))
    out = []
    vals = np.abs(rotated[:, 0])
    for cf in np.nonzero(vals >= min_ip - 1e-12)[0]:
        out.append(
            (
                _dist_from_ip(float(vals[cf])),
                GateSequence(gate_set, (f"C{int(cf)}",)),
                UnitaryChannel(enum.clifford_quats[int(cf)]),
            )
        )
    for lvl in range(1, t + 1):
        states = enum.levels[lvl - 1].quats
        for lo in range(0, len(states), _CHUNK):
            dots = np.abs(states[lo : lo + _CHUNK] @ rotated.T)
            for si, cf in zip(*np.nonzero(dots >= min_ip - 1e-12)):
                tokens = enum.word_tokens(lvl, lo + int(si), int(cf))
                q = quat_mult(states[lo + int(si)], enum.clifford_quats[int(cf)])
                out.append(
                    (
                        _dist_from_ip(float(dots[si, cf])),
                        GateSequence(gate_set, tokens),
                        UnitaryChannel(q),
                    )
                )
    out.sort(key=lambda rec: (rec[0], rec[1].tokens))
    return out
