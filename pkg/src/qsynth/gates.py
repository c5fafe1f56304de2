"""Concrete gate sets and gate-sequence words.

Token grammar (whitespace separated, file extension .gseq):
    H | S | T | C<k> (k ∈ 0..23) | V<p>:<i> (i ∈ 1..p+1)
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from . import exact_synth as xs
from .su2 import UnitaryChannel


@dataclass(frozen=True)
class GateSet:
    """Clifford+T (kind "t") or Clifford+V_p (kind "v", odd prime p)."""

    kind: str
    p: int = 2

    def __post_init__(self):
        if self.kind not in ("t", "v"):
            raise ValueError(f"unknown gate-set kind {self.kind!r}")
        if self.kind == "v":
            xs.vp_orbit_data(self.p)  # validates p

    @property
    def log_base(self) -> int:
        """The characteristic factor p: 2 for Clifford+T, p for Clifford+V_p."""
        return 2 if self.kind == "t" else self.p

    @classmethod
    def parse(cls, name: str) -> "GateSet":
        name = name.strip().lower()
        if name == "t":
            return cls("t")
        m = re.fullmatch(r"v(\d+)", name)
        if m:
            return cls("v", int(m.group(1)))
        raise ValueError(f"unknown gate set {name!r}")

    def __str__(self) -> str:
        return "t" if self.kind == "t" else f"v{self.p}"


CLIFFORD_T_SET = GateSet("t")
V5_SET = GateSet("v", 5)

_TOKEN_RE = re.compile(r"(?:[HST])|(?:C(\d+))|(?:V(\d+):(\d+))")


@dataclass(frozen=True)
class GateSequence:
    """A word over a tagged gate set; g_count counts non-Clifford tokens."""

    gate_set: GateSet
    tokens: tuple[str, ...]

    @property
    def g_count(self) -> int:
        if self.gate_set.kind == "t":
            return sum(1 for t in self.tokens if t == "T")
        return sum(1 for t in self.tokens if t.startswith("V"))

    def __str__(self) -> str:
        return format_sequence(self)


def _check_token(tok: str, gs: GateSet) -> None:
    m = _TOKEN_RE.fullmatch(tok)
    if not m:
        raise ValueError(f"malformed gate token {tok!r}")
    if m.group(1) is not None:
        if not 0 <= int(m.group(1)) <= 23:
            raise ValueError(f"Clifford index out of range in {tok!r}")
        return
    if m.group(2) is not None:
        p, i = int(m.group(2)), int(m.group(3))
        if gs.kind != "v" or p != gs.p:
            raise ValueError(f"token {tok!r} does not belong to gate set {gs}")
        if not 1 <= i <= p + 1:
            raise ValueError(f"V index out of range in {tok!r}")
        return
    if gs.kind != "t":
        raise ValueError(f"token {tok!r} does not belong to gate set {gs}")


def parse_sequence(text: str, gate_set: GateSet) -> GateSequence:
    tokens = tuple(text.split())
    for tok in tokens:
        _check_token(tok, gate_set)
    return GateSequence(gate_set, tokens)


def format_sequence(seq: GateSequence) -> str:
    return " ".join(seq.tokens)


def clifford_channels() -> list[UnitaryChannel]:
    """The 24 single-qubit Clifford channels, index-stable."""
    return [entry["channel"] for entry in xs.clifford_table()]


def clifford_exact(idx: int, gate_set: GateSet = CLIFFORD_T_SET):
    if gate_set.kind == "t":
        return xs.clifford_t(idx)
    return xs.clifford_v(idx, gate_set.p)


def clifford_word(idx: int) -> str:
    """Generator word (over S, H) of Clifford channel idx."""
    return xs.clifford_table()[idx]["word"]


def vp_representatives(p: int) -> list[tuple[int, int, int, int]]:
    """The p+1 canonical V_p representatives as integer quaternions."""
    reps, _ = xs.vp_orbit_data(p)
    return list(reps)


def vp_gates(p: int) -> list[xs.VUnitary]:
    reps, _ = xs.vp_orbit_data(p)
    return [xs.vp_gate(p, i + 1) for i in range(len(reps))]


def _exact_gate(tok: str, gs: GateSet):
    if gs.kind == "t":
        if tok == "H":
            return xs.H_EXACT
        if tok == "S":
            return xs.S_EXACT
        if tok == "T":
            return xs.T_EXACT
    m = _TOKEN_RE.fullmatch(tok)
    if m and m.group(1) is not None:
        return clifford_exact(int(m.group(1)), gs)
    if m and m.group(2) is not None and gs.kind == "v":
        return xs.vp_gate(gs.p, int(m.group(3)))
    if gs.kind == "v" and tok in ("H", "S"):
        base = {"H": xs.H_EXACT, "S": xs.S_EXACT}  # noqa: F841  (t-only)
        raise ValueError(f"token {tok!r} is not part of gate set {gs}; use C<k>")
    raise ValueError(f"token {tok!r} is not valid for gate set {gs}")


def evaluate(seq: GateSequence):
    """Multiply the word out; returns (UnitaryChannel, exact unitary)."""
    gs = seq.gate_set
    if gs.kind == "t":
        acc = xs.IDENTITY_T
    else:
        from .rings import ZI

        acc = xs.VUnitary(ZI(1), ZI(0), gs.p, 0, 0, 0)
    for tok in seq.tokens:
        _check_token(tok, gs)
        acc = acc.mul(_exact_gate(tok, gs))
    return acc.to_channel(), acc


def ma_normal_form(u: xs.TUnitary) -> GateSequence:
    """Matsumoto–Amano normal form (T|ε)(HT|SHT)*C as a GateSequence."""
    return GateSequence(CLIFFORD_T_SET, tuple(xs.ma_tokens(u)))


def v_synthesize(u: xs.VUnitary, p: int | None = None) -> GateSequence:
    """Canonical V-word of u with exactly v_count(u) V tokens."""
    if p is not None and p != u.p:
        raise ValueError("prime disagrees with the unitary's gate set")
    return GateSequence(GateSet("v", u.p), tuple(xs.v_tokens(u)))
