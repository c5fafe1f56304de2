"""Probabilistic (mixed-unitary) synthesis.

The distance ½‖U − Σp(x)V_x‖⋄ is computed by a self-certifying bracket:
a feasible pure-state ascent gives the lower bound and a repaired dual
semidefinite solution the upper bound; the two must agree within tol.
Weight optimization is a single convex program (the distance is affine in
the Choi matrix, hence convex in the weights).
"""

from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .approx import BudgetExhausted, channels_within, get_enumerator
from .gates import GateSequence, GateSet
from .su2 import UnitaryChannel, diamond_distance

DEFAULT_TOL = 1e-7
PRUNE_GUARD = 1.05
MAX_CANDIDATES = 5000


class OracleBracketError(RuntimeError):
    """Primal and dual diamond-norm bounds failed to meet within tolerance."""


@dataclass(frozen=True)
class MixedChannel:
    """Probability-weighted list of unitary channels."""

    components: tuple[tuple[float, UnitaryChannel], ...]

    def __post_init__(self):
        if not self.components:
            raise ValueError("a mixed channel needs at least one component")
        total = sum(w for w, _ in self.components)
        if abs(total - 1.0) > 1e-12:
            raise ValueError(f"weights sum to {total}, not 1")
        if any(w < -1e-15 for w, _ in self.components):
            raise ValueError("negative weight")

    @classmethod
    def point_mass(cls, u: UnitaryChannel) -> "MixedChannel":
        return cls(((1.0, u),))


def _choi(u: UnitaryChannel) -> np.ndarray:
    """Choi matrix J(U) = Σ_ij U E_ij U† ⊗ E_ij (output factor first)."""
    m = u.matrix()
    phi = np.zeros(4, dtype=complex)
    for i in range(2):
        e = np.zeros(2, dtype=complex)
        e[i] = 1.0
        phi += np.kron(m @ e, e)
    return np.outer(phi, phi.conj())


def _choi_difference(u: UnitaryChannel, e: MixedChannel) -> np.ndarray:
    j = _choi(u)
    for w, v in e.components:
        j = j - w * _choi(v)
    return j


def _ptrace_out(y: np.ndarray) -> np.ndarray:
    return y[:2, :2] + y[2:, 2:]


def _primal_lower(u: UnitaryChannel, e: MixedChannel, starts: int) -> float:
    """Feasible lower bound: max over pure inputs of the output trace
    distance, by multi-start local ascent over 8 real parameters."""
    mats = [(1.0, np.kron(u.matrix(), np.eye(2)))]
    for w, v in e.components:
        mats.append((-w, np.kron(v.matrix(), np.eye(2))))

    def negated(x: np.ndarray) -> float:
        vec = x[:4] + 1j * x[4:]
        n = np.linalg.norm(vec)
        if n < 1e-9:
            return 0.0
        vec = vec / n
        rho = np.outer(vec, vec.conj())
        delta = sum(s * (m @ rho @ m.conj().T) for s, m in mats)
        eig = np.linalg.eigvalsh((delta + delta.conj().T) / 2)
        return -0.5 * float(np.abs(eig).sum())

    rng = np.random.default_rng(20240229)
    best = 0.0
    for _ in range(starts):
        res = minimize(negated, rng.normal(size=8), method="L-BFGS-B")
        best = max(best, -float(res.fun))
    return best



import warnings as _warnings

# advisory only: every bound extracted from a solve is feasibility-repaired
# and re-verified numerically, so reduced-accuracy solves cannot corrupt a
# certified bracket (and catch_warnings is not thread-safe)
_warnings.filterwarnings(
    "ignore", message="Solution may be inaccurate", category=UserWarning
)


def _solve_tight(prob) -> None:
    """Solve with CLARABEL pushed well below the certification tolerance."""
    import cvxpy as cp

    prob.solve(
        solver=cp.CLARABEL,
        tol_gap_abs=1e-11,
        tol_gap_rel=1e-11,
        tol_feas=1e-11,
        max_iter=500,
    )


# cvxpy problem objects (and expression construction) are not thread-safe;
# every build/parameter-set/solve runs under this lock
_SDP_LOCK = threading.Lock()

_DUAL_CACHE: dict[int, tuple] = {}


def _dual_problem():
    """Cached parametric dual SDP for ‖Δ‖⋄ with J as a parameter."""
    import cvxpy as cp

    if 0 not in _DUAL_CACHE:
        jre = cp.Parameter((4, 4))
        jim = cp.Parameter((4, 4))
        j = jre + 1j * jim
        y0 = cp.Variable((4, 4), hermitian=True)
        y1 = cp.Variable((4, 4), hermitian=True)
        blk = cp.bmat([[y0, -j], [-cp.conj(j).T, y1]])
        cons = [blk >> 0]
        obj = cp.Minimize(
            0.5
            * (
                cp.lambda_max(cp.partial_trace(y0, (2, 2), 0))
                + cp.lambda_max(cp.partial_trace(y1, (2, 2), 0))
            )
        )
        _DUAL_CACHE[0] = (cp.Problem(obj, cons), jre, jim, y0, y1)
    return _DUAL_CACHE[0]


def _dual_upper(j: np.ndarray) -> float:
    """Certified upper bound on ‖Δ‖⋄ from a repaired dual-feasible point."""
    import cvxpy as cp

    with _SDP_LOCK:
        prob, jre, jim, y0, y1 = _dual_problem()
        jre.value = j.real
        jim.value = j.imag
        _solve_tight(prob)
        if y0.value is None:
            raise OracleBracketError("dual SDP failed to solve")
        y0v = (y0.value + y0.value.conj().T) / 2
        y1v = (y1.value + y1.value.conj().T) / 2
    blk = np.block([[y0v, -j], [-j.conj().T, y1v]])
    lam_min = float(np.linalg.eigvalsh((blk + blk.conj().T) / 2).min())
    bump = max(0.0, -lam_min) + 1e-12
    ub = 0.5 * (
        float(np.linalg.eigvalsh(_ptrace_out(y0v + bump * np.eye(4))).max())
        + float(np.linalg.eigvalsh(_ptrace_out(y1v + bump * np.eye(4))).max())
    )
    return ub


def _primal_problem():
    """Cached parametric Watrous primal; call under _SDP_LOCK."""
    import cvxpy as cp

    if 1 not in _DUAL_CACHE:
        jre = cp.Parameter((4, 4))
        jim = cp.Parameter((4, 4))
        j_par = jre + 1j * jim
        x = cp.Variable((4, 4), complex=True)
        r0 = cp.Variable((2, 2), hermitian=True)
        r1 = cp.Variable((2, 2), hermitian=True)
        eye = np.eye(2)
        blk = cp.bmat([[cp.kron(eye, r0), x], [x.H, cp.kron(eye, r1)]])
        cons = [blk >> 0, cp.trace(r0) == 1, cp.trace(r1) == 1]
        obj = cp.Maximize(
            0.5 * cp.real(cp.trace(cp.conj(j_par).T @ x) + cp.trace(j_par @ x.H))
        )
        _DUAL_CACHE[1] = (cp.Problem(obj, cons), jre, jim, x, r0, r1)
    return _DUAL_CACHE[1]


def _primal_sdp_lower(j: np.ndarray) -> float:
    """Certified lower bound on ‖Δ‖⋄/2 from a repaired feasible point of the
    Watrous primal (any feasible point of a maximization is a witness)."""
    with _SDP_LOCK:
        prob, jre, jim, x, r0, r1 = _primal_problem()
        jre.value = j.real
        jim.value = j.imag
        _solve_tight(prob)
        if x.value is None:
            return 0.0
        xv = x.value
        r0_val, r1_val = r0.value, r1.value
    eye2 = np.eye(2)

    def _density(r):
        r = (r + r.conj().T) / 2
        w, v = np.linalg.eigh(r)
        w = np.clip(w, 1e-14, None)
        r = (v * w) @ v.conj().T
        return r / np.trace(r).real

    r0v, r1v = _density(r0_val), _density(r1_val)
    blk = np.block([[np.kron(eye2, r0v), xv], [xv.conj().T, np.kron(eye2, r1v)]])
    lam = float(np.linalg.eigvalsh((blk + blk.conj().T) / 2).min())
    # blend toward the strictly feasible center (X=0, ρ=I/2) until PSD
    gamma = 0.0
    if lam < 0:
        gamma = min(1.0, 2.0 * (-lam) / (1.0 + 2.0 * (-lam)) + 1e-12)
    xr = (1 - gamma) * xv
    r0r = (1 - gamma) * r0v + gamma * eye2 / 2
    r1r = (1 - gamma) * r1v + gamma * eye2 / 2
    blk = np.block([[np.kron(eye2, r0r), xr], [xr.conj().T, np.kron(eye2, r1r)]])
    if float(np.linalg.eigvalsh((blk + blk.conj().T) / 2).min()) < -1e-12:
        return 0.0
    val = 0.5 * float(
        np.real(np.trace(j.conj().T @ xr) + np.trace(j @ xr.conj().T))
    )
    return max(0.0, val / 2.0)


def diamond_mixed(
    u: UnitaryChannel,
    e: MixedChannel,
    tol: float = DEFAULT_TOL,
    starts: int = 8,
) -> float:
    """½‖U − E‖⋄ within tol, primal/dual bracketed.

    The lower bound comes from pure-state ascent, reinforced by a repaired
    feasible point of the primal semidefinite program when the ascent alone
    does not close the bracket.  Raises OracleBracketError when the bracket
    fails — never silently accepted.
    """
    if tol < 1e-9:
        raise ValueError("tol below the oracle's certification floor")
    j = _choi_difference(u, e)
    lb = _primal_lower(u, e, starts)
    ub = _dual_upper(j) / 2.0
    if ub - lb > tol:
        lb = max(lb, _primal_sdp_lower(j))
        if ub - lb > tol:
            lb = max(lb, _primal_lower(u, e, 4 * starts))
        if ub - lb > tol:
            raise OracleBracketError(
                f"diamond bracket [{lb:.3e}, {ub:.3e}] wider than tol={tol:.1e}"
            )
    return 0.5 * (lb + ub)


def optimize_mixture(
    u: UnitaryChannel,
    candidates: Sequence[UnitaryChannel],
    tol: float = DEFAULT_TOL,
) -> tuple[np.ndarray, float]:
    """Minimize d(U, Σ p(x)V_x) over the probability simplex.

    Returns (weights, value).  The optimum of the joint convex program is
    re-certified with the bracketing oracle at the returned weights, and the
    Lemma sandwich (min_x d)² − tol ≤ value ≤ min_x d + tol is enforced.
    """
    import cvxpy as cp

    if not candidates:
        raise ValueError("candidate list is empty")
    n = len(candidates)
    ju = _choi(u)
    jstack = np.stack([_choi(v) for v in candidates])  # (n, 4, 4)
    jre = jstack.real.reshape(n, 16)
    jim = jstack.imag.reshape(n, 16)
    with _SDP_LOCK:
        p = cp.Variable(n, nonneg=True)
        d_re = ju.real - cp.reshape(p @ jre, (4, 4), order="C")
        d_im = ju.imag - cp.reshape(p @ jim, (4, 4), order="C")
        d = d_re + 1j * d_im
        y0 = cp.Variable((4, 4), hermitian=True)
        y1 = cp.Variable((4, 4), hermitian=True)
        blk = cp.bmat([[y0, -d], [-cp.conj(d).T, y1]])
        obj = cp.Minimize(
            0.25
            * (
                cp.lambda_max(cp.partial_trace(y0, (2, 2), 0))
                + cp.lambda_max(cp.partial_trace(y1, (2, 2), 0))
            )
        )
        prob = cp.Problem(obj, [blk >> 0, cp.sum(p) == 1])
        _solve_tight(prob)
        if p.value is None:
            raise OracleBracketError("mixture SDP failed to solve")
        weights = np.clip(np.asarray(p.value, dtype=float), 0.0, None)
    weights /= weights.sum()
    mix = MixedChannel(tuple(zip(weights.tolist(), candidates)))
    value = diamond_mixed(u, mix, tol=max(tol, DEFAULT_TOL))
    dmin = min(diamond_distance(u, v) for v in candidates)
    if not (dmin * dmin - tol <= value <= dmin + tol):
        raise OracleBracketError(
            f"mixture value {value:.3e} escapes the sandwich "
            f"[{dmin*dmin:.3e}, {dmin:.3e}]"
        )
    return weights, value


def prob_gcount(
    u: UnitaryChannel,
    gate_set: GateSet,
    eps: float,
    budget: int,
    tol: float = DEFAULT_TOL,
) -> int:
    """Minimal t ≤ budget such that mixing level-≤t channels reaches eps.

    Candidates are restricted to the 2√eps-ball around the target (support
    restriction, ×1.05 float guard).  Raises BudgetExhausted with the best
    mixture value found.
    """
    if not 0.0 < eps <= 1.0:
        raise ValueError("eps must be in (0, 1]")
    radius = 2.0 * math.sqrt(eps) * PRUNE_GUARD
    best_value = math.inf
    enum = get_enumerator(gate_set)
    deepest = -1
    for t in range(budget + 1):
        try:
            enum.ensure(t)
        except MemoryError:
            break
        cands = channels_within(gate_set, u, t, radius)
        deepest = t
        if not cands:
            # min_x d > 2√eps ⟹ mixture value > 4·eps by the lower sandwich
            continue
        if cands[0][0] <= eps + 1e-14:
            return t  # a point mass already suffices
        if len(cands) > MAX_CANDIDATES:
            raise MemoryError(
                f"{len(cands)} candidates at level {t}; prune radius too wide"
            )
        _, value = optimize_mixture(u, [c[2] for c in cands], tol=tol)
        best_value = min(best_value, value)
        if value <= eps + tol:
            return t
    raise BudgetExhausted(best_value, None, deepest)


def mixture_report(
    u: UnitaryChannel,
    gate_set: GateSet,
    eps: float,
    budget: int,
    tol: float = DEFAULT_TOL,
) -> tuple[int, list[tuple[GateSequence, float]], float]:
    """prob_gcount plus the achieving words and weights (CLI surface)."""
    t = prob_gcount(u, gate_set, eps, budget, tol=tol)
    radius = 2.0 * math.sqrt(eps) * PRUNE_GUARD
    cands = channels_within(gate_set, u, t, radius)
    weights, value = optimize_mixture(u, [c[2] for c in cands], tol=tol)
    support = [
        (cands[i][1], float(weights[i]))
        for i in range(len(cands))
        if weights[i] > 1e-9
    ]
    return t, support, value
