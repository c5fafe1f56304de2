"""Experiment suites: G-count scaling slopes, covering trends, probabilistic
vs deterministic comparisons, and the super-exponential (Liouville-type)
construction with exact certificates.

Runs are deterministic under a fixed config + seed: every cell derives its
RNG stream from (seed, target index, ε index), and results merge in config
order.  With timings off (the default) the CSV is byte-identical across runs.
"""

from __future__ import annotations

import configparser
import json
import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Optional, Sequence

import numpy as np

from . import approx, prob_synth
from .approx import BudgetExhausted, channels_within, get_enumerator
from .exact_synth import (
    IDENTITY_T,
    TUnitary,
    exact_overlap,
    recognize_t_ratio,
    recognize_v,
)
from .gates import GateSequence, GateSet, evaluate
from .rings import QRoot2
from .su2 import UnitaryChannel, haar_sample, parse_channel, rz

DEFAULT_EPS_GRID = (0.3, 0.2, 0.15, 0.1, 0.07, 0.05)


class ConfigError(ValueError):
    pass


class EdgeTargetError(ValueError):
    """A proposed edge-case target failed the non-synthesizability gate."""


@dataclass(frozen=True)
class ExperimentConfig:
    kind: str = "scaling"
    gate_set: GateSet = field(default_factory=lambda: GateSet("v", 5))
    seed: int = 42
    budget: int = 12
    eps_grid: tuple[float, ...] = DEFAULT_EPS_GRID
    prob: bool = False
    timings: bool = False
    haar_targets: int = 0
    rz_angles: tuple[float, ...] = ()
    point_targets: tuple[str, ...] = ()
    edge_targets: bool = False
    channel_targets: tuple[str, ...] = ()
    out_csv: Optional[str] = None
    out_json: Optional[str] = None
    # liouville
    n_max: int = 3
    c_prime: float = 12.0
    # covering
    k_max: int = 4
    samples: int = 10_000
    cover_eps: tuple[float, ...] = ()

    def __post_init__(self):
        if list(self.eps_grid) != sorted(self.eps_grid, reverse=True) or len(
            set(self.eps_grid)
        ) != len(self.eps_grid):
            raise ConfigError("eps grid must be strictly decreasing")
        if self.budget < 0:
            raise ConfigError("budget must be nonnegative")


def parse_config(path: str | Path) -> ExperimentConfig:
    """Load the plain-text key = value config (INI sections)."""
    cp = configparser.ConfigParser()
    read = cp.read(path)
    if not read:
        raise ConfigError(f"cannot read config {path}")
    exp = cp["experiment"] if "experiment" in cp else {}
    tgt = cp["targets"] if "targets" in cp else {}

    def floats(s: str) -> tuple[float, ...]:
        return tuple(float(x) for x in s.replace(",", " ").split())

    kwargs = {}
    if "kind" in exp:
        kwargs["kind"] = exp["kind"].strip()
    if "gate_set" in exp:
        kwargs["gate_set"] = GateSet.parse(exp["gate_set"])
    for key in ("seed", "budget", "n_max", "k_max", "samples"):
        if key in exp:
            kwargs[key] = int(exp[key])
    if "c_prime" in exp:
        kwargs["c_prime"] = float(exp["c_prime"])
    if "eps_grid" in exp:
        kwargs["eps_grid"] = floats(exp["eps_grid"])
    if "cover_eps" in exp:
        kwargs["cover_eps"] = floats(exp["cover_eps"])
    for key in ("prob", "timings"):
        if key in exp:
            kwargs[key] = exp[key].strip().lower() in ("on", "true", "1", "yes")
    if "out_csv" in exp:
        kwargs["out_csv"] = exp["out_csv"].strip()
    if "out_json" in exp:
        kwargs["out_json"] = exp["out_json"].strip()
    if "haar" in tgt:
        kwargs["haar_targets"] = int(tgt["haar"])
    if "rz" in tgt:
        kwargs["rz_angles"] = floats(tgt["rz"])
    if "point" in tgt:
        kwargs["point_targets"] = tuple(
            s.strip() for s in tgt["point"].split(";") if s.strip()
        )
    if "channel" in tgt:
        kwargs["channel_targets"] = tuple(
            s.strip() for s in tgt["channel"].split(";") if s.strip()
        )
    if "edge" in tgt:
        kwargs["edge_targets"] = tgt["edge"].strip().lower() in ("default", "on", "true")
    return ExperimentConfig(**kwargs)


@dataclass
class ScalingRow:
    target_id: str
    kind: str
    eps: float
    det_count: Optional[int]
    prob_count: Optional[int]
    best_distance: float
    elapsed_ms: Optional[int]


CSV_HEADER = "target_id,kind,eps,det_count,prob_count,best_distance,elapsed_ms"


def _row_to_csv(r: ScalingRow) -> str:
    det = "" if r.det_count is None else str(r.det_count)
    prob = "" if r.prob_count is None else str(r.prob_count)
    ms = "" if r.elapsed_ms is None else str(r.elapsed_ms)
    return (
        f"{r.target_id},{r.kind},{r.eps:.17g},{det},{prob},"
        f"{r.best_distance:.17g},{ms}"
    )


def rows_to_csv(rows: Sequence[ScalingRow]) -> str:
    return "\n".join([CSV_HEADER] + [_row_to_csv(r) for r in rows]) + "\n"


# ---------------------------------------------------------------------------
# targets


_EDGE_RATIOS = (
    ("u3", (1, 1, 1, 0)),     # U(1,1,1,0)/√3: entry 1/√3 outside both rings
    ("u30", (1, 2, 3, 4)),    # U(1,2,3,4)/√30
)


def edge_case_targets(gate_set: GateSet) -> list[tuple[str, UnitaryChannel, tuple]]:
    """Named hard targets with ratios in the gate set's ring, each verified
    not exactly synthesizable (rejected otherwise)."""
    out = []
    for name, ratio in _EDGE_RATIOS:
        if gate_set.kind == "t":
            hit = recognize_t_ratio(list(ratio))
        else:
            hit = recognize_v(list(ratio), gate_set.p)
        if hit is not None:
            raise EdgeTargetError(
                f"edge candidate {name} {ratio} is exactly synthesizable over "
                f"{gate_set}: {hit!r}"
            )
        n = sum(c * c for c in ratio)
        scale = 1.0 / math.sqrt(n)
        ch = UnitaryChannel([c * scale for c in ratio])
        out.append((name, ch, ratio))
    return out


def build_targets(cfg: ExperimentConfig) -> list[tuple[str, str, UnitaryChannel]]:
    """(target_id, kind, channel) list in deterministic config order."""
    targets = []
    rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, 0xA11CE)))
    for i in range(cfg.haar_targets):
        targets.append((f"haar{i}", "haar", haar_sample(rng)))
    for theta in cfg.rz_angles:
        targets.append((f"rz:{theta:g}", "rz", rz(theta)))
    for spec in cfg.point_targets:
        coords = tuple(int(x) for x in spec.replace(",", " ").split())
        n = sum(c * c for c in coords)
        scale = 1.0 / math.sqrt(n)
        targets.append(
            (f"point:{'_'.join(map(str, coords))}", "point",
             UnitaryChannel([c * scale for c in coords]))
        )
    for spec in cfg.channel_targets:
        targets.append((f"channel:{spec}", "channel", parse_channel(spec)))
    if cfg.edge_targets:
        for name, ch, _ in edge_case_targets(cfg.gate_set):
            targets.append((f"edge:{name}", "edge", ch))
    if not targets:
        raise ConfigError("no targets configured")
    return targets


# ---------------------------------------------------------------------------
# slope fitting


def fit_slope(
    eps_values: Sequence[float], counts: Sequence[float], log_base: float
) -> tuple[float, float, float]:
    """OLS fit count ≈ slope·log_base(1/ε) + intercept; returns
    (slope, intercept, residual sum of squares)."""
    if len(eps_values) != len(counts) or len(eps_values) < 3:
        raise ValueError("need at least 3 (eps, count) rows")
    x = np.array([math.log(1.0 / e, log_base) for e in eps_values])
    y = np.array(counts, dtype=float)
    if float(np.ptp(x)) < 1e-12:
        raise ValueError("degenerate eps grid")
    a = np.vstack([x, np.ones_like(x)]).T
    coef, *_ = np.linalg.lstsq(a, y, rcond=None)
    resid = float(np.sum((a @ coef - y) ** 2))
    return float(coef[0]), float(coef[1]), resid


def fit_slope_rows(rows: Sequence[ScalingRow], gate_set: GateSet) -> float:
    usable = [(r.eps, r.det_count) for r in rows if r.det_count is not None]
    slope, _, _ = fit_slope(
        [e for e, _ in usable], [c for _, c in usable], gate_set.log_base
    )
    return slope


# ---------------------------------------------------------------------------
# scaling runs


def _pool_size() -> int:
    env = os.environ.get("QSYNTH_THREADS")
    if env:
        return max(1, int(env))
    return min(8, os.cpu_count() or 1)


def _run_cell(cfg, target_id, kind, channel, eps):
    t0 = time.perf_counter()
    det = None
    best = math.nan
    try:
        det, word = approx.gcount_approx(channel, cfg.gate_set, eps, cfg.budget)
        ch, _ = evaluate(word)
        from .su2 import diamond_distance

        best = diamond_distance(channel, ch)
    except BudgetExhausted as exc:
        best = exc.best_distance
    prob_count = None
    if cfg.prob:
        try:
            prob_count = prob_synth.prob_gcount(channel, cfg.gate_set, eps, cfg.budget)
        except (BudgetExhausted, MemoryError):
            prob_count = None
    ms = int(1000 * (time.perf_counter() - t0)) if cfg.timings else None
    return ScalingRow(target_id, kind, eps, det, prob_count, best, ms)


def check_invariants(rows: Sequence[ScalingRow]) -> list[str]:
    """Monotonicity violations (empty list = all invariants hold)."""
    problems = []
    by_target: dict[str, list[ScalingRow]] = {}
    for r in rows:
        by_target.setdefault(r.target_id, []).append(r)
    for tid, rs in by_target.items():
        # rows are stored with ε decreasing, so counts must be nondecreasing
        counts = [r.det_count for r in rs if r.det_count is not None]
        for i in range(len(counts) - 1):
            if counts[i] > counts[i + 1]:
                problems.append(f"{tid}: det_count increased as eps grew")
                break
        for r in rs:
            if r.det_count is not None and r.prob_count is not None:
                if r.prob_count > r.det_count:
                    problems.append(f"{tid}: prob_count > det_count at eps={r.eps}")
    return problems


def scaling_run(cfg: ExperimentConfig):
    """Run the det (and optionally prob) count sweep.

    Returns (rows, slopes, problems): slopes is {target_id: fitted slope},
    problems the list of invariant violations (empty when all hold).
    """
    targets = build_targets(cfg)
    cells = [
        (tid, kind, ch, eps) for tid, kind, ch in targets for eps in cfg.eps_grid
    ]
    with ThreadPoolExecutor(max_workers=_pool_size()) as pool:
        rows = list(
            pool.map(lambda c: _run_cell(cfg, c[0], c[1], c[2], c[3]), cells)
        )
    slopes = {}
    for tid, kind, _ in targets:
        rs = [r for r in rows if r.target_id == tid]
        try:
            slopes[tid] = fit_slope_rows(rs, cfg.gate_set)
        except ValueError:
            slopes[tid] = None
    problems = check_invariants(rows)
    if cfg.out_csv:
        path = Path(cfg.out_csv)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(rows_to_csv(rows))
    if cfg.out_json:
        path = Path(cfg.out_json)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(summary_json(cfg, slopes, problems))
    return rows, slopes, problems


def summary_json(cfg: ExperimentConfig, slopes: dict, problems: list[str]) -> str:
    """The published JSON summary: slopes, config echo, invariant status."""
    payload = {
        "config": {
            "gate_set": str(cfg.gate_set),
            "log_base": cfg.gate_set.log_base,
            "seed": cfg.seed,
            "budget": cfg.budget,
            "eps_grid": list(cfg.eps_grid),
            "prob": cfg.prob,
        },
        "invariants_ok": not problems,
        "problems": problems,
        "slopes": slopes,
    }
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# covering experiment


def covering_run(cfg: ExperimentConfig):
    """Covering radius (and uncovered fractions) of the gate set's integer
    point database, levels 1..k_max."""
    from . import lattice

    db = lattice.build_db(cfg.gate_set, cfg.k_max)
    lines = ["level,covering_radius," + ",".join(
        f"uncovered@{e:g}" for e in cfg.cover_eps
    )]
    radii = []
    for k in range(1, cfg.k_max + 1):
        rng = np.random.default_rng(np.random.SeedSequence((cfg.seed, 1, k)))
        rad = lattice.covering_radius(db, k, cfg.samples, rng)
        fracs = []
        for e in cfg.cover_eps:
            rng_e = np.random.default_rng(np.random.SeedSequence((cfg.seed, 2, k)))
            fracs.append(
                lattice.uncovered_fraction(db, k, e, cfg.samples, rng_e)
            )
        radii.append(rad)
        lines.append(
            f"{k},{rad:.17g}" + ("," if fracs else "")
            + ",".join(f"{f:.17g}" for f in fracs)
        )
    ok = all(radii[i] > radii[i + 1] for i in range(len(radii) - 1))
    csv_text = "\n".join(lines) + "\n"
    if cfg.out_csv:
        path = Path(cfg.out_csv)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(csv_text)
    if cfg.out_json:
        Path(cfg.out_json).parent.mkdir(parents=True, exist_ok=True)
        Path(cfg.out_json).write_text(
            json.dumps(
                {"covering_radius": dict(zip(range(1, cfg.k_max + 1), radii)),
                 "strictly_decreasing": ok},
                indent=2,
                sort_keys=True,
            )
            + "\n"
        )
    return radii, ok, csv_text


# ---------------------------------------------------------------------------
# Liouville-type construction


class LiouvilleSearchFailure(RuntimeError):
    def __init__(self, n: int, deepest_level: int):
        super().__init__(
            f"no certified candidate for component {n} within level {deepest_level}"
        )
        self.n = n
        self.deepest_level = deepest_level


@dataclass
class LiouvilleComponent:
    n: int
    eps: Fraction
    level: int
    word: GateSequence
    unitary: TUnitary
    d_sq: QRoot2  # exact squared distance to the identity channel


@dataclass
class LiouvilleResult:
    components: list[LiouvilleComponent]
    prefix_words: list[tuple[str, ...]]
    prefix_unitaries: list[TUnitary]
    telescoping_exact: bool


def _certify_annulus(u: TUnitary, eps: Fraction) -> Optional[QRoot2]:
    """Exact check ε/2 ≤ d(u, id) ≤ ε; returns d² when it holds."""
    overlap = exact_overlap(IDENTITY_T, u)
    d_sq = QRoot2(1) - overlap
    lo = QRoot2(eps * eps / 4)
    hi = QRoot2(eps * eps)
    if (d_sq - lo).sign() >= 0 and (hi - d_sq).sign() >= 0:
        return d_sq
    return None


def liouville_generate(n_max: int, c_prime: float = 12.0) -> LiouvilleResult:
    """Components U_n with ε_n/2 ≤ d(U_n, id) ≤ ε_n for ε_n = 2^(−n!),
    certified in exact arithmetic, with T-counts ≤ c′·n!.

    Levels are searched exhaustively; a component whose annulus is beyond
    the enumerable range raises LiouvilleSearchFailure carrying the deepest
    level reached.
    """
    if not 1 <= n_max <= 4:
        raise ValueError("n_max must be in 1..4 (ε₄ = 2⁻²⁴ is the outer limit)")
    gate_set = GateSet("t")
    enum = get_enumerator(gate_set)
    identity_channel = UnitaryChannel([1.0, 0.0, 0.0, 0.0])
    components: list[LiouvilleComponent] = []
    for n in range(1, n_max + 1):
        eps = Fraction(1, 2 ** math.factorial(n))
        eps_f = float(eps)
        budget = int(c_prime * math.factorial(n))
        found = None
        deepest = 0
        for t in range(1, budget + 1):
            try:
                enum.ensure(t)
            except MemoryError:
                break
            deepest = t
            window = [
                rec
                for rec in channels_within(
                    gate_set, identity_channel, t, eps_f * 1.0000001
                )
                if rec[0] >= 0.4999999 * eps_f
            ]
            for _, word, _ch in window:
                _, exact = evaluate(word)
                d_sq = _certify_annulus(exact, eps)
                if d_sq is not None:
                    found = LiouvilleComponent(n, eps, t, word, exact, d_sq)
                    break
            if found:
                break
        if not found:
            raise LiouvilleSearchFailure(n, deepest)
        components.append(found)

    prefix_words: list[tuple[str, ...]] = []
    prefix_unitaries: list[TUnitary] = []
    acc = None
    toks: tuple[str, ...] = ()
    for comp in components:
        acc = comp.unitary if acc is None else acc.mul(comp.unitary)
        toks = toks + comp.word.tokens
        prefix_words.append(toks)
        prefix_unitaries.append(acc)

    # telescoping d(V_m, V_{m−1}) = d(U_m, id), exactly
    tele = True
    for i in range(1, len(prefix_unitaries)):
        lhs = exact_overlap(prefix_unitaries[i - 1], prefix_unitaries[i])
        rhs = exact_overlap(IDENTITY_T, components[i].unitary)
        if lhs != rhs:
            tele = False
    return LiouvilleResult(components, prefix_words, prefix_unitaries, tele)
