"""qsynth command line.

Verbs:
    synth exact    exact recognition + canonical word for a point/matrix
    synth approx   optimal deterministic ε-approximation
    prob-synth     optimal probabilistic (mixed) synthesis
    enumerate      integer quaternion points of a sphere level
    experiment     scaling | liouville | covering suites from a config file

Exit code 0 only when every invariant check of the invoked verb passes.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import approx, experiments, lattice, prob_synth
from .exact_synth import recognize_t_ratio, recognize_v
from .gates import GateSet, ma_normal_form, v_synthesize
from .rings import ZRoot2, parse_zroot2
from .su2 import parse_channel


def _parse_point(text: str) -> list[ZRoot2]:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 4:
        raise SystemExit("a point needs 4 comma-separated coordinates")
    return [parse_zroot2(p) for p in parts]


def _cmd_synth_exact(args) -> int:
    gs = GateSet.parse(args.set)
    coords = _parse_point(args.point)
    if gs.kind == "t":
        u = recognize_t_ratio(coords)
        if u is None:
            print(json.dumps({"synthesizable": False}))
            return 1
        word = ma_normal_form(u)
        out = {"g_count": word.g_count, "lde": u.k, "word": str(word)}
    else:
        if any(c.b != 0 for c in coords):
            raise SystemExit("Clifford+V points must have integer coordinates")
        u = recognize_v([c.a for c in coords], gs.p)
        if u is None:
            print(json.dumps({"synthesizable": False}))
            return 1
        word = v_synthesize(u)
        out = {"g_count": word.g_count, "lde": u.k, "word": str(word)}
    if args.out:
        Path(args.out).write_text(str(word) + "\n")
    print(json.dumps(out, sort_keys=True))
    return 0


def _cmd_synth_approx(args) -> int:
    gs = GateSet.parse(args.set)
    target = parse_channel(args.target)
    try:
        count, word = approx.gcount_approx(target, gs, args.eps, args.budget)
    except approx.BudgetExhausted as exc:
        print(
            json.dumps(
                {
                    "budget_exhausted": True,
                    "best_distance": exc.best_distance,
                    "deepest_level": exc.deepest_level,
                },
                sort_keys=True,
            )
        )
        return 1
    from .gates import evaluate
    from .su2 import diamond_distance

    ch, _ = evaluate(word)
    print(
        json.dumps(
            {
                "count": count,
                "distance": diamond_distance(target, ch),
                "word": str(word),
            },
            sort_keys=True,
        )
    )
    return 0


def _cmd_prob_synth(args) -> int:
    gs = GateSet.parse(args.set)
    target = parse_channel(args.target)
    try:
        count, support, value = prob_synth.mixture_report(
            target, gs, args.eps, args.budget
        )
    except approx.BudgetExhausted as exc:
        print(
            json.dumps(
                {"budget_exhausted": True, "best_value": exc.best_distance},
                sort_keys=True,
            )
        )
        return 1
    print(
        json.dumps(
            {
                "count": count,
                "value": value,
                "weights": [[str(w), p] for w, p in support],
            },
            sort_keys=True,
        )
    )
    return 0


def _cmd_enumerate(args) -> int:
    gs = GateSet.parse(args.set)
    lines = ["level,alpha_a,alpha_b,beta_a,beta_b,gamma_a,gamma_b,delta_a,delta_b,n"]
    if gs.kind == "t":
        points = lattice.enumerate_szroot2(args.level)
    else:
        points = lattice.enumerate_sz(gs.p**args.level)
    for p in points:
        cs = []
        for c in p.coords:
            cs.extend([str(c.a), str(c.b)])
        lines.append(f"{args.level}," + ",".join(cs) + f",{p.n.a}")
    text = "\n".join(lines) + "\n"
    if args.out:
        Path(args.out).parent.mkdir(parents=True, exist_ok=True)
        Path(args.out).write_text(text)
        print(f"{len(points)} points -> {args.out}")
    else:
        sys.stdout.write(text)
    return 0


def _cmd_experiment(args) -> int:
    cfg = experiments.parse_config(args.config)
    kind = args.suite or cfg.kind
    if kind == "scaling":
        rows, slopes, problems = experiments.scaling_run(cfg)
        if not cfg.out_csv:
            sys.stdout.write(experiments.rows_to_csv(rows))
        print(json.dumps({"slopes": slopes}, indent=2, sort_keys=True))
        for p in problems:
            print(f"invariant violation: {p}", file=sys.stderr)
        return 0 if not problems else 1
    if kind == "covering":
        radii, ok, csv_text = experiments.covering_run(cfg)
        if not cfg.out_csv:
            sys.stdout.write(csv_text)
        print(
            json.dumps(
                {"covering_radius": radii, "strictly_decreasing": ok}, sort_keys=True
            )
        )
        return 0 if ok else 1
    if kind == "liouville":
        try:
            res = experiments.liouville_generate(cfg.n_max, cfg.c_prime)
        except experiments.LiouvilleSearchFailure as exc:
            print(
                json.dumps(
                    {"failed_component": exc.n, "deepest_level": exc.deepest_level},
                    sort_keys=True,
                )
            )
            return 1
        payload = {
            "components": [
                {
                    "n": comp.n,
                    "eps": f"1/{comp.eps.denominator}",
                    "t_count": comp.word.g_count,
                    "level": comp.level,
                    "word": str(comp.word),
                    "d": float(comp.d_sq.to_float()) ** 0.5,
                }
                for comp in res.components
            ],
            "telescoping_exact": res.telescoping_exact,
        }
        out = json.dumps(payload, indent=2, sort_keys=True)
        if cfg.out_json:
            Path(cfg.out_json).parent.mkdir(parents=True, exist_ok=True)
            Path(cfg.out_json).write_text(out + "\n")
        print(out)
        return 0 if res.telescoping_exact else 1
    raise SystemExit(f"unknown experiment suite {kind!r}")


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="qsynth", description=__doc__)
    sub = ap.add_subparsers(dest="verb", required=True)

    synth = sub.add_parser("synth", help="exact or approximate synthesis")
    ssub = synth.add_subparsers(dest="mode", required=True)
    se = ssub.add_parser("exact", help="recognize + synthesize a point exactly")
    se.add_argument("--set", default="t", help="gate set: t | v<p>")
    se.add_argument("--point", required=True, help="α,β,γ,δ (ints or a±bw2)")
    se.add_argument("--out", help="write the .gseq word here")
    se.set_defaults(func=_cmd_synth_exact)
    sa = ssub.add_parser("approx", help="optimal deterministic approximation")
    sa.add_argument("--set", default="t")
    sa.add_argument("--target", required=True, help="channel literal q:(a,b,c,d)")
    sa.add_argument("--eps", type=float, required=True)
    sa.add_argument("--budget", type=int, default=12)
    sa.set_defaults(func=_cmd_synth_approx)

    pb = sub.add_parser("prob-synth", help="optimal probabilistic synthesis")
    pb.add_argument("--set", default="v5")
    pb.add_argument("--target", required=True)
    pb.add_argument("--eps", type=float, required=True)
    pb.add_argument("--budget", type=int, default=10)
    pb.set_defaults(func=_cmd_prob_synth)

    en = sub.add_parser("enumerate", help="integer points of a sphere level")
    en.add_argument("--set", default="v5")
    en.add_argument("--level", type=int, required=True)
    en.add_argument("--out", help="CSV output path")
    en.set_defaults(func=_cmd_enumerate)

    exp = sub.add_parser("experiment", help="run a configured experiment suite")
    exp.add_argument("suite", nargs="?", choices=["scaling", "liouville", "covering"])
    exp.add_argument("--config", required=True)
    exp.set_defaults(func=_cmd_experiment)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
