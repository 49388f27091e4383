"""Command-line surface.

Single results go to stdout as JSON, experiment sweeps as CSV. Targets are
1-indexed in all output. Exit codes: 0 success, 2 bad input, 1 internal
error.
"""

from __future__ import annotations

import argparse
import json
import sys

from .core import (
    SsgError,
    ValidationError,
    load_instance,
    save_instance,
)
from .experiment import load_config, run_experiment, write_csv
from .gen import GenConfig, config_meta, generate_instance
from .manipulation import optimal_report
from .policy import (
    QR_PHI_DEFAULTS,
    algorithm1,
    eop,
    load_policy,
    max_eop_policy,
    policy_to_list,
    qr_policy,
    save_policy,
    sse_policy,
    validate_policy,
)
from .solvers import maximin, solve_sse


def _emit(obj):
    json.dump(obj, sys.stdout, indent=2)
    sys.stdout.write("\n")


def _load(path):
    game, types, _ = load_instance(path)
    return game, types


def _get_type(types, k):
    if not 1 <= k <= len(types):
        raise ValidationError(f"type index {k} out of range 1..{len(types)}")
    return types[k - 1]


def _cmd_gen(args):
    cfg = GenConfig(n=args.n, m=args.m, lam=getattr(args, "lambda"), rho=args.rho,
                    seed=args.seed, include_zero_sum=args.include_zero_sum,
                    payoff_low=args.low, payoff_high=args.high)
    game, types = generate_instance(cfg)
    save_instance(args.out, game, types, meta=config_meta(cfg))
    _emit({"written": args.out, "n": game.n, "m": game.m, "types": len(types)})
    return 0


def _cmd_sse(args):
    game, types = _load(args.game)
    theta = _get_type(types, args.type)
    res = solve_sse(game, theta)
    _emit({
        "coverage": res.coverage.probs.tolist(),
        "target": res.target + 1,
        "def_value": res.def_value,
        "atk_value": res.atk_value,
    })
    return 0


def _cmd_maximin(args):
    game, _ = _load(args.game)
    res = maximin(game)
    _emit({
        "coverage": res.coverage.probs.tolist(),
        "value": res.value,
        "fully_mixed": res.fully_mixed,
    })
    return 0


def _cmd_attack(args):
    game, types = _load(args.game)
    theta = _get_type(types, args.type)
    rep = optimal_report(game, theta)
    _emit({
        "fake_type": {
            "atk_rewards": rep.fake_type.atk_rewards.tolist(),
            "atk_penalties": rep.fake_type.atk_penalties.tolist(),
        },
        "induced_coverage": rep.induced.coverage.probs.tolist(),
        "induced_target": rep.induced.target + 1,
        "atk_true_value": rep.atk_true_value,
        "truthful_atk_value": rep.truthful_atk_value,
        "truthful_def_value": rep.truthful_def_value,
        "manip_def_value": rep.manip_def_value,
        "def_loss": rep.truthful_def_value - rep.manip_def_value,
    })
    return 0


def _cmd_policy_optimal(args):
    game, types = _load(args.game)
    if args.xi is not None:
        pol = algorithm1(game, types, args.xi)
        if pol is None:
            _emit({"feasible": False, "xi": args.xi})
            return 0
        xi_star = args.xi
    else:
        pol, xi_star = max_eop_policy(game, types, delta=args.delta)
    rep = eop(game, types, pol)
    out = {"feasible": True, "xi": xi_star, "eop": rep.overall,
           "policy": policy_to_list(pol)}
    if args.out:
        save_policy(args.out, pol)
        out["written"] = args.out
    _emit(out)
    return 0


def _cmd_policy_qr(args):
    game, types = _load(args.game)
    pol = qr_policy(game, types, args.phi)
    rep = eop(game, types, pol)
    out = {"phi": args.phi, "eop": rep.overall, "policy": policy_to_list(pol)}
    if args.out:
        save_policy(args.out, pol)
        out["written"] = args.out
    _emit(out)
    return 0


def _cmd_eop(args):
    game, types = _load(args.game)
    spec = args.policy
    phi = None
    if spec == "sse":
        pol = sse_policy(game, types)
    elif spec == "optimal":
        pol, _ = max_eop_policy(game, types)
    elif spec == "qr" or spec.startswith("qr:"):
        phi = float(spec.split(":", 1)[1]) if ":" in spec else QR_PHI_DEFAULTS[-1]
        pol = qr_policy(game, types, phi)
    else:
        pol = load_policy(spec, game)
        if len(pol) != len(types):
            raise ValidationError(
                f"policy file has {len(pol)} entries for {len(types)} types")
        validate_policy(game, types, pol)
    rep = eop(game, types, pol)
    out = {
        "policy": spec if phi is None else f"qr:{phi:g}",
        "overall": rep.overall,
        "per_type": [
            {"eop": t.eop, "best_report": t.best_report + 1,
             "def_value": t.def_value, "sse_value": t.sse_value}
            for t in rep.per_type
        ],
    }
    _emit(out)
    return 0


def _cmd_experiment(args):
    cfg = load_config(args.config)
    rows = run_experiment(cfg)
    if args.out:
        write_csv(args.out, rows)
    else:
        write_csv(sys.stdout, rows)
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="ssg", description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)

    g = sub.add_parser("gen", help="generate a random instance file")
    g.add_argument("--n", type=int, required=True)
    g.add_argument("--m", type=int, required=True)
    g.add_argument("--lambda", type=int, required=True, dest="lambda")
    g.add_argument("--rho", type=float, required=True)
    g.add_argument("--seed", type=int, required=True)
    g.add_argument("--include-zero-sum", action="store_true")
    g.add_argument("--low", type=float, default=0.0)
    g.add_argument("--high", type=float, default=1.0)
    g.add_argument("-o", "--out", required=True)
    g.set_defaults(fn=_cmd_gen)

    s = sub.add_parser("sse", help="optimal commitment against one stored type")
    s.add_argument("--game", required=True)
    s.add_argument("--type", type=int, default=1, help="1-based type index")
    s.set_defaults(fn=_cmd_sse)

    mm = sub.add_parser("maximin", help="worst-case-optimal coverage")
    mm.add_argument("--game", required=True)
    mm.set_defaults(fn=_cmd_maximin)

    at = sub.add_parser("attack", help="optimal fake report for a stored type")
    at.add_argument("--game", required=True)
    at.add_argument("--type", type=int, default=1, help="1-based type index")
    at.set_defaults(fn=_cmd_attack)

    pol = sub.add_parser("policy", help="construct a defender policy")
    psub = pol.add_subparsers(dest="kind", required=True)
    po = psub.add_parser("optimal", help="threshold or best-ratio policy")
    po.add_argument("--game", required=True)
    po.add_argument("--xi", type=float, default=None, help="fixed threshold in [0,1]")
    po.add_argument("--maximize", action="store_true",
                    help="bisect for the best threshold (default when --xi absent)")
    po.add_argument("--delta", type=float, default=1e-6)
    po.add_argument("-o", "--out", default=None)
    po.set_defaults(fn=_cmd_policy_optimal)
    pq = psub.add_parser("qr", help="softmax tie-breaking policy")
    pq.add_argument("--game", required=True)
    pq.add_argument("--phi", type=float, required=True)
    pq.add_argument("-o", "--out", default=None)
    pq.set_defaults(fn=_cmd_policy_qr)

    e = sub.add_parser("eop", help="efficiency of a policy on a stored instance")
    e.add_argument("--game", required=True)
    e.add_argument("--policy", required=True,
                   help="'sse', 'optimal', 'qr[:phi]', or a policy file path")
    e.set_defaults(fn=_cmd_eop)

    x = sub.add_parser("experiment", help="run a sweep from a config file")
    x.add_argument("--config", required=True)
    x.add_argument("-o", "--out", default=None)
    x.set_defaults(fn=_cmd_experiment)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return args.fn(args)
    except (ValidationError, FileNotFoundError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except SsgError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
