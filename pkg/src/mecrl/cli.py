"""Command line interface.

Subcommands:
    train     one algorithm, one seed -> metrics.csv + per-user checkpoints
    compare   both algorithms on shared seeds -> per-run CSVs + summary grid
    validate  built-in oracle checks, nonzero exit on failure
    replay    greedy re-evaluation of a trained run's checkpoints

Seed precedence: --seed flag, then the config file, then the MECRL_SEED
environment variable, then 0.
"""

import argparse
import json
import os
import sys
from pathlib import Path

from .checkpoint import CorruptCheckpointError, load_checkpoint, save_checkpoint
from .config import ConfigError, RunConfig, apply_override, from_dict, load_config, save_config, to_dict
from .metrics import format_summary, summarize, write_metrics, write_trace
from .training import evaluate_run, train_matrix, train_run
from .validation import run_validation


def _add_common(p):
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--episodes", type=int, help="episodes to run")
    p.add_argument("--out", help="output directory")
    p.add_argument(
        "--override",
        action="append",
        default=[],
        metavar="KEY=VALUE",
        help="dotted config override, e.g. env.w=0.5 (repeatable)",
    )


def _build_parser():
    parser = argparse.ArgumentParser(prog="mecrl", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train one algorithm on one seed")
    _add_common(p)
    p.add_argument("--algo", choices=("ddpg", "td3"))
    p.add_argument("--seed", type=int)
    p.add_argument("--trace", action="store_true", help="also write per-step trace.csv")

    p = sub.add_parser("compare", help="train both algorithms on shared seeds")
    _add_common(p)
    p.add_argument("--seed", type=int)
    p.add_argument("--seeds", help="comma-separated seed list, e.g. 1,2,3")
    p.add_argument("--tail", type=float, default=0.25, help="tail fraction for the summary")
    p.add_argument("--jobs", type=int, default=1, help="worker processes for the run matrix")

    sub.add_parser("validate", help="run the built-in oracle checks")

    p = sub.add_parser("replay", help="re-evaluate checkpoints greedily")
    p.add_argument("--run", required=True, help="directory produced by train")
    p.add_argument("--episodes", type=int, default=10)
    p.add_argument("--seed", type=int)
    p.add_argument("--out", help="output directory (defaults to the run directory)")
    return parser


def _resolve_config(args) -> RunConfig:
    if args.config:
        cfg_dict = to_dict(load_config(args.config))
        with open(args.config, "r", encoding="utf-8") as f:
            seed_from_file = "seed" in json.load(f)
    else:
        cfg_dict = to_dict(RunConfig())
        seed_from_file = False
    for assignment in args.override:
        apply_override(cfg_dict, assignment)
        if assignment.split("=", 1)[0].strip() == "seed":
            seed_from_file = True
    if getattr(args, "algo", None):
        cfg_dict["algo"] = args.algo
    if args.episodes is not None:
        cfg_dict["episodes"] = args.episodes
    if args.out:
        cfg_dict["out_dir"] = args.out
    if getattr(args, "seed", None) is not None:
        cfg_dict["seed"] = args.seed
    elif not seed_from_file and os.environ.get("MECRL_SEED"):
        cfg_dict["seed"] = int(os.environ["MECRL_SEED"])
    return from_dict(cfg_dict)


def _cmd_train(args) -> int:
    cfg = _resolve_config(args)
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    result = train_run(
        cfg.env, cfg.agent, cfg.algo, cfg.seed, cfg.episodes, collect_trace=args.trace
    )
    write_metrics(result.records, out / "metrics.csv")
    save_config(cfg, out / "config.json")
    for m, agent in enumerate(result.agents):
        save_checkpoint(agent, out / f"agent_user{m}.ckpt")
    if args.trace:
        write_trace(result.trace, out / "trace.csv")
    print(f"wrote {len(result.records)} records to {out / 'metrics.csv'}")
    return 0


def _cmd_compare(args) -> int:
    cfg = _resolve_config(args)
    if args.seeds:
        seeds = [int(s) for s in args.seeds.split(",") if s.strip()]
    else:
        seeds = [cfg.seed]
    out = Path(cfg.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    matrix = train_matrix(cfg.env, cfg.agent, ("ddpg", "td3"), seeds, cfg.episodes, jobs=args.jobs)
    by_algo = {"ddpg": [], "td3": []}
    for algo in ("ddpg", "td3"):
        for seed in seeds:
            records = matrix[(algo, seed)]
            write_metrics(records, out / f"metrics_{algo}_seed{seed}.csv")
            by_algo[algo].extend(records)
            print(f"finished {algo} seed {seed} ({cfg.episodes} episodes)")
    summary = summarize(by_algo["ddpg"], by_algo["td3"], tail_fraction=args.tail)
    table = format_summary(summary)
    (out / "summary.txt").write_text(table + "\n", encoding="utf-8")
    print(table)
    return 0


def _cmd_validate(_args) -> int:
    return 0 if run_validation() else 1


def _cmd_replay(args) -> int:
    run_dir = Path(args.run)
    cfg = load_config(run_dir / "config.json")
    agents = []
    for m in range(cfg.env.n_users):
        agents.append(load_checkpoint(run_dir / f"agent_user{m}.ckpt", cfg.env, cfg.agent))
    seed = args.seed if args.seed is not None else cfg.seed
    records = evaluate_run(agents, cfg.env, seed, args.episodes)
    out = Path(args.out) if args.out else run_dir
    out.mkdir(parents=True, exist_ok=True)
    path = out / "replay_metrics.csv"
    write_metrics(records, path)
    per_user = {}
    for r in records:
        per_user.setdefault(r.user, []).append(r.avg_reward)
    for user, vals in sorted(per_user.items()):
        print(f"user {user}: greedy avg reward {sum(vals) / len(vals):.4f}")
    print(f"wrote {path}")
    return 0


def main(argv=None) -> int:
    parser = _build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "train": _cmd_train,
        "compare": _cmd_compare,
        "validate": _cmd_validate,
        "replay": _cmd_replay,
    }
    try:
        return handlers[args.command](args)
    except (ConfigError, CorruptCheckpointError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3


if __name__ == "__main__":
    sys.exit(main())
