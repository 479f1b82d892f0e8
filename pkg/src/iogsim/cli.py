"""Command-line entry points.

Subcommands: gen-data, bench, sweep, replay, serve. The report paths
write matplotlib figures next to the delimited/JSON outputs. Errors exit
nonzero with a single-line diagnostic on stderr.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

from .agents.answering import parse_answer_text
from .agents.types import AgentNoiseParams
from .dialogue.episode import run_episode, scripted_oracle, simulated_oracle
from .dialogue.session import POLICIES, Hyperparams
from .evaluation.benchmark import (
    BenchmarkConfig,
    run_benchmark,
    save_episodes_jsonl,
)
from .evaluation.gdh import run_gdh
from .world.dataset import generate_records, load_dataset, save_dataset
from .world.generator import GeneratorConfig, generate_task, split_config
from .world.types import Scene


def _load_json(path: str) -> dict:
    with open(path) as fh:
        return json.load(fh)


def _parse_floats(text: str) -> tuple[float, ...]:
    return tuple(float(v) for v in text.split(",") if v != "")


def _parse_ints(text: str) -> tuple[int, ...]:
    return tuple(int(v) for v in text.split(",") if v != "")


def cmd_gen_data(args) -> int:
    config = GeneratorConfig.from_json(_load_json(args.config)) if args.config \
        else split_config(args.split)
    noise = AgentNoiseParams.from_json(_load_json(args.noise)) if args.noise \
        else (AgentNoiseParams.noiseless() if args.noiseless else AgentNoiseParams())
    records = generate_records(args.count, seed=args.seed, config=config, noise=noise)
    save_dataset(records, args.out)
    print(f"wrote {len(records)} records to {args.out}")
    return 0


def cmd_bench(args) -> int:
    if args.config:
        config = BenchmarkConfig.from_json(_load_json(args.config))
    else:
        config = BenchmarkConfig()
    if args.seed is not None:
        config = BenchmarkConfig.from_json({**config.to_json(), "seed": args.seed})
    report = run_benchmark(config)

    csv_text = report.table.to_csv(config.iou_thresholds)
    with open(args.out, "w") as fh:
        fh.write(csv_text)
    written = [args.out]

    prefix = os.path.splitext(args.out)[0]
    if args.episodes or args.with_episodes:
        episodes_path = args.episodes or f"{prefix}_episodes.jsonl"
        save_episodes_jsonl(report.episodes, episodes_path)
        written.append(episodes_path)
    if not args.no_figures:
        from .figures import render_report_figures
        written.extend(render_report_figures(report, prefix))
    print("wrote " + ", ".join(written))
    return 0


def cmd_sweep(args) -> int:
    lambdas = _parse_floats(args.lambdas)
    rounds = _parse_ints(args.rounds)
    if not lambdas or not rounds:
        raise ValueError("sweep needs nonempty --lambda and --rounds grids")
    base = BenchmarkConfig.from_json(_load_json(args.config)) if args.config \
        else BenchmarkConfig(num_scenes=args.scenes)
    config = BenchmarkConfig.from_json({
        **base.to_json(),
        "seed": args.seed if args.seed is not None else base.seed,
        "splits": [args.split],
        "policies": ["prograsp"],
        "lambda_grid": list(lambdas),
        "t_grid": list(rounds),
        "num_scenes": args.scenes if args.scenes else base.num_scenes,
    })
    report = run_benchmark(config)

    rows = []
    for (split, policy, lam, t), row in sorted(report.table.rows.items(),
                                               key=lambda kv: (kv[0][3], kv[0][2])):
        rows.append({
            "split": split, "policy": policy, "lambda": lam, "T": t,
            **{f"acc_{tau:g}": row.acc.get(tau) for tau in config.iou_thresholds},
            "avg_interactions": row.avg_interactions,
            "upper_bound": row.upper_bound,
            "n": row.n,
        })
    with open(args.out, "w") as fh:
        json.dump({"config": config.to_json(), "cells": rows}, fh, indent=2)
    written = [args.out]

    prefix = os.path.splitext(args.out)[0]
    if not args.no_figures:
        from .figures import render_sweep_figure
        figure_path = f"{prefix}.png"
        render_sweep_figure(rows, figure_path)
        written.append(figure_path)
    print("wrote " + ", ".join(written))
    return 0


def cmd_replay(args) -> int:
    spec = _load_json(args.episode)
    if "scene" in spec:
        scene = Scene.from_json(spec["scene"])
        utterance = spec["utterance"]
    else:
        gen = spec.get("generator")
        config = GeneratorConfig.from_json(gen) if gen else split_config(spec.get("split", "seen"))
        task = generate_task(config, int(spec.get("generator_seed", 0)))
        scene = task.scene
        utterance = spec.get("utterance") or task.utterance

    policy = args.policy or spec.get("policy", "prograsp")
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}")
    hyper = Hyperparams(
        max_rounds=int(spec.get("T", 3)),
        rationality=float(spec.get("lambda", 0.9)),
    )
    noise = AgentNoiseParams.from_json(spec.get("noise", {})) if spec.get("noise") \
        else AgentNoiseParams()
    if "answers" in spec:
        answers = [parse_answer_text(scene, text) for text in spec["answers"]]
        oracle = scripted_oracle(answers)
    else:
        oracle = simulated_oracle(noise)

    result = run_episode(
        scene, utterance, policy, hyper, oracle,
        seed=int(spec.get("seed", 0)),
        early_stop=spec.get("early_stop"),
        params=noise,
    )

    grasp = None
    if result.estimate is not None:
        from .grasp import RansacParams, grasp_target
        from .world.cloud import render_point_cloud

        try:
            cloud = render_point_cloud(scene, 0.001)
            grasp = grasp_target(cloud, result.estimate, RansacParams())
        except Exception:
            grasp = None

    lines = [
        f"scene {result.scene_id}  policy {result.policy}  "
        f"lambda {result.rationality:g}  T {result.max_rounds}",
        f"utterance: {utterance}",
    ]
    for i, (question, answer) in enumerate(result.transcript, start=1):
        lines.append(f"round {i}: Q: {question}")
        lines.append(f"round {i}: A: {answer}")
        if i - 1 < len(result.per_round_estimates):
            est = result.per_round_estimates[i - 1]
            lines.append(f"round {i}: estimate {[round(v, 1) for v in est.as_list()]}")
    if result.error:
        lines.append(f"error: {result.error}")
    lines.append(f"rounds used: {result.rounds_used}")
    if result.estimate is not None:
        lines.append(f"final estimate: {[round(v, 1) for v in result.estimate.as_list()]}")
    lines.append(f"final IoU vs target: {result.final_iou:.4f}")
    if grasp is not None:
        lines.append(f"grasp target: ({grasp.x:.4f}, {grasp.y:.4f}, {grasp.z:.4f}) "
                     f"from {grasp.points_used} points")
    transcript_text = "\n".join(lines) + "\n"

    sys.stdout.write(transcript_text)
    if args.out:
        payload = result.to_json()
        payload["grasp"] = grasp.to_json() if grasp is not None else None
        payload["utterance"] = utterance
        with open(args.out, "w") as fh:
            json.dump(payload, fh, indent=2)
        print(f"wrote {args.out}")
    return 0


def cmd_gdh(args) -> int:
    records = load_dataset(args.records)
    noise = AgentNoiseParams.from_json(_load_json(args.noise)) if args.noise \
        else AgentNoiseParams()
    accs = run_gdh(records, params=noise, seed=args.seed)
    silent = run_gdh(records, params=noise, seed=args.seed, utterance_only=True)
    for tau in sorted(accs):
        print(f"acc@{tau:g}: dialogue-history {accs[tau]:.4f}  utterance-only {silent[tau]:.4f}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn

    from .agents.types import AgentNoiseParams as Noise
    from .service.app import create_app
    from .service.store import SessionRecordStore

    noise = Noise.from_json(_load_json(args.noise)) if args.noise else Noise()
    store = SessionRecordStore(path=args.store, noise=noise)
    app = create_app(store)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="iogsim",
        description="Dialogue-driven target identification and grasping over a synthetic tabletop",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-data", help="generate scripted dialogue records")
    p.add_argument("--config", help="GeneratorConfig JSON file")
    p.add_argument("--split", default="seen", choices=("seen", "unseen", "cluttered"))
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--noise", help="AgentNoiseParams JSON file")
    p.add_argument("--noiseless", action="store_true")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_gen_data)

    p = sub.add_parser("bench", help="run the offline benchmark")
    p.add_argument("--config", help="BenchmarkConfig JSON file")
    p.add_argument("--seed", type=int)
    p.add_argument("--out", required=True, help="report CSV path")
    p.add_argument("--episodes", help="raw episode JSONL path")
    p.add_argument("--with-episodes", action="store_true")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("sweep", help="rationality x rounds grid for the pragmatic policy")
    p.add_argument("--lambda", dest="lambdas", default="0,0.5,0.9,1.0",
                   help="comma-separated rationality grid")
    p.add_argument("--rounds", default="1,2,3", help="comma-separated round budgets")
    p.add_argument("--split", default="seen", choices=("seen", "unseen", "cluttered"))
    p.add_argument("--scenes", type=int, default=100)
    p.add_argument("--seed", type=int)
    p.add_argument("--config", help="BenchmarkConfig JSON file")
    p.add_argument("--out", required=True, help="sweep JSON path")
    p.add_argument("--no-figures", action="store_true")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("replay", help="run one scripted or seeded episode")
    p.add_argument("--episode", required=True, help="episode spec JSON file")
    p.add_argument("--policy", choices=POLICIES, help="override the spec's policy")
    p.add_argument("--out", help="write the EpisodeResult JSON here")
    p.set_defaults(func=cmd_replay)

    p = sub.add_parser("gdh", help="one-shot grounding from scripted dialogue records")
    p.add_argument("--records", required=True)
    p.add_argument("--noise", help="AgentNoiseParams JSON file")
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_gdh)

    p = sub.add_parser("serve", help="start the HTTP session service")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8321)
    p.add_argument("--store", help="JSONL session log path")
    p.add_argument("--noise", help="AgentNoiseParams JSON file")
    p.set_defaults(func=cmd_serve)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except KeyboardInterrupt:
        return 130
    except Exception as exc:  # one-line diagnostic, nonzero exit
        print(f"iogsim: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
