"""Benchmark runner: splits x policies x hyperparameter grid, two protocols.

Every cell runs twice over the same per-split scenes: a full-T pass for
accuracy/upper-bound/grasp metrics and an early-stop pass for
communicative efficiency. All seeds derive from the config seed, so a
rerun reproduces the report byte for byte.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from ..world.cloud import render_point_cloud
from ..world.generator import GeneratorConfig, TaskSpec, generate_task, split_config
from ..world.lexicon import IntentLexicon, default_lexicon
from ..world.types import PointCloud, Scene
from ..agents.types import AgentNoiseParams
from ..dialogue.episode import EpisodeResult, run_episode, simulated_oracle
from ..dialogue.session import Hyperparams
from ..grasp import RansacParams, grasp_target
from .metrics import accuracy_at, communicative_efficiency, oracle_upper_bound

GRASP_SUCCESS_RADIUS_M = 0.02


@dataclass(frozen=True)
class BenchmarkConfig:
    seed: int = 0
    num_scenes: int = 200
    splits: tuple[str, ...] = ("seen", "unseen", "cluttered")
    policies: tuple[str, ...] = ("silent", "random", "aint_only", "literal", "prograsp")
    lambda_grid: tuple[float, ...] = (0.9,)
    t_grid: tuple[int, ...] = (3,)
    noise: AgentNoiseParams = field(default_factory=AgentNoiseParams)
    early_stop: float = 0.5
    iou_thresholds: tuple[float, ...] = (0.1, 0.5, 0.9)
    cloud_noise_sigma: float = 0.001
    question_sampling: str = "likelihood"
    generator: GeneratorConfig = field(default_factory=GeneratorConfig)

    def __post_init__(self):
        if not self.lambda_grid or not self.t_grid:
            raise ValueError("lambda and T grids must be nonempty")
        if any(not (0 < t <= 1) for t in self.iou_thresholds):
            raise ValueError("iou thresholds must lie in (0, 1]")

    def to_json(self) -> dict:
        return {
            "seed": self.seed,
            "num_scenes": self.num_scenes,
            "splits": list(self.splits),
            "policies": list(self.policies),
            "lambda_grid": list(self.lambda_grid),
            "t_grid": list(self.t_grid),
            "noise": self.noise.to_json(),
            "early_stop": self.early_stop,
            "iou_thresholds": list(self.iou_thresholds),
            "cloud_noise_sigma": self.cloud_noise_sigma,
            "question_sampling": self.question_sampling,
            "generator": self.generator.to_json(),
        }

    @staticmethod
    def from_json(data: dict) -> "BenchmarkConfig":
        kwargs = dict(data)
        if "noise" in kwargs:
            kwargs["noise"] = AgentNoiseParams.from_json(kwargs["noise"])
        if "generator" in kwargs:
            kwargs["generator"] = GeneratorConfig.from_json(kwargs["generator"])
        for key in ("splits", "policies", "lambda_grid", "t_grid", "iou_thresholds"):
            if key in kwargs:
                kwargs[key] = tuple(kwargs[key])
        return BenchmarkConfig(**kwargs)


@dataclass
class ReportRow:
    split: str
    policy: str
    rationality: float | None
    max_rounds: int
    acc: dict[float, float]
    avg_interactions: float | None
    upper_bound: float
    grasp_success: float | None
    n: int
    error: str | None = None


@dataclass
class ReportTable:
    rows: dict[tuple, ReportRow] = field(default_factory=dict)

    def key(self, split: str, policy: str, rationality: float | None, max_rounds: int) -> tuple:
        return (split, policy, rationality, max_rounds)

    def to_csv(self, thresholds: tuple[float, ...] = (0.1, 0.5, 0.9)) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        header = ["split", "policy", "lambda", "T"]
        header += [f"acc_{t:g}" for t in thresholds]
        header += ["avg_interactions", "upper_bound", "grasp_success", "n"]
        writer.writerow(header)
        for key in sorted(self.rows, key=_row_sort_key):
            row = self.rows[key]
            record = [
                row.split,
                row.policy,
                "" if row.rationality is None else f"{row.rationality:g}",
                row.max_rounds,
            ]
            record += [f"{row.acc.get(t, float('nan')):.6f}" for t in thresholds]
            record += [
                "" if row.avg_interactions is None else f"{row.avg_interactions:.6f}",
                f"{row.upper_bound:.6f}",
                "" if row.grasp_success is None else f"{row.grasp_success:.6f}",
                row.n,
            ]
            writer.writerow(record)
        return buf.getvalue()


def _row_sort_key(key: tuple):
    split, policy, rationality, max_rounds = key
    return (split, policy, -1.0 if rationality is None else rationality, max_rounds)


@dataclass
class BenchmarkReport:
    config: BenchmarkConfig
    table: ReportTable
    episodes: list[EpisodeResult] = field(default_factory=list)
    tasks: dict[str, list[TaskSpec]] = field(default_factory=dict)


def _derive_seed(*parts: int) -> int:
    return int(np.random.SeedSequence(list(parts)).generate_state(1)[0])


def _cells(config: BenchmarkConfig, policy: str) -> list[tuple[float | None, int]]:
    if policy == "prograsp":
        return [(lam, t) for lam in config.lambda_grid for t in config.t_grid]
    if policy == "literal":
        return [(0.0, t) for t in config.t_grid]
    if policy == "aint_only":
        return [(1.0, t) for t in config.t_grid]
    if policy == "random":
        return [(None, t) for t in config.t_grid]
    if policy == "silent":
        return [(None, 0)]
    raise ValueError(f"unknown policy {policy!r}")


def _grasp_success_rate(
    results: list[EpisodeResult],
    tasks: list[TaskSpec],
    clouds: dict[str, PointCloud],
    ransac: RansacParams,
) -> float:
    hits = 0
    for result, task in zip(results, tasks):
        if result.estimate is None:
            continue
        cloud = clouds[task.scene.id]
        labels = np.asarray(cloud.labels)
        target_pts = np.asarray(cloud.points)[labels == task.scene.target_id]
        centroid = target_pts.mean(axis=0)
        try:
            grasp = grasp_target(cloud, result.estimate, ransac)
        except Exception:
            continue
        point = np.array([grasp.x, grasp.y, grasp.z])
        if np.linalg.norm(point - centroid) <= GRASP_SUCCESS_RADIUS_M and grasp.z > task.scene.table_z:
            hits += 1
    return hits / len(results) if results else 0.0


def generate_split_tasks(
    config: BenchmarkConfig,
    split: str,
    lexicon: IntentLexicon | None = None,
) -> list[TaskSpec]:
    lexicon = lexicon or default_lexicon()
    gen_config = split_config(split, config.generator)
    split_index = ("seen", "unseen", "cluttered").index(split)
    return [
        generate_task(gen_config, _derive_seed(config.seed, split_index, i), lexicon)
        for i in range(config.num_scenes)
    ]


def run_benchmark(config: BenchmarkConfig, lexicon: IntentLexicon | None = None) -> BenchmarkReport:
    lexicon = lexicon or default_lexicon()
    table = ReportTable()
    all_episodes: list[EpisodeResult] = []
    all_tasks: dict[str, list[TaskSpec]] = {}
    oracle = simulated_oracle(config.noise)
    ransac = RansacParams()

    for split in config.splits:
        split_index = ("seen", "unseen", "cluttered").index(split)
        try:
            tasks = generate_split_tasks(config, split, lexicon)
        except Exception as exc:
            for policy in config.policies:
                for lam, t in _cells(config, policy):
                    key = table.key(split, policy, lam, t)
                    table.rows[key] = ReportRow(
                        split=split, policy=policy, rationality=lam, max_rounds=t,
                        acc={}, avg_interactions=None, upper_bound=0.0,
                        grasp_success=None, n=0, error=f"scene generation failed: {exc}",
                    )
            continue
        all_tasks[split] = tasks

        clouds = {
            task.scene.id: render_point_cloud(task.scene, config.cloud_noise_sigma)
            for task in tasks
        }
        targets = [task.scene.target.box for task in tasks]

        for policy in config.policies:
            for lam, t in _cells(config, policy):
                key = table.key(split, policy, lam, t)
                try:
                    table.rows[key] = _run_cell(
                        config, split_index, split, policy, lam, t,
                        tasks, targets, clouds, oracle, ransac, lexicon,
                        all_episodes,
                    )
                except Exception as exc:
                    table.rows[key] = ReportRow(
                        split=split, policy=policy, rationality=lam, max_rounds=t,
                        acc={}, avg_interactions=None, upper_bound=0.0,
                        grasp_success=None, n=0, error=str(exc),
                    )

    return BenchmarkReport(config=config, table=table, episodes=all_episodes, tasks=all_tasks)


def _run_cell(
    config: BenchmarkConfig,
    split_index: int,
    split: str,
    policy: str,
    lam: float | None,
    t: int,
    tasks: list[TaskSpec],
    targets,
    clouds,
    oracle,
    ransac,
    lexicon,
    episode_sink: list[EpisodeResult],
) -> ReportRow:
    hyper_t = max(t, 1)  # silent sessions still need a valid budget
    hyper = Hyperparams(
        max_rounds=hyper_t,
        rationality=lam if lam is not None else 0.9,
        question_sampling=config.question_sampling,
    )

    # episode seeds are shared across policies and T cells: the same scene
    # replays the same stream, so T sweeps compare paired trajectories
    accuracy_results = [
        run_episode(
            task.scene, task.utterance, policy, hyper, oracle,
            seed=_derive_seed(config.seed, split_index, i, 0),
            early_stop=None, params=config.noise, lexicon=lexicon,
        )
        for i, task in enumerate(tasks)
    ]
    episode_sink.extend(accuracy_results)

    acc = {tau: accuracy_at(accuracy_results, targets, tau) for tau in config.iou_thresholds}
    upper = oracle_upper_bound(accuracy_results, targets, 0.9)
    grasp_rate = _grasp_success_rate(accuracy_results, tasks, clouds, ransac)

    avg_interactions = None
    if policy != "silent":
        efficiency_results = [
            run_episode(
                task.scene, task.utterance, policy, hyper, oracle,
                seed=_derive_seed(config.seed, split_index, i, 1),
                early_stop=config.early_stop, params=config.noise, lexicon=lexicon,
            )
            for i, task in enumerate(tasks)
        ]
        avg_interactions = communicative_efficiency(efficiency_results)

    return ReportRow(
        split=split, policy=policy, rationality=lam, max_rounds=t,
        acc=acc, avg_interactions=avg_interactions, upper_bound=upper,
        grasp_success=grasp_rate, n=len(tasks),
    )


def save_episodes_jsonl(episodes: list[EpisodeResult], path: str) -> None:
    with open(path, "w") as fh:
        for episode in episodes:
            fh.write(json.dumps(episode.to_json()) + "\n")


def load_episodes_jsonl(path: str) -> list[EpisodeResult]:
    episodes = []
    with open(path) as fh:
        for line in fh:
            line = line.strip()
            if line:
                episodes.append(EpisodeResult.from_json(json.loads(line)))
    return episodes
