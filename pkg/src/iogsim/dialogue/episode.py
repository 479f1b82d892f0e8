"""Whole-episode driver: run the loop, capture everything the metrics need."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from ..errors import EngineError
from ..world.lexicon import IntentLexicon
from ..world.types import RegionBox, Scene, box_iou
from ..agents.answering import simulate_answer
from ..agents.types import AgentNoiseParams, Answer, Question
from .session import Hyperparams, begin_session, next_question, receive_answer

# (scene, target_box, question, rng) -> Answer
AnswerOracle = Callable[[Scene, RegionBox, Question, np.random.Generator], Answer]


def episode_rngs(seed: int) -> tuple[np.random.Generator, np.random.Generator]:
    """(session rng, answerer rng) derived from one episode seed.

    Shared by the in-process runner and the HTTP service so a scripted
    client replays the exact same streams.
    """
    session_ss, answer_ss = np.random.SeedSequence(seed).spawn(2)
    return np.random.default_rng(session_ss), np.random.default_rng(answer_ss)


def simulated_oracle(params: AgentNoiseParams) -> AnswerOracle:
    def oracle(scene, target_box, question, rng):
        return simulate_answer(scene, target_box, question, params, rng)
    return oracle


def scripted_oracle(answers: list[Answer]) -> AnswerOracle:
    state = {"i": 0}

    def oracle(scene, target_box, question, rng):
        if state["i"] >= len(answers):
            raise EngineError("scripted answers exhausted")
        answer = answers[state["i"]]
        state["i"] += 1
        return answer
    return oracle


@dataclass
class EpisodeResult:
    scene_id: str
    policy: str
    rationality: float
    max_rounds: int
    rounds_used: int
    per_round_estimates: list[RegionBox]
    final_iou: float
    transcript: list[tuple[str, str]]
    estimate: RegionBox | None
    candidates: list[RegionBox] | None = field(default_factory=list)
    target_box: RegionBox | None = None
    error: str | None = None

    def to_json(self) -> dict:
        return {
            "scene_id": self.scene_id,
            "policy": self.policy,
            "lambda": self.rationality,
            "T": self.max_rounds,
            "rounds_used": self.rounds_used,
            "per_round_estimates": [b.as_list() for b in self.per_round_estimates],
            "final_iou": self.final_iou,
            "transcript": [[q, a] for q, a in self.transcript],
            "estimate": self.estimate.as_list() if self.estimate else None,
            "candidates": (
                [b.as_list() for b in self.candidates]
                if self.candidates is not None else None
            ),
            "target_box": self.target_box.as_list() if self.target_box else None,
            "error": self.error,
        }

    @staticmethod
    def from_json(data: dict) -> "EpisodeResult":
        return EpisodeResult(
            scene_id=data["scene_id"],
            policy=data["policy"],
            rationality=float(data["lambda"]),
            max_rounds=int(data["T"]),
            rounds_used=int(data["rounds_used"]),
            per_round_estimates=[RegionBox.from_list(b) for b in data["per_round_estimates"]],
            final_iou=float(data["final_iou"]),
            transcript=[(q, a) for q, a in data["transcript"]],
            estimate=RegionBox.from_list(data["estimate"]) if data.get("estimate") else None,
            candidates=(
                [RegionBox.from_list(b) for b in data["candidates"]]
                if data.get("candidates") is not None else None
            ),
            target_box=RegionBox.from_list(data["target_box"]) if data.get("target_box") else None,
            error=data.get("error"),
        )


def run_episode(
    scene: Scene,
    utterance: str,
    policy: str,
    hyperparams: Hyperparams,
    answer_oracle: AnswerOracle,
    seed: int,
    early_stop: float | None = None,
    params: AgentNoiseParams | None = None,
    lexicon: IntentLexicon | None = None,
) -> EpisodeResult:
    """Run up to T rounds; an engine failure records an IoU-0 episode.

    With early_stop set, the loop ends after the first round whose
    estimate clears the IoU threshold against the true target box.
    """
    params = params or AgentNoiseParams()
    rng_session, rng_answer = episode_rngs(seed)
    target_box = scene.target.box

    transcript: list[tuple[str, str]] = []
    session = None
    try:
        session = begin_session(
            scene, utterance, hyperparams, policy, rng_session, params, lexicon
        )
        if policy != "silent":
            for _ in range(hyperparams.max_rounds):
                question = next_question(session)
                answer = answer_oracle(scene, target_box, question, rng_answer)
                estimate = receive_answer(session, answer)
                transcript.append((question.text, answer.text))
                if early_stop is not None and box_iou(estimate, target_box) > early_stop:
                    break
        estimate = session.estimate
        return EpisodeResult(
            scene_id=scene.id,
            policy=policy,
            rationality=hyperparams.rationality,
            max_rounds=hyperparams.max_rounds,
            rounds_used=session.round,
            per_round_estimates=list(session.per_round_estimates),
            final_iou=box_iou(estimate, target_box) if estimate else 0.0,
            transcript=transcript,
            estimate=estimate,
            candidates=list(session.candidates.regions),
            target_box=target_box,
        )
    except EngineError as exc:
        return EpisodeResult(
            scene_id=scene.id,
            policy=policy,
            rationality=hyperparams.rationality,
            max_rounds=hyperparams.max_rounds,
            rounds_used=session.round if session else 0,
            per_round_estimates=list(session.per_round_estimates) if session else [],
            final_iou=0.0,
            transcript=transcript,
            estimate=None,
            candidates=list(session.candidates.regions) if session else [],
            target_box=target_box,
            error=str(exc),
        )
