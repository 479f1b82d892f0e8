"""Session registry with an append-only JSON-lines event log.

Rather than snapshotting engine state, the log records the inputs that
produced it (scene, seed, answers); replaying them through the
deterministic engine reconstructs every session exactly, so the store is
crash-consistent at record granularity.
"""

from __future__ import annotations

import json
import os
import threading
from dataclasses import dataclass, field

import numpy as np

from ..agents.types import AgentNoiseParams, Answer, Descriptor, make_answer
from ..dialogue.episode import episode_rngs
from ..dialogue.session import Hyperparams, Session, begin_session, next_question, receive_answer
from ..grasp import GraspTarget, RansacParams, grasp_target
from ..world.cloud import render_point_cloud
from ..world.lexicon import IntentLexicon, default_lexicon
from ..world.types import Scene

ACTIVE = "active"
FINALIZED = "finalized"


@dataclass
class SessionRecord:
    session_id: str
    scene_id: str
    seed: int
    session: Session
    status: str = ACTIVE
    grasp: GraspTarget | None = None
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)

    @property
    def done(self) -> bool:
        return self.session.done


class SessionRecordStore:
    """Scenes and sessions, optionally persisted to a JSONL event log."""

    def __init__(
        self,
        path: str | None = None,
        noise: AgentNoiseParams | None = None,
        cloud_noise_sigma: float = 0.001,
        lexicon: IntentLexicon | None = None,
    ):
        self.path = path
        self.noise = noise or AgentNoiseParams()
        self.cloud_noise_sigma = cloud_noise_sigma
        self.lexicon = lexicon or default_lexicon()
        self.scenes: dict[str, Scene] = {}
        self.sessions: dict[str, SessionRecord] = {}
        self._registry_lock = threading.Lock()
        self._counter = 0
        if path and os.path.exists(path):
            self._replay_log(path)

    # -- event log ---------------------------------------------------------

    def _append(self, event: dict) -> None:
        if not self.path:
            return
        with open(self.path, "a") as fh:
            fh.write(json.dumps(event) + "\n")
            fh.flush()
            os.fsync(fh.fileno())

    def _replay_log(self, path: str) -> None:
        with open(path) as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                event = json.loads(line)
                kind = event["event"]
                if kind == "scene":
                    scene = Scene.from_json(event["scene"])
                    self.scenes[scene.id] = scene
                elif kind == "create":
                    self._create_session(
                        session_id=event["session_id"],
                        scene=self.scenes[event["scene_id"]],
                        utterance=event["utterance"],
                        policy=event["policy"],
                        hyper=Hyperparams(
                            max_rounds=event["T"], rationality=event["lambda"],
                        ),
                        seed=event["seed"],
                        log=False,
                    )
                elif kind == "answer":
                    record = self.sessions[event["session_id"]]
                    correction = event["answer"].get("correction")
                    answer = make_answer(
                        event["answer"]["polarity"],
                        Descriptor.from_json(correction) if correction else None,
                    )
                    self._apply_answer(record, answer, log=False)
                elif kind == "finalize":
                    self._apply_finalize(self.sessions[event["session_id"]], log=False)
        self._counter = len(self.sessions)

    # -- scenes ------------------------------------------------------------

    def register_scene(self, scene: Scene) -> None:
        with self._registry_lock:
            if scene.id not in self.scenes:
                self.scenes[scene.id] = scene
                self._append({"event": "scene", "scene": scene.to_json()})

    def get_scene(self, scene_id: str) -> Scene | None:
        return self.scenes.get(scene_id)

    # -- sessions ----------------------------------------------------------

    def _create_session(
        self,
        session_id: str,
        scene: Scene,
        utterance: str,
        policy: str,
        hyper: Hyperparams,
        seed: int,
        log: bool = True,
    ) -> SessionRecord:
        rng_session, _ = episode_rngs(seed)
        session = begin_session(
            scene, utterance, hyper, policy, rng_session, self.noise, self.lexicon
        )
        if policy != "silent":
            next_question(session)
        record = SessionRecord(
            session_id=session_id, scene_id=scene.id, seed=seed, session=session,
        )
        self.sessions[session_id] = record
        if log:
            self._append({
                "event": "create", "session_id": session_id, "scene_id": scene.id,
                "utterance": utterance, "policy": policy,
                "T": hyper.max_rounds, "lambda": hyper.rationality, "seed": seed,
            })
        return record

    def create_session(
        self,
        scene: Scene,
        utterance: str,
        policy: str,
        hyper: Hyperparams,
        seed: int,
    ) -> SessionRecord:
        self.register_scene(scene)
        with self._registry_lock:
            self._counter += 1
            session_id = f"sess-{self._counter:06d}"
            return self._create_session(session_id, scene, utterance, policy, hyper, seed)

    def get(self, session_id: str) -> SessionRecord | None:
        return self.sessions.get(session_id)

    def _apply_answer(self, record: SessionRecord, answer: Answer, log: bool = True):
        session = record.session
        estimate = receive_answer(session, answer)
        question = None
        if session.round < session.max_rounds:
            question = next_question(session)
        if log:
            self._append({
                "event": "answer", "session_id": record.session_id,
                "answer": {
                    "polarity": answer.polarity,
                    "correction": answer.correction.to_json() if answer.correction else None,
                },
            })
        return estimate, question

    def apply_answer(self, record: SessionRecord, answer: Answer):
        return self._apply_answer(record, answer, log=True)

    def _apply_finalize(self, record: SessionRecord, log: bool = True) -> GraspTarget:
        session = record.session
        cloud = render_point_cloud(session.scene, self.cloud_noise_sigma)
        grasp = grasp_target(cloud, session.estimate, RansacParams())
        record.grasp = grasp
        record.status = FINALIZED
        if log:
            self._append({"event": "finalize", "session_id": record.session_id})
        return grasp

    def apply_finalize(self, record: SessionRecord) -> GraspTarget:
        return self._apply_finalize(record, log=True)
