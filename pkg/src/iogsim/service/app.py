"""HTTP session service: the inference loop behind a small JSON API.

Endpoints: POST /sessions, GET /sessions/{id}, POST /sessions/{id}/answer,
POST /sessions/{id}/finalize, GET /scenes, GET /scenes/{id},
GET /scenes/{id}/render, GET /healthz. Errors are {code, message} bodies
with codes not_found (404), invalid_state (409), bad_request (400),
engine_error (500).
"""

from __future__ import annotations

import secrets
from typing import Any, Optional

from fastapi import FastAPI, Request
from fastapi.encoders import jsonable_encoder
from fastapi.exceptions import RequestValidationError
from fastapi.responses import JSONResponse
from pydantic import BaseModel, Field

from ..errors import (
    EngineError,
    InvalidSessionStateError,
    UngroundableUtteranceError,
)
from ..agents.answering import parse_answer_text
from ..agents.descriptors import correction_descriptors
from ..agents.grounding import region_distribution
from ..agents.types import Answer, Descriptor, make_answer
from ..dialogue.session import POLICIES, Hyperparams
from ..world.generator import GeneratorConfig, generate_task, split_config
from ..world.types import Scene
from .render import scene_svg
from .store import ACTIVE, FINALIZED, SessionRecord, SessionRecordStore


class ApiError(Exception):
    STATUS = {"not_found": 404, "invalid_state": 409, "bad_request": 400, "engine_error": 500}

    def __init__(self, code: str, message: str):
        self.code = code
        self.message = message
        super().__init__(message)


class CreateSessionRequest(BaseModel):
    scene_id: Optional[str] = None
    generator: Optional[dict] = None
    generator_seed: int = 0
    split: Optional[str] = None
    utterance: Optional[str] = None
    policy: str = "prograsp"
    rationality: float = Field(default=0.9, alias="lambda")
    max_rounds: int = Field(default=3, alias="T")
    seed: Optional[int] = None

    model_config = {"populate_by_name": True}


class AnswerRequest(BaseModel):
    polarity: Optional[str] = None
    correction: Optional[dict] = None
    text: Optional[str] = None


def _box_json(box) -> list[float] | None:
    return box.as_list() if box is not None else None


def _question_text(session) -> str | None:
    return session.pending_question.text if session.pending_question else None


def _session_view(record: SessionRecord, store: SessionRecordStore) -> dict:
    session = record.session
    candidates = []
    if session.candidates.regions:
        probs = region_distribution(
            session.scene, session.dialogue, session.candidates.regions,
            session.params, session.lexicon,
        )
        candidates = [
            {"box": box.as_list(), "prob": float(p)}
            for box, p in zip(session.candidates.regions, probs)
        ]
    return {
        "session_id": record.session_id,
        "scene_id": record.scene_id,
        "policy": session.policy,
        "lambda": session.rationality,
        "T": session.max_rounds,
        "round": session.round,
        "status": record.status,
        "question": _question_text(session),
        "estimate": _box_json(session.estimate),
        "per_round_estimates": [b.as_list() for b in session.per_round_estimates],
        "transcript": [
            [q.text, a.text] for q, a in session.dialogue.qa_pairs
        ],
        "candidates": candidates,
        "done": session.done,
        "grasp": record.grasp.to_json() if record.grasp else None,
    }


def create_app(
    store: SessionRecordStore | None = None,
    demo_scenes: int = 2,
) -> FastAPI:
    store = store or SessionRecordStore()
    app = FastAPI(title="iogsim session service")
    app.state.store = store

    # stable demo scenes so the UI has something to open out of the box
    demo_utterances: dict[str, str] = {}
    for split_index, split in enumerate(("seen", "unseen", "cluttered")):
        for k in range(demo_scenes):
            task = generate_task(split_config(split), 9000 + 100 * split_index + k)
            store.register_scene(task.scene)
            demo_utterances[task.scene.id] = task.utterance
    app.state.demo_utterances = demo_utterances

    @app.exception_handler(ApiError)
    def _api_error(_req: Request, exc: ApiError):
        return JSONResponse(
            status_code=ApiError.STATUS[exc.code],
            content={"code": exc.code, "message": exc.message},
        )

    @app.exception_handler(RequestValidationError)
    def _validation_error(_req: Request, exc: RequestValidationError):
        return JSONResponse(
            status_code=400,
            content={"code": "bad_request", "message": str(exc.errors()[:1])},
        )

    @app.exception_handler(EngineError)
    def _engine_error(_req: Request, exc: EngineError):
        return JSONResponse(
            status_code=500,
            content={"code": "engine_error", "message": str(exc)},
        )

    @app.get("/healthz")
    def healthz():
        return {"status": "ok"}

    @app.get("/scenes")
    def list_scenes():
        return {
            "scenes": [
                {
                    "id": scene_id,
                    "utterance": app.state.demo_utterances.get(scene_id),
                    "objects": len(store.scenes[scene_id].objects),
                    "clutter_mode": store.scenes[scene_id].clutter_mode,
                }
                for scene_id in sorted(store.scenes)
            ]
        }

    def _scene_or_404(scene_id: str) -> Scene:
        scene = store.get_scene(scene_id)
        if scene is None:
            raise ApiError("not_found", f"scene {scene_id!r} not found")
        return scene

    @app.get("/scenes/{scene_id}")
    def get_scene(scene_id: str):
        return _scene_or_404(scene_id).to_json()

    @app.get("/scenes/{scene_id}/render")
    def get_scene_render(scene_id: str):
        scene = _scene_or_404(scene_id)
        utterances = []
        for tag in store.lexicon.intent_tags:
            entry = store.lexicon.entries[tag]
            if any(entry.satisfied_by(obj) for obj in scene.objects):
                utterances.extend(entry.templates)
        return {
            "svg": scene_svg(scene),
            "scene": scene.to_json(),
            "utterances": utterances,
            "descriptors": [d.to_json() for d in correction_descriptors(scene)],
        }

    @app.post("/sessions", status_code=201)
    def create_session(request: CreateSessionRequest):
        if (request.scene_id is None) == (request.generator is None and request.split is None):
            raise ApiError("bad_request",
                           "provide exactly one of scene_id or generator/split")
        utterance = request.utterance
        if request.scene_id is not None:
            scene = store.get_scene(request.scene_id)
            if scene is None:
                raise ApiError("not_found", f"scene {request.scene_id!r} not found")
            if utterance is None:
                utterance = app.state.demo_utterances.get(scene.id)
        else:
            try:
                config = (split_config(request.split) if request.split
                          else GeneratorConfig.from_json(request.generator))
                task = generate_task(config, request.generator_seed, store.lexicon)
            except (TypeError, ValueError) as exc:
                raise ApiError("bad_request", f"invalid generator spec: {exc}")
            scene = task.scene
            store.register_scene(scene)
            if utterance is None:
                utterance = task.utterance
        if not utterance:
            raise ApiError("bad_request", "utterance is required")
        if request.policy not in POLICIES:
            raise ApiError("bad_request", f"unknown policy {request.policy!r}")
        try:
            hyper = Hyperparams(max_rounds=request.max_rounds,
                                rationality=request.rationality)
        except ValueError as exc:
            raise ApiError("bad_request", str(exc))

        seed = request.seed if request.seed is not None else secrets.randbits(31)
        try:
            record = store.create_session(scene, utterance, request.policy, hyper, seed)
        except UngroundableUtteranceError as exc:
            raise ApiError("engine_error", str(exc))

        session = record.session
        return {
            "session_id": record.session_id,
            "scene_id": record.scene_id,
            "policy": session.policy,
            "lambda": session.rationality,
            "T": session.max_rounds,
            "round": session.round,
            "question": _question_text(session),
            "estimate": _box_json(session.estimate),
            "done": session.done,
        }

    def _record_or_404(session_id: str) -> SessionRecord:
        record = store.get(session_id)
        if record is None:
            raise ApiError("not_found", f"session {session_id!r} not found")
        return record

    @app.get("/sessions/{session_id}")
    def get_session(session_id: str):
        return _session_view(_record_or_404(session_id), store)

    def _parse_answer(record: SessionRecord, body: AnswerRequest) -> Answer:
        scene = record.session.scene
        if body.text is not None and body.polarity is None:
            try:
                return parse_answer_text(scene, body.text)
            except ValueError as exc:
                raise ApiError("bad_request", str(exc))
        if body.polarity not in ("yes", "no"):
            raise ApiError("bad_request", "polarity must be 'yes' or 'no'")
        correction = None
        if body.correction is not None:
            if body.polarity != "no":
                raise ApiError("bad_request", "correction is only valid with polarity 'no'")
            try:
                correction = Descriptor.from_json(body.correction)
            except (KeyError, TypeError) as exc:
                raise ApiError("bad_request", f"invalid correction: {exc}")
            if correction not in correction_descriptors(scene):
                raise ApiError("bad_request",
                               f"correction {correction.render()!r} names no scene object")
        return make_answer(body.polarity, correction)

    @app.post("/sessions/{session_id}/answer")
    def post_answer(session_id: str, body: AnswerRequest):
        record = _record_or_404(session_id)
        with record.lock:
            if record.status != ACTIVE:
                raise ApiError("invalid_state", "session is closed")
            if record.session.pending_question is None:
                raise ApiError("invalid_state", "no question is pending")
            answer = _parse_answer(record, body)
            try:
                estimate, question = store.apply_answer(record, answer)
            except InvalidSessionStateError as exc:
                raise ApiError("invalid_state", str(exc))
            session = record.session
            return {
                "round": session.round,
                "estimate": _box_json(estimate),
                "question": question.text if question else None,
                "done": session.done,
            }

    @app.post("/sessions/{session_id}/finalize")
    def finalize(session_id: str):
        record = _record_or_404(session_id)
        with record.lock:
            if record.status == FINALIZED:
                raise ApiError("not_found", "session is closed")
            if record.session.estimate is None:
                raise ApiError("invalid_state", "session has no estimate yet")
            grasp = store.apply_finalize(record)  # EngineError -> engine_error
            return {
                "estimate": _box_json(record.session.estimate),
                "grasp": grasp.to_json(),
            }

    return app
