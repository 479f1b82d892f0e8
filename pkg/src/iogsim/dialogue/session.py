"""Interactive session state machine: the T-round inference loop.

Each round grounds against the current dialogue, accumulates the
detections into a deduplicated candidate set, asks about a sampled
candidate, folds the user's answer into the dialogue, and re-selects
the target estimate over the whole accumulated set.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ..errors import InvalidSessionStateError, NoCandidatesError
from ..world.lexicon import IntentLexicon, default_lexicon
from ..world.types import RegionBox, Scene, box_iou
from ..agents.grounding import ground, region_distribution
from ..agents.questioning import generate_question
from ..agents.types import AgentNoiseParams, Answer, DialogueState, Question
from .selection import pragmatic_select_index

POLICIES = ("prograsp", "literal", "aint_only", "silent", "random")


@dataclass(frozen=True)
class Hyperparams:
    max_rounds: int = 3          # T
    rationality: float = 0.9     # answer-interpreter weight
    dedup_iou: float = 0.9
    question_sampling: str = "likelihood"  # or "uniform"

    def __post_init__(self):
        if self.max_rounds < 1:
            raise ValueError("max_rounds must be >= 1")
        if not (0.0 <= self.rationality <= 1.0):
            raise ValueError("rationality must be in [0, 1]")
        if self.question_sampling not in ("likelihood", "uniform"):
            raise ValueError("question_sampling must be likelihood|uniform")


class CandidateSet:
    """Accumulated regions with stable insertion order and IoU dedup."""

    def __init__(self, dedup_iou: float = 0.9):
        self.dedup_iou = dedup_iou
        self.regions: list[RegionBox] = []
        self.insertion_round: list[int] = []

    def add(self, box: RegionBox, round_index: int) -> int:
        """Insert or merge; returns the index holding the region."""
        for i, stored in enumerate(self.regions):
            if box_iou(stored, box) >= self.dedup_iou:
                return i  # merge to the earlier box
        self.regions.append(box)
        self.insertion_round.append(round_index)
        return len(self.regions) - 1

    def __len__(self) -> int:
        return len(self.regions)


@dataclass
class Session:
    scene: Scene
    dialogue: DialogueState
    candidates: CandidateSet
    hyperparams: Hyperparams
    policy: str
    params: AgentNoiseParams
    rng: np.random.Generator
    lexicon: IntentLexicon
    round: int = 0
    estimate: RegionBox | None = None
    pending_question: Question | None = None
    questioned: set = field(default_factory=set)
    per_round_estimates: list = field(default_factory=list)

    @property
    def max_rounds(self) -> int:
        return self.hyperparams.max_rounds

    @property
    def rationality(self) -> float:
        return self.hyperparams.rationality

    @property
    def done(self) -> bool:
        return self.policy == "silent" or self.round >= self.max_rounds


def begin_session(
    scene: Scene,
    utterance: str,
    hyperparams: Hyperparams,
    policy: str,
    rng: np.random.Generator,
    params: AgentNoiseParams | None = None,
    lexicon: IntentLexicon | None = None,
) -> Session:
    """Open an episode; the silent policy grounds and commits immediately."""
    if policy not in POLICIES:
        raise ValueError(f"unknown policy {policy!r}")
    lexicon = lexicon or default_lexicon()
    params = params or AgentNoiseParams()
    lexicon.resolve_utterance(utterance)  # fail fast on ungroundable input

    session = Session(
        scene=scene,
        dialogue=DialogueState(utterance),
        candidates=CandidateSet(hyperparams.dedup_iou),
        hyperparams=hyperparams,
        policy=policy,
        params=params,
        rng=rng,
        lexicon=lexicon,
    )
    if policy == "silent":
        detections = ground(scene, session.dialogue, params, rng, lexicon)
        for det in detections:
            session.candidates.add(det.box, 0)
        if not session.candidates.regions:
            raise NoCandidatesError("no candidates from the opening grounding pass")
        probs = region_distribution(
            scene, session.dialogue, session.candidates.regions, params, lexicon
        )
        best = int(np.argmax(probs))  # first index wins exact ties
        session.estimate = session.candidates.regions[best]
        session.per_round_estimates.append(session.estimate)
    return session


def next_question(session: Session) -> Question:
    """Ground, accumulate, sample an unquestioned candidate, ask about it."""
    if session.policy == "silent":
        raise InvalidSessionStateError("silent sessions ask no questions")
    if session.pending_question is not None:
        raise InvalidSessionStateError("a question is already pending")
    if session.round >= session.max_rounds:
        raise InvalidSessionStateError("round budget exhausted")

    detections = ground(
        session.scene, session.dialogue, session.params, session.rng, session.lexicon
    )
    for det in detections:
        session.candidates.add(det.box, session.round + 1)
    if not session.candidates.regions:
        raise NoCandidatesError("no candidates after grounding")

    pool = [i for i in range(len(session.candidates)) if i not in session.questioned]
    if not pool:
        pool = list(range(len(session.candidates)))

    if session.hyperparams.question_sampling == "uniform":
        weights = np.ones(len(pool), dtype=np.float64)
    else:
        probs = region_distribution(
            session.scene, session.dialogue, session.candidates.regions,
            session.params, session.lexicon,
        )
        weights = probs[pool]
    weights = weights / weights.sum()
    ref_index = int(pool[int(session.rng.choice(len(pool), p=weights))])

    question = generate_question(
        session.scene, session.dialogue,
        session.candidates.regions[ref_index], session.lexicon,
    )
    session.questioned.add(ref_index)
    session.pending_question = question
    return question


def receive_answer(session: Session, answer: Answer) -> RegionBox:
    """Fold the answer into the dialogue and re-select the estimate."""
    if session.pending_question is None:
        raise InvalidSessionStateError("no question is pending")

    question = session.pending_question
    session.pending_question = None
    session.dialogue = session.dialogue.with_qa(question, answer)
    session.round += 1

    boxes = session.candidates.regions
    if session.policy == "random":
        idx = int(session.rng.integers(len(boxes)))
    else:
        rationality = {
            "prograsp": session.rationality,
            "literal": 0.0,
            "aint_only": 1.0,
        }[session.policy]
        idx = pragmatic_select_index(
            boxes, session.scene, session.dialogue, (question, answer),
            rationality, session.params, session.lexicon,
        )
    session.estimate = boxes[idx]
    session.per_round_estimates.append(session.estimate)
    return session.estimate
