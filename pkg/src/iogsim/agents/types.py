"""Dialogue-facing agent types: descriptors, questions, answers, noise knobs."""

from __future__ import annotations

from dataclasses import dataclass, field

from ..world.types import ObjectSpec, RegionBox


@dataclass(frozen=True)
class Descriptor:
    """Structured object reference: a category plus an optional attribute value."""

    category: str
    attribute: str | None = None

    def matches(self, obj: ObjectSpec) -> bool:
        if obj.category != self.category:
            return False
        if self.attribute is None:
            return True
        return self.attribute in (obj.color, obj.size)

    def render(self) -> str:
        if self.attribute is None:
            return self.category
        return f"{self.attribute} {self.category}"

    def to_json(self) -> dict:
        return {"category": self.category, "attribute": self.attribute}

    @staticmethod
    def from_json(data: dict) -> "Descriptor":
        return Descriptor(
            category=str(data["category"]),
            attribute=None if data.get("attribute") is None else str(data["attribute"]),
        )


@dataclass(frozen=True)
class Question:
    text: str
    referent_box: RegionBox
    descriptor: Descriptor


@dataclass(frozen=True)
class Answer:
    text: str
    polarity: str  # "yes" | "no"
    correction: Descriptor | None = None

    def __post_init__(self):
        if self.polarity not in ("yes", "no"):
            raise ValueError(f"polarity must be yes/no, got {self.polarity!r}")
        if self.correction is not None and self.polarity != "no":
            raise ValueError("correction is only valid on a 'no' answer")


def render_answer(polarity: str, correction: Descriptor | None = None) -> str:
    if polarity == "yes":
        return "Yes."
    if correction is None:
        return "No."
    return f"No, I want the {correction.render()}."


def make_answer(polarity: str, correction: Descriptor | None = None) -> Answer:
    return Answer(text=render_answer(polarity, correction), polarity=polarity, correction=correction)


@dataclass(frozen=True)
class DialogueState:
    """The intention utterance plus the ordered question/answer history."""

    utterance: str
    qa_pairs: tuple[tuple[Question, Answer], ...] = ()

    def __post_init__(self):
        if not self.utterance:
            raise ValueError("utterance must be nonempty")

    def with_qa(self, question: Question, answer: Answer) -> "DialogueState":
        return DialogueState(self.utterance, self.qa_pairs + ((question, answer),))

    def __len__(self) -> int:
        return len(self.qa_pairs)


@dataclass(frozen=True)
class ScoredRegion:
    """A grounder detection: box plus its log-probability in the emitted set."""

    box: RegionBox
    log_prob: float


@dataclass(frozen=True)
class AgentNoiseParams:
    """Noise model for the otherwise-exact tabular agents.

    Matches the benchmark config wire block
    {epsilon_answer, p_corrective, grounder_jitter_px, distractor_rate, p_floor}.
    """

    epsilon_answer: float = 0.1
    p_corrective: float = 0.5
    grounder_jitter_px: float = 2.0
    distractor_rate: float = 0.3
    p_floor: float = 0.01

    def __post_init__(self):
        if not (0 <= self.epsilon_answer < 0.5):
            raise ValueError("epsilon_answer must be in [0, 0.5)")
        if not (0 <= self.p_corrective <= 1):
            raise ValueError("p_corrective must be in [0, 1]")
        if self.grounder_jitter_px < 0:
            raise ValueError("grounder_jitter_px must be >= 0")
        if self.distractor_rate < 0:
            raise ValueError("distractor_rate must be >= 0")
        if not (0 < self.p_floor <= 1):
            raise ValueError("p_floor must be in (0, 1]")

    @staticmethod
    def noiseless() -> "AgentNoiseParams":
        return AgentNoiseParams(
            epsilon_answer=0.0, p_corrective=1.0,
            grounder_jitter_px=0.0, distractor_rate=0.0,
        )

    def to_json(self) -> dict:
        return {
            "epsilon_answer": self.epsilon_answer,
            "p_corrective": self.p_corrective,
            "grounder_jitter_px": self.grounder_jitter_px,
            "distractor_rate": self.distractor_rate,
            "p_floor": self.p_floor,
        }

    @staticmethod
    def from_json(data: dict) -> "AgentNoiseParams":
        return AgentNoiseParams(**{
            k: float(v) for k, v in data.items()
            if k in ("epsilon_answer", "p_corrective", "grounder_jitter_px",
                     "distractor_rate", "p_floor")
        })
