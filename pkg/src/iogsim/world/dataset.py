"""Dataset records: scripted visually-grounded dialogues with region labels.

A record stores the scene, the opening utterance, rendered QA strings,
and per-round region-label sets R_0..R_N (the boxes a grounder should
predict given the dialogue so far). The target box always belongs to
the final label set; generation rejects and redraws records whose noisy
answers would break that.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from ..errors import DatasetFormatError
from .generator import GeneratorConfig, generate_task
from .lexicon import IntentLexicon, default_lexicon
from .types import RegionBox, Scene


@dataclass(frozen=True)
class DatasetRecord:
    scene: Scene
    utterance: str
    qa_pairs: tuple[tuple[str, str], ...]
    region_labels: tuple[tuple[RegionBox, ...], ...]
    target_box: RegionBox

    def __post_init__(self):
        if len(self.region_labels) != len(self.qa_pairs) + 1:
            raise DatasetFormatError(
                "region_labels: expected "
                f"{len(self.qa_pairs) + 1} sets for {len(self.qa_pairs)} qa_pairs, "
                f"got {len(self.region_labels)}"
            )
        if self.target_box not in self.region_labels[-1]:
            raise DatasetFormatError(
                "target_box: not a member of the final region_labels set"
            )

    def to_json(self) -> dict:
        return {
            "scene": self.scene.to_json(),
            "utterance": self.utterance,
            "qa_pairs": [[q, a] for q, a in self.qa_pairs],
            "region_labels": [
                [box.as_list() for box in label_set] for label_set in self.region_labels
            ],
            "target_box": self.target_box.as_list(),
        }

    @staticmethod
    def from_json(data: dict) -> "DatasetRecord":
        for key in ("scene", "utterance", "qa_pairs", "region_labels", "target_box"):
            if key not in data:
                raise DatasetFormatError(f"{key}: missing field")
        try:
            scene = Scene.from_json(data["scene"])
        except (KeyError, TypeError, ValueError) as exc:
            raise DatasetFormatError(f"scene: {exc}") from exc
        qa_pairs = []
        for i, pair in enumerate(data["qa_pairs"]):
            if not isinstance(pair, (list, tuple)) or len(pair) != 2:
                raise DatasetFormatError(f"qa_pairs[{i}]: expected a [question, answer] pair")
            qa_pairs.append((str(pair[0]), str(pair[1])))
        try:
            labels = tuple(
                tuple(RegionBox.from_list(b) for b in label_set)
                for label_set in data["region_labels"]
            )
        except (TypeError, ValueError) as exc:
            raise DatasetFormatError(f"region_labels: {exc}") from exc
        try:
            target_box = RegionBox.from_list(data["target_box"])
        except (TypeError, ValueError) as exc:
            raise DatasetFormatError(f"target_box: {exc}") from exc
        return DatasetRecord(
            scene=scene,
            utterance=str(data["utterance"]),
            qa_pairs=tuple(qa_pairs),
            region_labels=labels,
            target_box=target_box,
        )


def save_dataset(records: list[DatasetRecord], path: str) -> None:
    with open(path, "w") as fh:
        json.dump([r.to_json() for r in records], fh)


def load_dataset(path: str) -> list[DatasetRecord]:
    with open(path) as fh:
        data = json.load(fh)
    if not isinstance(data, list):
        raise DatasetFormatError("top level: expected a list of records")
    records = []
    for i, item in enumerate(data):
        try:
            records.append(DatasetRecord.from_json(item))
        except DatasetFormatError as exc:
            raise DatasetFormatError(f"record {i}: {exc}") from exc
    return records


def generate_records(
    count: int,
    seed: int,
    config: GeneratorConfig | None = None,
    noise=None,
    lexicon: IntentLexicon | None = None,
    max_rounds: int = 3,
) -> list[DatasetRecord]:
    """Scripted dialogue records over generated scenes.

    The questioner picks a random consistent candidate each round; the
    answerer samples from the simulated-human distribution. Rounds stop
    once a single consistent object remains or max_rounds is reached.
    """
    from ..agents.grounding import consistent_objects
    from ..agents.questioning import generate_question
    from ..agents.answering import simulate_answer
    from ..agents.types import AgentNoiseParams, DialogueState

    lexicon = lexicon or default_lexicon()
    config = config or GeneratorConfig()
    noise = noise if noise is not None else AgentNoiseParams()

    records: list[DatasetRecord] = []
    for idx in range(count):
        for attempt in range(64):
            scene_seed = int(np.random.SeedSequence([seed, idx, attempt]).generate_state(1)[0])
            task = generate_task(config, scene_seed, lexicon)
            rng = np.random.default_rng([seed, idx, attempt, 1])
            scene = task.scene
            target = scene.target

            dialogue = DialogueState(task.utterance)
            consistent = consistent_objects(scene, dialogue, lexicon)
            labels = [tuple(o.box for o in consistent)]
            qa_pairs: list[tuple[str, str]] = []

            rounds = 0
            while len(consistent) > 1 and rounds < max_rounds:
                referent = consistent[int(rng.integers(len(consistent)))]
                question = generate_question(scene, dialogue, referent.box, lexicon)
                answer = simulate_answer(scene, target.box, question, noise, rng)
                dialogue = dialogue.with_qa(question, answer)
                qa_pairs.append((question.text, answer.text))
                consistent = consistent_objects(scene, dialogue, lexicon)
                labels.append(tuple(o.box for o in consistent))
                rounds += 1

            if target.box in labels[-1]:
                records.append(DatasetRecord(
                    scene=scene,
                    utterance=task.utterance,
                    qa_pairs=tuple(qa_pairs),
                    region_labels=tuple(labels),
                    target_box=target.box,
                ))
                break
        else:
            raise RuntimeError(f"record {idx}: no consistent draw in 64 attempts")
    return records
