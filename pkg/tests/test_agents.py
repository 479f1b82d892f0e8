"""Agent model tests: grounding, questions, answers, exact likelihoods."""

import inspect
import math

import numpy as np
import pytest

from iogsim.agents import (
    AgentNoiseParams,
    DialogueState,
    Descriptor,
    Question,
    answer_likelihood,
    answer_space,
    best_object,
    canonical_descriptor,
    correction_descriptors,
    generate_question,
    ground,
    make_answer,
    minimal_descriptor,
    parse_answer_text,
    parse_question_text,
    region_likelihood,
    simulate_answer,
)
from iogsim.errors import UngroundableUtteranceError, UnresolvableReferentError
from iogsim.world import GeneratorConfig, generate_task
from iogsim.world.types import RegionBox

from conftest import make_object, make_scene

NOISELESS = AgentNoiseParams.noiseless()


def question_for(scene, obj, utterance="I am thirsty."):
    return generate_question(scene, DialogueState(utterance), obj.box)


class TestGround:
    def test_thirst_returns_both_drinks(self, two_drinks_scene):
        rng = np.random.default_rng(0)
        regions = ground(two_drinks_scene, DialogueState("I am thirsty."), NOISELESS, rng)
        assert len(regions) == 2
        boxes = {r.box for r in regions}
        assert two_drinks_scene.object_by_id("a").box in boxes
        assert two_drinks_scene.object_by_id("b").box in boxes

    def test_no_answer_excludes_descriptor(self, two_drinks_scene):
        scene = two_drinks_scene
        dialogue = DialogueState("I am thirsty.")
        q = question_for(scene, scene.object_by_id("a"))
        dialogue = dialogue.with_qa(q, make_answer("no"))
        regions = ground(scene, dialogue, NOISELESS, np.random.default_rng(0))
        assert [r.box for r in regions] == [scene.object_by_id("b").box]

    def test_noiseless_singleton_probability_one(self, two_drinks_scene):
        scene = two_drinks_scene
        dialogue = DialogueState("I spilled water on the table.")  # only the sponge
        regions = ground(scene, dialogue, NOISELESS, np.random.default_rng(0))
        assert len(regions) == 1
        assert regions[0].box == scene.object_by_id("c").box
        assert math.exp(regions[0].log_prob) == pytest.approx(1.0, abs=1e-12)

    def test_unknown_utterance_raises(self, two_drinks_scene):
        with pytest.raises(UngroundableUtteranceError):
            ground(two_drinks_scene, DialogueState("open the pod bay doors"),
                   NOISELESS, np.random.default_rng(0))

    def test_emitted_probabilities_sum_to_one(self, two_drinks_scene):
        params = AgentNoiseParams(distractor_rate=2.0)
        rng = np.random.default_rng(3)
        regions = ground(two_drinks_scene, DialogueState("I am thirsty."), params, rng)
        total = sum(math.exp(r.log_prob) for r in regions)
        assert total == pytest.approx(1.0, abs=1e-9)


class TestRegionLikelihood:
    def test_singleton_pool(self, two_drinks_scene):
        box = two_drinks_scene.object_by_id("a").box
        p = region_likelihood(two_drinks_scene, DialogueState("I am thirsty."),
                              box, [box], NOISELESS)
        assert p == 1.0

    def test_two_equally_consistent(self, two_drinks_scene):
        a = two_drinks_scene.object_by_id("a").box
        b = two_drinks_scene.object_by_id("b").box
        dialogue = DialogueState("I am thirsty.")
        assert region_likelihood(two_drinks_scene, dialogue, a, [a, b], NOISELESS) == 0.5
        assert region_likelihood(two_drinks_scene, dialogue, b, [a, b], NOISELESS) == 0.5

    def test_floor_weight_split(self, two_drinks_scene):
        # weights (1, p_floor) -> (1/1.01, 0.01/1.01); frozen by hand
        a = two_drinks_scene.object_by_id("a").box
        c = two_drinks_scene.object_by_id("c").box  # sponge: inconsistent with thirst
        dialogue = DialogueState("I am thirsty.")
        params = AgentNoiseParams(p_floor=0.01)
        pa = region_likelihood(two_drinks_scene, dialogue, a, [a, c], params)
        pc = region_likelihood(two_drinks_scene, dialogue, c, [a, c], params)
        assert pa == pytest.approx(0.9900990099009901, abs=1e-12)
        assert pc == pytest.approx(0.009900990099009901, abs=1e-12)

    def test_region_must_be_in_pool(self, two_drinks_scene):
        a = two_drinks_scene.object_by_id("a").box
        other = RegionBox(0, 0, 5, 5)
        with pytest.raises(ValueError, match="candidate pool"):
            region_likelihood(two_drinks_scene, DialogueState("I am thirsty."),
                              other, [a], NOISELESS)

    def test_empty_pool_rejected(self, two_drinks_scene):
        with pytest.raises(ValueError):
            region_likelihood(two_drinks_scene, DialogueState("I am thirsty."),
                              RegionBox(0, 0, 5, 5), [], NOISELESS)


class TestQuestionGeneration:
    def test_unique_category_uses_bare_category(self):
        banana = make_object("a", "banana", (50, 50, 180, 110), affordances=("edible",))
        apple = make_object("b", "apple", (300, 300, 380, 380), affordances=("edible",))
        scene = make_scene([banana, apple], "a")
        q = generate_question(scene, DialogueState("I am hungry."), banana.box)
        assert q.text == "Should I get the banana?"
        assert q.descriptor == Descriptor("banana")

    def test_color_disambiguates_candles(self, two_candles_scene):
        scene = two_candles_scene
        pink = scene.object_by_id("pink-candle")
        q = generate_question(scene, DialogueState("It is getting dark in here."), pink.box)
        assert q.text == "Should I get the pink candle?"
        assert q.descriptor == Descriptor("candle", "pink")

    def test_empty_table_referent_errors(self, two_drinks_scene):
        with pytest.raises(UnresolvableReferentError):
            generate_question(two_drinks_scene, DialogueState("I am thirsty."),
                              RegionBox(600, 400, 630, 470))

    def test_question_roundtrip_parse(self, two_candles_scene):
        scene = two_candles_scene
        q = generate_question(scene, DialogueState("It is getting dark in here."),
                              scene.object_by_id("blue-candle").box)
        parsed = parse_question_text(scene, q.text)
        assert parsed.descriptor == q.descriptor


class TestDescriptors:
    def test_minimal_chain_falls_back_to_size(self):
        a = make_object("a", "mug", (10, 10, 80, 80), color="red", size="small")
        b = make_object("b", "mug", (200, 10, 270, 80), color="red", size="large")
        desc = minimal_descriptor(a, [a, b])
        assert desc == Descriptor("mug", "small")

    def test_twins_share_descriptor(self):
        a = make_object("a", "mug", (10, 10, 80, 80), color="red", size="small")
        b = make_object("b", "mug", (200, 10, 270, 80), color="red", size="small")
        scene = make_scene([a, b], "a")
        assert canonical_descriptor(scene, a) == canonical_descriptor(scene, b)
        assert len(correction_descriptors(scene)) == 1

    def test_best_object_requires_overlap(self, two_drinks_scene):
        scene = two_drinks_scene
        assert best_object(scene, scene.object_by_id("a").box).id == "a"
        assert best_object(scene, RegionBox(600, 400, 639, 479)) is None


class TestAnswerLikelihood:
    def test_match_yes(self, two_drinks_scene):
        scene = two_drinks_scene
        mug = scene.object_by_id("b")
        q = question_for(scene, mug)
        p = answer_likelihood(scene, mug.box, q, make_answer("yes"),
                              AgentNoiseParams(epsilon_answer=0.1))
        assert p == pytest.approx(0.9, abs=1e-12)

    def test_mismatch_yes_noiseless(self, two_drinks_scene):
        scene = two_drinks_scene
        q = question_for(scene, scene.object_by_id("b"))
        p = answer_likelihood(scene, scene.object_by_id("a").box, q,
                              make_answer("yes"), NOISELESS)
        assert p == 0.0

    def test_corrective_concentrates_on_match(self):
        # hungry scene: question about the strawberry, region is the kiwi
        kiwi = make_object("k", "kiwi", (50, 50, 120, 110), affordances=("edible",))
        straw = make_object("s", "strawberry", (300, 50, 360, 100), affordances=("edible",))
        scene = make_scene([kiwi, straw], "k")
        q = generate_question(scene, DialogueState("I am hungry."), straw.box)
        params = AgentNoiseParams(epsilon_answer=0.0, p_corrective=1.0,
                                  grounder_jitter_px=0.0, distractor_rate=0.0)
        kiwi_correction = make_answer("no", canonical_descriptor(scene, kiwi))
        assert answer_likelihood(scene, kiwi.box, q, kiwi_correction, params) == 1.0
        other = make_answer("no", canonical_descriptor(scene, straw))
        assert answer_likelihood(scene, kiwi.box, q, other, params) == 0.0

    def test_sums_to_one_over_rendering_set(self, two_drinks_scene):
        scene = two_drinks_scene
        params = AgentNoiseParams(epsilon_answer=0.17, p_corrective=0.4)
        for obj in scene.objects:
            q = question_for(scene, scene.object_by_id("a"))
            total = sum(
                answer_likelihood(scene, obj.box, q, ans, params)
                for ans in answer_space(scene, q)
            )
            assert total == pytest.approx(1.0, abs=1e-9)

    def test_sums_to_one_for_unmatched_region_even_noiseless(self, two_drinks_scene):
        scene = two_drinks_scene
        q = question_for(scene, scene.object_by_id("a"))
        nowhere = RegionBox(610, 440, 635, 478)
        total = sum(
            answer_likelihood(scene, nowhere, q, ans, NOISELESS)
            for ans in answer_space(scene, q)
        )
        assert total == pytest.approx(1.0, abs=1e-9)

    def test_history_independence_by_signature(self):
        names = set(inspect.signature(answer_likelihood).parameters)
        assert "dialogue" not in names and "history" not in names


class TestSimulateAnswer:
    def test_noiseless_match_is_yes(self, two_drinks_scene):
        scene = two_drinks_scene
        mug = scene.object_by_id("b")
        q = question_for(scene, mug)
        a = simulate_answer(scene, mug.box, q, NOISELESS, np.random.default_rng(0))
        assert a.polarity == "yes"

    def test_forced_corrective_names_target(self, two_drinks_scene):
        scene = two_drinks_scene
        mug = scene.object_by_id("b")
        q = question_for(scene, scene.object_by_id("a"))
        a = simulate_answer(scene, mug.box, q, NOISELESS, np.random.default_rng(0))
        assert a.polarity == "no"
        assert a.correction == canonical_descriptor(scene, mug)
        assert a.text == "No, I want the blue mug." or a.text == "No, I want the mug."

    def test_yes_rate_monte_carlo(self, two_drinks_scene):
        scene = two_drinks_scene
        mug = scene.object_by_id("b")
        q = question_for(scene, mug)
        params = AgentNoiseParams(epsilon_answer=0.2)
        rng = np.random.default_rng(123)
        n = 10_000
        yes = sum(
            simulate_answer(scene, mug.box, q, params, rng).polarity == "yes"
            for _ in range(n)
        )
        assert abs(yes / n - 0.8) <= 0.02

    def test_answer_roundtrip_parse(self, two_drinks_scene):
        scene = two_drinks_scene
        mug = scene.object_by_id("b")
        q = question_for(scene, scene.object_by_id("a"))
        rng = np.random.default_rng(5)
        for _ in range(50):
            a = simulate_answer(scene, mug.box, q, AgentNoiseParams(), rng)
            parsed = parse_answer_text(scene, a.text)
            assert parsed == a


class TestChiSquareConsistency:
    def test_empirical_matches_model(self, two_drinks_scene):
        from scipy.stats import chisquare

        scene = two_drinks_scene
        mug = scene.object_by_id("b")
        q = question_for(scene, scene.object_by_id("a"))
        params = AgentNoiseParams(epsilon_answer=0.1, p_corrective=0.5)
        space = answer_space(scene, q)
        probs = np.array([
            answer_likelihood(scene, mug.box, q, a, params) for a in space
        ])
        rng = np.random.default_rng(77)
        n = 20_000
        counts = np.zeros(len(space), dtype=int)
        texts = [a.text for a in space]
        for _ in range(n):
            ans = simulate_answer(scene, mug.box, q, params, rng)
            counts[texts.index(ans.text)] += 1
        keep = probs > 1e-12
        _, p_value = chisquare(counts[keep], probs[keep] * n)
        assert p_value > 0.01


class TestAnswerValidation:
    def test_correction_requires_no(self):
        with pytest.raises(ValueError):
            make_answer("yes", Descriptor("mug"))

    def test_noise_param_ranges(self):
        with pytest.raises(ValueError):
            AgentNoiseParams(epsilon_answer=0.5)
        with pytest.raises(ValueError):
            AgentNoiseParams(p_floor=0.0)
        with pytest.raises(ValueError):
            AgentNoiseParams(distractor_rate=-1)
