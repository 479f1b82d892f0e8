"""World model tests: generation, point clouds, quantization, datasets."""

import json
import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from iogsim.errors import DatasetFormatError
from iogsim.world import (
    DatasetRecord,
    GeneratorConfig,
    box_iou,
    default_lexicon,
    dequantize_box,
    dequantize_coord,
    generate_records,
    generate_scene,
    generate_task,
    load_dataset,
    quantize_box,
    quantize_coord,
    render_point_cloud,
    save_dataset,
    split_config,
)
from iogsim.world.types import RegionBox, Scene

from conftest import make_object, make_scene


class TestGenerateScene:
    def test_ambiguous_mode_forces_two_intent_objects(self):
        config = GeneratorConfig(ambiguous=True)
        lexicon = default_lexicon()
        for seed in range(20):
            task = generate_task(config, seed, lexicon)
            entry = lexicon.entries[task.intent_tag]
            satisfiers = [o for o in task.scene.objects if entry.satisfied_by(o)]
            assert len(satisfiers) >= 2

    def test_determinism_byte_identical(self):
        config = GeneratorConfig()
        for seed in (0, 7, 12345):
            a = generate_scene(config, seed)
            b = generate_scene(config, seed)
            assert json.dumps(a.to_json()) == json.dumps(b.to_json())

    def test_holdout_excludes_category(self):
        config = GeneratorConfig(holdout_categories=("banana",))
        for seed in range(30):
            scene = generate_scene(config, seed)
            assert all(o.category != "banana" for o in scene.objects)

    def test_target_satisfies_intent(self):
        lexicon = default_lexicon()
        for seed in range(30):
            task = generate_task(GeneratorConfig(), seed, lexicon)
            entry = lexicon.entries[task.intent_tag]
            assert entry.satisfied_by(task.scene.target)
            assert lexicon.resolve_utterance(task.utterance) == task.intent_tag

    def test_empty_pool_rejected(self):
        all_names = tuple(c.name for c in default_lexicon().categories)
        with pytest.raises(ValueError, match="empty category pool"):
            generate_scene(GeneratorConfig(holdout_categories=all_names), 0)

    def test_capacity_error_when_tidy_placement_impossible(self):
        config = GeneratorConfig(
            width=200, height=160, min_objects=12, max_objects=12,
            max_place_attempts=40,
        )
        with pytest.raises(ValueError, match="cannot place"):
            generate_scene(config, 3)

    def test_tidy_split_overlap_limit(self):
        for seed in range(10):
            scene = generate_scene(split_config("seen"), seed)
            boxes = [o.box for o in scene.objects]
            for i, a in enumerate(boxes):
                for b in boxes[i + 1:]:
                    assert box_iou(a, b) <= 0.05

    def test_cluttered_split_allows_overlap_and_stays_bounded(self):
        overlaps = []
        for seed in range(20):
            scene = generate_scene(split_config("cluttered"), seed)
            assert scene.clutter_mode
            boxes = [o.box for o in scene.objects]
            for i, a in enumerate(boxes):
                for b in boxes[i + 1:]:
                    iou = box_iou(a, b)
                    assert iou <= 0.5
                    overlaps.append(iou)
        assert max(overlaps) > 0.05  # clutter actually produces overlap

    def test_unseen_split_uses_only_reserved_categories(self):
        from iogsim.world import UNSEEN_CATEGORIES
        seen_cats = set()
        for seed in range(10):
            scene = generate_scene(split_config("unseen"), seed)
            seen_cats |= {o.category for o in scene.objects}
        assert seen_cats <= set(UNSEEN_CATEGORIES)


class TestPointCloud:
    def test_plane_only_scene_exact_table_height(self):
        obj = make_object("a", "apple", (10, 10, 40, 40))
        scene = make_scene([obj], "a", width=64, height=48)
        # noiseless: plane points at exactly table_z
        cloud = render_point_cloud(scene, noise_sigma=0.0)
        labels = np.asarray(cloud.labels)
        plane_z = np.asarray(cloud.points)[labels == ""][:, 2]
        assert np.all(plane_z == 0.0)

    def test_object_points_reach_height(self):
        obj = make_object("a", "apple", (100, 100, 200, 200), height_m=0.04)
        scene = make_scene([obj], "a")
        cloud = render_point_cloud(scene, noise_sigma=0.0)
        labels = np.asarray(cloud.labels)
        in_box = np.asarray(cloud.points)[labels == "a"]
        assert in_box[:, 2].max() == pytest.approx(0.04, abs=1e-12)
        assert np.all(in_box[:, 2] > 0.0)

    def test_noise_sigma_monte_carlo(self):
        obj = make_object("a", "apple", (10, 10, 40, 40))
        scene = make_scene([obj], "a")
        cloud = render_point_cloud(scene, noise_sigma=0.001)
        labels = np.asarray(cloud.labels)
        plane_z = np.asarray(cloud.points)[labels == ""][:, 2]
        assert len(plane_z) >= 10_000
        assert 0.0008 <= plane_z.std() <= 0.0012

    def test_pixel_map_within_bounds_and_aligned(self):
        scene = generate_scene(GeneratorConfig(), 5)
        cloud = render_point_cloud(scene, noise_sigma=0.0)
        u, v = cloud.pixel_map[:, 0], cloud.pixel_map[:, 1]
        assert np.all((u >= 0) & (u < scene.width))
        assert np.all((v >= 0) & (v < scene.height))
        assert len(cloud.points) == len(cloud.pixel_map)

    def test_deterministic_per_scene(self):
        scene = generate_scene(GeneratorConfig(), 11)
        a = render_point_cloud(scene, noise_sigma=0.001)
        b = render_point_cloud(scene, noise_sigma=0.001)
        assert np.array_equal(a.points, b.points)

    def test_cloud_file_roundtrip(self, tmp_path):
        from iogsim.world import load_cloud, save_cloud

        scene = generate_scene(GeneratorConfig(min_objects=2, max_objects=2), 13)
        cloud = render_point_cloud(scene, noise_sigma=0.001)
        path = tmp_path / "cloud.json"
        save_cloud(cloud, str(path))
        loaded = load_cloud(str(path))
        assert np.array_equal(loaded.points, cloud.points)
        assert np.array_equal(loaded.pixel_map, cloud.pixel_map)


class TestQuantize:
    def test_example_midpoint(self):
        # floor(320/640 * 1000) = 500
        assert quantize_coord(320, 640) == 500

    def test_zero_and_upper_clamp(self):
        assert quantize_coord(0, 640) == 0
        assert quantize_coord(640, 640) == 999

    def test_box_roundtrip(self):
        box = RegionBox(12.3, 45.6, 300.0, 410.9)
        quad = quantize_box(box, 640, 480)
        assert all(0 <= q <= 999 for q in quad)
        back = dequantize_box(quad, 640, 480)
        assert abs(back.x1 - box.x1) <= 640 / 1000
        assert abs(back.y2 - box.y2) <= 480 / 1000

    @given(st.floats(min_value=0, max_value=640), st.floats(min_value=0, max_value=640))
    def test_monotone(self, a, b):
        lo, hi = sorted((a, b))
        assert quantize_coord(lo, 640) <= quantize_coord(hi, 640)

    @given(st.floats(min_value=0, max_value=480))
    def test_roundtrip_error_bound(self, v):
        q = quantize_coord(v, 480)
        assert abs(dequantize_coord(q, 480) - v) <= 480 / 1000


class TestDataset:
    def _record(self, n_qa=1):
        records = generate_records(1, seed=3, config=GeneratorConfig())
        return records[0]

    def test_region_label_length_rule(self):
        record = self._record()
        assert len(record.region_labels) == len(record.qa_pairs) + 1

    def test_target_outside_final_labels_rejected(self):
        record = self._record()
        bogus = RegionBox(1, 1, 2, 2)
        with pytest.raises(DatasetFormatError, match="target_box"):
            DatasetRecord(
                scene=record.scene,
                utterance=record.utterance,
                qa_pairs=record.qa_pairs,
                region_labels=record.region_labels,
                target_box=bogus,
            )

    def test_wrong_label_count_rejected(self):
        record = self._record()
        with pytest.raises(DatasetFormatError, match="region_labels"):
            DatasetRecord(
                scene=record.scene,
                utterance=record.utterance,
                qa_pairs=record.qa_pairs + (("q?", "Yes."),),
                region_labels=record.region_labels,
                target_box=record.target_box,
            )

    def test_roundtrip_400_records(self, tmp_path):
        records = generate_records(400, seed=9, config=GeneratorConfig())
        path = tmp_path / "train.json"
        save_dataset(records, str(path))
        loaded = load_dataset(str(path))
        assert loaded == records

    def test_parse_error_names_field(self, tmp_path):
        record = self._record()
        data = [record.to_json()]
        data[0]["qa_pairs"] = [["only-question"]]
        path = tmp_path / "bad.json"
        path.write_text(json.dumps(data))
        with pytest.raises(DatasetFormatError, match=r"record 0: qa_pairs\[0\]"):
            load_dataset(str(path))

    def test_records_have_dialogue(self):
        records = generate_records(20, seed=4, config=GeneratorConfig(ambiguous=True))
        assert all(len(r.qa_pairs) >= 1 for r in records)
        assert all(r.target_box in r.region_labels[-1] for r in records)


class TestSceneInvariants:
    def test_target_must_exist(self):
        obj = make_object("a", "apple", (10, 10, 40, 40))
        with pytest.raises(ValueError, match="target_id"):
            make_scene([obj], "nope")

    def test_box_must_be_in_bounds(self):
        obj = make_object("a", "apple", (10, 10, 700, 40))
        with pytest.raises(ValueError, match="bounds"):
            make_scene([obj], "a")

    def test_tidy_overlap_rejected(self):
        a = make_object("a", "apple", (10, 10, 100, 100))
        b = make_object("b", "kiwi", (40, 40, 110, 110))  # IoU ~ 0.38
        with pytest.raises(ValueError, match="overlap"):
            make_scene([a, b], "a")
        # the same layout is fine when clutter is on
        make_scene([a, b], "a", clutter=True)

    def test_degenerate_box_rejected(self):
        with pytest.raises(ValueError, match="degenerate"):
            RegionBox(10, 10, 10, 40)
