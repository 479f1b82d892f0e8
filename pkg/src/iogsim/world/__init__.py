"""Synthetic tabletop world: scenes, lexicon, clouds, datasets."""

from .types import ObjectSpec, PointCloud, RegionBox, Scene, box_iou
from .lexicon import (
    COLORS,
    SIZE_CLASSES,
    UNSEEN_CATEGORIES,
    CategorySpec,
    IntentEntry,
    IntentLexicon,
    default_lexicon,
)
from .generator import GeneratorConfig, TaskSpec, generate_scene, generate_task, split_config
from .cloud import METERS_PER_PIXEL, load_cloud, render_point_cloud, save_cloud
from .quantize import dequantize_box, dequantize_coord, quantize_box, quantize_coord
from .dataset import DatasetRecord, generate_records, load_dataset, save_dataset

__all__ = [
    "ObjectSpec", "PointCloud", "RegionBox", "Scene", "box_iou",
    "COLORS", "SIZE_CLASSES", "UNSEEN_CATEGORIES", "CategorySpec",
    "IntentEntry", "IntentLexicon", "default_lexicon",
    "GeneratorConfig", "TaskSpec", "generate_scene", "generate_task", "split_config",
    "METERS_PER_PIXEL", "load_cloud", "render_point_cloud", "save_cloud",
    "dequantize_box", "dequantize_coord", "quantize_box", "quantize_coord",
    "DatasetRecord", "generate_records", "load_dataset", "save_dataset",
]
