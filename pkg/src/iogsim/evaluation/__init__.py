"""Metrics and the offline benchmark harness."""

from .metrics import accuracy_at, communicative_efficiency, iou, oracle_upper_bound
from .benchmark import (
    BenchmarkConfig,
    BenchmarkReport,
    ReportRow,
    ReportTable,
    generate_split_tasks,
    load_episodes_jsonl,
    run_benchmark,
    save_episodes_jsonl,
)
from .gdh import dialogue_from_record, run_gdh

__all__ = [
    "accuracy_at", "communicative_efficiency", "iou", "oracle_upper_bound",
    "BenchmarkConfig", "BenchmarkReport", "ReportRow", "ReportTable",
    "generate_split_tasks", "load_episodes_jsonl", "run_benchmark",
    "save_episodes_jsonl", "dialogue_from_record", "run_gdh",
]
