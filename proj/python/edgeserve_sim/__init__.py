"""Edge model-cache simulator: catalog, trace generation and policy runs."""

from ._core import (
    AccuracyModel,
    ModelProfile,
    Request,
    TaskProfile,
    accuracy_at,
    builtin_catalog,
    calibrate_accuracy,
    compare,
    generate_trace,
    load_catalog,
    memory_footprint,
    read_trace,
    simulate,
    write_catalog,
    write_trace,
)

__all__ = [
    "AccuracyModel",
    "ModelProfile",
    "Request",
    "TaskProfile",
    "accuracy_at",
    "builtin_catalog",
    "calibrate_accuracy",
    "compare",
    "generate_trace",
    "load_catalog",
    "memory_footprint",
    "read_trace",
    "simulate",
    "write_catalog",
    "write_trace",
]
