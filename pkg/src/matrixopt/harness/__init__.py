"""Benchmark orchestration, CLI, and report emission."""

from .manifest import (
    METHOD_NAMES,
    RunManifest,
    RunRecord,
    manifest_for_suite,
    run_manifest,
    run_method,
    write_csv,
)
from .plotting import emit_convergence_plot

__all__ = [
    "METHOD_NAMES",
    "RunManifest",
    "RunRecord",
    "emit_convergence_plot",
    "manifest_for_suite",
    "run_manifest",
    "run_method",
    "write_csv",
]
