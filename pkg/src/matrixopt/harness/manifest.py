"""Benchmark manifests: suite rows bound to registered solvers, executed
(optionally in a worker pool) into CSV/JSON records.

Each record keeps its manifest row index and results are sorted by it
before emission, so the output is identical no matter how workers
interleave.  Reference figures from the source tables ride along in the
CSV for comparison but never influence execution.
"""

from __future__ import annotations

import csv
import io
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

from ..baselines import (
    BaselineConfig,
    solve_anderson_richardson,
    solve_cg,
    solve_lyapunov_direct,
    solve_newton_care,
)
from ..care_admm import AdmmConfig, solve_care_admm
from ..ccom import CcomConfig, solve_ccom
from ..errors import MatrixOptError, PreconditionError
from ..newton_admm import (
    NewtonAdmmConfig,
    lyapunov_residual,
    solve_lyapunov_admm,
    solve_newton_admm,
)
from ..oracle import solve_kronecker_direct, sylvester_residual
from ..problems import (
    CareProblem,
    LyapunovProblem,
    SuiteRow,
    SylvesterProblem,
    paper_suite,
)
from ..quasi_newton import QnConfig, solve_quasi_newton
from ..report import SolveReport

ENV_THREAD_CAP = "MATRIXOPT_THREADS"

CSV_COLUMNS = (
    "algorithm",
    "n",
    "iterations",
    "final_residual",
    "wall_time_seconds",
    "paper_iterations",
    "paper_error",
)


def _wrap_direct(solution, residual: float, elapsed: float) -> SolveReport:
    return SolveReport(
        solution=solution,
        iterations=0,
        residual_history=[residual],
        final_residual=residual,
        wall_time_seconds=elapsed,
        termination="converged",
        detail={"direct": True},
    )


def _run_direct(problem, params):
    start = time.perf_counter()
    if isinstance(problem, SylvesterProblem):
        x = solve_kronecker_direct(problem)
        return _wrap_direct(x, sylvester_residual(problem, x), time.perf_counter() - start)
    if isinstance(problem, LyapunovProblem):
        x = solve_lyapunov_direct(problem)
        return _wrap_direct(x, lyapunov_residual(problem, x), time.perf_counter() - start)
    raise PreconditionError("no direct solver for this equation kind")


def _run_ccom(problem, params):
    if not isinstance(problem, SylvesterProblem):
        raise PreconditionError("ccom solves Sylvester equations")
    cfg = CcomConfig(
        epsilon=params.get("tol", 1e-8),
        max_iterations=params.get("max_iterations", 100),
        group_rows=params.get("group_rows", 1),
    )
    return solve_ccom(problem, cfg)


def _run_qn(method):
    def runner(problem, params):
        if not isinstance(problem, SylvesterProblem):
            raise PreconditionError(f"{method} solves Sylvester equations")
        cfg = QnConfig(
            method=method,
            linesearch=params.get("linesearch", "exact"),
            sigma1=params.get("sigma1", 1e-4),
            sigma2=params.get("sigma2", 0.9),
            grad_tol=params.get("tol", 1e-8),
            max_iterations=params.get("max_iterations", 500),
            mode=params.get("mode", "matrix_form"),
        )
        return solve_quasi_newton(problem, cfg)

    return runner


def _baseline_cfg(params):
    return BaselineConfig(
        tol=params.get("tol", 1e-8),
        max_iterations=params.get("max_iterations", 1000),
        richardson_omega=params.get("omega", "auto"),
    )


def _run_cg(problem, params):
    if not isinstance(problem, SylvesterProblem):
        raise PreconditionError("cg solves Sylvester equations")
    return solve_cg(problem, _baseline_cfg(params))


def _run_ar(problem, params):
    if not isinstance(problem, SylvesterProblem):
        raise PreconditionError("ar solves Sylvester equations")
    return solve_anderson_richardson(problem, _baseline_cfg(params))


def _run_admm(problem, params):
    if isinstance(problem, CareProblem):
        cfg = AdmmConfig(
            alpha=params.get("alpha", 0.5),
            beta=params.get("beta", 10.0),
            gamma=params.get("gamma", 0.05),
            tol=params.get("tol", 1e-8),
            max_iterations=params.get("max_iterations", 50_000),
            check_every=params.get("check_every", 1),
        )
        return solve_care_admm(problem, cfg)
    if isinstance(problem, LyapunovProblem):
        cfg = NewtonAdmmConfig(
            alpha=params.get("alpha", 0.8),
            beta=params.get("beta", 50.0),
        )
        return solve_lyapunov_admm(
            problem,
            cfg,
            tol=params.get("tol", 1e-8),
            max_iter=params.get("max_iterations", 5000),
        )
    raise PreconditionError("admm solves Riccati or Lyapunov equations")


def _run_newton(problem, params):
    if not isinstance(problem, CareProblem):
        raise PreconditionError("newton solves Riccati equations")
    cfg = BaselineConfig(
        tol=params.get("tol", 1e-8),
        max_iterations=params.get("max_iterations", 100),
    )
    return solve_newton_care(problem, cfg=cfg)


def _run_newton_admm(problem, params):
    if not isinstance(problem, CareProblem):
        raise PreconditionError("newton-admm solves Riccati equations")
    cfg = NewtonAdmmConfig(
        alpha=params.get("alpha", 0.8),
        beta=params.get("beta", 50.0),
        outer_tol=params.get("tol", 1e-8),
        outer_max=params.get("outer_max", 50),
        inner_tol_mode=params.get("inner_tol_mode", "forcing"),
        inner_tol_value=params.get("inner_tol_value", 0.1),
        inner_max=params.get("inner_max", 5000),
    )
    return solve_newton_admm(problem, cfg=cfg)


REGISTRY = {
    "ccom": _run_ccom,
    "dfp": _run_qn("dfp"),
    "bfgs": _run_qn("bfgs"),
    "cg": _run_cg,
    "ar": _run_ar,
    "admm": _run_admm,
    "newton": _run_newton,
    "newton-admm": _run_newton_admm,
    "direct": _run_direct,
}

METHOD_NAMES = tuple(REGISTRY)


def run_method(method: str, problem, params: dict | None = None) -> SolveReport:
    """Dispatch one solve through the method registry."""
    if method not in REGISTRY:
        raise PreconditionError(
            f"unknown method {method!r}; expected one of {', '.join(METHOD_NAMES)}"
        )
    return REGISTRY[method](problem, dict(params or {}))


@dataclass
class RunManifest:
    suite: str
    rows: list[SuiteRow]
    desk_scale_cap: int = 256
    seed: int = 0

    def __post_init__(self):
        for row in self.rows:
            if row.method not in REGISTRY:
                raise ValueError(f"manifest row references unknown method {row.method!r}")

    def capped_rows(self, cap: int | None = None) -> list[tuple[int, SuiteRow]]:
        limit = self.desk_scale_cap if cap is None else cap
        return [(i, row) for i, row in enumerate(self.rows) if row.source.order <= limit]


@dataclass
class RunRecord:
    index: int
    row: SuiteRow
    iterations: int | None = None
    final_residual: float | None = None
    wall_time_seconds: float | None = None
    termination: str | None = None
    error: str | None = None
    detail: dict = field(default_factory=dict)

    def csv_row(self) -> list:
        return [
            self.row.method,
            self.row.source.order,
            self.iterations if self.iterations is not None else "",
            _fmt(self.final_residual),
            _fmt(self.wall_time_seconds),
            self.row.paper_iterations if self.row.paper_iterations is not None else "",
            _fmt(self.row.paper_error),
        ]


def _fmt(v) -> str:
    return "" if v is None else format(float(v), ".6e")


def manifest_for_suite(suite: str, desk_scale_cap: int = 256, seed: int = 0) -> RunManifest:
    return RunManifest(suite=suite, rows=paper_suite(suite), desk_scale_cap=desk_scale_cap, seed=seed)


def _execute(index: int, row: SuiteRow) -> RunRecord:
    try:
        problem = row.source.build()
        report = run_method(row.method, problem, row.params)
    except MatrixOptError as exc:
        return RunRecord(index=index, row=row, termination="error", error=str(exc))
    return RunRecord(
        index=index,
        row=row,
        iterations=report.iterations,
        final_residual=report.final_residual,
        wall_time_seconds=report.wall_time_seconds,
        termination=report.termination,
    )


def effective_workers(requested: int | None) -> int:
    """Worker-pool width: the requested count capped by MATRIXOPT_THREADS."""
    width = 1 if requested is None else max(1, requested)
    env = os.environ.get(ENV_THREAD_CAP)
    if env:
        try:
            width = min(width, max(1, int(env)))
        except ValueError:
            pass
    return width


def run_manifest(
    manifest: RunManifest,
    cap: int | None = None,
    workers: int | None = None,
) -> list[RunRecord]:
    """Execute every row with order <= cap; failures are recorded per row
    and never abort the run.  Records come back in manifest order."""
    jobs = manifest.capped_rows(cap)
    width = effective_workers(workers)
    if width == 1 or len(jobs) <= 1:
        records = [_execute(i, row) for i, row in jobs]
    else:
        with ThreadPoolExecutor(max_workers=width) as pool:
            records = list(pool.map(lambda job: _execute(*job), jobs))
    return sorted(records, key=lambda rec: rec.index)


def write_csv(records: list[RunRecord], fh: io.TextIOBase | None = None) -> str:
    """Render records as CSV with the pinned column schema."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for rec in records:
        writer.writerow(rec.csv_row())
    text = buffer.getvalue()
    if fh is not None:
        fh.write(text)
    return text


def summary_json(manifest: RunManifest, records: list[RunRecord]) -> dict:
    converged = sum(1 for r in records if r.termination == "converged")
    return {
        "suite": manifest.suite,
        "seed": manifest.seed,
        "rows_run": len(records),
        "rows_converged": converged,
        "rows_failed": sum(1 for r in records if r.error is not None),
        "records": [
            {
                "algorithm": r.row.method,
                "n": r.row.source.order,
                "params": r.row.params,
                "iterations": r.iterations,
                "final_residual": r.final_residual,
                "wall_time_seconds": r.wall_time_seconds,
                "termination": r.termination,
                "error": r.error,
                "paper_iterations": r.row.paper_iterations,
                "paper_error": r.row.paper_error,
            }
            for r in records
        ],
    }
