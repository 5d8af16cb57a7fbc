"""DFP and BFGS solvers for min 0.5 ||A X + X B - C||_F^2.

Two operating modes:

``matrix_form``
    The inverse-curvature approximation G is m x m and acts on the m x n
    gradient by left multiplication (search direction -G g).  The rank-2
    update fractions then have n x n *matrix* denominators, which are
    resolved with Moore-Penrose pseudo-inverses: the DFP correction reads
    ``delta (delta^T y)^+ delta^T - (G y)(y^T G y)^+ (G y)^T``, the unique
    reading that preserves the secant relation G y = delta when the
    denominators are nonsingular.

``vectorized``
    The iterate is flattened; G is mn x mn and the updates are the
    textbook scalar-denominator formulas.  Memory grows as (mn)^2, so
    this mode is capped at small orders.

The default line search is the closed-form exact minimizer: the
objective is quadratic along any line, which is also why well-behaved
runs converge in a handful of steps.  Armijo backtracking and a
Wolfe-Powell bracket-and-zoom search are provided for comparison runs;
note Armijo never tests curvature and can stall far from the solution.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np

from .errors import (
    CapacityError,
    CurvatureError,
    DegenerateDirectionError,
    DimensionError,
    LineSearchError,
    PreconditionError,
)
from .linalg import (
    DEFAULT_KRON_CAP,
    frobenius_norm,
    pseudo_inverse,
    symmetrize,
    trace_inner,
    vec,
    unvec,
)
from .oracle import sylvester_residual
from .problems import SylvesterProblem
from .report import SolveReport

METHODS = ("dfp", "bfgs")
LINESEARCHES = ("exact", "armijo", "wolfe")
MODES = ("matrix_form", "vectorized")


@dataclass
class QnConfig:
    method: str = "bfgs"
    linesearch: str = "exact"
    sigma1: float = 1e-4
    sigma2: float = 0.9
    grad_tol: float = 1e-8
    max_iterations: int = 500
    mode: str = "matrix_form"
    curvature_floor: float = 1e-14

    def __post_init__(self):
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}")
        if self.linesearch not in LINESEARCHES:
            raise ValueError(f"linesearch must be one of {LINESEARCHES}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if not 0 < self.sigma1 < 0.5:
            raise ValueError("sigma1 must lie in (0, 0.5)")
        if not self.sigma1 < self.sigma2 < 1:
            raise ValueError("sigma2 must lie in (sigma1, 1)")
        if self.grad_tol <= 0:
            raise ValueError("grad_tol must be positive")


@dataclass
class QnState:
    """One inverse-curvature update's operands.

    ``delta = X_k - X_{k-1}`` and ``y = g_k - g_{k-1}`` are m x n;
    ``inv_hessian`` is m x m in matrix form, mn x mn vectorized.
    """

    x: np.ndarray
    g: np.ndarray
    inv_hessian: np.ndarray
    delta: np.ndarray
    y: np.ndarray


def f1_value(p: SylvesterProblem, x: np.ndarray) -> float:
    """0.5 ||A x + x B - C||_F^2."""
    if x.shape != p.shape:
        raise DimensionError(f"iterate must be {p.shape}, got {x.shape}")
    r = p.a @ x + x @ p.b - p.c
    return 0.5 * float(np.vdot(r, r))


def f1_gradient(p: SylvesterProblem, x: np.ndarray) -> np.ndarray:
    """Gradient A^T R + R B^T with R = A x + x B - C.

    This is the adjoint of the equation operator applied to the residual,
    validated against central finite differences in the test suite.
    """
    if x.shape != p.shape:
        raise DimensionError(f"iterate must be {p.shape}, got {x.shape}")
    r = p.a @ x + x @ p.b - p.c
    return p.a.T @ r + r @ p.b.T


def exact_step(p: SylvesterProblem, x: np.ndarray, direction: np.ndarray) -> float:
    """Closed-form minimizer of the quadratic profile along ``direction``.

    With R the current residual and S the operator image of the
    direction, the minimizer over nonnegative steps is
    max(0, -<R, S> / <S, S>).
    """
    r = p.a @ x + x @ p.b - p.c
    s = p.a @ direction + direction @ p.b
    ss = float(np.vdot(s, s))
    if ss == 0.0:
        raise DegenerateDirectionError("direction lies in the operator null space")
    return max(0.0, -float(np.vdot(r, s)) / ss)


def armijo_search(
    p: SylvesterProblem,
    x: np.ndarray,
    direction: np.ndarray,
    sigma1: float = 1e-4,
    max_trials: int = 60,
) -> float:
    """Backtracking search halving from 1.0 until sufficient decrease holds."""
    g0 = f1_gradient(p, x)
    dphi0 = trace_inner(g0, direction)
    if dphi0 >= 0:
        raise PreconditionError("armijo_search requires a descent direction")
    phi0 = f1_value(p, x)
    alpha = 1.0
    for _ in range(max_trials):
        if f1_value(p, x + alpha * direction) <= phi0 + sigma1 * alpha * dphi0:
            return alpha
        alpha *= 0.5
    raise LineSearchError(f"no sufficient-decrease step in {max_trials} halvings")


def wolfe_search(
    p: SylvesterProblem,
    x: np.ndarray,
    direction: np.ndarray,
    sigma1: float = 1e-4,
    sigma2: float = 0.9,
    max_trials: int = 60,
) -> float:
    """Bracket-and-zoom search for a step meeting both Wolfe-Powell
    conditions: sufficient decrease with slope fraction ``sigma1`` and the
    curvature bound with fraction ``sigma2`` (which rules out vanishing
    steps).

    Starts at 1.0, doubles while the step is too short, bisects once a
    bracket exists; fails after ``max_trials`` trial points.
    """
    g0 = f1_gradient(p, x)
    dphi0 = trace_inner(g0, direction)
    if dphi0 >= 0:
        raise PreconditionError("wolfe_search requires a descent direction")
    phi0 = f1_value(p, x)

    lo = 0.0
    hi = None
    alpha = 1.0
    for _ in range(max_trials):
        x_trial = x + alpha * direction
        phi = f1_value(p, x_trial)
        if phi > phi0 + sigma1 * alpha * dphi0:
            hi = alpha
        else:
            dphi = trace_inner(f1_gradient(p, x_trial), direction)
            if dphi < sigma2 * dphi0:
                lo = alpha
            else:
                return alpha
        alpha = 0.5 * (lo + hi) if hi is not None else 2.0 * alpha
    raise LineSearchError(f"no Wolfe-Powell step after {max_trials} trials")


def _curvature_guard(name: str, value: float, floor: float):
    if value <= floor:
        raise CurvatureError(f"{name} = {value:.3e} is at or below the floor {floor:.1e}")


def dfp_update(
    state: QnState,
    mode: str = "matrix_form",
    curvature_floor: float = 1e-14,
) -> np.ndarray:
    """Rank-2 DFP update of the inverse-curvature approximation.

    Vectorized mode raises :class:`CurvatureError` when <delta, y> (or the
    G-weighted denominator) is at or below ``curvature_floor``; the caller
    is expected to skip the update and continue.  Matrix form resolves
    singular matrix denominators with pseudo-inverses instead.
    """
    g = state.inv_hessian
    if mode == "vectorized":
        d = vec(state.delta).ravel()
        y = vec(state.y).ravel()
        s = float(d @ y)
        _curvature_guard("<delta, y>", s, curvature_floor)
        gy = g @ y
        ygy = float(y @ gy)
        _curvature_guard("y^T G y", ygy, curvature_floor)
        return symmetrize(g + np.outer(d, d) / s - np.outer(gy, gy) / ygy)
    if mode != "matrix_form":
        raise ValueError(f"unknown mode {mode!r}")
    d, y = state.delta, state.y
    k = pseudo_inverse(d.T @ y)
    gy = g @ y
    t = pseudo_inverse(y.T @ gy)
    return symmetrize(g + d @ k @ d.T - gy @ t @ gy.T)


def bfgs_update(
    state: QnState,
    mode: str = "matrix_form",
    curvature_floor: float = 1e-14,
) -> np.ndarray:
    """Rank-2 BFGS update of the inverse-curvature approximation.

    In vectorized mode positive definiteness is preserved whenever
    <delta, y> > 0, which the Wolfe-Powell search guarantees.
    """
    g = state.inv_hessian
    if mode == "vectorized":
        d = vec(state.delta).ravel()
        y = vec(state.y).ravel()
        s = float(d @ y)
        _curvature_guard("<delta, y>", s, curvature_floor)
        gy = g @ y
        ygy = float(y @ gy)
        dd = np.outer(d, d)
        cross = np.outer(d, gy)
        return symmetrize(g + (s + ygy) / (s * s) * dd - (cross + cross.T) / s)
    if mode != "matrix_form":
        raise ValueError(f"unknown mode {mode!r}")
    d, y = state.delta, state.y
    k = pseudo_inverse(d.T @ y)
    e = np.eye(d.shape[0]) - d @ k @ y.T
    return symmetrize(e @ g @ e.T + d @ k @ d.T)


def _direction(g_mat: np.ndarray, inv_h: np.ndarray, mode: str, shape) -> np.ndarray:
    if mode == "matrix_form":
        return -(inv_h @ g_mat)
    return unvec(-(inv_h @ vec(g_mat)), *shape)


def _partial_report(p, x, iterations, history, start, detail) -> SolveReport:
    return SolveReport(
        solution=x,
        iterations=iterations,
        residual_history=history,
        final_residual=history[-1],
        wall_time_seconds=time.perf_counter() - start,
        termination="error",
        detail=detail,
    )


def solve_quasi_newton(
    p: SylvesterProblem,
    cfg: QnConfig | None = None,
    x0: np.ndarray | None = None,
) -> SolveReport:
    """Quasi-Newton iteration X <- X + lambda (-G g) until ||g||_F falls
    below ``cfg.grad_tol``.

    ``detail`` carries a per-update audit (``updates``: secant error,
    symmetry error, curvature, accepted step), the objective trace
    (``f_history``), gradient norms, and the count of curvature-skipped
    updates.  Line-search failures re-raise with the partial report
    attached to the exception.
    """
    cfg = cfg or QnConfig()
    m, n = p.shape
    if cfg.mode == "vectorized" and (m * n) ** 2 > DEFAULT_KRON_CAP:
        raise CapacityError(
            f"vectorized inverse Hessian would need ({m * n})^2 entries"
        )
    x = np.zeros((m, n)) if x0 is None else np.array(x0, dtype=np.float64)
    if x.shape != (m, n):
        raise DimensionError(f"x0 must be {m}x{n}, got {x.shape}")

    start = time.perf_counter()
    inv_h = np.eye(m) if cfg.mode == "matrix_form" else np.eye(m * n)
    g = f1_gradient(p, x)
    history = [sylvester_residual(p, x)]
    detail: dict = {
        "updates": [],
        "f_history": [f1_value(p, x)],
        "grad_norm_history": [frobenius_norm(g)],
        "curvature_skips": 0,
        "mode": cfg.mode,
        "method": cfg.method,
    }
    update_fn = dfp_update if cfg.method == "dfp" else bfgs_update

    iterations = 0
    termination = "max_iterations"
    if frobenius_norm(g) < cfg.grad_tol:
        termination = "converged"
    else:
        for _ in range(cfg.max_iterations):
            direction = _direction(g, inv_h, cfg.mode, (m, n))
            dphi0 = trace_inner(g, direction)
            if dphi0 >= 0:
                termination = "stagnated"
                break
            try:
                if cfg.linesearch == "exact":
                    lam = exact_step(p, x, direction)
                elif cfg.linesearch == "armijo":
                    lam = armijo_search(p, x, direction, cfg.sigma1)
                else:
                    lam = wolfe_search(p, x, direction, cfg.sigma1, cfg.sigma2)
            except (LineSearchError, DegenerateDirectionError) as exc:
                exc.report = _partial_report(p, x, iterations, history, start, detail)
                raise
            if lam == 0.0:
                termination = "stagnated"
                break

            x_new = x + lam * direction
            g_new = f1_gradient(p, x_new)
            delta = x_new - x
            y = g_new - g
            state = QnState(x=x_new, g=g_new, inv_hessian=inv_h, delta=delta, y=y)
            audit = {
                "step": lam,
                "curvature": trace_inner(delta, y),
                "skipped": False,
            }
            try:
                inv_h = update_fn(state, cfg.mode, cfg.curvature_floor)
            except CurvatureError:
                detail["curvature_skips"] += 1
                audit["skipped"] = True
            if not audit["skipped"]:
                if cfg.mode == "matrix_form":
                    secant_err = frobenius_norm(inv_h @ y - delta)
                else:
                    secant_err = float(
                        np.linalg.norm(inv_h @ vec(y).ravel() - vec(delta).ravel())
                    )
                audit["secant_error"] = secant_err
                audit["delta_norm"] = frobenius_norm(delta)
                audit["symmetry_error"] = frobenius_norm(inv_h - inv_h.T)
                audit["inv_hessian_norm"] = frobenius_norm(inv_h)
                if inv_h.shape[0] <= 64:
                    audit["min_eigenvalue"] = float(np.linalg.eigvalsh(inv_h).min())
            detail["updates"].append(audit)

            x, g = x_new, g_new
            iterations += 1
            history.append(sylvester_residual(p, x))
            detail["f_history"].append(f1_value(p, x))
            detail["grad_norm_history"].append(frobenius_norm(g))
            if frobenius_norm(g) < cfg.grad_tol:
                termination = "converged"
                break

    return SolveReport(
        solution=x,
        iterations=iterations,
        residual_history=history,
        final_residual=history[-1],
        wall_time_seconds=time.perf_counter() - start,
        termination=termination,
        detail=detail,
    )
