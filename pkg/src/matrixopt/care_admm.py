"""Four-block ADMM for the continuous algebraic Riccati equation.

The quadratic equation A^T X + X A - X N X + K = 0 is rewritten as the
constrained least-squares problem

    min 0.5 ||Y + Z A - W X + K||_F^2
    s.t. A^T X = Y,   X = Z,   Z N = W,

whose augmented Lagrangian (penalties alpha, beta, gamma on the three
constraints) is block-wise strongly convex.  One sweep minimizes over
X, Y, Z, W in that fixed order - each argmin has a closed form solved as
an SPD linear system - then takes gradient-ascent steps on the three
multipliers.  The sweep order matters: the per-sweep decrease inequality
the tests assert is specific to it.

X is not kept symmetric during the iteration (the updates do not
preserve symmetry); the final report logs ``||X - X^T||_F`` and the
closed-loop spectral abscissa as diagnostics instead.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .errors import AdmmBreakdownError, DimensionError, NotPositiveDefiniteError, SingularMatrixError
from .linalg import cholesky_solve, frobenius_norm, lu_solve, trace_inner
from .baselines import care_residual
from .problems import CareProblem
from .report import SolveReport


@dataclass
class AdmmConfig:
    alpha: float = 0.5
    beta: float = 10.0
    gamma: float = 0.05
    tol: float = 1e-8
    max_iterations: int = 50_000
    check_every: int = 1
    track_lagrangian: bool = False

    def __post_init__(self):
        if min(self.alpha, self.beta, self.gamma) <= 0:
            raise ValueError("penalties alpha, beta, gamma must be positive")
        if self.tol <= 0:
            raise ValueError("tol must be positive")
        if self.check_every < 1:
            raise ValueError("check_every must be at least 1")


@dataclass
class AdmmState:
    """Primal blocks X, Y, Z, W and multipliers for the three constraints."""

    x: np.ndarray
    y: np.ndarray
    z: np.ndarray
    w: np.ndarray
    lambda_: np.ndarray
    pi_: np.ndarray
    gamma_: np.ndarray

    def __post_init__(self):
        n = self.x.shape[0]
        for name in ("x", "y", "z", "w", "lambda_", "pi_", "gamma_"):
            block = getattr(self, name)
            if block.shape != (n, n):
                raise DimensionError(f"block {name} must be {n}x{n}, got {block.shape}")
            if not np.all(np.isfinite(block)):
                raise ValueError(f"block {name} contains non-finite entries")

    @classmethod
    def zero(cls, n: int) -> "AdmmState":
        return cls(*(np.zeros((n, n)) for _ in range(7)))


def _solve_spd(system: np.ndarray, rhs: np.ndarray, what: str) -> np.ndarray:
    try:
        return cholesky_solve(system, rhs)
    except NotPositiveDefiniteError:
        pass
    try:
        return lu_solve(system, rhs)
    except SingularMatrixError as exc:
        raise AdmmBreakdownError(f"{what} system is singular: {exc}") from exc


def admm_step(p: CareProblem, s: AdmmState, cfg: AdmmConfig) -> AdmmState:
    """One sweep of the seven updates, X -> Y -> Z -> W -> multipliers.

    Every explicit inverse in the closed forms is realized as a linear
    solve; the Z and W updates multiply by an inverse from the right and
    are handled by solving the (symmetric) system against a transposed
    right-hand side.
    """
    a, n_mat, k_mat = p.a, p.n_mat, p.k_mat
    n = p.order
    if s.x.shape != (n, n):
        raise DimensionError(f"state order {s.x.shape[0]} does not match problem order {n}")
    al, be, ga = cfg.alpha, cfg.beta, cfg.gamma
    eye = np.eye(n)
    aat = a @ a.T

    x_sys = s.w.T @ s.w + al * aat + be * eye
    x_rhs = s.w.T @ (s.y + s.z @ a + k_mat) + a @ s.lambda_ + s.pi_ + al * (a @ s.y) + be * s.z
    x = _solve_spd(x_sys, x_rhs, "X-update")

    y = (s.w @ x + al * (a.T @ x) - s.z @ a - k_mat - s.lambda_) / (1.0 + al)

    z_sys = aat + be * eye + ga * (n_mat @ n_mat.T)
    z_rhs = (
        (s.w @ x - y - k_mat) @ a.T
        - s.pi_
        + s.gamma_ @ n_mat.T
        + be * x
        + ga * (s.w @ n_mat.T)
    )
    z = _solve_spd(z_sys, z_rhs.T, "Z-update").T

    w_sys = x @ x.T + ga * eye
    w_rhs = (y + z @ a + k_mat) @ x.T - s.gamma_ + ga * (z @ n_mat)
    w = _solve_spd(w_sys, w_rhs.T, "W-update").T

    lambda_ = s.lambda_ - al * (a.T @ x - y)
    pi_ = s.pi_ - be * (x - z)
    gamma_ = s.gamma_ - ga * (z @ n_mat - w)
    return AdmmState(x=x, y=y, z=z, w=w, lambda_=lambda_, pi_=pi_, gamma_=gamma_)


def kkt_residuals(p: CareProblem, s: AdmmState) -> tuple[float, ...]:
    """Frobenius norms of the seven first-order optimality conditions:
    stationarity in X, Y, Z, W followed by the three feasibility gaps."""
    a, n_mat, k_mat = p.a, p.n_mat, p.k_mat
    x, y, z, w = s.x, s.y, s.z, s.w
    return (
        frobenius_norm(w.T @ w @ x - w.T @ (y + z @ a + k_mat) - a @ s.lambda_ - s.pi_),
        frobenius_norm(y + z @ a - w @ x + k_mat + s.lambda_),
        frobenius_norm(z @ a @ a.T + (y - w @ x + k_mat) @ a.T + s.pi_ - s.gamma_ @ n_mat.T),
        frobenius_norm(w @ x @ x.T - (y + z @ a + k_mat) @ x.T + s.gamma_),
        frobenius_norm(a.T @ x - y),
        frobenius_norm(x - z),
        frobenius_norm(z @ n_mat - w),
    )


def lagrangian_value(p: CareProblem, s: AdmmState, cfg: AdmmConfig) -> float:
    """Augmented Lagrangian of the split problem at the given state."""
    a, n_mat, k_mat = p.a, p.n_mat, p.k_mat
    obj = s.y + s.z @ a - s.w @ s.x + k_mat
    gap_y = a.T @ s.x - s.y
    gap_z = s.x - s.z
    gap_w = s.z @ n_mat - s.w
    return (
        0.5 * float(np.vdot(obj, obj))
        - trace_inner(s.lambda_, gap_y)
        - trace_inner(s.pi_, gap_z)
        - trace_inner(s.gamma_, gap_w)
        + 0.5 * cfg.alpha * float(np.vdot(gap_y, gap_y))
        + 0.5 * cfg.beta * float(np.vdot(gap_z, gap_z))
        + 0.5 * cfg.gamma * float(np.vdot(gap_w, gap_w))
    )


def _block_deltas(s: AdmmState, s_new: AdmmState) -> dict:
    sq = lambda m: float(np.vdot(m, m))  # noqa: E731
    return {
        "dx2": sq(s_new.x - s.x),
        "dy2": sq(s_new.y - s.y),
        "dz2": sq(s_new.z - s.z),
        "dw2": sq(s_new.w - s.w),
        "dlambda2": sq(s_new.lambda_ - s.lambda_),
        "dpi2": sq(s_new.pi_ - s.pi_),
        "dgamma2": sq(s_new.gamma_ - s.gamma_),
    }


def solve_care_admm(
    p: CareProblem,
    cfg: AdmmConfig | None = None,
    init: AdmmState | None = None,
) -> SolveReport:
    """Iterate :func:`admm_step` from the zero state (or ``init``) until
    the Riccati residual of the X block drops below ``cfg.tol``.

    The residual is evaluated every ``check_every`` sweeps; the history
    records the sampled values, starting with the initial residual.  With
    ``track_lagrangian`` the detail map additionally carries the
    augmented-Lagrangian trace and squared per-sweep block changes, which
    the invariant tests turn into the per-sweep decrease inequality.
    """
    cfg = cfg or AdmmConfig()
    n = p.order
    state = init if init is not None else AdmmState.zero(n)
    start = time.perf_counter()

    history = [care_residual(p, state.x)]
    detail: dict = {"multiplier_diff_sq_sum": 0.0}
    if cfg.track_lagrangian:
        detail["lagrangian_history"] = [lagrangian_value(p, state, cfg)]
        detail["block_deltas"] = []

    iterations = 0
    termination = "max_iterations"
    if history[0] <= cfg.tol:
        termination = "converged"
    else:
        while iterations < cfg.max_iterations:
            new_state = admm_step(p, state, cfg)
            iterations += 1
            deltas = _block_deltas(state, new_state)
            detail["multiplier_diff_sq_sum"] += (
                deltas["dlambda2"] + deltas["dpi2"] + deltas["dgamma2"]
            )
            if cfg.track_lagrangian:
                detail["lagrangian_history"].append(lagrangian_value(p, new_state, cfg))
                detail["block_deltas"].append(deltas)
            state = new_state
            if iterations % cfg.check_every == 0 or iterations == cfg.max_iterations:
                history.append(care_residual(p, state.x))
                if history[-1] <= cfg.tol:
                    termination = "converged"
                    break

    detail["asymmetry"] = frobenius_norm(state.x - state.x.T)
    detail["final_kkt_residuals"] = kkt_residuals(p, state)
    closed_loop = p.a - p.n_mat @ state.x
    detail["closed_loop_max_real_eig"] = float(np.max(np.linalg.eigvals(closed_loop).real))
    detail["state"] = state

    return SolveReport(
        solution=state.x,
        iterations=iterations,
        residual_history=history,
        final_residual=history[-1],
        wall_time_seconds=time.perf_counter() - start,
        termination=termination,
        detail=detail,
    )
