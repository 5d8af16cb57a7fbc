import numpy as np
import pytest

from conftest import random_sylvester
from matrixopt.baselines import (
    BaselineConfig,
    care_residual,
    solve_anderson_richardson,
    solve_cg,
    solve_lyapunov_direct,
    solve_newton_care,
)
from matrixopt.errors import (
    NewtonBreakdownError,
    PreconditionError,
    SingularMatrixError,
)
from matrixopt.linalg import frobenius_norm, trace_inner
from matrixopt.oracle import solve_kronecker_direct
from matrixopt.problems import (
    CareProblem,
    LyapunovProblem,
    SylvesterProblem,
    gen_tridiagonal,
)


def scalar_care(a=-2.0, n=25.0, k=1.0):
    problem = CareProblem(a=[[a]], n_mat=[[n]], k_mat=[[k]])
    stabilizing_root = (a + np.sqrt(a * a + n * k)) / n
    return problem, stabilizing_root


class TestConjugateGradient:
    def test_one_dimensional(self):
        p = SylvesterProblem(a=[[5.0]], b=[[6.0]], c=[[1.0]])
        report = solve_cg(p)
        assert report.converged and report.iterations == 1
        assert report.solution[0, 0] == pytest.approx(1.0 / 11.0)

    def test_zero_rhs_needs_no_iteration(self):
        p = SylvesterProblem(a=np.eye(3), b=np.eye(3), c=np.zeros((3, 3)))
        report = solve_cg(p)
        assert report.converged and report.iterations == 0

    def test_t6_family(self):
        p = SylvesterProblem(
            a=gen_tridiagonal(128, 5, -1, -1),
            b=gen_tridiagonal(128, 6, 2, 2),
            c=np.eye(128),
        )
        report = solve_cg(p, BaselineConfig(tol=1e-12))
        assert report.converged and report.iterations <= 30
        assert report.final_residual <= 1e-12

    def test_rejects_nonsymmetric(self, rng):
        p = random_sylvester(rng, 3, 3)  # not symmetric
        with pytest.raises(PreconditionError):
            solve_cg(p)

    def test_matches_oracle(self, rng):
        p = random_sylvester(rng, 4, 4, spd=True)
        report = solve_cg(p, BaselineConfig(tol=1e-12))
        x_star = solve_kronecker_direct(p)
        assert frobenius_norm(report.solution - x_star) <= 1e-6 * (
            1.0 + frobenius_norm(x_star)
        )

    def test_directions_pairwise_conjugate(self, rng):
        p = random_sylvester(rng, 5, 5, spd=True)
        report = solve_cg(p, BaselineConfig(tol=1e-12))
        dirs = report.detail["directions"]
        assert len(dirs) >= 2
        for i in range(len(dirs)):
            for j in range(i + 1, len(dirs)):
                li = p.a @ dirs[i] + dirs[i] @ p.b
                bound = 1e-8 * frobenius_norm(dirs[i]) * frobenius_norm(dirs[j])
                assert abs(trace_inner(li, dirs[j])) <= bound


class TestAndersonRichardson:
    def test_scalar_contraction(self):
        p = SylvesterProblem(a=[[1.0]], b=[[1.0]], c=[[2.0]])
        report = solve_anderson_richardson(
            p, BaselineConfig(tol=1e-12, richardson_omega=0.25)
        )
        assert report.converged
        assert report.solution[0, 0] == pytest.approx(1.0)

    def test_fixed_point_input(self):
        p = SylvesterProblem(a=np.eye(2), b=np.eye(2), c=np.zeros((2, 2)))
        report = solve_anderson_richardson(p)
        assert report.converged and report.iterations == 0

    def test_t6_family_converges(self):
        p = SylvesterProblem(
            a=gen_tridiagonal(128, 5, -1, -1),
            b=gen_tridiagonal(128, 6, 2, 2),
            c=np.eye(128),
        )
        report = solve_anderson_richardson(p, BaselineConfig(tol=1e-8))
        assert report.converged and report.final_residual <= 1e-8

    def test_divergence_detected(self):
        p = SylvesterProblem(a=[[0.0, -5.0], [5.0, 0.0]], b=[[0.1]], c=[[1.0], [1.0]])
        report = solve_anderson_richardson(p, BaselineConfig(max_iterations=500))
        assert report.termination == "diverged"


class TestCareResidual:
    def test_scalar_stabilizing_root(self):
        p, root = scalar_care()
        assert root == pytest.approx(0.1354066, abs=1e-7)
        assert care_residual(p, np.array([[root]])) <= 1e-6

    def test_zero_iterate(self):
        p, _ = scalar_care()
        assert care_residual(p, np.zeros((1, 1))) == pytest.approx(1.0)

    def test_linear_case_matches_lyapunov(self, rng):
        a = rng.standard_normal((3, 3)) - 4 * np.eye(3)
        q = np.eye(3)
        x = solve_lyapunov_direct(LyapunovProblem(a=a, q=q))
        p = CareProblem(a=a, n_mat=np.zeros((3, 3)), k_mat=q)
        assert care_residual(p, x) <= 1e-10


class TestLyapunovDirect:
    def test_scalar(self):
        x = solve_lyapunov_direct(LyapunovProblem(a=[[-2.0]], q=[[3.0]]))
        assert x[0, 0] == pytest.approx(0.75)

    def test_decoupled_diagonal(self):
        x = solve_lyapunov_direct(LyapunovProblem(a=np.diag([-1.0, -2.0]), q=np.eye(2)))
        np.testing.assert_allclose(x, np.diag([0.5, 0.25]), atol=1e-12)

    def test_zero_rhs(self):
        x = solve_lyapunov_direct(LyapunovProblem(a=np.diag([-1.0, -2.0]), q=np.zeros((2, 2))))
        np.testing.assert_allclose(x, np.zeros((2, 2)), atol=1e-14)

    def test_eigenvalue_sum_zero_is_singular(self):
        with pytest.raises(SingularMatrixError):
            solve_lyapunov_direct(LyapunovProblem(a=np.diag([1.0, -1.0]), q=np.eye(2)))

    def test_result_exactly_symmetric(self, rng):
        a = rng.standard_normal((4, 4)) - 5 * np.eye(4)
        q = rng.standard_normal((4, 4))
        q = q @ q.T
        x = solve_lyapunov_direct(LyapunovProblem(a=a, q=q))
        np.testing.assert_array_equal(x, x.T)

    def test_residual_bound(self, rng):
        a = rng.standard_normal((5, 5)) - 6 * np.eye(5)
        q = rng.standard_normal((5, 5))
        q = q @ q.T + np.eye(5)
        p = LyapunovProblem(a=a, q=q)
        x = solve_lyapunov_direct(p)
        res = frobenius_norm(a.T @ x + x @ a + q)
        assert res <= 1e-10 * (1.0 + frobenius_norm(q))


class TestNewtonCare:
    def test_scalar_converges_to_stabilizing_root(self):
        p, root = scalar_care()
        report = solve_newton_care(p, cfg=BaselineConfig(tol=1e-8, max_iterations=20))
        assert report.converged and report.iterations <= 8
        assert report.solution[0, 0] == pytest.approx(root, abs=1e-8)

    def test_scalar_quadratic_convergence(self):
        p, _ = scalar_care()
        report = solve_newton_care(p, cfg=BaselineConfig(tol=1e-8, max_iterations=20))
        r = report.residual_history
        assert len(r) >= 4
        for prev, cur in zip(r[-3:-1], r[-2:]):
            assert cur <= 1e4 * prev * prev

    def test_linear_case_single_step(self, rng):
        a = rng.standard_normal((3, 3)) - 4 * np.eye(3)
        q = rng.standard_normal((3, 3))
        q = q @ q.T + np.eye(3)
        p = CareProblem(a=a, n_mat=np.zeros((3, 3)), k_mat=q)
        report = solve_newton_care(p, cfg=BaselineConfig(tol=1e-10))
        assert report.converged and report.iterations == 1

    def test_iterates_symmetric(self, rng):
        b = rng.standard_normal((4, 2))
        p = CareProblem(
            a=rng.standard_normal((4, 4)) - 5 * np.eye(4),
            n_mat=b @ b.T,
            k_mat=np.eye(4),
        )
        report = solve_newton_care(p, cfg=BaselineConfig(tol=1e-10, max_iterations=30))
        assert report.converged
        assert report.detail["symmetry_gap"] <= 1e-10

    def test_breakdown_carries_partial_report(self):
        p = CareProblem(a=[[0.0]], n_mat=[[0.0]], k_mat=[[1.0]])
        with pytest.raises(NewtonBreakdownError) as err:
            solve_newton_care(p)
        assert err.value.report is not None
        assert err.value.report.termination == "error"

    def test_nonsymmetric_x0_rejected(self, rng):
        p, _ = scalar_care()
        big = CareProblem(a=np.eye(2), n_mat=np.eye(2), k_mat=np.eye(2))
        with pytest.raises(PreconditionError):
            solve_newton_care(big, x0=np.array([[0.0, 1.0], [0.0, 0.0]]))

    def test_t8_family(self):
        bt = gen_tridiagonal(16, 5, 2, 1)
        p = CareProblem(
            a=gen_tridiagonal(16, 6, 2, 1),
            n_mat=bt.T @ bt,
            k_mat=np.eye(16),
        )
        report = solve_newton_care(p, cfg=BaselineConfig(tol=1e-8, max_iterations=50))
        assert report.converged
        assert report.final_residual <= 1e-7
