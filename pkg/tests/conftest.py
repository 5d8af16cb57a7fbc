import numpy as np
import pytest

from matrixopt.problems import SylvesterProblem


def random_sylvester(rng, m, n, spd=False):
    """Well-conditioned random problem: diagonally dominant shifted A, B
    keep every operator eigenvalue-sum away from zero."""
    a = rng.standard_normal((m, m)) / max(m, 1)
    b = rng.standard_normal((n, n)) / max(n, 1)
    if spd:
        a = 0.5 * (a + a.T)
        b = 0.5 * (b + b.T)
    a += 2.0 * np.eye(m)
    b += 2.0 * np.eye(n)
    c = rng.standard_normal((m, n))
    return SylvesterProblem(a=a, b=b, c=c)


def central_difference_gradient(f, x, h=1e-6):
    """Componentwise central finite differences of a scalar field on matrices."""
    g = np.zeros_like(x)
    for idx in np.ndindex(*x.shape):
        e = np.zeros_like(x)
        e[idx] = h
        g[idx] = (f(x + e) - f(x - e)) / (2.0 * h)
    return g


@pytest.fixture
def rng():
    return np.random.default_rng(1234)
