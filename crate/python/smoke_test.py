"""Smoke test for the Python extension. Build it first with
`maturin develop --release -m crates/python/Cargo.toml`, then run this file."""

import math

import pseudodet as pd


def close(x, y, tol=1e-10):
    assert abs(x - y) <= tol, (x, y)


def close_matrix(m, expected, tol=1e-10):
    for row, erow in zip(m, expected):
        for x, y in zip(row, erow):
            close(x, y, tol)


def main():
    ones = pd.HermitianMatrix.ones(2)
    close(pd.pdet(ones), 2.0)
    close(pd.pdet(ones, method="minor"), 2.0)
    close(pd.pdet(ones, method="limit"), 2.0, 1e-4)
    close_matrix(pd.pinv(ones).real, [[0.25, 0.25], [0.25, 0.25]])
    close_matrix(pd.pinv(ones, method="berg").real, [[0.25, 0.25], [0.25, 0.25]])

    grad = pd.canonical_gradient(ones)
    assert grad["rank"] == 1
    close_matrix(grad["can"].real, [[0.5, 0.5], [0.5, 0.5]])

    zero = pd.HermitianMatrix.zeros(3)
    assert pd.pdet(zero) == 1.0

    eye = pd.HermitianMatrix.identity(2)
    assert pd.check_class_equations(ones, eye)["passed"]
    assert not pd.verify_uniqueness(ones, eye)
    assert pd.verify_uniqueness(ones, grad["can"])

    close(pd.directional_derivative(ones, ones), 2.0)
    close(pd.fd_directional_derivative(ones, ones), 2.0, 1e-8)
    try:
        pd.directional_derivative(pd.HermitianMatrix.diag([1.0, 0.0]), pd.HermitianMatrix.diag([0.0, 1.0]))
    except pd.KernelMismatchError:
        pass
    else:
        raise AssertionError("expected KernelMismatchError")

    herm = pd.HermitianMatrix([[2.0, 0.0], [0.0, 2.0]], imag=[[0.0, 1.0], [-1.0, 0.0]])
    close(pd.pdet(herm), 3.0)
    assert max(pd.penrose_residuals(herm, pd.pinv(herm))) <= 1e-12
    try:
        pd.HermitianMatrix([[1.0, 2.0], [0.0, 1.0]])
    except pd.PseudodetError:
        pass
    else:
        raise AssertionError("expected PseudodetError")

    model = pd.GaussianModel([0.0, 0.0], ones)
    close(model.density([0.0, 0.0]), (4 * math.pi) ** -0.5)
    assert model.log_density([1.0, -1.0]) == -math.inf
    rows = model.sample(1000, seed=7)
    assert rows == model.sample(1000, seed=7)
    assert all(abs(x - y) <= 1e-9 for x, y in rows)
    sigma = pd.mle_covariance(rows)
    assert sigma.distance(ones) / ones.frobenius_norm() <= 0.15
    assert pd.projected_gradient_norm(sigma, rows) <= 1e-8 * len(rows)

    half = pd.HermitianMatrix([[0.5, 0.5], [0.5, 0.5]])
    close_matrix(pd.mle_covariance([[1.0, 0.0], [0.0, 1.0]], projector=half).real, [[0.25, 0.25], [0.25, 0.25]])

    print("python smoke test passed")


if __name__ == "__main__":
    main()
