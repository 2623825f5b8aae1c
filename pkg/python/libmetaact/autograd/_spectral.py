import numpy as np

SPECTRAL_TOL = 1e-8
SPECTRAL_MAX_ITER = 1000


def power_iteration(
    W: np.ndarray,
    tol: float = SPECTRAL_TOL,
    max_iter: int = SPECTRAL_MAX_ITER,
) -> tuple[float, np.ndarray, np.ndarray]:
    """Largest singular value and singular vectors of a matrix

    Iterates ``v <- W.T @ W @ v / |W.T @ W @ v|`` from a fixed start vector until
    the unit vector ``v`` changes by no more than `tol` (which bounds the relative
    change of the singular value estimate by `tol`), or `max_iter` iterations.

    Parameters
    ----------
    W: np.ndarray[np.float64[m, n]]
        The matrix. Must not be zero.
    tol: float = 1e-8
        Relative convergence tolerance.
    max_iter: int = 1000
        Maximum number of iterations.

    Returns
    -------
    (sigma, u, v): tuple[float, np.ndarray, np.ndarray]
        The largest singular value and unit vectors with ``W @ v = sigma * u``.
    """
    W = np.asarray(W, dtype=np.float64)
    if W.ndim != 2:
        raise ValueError("Error in power_iteration: matrix must be 2d")
    if not np.any(W):
        raise ValueError("Error in power_iteration: zero matrix")
    v = np.random.default_rng(0).standard_normal(W.shape[1])
    v /= np.linalg.norm(v)
    for _ in range(max_iter):
        w = W.T @ (W @ v)
        norm = np.linalg.norm(w)
        if norm == 0.0:
            # start vector in the null space
            v = np.ones(W.shape[1]) / np.sqrt(W.shape[1])
            continue
        converged = np.linalg.norm(w / norm - v) <= tol
        v = w / norm
        if converged:
            break
    Wv = W @ v
    sigma = np.linalg.norm(Wv)
    u = Wv / sigma
    return (float(sigma), u, v)
