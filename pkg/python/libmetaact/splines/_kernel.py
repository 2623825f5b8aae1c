"""Vectorized evaluation of interpolants on a regular control-point grid

A spline with control values ``psi`` on the grid ``a + i * h``,
``h = (b - a) / (n_c - 1)``, is evaluated cell by cell. For a sample ``x`` in cell
``k`` (between grid points ``k`` and ``k + 1``) at local coordinate ``t`` in [0, 1],
every mode is a linear combination

    cy0 * psi[k] + cy1 * psi[k + 1] + cm0 * m[k] + cm1 * m[k + 1]

where ``m = Q @ psi`` are the second derivatives at the grid points ("moments") of
the natural cubic spline. Only the cubic mode uses moments. The same coefficients
give the derivative of the value with respect to ``psi``, so evaluation and its
adjoint (:func:`spline_scatter`) share one implementation.
"""
import functools

import numpy as np
import scipy.linalg

MODES = ("nearest", "linear", "cubic")

# samples closer than this to a grid point, in units of cells, are snapped onto it
_SNAP_TOL = 1e-10


@functools.lru_cache(maxsize=64)
def moment_matrix(n_c: int, a: float, b: float) -> np.ndarray:
    """Matrix ``Q`` mapping control values to natural cubic spline moments

    Solves ``m[i-1] + 4 m[i] + m[i+1] = 6 / h**2 * (psi[i-1] - 2 psi[i] + psi[i+1])``
    for the interior grid points, with ``m[0] = m[n_c - 1] = 0``.

    Returns
    -------
    Q: np.ndarray[np.float64[n_c, n_c]]
        Read-only; ``m = Q @ psi``.
    """
    h = (b - a) / (n_c - 1)
    Q = np.zeros((n_c, n_c))
    n_int = n_c - 2
    if n_int > 0:
        ab = np.zeros((3, n_int))
        ab[0, 1:] = 1.0
        ab[1, :] = 4.0
        ab[2, :-1] = 1.0
        D = np.zeros((n_int, n_c))
        for i in range(n_int):
            D[i, i : i + 3] = [1.0, -2.0, 1.0]
        D *= 6.0 / (h * h)
        Q[1:-1, :] = scipy.linalg.solve_banded((1, 1), ab, D)
    Q.setflags(write=False)
    return Q


def cell_coefficients(
    x: np.ndarray,
    n_c: int,
    a: float,
    b: float,
    mode: str,
    order: int = 0,
) -> tuple[np.ndarray, np.ndarray, np.ndarray, np.ndarray, np.ndarray]:
    """Cell index and interpolation coefficients for each sample

    Parameters
    ----------
    x: np.ndarray
        Samples, any shape.
    n_c: int
        Number of control points.
    a, b: float
        Interval endpoints.
    mode: str
        One of "nearest", "linear", "cubic".
    order: int = 0
        Derivative order with respect to `x`. Derivatives are zero outside
        [a, b] (constant extrapolation).

    Returns
    -------
    (k, cy0, cy1, cm0, cm1): tuple[np.ndarray, ...]
        Arrays with the shape of `x`. ``k`` is the left grid index of the cell,
        in ``[0, n_c - 2]``. NaN samples are placed in cell 0 with NaN
        coefficients; infinite samples extrapolate like any sample outside
        [a, b].
    """
    if mode not in MODES:
        raise ValueError(f"Error in cell_coefficients: unknown mode '{mode}'")
    x = np.asarray(x, dtype=np.float64)
    missing = np.isnan(x)
    h = (b - a) / (n_c - 1)
    u = np.clip((np.where(missing, a, x) - a) / h, 0.0, float(n_c - 1))
    k = np.floor(u)
    r = np.rint(u)
    snapped = np.abs(u - r) <= _SNAP_TOL
    k = np.where(snapped, r, k)
    t = np.where(snapped, 0.0, u - k)
    at_end = k > n_c - 2
    k = np.where(at_end, n_c - 2, k).astype(np.int64)
    t = np.where(at_end, 1.0, t)
    s = 1.0 - t

    zeros = np.zeros_like(t)
    cm0 = zeros
    cm1 = zeros
    if mode == "nearest":
        if order == 0:
            upper = (t > 0.5).astype(np.float64)
            cy0, cy1 = 1.0 - upper, upper
        else:
            cy0, cy1 = zeros, zeros
    elif mode == "linear":
        if order == 0:
            cy0, cy1 = s, t
        elif order == 1:
            cy0 = np.full_like(t, -1.0 / h)
            cy1 = np.full_like(t, 1.0 / h)
        else:
            cy0, cy1 = zeros, zeros
    else:
        if order == 0:
            cy0, cy1 = s, t
            cm0 = h * h / 6.0 * (s**3 - s)
            cm1 = h * h / 6.0 * (t**3 - t)
        elif order == 1:
            cy0 = np.full_like(t, -1.0 / h)
            cy1 = np.full_like(t, 1.0 / h)
            cm0 = -h / 6.0 * (3.0 * s * s - 1.0)
            cm1 = h / 6.0 * (3.0 * t * t - 1.0)
        elif order == 2:
            cy0, cy1 = zeros, zeros
            cm0, cm1 = s, t
        elif order == 3:
            cy0, cy1 = zeros, zeros
            cm0 = np.full_like(t, -1.0 / h)
            cm1 = np.full_like(t, 1.0 / h)
        else:
            cy0, cy1 = zeros, zeros

    if order > 0:
        inside = ((x >= a) & (x <= b)).astype(np.float64)
        cy0, cy1, cm0, cm1 = cy0 * inside, cy1 * inside, cm0 * inside, cm1 * inside
    if np.any(missing):
        cy0, cy1, cm0, cm1 = (
            np.where(missing, np.nan, c) for c in (cy0, cy1, cm0, cm1)
        )
    return (k, cy0, cy1, cm0, cm1)


def _row_index(x_shape: tuple, psi: np.ndarray, op: str) -> np.ndarray:
    """Row of ``psi`` (as a 2d array) used for each sample"""
    if psi.ndim == 1:
        return np.zeros(x_shape, dtype=np.int64)
    if psi.ndim == 2:
        if len(x_shape) == 0 or x_shape[-1] != psi.shape[0]:
            raise ValueError(
                f"Error in {op}: per-column control values of shape {psi.shape} "
                f"require samples with last dimension {psi.shape[0]}, got {x_shape}"
            )
        return np.broadcast_to(np.arange(psi.shape[0], dtype=np.int64), x_shape)
    raise ValueError(f"Error in {op}: control values must be 1d or 2d")


def spline_values(
    x: np.ndarray,
    psi: np.ndarray,
    a: float,
    b: float,
    mode: str,
    order: int = 0,
) -> np.ndarray:
    """Evaluate a spline (or its derivative of given order) at samples

    Parameters
    ----------
    x: np.ndarray
        Samples, any shape.
    psi: np.ndarray
        Control values. Shape ``(n_c,)`` to apply one spline to every sample, or
        ``(d, n_c)`` to apply row ``j`` to the samples ``x[..., j]``.
    a, b: float
        Interval endpoints.
    mode: str
        One of "nearest", "linear", "cubic".
    order: int = 0
        Derivative order with respect to `x`.

    Returns
    -------
    values: np.ndarray
        Same shape as `x`.
    """
    x = np.asarray(x, dtype=np.float64)
    psi = np.asarray(psi, dtype=np.float64)
    n_c = psi.shape[-1]
    P = psi.reshape(-1, n_c)
    rows = _row_index(x.shape, psi, "spline_values")
    k, cy0, cy1, cm0, cm1 = cell_coefficients(x, n_c, a, b, mode, order)
    out = cy0 * P[rows, k] + cy1 * P[rows, k + 1]
    if mode == "cubic":
        M = P @ moment_matrix(n_c, float(a), float(b)).T
        out = out + cm0 * M[rows, k] + cm1 * M[rows, k + 1]
    return out


def spline_scatter(
    x: np.ndarray,
    g: np.ndarray,
    psi_shape: tuple,
    a: float,
    b: float,
    mode: str,
    order: int = 0,
) -> np.ndarray:
    """Adjoint of :func:`spline_values` with respect to the control values

    Returns ``sum_e g[e] * d spline_values(x, psi, order)[e] / d psi``, which does
    not depend on ``psi``.

    Parameters
    ----------
    x: np.ndarray
        Samples, any shape.
    g: np.ndarray
        Weights, same shape as `x`.
    psi_shape: tuple
        Shape of the control values, ``(n_c,)`` or ``(d, n_c)``.
    a, b: float
        Interval endpoints.
    mode: str
        One of "nearest", "linear", "cubic".
    order: int = 0
        Derivative order with respect to `x`.

    Returns
    -------
    grad: np.ndarray
        Array of shape `psi_shape`.
    """
    x = np.asarray(x, dtype=np.float64)
    g = np.asarray(g, dtype=np.float64)
    psi_shape = tuple(psi_shape)
    n_c = psi_shape[-1]
    n_rows = 1 if len(psi_shape) == 1 else psi_shape[0]
    rows = _row_index(x.shape, np.empty(psi_shape), "spline_scatter")
    k, cy0, cy1, cm0, cm1 = cell_coefficients(x, n_c, a, b, mode, order)
    flat = (rows * n_c + k).ravel()
    size = n_rows * n_c
    gv = g.ravel()
    out = np.bincount(flat, weights=(cy0.ravel() * gv), minlength=size)
    out += np.bincount(flat + 1, weights=(cy1.ravel() * gv), minlength=size)
    out = out.reshape(n_rows, n_c)
    if mode == "cubic":
        gm = np.bincount(flat, weights=(cm0.ravel() * gv), minlength=size)
        gm += np.bincount(flat + 1, weights=(cm1.ravel() * gv), minlength=size)
        out = out + gm.reshape(n_rows, n_c) @ moment_matrix(n_c, float(a), float(b))
    return out.reshape(psi_shape)
