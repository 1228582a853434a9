"""Curve interpolation and constrained least-squares approximation.

Interpolation sets up the collocation system c(u_i) = sum_j p_j N_j(u_i)
and solves it with one LU factorization shared across coordinates. Closed
point sets get a periodic curve; singular even-degree periodic systems are
avoided by shifting the knots half a parameter interval.
"""

from __future__ import annotations

import numpy as np
from scipy.linalg import lu_factor, lu_solve

from . import basis as _basis
from ._validation import as_param_list, as_point_array, collapse_duplicate_points
from .curve import BSplineCurve
from .errors import NumericError
from .knots import KnotVector, averaged

# Relative pivot threshold below which a factorization is called singular.
SINGULAR_TOL = 1e-13


def chord_length_params(points, exponent: float = 1.0) -> np.ndarray:
    """Parameters in [0, 1] proportional to cumulative chord length.

    `exponent` 1.0 gives chord-length, 0.5 centripetal parametrization.
    """
    pts = as_point_array(points)
    if pts.shape[0] < 2:
        raise ValueError("need at least two points")
    seg = np.linalg.norm(np.diff(pts, axis=0), axis=1) ** exponent
    total = seg.sum()
    if total <= 0.0:
        raise ValueError("total chord length is zero")
    params = np.concatenate([[0.0], np.cumsum(seg) / total])
    params[-1] = 1.0
    if np.any(np.diff(params) <= 0.0):
        raise ValueError("coincident consecutive points; collapse duplicates first")
    return params


def _factorize(matrix: np.ndarray):
    """LU-factorize, raising NumericError with the pivot index if singular."""
    A = np.asarray(matrix, dtype=float)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise ValueError(f"matrix must be square, got shape {A.shape}")
    scale = max(float(np.max(np.abs(A))), np.finfo(float).tiny)
    lu, piv = lu_factor(A, check_finite=False)
    diag = np.abs(np.diag(lu))
    bad = np.nonzero(diag <= SINGULAR_TOL * scale)[0]
    if bad.size:
        raise NumericError(
            f"matrix numerically singular: pivot {diag[bad[0]]:.3e} at index {int(bad[0])}"
        )
    return lu, piv


def solve_linear(matrix, rhs) -> np.ndarray:
    """Solve a dense square system by LU with partial pivoting.

    `rhs` may carry multiple right-hand sides as columns. A pivot below
    1e-13 relative to the matrix scale raises NumericError naming its index.
    """
    lu, piv = _factorize(matrix)
    b = np.asarray(rhs, dtype=float)
    return lu_solve((lu, piv), b, check_finite=False)


def interpolate_points(
    points,
    params=None,
    degree: int = 3,
    periodic: bool = False,
    end_tangents: tuple | None = None,
) -> BSplineCurve:
    """B-spline curve through `points` at `params`.

    Parameters default to chord length. For `periodic` the first and last
    point must coincide; the result closes with C^(degree-1) continuity at
    the seam. `end_tangents` is an optional (start, end) pair of derivative
    vectors (either entry may be None) for clamped curves.
    """
    pts = as_point_array(points)
    if params is None:
        reduced = collapse_duplicate_points(pts)
        if reduced.shape[0] < 2:
            raise ValueError("fewer than 2 distinct points")
        pts = reduced
        params = chord_length_params(pts)
    else:
        params = as_param_list(params, "params")
        if params.size != pts.shape[0]:
            raise ValueError(
                f"{params.size} parameters for {pts.shape[0]} points"
            )
    if pts.shape[0] < 2:
        raise ValueError("need at least two points")

    if periodic:
        if end_tangents is not None:
            raise ValueError("end tangents are not supported for periodic curves")
        return _interpolate_periodic(pts, params, degree)

    degree = min(degree, pts.shape[0] - 1) if end_tangents is None else degree
    t0 = t1 = None
    if end_tangents is not None:
        t0, t1 = end_tangents
        if degree < 2 and (t0 is not None or t1 is not None):
            raise ValueError("tangent constraints need degree >= 2")

    aug = list(params)
    if t0 is not None:
        aug.insert(1, params[0])
    if t1 is not None:
        aug.insert(len(aug) - 1, params[-1])
    aug = np.asarray(aug)
    kv = averaged(aug, degree)

    rows = [(params[0], 0)]
    if t0 is not None:
        rows.append((params[0], 1))
    rows += [(u, 0) for u in params[1:-1]]
    if t1 is not None:
        rows.append((params[-1], 1))
    rows.append((params[-1], 0))

    n = kv.ctrl_count(degree)
    A = np.zeros((n, n))
    rhs = np.zeros((n, pts.shape[1]))
    i_pt = 0
    for i, (u, der) in enumerate(rows):
        A[i] = _basis.collocation_matrix(np.array([u]), degree, kv.values, deriv=der)[0]
        if der == 0:
            rhs[i] = pts[i_pt]
            i_pt += 1
        elif u == params[0]:
            rhs[i] = np.asarray(t0, dtype=float)
        else:
            rhs[i] = np.asarray(t1, dtype=float)
    try:
        ctrl = solve_linear(A, rhs)
    except NumericError as exc:
        raise NumericError(f"interpolation system singular: {exc}") from exc
    return BSplineCurve(degree, kv, ctrl)


def _interpolate_periodic(pts: np.ndarray, params: np.ndarray, degree: int) -> BSplineCurve:
    scale = max(1.0, float(np.max(np.abs(pts))))
    if np.linalg.norm(pts[0] - pts[-1]) > 1e-12 * scale:
        raise ValueError("periodic interpolation requires first point == last point")
    K = pts.shape[0] - 1  # distinct points
    if K < degree:
        raise ValueError(
            f"periodic degree {degree} needs at least {degree + 1} points (closing point included)"
        )
    u = (params - params[0]) / (params[-1] - params[0])  # normalized, u[0]=0, u[-1]=1

    # periodic parameter extension with period 1
    def u_ext(j: int) -> float:
        q, r = divmod(j, K)
        return u[r] + q

    d = degree
    n_knots = K + 2 * d + 1
    if d % 2 == 1:
        kv = np.array([u_ext(i - d) for i in range(n_knots)])
    else:
        # shifting method: knots at parameter midpoints, domain moves to [s, 1+s]
        kv = np.array([0.5 * (u_ext(i - d) + u_ext(i - d + 1)) for i in range(n_knots)])
    lo, hi = kv[d], kv[K + d]

    # collocation at the K distinct parameters, wrapped into the knot domain
    uu = u[:K].copy()
    uu = np.where(uu < lo, uu + 1.0, uu)
    A_full = _basis.collocation_matrix(uu, d, kv)
    A = np.zeros((K, K))
    for col in range(A_full.shape[1]):
        A[:, col % K] += A_full[:, col]
    try:
        ctrl_free = solve_linear(A, pts[:K])
    except NumericError as exc:
        raise NumericError(f"periodic interpolation system singular: {exc}") from exc
    ctrl = np.vstack([ctrl_free, ctrl_free[:d]])
    return BSplineCurve(d, KnotVector(kv), ctrl, periodic=True)


def approximate_constrained(
    samples,
    sample_params,
    constraints,
    degree: int,
    knots: KnotVector,
) -> BSplineCurve:
    """Least-squares B-spline fit that passes exactly through constraints.

    Minimizes the squared residual over samples subject to interpolation
    constraints, via the Lagrange-multiplier block system

        [A^T A  C^T] [p]   [A^T b]
        [C      0  ] [l] = [c]

    where A and C are basis collocation matrices at sample and constraint
    parameters.
    """
    pts = as_point_array(samples)
    sample_params = as_param_list(sample_params, "sample_params")
    if sample_params.size != pts.shape[0]:
        raise ValueError("one parameter per sample required")
    n = knots.ctrl_count(degree)
    if pts.shape[0] <= n:
        raise ValueError(
            f"need more samples ({pts.shape[0]}) than control points ({n})"
        )
    cons = list(constraints) if constraints is not None else []
    if cons:
        c_params = np.array([float(c[0]) for c in cons])
        if np.unique(c_params).size != c_params.size:
            raise ValueError("constraint parameters must be distinct")
        c_vals = np.vstack([np.asarray(c[1], dtype=float) for c in cons])

    A = _basis.collocation_matrix(sample_params, degree, knots.values)
    AtA = A.T @ A
    Atb = A.T @ pts

    if not cons:
        try:
            ctrl = solve_linear(AtA, Atb)
        except NumericError as exc:
            raise NumericError(f"approximation normal equations singular: {exc}") from exc
        return BSplineCurve(degree, knots, ctrl)

    C = _basis.collocation_matrix(c_params, degree, knots.values)
    k = C.shape[0]
    block = np.zeros((n + k, n + k))
    block[:n, :n] = AtA
    block[:n, n:] = C.T
    block[n:, :n] = C
    rhs = np.vstack([Atb, c_vals])
    try:
        sol = solve_linear(block, rhs)
    except NumericError as exc:
        raise NumericError(
            f"constrained approximation system singular (rank-deficient constraints?): {exc}"
        ) from exc
    return BSplineCurve(degree, knots, sol[:n])
