"""B-spline basis evaluation (Cox-de Boor recursion) and derivatives.

All routines are vectorized over evaluation points: parameters come in as
1-D arrays and loops run only over the polynomial degree. Algorithms follow
the standard normalized-basis formulation; see Piegl & Tiller for the
scalar versions.
"""

from __future__ import annotations

import numpy as np

from .errors import DomainError
from .knots import KnotVector

# Slack applied to domain checks, scaled by the domain length. Absorbs
# roundoff from parameter arithmetic without admitting real out-of-domain
# queries.
DOMAIN_REL_TOL = 1e-12


def check_domain(u: np.ndarray, degree: int, knots: np.ndarray) -> np.ndarray:
    """Clip parameters into the knot domain; raise DomainError if truly outside."""
    n = knots.size - degree - 1
    lo, hi = knots[degree], knots[n]
    tol = DOMAIN_REL_TOL * max(abs(lo), abs(hi), hi - lo)
    u = np.asarray(u, dtype=float)
    if np.any(u < lo - tol) or np.any(u > hi + tol):
        bad = u[(u < lo - tol) | (u > hi + tol)].flat[0]
        raise DomainError(f"parameter {bad} outside domain [{lo}, {hi}]")
    return np.clip(u, lo, hi)


def find_spans(u: np.ndarray, degree: int, knots: np.ndarray) -> np.ndarray:
    """Knot span indices i with knots[i] <= u < knots[i+1], clamped to valid range."""
    n = knots.size - degree - 1
    spans = np.searchsorted(knots, u, side="right") - 1
    return np.clip(spans, degree, n - 1)


def basis_funs(spans: np.ndarray, u: np.ndarray, degree: int, knots: np.ndarray) -> np.ndarray:
    """Nonzero basis values.

    Returns an (m, degree+1) array whose row r holds
    N_{spans[r]-degree}, ..., N_{spans[r]} evaluated at u[r].
    """
    m = u.size
    N = np.zeros((m, degree + 1))
    N[:, 0] = 1.0
    left = np.zeros((m, degree + 1))
    right = np.zeros((m, degree + 1))
    for j in range(1, degree + 1):
        left[:, j] = u - knots[spans + 1 - j]
        right[:, j] = knots[spans + j] - u
        saved = np.zeros(m)
        for r in range(j):
            denom = right[:, r + 1] + left[:, j - r]
            temp = np.where(denom != 0.0, N[:, r] / np.where(denom == 0.0, 1.0, denom), 0.0)
            N[:, r] = saved + right[:, r + 1] * temp
            saved = left[:, j - r] * temp
        N[:, j] = saved
    return N


def ders_basis_funs(
    spans: np.ndarray, u: np.ndarray, degree: int, knots: np.ndarray, order: int
) -> np.ndarray:
    """Nonzero basis values and derivatives up to `order`.

    Returns (m, order+1, degree+1); entry [r, k, j] is the k-th derivative
    of N_{spans[r]-degree+j} at u[r].
    """
    p = degree
    m = u.size
    n_der = order
    ndu = np.zeros((m, p + 1, p + 1))
    ndu[:, 0, 0] = 1.0
    left = np.zeros((m, p + 1))
    right = np.zeros((m, p + 1))
    for j in range(1, p + 1):
        left[:, j] = u - knots[spans + 1 - j]
        right[:, j] = knots[spans + j] - u
        saved = np.zeros(m)
        for r in range(j):
            ndu[:, j, r] = right[:, r + 1] + left[:, j - r]
            denom = ndu[:, j, r]
            temp = np.where(denom != 0.0, ndu[:, r, j - 1] / np.where(denom == 0.0, 1.0, denom), 0.0)
            ndu[:, r, j] = saved + right[:, r + 1] * temp
            saved = left[:, j - r] * temp
        ndu[:, j, j] = saved

    ders = np.zeros((m, n_der + 1, p + 1))
    ders[:, 0, :] = ndu[:, :, p]
    a = np.zeros((m, 2, p + 1))
    for r in range(p + 1):
        s1, s2 = 0, 1
        a[:, 0, :] = 0.0
        a[:, 0, 0] = 1.0
        for k in range(1, min(n_der, p) + 1):
            d = np.zeros(m)
            rk = r - k
            pk = p - k
            if r >= k:
                a[:, s2, 0] = a[:, s1, 0] / ndu[:, pk + 1, rk]
                d = a[:, s2, 0] * ndu[:, rk, pk]
            j1 = 1 if rk >= -1 else -rk
            j2 = k - 1 if r - 1 <= pk else p - r
            for j in range(j1, j2 + 1):
                a[:, s2, j] = (a[:, s1, j] - a[:, s1, j - 1]) / ndu[:, pk + 1, rk + j]
                d = d + a[:, s2, j] * ndu[:, rk + j, pk]
            if r <= pk:
                a[:, s2, k] = -a[:, s1, k - 1] / ndu[:, pk + 1, r]
                d = d + a[:, s2, k] * ndu[:, r, pk]
            ders[:, k, r] = d
            s1, s2 = s2, s1

    fac = float(p)
    for k in range(1, min(n_der, p) + 1):
        ders[:, k, :] *= fac
        fac *= p - k
    # derivatives beyond the degree vanish identically; rows stay zero
    return ders


def collocation_matrix(u: np.ndarray, degree: int, knots: np.ndarray, deriv: int = 0) -> np.ndarray:
    """Dense (len(u), n_ctrl) matrix of basis values (or a derivative order)."""
    u = np.asarray(u, dtype=float)
    n = knots.size - degree - 1
    spans = find_spans(u, degree, knots)
    if deriv == 0:
        vals = basis_funs(spans, u, degree, knots)
    else:
        vals = ders_basis_funs(spans, u, degree, knots, deriv)[:, deriv, :]
    A = np.zeros((u.size, n))
    cols = spans[:, None] - degree + np.arange(degree + 1)[None, :]
    np.put_along_axis(A, cols, vals, axis=1)
    return A


def basis_functions(u: float, degree: int, knots: KnotVector) -> list[tuple[int, float]]:
    """Nonzero B-spline basis functions at `u` as (index, value) pairs.

    Values are nonnegative and sum to one; at most degree+1 entries.
    """
    kv = knots.values if isinstance(knots, KnotVector) else np.asarray(knots, dtype=float)
    uu = check_domain(np.array([u], dtype=float), degree, kv)
    span = int(find_spans(uu, degree, kv)[0])
    vals = basis_funs(np.array([span]), uu, degree, kv)[0]
    return [
        (span - degree + j, float(vals[j]))
        for j in range(degree + 1)
        if vals[j] != 0.0
    ]
