"""B-spline curves: evaluation, derivatives, knot insertion, degree elevation.

Control points live in R^1 or R^3; the 1-D case carries reparametrization
functions. All operations return new curves, inputs are never mutated.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from math import comb

import numpy as np

from . import basis as _basis
from ._validation import as_point_array
from .errors import DomainError
from .knots import KnotVector, merged_values


@dataclass(frozen=True, eq=False)
class BSplineCurve:
    """Piecewise-polynomial curve defined by degree, knots and control points."""

    degree: int
    knots: KnotVector
    control_points: np.ndarray
    periodic: bool = False

    def __post_init__(self):
        pts = as_point_array(self.control_points, "control_points")
        object.__setattr__(self, "control_points", pts)
        n = pts.shape[0]
        if self.degree < 0:
            raise ValueError("degree must be nonnegative")
        if n < self.degree + 1:
            raise ValueError(
                f"curve of degree {self.degree} needs at least {self.degree + 1} control points, got {n}"
            )
        if len(self.knots) != n + self.degree + 1:
            raise ValueError(
                f"knot count {len(self.knots)} inconsistent with {n} control points of degree {self.degree}"
            )
        self.knots.domain(self.degree)  # raises if empty

    @property
    def n_ctrl(self) -> int:
        return self.control_points.shape[0]

    @property
    def dim(self) -> int:
        return self.control_points.shape[1]

    @property
    def domain(self) -> tuple[float, float]:
        return self.knots.domain(self.degree)

    def evaluate(self, u) -> np.ndarray:
        return evaluate_curve(self, u)

    def derivative(self, u, order: int = 1) -> np.ndarray:
        return curve_derivative(self, u, order)

    def start_point(self) -> np.ndarray:
        return self.evaluate(self.domain[0])

    def end_point(self) -> np.ndarray:
        return self.evaluate(self.domain[1])

    def is_closed(self, tol: float = 1e-9) -> bool:
        return bool(np.linalg.norm(self.start_point() - self.end_point()) <= tol)

    def kink_parameters(self) -> list[float]:
        """Interior knots with multiplicity >= degree (tangent discontinuities)."""
        return [
            u
            for u, mult in self.knots.interior_with_multiplicity(self.degree)
            if mult >= self.degree
        ]


def _wrap_params(curve: BSplineCurve, u: np.ndarray) -> np.ndarray:
    lo, hi = curve.domain
    if curve.periodic:
        period = hi - lo
        u = lo + np.mod(np.asarray(u, dtype=float) - lo, period)
    return _basis.check_domain(u, curve.degree, curve.knots.values)


def evaluate_curve(curve: BSplineCurve, u) -> np.ndarray:
    """Point(s) on the curve; scalar u gives shape (dim,), arrays (m, dim)."""
    scalar = np.isscalar(u) or np.ndim(u) == 0
    uu = np.atleast_1d(np.asarray(u, dtype=float))
    uu = _wrap_params(curve, uu)
    kv = curve.knots.values
    spans = _basis.find_spans(uu, curve.degree, kv)
    vals = _basis.basis_funs(spans, uu, curve.degree, kv)
    cols = spans[:, None] - curve.degree + np.arange(curve.degree + 1)[None, :]
    pts = np.einsum("mj,mjd->md", vals, curve.control_points[cols])
    return pts[0] if scalar else pts


def curve_derivative(curve: BSplineCurve, u, order: int = 1) -> np.ndarray:
    """Analytic derivative of the given order (order >= 1)."""
    if order < 1:
        raise ValueError("derivative order must be >= 1")
    scalar = np.isscalar(u) or np.ndim(u) == 0
    uu = np.atleast_1d(np.asarray(u, dtype=float))
    uu = _wrap_params(curve, uu)
    kv = curve.knots.values
    spans = _basis.find_spans(uu, curve.degree, kv)
    ders = _basis.ders_basis_funs(spans, uu, curve.degree, kv, order)[:, order, :]
    cols = spans[:, None] - curve.degree + np.arange(curve.degree + 1)[None, :]
    pts = np.einsum("mj,mjd->md", ders, curve.control_points[cols])
    return pts[0] if scalar else pts


def normalized_domain(curve: BSplineCurve) -> BSplineCurve:
    """Affinely map the knot vector so the domain becomes [0, 1]."""
    lo, hi = curve.domain
    if lo == 0.0 and hi == 1.0:
        return curve
    kv = (curve.knots.values - lo) / (hi - lo)
    return replace(curve, knots=KnotVector(kv))


def insert_knot(curve: BSplineCurve, u: float, multiplicity: int = 1) -> BSplineCurve:
    """Insert `u` `multiplicity` times (Boehm); geometry is unchanged."""
    lo, hi = curve.domain
    if not lo < u < hi:
        raise DomainError(f"knot {u} not strictly inside domain [{lo}, {hi}]")
    if multiplicity < 1:
        raise ValueError("multiplicity must be >= 1")
    p = curve.degree
    kv = curve.knots.values
    s = curve.knots.multiplicity(u)
    if s + multiplicity > p:
        raise ValueError(
            f"inserting {u} x{multiplicity} would exceed multiplicity {p} (already {s})"
        )
    k = int(_basis.find_spans(np.array([u]), p, kv)[0])
    P = curve.control_points
    n = curve.n_ctrl
    r = multiplicity

    new_kv = np.insert(kv, k + 1, np.full(r, u))
    Q = np.zeros((n + r, curve.dim))
    Q[: k - p + 1] = P[: k - p + 1]
    Q[k - s + r:] = P[k - s:]
    R = P[k - p : k - s + 1].copy()
    for j in range(1, r + 1):
        L = k - p + j
        for i in range(p - j - s + 1):
            alpha = (u - kv[L + i]) / (kv[i + k + 1] - kv[L + i])
            R[i] = alpha * R[i + 1] + (1.0 - alpha) * R[i]
        Q[L] = R[0]
        Q[k + r - j - s] = R[p - j - s]
    for i in range(L + 1, k - s):
        Q[i] = R[i - L]
    return BSplineCurve(p, KnotVector(new_kv), Q, periodic=False)


def elevate_degree(curve: BSplineCurve, target_degree: int) -> BSplineCurve:
    """Raise the degree without changing the curve's geometry.

    Each distinct knot keeps its continuity: multiplicities grow by the
    degree increment. Bezier-segment elevation with exact junction removal.
    """
    t = target_degree - curve.degree
    if t < 0:
        raise ValueError(
            f"target degree {target_degree} below current degree {curve.degree}"
        )
    if t == 0:
        return curve
    p = curve.degree
    U = curve.knots.values
    Pw = curve.control_points
    n = curve.n_ctrl - 1
    m = n + p + 1
    ph = p + t
    ph2 = ph // 2
    dim = curve.dim

    # Bezier elevation coefficients
    bezalfs = np.zeros((ph + 1, p + 1))
    bezalfs[0, 0] = 1.0
    bezalfs[ph, p] = 1.0
    for i in range(1, ph2 + 1):
        inv = 1.0 / comb(ph, i)
        for j in range(max(0, i - t), min(p, i) + 1):
            bezalfs[i, j] = inv * comb(p, j) * comb(t, i - j)
    for i in range(ph2 + 1, ph):
        for j in range(max(0, i - t), min(p, i) + 1):
            bezalfs[i, j] = bezalfs[ph - i, p - j]

    n_new_max = curve.n_ctrl + curve.n_ctrl * t  # generous upper bound
    Qw = np.zeros((n_new_max + 1, dim))
    Uh = np.zeros(n_new_max + ph + 2)
    bpts = Pw[: p + 1].copy()
    ebpts = np.zeros((ph + 1, dim))
    Nextbpts = np.zeros((p + 1, dim))
    alfs = np.zeros(p)

    mh = ph
    kind = ph + 1
    r = -1
    a = p
    b = p + 1
    cind = 1
    ua = U[0]
    Qw[0] = Pw[0]
    Uh[: ph + 1] = ua

    while b < m:
        i = b
        while b < m and U[b] == U[b + 1]:
            b += 1
        mul = b - i + 1
        mh += mul + t
        ub = U[b]
        oldr = r
        r = p - mul
        lbz = (oldr + 2) // 2 if oldr > 0 else 1
        rbz = ph - (r + 1) // 2 if r > 0 else ph
        if r > 0:
            numer = ub - ua
            for k in range(p, mul, -1):
                alfs[k - mul - 1] = numer / (U[a + k] - ua)
            for j in range(1, r + 1):
                save = r - j
                s = mul + j
                for k in range(p, s - 1, -1):
                    bpts[k] = alfs[k - s] * bpts[k] + (1.0 - alfs[k - s]) * bpts[k - 1]
                Nextbpts[save] = bpts[p]
        for i2 in range(lbz, ph + 1):
            ebpts[i2] = 0.0
            for j in range(max(0, i2 - t), min(p, i2) + 1):
                ebpts[i2] += bezalfs[i2, j] * bpts[j]
        if oldr > 1:
            first = kind - 2
            last = kind
            den = ub - ua
            bet = (ub - Uh[kind - 1]) / den
            for tr in range(1, oldr):
                i3 = first
                j3 = last
                kj = j3 - kind + 1
                while j3 - i3 > tr:
                    if i3 < cind:
                        alf = (ub - Uh[i3]) / (ua - Uh[i3])
                        Qw[i3] = alf * Qw[i3] + (1.0 - alf) * Qw[i3 - 1]
                    if j3 >= lbz:
                        if j3 - tr <= kind - ph + oldr:
                            gam = (ub - Uh[j3 - tr]) / den
                            ebpts[kj] = gam * ebpts[kj] + (1.0 - gam) * ebpts[kj + 1]
                        else:
                            ebpts[kj] = bet * ebpts[kj] + (1.0 - bet) * ebpts[kj + 1]
                    i3 += 1
                    j3 -= 1
                    kj -= 1
                first -= 1
                last += 1
        if a != p:
            for _ in range(ph - oldr):
                Uh[kind] = ua
                kind += 1
        for j in range(lbz, rbz + 1):
            Qw[cind] = ebpts[j]
            cind += 1
        if b < m:
            for j in range(r):
                bpts[j] = Nextbpts[j]
            for j in range(r, p + 1):
                bpts[j] = Pw[b - p + j]
            a = b
            b += 1
            ua = ub
        else:
            for i4 in range(ph + 1):
                Uh[kind + i4] = ub

    nh = mh - ph - 1
    return BSplineCurve(
        ph, KnotVector(Uh[: mh + 1].copy()), Qw[: nh + 1].copy(), periodic=False
    )


def make_curves_compatible(curves: list[BSplineCurve]) -> list[BSplineCurve]:
    """Bring curves to one degree (the max) and one merged knot vector.

    Every output is geometrically identical to its input. All curves must
    share the same parameter domain.
    """
    if not curves:
        return []
    dom = curves[0].domain
    for c in curves[1:]:
        if abs(c.domain[0] - dom[0]) > 1e-12 or abs(c.domain[1] - dom[1]) > 1e-12:
            raise ValueError(
                f"curve domains differ: {c.domain} vs {dom}; normalize the curves first"
            )
    target = max(c.degree for c in curves)
    elevated = [elevate_degree(c, target) for c in curves]
    common = merged_values([c.knots.values for c in elevated])
    out = []
    for c in elevated:
        missing = _missing_knots(c.knots.values, common)
        for u, count in missing:
            c = insert_knot(c, u, count)
        out.append(c)
    return out


def _missing_knots(
    have: np.ndarray, want: np.ndarray, tol: float = 1e-12
) -> list[tuple[float, int]]:
    """Interior knots (value, count) present in `want` but not yet in `have`."""
    out: list[tuple[float, int]] = []
    for u in np.unique(want):
        want_mult = int(np.sum(np.abs(want - u) <= tol))
        have_mult = int(np.sum(np.abs(have - u) <= tol))
        if want_mult > have_mult:
            out.append((float(u), want_mult - have_mult))
    return out


def bezier_segments(curve: BSplineCurve) -> list[tuple[float, float, np.ndarray]]:
    """Decompose into Bezier arcs: (u_start, u_end, control points) per span."""
    c = curve
    lo, hi = c.domain
    for u, mult in c.knots.interior_with_multiplicity(c.degree):
        if mult < c.degree:
            c = insert_knot(c, u, c.degree - mult)
    # clamp ends if needed (unclamped, e.g. periodic, representations)
    if not c.knots.is_clamped(c.degree):
        c = _clamp_ends(c)
    breaks = [lo] + [u for u, _ in c.knots.interior_with_multiplicity(c.degree)] + [hi]
    P = c.control_points
    d = c.degree
    segs = []
    for j in range(len(breaks) - 1):
        segs.append((breaks[j], breaks[j + 1], P[j * d : j * d + d + 1].copy()))
    return segs


def _clamp_ends(curve: BSplineCurve) -> BSplineCurve:
    """Rewrite an unclamped curve as a clamped one over the same domain."""
    lo, hi = curve.domain
    c = curve
    mult_lo = c.knots.multiplicity(lo)
    if mult_lo <= c.degree:
        # raise end multiplicities by inserting at the (interior-like) ends:
        # shrink the domain representation via knot insertion at lo/hi.
        c = _insert_at_end(c, lo, c.degree - mult_lo + 1)
    mult_hi = c.knots.multiplicity(hi)
    if mult_hi <= c.degree:
        c = _insert_at_end(c, hi, c.degree - mult_hi + 1)
    # trim knots and control points outside the domain
    kv = c.knots.values
    lo_idx = int(np.searchsorted(kv, lo, side="left"))
    hi_idx = int(np.searchsorted(kv, hi, side="right"))
    new_kv = kv[lo_idx:hi_idx].copy()
    P = c.control_points[lo_idx : lo_idx + (len(new_kv) - c.degree - 1)]
    return BSplineCurve(c.degree, KnotVector(new_kv), P.copy(), periodic=False)


def _insert_at_end(curve: BSplineCurve, u: float, count: int) -> BSplineCurve:
    """Knot insertion allowing end values for unclamped representations."""
    p = curve.degree
    kv = curve.knots.values
    c = curve
    for _ in range(count):
        kvc = c.knots.values
        s = c.knots.multiplicity(u)
        k = int(np.searchsorted(kvc, u, side="right")) - 1
        P = c.control_points
        new_kv = np.insert(kvc, k + 1, u)
        Q = np.zeros((c.n_ctrl + 1, c.dim))
        Q[: k - p + 1] = P[: k - p + 1]
        Q[k - s + 1:] = P[k - s:]
        for i in range(k - p + 1, k - s + 1):
            alpha = (u - kvc[i]) / (kvc[i + p] - kvc[i])
            Q[i] = alpha * P[i] + (1.0 - alpha) * P[i - 1]
        c = BSplineCurve(p, KnotVector(new_kv), Q, periodic=False)
    return c
