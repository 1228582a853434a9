"""Tensor-product B-spline surfaces.

Directional operations (degree elevation, knot insertion) reuse the curve
algorithms by treating each control-grid direction as a curve whose
"points" are whole rows of the grid.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import basis as _basis
from .curve import BSplineCurve, elevate_degree, insert_knot, _missing_knots
from .errors import DomainError
from .knots import KnotVector, merged_values


@dataclass(frozen=True, eq=False)
class BSplineSurface:
    """Tensor-product surface: two degrees, two knot vectors, control grid (n, m, 3)."""

    degree_u: int
    degree_v: int
    knots_u: KnotVector
    knots_v: KnotVector
    control_grid: np.ndarray

    def __post_init__(self):
        grid = np.array(self.control_grid, dtype=float, copy=True)
        if grid.ndim != 3 or grid.shape[2] != 3:
            raise ValueError(f"control grid must have shape (n, m, 3), got {grid.shape}")
        grid.setflags(write=False)
        object.__setattr__(self, "control_grid", grid)
        n, m = grid.shape[:2]
        if len(self.knots_u) != n + self.degree_u + 1:
            raise ValueError(
                f"u knot count {len(self.knots_u)} inconsistent with {n} rows of degree {self.degree_u}"
            )
        if len(self.knots_v) != m + self.degree_v + 1:
            raise ValueError(
                f"v knot count {len(self.knots_v)} inconsistent with {m} columns of degree {self.degree_v}"
            )
        self.knots_u.domain(self.degree_u)
        self.knots_v.domain(self.degree_v)

    @property
    def shape(self) -> tuple[int, int]:
        return self.control_grid.shape[:2]

    @property
    def domain(self) -> tuple[tuple[float, float], tuple[float, float]]:
        return self.knots_u.domain(self.degree_u), self.knots_v.domain(self.degree_v)

    def evaluate(self, u, v) -> np.ndarray:
        return evaluate_surface(self, u, v)

    def transposed(self) -> "BSplineSurface":
        """Swap the u and v directions."""
        return BSplineSurface(
            self.degree_v,
            self.degree_u,
            self.knots_v,
            self.knots_u,
            np.swapaxes(self.control_grid, 0, 1),
        )

    def isocurve_u(self, v: float) -> BSplineCurve:
        """Curve u -> s(u, v)."""
        kv = self.knots_v.values
        vv = _basis.check_domain(np.array([v]), self.degree_v, kv)
        span = int(_basis.find_spans(vv, self.degree_v, kv)[0])
        vals = _basis.basis_funs(np.array([span]), vv, self.degree_v, kv)[0]
        cols = span - self.degree_v + np.arange(self.degree_v + 1)
        pts = np.einsum("j,njd->nd", vals, self.control_grid[:, cols])
        return BSplineCurve(self.degree_u, self.knots_u, pts)

    def isocurve_v(self, u: float) -> BSplineCurve:
        """Curve v -> s(u, v)."""
        return self.transposed().isocurve_u(u)


def evaluate_surface(surface: BSplineSurface, u, v) -> np.ndarray:
    """Evaluate at scalar (u, v) or paired arrays of parameters."""
    scalar = (np.isscalar(u) or np.ndim(u) == 0) and (np.isscalar(v) or np.ndim(v) == 0)
    uu = np.atleast_1d(np.asarray(u, dtype=float))
    vv = np.atleast_1d(np.asarray(v, dtype=float))
    if uu.size != vv.size:
        raise ValueError("u and v arrays must have equal length")
    ku, kvv = surface.knots_u.values, surface.knots_v.values
    uu = _basis.check_domain(uu, surface.degree_u, ku)
    vv = _basis.check_domain(vv, surface.degree_v, kvv)
    su = _basis.find_spans(uu, surface.degree_u, ku)
    sv = _basis.find_spans(vv, surface.degree_v, kvv)
    bu = _basis.basis_funs(su, uu, surface.degree_u, ku)
    bv = _basis.basis_funs(sv, vv, surface.degree_v, kvv)
    cu = su[:, None] - surface.degree_u + np.arange(surface.degree_u + 1)[None, :]
    cv = sv[:, None] - surface.degree_v + np.arange(surface.degree_v + 1)[None, :]
    # window of the control grid per evaluation point: (m, du+1, dv+1, 3)
    win = surface.control_grid[cu[:, :, None], cv[:, None, :]]
    pts = np.einsum("mi,mj,mijd->md", bu, bv, win)
    return pts[0] if scalar else pts


def evaluate_grid(surface: BSplineSurface, us, vs) -> np.ndarray:
    """Evaluate on the full tensor grid us x vs; returns (len(us), len(vs), 3)."""
    us = np.atleast_1d(np.asarray(us, dtype=float))
    vs = np.atleast_1d(np.asarray(vs, dtype=float))
    Bu = _basis.collocation_matrix(
        _basis.check_domain(us, surface.degree_u, surface.knots_u.values),
        surface.degree_u,
        surface.knots_u.values,
    )
    Bv = _basis.collocation_matrix(
        _basis.check_domain(vs, surface.degree_v, surface.knots_v.values),
        surface.degree_v,
        surface.knots_v.values,
    )
    return np.einsum("ui,vj,ijd->uvd", Bu, Bv, surface.control_grid)


def _map_u_direction(surface: BSplineSurface, fn) -> BSplineSurface:
    """Apply a curve operation along u by flattening the v/coordinate axes."""
    n, m = surface.shape
    flat = surface.control_grid.reshape(n, m * 3)
    pseudo = BSplineCurve(surface.degree_u, surface.knots_u, flat)
    out = fn(pseudo)
    return BSplineSurface(
        out.degree,
        out.knots,
        surface.degree_v,
        surface.knots_v,
        out.control_points.reshape(out.n_ctrl, m, 3),
    ) if False else BSplineSurface(
        degree_u=out.degree,
        degree_v=surface.degree_v,
        knots_u=out.knots,
        knots_v=surface.knots_v,
        control_grid=out.control_points.reshape(out.n_ctrl, m, 3),
    )


def elevate_degree_u(surface: BSplineSurface, target: int) -> BSplineSurface:
    return _map_u_direction(surface, lambda c: elevate_degree(c, target))


def elevate_degree_v(surface: BSplineSurface, target: int) -> BSplineSurface:
    return elevate_degree_u(surface.transposed(), target).transposed()


def insert_knot_u(surface: BSplineSurface, u: float, multiplicity: int = 1) -> BSplineSurface:
    return _map_u_direction(surface, lambda c: insert_knot(c, u, multiplicity))


def insert_knot_v(surface: BSplineSurface, v: float, multiplicity: int = 1) -> BSplineSurface:
    return insert_knot_u(surface.transposed(), v, multiplicity).transposed()


def make_surfaces_compatible(surfaces: list[BSplineSurface]) -> list[BSplineSurface]:
    """Shared degrees (max) and merged knot vectors in both directions."""
    du = max(s.degree_u for s in surfaces)
    dv = max(s.degree_v for s in surfaces)
    out = [elevate_degree_v(elevate_degree_u(s, du), dv) for s in surfaces]
    common_u = merged_values([s.knots_u.values for s in out])
    common_v = merged_values([s.knots_v.values for s in out])
    res = []
    for s in out:
        for u, count in _missing_knots(s.knots_u.values, common_u):
            s = insert_knot_u(s, u, count)
        for v, count in _missing_knots(s.knots_v.values, common_v):
            s = insert_knot_v(s, v, count)
        res.append(s)
    return res
