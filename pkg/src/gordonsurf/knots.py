"""Knot vectors and the standard construction rules used by the kernel."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True, eq=False)
class KnotVector:
    """Nondecreasing knot sequence of a B-spline basis.

    For a curve of degree ``d`` with ``n`` control points the sequence has
    ``n + d + 1`` entries, interior multiplicities at most ``d`` and end
    multiplicities at most ``d + 1`` (exactly ``d + 1`` when clamped).
    """

    values: np.ndarray

    def __post_init__(self):
        arr = np.array(self.values, dtype=float, copy=True)
        if arr.ndim != 1:
            raise ValueError("knot vector must be one-dimensional")
        if arr.size < 2:
            raise ValueError("knot vector needs at least two knots")
        if np.any(np.diff(arr) < 0.0):
            raise ValueError("knot vector must be nondecreasing")
        arr.setflags(write=False)
        object.__setattr__(self, "values", arr)

    def __len__(self) -> int:
        return self.values.size

    def __getitem__(self, i):
        return self.values[i]

    def __eq__(self, other):
        if not isinstance(other, KnotVector):
            return NotImplemented
        return self.values.shape == other.values.shape and bool(
            np.all(self.values == other.values)
        )

    def ctrl_count(self, degree: int) -> int:
        """Number of control points implied by this vector for `degree`."""
        return len(self) - degree - 1

    def domain(self, degree: int) -> tuple[float, float]:
        n = self.ctrl_count(degree)
        if n < degree + 1:
            raise ValueError(
                f"knot vector of length {len(self)} too short for degree {degree}"
            )
        lo, hi = float(self.values[degree]), float(self.values[n])
        if not lo < hi:
            raise ValueError("knot vector has an empty domain")
        return lo, hi

    def multiplicity(self, u: float, tol: float = 0.0) -> int:
        return int(np.sum(np.abs(self.values - u) <= tol))

    def is_clamped(self, degree: int) -> bool:
        v = self.values
        return bool(
            np.all(v[: degree + 1] == v[0]) and np.all(v[-(degree + 1):] == v[-1])
        )

    def distinct(self) -> np.ndarray:
        return np.unique(self.values)

    def interior_with_multiplicity(self, degree: int) -> list[tuple[float, int]]:
        """Distinct interior knots (strictly inside the domain) with counts."""
        lo, hi = self.domain(degree)
        out = []
        for z in self.distinct():
            if lo < z < hi:
                out.append((float(z), self.multiplicity(z)))
        return out


def uniform_clamped(n_ctrl: int, degree: int) -> KnotVector:
    """Clamped knot vector on [0, 1] with uniformly spaced interior knots."""
    if n_ctrl < degree + 1:
        raise ValueError(f"need at least {degree + 1} control points for degree {degree}")
    n_interior = n_ctrl - degree - 1
    interior = np.arange(1, n_interior + 1) / (n_interior + 1)
    return KnotVector(
        np.concatenate([np.zeros(degree + 1), interior, np.ones(degree + 1)])
    )


def averaged(params: np.ndarray, degree: int) -> KnotVector:
    """Knot vector for interpolation at `params` by knot averaging.

    Produces a clamped vector for n = len(params) control points whose
    interior knots are running means of `degree` consecutive parameters,
    which keeps the collocation matrix banded and diagonally dominant.
    """
    params = np.asarray(params, dtype=float)
    n = params.size
    if n < degree + 1:
        raise ValueError(f"need at least {degree + 1} parameters for degree {degree}")
    interior = np.array(
        [params[j : j + degree].mean() for j in range(1, n - degree)]
    )
    return KnotVector(
        np.concatenate(
            [np.full(degree + 1, params[0]), interior, np.full(degree + 1, params[-1])]
        )
    )


def for_approximation(params: np.ndarray, degree: int, n_ctrl: int) -> KnotVector:
    """Clamped knot vector for least-squares fitting with n_ctrl control points.

    Interior knots follow the sample-parameter distribution so every span
    carries roughly the same number of samples.
    """
    params = np.asarray(params, dtype=float)
    m = params.size
    if n_ctrl < degree + 1:
        raise ValueError(f"need at least {degree + 1} control points for degree {degree}")
    if m < n_ctrl:
        raise ValueError("more control points than parameters")
    d = m / (n_ctrl - degree)
    interior = []
    for j in range(1, n_ctrl - degree):
        i = int(j * d)
        alpha = j * d - i
        interior.append((1.0 - alpha) * params[i - 1] + alpha * params[i])
    return KnotVector(
        np.concatenate(
            [np.full(degree + 1, params[0]), interior, np.full(degree + 1, params[-1])]
        )
    )


def merged_values(knot_sets: list[np.ndarray], tol: float = 1e-12) -> np.ndarray:
    """Union of knot values with per-value maximum multiplicity.

    Values closer than `tol` are treated as the same knot; the first
    occurrence wins as the representative.
    """
    reps: list[float] = []
    counts: list[int] = []
    for knots in knot_sets:
        run: dict[int, int] = {}
        for u in np.asarray(knots, dtype=float):
            idx = None
            for i, r in enumerate(reps):
                if abs(u - r) <= tol:
                    idx = i
                    break
            if idx is None:
                reps.append(float(u))
                counts.append(0)
                idx = len(reps) - 1
            run[idx] = run.get(idx, 0) + 1
        for idx, c in run.items():
            counts[idx] = max(counts[idx], c)
    order = np.argsort(reps, kind="stable")
    return np.concatenate([np.full(counts[i], reps[i]) for i in order])
